//! The basis family 𝔾(L), exchange chains, null-sets and the ▽ relation.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::laurent::Coeff;
use crate::matrix::{subsets, HTermTable, Subset, SymbolicMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("the matrix has no nonvanishing maximal minor")]
    RankDeficient,
    #[error("{0} is not a basis")]
    NotABasis(Subset),
    #[error("ill-formed subsets: {0}")]
    IllFormed(String),
}

/// Anything that can answer "is this k-subset a basis".
pub trait BasisFamily {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn contains(&self, s: &Subset) -> bool;
}

impl<C: Coeff> BasisFamily for HTermTable<C> {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn contains(&self, s: &Subset) -> bool {
        self.nonzero(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    k: usize,
    bases: Vec<Subset>,
    index: HashSet<Subset>,
}

/// Structural conditions the pipeline relies on, reported rather than enforced.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MatroidDiagnostics {
    /// Columns in no basis.
    pub null_columns: Vec<usize>,
    /// Pairs (basis, i) with no α making 𝓘^i_α a basis.
    pub stuck_rows: Vec<(Subset, usize)>,
}

impl BasisFamily for Matroid {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn contains(&self, s: &Subset) -> bool {
        self.index.contains(s)
    }
}

impl Matroid {
    pub fn from_bases(n: usize, k: usize, bases: impl IntoIterator<Item = Subset>) -> Result<Self, MatroidError> {
        let set: BTreeSet<Subset> = bases.into_iter().collect();
        if set.is_empty() {
            return Err(MatroidError::RankDeficient);
        }
        if let Some(b) = set.iter().find(|b| !b.is_valid_for(n, k)) {
            return Err(MatroidError::IllFormed(format!("{b} is not a {k}-subset of [{n}]")));
        }
        let bases: Vec<Subset> = set.into_iter().collect();
        let index = bases.iter().cloned().collect();
        Ok(Matroid { n, k, bases, index })
    }

    /// The support of an h-table, which equals 𝔾(L) whenever R is generic.
    pub fn from_table<C: Coeff>(table: &HTermTable<C>) -> Result<Self, MatroidError> {
        Self::from_bases(table.n, table.k, table.support().cloned())
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn first(&self) -> &Subset {
        &self.bases[0]
    }

    pub fn diagnostics(&self) -> MatroidDiagnostics {
        let mut seen = vec![false; self.n + 1];
        for b in &self.bases {
            for &x in b.elems() {
                seen[x] = true;
            }
        }
        let null_columns = (1..=self.n).filter(|&x| !seen[x]).collect();
        let mut stuck_rows = Vec::new();
        for b in &self.bases {
            let comp = b.complement(self.n);
            for &i in b.elems() {
                if !comp.elems().iter().any(|&a| self.contains(&b.swap(i, a))) {
                    stuck_rows.push((b.clone(), i));
                }
            }
        }
        MatroidDiagnostics { null_columns, stuck_rows }
    }

    /// First violation of the basis exchange axiom among the given pairs.
    fn exchange_violation<'a>(
        &self,
        pairs: impl Iterator<Item = (&'a Subset, &'a Subset)>,
        symmetric: bool,
    ) -> Option<(Subset, Subset, usize)> {
        for (h, k) in pairs {
            for &i in h.minus(k).elems() {
                let ok = k.minus(h).elems().iter().any(|&b| {
                    self.contains(&h.swap(i, b)) && (!symmetric || self.contains(&k.swap(b, i)))
                });
                if !ok {
                    return Some((h.clone(), k.clone(), i));
                }
            }
        }
        None
    }

    /// Checks the exchange axiom (and its symmetric form) on all pairs, or on the
    /// first `sample` bases against all others.
    pub fn verify_exchange(&self, symmetric: bool, sample: Option<usize>) -> Option<(Subset, Subset, usize)> {
        let lim = sample.unwrap_or(self.bases.len()).min(self.bases.len());
        let pairs = self.bases[..lim].iter().flat_map(|h| self.bases.iter().map(move |k| (h, k)));
        self.exchange_violation(pairs, symmetric)
    }

    /// A chain H = 𝓛₀, …, 𝓛_r = K inside the family with single exchanges.
    ///
    /// Each step removes the smallest element of 𝓛∖K and adds the smallest admissible
    /// element of K∖𝓛, so r = |H∖K|.
    pub fn exchange_chain(&self, h: &Subset, k: &Subset) -> Result<Vec<Subset>, MatroidError> {
        for s in [h, k] {
            if !self.contains(s) {
                return Err(MatroidError::NotABasis(s.clone()));
            }
        }
        if h == k {
            return Ok(Vec::new());
        }
        let mut chain = vec![h.clone()];
        let mut cur = h.clone();
        while cur != *k {
            let i = cur.minus(k).elems()[0];
            let b = k
                .minus(&cur)
                .elems()
                .iter()
                .copied()
                .find(|&b| self.contains(&cur.swap(i, b)))
                .ok_or_else(|| MatroidError::IllFormed("family violates the exchange axiom".into()))?;
            cur = cur.swap(i, b);
            chain.push(cur.clone());
        }
        Ok(chain)
    }

    /// α ▽ β: some basis exchanges one for the other. Irreflexive by convention.
    pub fn nabla_related(&self, a: usize, b: usize) -> bool {
        self.nabla_witness(a, b).is_some()
    }

    /// A basis 𝓗 with β ∈ 𝓗, α ∉ 𝓗 and 𝓗^β_α a basis, if any.
    pub fn nabla_witness(&self, a: usize, b: usize) -> Option<Subset> {
        if a == b {
            return None;
        }
        self.bases
            .iter()
            .find(|h| h.contains(b) && !h.contains(a) && self.contains(&h.swap(b, a)))
            .cloned()
    }
}

pub fn compute_matroid<C: Coeff>(l: &SymbolicMatrix<C>) -> Result<Matroid, MatroidError> {
    let (n, k) = (l.cols(), l.rows());
    let bases: Vec<Subset> =
        subsets(n, k).filter(|s| !l.maximal_minor(s).expect("sized subset").is_zero()).collect();
    Matroid::from_bases(n, k, bases)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NullSets {
    /// 𝓝_{𝓘;𝓐} ⊆ 𝓘ᶜ.
    pub lower: Subset,
    /// 𝓝^{𝓘;𝓗} ⊆ 𝓘.
    pub upper: Subset,
}

impl NullSets {
    /// (m, ω) ∈ 𝓝(𝓐;𝓗).
    pub fn contains_pair(&self, m: usize, w: usize) -> bool {
        self.lower.contains(w) || self.upper.contains(m)
    }
}

/// 𝓝_{𝓘;𝓐} = {γ ∈ 𝓘ᶜ : h(𝓘^i_γ) = 0 for all i ∈ 𝓐}.
pub fn null_lower<F: BasisFamily + ?Sized>(g: &F, base: &Subset, a: &Subset) -> Subset {
    let comp = base.complement(g.n());
    let v = comp.elems().iter().copied().filter(|&c| a.elems().iter().all(|&i| !g.contains(&base.swap(i, c))));
    Subset::new(v.collect()).expect("subset of a subset")
}

/// 𝓝^{𝓘;𝓗} = {m ∈ 𝓘 : h(𝓘^m_α) = 0 for all α ∈ 𝓗}.
pub fn null_upper<F: BasisFamily + ?Sized>(g: &F, base: &Subset, h: &Subset) -> Subset {
    let v = base.elems().iter().copied().filter(|&m| h.elems().iter().all(|&a| !g.contains(&base.swap(m, a))));
    Subset::new(v.collect()).expect("subset of a subset")
}

pub fn null_sets<F: BasisFamily + ?Sized>(
    g: &F,
    base: &Subset,
    a: &Subset,
    h: &Subset,
) -> Result<NullSets, MatroidError> {
    if !g.contains(base) {
        return Err(MatroidError::NotABasis(base.clone()));
    }
    if !a.is_subset_of(base) || !h.intersect(base).is_empty() || h.max().is_some_and(|m| m > g.n()) {
        return Err(MatroidError::IllFormed(format!("A={a} must lie in {base}, H={h} outside it")));
    }
    Ok(NullSets { lower: null_lower(g, base, a), upper: null_upper(g, base, h) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Rational;

    fn l_ex() -> SymbolicMatrix<Rational> {
        SymbolicMatrix::from_i64(
            1,
            &[vec![1, 0, 0, 0, 1, 1, 3], vec![0, 1, 0, 0, 2, 2, 4], vec![0, 0, 1, 1, 4, 5, 0]],
        )
    }

    fn l0(k: usize) -> SymbolicMatrix<Rational> {
        SymbolicMatrix::from_fn(k, 2 * k, 1, |r, c| crate::LaurentPoly::from_i64(1, (c % k == r) as i64))
    }

    #[test]
    fn principal_pattern_has_one_of_each_pair() {
        let g = compute_matroid(&l0(3)).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.bases().iter().all(|b| (1..=3).all(|i| b.contains(i) != b.contains(i + 3))));
        let chain = g.exchange_chain(&Subset::of(&[1, 2, 3]), &Subset::of(&[4, 5, 6])).unwrap();
        assert_eq!(chain.len(), 4);
        assert!(g.nabla_related(1, 4));
        assert!(!g.nabla_related(1, 2));
        assert!(!g.nabla_related(2, 2));
    }

    #[test]
    fn example_null_sets() {
        let g = compute_matroid(&l_ex()).unwrap();
        let base = Subset::of(&[1, 2, 3]);
        assert!(g.contains(&base) && !g.contains(&Subset::of(&[2, 3, 4])));
        let ns = null_sets(&g, &base, &Subset::of(&[1, 2]), &Subset::empty()).unwrap();
        assert_eq!(ns.lower, Subset::of(&[4]));
        let ns = null_sets(&g, &base, &Subset::empty(), &Subset::empty()).unwrap();
        assert_eq!(ns.lower, Subset::of(&[4, 5, 6, 7]));
        assert!(g.verify_exchange(true, None).is_none());
    }

    #[test]
    fn chain_edge_cases() {
        let g = compute_matroid(&l_ex()).unwrap();
        let a = Subset::of(&[1, 2, 3]);
        assert!(g.exchange_chain(&a, &a).unwrap().is_empty());
        let b = Subset::of(&[1, 2, 5]);
        assert_eq!(g.exchange_chain(&a, &b).unwrap(), vec![a.clone(), b]);
        assert!(g.exchange_chain(&a, &Subset::of(&[2, 3, 4])).is_err());
    }
}
