//! Symbolic matrices, maximal minors and the h-term table of a factorization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::laurent::{Coeff, ExpVec, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected a subset of size {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("invalid exchange: {0}")]
    InvalidExchange(String),
}

/// A strictly increasing set of 1-based column labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn new(mut v: Vec<usize>) -> Result<Self, MatrixError> {
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(MatrixError::InvalidSubset(format!("repeated label in {v:?}")));
        }
        if v.first() == Some(&0) {
            return Err(MatrixError::InvalidSubset("labels are 1-based".into()));
        }
        Ok(Subset(v))
    }

    /// Panicking constructor for literals in code and tests.
    pub fn of(v: &[usize]) -> Self {
        Self::new(v.to_vec()).expect("valid subset literal")
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        Subset((lo..=hi).collect())
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    pub fn elems(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// 0-based position of `x` inside the subset.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn complement(&self, n: usize) -> Subset {
        Subset((1..=n).filter(|x| !self.contains(*x)).collect())
    }

    pub fn union(&self, o: &Subset) -> Subset {
        Subset(self.0.iter().chain(&o.0).copied().sorted().dedup().collect())
    }

    pub fn minus(&self, o: &Subset) -> Subset {
        Subset(self.0.iter().filter(|x| !o.contains(**x)).copied().collect())
    }

    pub fn intersect(&self, o: &Subset) -> Subset {
        Subset(self.0.iter().filter(|x| o.contains(**x)).copied().collect())
    }

    pub fn symdiff(&self, o: &Subset) -> Subset {
        self.minus(o).union(&o.minus(self))
    }

    pub fn is_subset_of(&self, o: &Subset) -> bool {
        self.0.iter().all(|x| o.contains(*x))
    }

    /// The exchanged set 𝓘^{removed}_{added}.
    pub fn exchange(&self, removed: &[usize], added: &[usize]) -> Result<Subset, MatrixError> {
        if removed.len() != added.len() {
            return Err(MatrixError::InvalidExchange("unequal exchange sizes".into()));
        }
        let r = Subset::new(removed.to_vec())?;
        let a = Subset::new(added.to_vec())?;
        if !r.is_subset_of(self) || !a.intersect(self).is_empty() {
            return Err(MatrixError::InvalidExchange(format!(
                "{self}: remove {removed:?}, add {added:?}"
            )));
        }
        Ok(self.minus(&r).union(&a))
    }

    /// Single exchange 𝓘^i_α, assuming `i ∈ 𝓘` and `α ∉ 𝓘`.
    pub fn swap(&self, i: usize, alpha: usize) -> Subset {
        self.exchange(&[i], &[alpha]).expect("admissible single exchange")
    }

    pub fn is_valid_for(&self, n: usize, k: usize) -> bool {
        self.len() == k && self.max().is_none_or(|m| m <= n)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// All k-subsets of [n] in lexicographic order.
pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = Subset> {
    (1..=n).combinations(k).map(Subset)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A dense matrix of Laurent polynomials sharing one variable context.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolicMatrix<C> {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<LaurentPoly<C>>,
}

impl<C: Coeff> SymbolicMatrix<C> {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        SymbolicMatrix { rows, cols, nvars, data: vec![LaurentPoly::zero(nvars); rows * cols] }
    }

    pub fn identity(k: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(k, k, nvars);
        for i in 0..k {
            m.set(i, i, LaurentPoly::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<LaurentPoly<C>>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|p| p.nvars() != nvars) {
            return Err(MatrixError::DimensionMismatch("entry with a different variable count".into()));
        }
        Ok(SymbolicMatrix { rows: r, cols: c, nvars, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(nvars: usize, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| LaurentPoly::from_i64(nvars, v)).collect())
            .collect();
        Self::from_rows(nvars, rows).expect("rectangular literal")
    }

    pub fn from_fn(rows: usize, cols: usize, nvars: usize, f: impl Fn(usize, usize) -> LaurentPoly<C>) -> Self {
        let data = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect();
        SymbolicMatrix { rows, cols, nvars, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// 0-based entry access.
    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly<C> {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentPoly<C>) {
        assert_eq!(v.nvars(), self.nvars);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[LaurentPoly<C>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly<C>>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.nvars, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, MatrixError> {
        if self.cols != o.rows || self.nvars != o.nvars {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Self::from_fn(self.rows, o.cols, self.nvars, |r, c| {
            (0..self.cols).fold(LaurentPoly::zero(self.nvars), |acc, m| &acc + &(self.get(r, m) * o.get(m, c)))
        }))
    }

    /// Submatrix on 0-based row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), self.nvars, |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn map_entries(&self, f: impl Fn(usize, usize, &LaurentPoly<C>) -> LaurentPoly<C>) -> Self {
        Self::from_fn(self.rows, self.cols, self.nvars, |r, c| f(r, c, self.get(r, c)))
    }

    /// Multiplies column `c` by `d[c]` (right multiplication by a diagonal).
    pub fn scale_columns(&self, d: &[LaurentPoly<C>]) -> Self {
        assert_eq!(d.len(), self.cols);
        self.map_entries(|_, c, v| v * &d[c])
    }

    /// Multiplies row `r` by `d[r]` (left multiplication by a diagonal).
    pub fn scale_rows(&self, d: &[LaurentPoly<C>]) -> Self {
        assert_eq!(d.len(), self.rows);
        self.map_entries(|r, _, v| &d[r] * v)
    }

    pub fn eval_one(&self) -> Self {
        self.map_entries(|_, _, v| LaurentPoly::constant(self.nvars, v.eval_one()))
    }

    /// The rank of the matrix, taking the maximal-minor size k = min(rows, cols).
    pub fn k(&self) -> usize {
        self.rows.min(self.cols)
    }

    /// The long side n = max(rows, cols).
    pub fn n(&self) -> usize {
        self.rows.max(self.cols)
    }

    pub fn det(&self) -> Result<LaurentPoly<C>, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        Ok(det_square(self.rows, self.nvars, |r, c| self.get(r, c).clone()))
    }

    /// Δ_M(s): the maximal minor on the labels in `s`.
    ///
    /// A wide matrix (k×n) selects columns, a tall one (n×k) selects rows; labels are
    /// taken in increasing order.
    pub fn maximal_minor(&self, s: &Subset) -> Result<LaurentPoly<C>, MatrixError> {
        let k = self.k();
        if s.len() != k {
            return Err(MatrixError::SizeMismatch { expected: k, got: s.len() });
        }
        if s.max().is_some_and(|m| m > self.n()) {
            return Err(MatrixError::InvalidSubset(format!("{s} exceeds {}", self.n())));
        }
        let idx: Vec<usize> = s.elems().iter().map(|x| x - 1).collect();
        Ok(if self.rows <= self.cols {
            det_square(k, self.nvars, |r, c| self.get(r, idx[c]).clone())
        } else {
            det_square(k, self.nvars, |r, c| self.get(idx[r], c).clone())
        })
    }
}

impl<C: Coeff> fmt::Debug for HTermTable<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(s, p)| (s, p.to_string()))).finish()
    }
}

impl<C: Coeff> fmt::Debug for SymbolicMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymbolicMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r).iter().map(|p| p.to_string()).join(", "))?;
        }
        write!(f, "]")
    }
}

fn det_square<C: Coeff>(k: usize, nvars: usize, at: impl Fn(usize, usize) -> LaurentPoly<C>) -> LaurentPoly<C> {
    match k {
        0 => LaurentPoly::one(nvars),
        1 => at(0, 0),
        2 => &(&at(0, 0) * &at(1, 1)) - &(&at(0, 1) * &at(1, 0)),
        3 => {
            let m: Vec<Vec<_>> = (0..3).map(|r| (0..3).map(|c| at(r, c)).collect()).collect();
            let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
            &(&(&m[0][0] * &minor(1, 2)) - &(&m[0][1] * &minor(0, 2))) + &(&m[0][2] * &minor(0, 1))
        }
        _ => {
            let m = (0..k).map(|r| (0..k).map(|c| at(r, c)).collect()).collect();
            bareiss(m, nvars)
        }
    }
}

/// Fraction-free Gaussian elimination; every division is exact in the Laurent ring.
pub fn bareiss<C: Coeff>(mut m: Vec<Vec<LaurentPoly<C>>>, nvars: usize) -> LaurentPoly<C> {
    let k = m.len();
    let mut sign_flip = false;
    let mut prev = LaurentPoly::one(nvars);
    for p in 0..k {
        if m[p][p].is_zero() {
            match (p + 1..k).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    sign_flip = !sign_flip;
                }
                None => return LaurentPoly::zero(nvars),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let num = &(&m[i][j] * &m[p][p]) - &(&m[i][p] * &m[p][j]);
                m[i][j] = num.divide_exact(&prev).expect("Bareiss quotients are exact");
            }
            m[i][p] = LaurentPoly::zero(nvars);
        }
        prev = m[p][p].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Determinant by Laplace expansion along the first row, memoized on column sets.
pub fn det_laplace<C: Coeff>(m: &SymbolicMatrix<C>) -> LaurentPoly<C> {
    fn go<C: Coeff>(
        m: &SymbolicMatrix<C>,
        row: usize,
        cols: &[usize],
        memo: &mut HashMap<Vec<usize>, LaurentPoly<C>>,
    ) -> LaurentPoly<C> {
        if cols.is_empty() {
            return LaurentPoly::one(m.nvars());
        }
        if let Some(v) = memo.get(cols) {
            return v.clone();
        }
        let mut acc = LaurentPoly::zero(m.nvars());
        for (p, &c) in cols.iter().enumerate() {
            let e = m.get(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e * &go(m, row + 1, &rest, memo);
            acc = if p % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        memo.insert(cols.to_vec(), acc.clone());
        acc
    }
    assert_eq!(m.rows(), m.cols(), "Laplace expansion needs a square matrix");
    go(m, 0, &(0..m.cols()).collect::<Vec<_>>(), &mut HashMap::new())
}

/// Default cap on C(n,k) below which all maximal minors are precomputed.
pub const DEFAULT_MINOR_CAP: u128 = 200_000;

/// Maximal minors of one matrix: a full table when small enough, otherwise memoized on demand.
pub struct MinorCache<C: Coeff> {
    matrix: SymbolicMatrix<C>,
    memo: Mutex<HashMap<Subset, LaurentPoly<C>>>,
    full: bool,
}

impl<C: Coeff> MinorCache<C> {
    pub fn new(matrix: SymbolicMatrix<C>, cap: u128) -> Self {
        let (n, k) = (matrix.n(), matrix.k());
        let full = binomial(n, k) <= cap;
        let memo = if full {
            let all: Vec<Subset> = subsets(n, k).collect();
            all.into_par_iter()
                .map(|s| {
                    let v = matrix.maximal_minor(&s).expect("sized subset");
                    (s, v)
                })
                .collect()
        } else {
            HashMap::new()
        };
        MinorCache { matrix, memo: Mutex::new(memo), full }
    }

    pub fn matrix(&self) -> &SymbolicMatrix<C> {
        &self.matrix
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn get(&self, s: &Subset) -> LaurentPoly<C> {
        if let Some(v) = self.memo.lock().unwrap().get(s) {
            return v.clone();
        }
        let v = self.matrix.maximal_minor(s).expect("sized subset");
        self.memo.lock().unwrap().insert(s.clone(), v.clone());
        v
    }
}

/// h(𝓘) = Δ_L(𝓘)·Δ_R(𝓘) for every 𝓘 with nonzero product, plus values at t = 1.
#[derive(Clone, PartialEq, Eq)]
pub struct HTermTable<C> {
    pub k: usize,
    pub n: usize,
    pub nvars: usize,
    entries: BTreeMap<Subset, LaurentPoly<C>>,
    at_one: BTreeMap<Subset, C>,
}

impl<C: Coeff> HTermTable<C> {
    pub fn from_entries(k: usize, n: usize, nvars: usize, entries: BTreeMap<Subset, LaurentPoly<C>>) -> Self {
        let entries: BTreeMap<_, _> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let at_one = entries.iter().map(|(s, v)| (s.clone(), v.eval_one())).collect();
        HTermTable { k, n, nvars, entries, at_one }
    }

    pub fn get(&self, s: &Subset) -> Option<&LaurentPoly<C>> {
        self.entries.get(s)
    }

    /// h(s), or zero when absent.
    pub fn h(&self, s: &Subset) -> LaurentPoly<C> {
        self.entries.get(s).cloned().unwrap_or_else(|| LaurentPoly::zero(self.nvars))
    }

    pub fn nonzero(&self, s: &Subset) -> bool {
        self.entries.contains_key(s)
    }

    pub fn at_one(&self, s: &Subset) -> Option<&C> {
        self.at_one.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Subset, &LaurentPoly<C>)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Subset> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The exponent Ψ(𝓘) when h(𝓘) is a monomial.
    pub fn psi(&self, s: &Subset) -> Option<ExpVec> {
        self.entries.get(s).and_then(|p| p.unit_exponent())
    }
}

fn check_pair<C: Coeff>(l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>) -> Result<(usize, usize), MatrixError> {
    let (k, n) = (l.rows(), l.cols());
    if r.rows() != n || r.cols() != k || k > n {
        return Err(MatrixError::DimensionMismatch(format!(
            "L is {}x{}, R is {}x{}; expected k x n and n x k",
            l.rows(),
            l.cols(),
            r.rows(),
            r.cols()
        )));
    }
    if l.nvars() != r.nvars() {
        return Err(MatrixError::DimensionMismatch("factors use different variable counts".into()));
    }
    Ok((k, n))
}

pub fn h_table<C: Coeff>(l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>) -> Result<HTermTable<C>, MatrixError> {
    let (k, n) = check_pair(l, r)?;
    let all: Vec<Subset> = subsets(n, k).collect();
    let entries = all
        .into_par_iter()
        .filter_map(|s| {
            let dl = l.maximal_minor(&s).expect("sized subset");
            if dl.is_zero() {
                return None;
            }
            let h = &dl * &r.maximal_minor(&s).expect("sized subset");
            (!h.is_zero()).then_some((s, h))
        })
        .collect();
    Ok(HTermTable::from_entries(k, n, l.nvars(), entries))
}

/// Exact check of det(L·R) = Σ_𝓘 Δ_L(𝓘)·Δ_R(𝓘).
pub fn cauchy_binet_check<C: Coeff>(l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>) -> Result<bool, MatrixError> {
    let (k, n) = check_pair(l, r)?;
    let lhs = l.mul(r)?.det()?;
    let rhs = subsets(n, k).fold(LaurentPoly::zero(l.nvars()), |acc, s| {
        &acc + &(&l.maximal_minor(&s).unwrap() * &r.maximal_minor(&s).unwrap())
    });
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialVerdict {
    pub is_monomial: bool,
    pub degree: Option<ExpVec>,
}

pub fn monomiality_report<C: Coeff>(table: &HTermTable<C>) -> BTreeMap<Subset, MonomialVerdict> {
    table
        .iter()
        .map(|(s, h)| {
            let degree = h.unit_exponent();
            (s.clone(), MonomialVerdict { is_monomial: degree.is_some(), degree })
        })
        .collect()
}

pub fn is_monomial_table<C: Coeff>(table: &HTermTable<C>) -> bool {
    table.iter().all(|(_, h)| h.is_unit())
}

/// Subsets whose R-minor vanishes identically or at t = 1.
pub fn genericity_failures<C: Coeff>(r: &SymbolicMatrix<C>) -> Vec<Subset> {
    let all: Vec<Subset> = subsets(r.n(), r.k()).collect();
    let mut bad: Vec<Subset> = all
        .into_par_iter()
        .filter(|s| {
            let m = r.maximal_minor(s).expect("sized subset");
            m.is_zero() || m.eval_one().is_zero()
        })
        .collect();
    bad.sort();
    bad
}

pub fn genericity_check<C: Coeff>(r: &SymbolicMatrix<C>) -> bool {
    genericity_failures(r).is_empty()
}

fn sgn(x: i64) -> i8 {
    x.signum() as i8
}

/// Signs (c₁, c₂) of the three-term Grassmann–Plücker relation
/// Δ(𝓘)Δ(𝓘^{ij}_{αβ}) = c₁Δ(𝓘^i_α)Δ(𝓘^j_β) + c₂Δ(𝓘^i_β)Δ(𝓘^j_α).
pub fn plucker_signs(i: usize, j: usize, alpha: usize, beta: usize) -> (i8, i8) {
    let (i, j, a, b) = (i as i64, j as i64, alpha as i64, beta as i64);
    let c1 = sgn(i - j) * sgn(a - b) * sgn(i - b) * sgn(a - j);
    let c2 = sgn(i - j) * sgn(a - b) * sgn(i - a) * sgn(j - b);
    (c1, c2)
}

/// Evaluates both sides of the three-term relation for one admissible choice.
pub fn grassmann_plucker_holds<C: Coeff>(
    m: &SymbolicMatrix<C>,
    s: &Subset,
    i: usize,
    j: usize,
    alpha: usize,
    beta: usize,
) -> Result<bool, MatrixError> {
    let d = |x: &Subset| m.maximal_minor(x);
    let (c1, c2) = plucker_signs(i, j, alpha, beta);
    let lhs = &d(s)? * &d(&s.exchange(&[i, j], &[alpha, beta])?)?;
    let t1 = &d(&s.swap(i, alpha))? * &d(&s.swap(j, beta))?;
    let t2 = &d(&s.swap(i, beta))? * &d(&s.swap(j, alpha))?;
    let rhs = &t1.scale(&C::from_i64(c1 as i64)) + &t2.scale(&C::from_i64(c2 as i64));
    Ok(lhs == rhs)
}

/// Gauge action of a diagonal D: (L, R) ↦ (L·D⁻¹, D·R). Entries of `d` must be units.
pub fn gauge<C: Coeff>(
    l: &SymbolicMatrix<C>,
    r: &SymbolicMatrix<C>,
    d: &[LaurentPoly<C>],
) -> Option<(SymbolicMatrix<C>, SymbolicMatrix<C>)> {
    let inv: Option<Vec<_>> = d.iter().map(|x| x.unit_inverse()).collect();
    Some((l.scale_columns(&inv?), r.scale_rows(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Rational;

    type M = SymbolicMatrix<Rational>;

    fn l_ex() -> M {
        M::from_i64(
            1,
            &[vec![1, 0, 0, 0, 1, 1, 3], vec![0, 1, 0, 0, 2, 2, 4], vec![0, 0, 1, 1, 4, 5, 0]],
        )
    }

    #[test]
    fn example_minors() {
        let l = l_ex();
        assert_eq!(l.maximal_minor(&Subset::of(&[1, 2, 3])).unwrap(), LaurentPoly::one(1));
        assert!(l.maximal_minor(&Subset::of(&[3, 5, 6])).unwrap().is_zero());
        assert!(matches!(l.maximal_minor(&Subset::of(&[1, 2])), Err(MatrixError::SizeMismatch { .. })));
    }

    #[test]
    fn subset_algebra() {
        let s = Subset::of(&[1, 3, 5]);
        assert_eq!(s.complement(6), Subset::of(&[2, 4, 6]));
        assert_eq!(s.exchange(&[1, 5], &[2, 6]).unwrap(), Subset::of(&[2, 3, 6]));
        assert!(s.exchange(&[2], &[4]).is_err());
        assert_eq!(subsets(5, 2).count(), 10);
        assert_eq!(binomial(13, 5), 1287);
        assert_eq!(s.symdiff(&Subset::of(&[1, 2, 3])), Subset::of(&[2, 5]));
    }

    #[test]
    fn plucker_signs_on_two_by_four() {
        // Δ12Δ34 = Δ13Δ24 − Δ14Δ23 with 𝓘 = {1,2} exchanging 1→3, 2→4 ... (i,j,α,β)=(2,1,3,4)
        let (c1, c2) = plucker_signs(2, 1, 3, 4);
        let m = M::from_i64(1, &[vec![1, 2, 3, 5], vec![7, 11, 13, 17]]);
        assert!(grassmann_plucker_holds(&m, &Subset::of(&[1, 2]), 2, 1, 3, 4).unwrap());
        assert_eq!((c1.abs(), c2.abs()), (1, 1));
    }

    #[test]
    fn square_and_identity_cases() {
        let l = M::from_i64(1, &[vec![2, 1], vec![1, 3]]);
        let r = M::from_i64(1, &[vec![1, 4], vec![0, 2]]);
        assert!(cauchy_binet_check(&l, &r).unwrap());
        let l = M::from_i64(1, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert!(cauchy_binet_check(&l, &l.transpose()).unwrap());
        assert_eq!(h_table(&l, &l.transpose()).unwrap().len(), 1);
    }

    #[test]
    fn genericity_detects_equal_rows() {
        let r = M::from_i64(1, &[vec![1, 2], vec![1, 2], vec![3, 1]]);
        assert_eq!(genericity_failures(&r), vec![Subset::of(&[1, 2])]);
    }

    #[test]
    fn bareiss_matches_laplace_on_a_fixed_case() {
        let t = LaurentPoly::<Rational>::var(1, 0, 1);
        let m = M::from_fn(5, 5, 1, |r, c| {
            &LaurentPoly::from_i64(1, ((r * 7 + c * 3) % 5) as i64 - 2) + &t.pow((r as i64 - c as i64) % 2).unwrap()
        });
        assert_eq!(m.det().unwrap(), det_laplace(&m));
    }
}
