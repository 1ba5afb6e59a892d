//! Integrability of observable sets and bases, ψ reconstruction, and the rigidity verdict.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::keys::{chi, find_nonplanar_key, rectangles, KeyRecord};
use crate::laurent::{Coeff, ExpVec};
use crate::matrix::{
    binomial, genericity_failures, h_table, HTermTable, MatrixError, MinorCache, Subset, SymbolicMatrix,
    DEFAULT_MINOR_CAP,
};
use crate::matroid::{compute_matroid, BasisFamily, Matroid};
use crate::yterms::y_value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegrabilityError {
    #[error("rectangle is not observable")]
    NotObservable,
    #[error("{0} is not a basis")]
    NotABasis(Subset),
    #[error("h({0}) is not a monomial")]
    NotMonomial(Subset),
    #[error("no basis witnesses {0} ▽ {1}")]
    NoWitness(usize, usize),
    #[error("ψ₂({a};{b}) differs between witnesses {} and {}", first.0, second.0)]
    InconsistentWitness { a: usize, b: usize, first: (Subset, ExpVec), second: (Subset, ExpVec) },
    #[error("closed path {cycle:?} has nonzero ψ̄₂ = {residual}")]
    PathInconsistency { cycle: Vec<usize>, residual: ExpVec },
    #[error("the basis family is empty")]
    NoBasisAnchor,
    #[error("reconstructed ψ fails on basis {0}")]
    Validation(Subset),
}

/// Ψ(χ∖{0}): all exponents occurring in the nonzero products of χ.
pub fn exponent_set<C: Coeff>(
    table: &HTermTable<C>,
    basis: &Subset,
    rows: (usize, usize),
    cols: (usize, usize),
) -> BTreeSet<ExpVec> {
    chi(table, basis, rows, cols).iter().flat_map(|p| p.exponent_map()).collect()
}

/// An observable set is integrable when its nonzero products share a single exponent.
pub fn observable_set_integrable<C: Coeff>(
    table: &HTermTable<C>,
    basis: &Subset,
    rows: (usize, usize),
    cols: (usize, usize),
) -> Result<bool, IntegrabilityError> {
    let e = exponent_set(table, basis, rows, cols);
    if e.is_empty() {
        return Err(IntegrabilityError::NotObservable);
    }
    Ok(e.len() == 1)
}

/// A rectangle whose χ carries two or more exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RectangleWitness {
    pub basis: Subset,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub exponents: Vec<ExpVec>,
}

/// Every non-integrable rectangle of a basis, in scan order.
pub fn basis_witnesses<C: Coeff>(table: &HTermTable<C>, basis: &Subset) -> Vec<RectangleWitness> {
    rectangles(basis, table.n)
        .filter_map(|(rows, cols)| {
            let e = exponent_set(table, basis, rows, cols);
            (e.len() > 1).then(|| RectangleWitness { basis: basis.clone(), rows, cols, exponents: e.into_iter().collect() })
        })
        .collect()
}

pub fn basis_integrable<C: Coeff, F: BasisFamily + ?Sized>(
    table: &HTermTable<C>,
    g: &F,
    basis: &Subset,
) -> Result<bool, IntegrabilityError> {
    if !g.contains(basis) {
        return Err(IntegrabilityError::NotABasis(basis.clone()));
    }
    Ok(rectangles(basis, table.n).all(|(rows, cols)| exponent_set(table, basis, rows, cols).len() <= 1))
}

/// The lexicographically first integrable basis.
pub fn find_integrable_basis<C: Coeff>(table: &HTermTable<C>, g: &Matroid) -> Option<Subset> {
    g.bases().iter().find(|b| basis_integrable(table, g, b).unwrap_or(false)).cloned()
}

fn psi_of<C: Coeff>(table: &HTermTable<C>, s: &Subset) -> Result<ExpVec, IntegrabilityError> {
    table.psi(s).ok_or_else(|| IntegrabilityError::NotMonomial(s.clone()))
}

/// Above this many k-subsets ψ₂ is cross-checked on a sample of witnesses only.
pub const EXHAUSTIVE_WITNESS_LIMIT: u128 = 5000;
pub const SAMPLED_WITNESSES: usize = 16;

/// Every basis 𝓙 with α ∈ 𝓙 ∌ β and 𝓙^α_β a basis, plus the reversed orientation.
fn psi2_witnesses(g: &Matroid, a: usize, b: usize) -> Vec<(Subset, bool)> {
    g.bases()
        .iter()
        .filter_map(|j| {
            if j.contains(a) && !j.contains(b) && g.contains(&j.swap(a, b)) {
                Some((j.clone(), true))
            } else if j.contains(b) && !j.contains(a) && g.contains(&j.swap(b, a)) {
                Some((j.clone(), false))
            } else {
                None
            }
        })
        .collect()
}

/// ψ₂(α;β) = Ψ(h(𝓙)⁻¹·h(𝓙^α_β)), checked for agreement across witnesses.
pub fn psi2<C: Coeff>(table: &HTermTable<C>, g: &Matroid, a: usize, b: usize) -> Result<ExpVec, IntegrabilityError> {
    let mut w = psi2_witnesses(g, a, b);
    if w.is_empty() {
        return Err(IntegrabilityError::NoWitness(a, b));
    }
    if binomial(table.n, table.k) > EXHAUSTIVE_WITNESS_LIMIT && w.len() > SAMPLED_WITNESSES {
        let mut rng = ChaCha8Rng::seed_from_u64(((a as u64) << 32) | b as u64);
        let first = w[0].clone();
        w = w.choose_multiple(&mut rng, SAMPLED_WITNESSES).cloned().collect();
        w.push(first);
    }
    let value = |(j, forward): &(Subset, bool)| -> Result<ExpVec, IntegrabilityError> {
        let base = psi_of(table, j)?;
        Ok(if *forward {
            psi_of(table, &j.swap(a, b))?.sub(&base)
        } else {
            base.sub(&psi_of(table, &j.swap(b, a))?)
        })
    };
    let v0 = value(&w[0])?;
    for x in &w[1..] {
        let v = value(x)?;
        if v != v0 {
            return Err(IntegrabilityError::InconsistentWitness {
                a,
                b,
                first: (w[0].0.clone(), v0),
                second: (x.0.clone(), v),
            });
        }
    }
    Ok(v0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiSolution {
    /// ψ(α) for α = 1..=n, stored at index α−1.
    pub psi: Vec<ExpVec>,
    pub m0: ExpVec,
    pub anchor: Subset,
    /// Classes of the transitive closure of ▽ on the anchor, each sorted; the first element is the representative.
    pub classes: Vec<Vec<usize>>,
    /// ψ₂(i;α) on every edge of the anchor's exchange graph.
    pub edges: Vec<(usize, usize, ExpVec)>,
}

impl PsiSolution {
    pub fn psi_at(&self, a: usize) -> &ExpVec {
        &self.psi[a - 1]
    }

    /// m₀ + Σ_{α∈𝓘} ψ(α).
    pub fn predict(&self, s: &Subset) -> ExpVec {
        s.elems().iter().fold(self.m0.clone(), |acc, &a| acc.add(self.psi_at(a)))
    }
}

fn tree_path(parent: &[usize], mut v: usize) -> Vec<usize> {
    let mut p = vec![v];
    while parent[v] != v {
        v = parent[v];
        p.push(v);
    }
    p.reverse();
    p
}

/// Builds ψ and m₀ on the lexicographically smallest basis and validates them on every basis.
pub fn reconstruct_psi<C: Coeff>(table: &HTermTable<C>, g: &Matroid) -> Result<PsiSolution, IntegrabilityError> {
    if g.is_empty() {
        return Err(IntegrabilityError::NoBasisAnchor);
    }
    let n = table.n;
    let anchor = g.first().clone();
    let zero = ExpVec::zero(table.nvars);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &i in anchor.elems() {
        for &a in anchor.complement(n).elems() {
            if g.contains(&anchor.swap(i, a)) {
                adj[i].push(a);
                adj[a].push(i);
            }
        }
    }
    let mut psi: Vec<Option<ExpVec>> = vec![None; n + 1];
    let mut parent: Vec<usize> = (0..=n).collect();
    let mut classes = Vec::new();
    let mut edges = Vec::new();
    let mut edge_value: BTreeMap<(usize, usize), ExpVec> = BTreeMap::new();
    let mut delta = |u: usize, v: usize| -> Result<ExpVec, IntegrabilityError> {
        if let Some(e) = edge_value.get(&(u, v)) {
            return Ok(e.clone());
        }
        let e = psi2(table, g, u, v)?;
        edge_value.insert((v, u), e.neg());
        edge_value.insert((u, v), e.clone());
        Ok(e)
    };
    for rep in 1..=n {
        if psi[rep].is_some() {
            continue;
        }
        psi[rep] = Some(zero.clone());
        let mut class = vec![rep];
        let mut queue = VecDeque::from([rep]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let d = delta(u, v)?;
                let pu = psi[u].clone().expect("visited");
                match &psi[v] {
                    None => {
                        psi[v] = Some(pu.add(&d));
                        parent[v] = u;
                        class.push(v);
                        queue.push_back(v);
                    }
                    Some(pv) => {
                        let residual = pu.add(&d).sub(pv);
                        if !residual.is_zero() {
                            let mut cycle = tree_path(&parent, u);
                            let mut back = tree_path(&parent, v);
                            back.reverse();
                            cycle.extend(back);
                            return Err(IntegrabilityError::PathInconsistency { cycle, residual });
                        }
                    }
                }
                if anchor.contains(u) {
                    edges.push((u, v, d));
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    let psi: Vec<ExpVec> = psi.into_iter().skip(1).map(|p| p.expect("every column visited")).collect();
    let m0 = anchor.elems().iter().fold(psi_of(table, &anchor)?, |acc, &i| acc.sub(&psi[i - 1]));
    edges.sort();
    let sol = PsiSolution { psi, m0, anchor, classes, edges };
    for b in g.bases() {
        if psi_of(table, b)? != sol.predict(b) {
            return Err(IntegrabilityError::Validation(b.clone()));
        }
    }
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Rigid,
    NonIntegrableWitness,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Rigid => 0,
            Verdict::NonIntegrableWitness => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AssumptionFlags {
    /// Every column lies in some basis.
    pub no_null_columns: bool,
    /// Every (𝓘, i) admits an α with 𝓘^i_α a basis.
    pub no_stuck_rows: bool,
    /// max{n−k, k} ≥ 5.
    pub dimension: bool,
    /// R has no vanishing maximal minor, neither identically nor at t = 1.
    pub genericity: bool,
    pub nonplanar_key: bool,
    /// Some g, κ₁ ≠ κ₂ with h(𝓘^g_{κ₁})h(𝓘^g_{κ₂}) ≠ 0 on the anchor basis.
    pub weak_pair: bool,
    /// The dual condition with two rows and one column.
    pub weak_pair_dual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Rectangle {
        #[serde(flatten)]
        rect: RectangleWitness,
        /// Y on the rectangle, from R.
        y_term: Option<String>,
        y_constant: Option<bool>,
    },
    Path { cycle: Vec<usize>, residual: ExpVec },
    InconsistentWitness { a: usize, b: usize, first: (Subset, ExpVec), second: (Subset, ExpVec) },
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisVerdict {
    pub basis: Subset,
    pub integrable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub verdict: Verdict,
    pub k: usize,
    pub n: usize,
    pub bases: usize,
    pub monomial: bool,
    pub non_monomial: Vec<Subset>,
    pub genericity_failures: Vec<Subset>,
    pub flags: AssumptionFlags,
    pub key: Option<KeyRecord>,
    pub integrable_basis: Option<Subset>,
    /// True when every basis was checked.
    pub exhaustive: bool,
    pub per_basis: Vec<BasisVerdict>,
    pub witness: Option<Witness>,
    /// All non-integrable rectangles on the witnessing basis.
    pub witness_rectangles: Vec<RectangleWitness>,
    pub psi: Option<PsiSolution>,
    /// Whether every observable Y-term on the anchor basis is constant.
    pub constant_y_terms: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RigidityOptions {
    /// Check every basis regardless of `basis_cap`.
    pub exhaustive: bool,
    pub basis_cap: usize,
    pub minor_cap: u128,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        RigidityOptions { exhaustive: false, basis_cap: 5000, minor_cap: DEFAULT_MINOR_CAP }
    }
}

fn weak_pairs<F: BasisFamily + ?Sized>(g: &F, basis: &Subset) -> (bool, bool) {
    let comp = basis.complement(g.n());
    let ok = |r: usize, c: usize| g.contains(&basis.swap(r, c));
    let primal = basis.elems().iter().any(|&r| comp.elems().iter().filter(|&&c| ok(r, c)).count() >= 2);
    let dual = comp.elems().iter().any(|&c| basis.elems().iter().filter(|&&r| ok(r, c)).count() >= 2);
    (primal, dual)
}

fn y_on<C: Coeff>(src: &MinorCache<C>, w: &RectangleWitness) -> (Option<String>, Option<bool>) {
    match y_value(src, &w.basis, w.rows, w.cols) {
        Ok(y) => (Some(y.to_string()), Some(y.is_constant())),
        Err(_) => (None, None),
    }
}

fn anchor_y_constant<C: Coeff>(table: &HTermTable<C>, src: &MinorCache<C>, anchor: &Subset) -> Option<bool> {
    let mut all = true;
    for (rows, cols) in rectangles(anchor, table.n) {
        if chi(table, anchor, rows, cols).iter().all(|p| p.is_zero()) {
            continue;
        }
        match y_value(src, anchor, rows, cols) {
            Ok(y) => all &= y.is_constant(),
            Err(_) => return None,
        }
    }
    Some(all)
}

pub fn rigidity_report<C: Coeff>(l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>) -> Result<RigidityReport, MatrixError> {
    rigidity_report_with(l, r, RigidityOptions::default())
}

pub fn rigidity_report_with<C: Coeff>(
    l: &SymbolicMatrix<C>,
    r: &SymbolicMatrix<C>,
    opts: RigidityOptions,
) -> Result<RigidityReport, MatrixError> {
    let table = h_table(l, r)?;
    let (k, n) = (table.k, table.n);
    let mut report = RigidityReport {
        verdict: Verdict::Inconclusive,
        k,
        n,
        bases: 0,
        monomial: false,
        non_monomial: Vec::new(),
        genericity_failures: Vec::new(),
        flags: AssumptionFlags::default(),
        key: None,
        integrable_basis: None,
        exhaustive: false,
        per_basis: Vec::new(),
        witness: None,
        witness_rectangles: Vec::new(),
        psi: None,
        constant_y_terms: None,
        notes: Vec::new(),
    };
    let g = match compute_matroid(l) {
        Ok(g) => g,
        Err(e) => {
            report.notes.push(format!("L: {e}"));
            return Ok(report);
        }
    };
    report.bases = g.len();
    report.non_monomial = table.iter().filter(|(_, h)| !h.is_unit()).map(|(s, _)| s.clone()).collect();
    report.monomial = report.non_monomial.is_empty();
    report.genericity_failures = genericity_failures(r);
    let diag = g.diagnostics();
    let (weak, weak_dual) = weak_pairs(&g, g.first());
    let key = find_nonplanar_key(&g, g.bases());
    report.flags = AssumptionFlags {
        no_null_columns: diag.null_columns.is_empty(),
        no_stuck_rows: diag.stuck_rows.is_empty(),
        dimension: (n - k).max(k) >= 5,
        genericity: report.genericity_failures.is_empty(),
        nonplanar_key: key.is_some(),
        weak_pair: weak,
        weak_pair_dual: weak_dual,
    };
    report.key = key;
    if !report.monomial {
        report.notes.push("some h-terms are not monomials".into());
        return Ok(report);
    }
    if !report.flags.genericity {
        report.notes.push("R is not generic; rigidity is not guaranteed".into());
        return Ok(report);
    }
    let cache = MinorCache::new(r.clone(), opts.minor_cap);
    report.exhaustive = opts.exhaustive || g.len() <= opts.basis_cap;
    let checked = if report.exhaustive { g.bases() } else { &g.bases()[..opts.basis_cap] };
    let verdicts: Vec<Vec<RectangleWitness>> = checked.par_iter().map(|b| basis_witnesses(&table, b)).collect();
    report.per_basis = checked
        .iter()
        .zip(&verdicts)
        .map(|(b, w)| BasisVerdict { basis: b.clone(), integrable: w.is_empty() })
        .collect();
    report.integrable_basis = report.per_basis.iter().find(|v| v.integrable).map(|v| v.basis.clone());
    if let Some(ws) = verdicts.into_iter().find(|w| !w.is_empty()) {
        let (y_term, y_constant) = y_on(&cache, &ws[0]);
        report.witness = Some(Witness::Rectangle { rect: ws[0].clone(), y_term, y_constant });
        report.witness_rectangles = ws;
        report.verdict = Verdict::NonIntegrableWitness;
        return Ok(report);
    }
    if !report.exhaustive {
        let by_key = report.flags.nonplanar_key && report.flags.dimension;
        let by_pair = report.integrable_basis.is_some() && (weak || weak_dual);
        if !(by_key || by_pair) {
            report.notes.push("partial scan without a propagation hypothesis".into());
            return Ok(report);
        }
    }
    match reconstruct_psi(&table, &g) {
        Ok(sol) => {
            report.constant_y_terms = anchor_y_constant(&table, &cache, &sol.anchor);
            if report.constant_y_terms == Some(false) {
                report.notes.push("ψ validated but some observable Y-term is not constant".into());
            }
            report.psi = Some(sol);
            report.verdict = Verdict::Rigid;
        }
        Err(IntegrabilityError::PathInconsistency { cycle, residual }) => {
            report.witness = Some(Witness::Path { cycle, residual });
            report.verdict = Verdict::NonIntegrableWitness;
        }
        Err(IntegrabilityError::InconsistentWitness { a, b, first, second }) => {
            report.witness = Some(Witness::InconsistentWitness { a, b, first, second });
            report.verdict = Verdict::NonIntegrableWitness;
        }
        Err(e) => report.notes.push(format!("ψ reconstruction: {e}")),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{LaurentPoly, Rational};

    fn l38(nvars: usize) -> SymbolicMatrix<Rational> {
        SymbolicMatrix::from_i64(
            nvars,
            &[vec![1, 0, 0, 2, -1, 3, 1, 4], vec![0, 1, 0, 1, 3, -2, 5, 1], vec![0, 0, 1, 4, 1, 1, -3, 2]],
        )
    }

    fn r83(nvars: usize) -> SymbolicMatrix<Rational> {
        let v = [[1, 2, -1], [3, -1, 2], [2, 5, 1], [-1, 1, 4], [4, 2, -3], [1, -4, 2], [5, 1, 1], [2, 3, 7]];
        SymbolicMatrix::from_fn(8, 3, nvars, |r, c| LaurentPoly::from_i64(nvars, v[r][c]))
    }

    /// diag(t^{e_α})·R(1) with e_α = (α, α mod 3).
    fn trivial_deformation() -> (SymbolicMatrix<Rational>, SymbolicMatrix<Rational>, Vec<ExpVec>) {
        let e: Vec<ExpVec> = (1..=8).map(|a| ExpVec(vec![a as i64, (a % 3) as i64])).collect();
        let l = l38(2);
        let d: Vec<LaurentPoly<Rational>> = e.iter().map(|x| LaurentPoly::monomial(x.clone(), Rational::from_integer(1.into()))).collect();
        (l, r83(2).scale_rows(&d), e)
    }

    #[test]
    fn trivial_deformation_is_rigid() {
        let (l, r, e) = trivial_deformation();
        let rep = rigidity_report(&l, &r).unwrap();
        assert_eq!(rep.verdict, Verdict::Rigid, "{:?}", rep.notes);
        assert_eq!(rep.constant_y_terms, Some(true));
        let sol = rep.psi.unwrap();
        assert_eq!(sol.classes.len(), 1);
        for a in 1..=8 {
            assert_eq!(*sol.psi_at(a), e[a - 1].sub(&e[0]));
        }
        let table = h_table(&l, &r).unwrap();
        let g = compute_matroid(&l).unwrap();
        assert_eq!(psi2(&table, &g, 1, 4).unwrap(), e[3].sub(&e[0]));
        assert_eq!(psi2(&table, &g, 4, 1).unwrap(), e[0].sub(&e[3]));
        assert_eq!(find_integrable_basis(&table, &g), Some(g.first().clone()));
    }

    #[test]
    fn constant_r_gives_zero_psi2() {
        let l = l38(1);
        let table = h_table(&l, &r83(1)).unwrap();
        let g = compute_matroid(&l).unwrap();
        assert!(psi2(&table, &g, 2, 6).unwrap().is_zero());
    }

    #[test]
    fn broken_monomial_is_caught() {
        let l = l38(1);
        let t = LaurentPoly::<Rational>::var(1, 0, 1);
        let mut r = r83(1);
        r.set(7, 0, &r.get(7, 0).clone() * &t);
        let rep = rigidity_report(&l, &r).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert!(!rep.monomial);
    }
}
