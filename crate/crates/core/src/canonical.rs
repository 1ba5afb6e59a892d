//! Canonical factor recovery from the minor products alone.
//!
//! Y-terms of one basis are recovered as roots of their F-polynomials, ambiguities are
//! removed through the associativity relations Y_{αβ}Y_{βγ} = −Y_{αγ} and
//! Y^{im}Y^{mj} = −Y^{ij}, and at most one binary root choice is made per branch. The
//! pair (L*, R*) is then assembled and checked against the input table.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::keys::chi;
use crate::laurent::{Coeff, LaurentError, LaurentPoly, PolyRatio};
use crate::matrix::{h_table, plucker_signs, HTermTable, MatrixError, Subset, SymbolicMatrix};
use crate::matroid::{BasisFamily, Matroid};
use crate::yterms::quadratic_f;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("no basis has g, κ₁, κ₂ with h(𝓘^g_κ₁)·h(𝓘^g_κ₂) ≠ 0")]
    NotRecoverable,
    #[error("Y-term on rows {rows:?}, columns {cols:?} is not determined by the minor products")]
    Unresolved { rows: (usize, usize), cols: (usize, usize) },
    #[error("the F-polynomial roots admit no consistent assignment")]
    Inconsistent,
    #[error("roots of the F-polynomial on rows {rows:?}, columns {cols:?} leave the fraction field")]
    Irrational { rows: (usize, usize), cols: (usize, usize) },
    #[error("entry ({0}, {1}) of the canonical pair is not a Laurent polynomial")]
    NotLaurent(usize, usize),
    #[error("the canonical pair does not reproduce the input table at {0}")]
    RoundTrip(Subset),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AmbiguityClass {
    /// F has a double root.
    DoubleRoot,
    /// The observable set is not a key, so only one root is nonzero and ≠ −1.
    NonKeyUnique,
    /// Fixed by associativity from already resolved terms.
    ChainResolved,
    /// The single free root choice.
    AnchorChoice,
}

/// A rectangle {i<j}×{α<β} on the assignment basis.
pub type Rect = ((usize, usize), (usize, usize));

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct ResolvedY<C: Coeff> {
    pub value: PolyRatio<C>,
    pub class: AmbiguityClass,
    pub observable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct YAssignment<C: Coeff> {
    pub basis: Subset,
    pub g: usize,
    pub kappa1: usize,
    pub kappa2: usize,
    #[serde(serialize_with = "ser_rects")]
    pub terms: BTreeMap<Rect, ResolvedY<C>>,
    /// Root choices made, in order; the first is the anchor.
    pub choices: Vec<Rect>,
}

fn ser_rects<C: Coeff, S: serde::Serializer>(m: &BTreeMap<Rect, ResolvedY<C>>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (r, v) in m {
        seq.serialize_element(&(r.0, r.1, v))?;
    }
    seq.end()
}

impl<C: Coeff> YAssignment<C> {
    /// Y^{ij}_{αβ} for any ordering of the indices; −1 on a degenerate pair.
    pub fn y(&self, (i, j): (usize, usize), (a, b): (usize, usize)) -> Option<PolyRatio<C>> {
        let d = self.nvars();
        if i == j || a == b {
            return Some(PolyRatio::from_i64(d, -1));
        }
        let key = ((i.min(j), i.max(j)), (a.min(b), a.max(b)));
        let v = self.terms.get(&key)?.value.clone();
        // Reversing either index pair inverts the term.
        if (i > j) != (a > b) {
            v.inv().ok()
        } else {
            Some(v)
        }
    }

    fn nvars(&self) -> usize {
        self.terms.values().next().map_or(0, |v| v.value.nvars())
    }
}

#[derive(Debug, Clone)]
enum Cand<C: Coeff> {
    Any,
    Set(Vec<PolyRatio<C>>, AmbiguityClass),
}

#[derive(Clone)]
struct State<C: Coeff> {
    cand: BTreeMap<Rect, Cand<C>>,
    observable: BTreeMap<Rect, bool>,
}

/// (g, κ₁, κ₂) on a basis, lexicographically smallest.
fn weak_pair<F: BasisFamily + ?Sized>(g: &F, basis: &Subset) -> Option<(usize, usize, usize)> {
    let comp = basis.complement(g.n());
    for &gi in basis.elems() {
        let ks: Vec<usize> = comp.elems().iter().copied().filter(|&a| g.contains(&basis.swap(gi, a))).collect();
        if ks.len() >= 2 {
            return Some((gi, ks[0], ks[1]));
        }
    }
    None
}

/// Lexicographically smallest (basis, g, κ₁, κ₂) with h(𝓘^g_κ₁)·h(𝓘^g_κ₂) ≠ 0.
pub fn find_anchor(g: &Matroid) -> Option<(Subset, usize, usize, usize)> {
    g.bases().iter().find_map(|b| weak_pair(g, b).map(|(gi, k1, k2)| (b.clone(), gi, k1, k2)))
}

fn admissible<C: Coeff>(r: &PolyRatio<C>) -> bool {
    !r.is_zero() && *r != PolyRatio::from_i64(r.nvars(), -1)
}

fn positive_lead<C: Coeff>(r: &PolyRatio<C>) -> bool {
    match (r.num.leading(), r.den.leading()) {
        (Some((_, a)), Some((_, b))) => (a.clone() * b.clone()).is_positive(),
        _ => false,
    }
}

fn initial_state<C: Coeff>(table: &HTermTable<C>, basis: &Subset) -> Result<State<C>, CanonicalError> {
    let comp = basis.complement(table.n);
    let (rows, cols) = (basis.elems(), comp.elems());
    let mut cand = BTreeMap::new();
    let mut observable = BTreeMap::new();
    for (x, &i) in rows.iter().enumerate() {
        for &j in &rows[x + 1..] {
            for (y, &a) in cols.iter().enumerate() {
                for &b in &cols[y + 1..] {
                    let key = ((i, j), (a, b));
                    let [p1, p2, p3] = chi(table, basis, (i, j), (a, b));
                    let obs = !(p1.is_zero() && p2.is_zero() && p3.is_zero());
                    observable.insert(key, obs);
                    if !obs {
                        cand.insert(key, Cand::Any);
                        continue;
                    }
                    let f = quadratic_f(table, basis, (i, j), (a, b)).map_err(|_| CanonicalError::Inconsistent)?;
                    let (r1, r2) = f.roots().ok_or(CanonicalError::Irrational { rows: (i, j), cols: (a, b) })?;
                    let mut roots: Vec<PolyRatio<C>> = Vec::new();
                    for r in [r1, r2] {
                        if admissible(&r) && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                    let is_key = !(p1.is_zero() || p2.is_zero() || p3.is_zero());
                    let class = match roots.len() {
                        0 => return Err(CanonicalError::Inconsistent),
                        1 if is_key => AmbiguityClass::DoubleRoot,
                        1 => AmbiguityClass::NonKeyUnique,
                        _ => AmbiguityClass::AnchorChoice,
                    };
                    cand.insert(key, Cand::Set(roots, class));
                }
            }
        }
    }
    Ok(State { cand, observable })
}

/// Every associativity triple (X, Y, Z) with X·Y = −Z, on sorted keys.
fn triples(rows: &[usize], cols: &[usize]) -> Vec<[Rect; 3]> {
    let mut out = Vec::new();
    let pairs = |v: &[usize]| -> Vec<(usize, usize)> {
        v.iter().enumerate().flat_map(|(x, &a)| v[x + 1..].iter().map(move |&b| (a, b))).collect()
    };
    let trips = |v: &[usize]| -> Vec<(usize, usize, usize)> {
        let mut t = Vec::new();
        for x in 0..v.len() {
            for y in x + 1..v.len() {
                for z in y + 1..v.len() {
                    t.push((v[x], v[y], v[z]));
                }
            }
        }
        t
    };
    for r in pairs(rows) {
        for (a, b, c) in trips(cols) {
            out.push([(r, (a, b)), (r, (b, c)), (r, (a, c))]);
        }
    }
    for c in pairs(cols) {
        for (i, m, j) in trips(rows) {
            out.push([((i, m), c), ((m, j), c), ((i, j), c)]);
        }
    }
    out
}

fn propagate<C: Coeff>(st: &mut State<C>, trips: &[[Rect; 3]]) -> Result<(), CanonicalError> {
    loop {
        let mut changed = false;
        for t in trips {
            let sets: Vec<Option<Vec<PolyRatio<C>>>> = t
                .iter()
                .map(|r| match &st.cand[r] {
                    Cand::Any => None,
                    Cand::Set(v, _) => Some(v.clone()),
                })
                .collect();
            match (&sets[0], &sets[1], &sets[2]) {
                (Some(x), Some(y), Some(z)) => {
                    let mut keep = [vec![false; x.len()], vec![false; y.len()], vec![false; z.len()]];
                    for (a, xa) in x.iter().enumerate() {
                        for (b, yb) in y.iter().enumerate() {
                            let p = xa.mul(yb).neg();
                            for (c, zc) in z.iter().enumerate() {
                                if p == *zc {
                                    keep[0][a] = true;
                                    keep[1][b] = true;
                                    keep[2][c] = true;
                                }
                            }
                        }
                    }
                    for (u, r) in t.iter().enumerate() {
                        if keep[u].iter().all(|&k| k) {
                            continue;
                        }
                        let Cand::Set(v, class) = st.cand.get_mut(r).expect("known rectangle") else { unreachable!() };
                        let filtered: Vec<PolyRatio<C>> =
                            v.iter().zip(&keep[u]).filter(|(_, &k)| k).map(|(x, _)| x.clone()).collect();
                        if filtered.is_empty() {
                            return Err(CanonicalError::Inconsistent);
                        }
                        if filtered.len() == 1 && *class == AmbiguityClass::AnchorChoice {
                            *class = AmbiguityClass::ChainResolved;
                        }
                        *v = filtered;
                        changed = true;
                    }
                }
                _ => {
                    let unknown: Vec<usize> = (0..3).filter(|&u| sets[u].is_none()).collect();
                    if unknown.len() != 1 {
                        continue;
                    }
                    let u = unknown[0];
                    let single = |s: &Option<Vec<PolyRatio<C>>>| s.as_ref().filter(|v| v.len() == 1).map(|v| v[0].clone());
                    let others: Vec<PolyRatio<C>> = (0..3).filter(|&w| w != u).filter_map(|w| single(&sets[w])).collect();
                    if others.len() != 2 {
                        continue;
                    }
                    // X·Y = −Z solved for the missing entry.
                    let v = if u == 2 { others[0].mul(&others[1]).neg() } else { others[1].div(&others[0])?.neg() };
                    st.cand.insert(t[u], Cand::Set(vec![v], AmbiguityClass::ChainResolved));
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn search<C: Coeff>(
    mut st: State<C>,
    trips: &[[Rect; 3]],
    choices: &mut Vec<Rect>,
    flip_first: bool,
) -> Result<State<C>, CanonicalError> {
    propagate(&mut st, trips)?;
    let open = st.cand.iter().find_map(|(r, c)| match c {
        Cand::Set(v, _) if v.len() > 1 => Some((*r, v.clone())),
        _ => None,
    });
    let Some((rect, roots)) = open else { return Ok(st) };
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by_key(|&u| !positive_lead(&roots[u]));
    if flip_first && choices.is_empty() {
        order.reverse();
    }
    let depth = choices.len();
    for u in order {
        let mut next = st.clone();
        next.cand.insert(rect, Cand::Set(vec![roots[u].clone()], AmbiguityClass::AnchorChoice));
        choices.truncate(depth);
        choices.push(rect);
        if let Ok(done) = search(next, trips, choices, flip_first) {
            return Ok(done);
        }
    }
    Err(CanonicalError::Inconsistent)
}

/// Resolves the Y-terms of the anchor basis needed for the canonical form.
pub fn resolve_y_assignment<C: Coeff>(table: &HTermTable<C>, g: &Matroid) -> Result<YAssignment<C>, CanonicalError> {
    resolve_y_assignment_with(table, g, false)
}

/// As [`resolve_y_assignment`]; `flip` takes the other root at the anchor choice.
pub fn resolve_y_assignment_with<C: Coeff>(
    table: &HTermTable<C>,
    g: &Matroid,
    flip: bool,
) -> Result<YAssignment<C>, CanonicalError> {
    let (basis, gi, k1, k2) = find_anchor(g).ok_or(CanonicalError::NotRecoverable)?;
    let comp = basis.complement(table.n);
    let st = initial_state(table, &basis)?;
    let trips = triples(basis.elems(), comp.elems());
    let mut choices = Vec::new();
    let st = search(st, &trips, &mut choices, flip)?;
    let mut terms = BTreeMap::new();
    for (r, c) in &st.cand {
        if let Cand::Set(v, class) = c {
            terms.insert(*r, ResolvedY { value: v[0].clone(), class: *class, observable: st.observable[r] });
        }
    }
    let asg = YAssignment { basis: basis.clone(), g: gi, kappa1: k1, kappa2: k2, terms, choices };
    for &i in basis.elems() {
        for &a in comp.elems() {
            if i != gi && a != k1 && asg.y((gi, i), (k1, a)).is_none() {
                return Err(CanonicalError::Unresolved { rows: (gi.min(i), gi.max(i)), cols: (k1.min(a), k1.max(a)) });
            }
        }
    }
    Ok(asg)
}

/// (−1)^{|q − p|}, the sign of moving the replaced row from position p to the sorted position q.
fn exchange_sign(basis: &Subset, i: usize, a: usize) -> i64 {
    let p = basis.position(i).expect("i in basis") as i64;
    let q = basis.swap(i, a).position(a).expect("α in exchange") as i64;
    if (p - q).abs() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Cross-ratio Δ(𝓘^g_κ₁)Δ(𝓘^i_α)/(Δ(𝓘^g_α)Δ(𝓘^i_κ₁)) from the assignment.
fn cross_ratio<C: Coeff>(asg: &YAssignment<C>, i: usize, a: usize) -> PolyRatio<C> {
    let (gi, k1) = (asg.g, asg.kappa1);
    let y = asg.y((gi, i), (k1, a)).expect("resolved target");
    let (c1, c2) = plucker_signs(gi, i, k1, a);
    y.mul(&PolyRatio::from_i64(y.nvars(), (c1 * c2) as i64))
}

/// The canonical pair: R* has the identity on the anchor rows and is normalized to
/// ones on row κ₁ and column g; L* is read off Δ_{L*}(𝓘) = h(𝓘)·Δ_{R*}(𝓘)⁻¹.
pub fn canonical_form<C: Coeff>(
    asg: &YAssignment<C>,
    table: &HTermTable<C>,
) -> Result<(SymbolicMatrix<C>, SymbolicMatrix<C>), CanonicalError> {
    let (k, n, d) = (table.k, table.n, table.nvars);
    let basis = &asg.basis;
    let mut r = SymbolicMatrix::zeros(n, k, d);
    for (p, &i) in basis.elems().iter().enumerate() {
        r.set(i - 1, p, LaurentPoly::one(d));
    }
    let sign = |i, a| C::from_i64(exchange_sign(basis, i, a));
    for &a in basis.complement(n).elems() {
        for (p, &i) in basis.elems().iter().enumerate() {
            let entry = if i == asg.g || a == asg.kappa1 {
                LaurentPoly::one(d)
            } else {
                let s = sign(i, a) * sign(asg.g, asg.kappa1) * sign(i, asg.kappa1) * sign(asg.g, a);
                cross_ratio(asg, i, a).to_poly().ok_or(CanonicalError::NotLaurent(a, p + 1))?.scale(&s)
            };
            r.set(a - 1, p, entry);
        }
    }
    let h0 = table.h(basis);
    let mut l = SymbolicMatrix::zeros(k, n, d);
    for (p, &i) in basis.elems().iter().enumerate() {
        l.set(p, i - 1, if p == 0 { h0.clone() } else { LaurentPoly::one(d) });
    }
    let h0_inv = h0.unit_inverse().ok_or(CanonicalError::NotLaurent(1, basis.elems()[0]))?;
    for &a in basis.complement(n).elems() {
        for (p, &i) in basis.elems().iter().enumerate() {
            let ex = basis.swap(i, a);
            let hx = table.h(&ex);
            if hx.is_zero() {
                continue;
            }
            let rx = r.get(a - 1, p).clone();
            let v = PolyRatio::new(&hx * &h0_inv, rx)?.to_poly().ok_or(CanonicalError::NotLaurent(p + 1, a))?;
            let v = if p == 0 { &v * &h0 } else { v };
            l.set(p, a - 1, v);
        }
    }
    let back = h_table(&l, &r)?;
    for s in crate::matrix::subsets(n, k) {
        if back.h(&s) != table.h(&s) {
            return Err(CanonicalError::RoundTrip(s));
        }
    }
    Ok((l, r))
}

/// Resolution and assembly in one call.
pub fn canonical_pair<C: Coeff>(
    table: &HTermTable<C>,
    g: &Matroid,
) -> Result<(YAssignment<C>, SymbolicMatrix<C>, SymbolicMatrix<C>), CanonicalError> {
    let asg = resolve_y_assignment(table, g)?;
    let (l, r) = canonical_form(&asg, table)?;
    Ok((asg, l, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{rational, ExpVec, Rational};
    use crate::matroid::compute_matroid;
    use crate::yterms::y_value;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_int(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> SymbolicMatrix<Rational> {
        let vals: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-6..=6)).collect();
        SymbolicMatrix::from_fn(rows, cols, 1, |r, c| LaurentPoly::from_i64(1, vals[r * cols + c]))
    }

    fn generic_pair(k: usize, n: usize, seed: u64) -> (SymbolicMatrix<Rational>, SymbolicMatrix<Rational>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let (l, r) = (random_int(k, n, &mut rng), random_int(n, k, &mut rng));
            if crate::matrix::genericity_check(&l.transpose()) && crate::matrix::genericity_check(&r) {
                return (l, r);
            }
        }
    }

    #[test]
    fn k2_n5_reproduces_true_y_up_to_anchor() {
        let (l, r) = generic_pair(2, 5, 3);
        let table = h_table(&l, &r).unwrap();
        let g = compute_matroid(&l).unwrap();
        let mut matched = 0;
        for flip in [false, true] {
            let asg = resolve_y_assignment_with(&table, &g, flip).unwrap();
            assert_eq!(asg.choices.len(), 1);
            let truth = asg.terms.iter().all(|(&(u, c), v)| y_value(&r, &asg.basis, u, c).unwrap() == v.value);
            matched += truth as usize;
            let (ls, rs) = canonical_form(&asg, &table).unwrap();
            assert_eq!(h_table(&ls, &rs).unwrap(), table);
            for (p, &i) in asg.basis.elems().iter().enumerate() {
                for (q, _) in asg.basis.elems().iter().enumerate() {
                    assert_eq!(*rs.get(i - 1, q), LaurentPoly::from_i64(1, (p == q) as i64));
                }
            }
        }
        assert_eq!(matched, 1);
    }

    #[test]
    fn every_resolved_value_is_a_root() {
        let (l, r) = generic_pair(3, 6, 9);
        let table = h_table(&l, &r).unwrap();
        let g = compute_matroid(&l).unwrap();
        let asg = resolve_y_assignment(&table, &g).unwrap();
        for (&(u, c), v) in &asg.terms {
            if v.observable {
                let f = quadratic_f(&table, &asg.basis, u, c).unwrap();
                let x = &v.value;
                let val = x.mul(x).mul(&PolyRatio::from_poly(f.a.clone())).add(&x.mul(&PolyRatio::from_poly(f.b.clone()))).add(&PolyRatio::from_poly(f.c.clone()));
                assert!(val.is_zero());
            }
        }
        let (ls, rs) = canonical_form(&asg, &table).unwrap();
        assert_eq!(h_table(&ls, &rs).unwrap(), table);
    }

    #[test]
    fn principal_pattern_is_not_recoverable() {
        let k = 3;
        let l0: SymbolicMatrix<Rational> = SymbolicMatrix::from_fn(k, 2 * k, 1, |r, c| LaurentPoly::from_i64(1, (c % k == r) as i64));
        let rm = [[2, 5, -1], [3, -4, 7], [1, 6, 5]];
        let build = |t: bool| -> SymbolicMatrix<Rational> {
            SymbolicMatrix::from_fn(2 * k, k, 1, |row, c| {
                let v = if row < k { (row == c) as i64 } else if t { rm[row - k][c] } else { rm[c][row - k] };
                LaurentPoly::from_i64(1, v)
            })
        };
        let (a, b) = (h_table(&l0, &build(false)).unwrap(), h_table(&l0, &build(true)).unwrap());
        assert_eq!(a, b);
        let g = compute_matroid(&l0).unwrap();
        assert_eq!(resolve_y_assignment(&a, &g).unwrap_err(), CanonicalError::NotRecoverable);
    }

    #[test]
    fn gauge_and_trivial_deformations_share_the_canonical_pair() {
        let (l, r) = generic_pair(3, 6, 21);
        let diag: Vec<LaurentPoly<Rational>> =
            (0..6).map(|a| LaurentPoly::monomial(ExpVec(vec![a as i64 - 2]), rational(a as i64 + 1, 2))).collect();
        let inv: Vec<LaurentPoly<Rational>> = diag.iter().map(|d| d.unit_inverse().unwrap()).collect();
        let (l2, r2) = (l.scale_columns(&inv), r.scale_rows(&diag));
        let (t1, t2) = (h_table(&l, &r).unwrap(), h_table(&l2, &r2).unwrap());
        let g = compute_matroid(&l).unwrap();
        let (_, ls1, rs1) = canonical_pair(&t1, &g).unwrap();
        let (_, ls2, rs2) = canonical_pair(&t2, &g).unwrap();
        assert_eq!((ls1, rs1), (ls2, rs2));
        // A trivial deformation: only h changes, through the monomial row factor.
        let shift: Vec<LaurentPoly<Rational>> = (0..6).map(|a| LaurentPoly::var(1, 0, (a % 3) as i64)).collect();
        let r3 = r.scale_rows(&shift);
        let t3 = h_table(&l, &r3).unwrap();
        let (_, ls3, rs3) = canonical_pair(&t3, &g).unwrap();
        assert_eq!(h_table(&ls3, &rs3).unwrap(), t3);
    }

    #[test]
    fn sparse_pattern_uses_non_key_terms() {
        let l = SymbolicMatrix::from_i64(
            1,
            &[vec![1, 0, 0, 0, 1, 1, 3], vec![0, 1, 0, 0, 2, 2, 4], vec![0, 0, 1, 1, 4, 5, 0]],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = loop {
            let r = random_int(7, 3, &mut rng);
            if crate::matrix::genericity_check(&r) {
                break r;
            }
        };
        let table = h_table(&l, &r).unwrap();
        let g = compute_matroid(&l).unwrap();
        let asg = resolve_y_assignment(&table, &g).unwrap();
        assert!(asg.terms.values().any(|v| v.class == AmbiguityClass::NonKeyUnique));
        assert!(asg.terms.values().all(|v| v.class != AmbiguityClass::NonKeyUnique || v.observable));
        let (ls, rs) = canonical_form(&asg, &table).unwrap();
        assert_eq!(h_table(&ls, &rs).unwrap(), table);
    }
}
