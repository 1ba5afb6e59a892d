//! Randomized identity checks returning the number of instances verified.

use super::*;
use detdeform::matrix::{cauchy_binet_check, grassmann_plucker_holds, subsets};
use detdeform::yterms::{compose, g_factor, m_factorized, m_identity_lhs, m_term, transform_diagonal, transform_vertical, y_term};
use itertools::Itertools;

/// Integer entries times random monomials: every minor is a genuine polynomial.
pub fn monomial_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, d: usize) -> M {
    let base = random_int_matrix(rng, rows, cols, d, 0.0);
    let exps: Vec<_> = (0..rows * cols).map(|_| random_exp(rng, d, 2)).collect();
    base.map_entries(|r, c, v| v.shift(&exps[r * cols + c]))
}

pub fn cauchy_binet_suite(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = rng(seed);
    for case in 0..count {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(k..=5);
        let l = random_matrix(&mut rng, k, n, 2, 2);
        let r = random_matrix(&mut rng, n, k, 2, 2);
        if !cauchy_binet_check(&l, &r).map_err(|e| e.to_string())? {
            return Err(format!("Cauchy-Binet fails on case {case}"));
        }
    }
    Ok(count)
}

pub fn plucker_suite(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = rng(seed);
    let mut checked = 0;
    for _ in 0..count {
        let m = monomial_matrix(&mut rng, 6, 3, 2);
        for s in subsets(6, 3) {
            let comp = s.complement(6);
            for (&i, &j) in s.elems().iter().tuple_combinations() {
                for (&a, &b) in comp.elems().iter().tuple_combinations() {
                    for (x, y, u, v) in [(i, j, a, b), (j, i, b, a)] {
                        if !grassmann_plucker_holds(&m, &s, x, y, u, v).map_err(|e| e.to_string())? {
                            return Err(format!("three-term relation fails at {s} ({x},{y})x({u},{v})"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

pub fn y_rule_suite(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = rng(seed);
    let mut checked = 0;
    let fail = |what: &str, s: &Subset| format!("{what} fails on {s}");
    for _ in 0..count {
        let r = monomial_matrix(&mut rng, 7, 3, 1);
        for s in subsets(7, 3) {
            let comp = s.complement(7);
            for (i, j) in s.elems().iter().copied().tuple_combinations() {
                for (a, b, c) in comp.elems().iter().copied().tuple_combinations() {
                    let Ok(y) = y_term(&r, &s, (i, j), (a, b)) else { continue };
                    let v = transform_vertical(&y).map_err(|e| e.to_string())?;
                    if y_term(&r, &v.basis, v.upper, v.lower).ok() != Some(v) {
                        return Err(fail("vertical transformation", &s));
                    }
                    let dg = transform_diagonal(&y).map_err(|e| e.to_string())?;
                    if y_term(&r, &dg.basis, dg.upper, dg.lower).ok() != Some(dg) {
                        return Err(fail("diagonal transformation", &s));
                    }
                    let z = y_term(&r, &s, (i, j), (b, c)).map_err(|e| e.to_string())?;
                    let yz = compose(&y, &z).map_err(|e| e.to_string())?;
                    if y_term(&r, &s, yz.upper, yz.lower).ok() != Some(yz) {
                        return Err(fail("column composition", &s));
                    }
                    let w = y_term(&r, &s, (j, i), (a, b)).map_err(|e| e.to_string())?;
                    if Some(w.value) != y.value.inv().ok() {
                        return Err(fail("row reversal", &s));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// The six-term identity against both closed forms, and invariance of g under
/// simultaneous permutation of the index triples.
pub fn six_term_suite(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = rng(seed);
    let mut checked = 0;
    let s = Subset::of(&[1, 2, 3]);
    for _ in 0..count {
        let r = monomial_matrix(&mut rng, 7, 3, 1);
        for d in s.complement(7).elems().iter().copied().permutations(3) {
            let (a, d) = ([1, 2, 3], [d[0], d[1], d[2]]);
            let Ok(m) = m_term(&r, &s, a, d) else { continue };
            if m_identity_lhs(&r, &s, a, d).ok() != Some(m.clone()) || m_factorized(&r, &s, a, d).ok() != Some(m) {
                return Err(format!("six-term identity fails at {d:?}"));
            }
            if let Ok(g0) = g_factor(&r, &s, a, d) {
                for p in (0..3).permutations(3) {
                    let g = g_factor(&r, &s, [a[p[0]], a[p[1]], a[p[2]]], [d[p[0]], d[p[1]], d[p[2]]]).ok();
                    if g.as_ref() != Some(&g0) {
                        return Err(format!("g changes under {p:?} at {d:?}"));
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}
