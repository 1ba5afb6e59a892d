//! Random instances shared by the integration tests and the acceptance harness.

#![allow(dead_code)]

use detdeform::counterexamples::is_certifiable;
use detdeform::keys::{find_nonplanar_key, KeyRecord};
use detdeform::laurent::{rational, ExpVec, LaurentPoly, Rational};
use detdeform::matrix::{det_laplace, Subset, SymbolicMatrix};
use detdeform::matroid::{compute_matroid, Matroid};
use detdeform::QPoly;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub mod identities;

pub type M = SymbolicMatrix<Rational>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A sparse polynomial with small coefficients and exponents in [-2, 2].
pub fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_terms: usize) -> QPoly {
    let terms = rng.gen_range(0..=max_terms);
    LaurentPoly::from_terms(
        nvars,
        (0..terms).map(|_| {
            let e = ExpVec((0..nvars).map(|_| rng.gen_range(-2..=2)).collect());
            (e, rational(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
        }),
    )
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, nvars: usize, max_terms: usize) -> M {
    let vals: Vec<QPoly> = (0..rows * cols).map(|_| random_poly(rng, nvars, max_terms)).collect();
    M::from_fn(rows, cols, nvars, |r, c| vals[r * cols + c].clone())
}

/// Integer matrix with entries in [-9, 9], zeroed with probability `zero`.
pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, nvars: usize, zero: f64) -> M {
    let vals: Vec<i64> =
        (0..rows * cols).map(|_| if rng.gen_bool(zero) { 0 } else { rng.gen_range(-9..=9) }).collect();
    M::from_fn(rows, cols, nvars, |r, c| LaurentPoly::from_i64(nvars, vals[r * cols + c]))
}

pub fn random_exp(rng: &mut ChaCha8Rng, d: usize, span: i64) -> ExpVec {
    ExpVec((0..d).map(|_| rng.gen_range(-span..=span)).collect())
}

/// A rigid pair: L generic with constant entries, R = diag(c_α t^{ψ(α)}) R₁ with R₁ generic.
pub struct RigidInstance {
    pub l: M,
    pub r: M,
    pub psi: Vec<ExpVec>,
}

pub fn rigid_instance(rng: &mut ChaCha8Rng, k: usize, n: usize, d: usize) -> RigidInstance {
    loop {
        let l = random_int_matrix(rng, k, n, d, 0.0);
        let r1 = random_int_matrix(rng, n, k, d, 0.0);
        let psi: Vec<ExpVec> = (0..n).map(|_| random_exp(rng, d, 3)).collect();
        let diag: Vec<QPoly> = psi.iter().map(|e| LaurentPoly::monomial(e.clone(), rational(rng.gen_range(1..=5), 1))).collect();
        let r = r1.scale_rows(&diag);
        if is_certifiable(&l, &r) {
            return RigidInstance { l, r, psi };
        }
    }
}

/// A sparse integer L of full rank whose basis family has a non-planar key.
pub fn nonplanar_sample(rng: &mut ChaCha8Rng, k: usize, n: usize) -> (M, Matroid, KeyRecord) {
    loop {
        let l = random_int_matrix(rng, k, n, 1, 0.35);
        let Ok(g) = compute_matroid(&l) else { continue };
        if let Some(key) = find_nonplanar_key(&g, g.bases()) {
            return (l, g, key);
        }
    }
}

/// Nonvanishing of Δ_L(S), computed by cofactor expansion rather than elimination.
pub fn laplace_basis(l: &M, s: &Subset) -> bool {
    let cols: Vec<usize> = s.elems().iter().map(|&c| c - 1).collect();
    let rows: Vec<usize> = (0..l.rows()).collect();
    !det_laplace(&l.submatrix(&rows, &cols)).is_zero()
}

/// Re-derives every edge of a Kuratowski witness: the stored basis must match the hub
/// construction, be a basis by cofactor expansion, and the edge set must be the full graph.
pub fn validate_witness(l: &M, w: &detdeform::keys::KuratowskiWitness) -> Result<(), String> {
    use detdeform::keys::WitnessKind;
    let v = w.vertices.len();
    let mut seen = std::collections::BTreeSet::new();
    for e in &w.edges {
        if w.edge_basis(e.u, e.w).as_ref() != Some(&e.basis) {
            return Err(format!("edge ({}, {}) does not follow from the hub", e.u, e.w));
        }
        if !laplace_basis(l, &e.basis) {
            return Err(format!("edge basis {} has a vanishing minor", e.basis));
        }
        seen.insert((e.u.min(e.w), e.u.max(e.w)));
    }
    let want: Vec<(usize, usize)> = match (w.kind, &w.parts) {
        (WitnessKind::K5, _) if v == 5 => (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect(),
        (WitnessKind::K33, Some((p, q))) if v == 6 => {
            p.iter().flat_map(|&a| q.iter().map(move |&b| (a.min(b), a.max(b)))).collect()
        }
        _ => return Err("malformed witness shape".into()),
    };
    if want.iter().copied().collect::<std::collections::BTreeSet<_>>() != seen {
        return Err("edge set is not the complete graph".into());
    }
    Ok(())
}
