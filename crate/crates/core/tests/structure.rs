mod common;

use common::*;
use detdeform::keys::{is_planar, kuratowski_witness, scan_rectangles, transport_key, KeyClass};
use detdeform::matroid::{compute_matroid, BasisFamily};
use rand::Rng;

#[test]
fn random_matroids_satisfy_exchange() {
    let mut rng = rng(21);
    let mut tried = 0;
    while tried < 40 {
        let (k, n) = (rng.gen_range(2..=4), rng.gen_range(5..=8));
        let l = random_int_matrix(&mut rng, k, n, 1, 0.4);
        let Ok(g) = compute_matroid(&l) else { continue };
        tried += 1;
        assert_eq!(g.verify_exchange(true, None), None);
        for b in g.bases() {
            assert!(laplace_basis(&l, b));
        }
        let (h, last) = (g.first(), g.bases().last().unwrap());
        let chain = g.exchange_chain(h, last).unwrap();
        if h != last {
            assert_eq!(chain.len() - 1, h.minus(last).len());
            assert!(chain.iter().all(|s| g.contains(s)));
        }
    }
}

#[test]
fn kuratowski_edges_revalidate() {
    let mut rng = rng(22);
    for _ in 0..10 {
        let (k, n) = (rng.gen_range(3..=4), rng.gen_range(7..=9));
        let (l, g, key) = nonplanar_sample(&mut rng, k, n);
        let w = kuratowski_witness(&g, &key).unwrap();
        validate_witness(&l, &w).unwrap();
    }
}

#[test]
fn transport_preserves_key_status_on_uniform_families() {
    let mut rng = rng(23);
    let l = random_int_matrix(&mut rng, 3, 7, 1, 0.0);
    let g = compute_matroid(&l).unwrap();
    let recs = scan_rectangles(&g, g.bases());
    assert!(recs.iter().all(|r| r.class == KeyClass::Key && r.planar == Some(false)));
    let moved = transport_key(&g, &recs[0], recs[0].rows.0, recs[0].cols.0).unwrap();
    assert_eq!(moved.class, KeyClass::Key);
    assert!(!is_planar(&moved, &g).unwrap());
}
