//! Observable sets, weak keys and keys, their planarity, and K₅/K₃,₃ witnesses.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{Coeff, LaurentPoly};
use crate::matrix::{HTermTable, Subset};
use crate::matroid::{null_lower, null_upper, BasisFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyError {
    #[error("{0} is not a basis")]
    NotABasis(Subset),
    #[error("rectangle rows {rows:?} / cols {cols:?} do not fit basis {basis}")]
    BadRectangle { basis: Subset, rows: (usize, usize), cols: (usize, usize) },
    #[error("planarity is only defined for keys")]
    NotAKey,
    #[error("exchange ({0},{1}) is not inside the rectangle")]
    OutsideRectangle(usize, usize),
    #[error("exchange leads to {0}, which is not a basis")]
    LeavesMatroid(Subset),
    #[error("the key is planar")]
    Planar,
    #[error("no index falsifies planarity on either side")]
    NoWitnessIndex,
    #[error("no K5 or K3,3 realisation found around the key")]
    NoWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KeyClass {
    NotObservable,
    Observable,
    WeakKey,
    Key,
}

/// A rectangle {i,j}×{α,β} on a basis, with its classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyRecord {
    pub basis: Subset,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub class: KeyClass,
    pub planar: Option<bool>,
}

impl KeyRecord {
    pub fn rows_set(&self) -> Subset {
        Subset::of(&[self.rows.0, self.rows.1])
    }

    pub fn cols_set(&self) -> Subset {
        Subset::of(&[self.cols.0, self.cols.1])
    }
}

fn ordered(p: (usize, usize)) -> (usize, usize) {
    (p.0.min(p.1), p.0.max(p.1))
}

/// The three products of χ(𝓘|^{ij}_{αβ}), in the order
/// h(𝓘)h(𝓘^{ij}_{αβ}), h(𝓘^i_α)h(𝓘^j_β), h(𝓘^i_β)h(𝓘^j_α).
pub fn chi<C: Coeff>(
    table: &HTermTable<C>,
    basis: &Subset,
    (i, j): (usize, usize),
    (a, b): (usize, usize),
) -> [LaurentPoly<C>; 3] {
    let h = |s: &Subset| table.h(s);
    [
        &h(basis) * &h(&basis.exchange(&[i, j], &[a, b]).expect("admissible")),
        &h(&basis.swap(i, a)) * &h(&basis.swap(j, b)),
        &h(&basis.swap(i, b)) * &h(&basis.swap(j, a)),
    ]
}

fn rectangle_fits(basis: &Subset, n: usize, rows: (usize, usize), cols: (usize, usize)) -> bool {
    rows.0 != rows.1
        && cols.0 != cols.1
        && basis.contains(rows.0)
        && basis.contains(rows.1)
        && [cols.0, cols.1].iter().all(|&c| c >= 1 && c <= n && !basis.contains(c))
}

pub fn classify_rectangle<C: Coeff>(
    table: &HTermTable<C>,
    basis: &Subset,
    rows: (usize, usize),
    cols: (usize, usize),
) -> Result<KeyRecord, KeyError> {
    let (rows, cols) = (ordered(rows), ordered(cols));
    if !table.nonzero(basis) {
        return Err(KeyError::NotABasis(basis.clone()));
    }
    if !rectangle_fits(basis, table.n, rows, cols) {
        return Err(KeyError::BadRectangle { basis: basis.clone(), rows, cols });
    }
    Ok(KeyRecord { basis: basis.clone(), rows, cols, class: rectangle_class(table, basis, rows, cols), planar: None })
}

fn rectangle_class<F: BasisFamily + ?Sized>(
    g: &F,
    basis: &Subset,
    (i, j): (usize, usize),
    (a, b): (usize, usize),
) -> KeyClass {
    let has = |s: Subset| g.contains(&s);
    let singles = [has(basis.swap(i, a)), has(basis.swap(j, b)), has(basis.swap(i, b)), has(basis.swap(j, a))];
    let double = has(basis.exchange(&[i, j], &[a, b]).expect("admissible"));
    let p = [double, singles[0] && singles[1], singles[2] && singles[3]];
    if p.iter().all(|&x| x) {
        KeyClass::Key
    } else if singles.iter().filter(|&&x| x).count() >= 3 {
        KeyClass::WeakKey
    } else if p.iter().any(|&x| x) {
        KeyClass::Observable
    } else {
        KeyClass::NotObservable
    }
}

/// Planarity: both null-sets fill their complements.
pub fn is_planar<F: BasisFamily + ?Sized>(record: &KeyRecord, g: &F) -> Result<bool, KeyError> {
    if record.class != KeyClass::Key {
        return Err(KeyError::NotAKey);
    }
    let (r, c) = (record.rows_set(), record.cols_set());
    let upper = null_upper(g, &record.basis, &c);
    let lower = null_lower(g, &record.basis, &r);
    Ok(upper == record.basis.minus(&r) && lower == record.basis.complement(g.n()).minus(&c))
}

/// Every rectangle of one basis, rows lex then cols lex.
pub fn rectangles(basis: &Subset, n: usize) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
    let comp = basis.complement(n);
    let rows: Vec<_> = basis.elems().iter().copied().tuple_combinations().collect();
    let cols: Vec<_> = comp.elems().iter().copied().tuple_combinations().collect();
    rows.into_iter().cartesian_product(cols)
}

/// Class of every rectangle across all bases, in scan order.
pub fn scan_rectangles<F: BasisFamily + ?Sized>(g: &F, bases: &[Subset]) -> Vec<KeyRecord> {
    let mut out = Vec::new();
    for b in bases {
        for (rows, cols) in rectangles(b, g.n()) {
            let class = rectangle_class(g, b, rows, cols);
            let planar = (class == KeyClass::Key).then(|| {
                let r = KeyRecord { basis: b.clone(), rows, cols, class, planar: None };
                is_planar(&r, g).expect("class is key")
            });
            out.push(KeyRecord { basis: b.clone(), rows, cols, class, planar });
        }
    }
    out
}

/// The first non-planar key in scan order (bases lex, rows lex, cols lex).
pub fn find_nonplanar_key<F: BasisFamily + ?Sized>(g: &F, bases: &[Subset]) -> Option<KeyRecord> {
    for b in bases {
        for (rows, cols) in rectangles(b, g.n()) {
            if rectangle_class(g, b, rows, cols) != KeyClass::Key {
                continue;
            }
            let mut r = KeyRecord { basis: b.clone(), rows, cols, class: KeyClass::Key, planar: None };
            if !is_planar(&r, g).expect("class is key") {
                r.planar = Some(false);
                return Some(r);
            }
        }
    }
    None
}

/// Moves a rectangle to the basis 𝓘^l_γ, taking (𝔠_r)^l_γ × (𝔠_c)^γ_l.
pub fn transport_key<F: BasisFamily + ?Sized>(
    g: &F,
    record: &KeyRecord,
    l: usize,
    gamma: usize,
) -> Result<KeyRecord, KeyError> {
    let (r, c) = (record.rows_set(), record.cols_set());
    if !r.contains(l) || !c.contains(gamma) {
        return Err(KeyError::OutsideRectangle(l, gamma));
    }
    let j = record.basis.swap(l, gamma);
    if !g.contains(&j) {
        return Err(KeyError::LeavesMatroid(j));
    }
    let rows = r.swap(l, gamma).elems().to_vec();
    let cols = c.swap(gamma, l).elems().to_vec();
    let (rows, cols) = ((rows[0], rows[1]), (cols[0], cols[1]));
    let class = rectangle_class(g, &j, rows, cols);
    let mut out = KeyRecord { basis: j, rows, cols, class, planar: None };
    if class == KeyClass::Key {
        out.planar = Some(is_planar(&out, g)?);
    }
    Ok(out)
}

/// Applies a sequence of transports, failing at the first exchange that leaves the family.
pub fn transport_path<F: BasisFamily + ?Sized>(
    g: &F,
    record: &KeyRecord,
    moves: &[(usize, usize)],
) -> Result<KeyRecord, KeyError> {
    moves.iter().try_fold(record.clone(), |r, &(l, gamma)| transport_key(g, &r, l, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    K5,
    K33,
}

/// How an edge {û, ŵ} becomes a basis: `H∖(ûΔŵ)` on the column side, or
/// `H∪(ûΔŵ)` in the transposed (row-side) construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HubMode {
    Remove,
    Adjoin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEdge {
    pub u: usize,
    pub w: usize,
    pub basis: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KuratowskiWitness {
    pub kind: WitnessKind,
    pub hub: Subset,
    pub mode: HubMode,
    pub transposed: bool,
    /// The extra index (i₃, or α₃ when transposed).
    pub extra: usize,
    pub vertices: Vec<Subset>,
    /// For K₃,₃, the two sides as vertex indices.
    pub parts: Option<(Vec<usize>, Vec<usize>)>,
    pub edges: Vec<WitnessEdge>,
}

impl KuratowskiWitness {
    /// Every edge's basis, recomputed from the hub.
    pub fn edge_basis(&self, u: usize, w: usize) -> Option<Subset> {
        edge_basis(&self.hub, self.mode, &self.vertices[u], &self.vertices[w])
    }
}

fn edge_basis(hub: &Subset, mode: HubMode, u: &Subset, w: &Subset) -> Option<Subset> {
    let d = u.symdiff(w);
    if d.len() != 2 {
        return None;
    }
    match mode {
        HubMode::Remove => d.is_subset_of(hub).then(|| hub.minus(&d)),
        HubMode::Adjoin => d.intersect(hub).is_empty().then(|| hub.union(&d)),
    }
}

struct Frame {
    hub: Subset,
    mode: HubMode,
    /// Labels playing the three "row" roles (a, b, c) and the two "column" roles (x, y).
    triple: [usize; 3],
    pair: [usize; 2],
    extra: usize,
}

impl Frame {
    fn edges<F: BasisFamily + ?Sized>(&self, g: &F, vertices: &[Subset], pairs: &[(usize, usize)]) -> Option<Vec<WitnessEdge>> {
        pairs
            .iter()
            .map(|&(u, w)| {
                let b = edge_basis(&self.hub, self.mode, &vertices[u], &vertices[w])?;
                g.contains(&b).then_some(WitnessEdge { u, w, basis: b })
            })
            .collect()
    }

    fn witness(&self, kind: WitnessKind, vertices: Vec<Subset>, parts: Option<(Vec<usize>, Vec<usize>)>, edges: Vec<WitnessEdge>) -> KuratowskiWitness {
        KuratowskiWitness {
            kind,
            hub: self.hub.clone(),
            mode: self.mode,
            transposed: self.mode == HubMode::Adjoin,
            extra: self.extra,
            vertices,
            parts,
            edges,
        }
    }

    fn ground(&self) -> Vec<usize> {
        let mut v = vec![self.triple[0], self.triple[1], self.triple[2], self.pair[0], self.pair[1]];
        v.sort_unstable();
        v
    }

    fn k5<F: BasisFamily + ?Sized>(&self, g: &F) -> Option<KuratowskiWitness> {
        let vertices: Vec<Subset> = self.triple.iter().chain(&self.pair).map(|&x| Subset::of(&[x])).collect();
        let pairs: Vec<_> = (0..5).tuple_combinations().collect();
        let edges = self.edges(g, &vertices, &pairs)?;
        Some(self.witness(WitnessKind::K5, vertices, None, edges))
    }

    /// N₁ = {{a,b},{x,y},{a,c}}, N₂ = {{x,a},{y,a},∅} over all relabelings.
    fn k33<F: BasisFamily + ?Sized>(&self, g: &F) -> Option<KuratowskiWitness> {
        for t in self.triple.iter().copied().permutations(3) {
            for p in self.pair.iter().copied().permutations(2) {
                let (a, b, c, x, y) = (t[0], t[1], t[2], p[0], p[1]);
                let vertices = vec![
                    Subset::of(&[a, b]),
                    Subset::of(&[x, y]),
                    Subset::of(&[a, c]),
                    Subset::of(&[x, a]),
                    Subset::of(&[y, a]),
                    Subset::empty(),
                ];
                let pairs: Vec<_> = (0..3).cartesian_product(3..6).collect();
                if let Some(edges) = self.edges(g, &vertices, &pairs) {
                    return Some(self.witness(WitnessKind::K33, vertices, Some((vec![0, 1, 2], vec![3, 4, 5])), edges));
                }
            }
        }
        None
    }

    /// Exhaustive search over vertices drawn from subsets of size ≤ 2 of the ground set.
    fn brute<F: BasisFamily + ?Sized>(&self, g: &F) -> Option<KuratowskiWitness> {
        let ground = self.ground();
        let mut pool = vec![Subset::empty()];
        pool.extend(ground.iter().map(|&x| Subset::of(&[x])));
        pool.extend(ground.iter().copied().tuple_combinations().map(|(x, y)| Subset::of(&[x, y])));
        let m = pool.len();
        let adj: Vec<Vec<bool>> = (0..m)
            .map(|u| {
                (0..m)
                    .map(|w| {
                        u != w
                            && edge_basis(&self.hub, self.mode, &pool[u], &pool[w]).is_some_and(|b| g.contains(&b))
                    })
                    .collect()
            })
            .collect();
        for c in (0..m).combinations(5) {
            if c.iter().tuple_combinations().all(|(&u, &w)| adj[u][w]) {
                let vertices: Vec<Subset> = c.iter().map(|&u| pool[u].clone()).collect();
                let pairs: Vec<_> = (0..5).tuple_combinations().collect();
                let edges = self.edges(g, &vertices, &pairs)?;
                return Some(self.witness(WitnessKind::K5, vertices, None, edges));
            }
        }
        for a in (0..m).combinations(3) {
            let rest: Vec<usize> = (0..m).filter(|x| !a.contains(x) && a.iter().all(|&u| adj[u][*x])).collect();
            if let Some(b) = rest.into_iter().combinations(3).find(|b| b.iter().all(|x| *x > a[0])) {
                let vertices: Vec<Subset> = a.iter().chain(&b).map(|&u| pool[u].clone()).collect();
                let pairs: Vec<_> = (0..3).cartesian_product(3..6).collect();
                let edges = self.edges(g, &vertices, &pairs)?;
                return Some(self.witness(WitnessKind::K33, vertices, Some((vec![0, 1, 2], vec![3, 4, 5])), edges));
            }
        }
        None
    }
}

fn frames<F: BasisFamily + ?Sized>(g: &F, record: &KeyRecord) -> Vec<Frame> {
    let (i1, i2) = record.rows;
    let (a1, a2) = record.cols;
    let base = &record.basis;
    let (r, c) = (record.rows_set(), record.cols_set());
    let mut out = Vec::new();
    for &i3 in base.minus(&r).elems() {
        let pair = if g.contains(&base.swap(i3, a1)) {
            [a1, a2]
        } else if g.contains(&base.swap(i3, a2)) {
            [a2, a1]
        } else {
            continue;
        };
        out.push(Frame { hub: base.union(&c), mode: HubMode::Remove, triple: [i1, i2, i3], pair, extra: i3 });
    }
    for &a3 in base.complement(g.n()).minus(&c).elems() {
        let pair = if g.contains(&base.swap(i1, a3)) {
            [i1, i2]
        } else if g.contains(&base.swap(i2, a3)) {
            [i2, i1]
        } else {
            continue;
        };
        out.push(Frame { hub: base.minus(&r), mode: HubMode::Adjoin, triple: [a1, a2, a3], pair, extra: a3 });
    }
    out
}

/// A K₅ or K₃,₃ realised by bases around a non-planar key.
///
/// Candidates for the extra index are tried in increasing order, row side first; the
/// K₅ map is preferred, then the K₃,₃ map under relabelings, then an exhaustive search
/// over the same vertex pool.
pub fn kuratowski_witness<F: BasisFamily + ?Sized>(g: &F, record: &KeyRecord) -> Result<KuratowskiWitness, KeyError> {
    if record.class != KeyClass::Key {
        return Err(KeyError::NotAKey);
    }
    if is_planar(record, g)? {
        return Err(KeyError::Planar);
    }
    let fr = frames(g, record);
    if fr.is_empty() {
        return Err(KeyError::NoWitnessIndex);
    }
    fr.iter()
        .find_map(|f| f.k5(g))
        .or_else(|| fr.iter().find_map(|f| f.k33(g)))
        .or_else(|| fr.iter().find_map(|f| f.brute(g)))
        .ok_or(KeyError::NoWitness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Rational;
    use crate::matrix::{h_table, SymbolicMatrix};
    use crate::matroid::Matroid;

    // A sparse 3×7 pattern; columns i,j,m,α,β,γ,δ = 1..7.
    fn example_table() -> HTermTable<Rational> {
        let l = SymbolicMatrix::from_i64(
            1,
            &[vec![1, 0, 0, 0, 1, 1, 3], vec![0, 1, 0, 0, 2, 2, 4], vec![0, 0, 1, 1, 4, 5, 0]],
        );
        let r = SymbolicMatrix::from_i64(
            1,
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![2, 3, 7], vec![5, -1, 2], vec![-3, 4, 1], vec![1, 6, -5]],
        );
        h_table(&l, &r).unwrap()
    }

    #[test]
    fn example_classes() {
        let t = example_table();
        let b = Subset::of(&[1, 2, 3]);
        let class = |r, c| classify_rectangle(&t, &b, r, c).unwrap().class;
        assert_eq!(class((1, 2), (5, 7)), KeyClass::Key);
        assert_eq!(class((1, 2), (6, 7)), KeyClass::Key);
        assert_eq!(class((1, 2), (5, 6)), KeyClass::WeakKey);
        assert_eq!(class((1, 2), (4, 5)), KeyClass::NotObservable);
        assert_eq!(class((1, 3), (4, 7)), KeyClass::Observable);
        assert!(classify_rectangle(&t, &b, (1, 4), (5, 6)).is_err());
    }

    #[test]
    fn transport_round_trip_and_rejection() {
        let t = example_table();
        let b = Subset::of(&[1, 2, 3]);
        let key = classify_rectangle(&t, &b, (1, 2), (6, 7)).unwrap();
        let moved = transport_key(&t, &key, 2, 6).unwrap();
        assert_eq!(moved.class, KeyClass::Key);
        let back = transport_key(&t, &moved, 6, 2).unwrap();
        assert_eq!((back.basis, back.rows, back.cols), (key.basis.clone(), key.rows, key.cols));
        let weak = classify_rectangle(&t, &b, (1, 2), (5, 6)).unwrap();
        assert!(matches!(transport_path(&t, &weak, &[(1, 5), (2, 6)]), Err(KeyError::LeavesMatroid(_))));
    }

    #[test]
    fn generic_keys_are_nonplanar_with_k5() {
        let g = Matroid::from_bases(6, 3, crate::matrix::subsets(6, 3)).unwrap();
        let key = find_nonplanar_key(&g, g.bases()).unwrap();
        let w = kuratowski_witness(&g, &key).unwrap();
        assert_eq!(w.kind, WitnessKind::K5);
        assert_eq!(w.edges.len(), 10);
        assert!(!w.transposed);
    }
}
