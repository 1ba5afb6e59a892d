//! Generators for the non-integrable families, the parity oracle and the ranking-reversal demo.

pub mod replication;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::laurent::{rational, Coeff, ExpVec, LaurentPoly, Rational};
use crate::matrix::{genericity_check, subsets, Subset, SymbolicMatrix};
use crate::matroid::compute_matroid;
use crate::QPoly;

/// Retries for rejection sampling of generic constants.
pub const MAX_RETRIES: usize = 64;

/// ξ = λ·t keeps every unit away from the special value 1 at t = 1.
pub const UNIT_SCALE: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("no generic sample for {family} after {tries} tries")]
    Exhausted { family: &'static str, tries: usize },
    #[error("parity oracle disagrees on {0}")]
    OracleMismatch(Subset),
}

/// A generated (L, R) pair with provenance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub family: &'static str,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub vars: Vec<String>,
    pub l: SymbolicMatrix<Rational>,
    pub r: SymbolicMatrix<Rational>,
    pub notes: Vec<String>,
}

/// Serializes rationals (and nested vectors of them) as "p/q" strings.
mod q_str {
    use super::Rational;
    use serde::Serializer;

    pub trait AsStr {
        fn to_value(&self) -> serde_json::Value;
    }
    impl AsStr for Rational {
        fn to_value(&self) -> serde_json::Value {
            serde_json::Value::String(self.to_string())
        }
    }
    impl<T: AsStr> AsStr for Vec<T> {
        fn to_value(&self) -> serde_json::Value {
            serde_json::Value::Array(self.iter().map(AsStr::to_value).collect())
        }
    }
    pub fn serialize<T: AsStr, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&v.to_value(), s)
    }
}

/// Small random rational: numerator in [−9, 9]∖{0}, denominator in [1, 5].
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-9..=9);
    }
    rational(num, rng.gen_range(1..=5))
}

fn cst(nvars: usize, v: &Rational) -> QPoly {
    LaurentPoly::constant(nvars, v.clone())
}

fn unit(nvars: usize, e: i64) -> QPoly {
    LaurentPoly::var(nvars, 0, e).scale(&Rational::from_integer(UNIT_SCALE.into()).pow(e as i32))
}

/// Every h over 𝔾(L) is a monomial and R is generic.
pub fn is_certifiable(l: &SymbolicMatrix<Rational>, r: &SymbolicMatrix<Rational>) -> bool {
    let Ok(g) = compute_matroid(l) else { return false };
    g.bases().iter().all(|b| r.maximal_minor(b).expect("sized").is_unit()) && genericity_check(r)
}

fn from_columns(nvars: usize, cols: &[Vec<QPoly>]) -> SymbolicMatrix<Rational> {
    let k = cols[0].len();
    SymbolicMatrix::from_fn(cols.len(), k, nvars, |r, c| cols[r][c].clone())
}

/// L₀ = (I_k | I_k).
pub fn l0(k: usize) -> SymbolicMatrix<Rational> {
    SymbolicMatrix::from_fn(k, 2 * k, 1, |r, c| LaurentPoly::from_i64(1, (c % k == r) as i64))
}

/// The skew-symmetric family R₀(τ) = (I_k | τ·𝟏𝟏ᵀ + S)ᵀ with τ = λt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkewFamily {
    pub k: usize,
    #[serde(with = "q_str")]
    pub s: Vec<Vec<Rational>>,
}

impl SkewFamily {
    pub fn random(k: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut s = vec![vec![Rational::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let v = random_rational(rng);
                s[j][i] = -v.clone();
                s[i][j] = v;
            }
        }
        SkewFamily { k, s }
    }

    pub fn l(&self) -> SymbolicMatrix<Rational> {
        l0(self.k)
    }

    /// R₀ with the unit τ = t^{e}·λ^{e} substituted for τ.
    pub fn r_with_tau(&self, tau: &QPoly) -> SymbolicMatrix<Rational> {
        let (k, d) = (self.k, tau.nvars());
        SymbolicMatrix::from_fn(2 * k, k, d, |row, c| {
            if row < k {
                LaurentPoly::from_i64(d, (row == c) as i64)
            } else {
                tau + &cst(d, &self.s[c][row - k])
            }
        })
    }

    pub fn r(&self) -> SymbolicMatrix<Rational> {
        self.r_with_tau(&unit(1, 1))
    }
}

pub fn gen_principal_minor_ce(k: usize, seed: u64) -> Result<Instance, GenError> {
    if k < 2 {
        return Err(GenError::BadParameter("k must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let fam = SkewFamily::random(k, &mut rng);
        let (l, r) = (fam.l(), fam.r());
        if is_certifiable(&l, &r) {
            return Ok(Instance {
                family: "principal-minor",
                params: json!({ "k": k, "tau": format!("{UNIT_SCALE}*t1"), "S": fam.s.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>() }),
                seed: Some(seed),
                vars: vec!["t1".into()],
                l,
                r,
                notes: Vec::new(),
            });
        }
    }
    Err(GenError::Exhausted { family: "principal-minor", tries: MAX_RETRIES })
}

/// Exact determinant over ℚ by Gaussian elimination.
pub fn rat_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            let f = &m[r][c] / &piv;
            if f.is_zero() {
                continue;
            }
            for x in c..n {
                let v = &f * &m[c][x];
                m[r][x] -= v;
            }
        }
    }
    det
}

/// Solves m·x = b over ℚ when m is invertible.
pub fn rat_solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().zip(b).map(|(row, v)| row.iter().cloned().chain([v.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in c..=n {
            a[c][x] = &a[c][x] / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for x in c..=n {
                    let v = &f * &a[c][x];
                    a[r][x] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

fn quad_form(m: &[Vec<Rational>], v: &[Rational]) -> Option<Rational> {
    let x = rat_solve(m, v)?;
    Some(v.iter().zip(&x).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
}

/// Degree and |coefficient| of det(τ𝟏𝟏ᵀ + S_A) from the matrix determinant lemma and a Schur complement.
fn parity_shortcut(s: &[Vec<Rational>], a: &[usize]) -> Option<(i64, Rational)> {
    let sub = |idx: &[usize]| -> Vec<Vec<Rational>> { idx.iter().map(|&i| idx.iter().map(|&j| s[i][j].clone()).collect()).collect() };
    let ones = |m: usize| vec![Rational::one(); m];
    if a.is_empty() {
        return Some((0, Rational::one()));
    }
    if a.len().is_multiple_of(2) {
        // det(M + τ𝟏𝟏ᵀ) = det M·(1 + τ𝟏ᵀM⁻¹𝟏) and 𝟏ᵀM⁻¹𝟏 = 0 for skew M.
        let m = sub(a);
        let det = rat_det(m.clone());
        if det.is_zero() || !quad_form(&m, &ones(a.len()))?.is_zero() {
            return None;
        }
        return Some((0, det.abs()));
    }
    // Schur complement of the 1×1 block (τ): K + τ⁻¹ssᵀ with K = S_{A'} + s𝟏ᵀ − 𝟏sᵀ skew.
    let (head, rest) = (a[0], &a[1..]);
    let sv: Vec<Rational> = rest.iter().map(|&w| s[head][w].clone()).collect();
    let k: Vec<Vec<Rational>> = rest
        .iter()
        .enumerate()
        .map(|(u, &i)| rest.iter().enumerate().map(|(w, &j)| &s[i][j] + &sv[u] - &sv[w]).collect())
        .collect();
    let det = rat_det(k.clone());
    if det.is_zero() || (!rest.is_empty() && !quad_form(&k, &sv)?.is_zero()) {
        return None;
    }
    Some((1, det.abs()))
}

/// deg_τ Δ_{R₀}(𝓘) on every basis of 𝔾(L₀), computed from symbolic minors and from the
/// matrix determinant lemma and Schur complement; any disagreement is an error.
pub fn parity_oracle(fam: &SkewFamily) -> Result<BTreeMap<Subset, i64>, GenError> {
    let k = fam.k;
    let r = fam.r();
    let g = compute_matroid(&fam.l()).expect("L₀ has full rank");
    let mut out = BTreeMap::new();
    for b in g.bases() {
        let minor = r.maximal_minor(b).expect("sized");
        let direct = minor.as_unit().map(|(e, c)| (e.0[0], c.abs() / Rational::from_integer(UNIT_SCALE.into()).pow(e.0[0] as i32)));
        let comp: Vec<usize> = (0..k).filter(|&i| !b.contains(i + 1)).collect();
        let short = parity_shortcut(&fam.s, &comp);
        match (direct, short) {
            (Some(d), Some(s)) if d == s => {
                out.insert(b.clone(), d.0);
            }
            _ => return Err(GenError::OracleMismatch(b.clone())),
        }
    }
    Ok(out)
}

/// L_w = (I_k | [𝟏_{2×(p+1)} 0; 0 I_{k−2}]).
pub fn weak_keys_l(k: usize, p: usize) -> SymbolicMatrix<Rational> {
    let n = 2 * k + p - 1;
    SymbolicMatrix::from_fn(k, n, 1, |r, c| {
        let v = if c < k {
            (r == c) as i64
        } else if c < k + p + 1 {
            (r < 2) as i64
        } else {
            (r >= 2 && c - (k + p + 1) == r - 2) as i64
        };
        LaurentPoly::from_i64(1, v)
    })
}

/// Free constants of the weak-keys family; a = i⁻¹ and g holds the strictly lower part of S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakKeysParams {
    pub k: usize,
    pub p: usize,
    #[serde(with = "q_str")]
    pub d: Vec<Rational>,
    #[serde(with = "q_str")]
    pub a: Vec<Rational>,
    #[serde(with = "q_str")]
    pub c: Vec<Vec<Rational>>,
    #[serde(with = "q_str")]
    pub g: Vec<Vec<Rational>>,
}

impl WeakKeysParams {
    pub fn random(k: usize, p: usize, rng: &mut ChaCha8Rng) -> Self {
        let m = k - 2;
        let d = (0..p).map(|_| random_rational(rng)).collect();
        let a = (0..m).map(|_| random_rational(rng)).collect();
        let c = (0..m).map(|_| (0..p).map(|_| random_rational(rng)).collect()).collect();
        let g = (0..m).map(|s| (0..s).map(|_| random_rational(rng)).collect()).collect();
        WeakKeysParams { k, p, d, a, c, g }
    }

    /// S_{s,s} = 1 and S_{s,u} = i_s⁻¹i_u(1 − S_{u,s}) + 1.
    pub fn s(&self, s: usize, u: usize) -> Rational {
        match s.cmp(&u) {
            std::cmp::Ordering::Equal => Rational::one(),
            std::cmp::Ordering::Greater => self.g[s][u].clone(),
            std::cmp::Ordering::Less => &self.a[s] / &self.a[u] * (Rational::one() - &self.g[u][s]) + Rational::one(),
        }
    }

    pub fn r(&self) -> SymbolicMatrix<Rational> {
        let (k, p, m) = (self.k, self.p, self.k - 2);
        let xi = unit(1, 1);
        let one = Rational::one();
        let mut cols: Vec<Vec<QPoly>> = (0..k).map(|i| (0..k).map(|j| LaurentPoly::from_i64(1, (i == j) as i64)).collect()).collect();
        let mut first = vec![LaurentPoly::one(1), xi.clone()];
        first.extend(self.a.iter().map(|a| &xi.scale(a) - &LaurentPoly::one(1)));
        cols.push(first);
        for c in 0..p {
            let mut col = vec![LaurentPoly::one(1), cst(1, &self.d[c])];
            col.extend((0..m).map(|s| cst(1, &self.c[s][c])));
            cols.push(col);
        }
        for u in 0..m {
            let mut col = vec![LaurentPoly::from_i64(1, -1), cst(1, &(&one / &self.a[u]))];
            col.extend((0..m).map(|s| cst(1, &self.s(s, u))));
            cols.push(col);
        }
        from_columns(1, &cols)
    }
}

pub fn gen_weak_keys_ce(k: usize, p: usize, seed: u64) -> Result<Instance, GenError> {
    if k < 3 || p < 1 {
        return Err(GenError::BadParameter("need k ≥ 3 and p ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = weak_keys_l(k, p);
    for _ in 0..MAX_RETRIES {
        let prm = WeakKeysParams::random(k, p, &mut rng);
        let r = prm.r();
        if is_certifiable(&l, &r) {
            return Ok(Instance {
                family: "weak-keys",
                params: json!({ "k": k, "p": p, "xi": format!("{UNIT_SCALE}*t1"), "constants": prm }),
                seed: Some(seed),
                vars: vec!["t1".into()],
                l,
                r,
                notes: Vec::new(),
            });
        }
    }
    Err(GenError::Exhausted { family: "weak-keys", tries: MAX_RETRIES })
}

/// The explicit odd-type R at (k, p) = (3, 2), with ξ given as a Laurent polynomial.
pub fn odd_type_r(xi: &QPoly, c: &QPoly) -> SymbolicMatrix<Rational> {
    let d = xi.nvars();
    let one = LaurentPoly::one(d);
    let xinv = xi.unit_inverse().expect("ξ is a unit");
    let cols = vec![
        vec![one.clone(), LaurentPoly::zero(d), LaurentPoly::zero(d)],
        vec![LaurentPoly::zero(d), one.clone(), LaurentPoly::zero(d)],
        vec![LaurentPoly::zero(d), LaurentPoly::zero(d), one.clone()],
        vec![one.clone(), one.clone(), one.clone()],
        vec![one.clone(), -c, -&(c * &(xi + &one))],
        vec![one.clone(), c * xi, -&(c * &(&one + &xinv))],
        vec![one.clone(), c * &(xi - &one), -c],
    ];
    from_columns(d, &cols)
}

pub fn gen_odd_type_ce(c: &Rational) -> Result<Instance, GenError> {
    if c.is_zero() {
        return Err(GenError::BadParameter("c must be nonzero".into()));
    }
    let r = odd_type_r(&unit(1, 1), &cst(1, c));
    let mut notes = Vec::new();
    if !genericity_check(&r) {
        notes.push("R has a vanishing maximal minor for this c".into());
    }
    Ok(Instance {
        family: "odd-type",
        params: json!({ "c": c.to_string(), "xi": format!("{UNIT_SCALE}*t1") }),
        seed: None,
        vars: vec!["t1".into()],
        l: weak_keys_l(3, 2),
        r,
        notes,
    })
}

/// L_p = (I_k | [[1,1],[1,−1]] ⊕ I_{k−2}).
pub fn planar_key_l(k: usize) -> SymbolicMatrix<Rational> {
    SymbolicMatrix::from_fn(k, 2 * k, 1, |r, c| {
        let v = if c < k {
            (r == c) as i64
        } else if c < k + 2 {
            match (r, c - k) {
                (0, _) | (1, 0) => 1,
                (1, 1) => -1,
                _ => 0,
            }
        } else {
            (r >= 2 && c - k == r) as i64
        };
        LaurentPoly::from_i64(1, v)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanarKeyParams {
    pub k: usize,
    /// c_u, u = 1..k−2.
    #[serde(with = "q_str")]
    pub c: Vec<Rational>,
    /// μ_{u,w} for u < w, stored at mu[u][w].
    #[serde(with = "q_str")]
    pub mu: Vec<Vec<Rational>>,
    #[serde(with = "q_str")]
    pub theta: Rational,
}

impl PlanarKeyParams {
    pub fn random(k: usize, rng: &mut ChaCha8Rng) -> Self {
        let m = k - 2;
        let c = (0..m).map(|_| random_rational(rng)).collect();
        let mu = (0..m).map(|u| (0..m).map(|w| if w > u { random_rational(rng) } else { Rational::zero() }).collect()).collect();
        PlanarKeyParams { k, c, mu, theta: random_rational(rng) }
    }

    fn z(&self, u: usize, w: usize) -> Rational {
        let one = Rational::one();
        match u.cmp(&w) {
            std::cmp::Ordering::Equal => one,
            std::cmp::Ordering::Less => one + &self.c[w] * &self.mu[u][w] / &self.c[u],
            std::cmp::Ordering::Greater => one - &self.c[w] * &self.mu[w][u] / &self.c[u],
        }
    }

    /// R_p with ζ = τ² and τ = λt.
    pub fn r(&self) -> SymbolicMatrix<Rational> {
        let (k, m) = (self.k, self.k - 2);
        let tau2 = unit(1, 2);
        let z = || LaurentPoly::zero(1);
        let one = || LaurentPoly::one(1);
        let mut rows: Vec<Vec<QPoly>> = Vec::new();
        let mut r1 = vec![-&tau2, tau2.clone()];
        r1.extend((0..m).map(|_| z()));
        r1.extend([z(), LaurentPoly::from_i64(1, -1)]);
        r1.extend(self.c.iter().map(|c| cst(1, &(c * c))));
        rows.push(r1);
        let mut r2 = vec![cst(1, &(&self.theta * &self.theta + Rational::one())), one()];
        r2.extend((0..m).map(|_| z()));
        r2.extend([one(), z()]);
        r2.extend((0..m).map(|_| one()));
        rows.push(r2);
        for u in 0..m {
            let mut row = vec![z(), z()];
            row.extend((0..m).map(|w| LaurentPoly::from_i64(1, (w == u) as i64)));
            row.push(one());
            row.push(cst(1, &(-(Rational::one() / (&self.c[u] * &self.c[u])))));
            row.extend((0..m).map(|w| cst(1, &self.z(u, w))));
            rows.push(row);
        }
        SymbolicMatrix::from_fn(2 * k, k, 1, |r, c| rows[c][r].clone())
    }
}

pub fn gen_planar_key_ce(
    k: usize,
    c: Option<Vec<Rational>>,
    mu: Option<Vec<Vec<Rational>>>,
    seed: u64,
) -> Result<Instance, GenError> {
    if k < 4 {
        return Err(GenError::BadParameter("k must be at least 4".into()));
    }
    let m = k - 2;
    if c.as_ref().is_some_and(|c| c.len() != m || c.iter().any(|x| x.is_zero())) {
        return Err(GenError::BadParameter(format!("c needs {m} nonzero entries")));
    }
    if mu.as_ref().is_some_and(|mu| mu.len() != m || mu.iter().any(|r| r.len() != m)) {
        return Err(GenError::BadParameter(format!("μ must be {m}×{m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = planar_key_l(k);
    for _ in 0..MAX_RETRIES {
        let mut prm = PlanarKeyParams::random(k, &mut rng);
        if let Some(c) = &c {
            prm.c = c.clone();
        }
        if let Some(mu) = &mu {
            prm.mu = mu.clone();
        }
        let r = prm.r();
        if is_certifiable(&l, &r) {
            return Ok(Instance {
                family: "planar-key",
                params: json!({ "k": k, "zeta": "tau^2", "tau": format!("{UNIT_SCALE}*t1"), "constants": prm }),
                seed: Some(seed),
                vars: vec!["t1".into()],
                l,
                r,
                notes: vec!["θ is read as a free constant and ζ = τ²".into()],
            });
        }
    }
    Err(GenError::Exhausted { family: "planar-key", tries: MAX_RETRIES })
}

/// Opposite ratio-norm comparisons for the same pair (i, α) in two bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankingDemo {
    pub k: usize,
    pub psi: Vec<ExpVec>,
    pub i: usize,
    pub alpha: usize,
    pub j: usize,
    pub beta: usize,
    pub basis_i: Subset,
    pub basis_j: Subset,
    /// t₀ = (M, …, M).
    #[serde(with = "q_str")]
    pub m: Rational,
    /// ‖Δ(𝓘^i_α)Δ(𝓘)⁻¹‖ at t₀.
    #[serde(with = "q_str")]
    pub ratio_i: Rational,
    /// ‖Δ(𝓙^i_α)Δ(𝓙)⁻¹‖ at t₀.
    #[serde(with = "q_str")]
    pub ratio_j: Rational,
    pub above_at_i: bool,
    pub below_at_j: bool,
}

fn ratio_norm<C: Coeff>(r: &SymbolicMatrix<C>, num: &Subset, den: &Subset, point: &[C]) -> Rational {
    let a = r.maximal_minor(num).expect("sized").eval(point).expect("nonzero point");
    let b = r.maximal_minor(den).expect("sized").eval(point).expect("nonzero point");
    (a.norm_sq() / b.norm_sq()).abs()
}

/// Evaluates R̃₀ = diag(t^{ψ(α)−ψ(1)})·R₀(t^{ψ(n)−ψ(1)}) on 𝓘 = [k] and 𝓙 = 𝓘^j_β at a
/// point t₀ = (M, …, M), doubling M until both strict comparisons hold. Ratios are squared norms.
pub fn iia_demo(k: usize, psi: &[ExpVec], seed: u64) -> Result<RankingDemo, GenError> {
    let n = 2 * k;
    if k < 3 || psi.len() != n {
        return Err(GenError::BadParameter(format!("need k ≥ 3 and ψ on {n} columns")));
    }
    let d = psi[0].0.len();
    if (0..n).any(|a| (a + 1..n).any(|b| psi[a] == psi[b])) {
        return Err(GenError::BadParameter("ψ must be injective".into()));
    }
    let total = |e: &ExpVec| e.0.iter().sum::<i64>();
    let tau_deg = total(&psi[n - 1].sub(&psi[0]));
    let basis = Subset::range(1, k);
    // (i, α) with h(𝓘^i_α) ≠ 0 forces α = i + k; the shortcuts above give degrees ±1 in τ.
    let (i, alpha) = (1..=k)
        .map(|i| (i, i + k))
        .find(|&(i, a)| total(&psi[a - 1].sub(&psi[i - 1])).abs() < tau_deg)
        .ok_or_else(|| GenError::BadParameter("no pair separates the two bases under this ψ".into()))?;
    let j = (1..=k).find(|&j| j != i && j != n).expect("k ≥ 3");
    let beta = j + k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fam = (0..MAX_RETRIES)
        .map(|_| SkewFamily::random(k, &mut rng))
        .find(|f| is_certifiable(&f.l(), &f.r()))
        .ok_or(GenError::Exhausted { family: "iia", tries: MAX_RETRIES })?;
    let tau = LaurentPoly::monomial(psi[n - 1].sub(&psi[0]), Rational::one());
    let diag: Vec<QPoly> = psi.iter().map(|e| LaurentPoly::monomial(e.sub(&psi[0]), Rational::one())).collect();
    let r = fam.r_with_tau(&tau).scale_rows(&diag);
    let (bi, bj) = (basis.clone(), basis.swap(j, beta));
    let one = Rational::one();
    let mut m = rational(2, 1);
    for _ in 0..256 {
        let point = vec![m.clone(); d];
        let ri = ratio_norm(&r, &bi.swap(i, alpha), &bi, &point);
        let rj = ratio_norm(&r, &bj.swap(i, alpha), &bj, &point);
        if ri > one && rj < one {
            return Ok(RankingDemo {
                k,
                psi: psi.to_vec(),
                i,
                alpha,
                j,
                beta,
                basis_i: bi,
                basis_j: bj,
                m,
                ratio_i: ri,
                ratio_j: rj,
                above_at_i: true,
                below_at_j: true,
            });
        }
        m *= rational(2, 1);
    }
    Err(GenError::Exhausted { family: "iia", tries: 256 })
}

/// Checks the ratio comparisons of a demo at a new scale M.
pub fn iia_holds_at(demo: &RankingDemo, seed: u64, m: &Rational) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(fam) = (0..MAX_RETRIES).map(|_| SkewFamily::random(demo.k, &mut rng)).find(|f| is_certifiable(&f.l(), &f.r())) else {
        return false;
    };
    let n = 2 * demo.k;
    let psi = &demo.psi;
    let tau = LaurentPoly::monomial(psi[n - 1].sub(&psi[0]), Rational::one());
    let diag: Vec<QPoly> = psi.iter().map(|e| LaurentPoly::monomial(e.sub(&psi[0]), Rational::one())).collect();
    let r = fam.r_with_tau(&tau).scale_rows(&diag);
    let point = vec![m.clone(); psi[0].0.len()];
    let one = Rational::one();
    ratio_norm(&r, &demo.basis_i.swap(demo.i, demo.alpha), &demo.basis_i, &point) > one
        && ratio_norm(&r, &demo.basis_j.swap(demo.i, demo.alpha), &demo.basis_j, &point) < one
}

/// All k-subsets, for scans that go beyond 𝔾(L).
pub fn all_subsets(n: usize, k: usize) -> Vec<Subset> {
    subsets(n, k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrability::{rigidity_report, Verdict};
    use crate::matroid::BasisFamily;

    #[test]
    fn weak_keys_pattern_shape() {
        let l = weak_keys_l(5, 4);
        assert_eq!((l.rows(), l.cols()), (5, 13));
        let g = compute_matroid(&l).unwrap();
        assert!(g.contains(&Subset::range(1, 5)));
    }

    #[test]
    fn planar_pattern_shape() {
        let l = planar_key_l(6);
        let expect: Vec<Vec<i64>> = vec![
            vec![1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0],
            vec![0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1],
        ];
        assert_eq!(l, SymbolicMatrix::from_i64(1, &expect));
    }

    #[test]
    fn k2_odd_case_has_degree_one() {
        let inst = gen_principal_minor_ce(2, 7).unwrap();
        let m = inst.r.maximal_minor(&Subset::of(&[2, 3])).unwrap();
        assert_eq!(m.unit_exponent(), Some(ExpVec(vec![1])));
    }

    #[test]
    fn rational_helpers() {
        let m = vec![vec![rational(0, 1), rational(2, 1)], vec![rational(-2, 1), rational(0, 1)]];
        assert_eq!(rat_det(m.clone()), rational(4, 1));
        assert!(quad_form(&m, &[rational(1, 1), rational(1, 1)]).unwrap().is_zero());
    }

    #[test]
    fn every_family_is_a_certified_counterexample() {
        let fams = [
            gen_principal_minor_ce(4, 1).unwrap(),
            gen_weak_keys_ce(3, 1, 2).unwrap(),
            gen_odd_type_ce(&rational(2, 1)).unwrap(),
            gen_planar_key_ce(4, None, None, 3).unwrap(),
        ];
        for inst in &fams {
            assert!(is_certifiable(&inst.l, &inst.r), "{}", inst.family);
            let rep = rigidity_report(&inst.l, &inst.r).unwrap();
            assert_eq!(rep.verdict, Verdict::NonIntegrableWitness, "{} {:?}", inst.family, rep.notes);
        }
    }

    fn witness_has(inst: &Instance, rows: (usize, usize), cols: (usize, usize)) -> bool {
        let k = inst.l.rows();
        let rep = rigidity_report(&inst.l, &inst.r).unwrap();
        let base = Subset::range(1, k);
        let y = crate::yterms::y_value(&inst.r, &base, rows, cols).unwrap();
        !y.is_constant() && rep.witness_rectangles.iter().any(|w| w.basis == base && w.rows == rows && w.cols == cols)
    }

    #[test]
    fn weak_keys_witness_rectangle() {
        for (k, p) in [(3, 1), (4, 2), (5, 4)] {
            let inst = gen_weak_keys_ce(k, p, 11).unwrap();
            assert!(witness_has(&inst, (1, 2), (k + 1, k + 2)), "({k},{p})");
        }
    }

    #[test]
    fn planar_key_witness_rectangle() {
        for k in [4, 5, 6] {
            let inst = gen_planar_key_ce(k, None, None, 5).unwrap();
            assert!(witness_has(&inst, (1, 3), (k + 1, k + 3)), "k={k}");
            let rep = rigidity_report(&inst.l, &inst.r).unwrap();
            assert!(!rep.flags.nonplanar_key, "k={k}");
        }
    }

    #[test]
    fn parity_law_via_oracle() {
        for k in [2, 3, 4, 5, 6] {
            for seed in 0..3 {
                let inst = gen_principal_minor_ce(k, seed).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let fam = (0..MAX_RETRIES).map(|_| SkewFamily::random(k, &mut rng)).find(|f| is_certifiable(&f.l(), &f.r())).unwrap();
                assert_eq!(fam.r(), inst.r);
                let degs = parity_oracle(&fam).unwrap();
                assert_eq!(degs.len(), 1 << k);
                for (b, d) in degs {
                    let missing = (1..=k).filter(|&i| !b.contains(i)).count();
                    assert_eq!(d, (missing % 2) as i64, "{b}");
                }
            }
        }
    }

    #[test]
    fn ranking_reversal() {
        let psi: Vec<ExpVec> = (1..=12).map(|a| ExpVec(vec![a])).collect();
        let demo = iia_demo(6, &psi, 0).unwrap();
        assert!(demo.above_at_i && demo.below_at_j);
        assert!(iia_holds_at(&demo, 0, &(&demo.m * rational(4, 1))));
        let flat: Vec<ExpVec> = (0..12).map(|_| ExpVec(vec![0])).collect();
        assert!(iia_demo(6, &flat, 0).is_err());
    }

    #[test]
    fn odd_and_even_configurations_occur() {
        use crate::yterms::{classify_configuration, upsilon};
        let mut kinds = std::collections::BTreeSet::new();
        let fams = [gen_odd_type_ce(&rational(3, 1)).unwrap(), gen_weak_keys_ce(4, 2, 1).unwrap()];
        for inst in &fams {
            let (n, k) = (inst.r.rows(), inst.r.cols());
            let base = Subset::range(1, k);
            let comp = base.complement(n);
            for (i, j, m) in (1..=k).flat_map(|i| (1..=k).flat_map(move |j| (1..=k).map(move |m| (i, j, m)))) {
                if i >= j || m == i || m == j {
                    continue;
                }
                for &a in comp.elems() {
                    for &b in comp.elems() {
                        for &w in comp.elems() {
                            if a >= b || w == a || w == b {
                                continue;
                            }
                            let Ok((p, mi, th)) = upsilon(&inst.r, &base, (i, j), (a, b), (m, w)) else { continue };
                            if let Ok(c) = classify_configuration(&p, &mi, &th) {
                                kinds.insert(format!("{}:{}", inst.family, c.kind()));
                            }
                        }
                    }
                }
            }
        }
        assert!(kinds.contains("odd-type:odd") && kinds.contains("odd-type:even"), "{kinds:?}");
    }
}

