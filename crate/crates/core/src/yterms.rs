//! Y-terms: signed cross-ratios of R-minors and the algebra around them.

use serde::Serialize;
use thiserror::Error;

use crate::laurent::{Coeff, LaurentError, LaurentPoly, PolyRatio};
use crate::matrix::{plucker_signs, HTermTable, MatrixError, MinorCache, Subset, SymbolicMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YError {
    #[error("minor on {0} vanishes")]
    VanishingMinor(Subset),
    #[error("degenerate indices")]
    Degenerate,
    #[error("indices do not fit the basis {0}")]
    BadIndices(Subset),
    #[error("value {0} is excluded for this rule")]
    ExcludedValue(&'static str),
    #[error("terms are not chainable")]
    NotChainable,
    #[error("rectangle is not observable")]
    NotObservable,
    #[error("Υ values violate the scaling identity")]
    ScalingViolation,
    #[error("Υ values match neither configuration shape")]
    NoShape,
    #[error("non-integer exponent in the odd-type relation")]
    HalfInteger,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Source of maximal minors of R.
pub trait MinorSource<C: Coeff> {
    fn minor(&self, s: &Subset) -> LaurentPoly<C>;
    fn n(&self) -> usize;
    fn nvars(&self) -> usize;
}

impl<C: Coeff> MinorSource<C> for SymbolicMatrix<C> {
    fn minor(&self, s: &Subset) -> LaurentPoly<C> {
        self.maximal_minor(s).expect("sized subset")
    }
    fn n(&self) -> usize {
        SymbolicMatrix::n(self)
    }
    fn nvars(&self) -> usize {
        SymbolicMatrix::nvars(self)
    }
}

impl<C: Coeff> MinorSource<C> for MinorCache<C> {
    fn minor(&self, s: &Subset) -> LaurentPoly<C> {
        self.get(s)
    }
    fn n(&self) -> usize {
        self.matrix().n()
    }
    fn nvars(&self) -> usize {
        self.matrix().nvars()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YTerm<C: Coeff> {
    pub basis: Subset,
    pub upper: (usize, usize),
    pub lower: (usize, usize),
    pub value: PolyRatio<C>,
}

impl<C: Coeff> YTerm<C> {
    pub fn is_degenerate(&self) -> bool {
        self.upper.0 == self.upper.1 || self.lower.0 == self.lower.1
    }
}

fn nonzero_minor<C: Coeff, S: MinorSource<C> + ?Sized>(src: &S, s: &Subset) -> Result<LaurentPoly<C>, YError> {
    let m = src.minor(s);
    if m.is_zero() {
        Err(YError::VanishingMinor(s.clone()))
    } else {
        Ok(m)
    }
}

fn check_indices(basis: &Subset, n: usize, upper: &[usize], lower: &[usize]) -> Result<(), YError> {
    let ok = upper.iter().all(|&x| basis.contains(x))
        && lower.iter().all(|&x| x >= 1 && x <= n && !basis.contains(x));
    if ok {
        Ok(())
    } else {
        Err(YError::BadIndices(basis.clone()))
    }
}

/// Y(𝓘)^{ij}_{αβ} = c₁c₂ · Δ(𝓘^i_α)/Δ(𝓘^i_β) · Δ(𝓘^j_β)/Δ(𝓘^j_α), and −1 on degenerate indices.
pub fn y_value<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    (i, j): (usize, usize),
    (a, b): (usize, usize),
) -> Result<PolyRatio<C>, YError> {
    check_indices(basis, src.n(), &[i, j], &[a, b])?;
    let d = src.nvars();
    if i == j || a == b {
        return Ok(PolyRatio::from_i64(d, -1));
    }
    let (c1, c2) = plucker_signs(i, j, a, b);
    let num = &nonzero_minor(src, &basis.swap(i, a))? * &nonzero_minor(src, &basis.swap(j, b))?;
    let den = &nonzero_minor(src, &basis.swap(i, b))? * &nonzero_minor(src, &basis.swap(j, a))?;
    Ok(PolyRatio::new(num.scale(&C::from_i64((c1 * c2) as i64)), den)?)
}

pub fn y_term<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    upper: (usize, usize),
    lower: (usize, usize),
) -> Result<YTerm<C>, YError> {
    Ok(YTerm { basis: basis.clone(), upper, lower, value: y_value(src, basis, upper, lower)? })
}

/// Y(𝓘^i_α)^{αj}_{iβ} = −Y(𝓘)^{ij}_{αβ} − 1.
pub fn transform_vertical<C: Coeff>(y: &YTerm<C>) -> Result<YTerm<C>, YError> {
    if y.is_degenerate() {
        return Err(YError::Degenerate);
    }
    let ((i, j), (a, b)) = (y.upper, y.lower);
    Ok(YTerm { basis: y.basis.swap(i, a), upper: (a, j), lower: (i, b), value: y.value.neg().add_i64(-1) })
}

/// Y(𝓘^i_β)^{βj}_{αi} = −1/(1 + Y(𝓘)^{ij}_{αβ}⁻¹).
pub fn transform_diagonal<C: Coeff>(y: &YTerm<C>) -> Result<YTerm<C>, YError> {
    if y.is_degenerate() {
        return Err(YError::Degenerate);
    }
    if y.value.is_zero() {
        return Err(YError::ExcludedValue("0"));
    }
    let plus_one = y.value.add_i64(1);
    if plus_one.is_zero() {
        return Err(YError::ExcludedValue("-1"));
    }
    let ((i, j), (a, b)) = (y.upper, y.lower);
    let value = y.value.neg().div(&plus_one)?;
    Ok(YTerm { basis: y.basis.swap(i, b), upper: (b, j), lower: (a, i), value })
}

/// Y^{ij}_{αβ}Y^{ij}_{βγ} = −Y^{ij}_{αγ} and Y^{im}_{αβ}Y^{mj}_{αβ} = −Y^{ij}_{αβ}.
pub fn compose<C: Coeff>(y1: &YTerm<C>, y2: &YTerm<C>) -> Result<YTerm<C>, YError> {
    if y1.basis != y2.basis {
        return Err(YError::NotChainable);
    }
    let value = y1.value.mul(&y2.value).neg();
    let (upper, lower) = if y1.upper == y2.upper && y1.lower.1 == y2.lower.0 {
        (y1.upper, (y1.lower.0, y2.lower.1))
    } else if y1.lower == y2.lower && y1.upper.1 == y2.upper.0 {
        ((y1.upper.0, y2.upper.1), y1.lower)
    } else {
        return Err(YError::NotChainable);
    };
    Ok(YTerm { basis: y1.basis.clone(), upper, lower, value })
}

/// F(X) = a·X² + b·X + c whose roots are the two Y-values compatible with the h-products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticF<C: Coeff> {
    pub a: LaurentPoly<C>,
    pub b: LaurentPoly<C>,
    pub c: LaurentPoly<C>,
}

impl<C: Coeff> QuadraticF<C> {
    pub fn eval(&self, x: &PolyRatio<C>) -> PolyRatio<C> {
        let p = |q: &LaurentPoly<C>| PolyRatio::from_poly(q.clone());
        p(&self.a).mul(x).mul(x).add(&p(&self.b).mul(x)).add(&p(&self.c))
    }

    pub fn discriminant(&self) -> LaurentPoly<C> {
        &(&self.b * &self.b) - (&(&self.a * &self.c).scale(&C::from_i64(4)))
    }

    /// Roots in the Laurent fraction field, when the discriminant is a perfect square.
    /// With a = 0 the single root −c/b is returned twice.
    pub fn roots(&self) -> Option<(PolyRatio<C>, PolyRatio<C>)> {
        if self.a.is_zero() {
            let r = PolyRatio::new(-&self.c, self.b.clone()).ok()?;
            return Some((r.clone(), r));
        }
        let s = self.discriminant().sqrt()?;
        let two_a = self.a.scale(&C::from_i64(2));
        let r1 = PolyRatio::new(&(-&self.b) + &s, two_a.clone()).ok()?;
        let r2 = PolyRatio::new(&(-&self.b) - &s, two_a).ok()?;
        Some((r1, r2))
    }
}

/// The quadratic relation between Y^{ij}_{αβ} and the observable products:
/// P₃X² + (P₂ + P₃ − P₁)X + P₂ with P₁ = h(𝓘)h(𝓘^{ij}_{αβ}), P₂ = h(𝓘^i_α)h(𝓘^j_β),
/// P₃ = h(𝓘^i_β)h(𝓘^j_α).
pub fn quadratic_f<C: Coeff>(
    table: &HTermTable<C>,
    basis: &Subset,
    upper: (usize, usize),
    lower: (usize, usize),
) -> Result<QuadraticF<C>, YError> {
    check_indices(basis, table.n, &[upper.0, upper.1], &[lower.0, lower.1])?;
    if upper.0 == upper.1 || lower.0 == lower.1 {
        return Err(YError::Degenerate);
    }
    let [p1, p2, p3] = crate::keys::chi(table, basis, upper, lower);
    if p1.is_zero() && p2.is_zero() && p3.is_zero() {
        return Err(YError::NotObservable);
    }
    Ok(QuadraticF { b: &(&p2 + &p3) - &p1, a: p3, c: p2 })
}

fn sgn(x: i64) -> i64 {
    x.signum()
}

/// ε^{a₁a₂a₃}_{δ₁δ₂δ₃} = −sign[∏(a_u−a_w)·∏(δ_x−δ_z)·∏_{r≠s}(a_r−δ_s)].
pub fn three_index_sign(a: [usize; 3], d: [usize; 3]) -> i64 {
    let (a, d) = (a.map(|x| x as i64), d.map(|x| x as i64));
    let mut s = 1;
    for u in 0..3 {
        for w in u + 1..3 {
            s *= sgn(a[u] - a[w]) * sgn(d[u] - d[w]);
        }
        for w in 0..3 {
            if u != w {
                s *= sgn(a[u] - d[w]);
            }
        }
    }
    -s
}

fn check_triple(basis: &Subset, n: usize, a: [usize; 3], d: [usize; 3]) -> Result<(), YError> {
    check_indices(basis, n, &a, &d)?;
    if a[0] == a[1] || a[0] == a[2] || a[1] == a[2] || d[0] == d[1] || d[0] == d[2] || d[1] == d[2] {
        return Err(YError::Degenerate);
    }
    Ok(())
}

/// 𝔪 = ε · Δ(𝓘)²Δ(𝓘^{a₁a₂a₃}_{δ₁δ₂δ₃}) / (Δ(𝓘^{a₁}_{δ₁})Δ(𝓘^{a₂}_{δ₂})Δ(𝓘^{a₃}_{δ₃})).
pub fn m_term<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    a: [usize; 3],
    d: [usize; 3],
) -> Result<PolyRatio<C>, YError> {
    check_triple(basis, src.n(), a, d)?;
    let base = nonzero_minor(src, basis)?;
    let triple = src.minor(&basis.exchange(&a, &d)?);
    let mut den = LaurentPoly::one(src.nvars());
    for u in 0..3 {
        den = &den * &nonzero_minor(src, &basis.swap(a[u], d[u]))?;
    }
    let num = (&(&base * &base) * &triple).scale(&C::from_i64(three_index_sign(a, d)));
    Ok(PolyRatio::new(num, den)?)
}

/// Left-hand side of the six-term identity whose value is 𝔪:
/// 1 + Y^{a₁a₂}_{δ₂δ₁} + Y^{a₁a₃}_{δ₃δ₁} + Y^{a₂a₃}_{δ₃δ₂} + Y^{a₂a₃}_{δ₃δ₂}Y^{a₁a₂}_{δ₃δ₁}
/// − (Y^{a₁a₂}_{δ₃δ₁})⁻¹Y^{a₁a₃}_{δ₃δ₁}Y^{a₁a₂}_{δ₂δ₁}.
pub fn m_identity_lhs<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    a: [usize; 3],
    d: [usize; 3],
) -> Result<PolyRatio<C>, YError> {
    check_triple(basis, src.n(), a, d)?;
    let y = |u: (usize, usize), l: (usize, usize)| y_value(src, basis, u, l);
    let y12_21 = y((a[0], a[1]), (d[1], d[0]))?;
    let y13_31 = y((a[0], a[2]), (d[2], d[0]))?;
    let y23_32 = y((a[1], a[2]), (d[2], d[1]))?;
    let y12_31 = y((a[0], a[1]), (d[2], d[0]))?;
    let last = y12_31.inv()?.mul(&y13_31).mul(&y12_21);
    Ok(y12_21.add(&y13_31).add(&y23_32).add(&y23_32.mul(&y12_31)).sub(&last).add_i64(1))
}

/// 𝔪 as the product (Y(𝓘^{a₁}_{δ₁})^{a₂a₃}_{δ₃δ₂}+1)(Y^{a₁a₂}_{δ₂δ₁}+1)(Y^{a₁a₃}_{δ₃δ₁}+1).
pub fn m_factorized<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    a: [usize; 3],
    d: [usize; 3],
) -> Result<PolyRatio<C>, YError> {
    check_triple(basis, src.n(), a, d)?;
    let moved = basis.swap(a[0], d[0]);
    let f1 = y_value(src, &moved, (a[1], a[2]), (d[2], d[1]))?.add_i64(1);
    let f2 = y_value(src, basis, (a[0], a[1]), (d[1], d[0]))?.add_i64(1);
    let f3 = y_value(src, basis, (a[0], a[2]), (d[2], d[0]))?.add_i64(1);
    Ok(f1.mul(&f2).mul(&f3))
}

/// Monic P(X) = X² + B·X + C′ with root Y^{a₂a₃}_{δ₃δ₂}·Y^{a₁a₂}_{δ₃δ₁}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticP<C: Coeff> {
    pub b: PolyRatio<C>,
    pub c: PolyRatio<C>,
}

impl<C: Coeff> QuadraticP<C> {
    /// Builds P from Y^{a₁a₂}_{δ₂δ₁}, Y^{a₁a₃}_{δ₃δ₁}, Y^{a₂a₃}_{δ₃δ₂} and 𝔪.
    pub fn from_parts(y21: &PolyRatio<C>, y31: &PolyRatio<C>, y32: &PolyRatio<C>, m: &PolyRatio<C>) -> Self {
        let b = y21.add(y31).add(y32).sub(m).add_i64(1);
        let c = y31.mul(y21).mul(y32).neg();
        QuadraticP { b, c }
    }

    pub fn eval(&self, x: &PolyRatio<C>) -> PolyRatio<C> {
        x.mul(x).add(&self.b.mul(x)).add(&self.c)
    }
}

pub fn quadratic_p<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    a: [usize; 3],
    d: [usize; 3],
) -> Result<QuadraticP<C>, YError> {
    check_triple(basis, src.n(), a, d)?;
    let y = |u: (usize, usize), l: (usize, usize)| y_value(src, basis, u, l);
    Ok(QuadraticP::from_parts(
        &y((a[0], a[1]), (d[1], d[0]))?,
        &y((a[0], a[2]), (d[2], d[0]))?,
        &y((a[1], a[2]), (d[2], d[1]))?,
        &m_term(src, basis, a, d)?,
    ))
}

/// Δ = B² − 4C′ of P, the hyperdeterminant-like discriminant.
pub fn discriminant<C: Coeff>(p: &QuadraticP<C>) -> PolyRatio<C> {
    p.b.mul(&p.b).sub(&p.c.mul(&PolyRatio::from_i64(p.b.nvars(), 4)))
}

/// Whether a ratio is the square of an element of the Laurent fraction field.
pub fn is_perfect_square<C: Coeff>(r: &PolyRatio<C>) -> bool {
    match r.to_poly() {
        Some(p) => p.sqrt().is_some(),
        None => (&r.num * &r.den).sqrt().is_some(),
    }
}

/// g = (Y(𝓘^{a₁}_{δ₁})^{a₃a₂}_{δ₂δ₃} + 1) / (Y(𝓘)^{a₃a₂}_{δ₂δ₃} + 1).
pub fn g_factor<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    a: [usize; 3],
    d: [usize; 3],
) -> Result<PolyRatio<C>, YError> {
    check_triple(basis, src.n(), a, d)?;
    let num = y_value(src, &basis.swap(a[0], d[0]), (a[2], a[1]), (d[1], d[2]))?.add_i64(1);
    let den = y_value(src, basis, (a[2], a[1]), (d[1], d[2]))?.add_i64(1);
    if den.is_zero() {
        return Err(YError::ExcludedValue("-1"));
    }
    Ok(num.div(&den)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigClass<C: Coeff> {
    AllConstant,
    /// Υ⁺ = {τ⁻¹−1, τθ⁻¹Ω}, Υ⁻ = {τ−1, Ω}; `swapped` when the roles of Υ⁺ and Υ⁻ are exchanged.
    EvenType { tau: PolyRatio<C>, omega: PolyRatio<C>, swapped: bool },
    /// Υ^{σ(+)} = {τ^{2ε₂}−1, C⁻¹}, Υ^{σ(−)} = {τ−1, −τ^{ε₁}−1} and θ = ε₂Cτ^{(1+ε₁−2ε₂)/2}.
    OddType { tau: PolyRatio<C>, c: C, eps1: i64, eps2: i64, swapped: bool },
}

impl<C: Coeff> ConfigClass<C> {
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigClass::AllConstant => "all-constant",
            ConfigClass::EvenType { .. } => "even",
            ConfigClass::OddType { .. } => "odd",
        }
    }
}

fn same_pair<C: Coeff>(x: &[PolyRatio<C>; 2], y: &[PolyRatio<C>; 2]) -> bool {
    (x[0] == y[0] && x[1] == y[1]) || (x[0] == y[1] && x[1] == y[0])
}

fn is_monic_unit<C: Coeff>(t: &PolyRatio<C>) -> bool {
    t.to_poly().and_then(|p| p.as_unit().map(|(_, c)| c.is_one())).unwrap_or(false)
}

fn ratio_pow<C: Coeff>(t: &PolyRatio<C>, e: i64) -> Result<PolyRatio<C>, YError> {
    let base = if e < 0 { t.inv()? } else { t.clone() };
    let mut acc = PolyRatio::from_i64(t.nvars(), 1);
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base);
    }
    Ok(acc)
}

fn is_unit_ratio<C: Coeff>(t: &PolyRatio<C>) -> bool {
    t.num.is_unit() && t.den.is_unit()
}

/// Sorts Υ = Υ⁺ ∪ Υ⁻ into even type, odd type or all constant.
///
/// `plus` = {Y^{mi}_{αω}, Y^{mj}_{βω}}, `minus` = {Y^{mj}_{αω}, Y^{mi}_{βω}}, and
/// `theta` = Y^{ij}_{αβ}; the scaling θ·(Y₊₁Y₊₂) = −(Y₋₁Y₋₂) must hold. Among admissible
/// parameter choices a monic τ is preferred.
pub fn classify_configuration<C: Coeff>(
    plus: &[PolyRatio<C>; 2],
    minus: &[PolyRatio<C>; 2],
    theta: &PolyRatio<C>,
) -> Result<ConfigClass<C>, YError> {
    if theta.mul(&plus[0]).mul(&plus[1]) != minus[0].mul(&minus[1]).neg() {
        return Err(YError::ScalingViolation);
    }
    let constants = plus.iter().chain(minus).filter(|y| y.is_constant()).count();
    if constants == 4 {
        return Ok(ConfigClass::AllConstant);
    }
    let theta_inv = theta.inv()?;
    let orientations = [(plus, minus, theta, false), (minus, plus, &theta_inv, true)];
    let mut found: Vec<ConfigClass<C>> = Vec::new();
    if constants % 2 == 0 {
        for (p, m, th, swapped) in orientations {
            for k in 0..2 {
                let tau = m[k].add_i64(1);
                if !is_unit_ratio(&tau) {
                    continue;
                }
                let omega = m[1 - k].clone();
                let expect = [tau.inv()?.add_i64(-1), tau.mul(&th.inv()?).mul(&omega)];
                let omega_ok = omega.is_constant() || omega == th.mul(&tau.inv()?).neg().add_i64(-1);
                if omega_ok && same_pair(p, &expect) {
                    found.push(ConfigClass::EvenType { tau, omega, swapped });
                }
            }
        }
    } else {
        for (p, m, th, swapped) in orientations {
            for k in 0..2 {
                let tau = m[k].add_i64(1);
                if !is_unit_ratio(&tau) || tau.is_constant() {
                    continue;
                }
                for eps1 in [1i64, -1] {
                    if m[1 - k] != ratio_pow(&tau, eps1)?.neg().add_i64(-1) {
                        continue;
                    }
                    for eps2 in [1i64, -1] {
                        for q in 0..2 {
                            if p[q] != ratio_pow(&tau, 2 * eps2)?.add_i64(-1) {
                                continue;
                            }
                            let Some(cinv) = p[1 - q].constant_value() else { continue };
                            let Some(c) = cinv.checked_inv() else { continue };
                            let twice = 1 + eps1 - 2 * eps2;
                            if twice % 2 != 0 {
                                return Err(YError::HalfInteger);
                            }
                            let rhs = ratio_pow(&tau, twice / 2)?.mul(&PolyRatio::constant(tau.nvars(), c.clone()));
                            let rhs = if eps2 < 0 { rhs.neg() } else { rhs };
                            if *th == rhs {
                                found.push(ConfigClass::OddType { tau: tau.clone(), c, eps1, eps2, swapped });
                            }
                        }
                    }
                }
            }
        }
    }
    let tau_of = |c: &ConfigClass<C>| match c {
        ConfigClass::EvenType { tau, .. } | ConfigClass::OddType { tau, .. } => Some(tau.clone()),
        ConfigClass::AllConstant => None,
    };
    let pick = found.iter().position(|c| tau_of(c).is_some_and(|t| is_monic_unit(&t))).unwrap_or(0);
    found.into_iter().nth(pick).ok_or(YError::NoShape)
}

/// The Υ set and θ of a rectangle {i,j}×{α,β} against the pivot (m, ω), read off R.
pub fn upsilon<C: Coeff, S: MinorSource<C> + ?Sized>(
    src: &S,
    basis: &Subset,
    (i, j): (usize, usize),
    (a, b): (usize, usize),
    (m, w): (usize, usize),
) -> Result<([PolyRatio<C>; 2], [PolyRatio<C>; 2], PolyRatio<C>), YError> {
    let y = |u, l| y_value(src, basis, u, l);
    let plus = [y((m, i), (a, w))?, y((m, j), (b, w))?];
    let minus = [y((m, j), (a, w))?, y((m, i), (b, w))?];
    Ok((plus, minus, y((i, j), (a, b))?))
}

#[derive(Debug, Clone, Serialize)]
pub struct YTermDoc {
    pub basis: Subset,
    pub upper: (usize, usize),
    pub lower: (usize, usize),
    pub value: String,
}

impl<C: Coeff> From<&YTerm<C>> for YTermDoc {
    fn from(y: &YTerm<C>) -> Self {
        YTermDoc { basis: y.basis.clone(), upper: y.upper, lower: y.lower, value: y.value.to_string() }
    }
}
