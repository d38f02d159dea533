//! Ray class invariant data `(𝔠, ξ, A, d, A₁)`, Siegel functions,
//! Siegel–Ramachandra invariants and class polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::{LN_2, PI};

use crate::class_groups::{decompose_a, enumerate_ray_classes, integral_representative, orient_basis, Enumeration};
use crate::cm_field::{coords_in_basis, CMElem, CMField};
use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::ideals::FracIdeal;
use crate::matrix::Mat2;
use crate::mp::{log2_abs, round_to_int, to_f64, Complex, Ctx};
use crate::number_ring::{canonical_associate, gcd_many, round_rational, unit_group_order_mod, RingElem};

/// Data behind the invariant `f(C) = (f∘A₁)(φ₁(ξ), …, φ_g(ξ))`.
#[derive(Clone, Debug)]
pub struct InvariantSetup {
    pub class_ideal: FracIdeal,
    pub xi1: CMElem,
    pub xi2: CMElem,
    pub xi: CMElem,
    /// `[ω_K; 1] = A·[ξ₁; ξ₂]`.
    pub a: Mat2,
    pub d: RingElem,
    pub a1: Mat2,
    pub cm_values: Vec<Complex>,
}

/// Setup from the Hermite basis of `𝔠⁻¹`, oriented into `ℍ^g`. A
/// non-integral `c` is first replaced by an integral ideal of its ray class.
pub fn invariant_setup(c: &FracIdeal, n: &BigInt, ctx: &mut Ctx) -> Result<InvariantSetup> {
    let c = if c.is_integral() { c.clone() } else { integral_representative(c, n)? };
    let (xi1, xi2) = c.inv().basis();
    let xi1 = orient_basis(&xi1, &xi2)?;
    invariant_setup_with_basis(&c, &xi1, &xi2, n, ctx)
}

/// Setup for a caller-chosen basis with `𝔠⁻¹ = [ξ₁, ξ₂]_F` and `ξ₁/ξ₂ ∈ ℍ^g`.
pub fn invariant_setup_with_basis(
    c: &FracIdeal,
    xi1: &CMElem,
    xi2: &CMElem,
    n: &BigInt,
    ctx: &mut Ctx,
) -> Result<InvariantSetup> {
    let field = c.field().clone();
    if !c.is_integral() || !c.is_coprime_to(n) {
        return Err(Error::Domain(format!("𝔠 = {c:?} must be integral and prime to {n}")));
    }
    if FracIdeal::reduce(xi1, xi2)? != c.inv() {
        return Err(Error::Domain("[ξ₁, ξ₂]_F is not 𝔠⁻¹".into()));
    }
    let xi = xi1.checked_div(xi2)?;
    if !xi.in_upper_half_planes() {
        return Err(Error::Domain("ξ₁/ξ₂ is not in ℍ at every embedding".into()));
    }
    let (a1, a2) = coords_in_basis(&field.omega(), xi1, xi2)?;
    let (a3, a4) = coords_in_basis(&field.one(), xi1, xi2)?;
    let a = Mat2::new(a1, a2, a3, a4);
    if !a.is_integral() {
        return Err(Error::Invariant(format!("A = {a:?} is not integral")));
    }
    let d = a.det();
    if !d.is_totally_positive() {
        return Err(Error::Invariant(format!("det A = {d} is not totally positive")));
    }
    if canonical_associate(&d)?.0 != c.norm_rel() {
        return Err(Error::Invariant("det(A)·O_F ≠ N(𝔠)".into()));
    }
    if !gcd_many(&[d.clone(), d.field().integer(n)])?.is_one() {
        return Err(Error::Invariant(format!("gcd(det A, {n}) ≠ 1")));
    }
    let (d, a1) = decompose_a(&a, n)?;
    let cm_values = (0..field.g()).map(|i| xi.embed(i, ctx)).collect();
    Ok(InvariantSetup { class_ideal: c.clone(), xi1: xi1.clone(), xi2: xi2.clone(), xi, a, d, a1, cm_values })
}

/// The choice `𝔠 = a^e·[ω_Q, 1]_F`, `ξ = -ω̄_Q` with `e = |(O_F/N)^×|`.
pub fn invariant_setup_from_form(field: &CMField, q: &QuadForm, n: &BigInt, ctx: &mut Ctx) -> Result<InvariantSetup> {
    if !q.membership(field, n) || !q.is_totally_positive() {
        return Err(Error::Domain(format!("{q:?} is not in the totally positive form set")));
    }
    let f = field.base();
    let nn = n.to_u64().ok_or_else(|| Error::Domain("N too large".into()))?;
    let e = unit_group_order_mod(f, nn);
    let ae = q.a.pow(e);
    let c = q.ideal(field)?.scale(&field.from_base(ae))?;
    let scale = q.a.pow(e - 1).inv()?;
    let w = q.omega(field)?;
    let xi1 = (-&w.conj()).scale(&scale);
    let xi2 = field.from_base(scale);
    invariant_setup_with_basis(&c, &xi1, &xi2, n, ctx)
}

impl InvariantSetup {
    /// Rechecks every exact invariant.
    pub fn verify(&self, n: &BigInt) -> Result<bool> {
        let field = self.class_ideal.field();
        let (w, one) = self.a.apply_cm(&self.xi1, &self.xi2);
        let module = FracIdeal::reduce(&self.xi1, &self.xi2)? == self.class_ideal.inv();
        let relation = w == field.omega() && one.is_one();
        let f = field.base();
        let cong = (&Mat2::diag(f.one(), self.d.clone()) * &self.a1).congruent_mod(&self.a, n);
        Ok(module
            && relation
            && self.xi.in_upper_half_planes()
            && self.d.is_totally_positive()
            && self.d == self.a.det()
            && self.a1.det().is_one()
            && cong)
    }
}

/// A numeric value with a rigorous bound on its absolute error.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: Complex,
    /// `log2` of the absolute error bound.
    pub log2_error: f64,
}

/// Largest number of product terms evaluated.
const MAX_TERMS: u64 = 1 << 20;

/// `g_{[r₁ r₂]}(τ)` from its product expansion, truncated once the tail is
/// below the working precision.
pub fn siegel_g(r1: &BigRational, r2: &BigRational, tau: &Complex, ctx: &mut Ctx) -> Result<Certified> {
    if r1.is_integer() && r2.is_integer() {
        return Err(Error::Domain("[r₁ r₂] must not be integral".into()));
    }
    if !tau.im.is_positive() {
        return Err(Error::Domain("Im τ must be positive".into()));
    }
    let prec = ctx.prec();
    let im = to_f64(&tau.im);
    let log2q = -2.0 * PI * im / LN_2;
    let r1f = r1.to_f64().unwrap_or(0.0);

    let six = BigRational::from_integer(6.into());
    let b2 = (r1 * r1 - r1 + BigRational::one() / six) / BigRational::from_integer(2.into());
    let mut pre = ctx.exp_pi_i_rational(&(r2 * (r1 - BigRational::one())));
    pre = pre.neg();
    let q_b = qpow(ctx, tau, &b2);
    let zeta = ctx.exp_pi_i_rational(&(r2 * BigRational::from_integer(2.into())));
    let zeta_bar = zeta.conj();
    let q = qpow(ctx, tau, &BigRational::one());
    let qr = qpow(ctx, tau, r1);
    let qmr = qpow(ctx, tau, &-r1);
    let one = ctx.one();

    // tail Σ_{n>M} |q|^{n±r₁} ≤ (|q|^{r₁} + |q|^{-r₁})·|q|^{M+1}/(1 - |q|)
    let spread = log2_sum(r1f * log2q, -r1f * log2q);
    let denom = (1.0 - log2q.exp2()).log2();
    let target = -(prec as f64) - 8.0;
    let first = r1f.abs().ceil() as u64 + 1;
    let mut m = first;
    while spread + (m + 1) as f64 * log2q - denom > target {
        m += 1;
        if m > MAX_TERMS {
            return Err(Error::Precision(format!("Im τ = {im:e} needs more than {MAX_TERMS} terms")));
        }
    }
    let mut val = ctx.mul(&pre, &q_b);
    val = ctx.mul(&val, &ctx.sub(&one, &ctx.mul(&qr, &zeta)));
    let mut qn = q.clone();
    for _ in 1..=m {
        let t1 = ctx.sub(&one, &ctx.mul(&ctx.mul(&qr, &qn), &zeta));
        let t2 = ctx.sub(&one, &ctx.mul(&ctx.mul(&qmr, &qn), &zeta_bar));
        val = ctx.mul(&val, &ctx.mul(&t1, &t2));
        qn = ctx.mul(&qn, &q);
    }
    let mag = log2_abs(&ctx.abs(&val));
    let tail = spread + (m + 1) as f64 * log2q - denom + 1.0;
    let rounding = ((8 * m + 64) as f64).log2() - prec as f64;
    Ok(Certified { value: val, log2_error: mag + log2_sum(tail, rounding) + 0.01 })
}

/// `q^s = e^{2πi·s·τ}`.
fn qpow(ctx: &mut Ctx, tau: &Complex, s: &BigRational) -> Complex {
    let z = ctx.mul(tau, &ctx.rational(s));
    ctx.exp_2pi_i(&z)
}

/// `log2(2^a + 2^b)`.
pub fn log2_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// Gauss reduction of a Z-basis over `F = Q` so that `ξ₁/ξ₂` lies in the
/// standard fundamental domain. Orientation is preserved.
pub fn reduce_lattice_basis(xi1: &CMElem, xi2: &CMElem) -> Result<(CMElem, CMElem)> {
    let field = xi1.field().clone();
    if field.base().degree() != 1 {
        return Err(Error::Domain("lattice reduction is implemented over Q only".into()));
    }
    let half_b = field.b().x() / BigRational::from_integer(2.into());
    let (mut x1, mut x2) = (xi1.clone(), xi2.clone());
    loop {
        let z = x1.checked_div(&x2)?;
        let re = z.x().x() - z.y().x() * &half_b;
        let t = round_rational(&re);
        if !t.is_zero() {
            x1 = &x1 - &x2.scale(&field.base().integer(&t));
        }
        let z = x1.checked_div(&x2)?;
        if z.norm_rel().x() < &BigRational::one() {
            (x1, x2) = (-&x2, x1);
        } else {
            return Ok((x1, x2));
        }
    }
}

/// `g(C) = g_{[a/N b/N]}(ξ)^{12N}` for `N·𝔠⁻¹ = [ξ₁, ξ₂]`, `N = aξ₁ + bξ₂`.
pub fn siegel_ramachandra(c: &FracIdeal, n: &BigInt, ctx: &mut Ctx) -> Result<Certified> {
    let field = c.field();
    check_siegel_case(field, n)?;
    let lattice = c.inv().scale(&field.from_base(field.base().integer(n)))?;
    let (xi1, xi2) = lattice.basis();
    let xi1 = orient_basis(&xi1, &xi2)?;
    let (xi1, xi2) = reduce_lattice_basis(&xi1, &xi2)?;
    siegel_ramachandra_with_basis(c, &xi1, &xi2, n, ctx)
}

fn check_siegel_case(field: &CMField, n: &BigInt) -> Result<()> {
    if !field.is_imaginary_quadratic() {
        return Err(Error::Domain("Siegel–Ramachandra invariants need an imaginary quadratic K".into()));
    }
    if n < &BigInt::from(2) {
        return Err(Error::Domain(format!("N = {n} must be at least 2")));
    }
    Ok(())
}

/// [`siegel_ramachandra`] for any oriented Z-basis of `N·𝔠⁻¹`.
pub fn siegel_ramachandra_with_basis(
    c: &FracIdeal,
    xi1: &CMElem,
    xi2: &CMElem,
    n: &BigInt,
    ctx: &mut Ctx,
) -> Result<Certified> {
    let field = c.field();
    check_siegel_case(field, n)?;
    if !c.is_integral() || !c.is_coprime_to(n) {
        return Err(Error::Domain(format!("𝔠 = {c:?} must be integral and prime to {n}")));
    }
    let nn = field.from_base(field.base().integer(n));
    if FracIdeal::reduce(xi1, xi2)? != c.inv().scale(&nn)? {
        return Err(Error::Domain("[ξ₁, ξ₂] is not N·𝔠⁻¹".into()));
    }
    let xi = xi1.checked_div(xi2)?;
    if !xi.in_upper_half_planes() {
        return Err(Error::Domain("ξ₁/ξ₂ is not in ℍ".into()));
    }
    let (a, b) = coords_in_basis(&nn, xi1, xi2)?;
    if !(a.is_integral() && b.is_integral()) {
        return Err(Error::Invariant("N ∉ [ξ₁, ξ₂]".into()));
    }
    // shifting [r₁ r₂] by integers changes g by a 2N-th root of unity
    let r1 = BigRational::new(a.x().to_integer().mod_floor(n), n.clone());
    let r2 = BigRational::new(b.x().to_integer().mod_floor(n), n.clone());
    let tau = xi.embed(0, ctx);
    if !tau.im.is_positive() {
        return Err(Error::Precision(format!("Im τ is not positive at {} bits", ctx.prec())));
    }
    let g = siegel_g(&r1, &r2, &tau, ctx)?;
    let e = (n * 12u32).to_u64().ok_or_else(|| Error::Domain("N too large".into()))?;
    let value = ctx.pow(&g.value, e);
    let rel = g.log2_error - log2_abs(&ctx.abs(&g.value));
    let log2_error = log2_abs(&ctx.abs(&value)) + rel + (e as f64).log2() + 0.1;
    Ok(Certified { value, log2_error })
}

/// `∏_C (X - g(C))` with its coefficients rounded to `O_K`.
#[derive(Clone, Debug)]
pub struct ClassPolynomial {
    pub classes: Vec<FracIdeal>,
    pub values: Vec<Certified>,
    /// Monic, highest degree first.
    pub coefficients: Vec<Complex>,
    /// Nearest `x + y·ω_K` to each coefficient.
    pub nearest: Vec<(BigInt, BigInt)>,
    pub log2_residuals: Vec<f64>,
    /// `log2` of a bound on each coefficient's absolute error, propagated
    /// from the value errors and the rounding of every product step.
    pub log2_coefficient_errors: Vec<f64>,
    working_bits: usize,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Every residual is below `2^(32 - prec)`.
    pub fn near_algebraic(&self, prec: usize) -> bool {
        self.log2_residuals.iter().all(|&r| r < 32.0 - prec as f64)
    }

    /// Every coefficient is known to within `1/4`, so its nearest element of
    /// `O_K` is determined, and every residual is within its error bound.
    pub fn certified(&self) -> bool {
        self.log2_coefficient_errors
            .iter()
            .zip(&self.log2_residuals)
            .all(|(&e, &r)| e < -2.0 && r <= e.max(-(self.working_bits as f64) + 8.0))
    }

    /// `log2` of the smallest distance between two class values.
    pub fn log2_separation(&self, ctx: &Ctx) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.values.len() {
            for j in i + 1..self.values.len() {
                best = best.min(log2_abs(&ctx.abs(&ctx.sub(&self.values[i].value, &self.values[j].value))));
            }
        }
        best
    }
}

pub fn class_polynomial(field: &CMField, n: u64, norm_bound: u64, budget: u64, ctx: &mut Ctx) -> Result<ClassPolynomial> {
    let nb = BigInt::from(n);
    check_siegel_case(field, &nb)?;
    let group = match enumerate_ray_classes(field, n, norm_bound, budget)? {
        Enumeration::Complete(g) => g,
        Enumeration::Incomplete { classes, expected } => {
            return Err(Error::Incomplete { found: classes.len(), expected: expected as usize })
        }
    };
    let classes = group.reps().to_vec();
    let values: Vec<Certified> = classes.iter().map(|c| siegel_ramachandra(c, &nb, ctx)).collect::<Result<_>>()?;
    let mut coefficients = vec![ctx.one()];
    let mut errors = vec![f64::NEG_INFINITY];
    let unit = 2.0 - ctx.prec() as f64;
    for v in &values {
        let size = log2_abs(&ctx.abs(&v.value));
        let bound = log2_sum(size, v.log2_error);
        let mut next = vec![ctx.zero(); coefficients.len() + 1];
        let mut next_err = vec![f64::NEG_INFINITY; coefficients.len() + 1];
        for (k, c) in coefficients.iter().enumerate() {
            next[k] = ctx.add(&next[k], c);
            next_err[k] = log2_sum(next_err[k], errors[k]);
            let t = ctx.mul(c, &v.value);
            next[k + 1] = ctx.sub(&next[k + 1], &t);
            let c_size = log2_sum(log2_abs(&ctx.abs(c)), errors[k]);
            // |Δ(c·v)| ≤ Δc·(|v| + Δv) + |c|·Δv, plus rounding of the product and the sum
            let e = log2_sum(errors[k] + bound, c_size + v.log2_error);
            let rounding = log2_sum(c_size + bound, log2_abs(&ctx.abs(&next[k + 1]))) + unit;
            next_err[k + 1] = log2_sum(log2_sum(next_err[k + 1], e), rounding);
        }
        coefficients = next;
        errors = next_err;
    }
    let w = field.omega().embed(0, ctx);
    let mut nearest = Vec::new();
    let mut log2_residuals = Vec::new();
    for c in &coefficients {
        let y = c.im.div(&w.im, ctx.prec(), astro_float::RoundingMode::ToEven);
        let x = c.re.sub(&y.mul(&w.re, ctx.prec(), astro_float::RoundingMode::ToEven), ctx.prec(), astro_float::RoundingMode::ToEven);
        let (xi, yi) = (round_to_int(&x), round_to_int(&y));
        let approx = ctx.add(&ctx.rational(&BigRational::from_integer(xi.clone())), &ctx.scale(&w, &ctx.real_bigint(&yi)));
        log2_residuals.push(log2_abs(&ctx.abs(&ctx.sub(c, &approx))));
        nearest.push((xi, yi));
    }
    Ok(ClassPolynomial {
        classes,
        values,
        coefficients,
        nearest,
        log2_residuals,
        log2_coefficient_errors: errors,
        working_bits: ctx.prec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::DEFAULT_BUDGET;
    use crate::mp::log2_dist;
    use crate::number_ring::BaseField;

    fn gauss() -> CMField {
        let q = BaseField::Rational;
        CMField::new(q.int(0), q.int(1)).unwrap()
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn setup_of_identity_class() {
        let k = gauss();
        let n = BigInt::from(5);
        let mut ctx = Ctx::new(128).unwrap();
        let s = invariant_setup_from_form(&k, &QuadForm::principal(&k), &n, &mut ctx).unwrap();
        assert!(s.verify(&n).unwrap());
        assert_eq!(s.xi, -&k.omega().conj());
        // A₁ ≡ [[1, *], [0, 1]]
        let f = k.base();
        assert!(crate::number_ring::congruent_mod(&s.a1.a, &f.one(), &n));
        assert!(crate::number_ring::congruent_mod(&s.a1.c, &f.zero(), &n));
        let g = invariant_setup(&FracIdeal::unit(&k), &n, &mut ctx).unwrap();
        assert!(g.verify(&n).unwrap());
    }

    #[test]
    fn siegel_partial_product() {
        let mut ctx = Ctx::new(256).unwrap();
        let tau = ctx.int(0);
        let tau = Complex::new(tau.re, ctx.real_int(1));
        let v = siegel_g(&half(), &half(), &tau, &mut ctx).unwrap();
        assert!(v.log2_error < -250.0);
        // 200 terms, multiplied from the far end
        let q = ctx.exp_2pi_i(&tau);
        let qh = ctx.exp_2pi_i(&ctx.mul(&tau, &ctx.rational(&half())));
        let zeta = ctx.exp_pi_i_rational(&BigRational::one());
        let one = ctx.one();
        let mut prod = ctx.one();
        for k in (1..=200u64).rev() {
            let qk = ctx.pow(&q, k);
            let t1 = ctx.sub(&one, &ctx.mul(&ctx.mul(&qk, &qh), &zeta));
            let qmh = ctx.div(&qk, &qh).unwrap();
            let t2 = ctx.sub(&one, &ctx.mul(&qmh, &zeta.conj()));
            prod = ctx.mul(&prod, &ctx.mul(&t1, &t2));
        }
        let b = BigRational::new(BigInt::from(-1), BigInt::from(24));
        let pre = ctx.exp_pi_i_rational(&BigRational::new(BigInt::from(-1), BigInt::from(4))).neg();
        let tb = ctx.mul(&tau, &ctx.rational(&b));
        let qb = ctx.exp_2pi_i(&tb);
        let mut direct = ctx.mul(&pre, &qb);
        direct = ctx.mul(&direct, &ctx.sub(&one, &ctx.mul(&qh, &zeta)));
        direct = ctx.mul(&direct, &prod);
        assert!(log2_dist(&ctx, &v.value, &direct) < -240.0);
    }

    #[test]
    fn siegel_requires_nonintegral_index() {
        let mut ctx = Ctx::new(64).unwrap();
        let tau = Complex::new(ctx.real_int(0), ctx.real_int(1));
        let one = BigRational::one();
        assert!(siegel_g(&one, &one, &tau, &mut ctx).is_err());
        let low = Complex::new(ctx.real_int(0), ctx.real_int(-1));
        assert!(siegel_g(&half(), &one, &low, &mut ctx).is_err());
    }

    #[test]
    fn gaussian_level_three_values() {
        let k = gauss();
        let mut ctx = Ctx::new(256).unwrap();
        let p = class_polynomial(&k, 3, 100, DEFAULT_BUDGET, &mut ctx).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(p.log2_separation(&ctx) > -64.0);
        assert!(p.near_algebraic(256), "{:?} {:?}", p.log2_residuals, p.nearest);
        assert!(siegel_ramachandra(&FracIdeal::unit(&k), &BigInt::one(), &mut ctx).is_err());
    }
}
