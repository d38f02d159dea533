//! The CM-field `K = F(ω)` with `ω² + b·ω + c = 0` and its elements `x + y·ω`.
//!
//! The CM type is fixed: `φᵢ` restricts to the `i`-th real embedding of `F`
//! and sends `ω` to the root of `x² + σᵢ(b)x + σᵢ(c)` in the upper half-plane.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::mp::{Complex, Ctx};
use crate::number_ring::{BaseField, RingElem};

struct CMFieldData {
    base: BaseField,
    b: RingElem,
    c: RingElem,
    d: RingElem,
    roots: OnceLock<Vec<(RingElem, RingElem)>>,
}

impl PartialEq for CMFieldData {
    fn eq(&self, o: &Self) -> bool {
        (self.base, &self.b, &self.c) == (o.base, &o.b, &o.c)
    }
}

impl Eq for CMFieldData {}

impl Hash for CMFieldData {
    fn hash<H: Hasher>(&self, h: &mut H) {
        (self.base, &self.b, &self.c).hash(h)
    }
}

/// Cheaply cloneable handle to a CM-field descriptor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CMField(Arc<CMFieldData>);

impl CMField {
    /// Builds `F(ω)` for `ω² + b·ω + c = 0`, requiring `b² - 4c ≪ 0`.
    pub fn new(b: RingElem, c: RingElem) -> Result<Self> {
        let base = b.field();
        if c.field() != base {
            return Err(Error::Domain("b and c live in different fields".into()));
        }
        if !b.is_integral() || !c.is_integral() {
            return Err(Error::Domain("minimal polynomial coefficients must be integral".into()));
        }
        let d = &b * &b - &(&base.int(4) * &c);
        if !(-&d).is_totally_positive() {
            return Err(Error::NotCmExtension(format!("discriminant {d} is not totally negative")));
        }
        Ok(CMField(Arc::new(CMFieldData { base, b, c, d, roots: OnceLock::new() })))
    }

    pub fn base(&self) -> BaseField {
        self.0.base
    }

    /// Number of embeddings in the CM type, `[F : Q]`.
    pub fn g(&self) -> usize {
        self.0.base.degree()
    }

    pub fn b(&self) -> &RingElem {
        &self.0.b
    }

    pub fn c(&self) -> &RingElem {
        &self.0.c
    }

    /// Relative discriminant `d = b² - 4c`.
    pub fn d(&self) -> &RingElem {
        &self.0.d
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        self.g() == 1
    }

    pub fn elem(&self, x: RingElem, y: RingElem) -> CMElem {
        CMElem { field: self.clone(), x, y }
    }

    pub fn from_base(&self, x: RingElem) -> CMElem {
        let z = self.base().zero();
        self.elem(x, z)
    }

    pub fn int(&self, n: i64) -> CMElem {
        self.from_base(self.base().int(n))
    }

    pub fn zero(&self) -> CMElem {
        self.int(0)
    }

    pub fn one(&self) -> CMElem {
        self.int(1)
    }

    pub fn omega(&self) -> CMElem {
        self.elem(self.base().zero(), self.base().one())
    }

    /// The roots of unity in `K`, sorted by coordinates.
    pub fn roots_of_unity(&self) -> Vec<CMElem> {
        let coords = self.0.roots.get_or_init(|| {
            crate::lattice::roots_of_unity(self).into_iter().map(|z| (z.x, z.y)).collect()
        });
        coords.iter().map(|(x, y)| self.elem(x.clone(), y.clone())).collect()
    }

    /// `|d_{K/Q}| = d_F² · |N_{F/Q}(d)|`.
    pub fn abs_discriminant(&self) -> BigInt {
        let df = BigInt::from(self.base().discriminant());
        let nd = self.d().norm().abs().to_integer();
        &df * &df * nd
    }

    /// Complex value `φᵢ(ω)`.
    pub fn embed_omega(&self, i: usize, ctx: &mut Ctx) -> Complex {
        let b = embed_real(self.b(), i, ctx);
        let d = embed_real(self.d(), i, ctx);
        let half = ctx.real_rational(&BigRational::new(1.into(), 2.into()));
        let root = ctx.sqrt(&d.neg());
        let p = ctx.prec();
        Complex::new(
            b.neg().mul(&half, p, astro_float::RoundingMode::ToEven),
            root.mul(&half, p, astro_float::RoundingMode::ToEven),
        )
    }

    /// Values `φ₁(ω), …, φ_g(ω)`.
    pub fn embeddings(&self, ctx: &mut Ctx) -> Vec<Complex> {
        (0..self.g()).map(|i| self.embed_omega(i, ctx)).collect()
    }
}

impl fmt::Debug for CMField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(ω: ω²+({})ω+({}))", self.base(), self.b(), self.c())
    }
}

/// Real value of the `i`-th embedding of `r ∈ F`.
pub fn embed_real(r: &RingElem, i: usize, ctx: &mut Ctx) -> astro_float::BigFloat {
    let (p, q) = r.surd_parts();
    let pf = ctx.real_rational(&p);
    match r.field().m() {
        None => pf,
        Some(m) => {
            let s = ctx.sqrt(&ctx.real_int(m as i64));
            let qs = ctx.real_rational(&q).mul(&s, ctx.prec(), astro_float::RoundingMode::ToEven);
            if i == 0 {
                pf.add(&qs, ctx.prec(), astro_float::RoundingMode::ToEven)
            } else {
                pf.sub(&qs, ctx.prec(), astro_float::RoundingMode::ToEven)
            }
        }
    }
}

/// `x + y·ω` with `x, y ∈ F`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CMElem {
    field: CMField,
    x: RingElem,
    y: RingElem,
}

impl CMElem {
    pub fn field(&self) -> &CMField {
        &self.field
    }

    /// Coefficient of `1`.
    pub fn x(&self) -> &RingElem {
        &self.x
    }

    /// Coefficient of `ω`.
    pub fn y(&self) -> &RingElem {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// In `O_K = [ω, 1]_F` iff both coordinates lie in `O_F`.
    pub fn is_integral(&self) -> bool {
        self.x.is_integral() && self.y.is_integral()
    }

    pub fn in_base(&self) -> bool {
        self.y.is_zero()
    }

    /// Least positive integer `D` with `D·self ∈ O_K`.
    pub fn denominator(&self) -> BigInt {
        num_integer::Integer::lcm(&self.x.denominator(), &self.y.denominator())
    }

    /// Complex conjugation `ω ↦ -b - ω`.
    pub fn conj(&self) -> CMElem {
        let b = self.field.b();
        self.field.elem(&self.x - &(&self.y * b), -&self.y)
    }

    pub fn trace_rel(&self) -> RingElem {
        &(&self.x + &self.x) - &(&self.y * self.field.b())
    }

    pub fn norm_rel(&self) -> RingElem {
        let (b, c) = (self.field.b(), self.field.c());
        &(&(&self.x * &self.x) - &(&(b * &self.x) * &self.y)) + &(&(c * &self.y) * &self.y)
    }

    /// `N_{K/Q}`.
    pub fn abs_norm(&self) -> BigRational {
        self.norm_rel().norm().abs()
    }

    pub fn scale(&self, r: &RingElem) -> CMElem {
        self.field.elem(&self.x * r, &self.y * r)
    }

    pub fn scale_q(&self, r: &BigRational) -> CMElem {
        self.field.elem(self.x.scale(r), self.y.scale(r))
    }

    pub fn inv(&self) -> Result<CMElem> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let n = self.norm_rel().inv()?;
        Ok(self.conj().scale(&n))
    }

    pub fn checked_div(&self, other: &CMElem) -> Result<CMElem> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> CMElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `φᵢ(self)` at the context precision.
    pub fn embed(&self, i: usize, ctx: &mut Ctx) -> Complex {
        let w = self.field.embed_omega(i, ctx);
        let x = embed_real(&self.x, i, ctx);
        let y = embed_real(&self.y, i, ctx);
        let yw = ctx.scale(&w, &y);
        ctx.add(&Complex::real(x, ctx.prec()), &yw)
    }

    /// Sign of `Im φᵢ(self)`, decided exactly: `Im φᵢ(x + yω) = σᵢ(y)·Im φᵢ(ω)`.
    pub fn im_sign(&self, i: usize) -> std::cmp::Ordering {
        self.y.sign_at(i)
    }

    /// True iff `φᵢ(self) ∈ ℍ` for every `i`.
    pub fn in_upper_half_planes(&self) -> bool {
        (0..self.field.g()).all(|i| self.im_sign(i) == std::cmp::Ordering::Greater)
    }

    /// Möbius action `(m.a·z + m.b)/(m.c·z + m.d)` computed in `K`.
    pub fn mobius(&self, m: &Mat2) -> Result<CMElem> {
        let f = &self.field;
        let num = &(self * &f.from_base(m.a.clone())) + &f.from_base(m.b.clone());
        let den = &(self * &f.from_base(m.c.clone())) + &f.from_base(m.d.clone());
        num.checked_div(&den)
    }
}

impl fmt::Debug for CMElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+({})ω", self.x, self.y)
    }
}

macro_rules! cm_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a CMElem> for &'a CMElem {
            type Output = CMElem;
            fn $method(self, rhs: &'a CMElem) -> CMElem {
                assert!(self.field == rhs.field, "mixed CM fields");
                let f: fn(&CMElem, &CMElem) -> CMElem = $body;
                f(self, rhs)
            }
        }
        impl $tr<CMElem> for CMElem {
            type Output = CMElem;
            fn $method(self, rhs: CMElem) -> CMElem {
                (&self).$method(&rhs)
            }
        }
    };
}

cm_binop!(Add, add, |a, b| a.field.elem(&a.x + &b.x, &a.y + &b.y));
cm_binop!(Sub, sub, |a, b| a.field.elem(&a.x - &b.x, &a.y - &b.y));
cm_binop!(Mul, mul, |p, q| {
    // ω² = -bω - c
    let (b, c) = (p.field.b(), p.field.c());
    let yy = &p.y * &q.y;
    p.field.elem(
        &(&p.x * &q.x) - &(c * &yy),
        &(&(&p.x * &q.y) + &(&p.y * &q.x)) - &(b * &yy),
    )
});

impl Neg for &CMElem {
    type Output = CMElem;
    fn neg(self) -> CMElem {
        self.field.elem(-&self.x, -&self.y)
    }
}

/// Matrix `h` over `F` with `ν·[ξ, 1]ᵀ = h·[ξ, 1]ᵀ`.
pub fn regular_rep(nu: &CMElem, xi: &CMElem) -> Result<Mat2> {
    if xi.in_base() {
        return Err(Error::DegenerateBasis("ξ lies in the base field".into()));
    }
    // w = α·ξ + β
    let split = |w: &CMElem| -> Result<(RingElem, RingElem)> {
        let alpha = w.y.checked_div(&xi.y)?;
        let beta = &w.x - &(&alpha * &xi.x);
        Ok((alpha, beta))
    };
    let (h11, h12) = split(&(nu * xi))?;
    let (h21, h22) = split(nu)?;
    Ok(Mat2::new(h11, h12, h21, h22))
}

/// `(p, q)` over `F` with `t = p·ξ₁ + q·ξ₂`.
pub fn coords_in_basis(t: &CMElem, xi1: &CMElem, xi2: &CMElem) -> Result<(RingElem, RingElem)> {
    let delta = &(&xi1.x * &xi2.y) - &(&xi2.x * &xi1.y);
    if delta.is_zero() {
        return Err(Error::DegenerateBasis("ξ₁, ξ₂ are F-dependent".into()));
    }
    let dinv = delta.inv()?;
    let p = &(&(&t.x * &xi2.y) - &(&t.y * &xi2.x)) * &dinv;
    let q = &(&(&xi1.x * &t.y) - &(&xi1.y * &t.x)) * &dinv;
    Ok((p, q))
}

/// Checks `[ω, 1]_F` against a Z-basis `witness` of the maximal order.
///
/// Returns `Ok(true)` iff both lattices coincide. Errors if the witness does
/// not span a ring of the right rank.
pub fn verify_relative_basis(field: &CMField, witness: &[CMElem]) -> Result<bool> {
    let n = 2 * field.g();
    if witness.len() != n {
        return Err(Error::DegenerateBasis(format!("expected {n} witness elements, got {}", witness.len())));
    }
    let rows: Vec<Vec<BigRational>> = witness.iter().map(z_coords).collect();
    let inv = invert_rational(&rows)
        .ok_or_else(|| Error::DegenerateBasis("witness elements are linearly dependent".into()))?;
    let in_span = |z: &CMElem| -> bool {
        let v = z_coords(z);
        (0..n).all(|j| (0..n).map(|k| &v[k] * &inv[k][j]).fold(BigRational::zero(), |a, b| a + b).is_integer())
    };
    for u in witness {
        for v in witness {
            if !in_span(&(u * v)) {
                return Err(Error::NotAnIdeal("witness is not closed under multiplication".into()));
            }
        }
    }
    if !in_span(&field.one()) {
        return Err(Error::NotAnIdeal("witness does not contain 1".into()));
    }
    let witness_inside = witness.iter().all(|w| w.is_integral());
    let basis_inside = integral_z_basis(field).iter().all(in_span);
    Ok(witness_inside && basis_inside)
}

/// Z-basis `{1, θ, ω, θω}` (or `{1, ω}` over `Q`) of `O_K`.
pub fn integral_z_basis(field: &CMField) -> Vec<CMElem> {
    let f = field.base();
    let mut out = vec![field.one()];
    if f.degree() == 2 {
        out.push(field.from_base(f.theta()));
    }
    out.push(field.omega());
    if f.degree() == 2 {
        out.push(field.elem(f.zero(), f.theta()));
    }
    out
}

/// Rational coordinates of `z` in [`integral_z_basis`].
pub fn z_coords(z: &CMElem) -> Vec<BigRational> {
    if z.field.g() == 1 {
        vec![z.x.x().clone(), z.y.x().clone()]
    } else {
        vec![z.x.x().clone(), z.x.y().clone(), z.y.x().clone(), z.y.y().clone()]
    }
}

pub fn from_z_coords(field: &CMField, v: &[BigRational]) -> CMElem {
    let f = field.base();
    if f.degree() == 1 {
        field.elem(f.rational(v[0].clone()), f.rational(v[1].clone()))
    } else {
        field.elem(
            RingElem::from_rationals(f, v[0].clone(), v[1].clone()),
            RingElem::from_rationals(f, v[2].clone(), v[3].clone()),
        )
    }
}

/// Inverse of a square rational matrix by Gauss–Jordan elimination.
pub(crate) fn invert_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let t = &f * &a[col][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::log2_dist;

    fn gauss() -> CMField {
        let q = BaseField::Rational;
        CMField::new(q.int(0), q.int(1)).unwrap()
    }

    fn zeta5() -> CMField {
        let f = BaseField::real_quadratic(5).unwrap();
        CMField::new(f.elem(1, -1), f.int(1)).unwrap()
    }

    #[test]
    fn discriminants() {
        let q = BaseField::Rational;
        assert_eq!(CMField::new(q.int(1), q.int(6)).unwrap().d(), &q.int(-23));
        assert_eq!(gauss().d(), &q.int(-4));
        let k = zeta5();
        // (1-√5)²/4 - 4 = (-5-√5)/2 = -2 - θ
        assert_eq!(k.d(), &k.base().elem(-2, -1));
        assert!(CMField::new(q.int(0), q.int(-1)).is_err());
        let f = BaseField::real_quadratic(2).unwrap();
        // ω² = √2: d = 4√2 changes sign
        assert!(matches!(CMField::new(f.int(0), f.elem(0, -1)), Err(Error::NotCmExtension(_))));
    }

    #[test]
    fn conj_trace_norm() {
        let k = zeta5();
        let w = k.omega();
        assert_eq!(w.conj(), k.from_base(-k.b()) - w.clone());
        assert_eq!(&w.norm_rel(), k.c());
        let z = k.elem(k.base().elem(2, 3), k.base().elem(-1, 4));
        assert_eq!(z.trace_rel(), &(z.x() + z.x()) - &(z.y() * k.b()));
        assert_eq!(z.conj().conj(), z);
        assert_eq!(k.from_base(z.norm_rel()), &z * &z.conj());
    }

    #[test]
    fn embeddings() {
        let mut ctx = Ctx::new(128).unwrap();
        let k = gauss();
        let i = k.omega().embed(0, &mut ctx);
        assert!(log2_dist(&ctx, &i, &Complex::from_f64(0.0, 1.0, ctx.prec())) < -150.0);
        let one = k.one().embed(0, &mut ctx);
        assert!(log2_dist(&ctx, &one, &ctx.one()) < -150.0);
        let z5 = zeta5();
        let w2 = z5.omega().embed(1, &mut ctx);
        let t = ctx.exp_pi_i_rational(&BigRational::new(4.into(), 5.into()));
        assert!(log2_dist(&ctx, &w2, &t) < -150.0);
        let w1 = z5.omega().embed(0, &mut ctx);
        let t1 = ctx.exp_pi_i_rational(&BigRational::new(2.into(), 5.into()));
        assert!(log2_dist(&ctx, &w1, &t1) < -150.0);
    }

    #[test]
    fn regular_rep_examples() {
        let k = zeta5();
        let w = k.omega();
        assert_eq!(regular_rep(&k.one(), &w).unwrap(), Mat2::identity(k.base()));
        let h = regular_rep(&w, &w).unwrap();
        assert_eq!(h, Mat2::new(-k.b(), -k.c(), k.base().one(), k.base().zero()));
        assert!(regular_rep(&w, &k.int(3)).is_err());
    }

    #[test]
    fn relative_basis_witnesses() {
        let k = gauss();
        assert!(verify_relative_basis(&k, &[k.one(), k.omega()]).unwrap());
        let q = BaseField::Rational;
        let k23 = CMField::new(q.int(1), q.int(6)).unwrap();
        assert!(verify_relative_basis(&k23, &[k23.one(), k23.omega()]).unwrap());
        // Z[√-23] is a proper suborder
        let s = &(&k23.omega() + &k23.omega()) + &k23.one();
        assert!(!verify_relative_basis(&k23, &[k23.one(), s]).unwrap());
        let z = zeta5();
        let w = z.omega();
        let wit = vec![z.one(), w.clone(), w.pow(2), w.pow(3)];
        assert!(verify_relative_basis(&z, &wit).unwrap());
        assert!(verify_relative_basis(&k, &[k.one(), k.one()]).is_err());
    }
}
