//! Exact arithmetic in the ring of integers `O_F` of the base field.
//!
//! Supported fields are `Q` and the real quadratic fields `Q(√2)`, `Q(√5)`,
//! `Q(√13)`. Each is norm-Euclidean and has a fundamental unit of norm `-1`,
//! so `O_F` is a PID, every ideal has a totally positive generator, and
//! gcds can be computed by Euclidean descent with nearest-integer rounding.
//!
//! Elements are stored as rational coordinates `x + y·θ` in the integral
//! basis `{1, θ}` where `θ = √m` for `m = 2` and `θ = (1 + √m)/2` for
//! `m ≡ 1 (mod 4)`. Signs of real embeddings are decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square-free `m` for which `Q(√m)` is supported.
pub const SUPPORTED_M: [u32; 3] = [2, 5, 13];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawBaseField", into = "RawBaseField")]
pub enum BaseField {
    Rational,
    RealQuadratic { m: u32 },
}

#[derive(Serialize, Deserialize)]
struct RawBaseField {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
}

impl TryFrom<RawBaseField> for BaseField {
    type Error = Error;

    fn try_from(raw: RawBaseField) -> Result<Self> {
        match (raw.kind.as_str(), raw.m) {
            ("rational", None) => Ok(BaseField::Rational),
            ("real_quadratic", Some(m)) => BaseField::real_quadratic(m),
            (kind, m) => Err(Error::UnsupportedField(format!("kind {kind:?} with m = {m:?}"))),
        }
    }
}

impl From<BaseField> for RawBaseField {
    fn from(f: BaseField) -> Self {
        match f {
            BaseField::Rational => RawBaseField { kind: "rational".into(), m: None },
            BaseField::RealQuadratic { m } => {
                RawBaseField { kind: "real_quadratic".into(), m: Some(m) }
            }
        }
    }
}

impl BaseField {
    pub fn real_quadratic(m: u32) -> Result<Self> {
        if SUPPORTED_M.contains(&m) {
            Ok(BaseField::RealQuadratic { m })
        } else {
            Err(Error::UnsupportedField(format!("Q(sqrt{m})")))
        }
    }

    /// Parses the command-line spelling: `Q`, `Q(sqrt2)`, `Q(sqrt5)`, `Q(sqrt13)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" {
            return Ok(BaseField::Rational);
        }
        let inner = t
            .strip_prefix("Q(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.strip_prefix("sqrt").or_else(|| r.strip_prefix('√')))
            .ok_or_else(|| Error::Parse(format!("unrecognised field {s:?}")))?;
        let m: u32 = inner.parse().map_err(|_| Error::Parse(format!("unrecognised field {s:?}")))?;
        BaseField::real_quadratic(m)
    }

    pub fn degree(self) -> usize {
        match self {
            BaseField::Rational => 1,
            BaseField::RealQuadratic { .. } => 2,
        }
    }

    pub fn m(self) -> Option<u32> {
        match self {
            BaseField::Rational => None,
            BaseField::RealQuadratic { m } => Some(m),
        }
    }

    /// True iff the integral basis is `{1, (1+√m)/2}`.
    pub fn has_half_basis(self) -> bool {
        matches!(self, BaseField::RealQuadratic { m } if m % 4 == 1)
    }

    /// `(t, n)` with `θ² = t·θ + n`.
    fn theta_relation(self) -> (i64, i64) {
        match self {
            BaseField::Rational => (0, 0),
            BaseField::RealQuadratic { m } if m % 4 == 1 => (1, (m as i64 - 1) / 4),
            BaseField::RealQuadratic { m } => (0, m as i64),
        }
    }

    /// Absolute discriminant of `F`.
    pub fn discriminant(self) -> i64 {
        match self {
            BaseField::Rational => 1,
            BaseField::RealQuadratic { m } if m % 4 == 1 => m as i64,
            BaseField::RealQuadratic { m } => 4 * m as i64,
        }
    }

    pub fn zero(self) -> RingElem {
        RingElem::from_rationals(self, BigRational::zero(), BigRational::zero())
    }

    pub fn one(self) -> RingElem {
        self.int(1)
    }

    pub fn int(self, n: i64) -> RingElem {
        RingElem::from_rationals(self, BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn integer(self, n: &BigInt) -> RingElem {
        RingElem::from_rationals(self, BigRational::from_integer(n.clone()), BigRational::zero())
    }

    pub fn rational(self, r: BigRational) -> RingElem {
        RingElem::from_rationals(self, r, BigRational::zero())
    }

    /// `x + y·θ` with integer coordinates.
    pub fn elem(self, x: i64, y: i64) -> RingElem {
        assert!(self.degree() == 2 || y == 0, "Q has no θ coordinate");
        RingElem::from_rationals(self, BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    pub fn theta(self) -> RingElem {
        self.elem(0, 1)
    }

    /// The fundamental unit `ε > 1` under the first embedding; `N(ε) = -1`.
    pub fn fundamental_unit(self) -> Option<RingElem> {
        match self {
            BaseField::Rational => None,
            BaseField::RealQuadratic { m: 2 } => Some(self.elem(1, 1)),
            BaseField::RealQuadratic { m: 5 } => Some(self.elem(0, 1)),
            BaseField::RealQuadratic { m: 13 } => Some(self.elem(1, 1)),
            BaseField::RealQuadratic { .. } => unreachable!("unsupported m"),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => write!(f, "Q"),
            BaseField::RealQuadratic { m } => write!(f, "Q(sqrt{m})"),
        }
    }
}

/// An element `x + y·θ` of `F` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    field: BaseField,
    x: BigRational,
    y: BigRational,
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Nearest integer, halves rounded up.
pub(crate) fn round_rational(t: &BigRational) -> BigInt {
    (t + half()).floor().to_integer()
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

impl RingElem {
    pub fn from_rationals(field: BaseField, x: BigRational, y: BigRational) -> Self {
        debug_assert!(field.degree() == 2 || y.is_zero());
        RingElem { field, x, y }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// In `O_F` iff both integral-basis coordinates are integers.
    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// Is this element an ordinary rational number?
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// Integer coordinates, for integral elements.
    pub fn int_coords(&self) -> (BigInt, BigInt) {
        debug_assert!(self.is_integral());
        (self.x.to_integer(), self.y.to_integer())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.x.denom().lcm(self.y.denom())
    }

    /// The nontrivial automorphism `√m ↦ -√m` (identity on `Q`).
    pub fn conj(&self) -> RingElem {
        let (t, _) = self.field.theta_relation();
        let t = BigRational::from_integer(t.into());
        RingElem::from_rationals(self.field, &self.x + &t * &self.y, -&self.y)
    }

    /// Field norm `N_{F/Q}`.
    pub fn norm(&self) -> BigRational {
        if self.field == BaseField::Rational {
            return self.x.clone();
        }
        let (t, n) = self.field.theta_relation();
        let t = BigRational::from_integer(t.into());
        let n = BigRational::from_integer(n.into());
        &self.x * &self.x + t * &self.x * &self.y - n * &self.y * &self.y
    }

    pub fn abs_norm(&self) -> BigRational {
        self.norm().abs()
    }

    /// Field trace `T_{F/Q}`.
    pub fn trace(&self) -> BigRational {
        match self.field {
            BaseField::Rational => self.x.clone(),
            _ => {
                let (t, _) = self.field.theta_relation();
                BigRational::from_integer(2.into()) * &self.x + BigRational::from_integer(t.into()) * &self.y
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> RingElem {
        RingElem::from_rationals(self.field, &self.x * r, &self.y * r)
    }

    pub fn inv(&self) -> Result<RingElem> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        if self.field == BaseField::Rational {
            return Ok(self.field.rational(self.x.recip()));
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &RingElem) -> Result<RingElem> {
        Ok(self * &other.inv()?)
    }

    /// `self / other` when the quotient lies in `O_F`.
    pub fn div_exact(&self, other: &RingElem) -> Option<RingElem> {
        let q = self.checked_div(other).ok()?;
        q.is_integral().then_some(q)
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
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

    /// `self^e` for signed `e`; errors on `0^e` with `e < 0`.
    pub fn powi(&self, e: i64) -> Result<RingElem> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Coordinates `(p, q)` of `p + q·√m`.
    pub fn surd_parts(&self) -> (BigRational, BigRational) {
        if self.field.has_half_basis() {
            let h = half();
            (&self.x + &self.y * &h, &self.y * &h)
        } else {
            (self.x.clone(), self.y.clone())
        }
    }

    /// Exact sign of the `i`-th real embedding (`i = 0` sends `√m ↦ +√m`).
    pub fn sign_at(&self, i: usize) -> Ordering {
        let (p, mut q) = self.surd_parts();
        if i == 1 {
            q = -q;
        } else {
            debug_assert_eq!(i, 0);
        }
        let m = BigRational::from_integer(self.field.m().unwrap_or(0).into());
        match (p.cmp(&BigRational::zero()), q.cmp(&BigRational::zero())) {
            (a, Ordering::Equal) => a,
            (Ordering::Equal, b) => b,
            (a, b) if a == b => a,
            (a, _) => {
                // p and q√m have opposite signs; the larger magnitude wins.
                let lhs = &p * &p;
                let rhs = &q * &q * m;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Signs of all real embeddings.
    pub fn signs(&self) -> Vec<Ordering> {
        (0..self.field.degree()).map(|i| self.sign_at(i)).collect()
    }

    /// True iff every real embedding is strictly positive.
    pub fn is_totally_positive(&self) -> bool {
        self.signs().iter().all(|s| *s == Ordering::Greater)
    }

    /// Double-precision value of the `i`-th embedding (display and bounds only).
    pub fn approx(&self, i: usize) -> f64 {
        let (p, q) = self.surd_parts();
        let s = (self.field.m().unwrap_or(0) as f64).sqrt();
        let q = q.to_f64().unwrap_or(f64::NAN);
        let p = p.to_f64().unwrap_or(f64::NAN);
        if i == 0 {
            p + q * s
        } else {
            p - q * s
        }
    }

    /// Exact square root in `F`, if one exists.
    pub fn sqrt(&self) -> Option<RingElem> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let field = self.field;
        let (p, q) = self.surd_parts();
        let candidates: Vec<RingElem> = match field.m() {
            None => rational_sqrt(&p).map(|r| field.rational(r)).into_iter().collect(),
            Some(m) => {
                // (s + t√m)² = s² + m t² + 2 s t √m.
                let mr = BigRational::from_integer(m.into());
                let mut out = Vec::new();
                if let Some(r) = rational_sqrt(&(&p * &p - &q * &q * &mr)) {
                    for cand in [(&p + &r) * half(), (&p - &r) * half()] {
                        if let Some(s) = rational_sqrt(&cand) {
                            if !s.is_zero() {
                                let t = &q / (BigRational::from_integer(2.into()) * &s);
                                out.push(from_surd(field, s, t));
                            } else if let Some(t) = rational_sqrt(&(&p / &mr)) {
                                out.push(from_surd(field, BigRational::zero(), t));
                            }
                        }
                    }
                }
                out
            }
        };
        candidates.into_iter().find(|c| &(c * c) == self)
    }
}

/// Builds `s + t√m` in integral-basis coordinates.
fn from_surd(field: BaseField, s: BigRational, t: BigRational) -> RingElem {
    if field.has_half_basis() {
        // s + t√m = (s - t) + 2t·θ
        let two = BigRational::from_integer(2.into());
        RingElem::from_rationals(field, &s - &t, two * t)
    } else {
        RingElem::from_rationals(field, s, t)
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let theta = if self.field.has_half_basis() { "θ" } else { "√" };
        match self.field {
            BaseField::Rational => write!(f, "{}", self.x),
            BaseField::RealQuadratic { m } => {
                let sym = if theta == "θ" { "θ".to_string() } else { format!("√{m}") };
                if self.y.is_zero() {
                    write!(f, "{}", self.x)
                } else if self.x.is_zero() {
                    write!(f, "{}{}", self.y, sym)
                } else if self.y.is_negative() {
                    write!(f, "{}-{}{}", self.x, -&self.y, sym)
                } else {
                    write!(f, "{}+{}{}", self.x, self.y, sym)
                }
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a RingElem> for &'a RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &'a RingElem) -> RingElem {
                assert_eq!(self.field, rhs.field, "mixed base fields");
                let f: fn(&RingElem, &RingElem) -> RingElem = $body;
                f(self, rhs)
            }
        }
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &'a RingElem) -> RingElem {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<RingElem> for &'a RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| RingElem::from_rationals(a.field, &a.x + &b.x, &a.y + &b.y));
forward_binop!(Sub, sub, |a, b| RingElem::from_rationals(a.field, &a.x - &b.x, &a.y - &b.y));
forward_binop!(Mul, mul, |a, b| {
    let (t, n) = a.field.theta_relation();
    let t = BigRational::from_integer(t.into());
    let n = BigRational::from_integer(n.into());
    let yy = &a.y * &b.y;
    RingElem::from_rationals(
        a.field,
        &a.x * &b.x + &n * &yy,
        &a.x * &b.y + &a.y * &b.x + &t * &yy,
    )
});

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::from_rationals(self.field, -&self.x, -&self.y)
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

fn require_integral(a: &RingElem, what: &str) -> Result<()> {
    if a.is_integral() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {a} is not in O_F")))
    }
}

/// A unit of `O_F`: integral with norm `±1`.
pub fn is_unit(a: &RingElem) -> bool {
    a.is_integral() && a.abs_norm().is_one()
}

/// Does `a` divide `b` in `O_F`?
pub fn divides(a: &RingElem, b: &RingElem) -> bool {
    if a.is_zero() {
        return b.is_zero();
    }
    b.div_exact(a).is_some()
}

/// Nearest-integer quotient `round(a / b)` coordinatewise.
pub fn div_round(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    let t = a.checked_div(b)?;
    let field = a.field;
    Ok(RingElem::from_rationals(
        field,
        BigRational::from_integer(round_rational(&t.x)),
        BigRational::from_integer(round_rational(&t.y)),
    ))
}

/// Division with remainder: `a = q·b + r` with `|N(r)| < |N(b)|`.
pub fn div_rem(a: &RingElem, b: &RingElem) -> Result<(RingElem, RingElem)> {
    if b.is_zero() {
        return Err(Error::Domain("division by zero".into()));
    }
    let q = div_round(a, b)?;
    let r = a - &(&q * b);
    debug_assert!(r.abs_norm() < b.abs_norm());
    Ok((q, r))
}

/// Canonical associate `r = w·a` with `w` a unit.
///
/// For `Q` this is `|a|`. For real quadratic `F` the associate is totally
/// positive with `σ₁(r)/σ₂(r) ∈ [1, ε⁴)`; multiplying by the totally
/// positive unit `ε²` scales that ratio by exactly `ε⁴`, so the choice is unique.
pub fn canonical_associate(a: &RingElem) -> Result<(RingElem, RingElem)> {
    if a.is_zero() {
        return Err(Error::Domain("canonical associate of zero".into()));
    }
    let field = a.field;
    let Some(eps) = field.fundamental_unit() else {
        let w = if a.x.is_negative() { field.int(-1) } else { field.one() };
        return Ok((&w * a, w));
    };
    let mut w = match (a.sign_at(0), a.sign_at(1)) {
        (Ordering::Greater, Ordering::Greater) => field.one(),
        (Ordering::Less, Ordering::Less) => field.int(-1),
        // ε has signs (+, -)
        (Ordering::Greater, _) => eps.clone(),
        _ => -&eps,
    };
    let eps2 = &eps * &eps;
    let eps2_inv = eps2.conj(); // ε² ε'² = 1
    let mut r = &w * a;
    // ratio σ₁/σ₂ ≥ 1 iff the √m-coefficient is ≥ 0
    let ratio_at_least_one = |z: &RingElem| !z.surd_parts().1.is_negative();
    while !ratio_at_least_one(&r) {
        r = &r * &eps2;
        w = &w * &eps2;
    }
    loop {
        let smaller = &r * &eps2_inv;
        if ratio_at_least_one(&smaller) {
            r = smaller;
            w = &w * &eps2_inv;
        } else {
            break;
        }
    }
    Ok((r, w))
}

pub fn is_totally_positive(a: &RingElem) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Domain("total positivity of zero".into()));
    }
    Ok(a.is_totally_positive())
}

/// Canonical gcd of two integral elements.
pub fn gcd_of(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    Ok(bezout(a, b)?.0)
}

/// `(g, u, v)` with `g = gcd_of(a, b)` and `u·a + v·b = g`.
pub fn bezout(a: &RingElem, b: &RingElem) -> Result<(RingElem, RingElem, RingElem)> {
    require_integral(a, "a")?;
    require_integral(b, "b")?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("gcd of (0, 0)".into()));
    }
    let field = a.field;
    let (mut r0, mut s0, mut t0) = (a.clone(), field.one(), field.zero());
    let (mut r1, mut s1, mut t1) = (b.clone(), field.zero(), field.one());
    while !r1.is_zero() {
        let (q, r) = div_rem(&r0, &r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let (g, w) = canonical_associate(&r0)?;
    Ok((g, &w * &s0, &w * &t0))
}

/// Canonical gcd of any number of integral elements (not all zero).
pub fn gcd_many(items: &[RingElem]) -> Result<RingElem> {
    let mut it = items.iter().filter(|x| !x.is_zero());
    let Some(first) = it.next() else {
        return Err(Error::Domain("gcd of zeros".into()));
    };
    let mut g = canonical_associate(first)?.0;
    for x in it {
        g = gcd_of(&g, x)?;
    }
    Ok(g)
}

/// Reduces an integral element coordinatewise into `[0, n)`.
pub fn reduce_mod(a: &RingElem, n: &BigInt) -> RingElem {
    debug_assert!(a.is_integral());
    let (x, y) = a.int_coords();
    RingElem::from_rationals(
        a.field,
        BigRational::from_integer(x.mod_floor(n)),
        BigRational::from_integer(y.mod_floor(n)),
    )
}

/// `a ≡ b (mod n·O_F)` for integral `a, b`.
pub fn congruent_mod(a: &RingElem, b: &RingElem, n: &BigInt) -> bool {
    let d = a - b;
    let nr = BigRational::from_integer(n.clone());
    (&d.x / &nr).is_integer() && (&d.y / &nr).is_integer()
}

/// Inverse of `a` modulo `n·O_F`, if `a` is invertible there.
pub fn inverse_mod(a: &RingElem, n: &BigInt) -> Option<RingElem> {
    let field = a.field;
    let (g, u, _) = bezout(a, &field.integer(n)).ok()?;
    g.is_one().then(|| reduce_mod(&u, n))
}

/// Residues `{ζ mod N·O_F : ζ ∈ O_F^×}`, sorted, as reduced representatives.
///
/// `O_F^×` is generated by `-1` and the fundamental unit.
pub fn units_mod(field: BaseField, n: u64) -> Vec<RingElem> {
    let nb = BigInt::from(n.max(1));
    let mut gens = vec![field.int(-1)];
    if let Some(eps) = field.fundamental_unit() {
        gens.push(eps);
    }
    closure_mod(&gens, &nb)
}

/// Multiplicative closure of `gens` (all units mod `n`) inside `O_F / n`.
pub(crate) fn closure_mod(gens: &[RingElem], n: &BigInt) -> Vec<RingElem> {
    let field = gens[0].field;
    let mut seen = std::collections::BTreeSet::new();
    let one = reduce_mod(&field.one(), n);
    seen.insert(one.clone());
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = reduce_mod(&(&x * g), n);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// `|(O_F / n·O_F)^×|`, by direct count.
pub fn unit_group_order_mod(field: BaseField, n: u64) -> u64 {
    let nb = BigInt::from(n);
    if n == 1 {
        return 1;
    }
    let mut count = 0;
    let ys: Vec<i64> = if field.degree() == 1 { vec![0] } else { (0..n as i64).collect() };
    for x in 0..n as i64 {
        for &y in &ys {
            let e = if field.degree() == 1 { field.int(x) } else { field.elem(x, y) };
            // invertible mod n iff gcd(N(e), n) = 1
            if e.norm().to_integer().gcd(&nb).is_one() {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q5() -> BaseField {
        BaseField::real_quadratic(5).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let q = BaseField::Rational;
        assert_eq!(gcd_of(&q.int(0), &q.int(-9)).unwrap(), q.int(9));
        assert_eq!(gcd_of(&q.int(12), &q.int(18)).unwrap(), q.int(6));
        let f = BaseField::real_quadratic(2).unwrap();
        let g = gcd_of(&f.theta(), &f.int(2)).unwrap();
        // canonical associate of √2 is a unit multiple of it
        assert!(is_unit(&g.checked_div(&f.theta()).unwrap()));
        assert!(divides(&g, &f.int(2)) && divides(&g, &f.theta()));
        assert!(gcd_of(&q.int(0), &q.int(0)).is_err());
    }

    #[test]
    fn bezout_examples() {
        let q = BaseField::Rational;
        assert_eq!(bezout(&q.int(1), &q.int(0)).unwrap(), (q.int(1), q.int(1), q.int(0)));
        let (g, u, v) = bezout(&q.int(10), &q.int(6)).unwrap();
        assert_eq!(g, q.int(2));
        assert_eq!(&u * &q.int(10) + &v * &q.int(6), g);
        let f = q5();
        let a = f.int(2);
        let b = &f.int(2) * &f.theta();
        let (g, u, v) = bezout(&a, &b).unwrap();
        assert_eq!(&(&u * &a) + &(&v * &b), g);
        assert!(divides(&g, &a) && divides(&g, &b));
    }

    #[test]
    fn total_positivity() {
        let f = q5();
        assert!(is_totally_positive(&f.one()).unwrap());
        // √5 = 2θ - 1
        assert!(!is_totally_positive(&f.elem(-1, 2)).unwrap());
        let g = BaseField::real_quadratic(2).unwrap();
        assert!(is_totally_positive(&g.elem(3, 1)).unwrap());
        assert!(is_totally_positive(&g.zero()).is_err());
    }

    #[test]
    fn canonical_associate_examples() {
        let q = BaseField::Rational;
        assert_eq!(canonical_associate(&q.int(-7)).unwrap(), (q.int(7), q.int(-1)));
        let f = BaseField::real_quadratic(2).unwrap();
        let (r, w) = canonical_associate(&f.elem(1, 1)).unwrap();
        assert!(r.is_one());
        assert!(is_unit(&w));
        for m in SUPPORTED_M {
            let f = BaseField::real_quadratic(m).unwrap();
            let a = f.elem(7, -3);
            let (r, w) = canonical_associate(&a).unwrap();
            assert_eq!(canonical_associate(&r).unwrap().0, r);
            assert!(r.is_totally_positive());
            assert_eq!(r, &w * &a);
            // every associate ±ε^k·a has the same canonical form
            let eps = f.fundamental_unit().unwrap();
            for k in -3..=3 {
                let b = -(&a * &eps.powi(k).unwrap());
                assert_eq!(canonical_associate(&b).unwrap().0, r);
            }
        }
    }

    #[test]
    fn units_mod_examples() {
        let q = BaseField::Rational;
        assert_eq!(units_mod(q, 5), vec![q.int(1), q.int(4)]);
        assert_eq!(units_mod(q, 1).len(), 1);
        assert_eq!(units_mod(q5(), 1).len(), 1);
        // Brute-force orbit of ±ε^k in O_F/2O_F = F_4: ε = θ has order 3.
        let f = q5();
        let eps = f.theta();
        let mut orbit = std::collections::BTreeSet::new();
        let mut x = f.one();
        for _ in 0..12 {
            orbit.insert(reduce_mod(&x, &2.into()));
            orbit.insert(reduce_mod(&-&x, &2.into()));
            x = &x * &eps;
        }
        assert_eq!(units_mod(f, 2), orbit.into_iter().collect::<Vec<_>>());
        assert_eq!(units_mod(f, 2).len(), 3);
    }

    #[test]
    fn exact_sqrt() {
        let f = q5();
        let a = f.elem(3, -7);
        let sq = &a * &a;
        let r = sq.sqrt().unwrap();
        assert!(r == a || r == -&a);
        assert!(f.elem(-1, 2).sqrt().is_none());
        let two = BaseField::real_quadratic(2).unwrap();
        assert_eq!(two.int(2).sqrt().map(|r| &r * &r), Some(two.int(2)));
        assert_eq!(BaseField::Rational.int(9).sqrt(), Some(BaseField::Rational.int(3)));
    }

    #[test]
    fn parse_fields() {
        assert_eq!(BaseField::parse("Q").unwrap(), BaseField::Rational);
        assert_eq!(BaseField::parse("Q(sqrt13)").unwrap(), BaseField::RealQuadratic { m: 13 });
        assert!(BaseField::parse("Q(sqrt14)").is_err());
        let json = serde_json::to_string(&q5()).unwrap();
        assert_eq!(json, r#"{"kind":"real_quadratic","m":5}"#);
        let back: BaseField = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q5());
        assert!(serde_json::from_str::<BaseField>(r#"{"kind":"real_quadratic","m":3}"#).is_err());
    }

    #[test]
    fn sign_agrees_with_float() {
        let f = BaseField::real_quadratic(13).unwrap();
        for x in -6..=6 {
            for y in -6..=6 {
                let a = f.elem(x, y);
                for i in 0..2 {
                    let v = a.approx(i);
                    if v.abs() > 1e-9 {
                        assert_eq!(a.sign_at(i), v.partial_cmp(&0.0).unwrap());
                    }
                }
            }
        }
        let _ = BigRational::from_f64(0.5);
    }
}
