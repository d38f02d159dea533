//! Multiprecision real and complex arithmetic on top of `astro-float`.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BYTES: usize = std::mem::size_of::<Word>();

/// Extra bits carried beyond the caller's requested precision.
pub const GUARD_BITS: usize = 32;

/// `astro-float` rejects machine integers at fewer bits than a word.
const MIN_WORKING_BITS: usize = 64;

/// Working precision plus the constant cache `astro-float` needs for
/// transcendental functions.
pub struct Ctx {
    prec: usize,
    cc: Consts,
}

impl Ctx {
    /// A context working at `prec + GUARD_BITS` bits, and never below one word.
    pub fn new(prec: usize) -> Result<Self> {
        if prec < 16 {
            return Err(Error::Precision(format!("{prec} bits is too small")));
        }
        let cc = Consts::new().map_err(|e| Error::Precision(format!("{e:?}")))?;
        Ok(Ctx { prec: (prec + GUARD_BITS).max(MIN_WORKING_BITS), cc })
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, RM)
    }

    pub fn real_int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.prec)
    }

    pub fn real_bigint(&self, n: &BigInt) -> BigFloat {
        bigint_to_float(n, self.prec)
    }

    pub fn real_rational(&self, r: &BigRational) -> BigFloat {
        let n = bigint_to_float(r.numer(), self.prec);
        let d = bigint_to_float(r.denom(), self.prec);
        n.div(&d, self.prec, RM)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.prec, RM)
    }

    pub fn rational(&self, r: &BigRational) -> Complex {
        Complex::real(self.real_rational(r), self.prec)
    }

    pub fn int(&self, n: i64) -> Complex {
        Complex::real(self.real_int(n), self.prec)
    }

    pub fn zero(&self) -> Complex {
        self.int(0)
    }

    pub fn one(&self) -> Complex {
        self.int(1)
    }

    pub fn add(&self, a: &Complex, b: &Complex) -> Complex {
        Complex { re: a.re.add(&b.re, self.prec, RM), im: a.im.add(&b.im, self.prec, RM) }
    }

    pub fn sub(&self, a: &Complex, b: &Complex) -> Complex {
        Complex { re: a.re.sub(&b.re, self.prec, RM), im: a.im.sub(&b.im, self.prec, RM) }
    }

    pub fn mul(&self, a: &Complex, b: &Complex) -> Complex {
        let p = self.prec;
        let re = a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM);
        let im = a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM);
        Complex { re, im }
    }

    pub fn scale(&self, a: &Complex, s: &BigFloat) -> Complex {
        Complex { re: a.re.mul(s, self.prec, RM), im: a.im.mul(s, self.prec, RM) }
    }

    pub fn div(&self, a: &Complex, b: &Complex) -> Result<Complex> {
        let n2 = self.norm_sqr(b);
        if n2.is_zero() {
            return Err(Error::Domain("complex division by zero".into()));
        }
        let num = self.mul(a, &b.conj());
        Ok(Complex { re: num.re.div(&n2, self.prec, RM), im: num.im.div(&n2, self.prec, RM) })
    }

    pub fn norm_sqr(&self, a: &Complex) -> BigFloat {
        let p = self.prec;
        a.re.mul(&a.re, p, RM).add(&a.im.mul(&a.im, p, RM), p, RM)
    }

    pub fn abs(&self, a: &Complex) -> BigFloat {
        self.norm_sqr(a).sqrt(self.prec, RM)
    }

    pub fn pow(&self, a: &Complex, mut e: u64) -> Complex {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `e^z`.
    pub fn exp(&mut self, z: &Complex) -> Complex {
        let p = self.prec;
        let r = z.re.exp(p, RM, &mut self.cc);
        let c = z.im.cos(p, RM, &mut self.cc);
        let s = z.im.sin(p, RM, &mut self.cc);
        Complex { re: r.mul(&c, p, RM), im: r.mul(&s, p, RM) }
    }

    /// `e^{2πi·z}`.
    pub fn exp_2pi_i(&mut self, z: &Complex) -> Complex {
        let two_pi = self.pi().mul(&self.real_int(2), self.prec, RM);
        let w = Complex { re: z.im.mul(&two_pi, self.prec, RM).neg(), im: z.re.mul(&two_pi, self.prec, RM) };
        self.exp(&w)
    }

    /// `e^{πi·t}` for rational `t`.
    pub fn exp_pi_i_rational(&mut self, t: &BigRational) -> Complex {
        let pi = self.pi();
        let angle = self.real_rational(t).mul(&pi, self.prec, RM);
        Complex { re: angle.cos(self.prec, RM, &mut self.cc), im: angle.sin(self.prec, RM, &mut self.cc) }
    }

    /// Decimal rendering of a real.
    pub fn format_real(&mut self, x: &BigFloat) -> String {
        x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".into())
    }

    pub fn parse_real(&mut self, s: &str) -> Result<BigFloat> {
        let f = BigFloat::parse(s, Radix::Dec, self.prec, RM, &mut self.cc);
        if f.is_nan() {
            Err(Error::Parse(format!("not a decimal number: {s:?}")))
        } else {
            Ok(f)
        }
    }
}

/// Nearest integer to `x`, halves rounded up.
pub fn round_to_int(x: &BigFloat) -> BigInt {
    let h = BigFloat::from_f64(0.5, x.precision().unwrap_or(64).max(64));
    let y = x.add(&h, x.precision().unwrap_or(64) + 8, RM).floor();
    float_to_bigint(&y)
}

/// Truncating conversion toward zero.
pub fn float_to_bigint(f: &BigFloat) -> BigInt {
    let i = f.int();
    let Some((m, _, s, e, _)) = i.as_raw_parts() else {
        return BigInt::zero();
    };
    let mut bytes = Vec::with_capacity(m.len() * WORD_BYTES);
    for w in m {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let mag = BigUint::from_bytes_le(&bytes);
    let shift = e as i64 - (m.len() * WORD_BYTES * 8) as i64;
    let mag = if shift >= 0 { mag << (shift as usize) } else { mag >> ((-shift) as usize) };
    let r = BigInt::from(mag);
    if s == Sign::Neg {
        -r
    } else {
        r
    }
}

pub fn bigint_to_float(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_i64(0, p);
    }
    let (sign, mut bytes) = n.to_bytes_le();
    while bytes.len() % WORD_BYTES != 0 {
        bytes.push(0);
    }
    let words: Vec<Word> = bytes
        .chunks(WORD_BYTES)
        .map(|c| {
            let mut a = [0u8; WORD_BYTES];
            a.copy_from_slice(c);
            Word::from_le_bytes(a)
        })
        .collect();
    let e = (words.len() * WORD_BYTES * 8) as i32;
    let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    let mut f = BigFloat::from_words(&words, s, e);
    let _ = f.set_precision(p, RM);
    f
}

/// Double-precision approximation (for bounds and display).
pub fn to_f64(f: &BigFloat) -> f64 {
    if f.is_nan() {
        return f64::NAN;
    }
    let Some((m, _, s, e, _)) = f.as_raw_parts() else {
        return 0.0;
    };
    if f.is_zero() || m.is_empty() {
        return 0.0;
    }
    let word_bits = (WORD_BYTES * 8) as i32;
    let mut mant = 0.0f64;
    for (k, w) in m.iter().rev().take(3).enumerate() {
        mant += (*w as f64) * 2f64.powi(-(word_bits * (k as i32 + 1)));
    }
    let v = mant * 2f64.powi(e);
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `log2 |x|`, or `-inf` for zero.
pub fn log2_abs(f: &BigFloat) -> f64 {
    if f.is_zero() {
        return f64::NEG_INFINITY;
    }
    let e = f.exponent().unwrap_or(0) as f64;
    let mut g = f.abs();
    g.set_exponent(0);
    e + to_f64(&g).log2()
}

#[derive(Clone)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn real(re: BigFloat, prec: usize) -> Self {
        Complex { re, im: BigFloat::from_i64(0, prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Complex { re: BigFloat::from_f64(re, prec), im: BigFloat::from_f64(im, prec) }
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "({re:e} {im:+e}i)")
    }
}

/// `log2 |a - b|`, a convenient distance for tolerance checks.
pub fn log2_dist(ctx: &Ctx, a: &Complex, b: &Complex) -> f64 {
    log2_abs(&ctx.abs(&ctx.sub(a, b)))
}
