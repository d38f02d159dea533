//! 2×2 matrices over the base field.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;

use crate::cm_field::CMElem;
use crate::number_ring::{congruent_mod, reduce_mod, BaseField, RingElem};

/// `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
    pub d: RingElem,
}

impl Mat2 {
    pub fn new(a: RingElem, b: RingElem, c: RingElem, d: RingElem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(field: BaseField) -> Self {
        Mat2::diag(field.one(), field.one())
    }

    pub fn diag(x: RingElem, y: RingElem) -> Self {
        let f = x.field();
        Mat2::new(x, f.zero(), f.zero(), y)
    }

    /// Integer matrix over `field`.
    pub fn from_ints(field: BaseField, e: [[i64; 2]; 2]) -> Self {
        Mat2::new(field.int(e[0][0]), field.int(e[0][1]), field.int(e[1][0]), field.int(e[1][1]))
    }

    pub fn field(&self) -> BaseField {
        self.a.field()
    }

    pub fn det(&self) -> RingElem {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> RingElem {
        &self.a + &self.d
    }

    /// Adjugate; equals the inverse when `det = 1`.
    pub fn adj(&self) -> Mat2 {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn entries(&self) -> [&RingElem; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| e.is_integral())
    }

    /// Entries reduced coordinatewise into `[0, n)`.
    pub fn reduce_mod(&self, n: &BigInt) -> Mat2 {
        Mat2::new(
            reduce_mod(&self.a, n),
            reduce_mod(&self.b, n),
            reduce_mod(&self.c, n),
            reduce_mod(&self.d, n),
        )
    }

    pub fn congruent_mod(&self, other: &Mat2, n: &BigInt) -> bool {
        self.entries().iter().zip(other.entries()).all(|(x, y)| congruent_mod(x, y, n))
    }

    /// Applies `v ↦ M·v` to a column vector.
    pub fn apply(&self, v: (&RingElem, &RingElem)) -> (RingElem, RingElem) {
        (&self.a * v.0 + &self.b * v.1, &self.c * v.0 + &self.d * v.1)
    }

    /// `(a·ξ₁ + b·ξ₂, c·ξ₁ + d·ξ₂)` in `K`.
    pub fn apply_cm(&self, x1: &CMElem, x2: &CMElem) -> (CMElem, CMElem) {
        (&x1.scale(&self.a) + &x2.scale(&self.b), &x1.scale(&self.c) + &x2.scale(&self.d))
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        &self * &o
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
