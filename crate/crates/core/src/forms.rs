//! Binary quadratic forms `ax² + bxy + cy²` over `O_F` and the action of
//! `Γ_{F,1}(N)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::cm_field::{regular_rep, CMElem, CMField};
use crate::error::{Error, Result};
use crate::ideals::FracIdeal;
use crate::matrix::Mat2;
use crate::mp::{Complex, Ctx};
use crate::number_ring::{congruent_mod, gcd_many, is_unit, units_mod, BaseField, RingElem};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
}

impl QuadForm {
    pub fn new(a: RingElem, b: RingElem, c: RingElem) -> Self {
        QuadForm { a, b, c }
    }

    /// `x² + b_K·xy + c_K·y²`.
    pub fn principal(field: &CMField) -> Self {
        QuadForm::new(field.base().one(), field.b().clone(), field.c().clone())
    }

    pub fn base(&self) -> BaseField {
        self.a.field()
    }

    pub fn discriminant(&self) -> RingElem {
        &(&self.b * &self.b) - &(&self.base().int(4) * &(&self.a * &self.c))
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integral() && self.b.is_integral() && self.c.is_integral()
    }

    pub fn is_primitive(&self) -> bool {
        self.is_integral()
            && gcd_many(&[self.a.clone(), self.b.clone(), self.c.clone()]).map(|g| g.is_one()).unwrap_or(false)
    }

    /// Member of `𝒬_F`: integral, primitive, `a > 0` at the identity, `d ≪ 0`.
    pub fn is_valid(&self) -> bool {
        self.is_primitive()
            && self.a.sign_at(0) == Ordering::Greater
            && (-&self.discriminant()).is_totally_positive()
    }

    /// Membership in `𝒬_F(N, d_K)`.
    pub fn membership(&self, field: &CMField, n: &BigInt) -> bool {
        self.base() == field.base()
            && self.is_valid()
            && &self.discriminant() == field.d()
            && gcd_many(&[self.a.clone(), field.base().integer(n)]).map(|g| g.is_one()).unwrap_or(false)
    }

    /// `a ≫ 0`.
    pub fn is_totally_positive(&self) -> bool {
        self.a.is_totally_positive()
    }

    /// `Q(x, y)`.
    pub fn eval(&self, x: &RingElem, y: &RingElem) -> RingElem {
        &(&(&self.a * &(x * x)) + &(&self.b * &(x * y))) + &(&self.c * &(y * y))
    }

    /// `Q(z, 1)` for `z ∈ K`.
    pub fn eval_at(&self, field: &CMField, z: &CMElem) -> CMElem {
        let sa = field.from_base(self.a.clone());
        let sb = field.from_base(self.b.clone());
        let sc = field.from_base(self.c.clone());
        &(&(&sa * &(z * z)) + &(&sb * z)) + &sc
    }

    /// `Q^γ(x, y) = Q(γ·(x, y)ᵀ) / det γ`.
    pub fn act(&self, g: &Mat2) -> Result<QuadForm> {
        let det = g.det();
        if !is_unit(&det) {
            return Err(Error::Domain(format!("det γ = {det} is not a unit")));
        }
        let inv = det.inv()?;
        let two = self.base().int(2);
        let a = self.eval(&g.a, &g.c);
        let c = self.eval(&g.b, &g.d);
        let b = &(&(&two * &(&self.a * &(&g.a * &g.b))) + &(&self.b * &(&(&g.a * &g.d) + &(&g.b * &g.c))))
            + &(&two * &(&self.c * &(&g.c * &g.d)));
        Ok(QuadForm::new(&a * &inv, &b * &inv, &c * &inv))
    }

    /// `ω_Q = (ω_K + (b_K - b)/2)/a`, the root of `Q(x, 1)` in `ℍ`.
    pub fn omega(&self, field: &CMField) -> Result<CMElem> {
        let shift = (field.b() - &self.b).scale(&num_rational::BigRational::new(1.into(), 2.into()));
        if !shift.is_integral() {
            return Err(Error::Invariant(format!("(b_K - b)/2 = {shift} is not integral")));
        }
        let ainv = self.a.inv()?;
        Ok(field.elem(&shift * &ainv, ainv))
    }

    /// The fractional ideal `[ω_Q, 1]_F`.
    pub fn ideal(&self, field: &CMField) -> Result<FracIdeal> {
        FracIdeal::reduce(&self.omega(field)?, &field.one())
    }

    /// `(φ₁(-ω̄_Q), …, φ_g(-ω̄_Q))`.
    pub fn cm_point(&self, field: &CMField, ctx: &mut Ctx) -> Result<Vec<Complex>> {
        let w = -&self.omega(field)?.conj();
        Ok((0..field.g()).map(|i| w.embed(i, ctx)).collect())
    }

    /// Equivalent representative with `a ≫ 0`, via `γ = diag(ζ, 1)`.
    pub fn totally_positive_rep(&self) -> QuadForm {
        self.act(&self.totally_positive_matrix()).expect("unit determinant")
    }

    /// The matrix `diag(ζ, 1)` used by [`QuadForm::totally_positive_rep`].
    pub fn totally_positive_matrix(&self) -> Mat2 {
        let f = self.base();
        let zeta = match (self.a.sign_at(1), f.fundamental_unit()) {
            (Ordering::Less, Some(eps)) => eps,
            _ => f.one(),
        };
        Mat2::diag(zeta, f.one())
    }
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Shrinks a form over `Q` within its `Γ_1(N)` orbit using the moves
/// `[[1, t], [0, 1]]` and `[[1, 0], [Nt, 1]]` while `a + c` decreases.
/// Returns the form and the accumulated matrix. Other base fields are returned unchanged.
pub fn reduce_in_orbit(q: &QuadForm, n: &BigInt) -> (QuadForm, Mat2) {
    let f = q.base();
    let mut g = Mat2::identity(f);
    if f.degree() != 1 {
        return (q.clone(), g);
    }
    let size = |q: &QuadForm| q.a.x() + q.c.x();
    let mut cur = q.clone();
    loop {
        let (a, b, c) = (cur.a.x().to_integer(), cur.b.x().to_integer(), cur.c.x().to_integer());
        let t1 = nearest_quotient(&(-&b), &(&a * 2));
        let nc = n.clone() * &c * 2;
        let t2 = nearest_quotient(&(-&b), &nc);
        let moves = [
            Mat2::new(f.one(), f.integer(&t1), f.zero(), f.one()),
            Mat2::new(f.one(), f.zero(), f.integer(&(n * &t2)), f.one()),
        ];
        let best = moves
            .iter()
            .map(|m| (cur.act(m).expect("det 1"), m))
            .filter(|(r, _)| size(r) < size(&cur))
            .min_by(|x, y| size(&x.0).cmp(&size(&y.0)));
        match best {
            Some((r, m)) => {
                g = &g * m;
                cur = r;
            }
            None => return (cur, g),
        }
    }
}

fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    crate::number_ring::round_rational(&num_rational::BigRational::new(a.clone(), b.clone()))
}

/// Membership in `Γ_{F,1}(N)`: unit determinant positive at the identity,
/// `c₃ ≡ 0` and `c₄ ≡ ζ (mod N)` for a unit `ζ`.
pub fn in_gamma1(g: &Mat2, n: &BigInt) -> bool {
    let det = g.det();
    if !g.is_integral() || !is_unit(&det) || det.sign_at(0) != Ordering::Greater {
        return false;
    }
    if !congruent_mod(&g.c, &g.field().zero(), n) {
        return false;
    }
    let nn: u64 = n.try_into().unwrap_or(u64::MAX);
    let units = units_mod(g.field(), nn);
    units.iter().any(|z| congruent_mod(&g.d, z, n))
}

/// `Γ⁺_{F,1}(N)`: additionally `det ≫ 0`.
pub fn in_gamma1_plus(g: &Mat2, n: &BigInt) -> bool {
    in_gamma1(g, n) && g.det().is_totally_positive()
}

/// A validated element of `Γ_{F,1}(N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMatrix {
    pub matrix: Mat2,
    pub level: BigInt,
}

impl GammaMatrix {
    pub fn new(matrix: Mat2, level: BigInt) -> Result<Self> {
        if in_gamma1(&matrix, &level) {
            Ok(GammaMatrix { matrix, level })
        } else {
            Err(Error::Domain(format!("{matrix:?} is not in Γ_1({level})")))
        }
    }

    pub fn is_plus(&self) -> bool {
        self.matrix.det().is_totally_positive()
    }
}

/// The unique `Q ∈ 𝒬_F(N, d_K)` with `ω_Q = z`.
pub fn form_from_point(field: &CMField, z: &CMElem, n: &BigInt) -> Result<QuadForm> {
    if z.in_base() {
        return Err(Error::DegenerateBasis("z lies in F".into()));
    }
    if z.im_sign(0) != Ordering::Greater {
        return Err(Error::Domain("z is not in the upper half-plane".into()));
    }
    let ideal = FracIdeal::reduce(z, &field.one())?;
    let f = field.base();
    // min(z, F) = x² - tr(z)·x + N(z), cleared of denominators
    let tr = z.trace_rel();
    let nm = z.norm_rel();
    let den = num_integer::Integer::lcm(&tr.denominator(), &nm.denominator());
    let s = num_rational::BigRational::from_integer(den);
    let (a0, b0, c0) = (f.one().scale(&s), (-&tr).scale(&s), nm.scale(&s));
    let g = gcd_many(&[a0.clone(), b0.clone(), c0.clone()])?;
    let ginv = g.inv()?;
    let mut q0 = QuadForm::new(&a0 * &ginv, &b0 * &ginv, &c0 * &ginv);
    if q0.a.sign_at(0) == Ordering::Less {
        q0 = QuadForm::new(-&q0.a, -&q0.b, -&q0.c);
    }
    // d_{Q₀} = η²·d_K for a unit η > 0
    let u = q0.discriminant().checked_div(field.d())?;
    let eta = u
        .sqrt()
        .filter(is_unit)
        .ok_or_else(|| Error::Invariant(format!("d_Q/d_K = {u} is not the square of a unit")))?;
    let eta = if eta.sign_at(0) == Ordering::Less { -&eta } else { eta };
    let einv = eta.inv()?;
    let q = QuadForm::new(&q0.a * &einv, &q0.b * &einv, &q0.c * &einv);
    debug_assert_eq!(&q.omega(field)?, z);
    if !ideal.is_coprime_to(n) || !q.membership(field, n) {
        return Err(Error::NotCoprime(format!("[z, 1] is not prime to {n}")));
    }
    Ok(q)
}

/// `[Q] = [Q']` in `𝒞_F(N, d_K)`, decided through ray classes.
pub fn equivalent(field: &CMField, q1: &QuadForm, q2: &QuadForm, n: &BigInt, budget: u64) -> Result<bool> {
    let i1 = q1.ideal(field)?;
    let i2 = q2.ideal(field)?;
    i2.same_ray_class(&i1, n, budget)
}

/// Some `γ ∈ Γ_{F,1}(N)` with `Q' = Q^γ`, built from a generator `ν ≡* 1`
/// of `[ω_{Q'}, 1]·[ω_Q, 1]⁻¹` via `[νω_Q; ν] = γ·[ω_{Q'}; 1]`.
pub fn equivalence_certificate(
    field: &CMField,
    q: &QuadForm,
    q2: &QuadForm,
    n: &BigInt,
    budget: u64,
) -> Result<Option<Mat2>> {
    let w = q.omega(field)?;
    let w2 = q2.omega(field)?;
    let quotient = q2.ideal(field)?.div(&q.ideal(field)?);
    let Some(nu) = quotient.principal_generator_mod(n, budget)? else {
        return Ok(None);
    };
    let h = regular_rep(&(&nu * &w), &w2)?;
    let k = regular_rep(&nu, &w2)?;
    // first rows of h_{ω_Q'}(νω_Q) and h_{ω_Q'}(ν) give the two rows of γ
    let g = Mat2::new(h.c.clone(), h.d.clone(), k.c.clone(), k.d.clone());
    let acted = q.act(&g)?;
    if &acted != q2 || !in_gamma1(&g, n) {
        return Err(Error::Invariant(format!("certificate {g:?} does not map {q:?} to {q2:?}")));
    }
    Ok(Some(g))
}

/// `γ' = [[a₁, -a₂], [-a₃, a₄]]`, which moves `-ω̄` the way `γ` moves `ω`.
pub fn conjugate_action_matrix(g: &Mat2) -> Mat2 {
    Mat2::new(g.a.clone(), -&g.b, -&g.c, g.d.clone())
}

/// `-ω̄` for `z ∈ K`.
pub fn neg_conj(z: &CMElem) -> CMElem {
    -&z.conj()
}

/// Random-looking but deterministic element of `Γ_{F,1}(N)` from small integers.
pub fn gamma1_from_params(f: BaseField, n: &BigInt, p: [i64; 4]) -> Mat2 {
    // [[1, p0], [0, 1]]·[[1, 0], [N·p1, 1]]·[[1, p2 + p3θ], [0, 1]]
    let nn = f.integer(n);
    let top = Mat2::new(f.one(), f.int(p[0]), f.zero(), f.one());
    let low = Mat2::new(f.one(), f.zero(), &nn * &f.int(p[1]), f.one());
    let shift = if f.degree() == 2 { f.elem(p[2], p[3]) } else { f.int(p[2] + p[3]) };
    let top2 = Mat2::new(f.one(), shift, f.zero(), f.one());
    &(&top * &low) * &top2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn k23() -> CMField {
        let q = BaseField::Rational;
        CMField::new(q.int(1), q.int(6)).unwrap()
    }

    fn zeta5() -> CMField {
        let f = BaseField::real_quadratic(5).unwrap();
        CMField::new(f.elem(1, -1), f.int(1)).unwrap()
    }

    fn qf(a: i64, b: i64, c: i64) -> QuadForm {
        let q = BaseField::Rational;
        QuadForm::new(q.int(a), q.int(b), q.int(c))
    }

    #[test]
    fn membership_examples() {
        let k = k23();
        assert!(QuadForm::principal(&k).membership(&k, &BigInt::from(7)));
        assert!(!qf(2, 1, 3).membership(&k, &BigInt::from(2)));
        assert!(qf(2, 1, 3).membership(&k, &BigInt::from(5)));
        assert!(!qf(4, 2, 6).membership(&k, &BigInt::one()));
    }

    #[test]
    fn action_examples() {
        let q = BaseField::Rational;
        let g = Mat2::from_ints(q, [[1, 1], [0, 1]]);
        assert_eq!(qf(1, 1, 6).act(&g).unwrap(), qf(1, 3, 8));
        assert_eq!(qf(1, 1, 6).act(&Mat2::identity(q)).unwrap(), qf(1, 1, 6));
        let s = Mat2::from_ints(q, [[2, 1], [5, 3]]);
        let lhs = qf(2, 1, 3).act(&g).unwrap().act(&s).unwrap();
        let rhs = qf(2, 1, 3).act(&(&g * &s)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_examples() {
        let k = k23();
        assert_eq!(QuadForm::principal(&k).omega(&k).unwrap(), k.omega());
        let f = qf(2, 1, 3);
        let w = f.omega(&k).unwrap();
        assert!(f.eval_at(&k, &w).is_zero());
        assert_eq!(w, k.omega().scale_q(&num_rational::BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn ideal_of_principal_form() {
        let k = k23();
        assert!(QuadForm::principal(&k).ideal(&k).unwrap().is_unit());
        let q = BaseField::Rational;
        let gi = CMField::new(q.int(0), q.int(1)).unwrap();
        assert!(qf(1, 0, 1).ideal(&gi).unwrap().is_unit());
    }

    #[test]
    fn form_from_point_round_trip() {
        let k = k23();
        let one = BigInt::one();
        assert_eq!(form_from_point(&k, &k.omega(), &one).unwrap(), QuadForm::principal(&k));
        for f in [qf(2, 1, 3), qf(2, -1, 3), qf(3, 5, 4)] {
            let w = f.omega(&k).unwrap();
            assert_eq!(form_from_point(&k, &w, &one).unwrap(), f);
        }
        assert!(form_from_point(&k, &k.int(2), &one).is_err());
    }

    #[test]
    fn unit_scaled_point() {
        // z = ω/ε in Q(ζ₅): the form scaled by the unit
        let k = zeta5();
        let f = k.base();
        let eps = f.fundamental_unit().unwrap();
        let z = k.omega().scale(&eps.inv().unwrap());
        let q = form_from_point(&k, &z, &BigInt::one()).unwrap();
        assert_eq!(&q.discriminant(), k.d());
        assert_eq!(q.omega(&k).unwrap(), z);
        assert_eq!(q.a, eps);
    }

    #[test]
    fn equivalence_examples() {
        let k = k23();
        let one = BigInt::one();
        let budget = crate::ideals::DEFAULT_BUDGET;
        assert!(!equivalent(&k, &qf(1, 1, 6), &qf(2, 1, 3), &one, budget).unwrap());
        assert!(!equivalent(&k, &qf(2, -1, 3), &qf(2, 1, 3), &one, budget).unwrap());
        let q = BaseField::Rational;
        let g = Mat2::from_ints(q, [[2, 1], [5, 3]]);
        let moved = qf(2, 1, 3).act(&g).unwrap();
        assert!(equivalent(&k, &qf(2, 1, 3), &moved, &one, budget).unwrap());
        let cert = equivalence_certificate(&k, &qf(2, 1, 3), &moved, &one, budget).unwrap().unwrap();
        assert_eq!(qf(2, 1, 3).act(&cert).unwrap(), moved);
    }

    #[test]
    fn totally_positive() {
        let f = BaseField::real_quadratic(2).unwrap();
        // Q(ζ₈) has a unit form with a = -1 + √2 (positive at the identity only)
        let k = CMField::new(f.elem(0, -1), f.int(1)).unwrap();
        let u = f.elem(-1, 1);
        let g = Mat2::diag(u.clone(), f.one());
        let base = QuadForm::principal(&k);
        let q = base.act(&g).unwrap();
        assert_eq!(q.a, u);
        assert!(!q.is_totally_positive());
        let r = q.totally_positive_rep();
        assert!(r.is_totally_positive());
        assert!(equivalent(&k, &q, &r, &BigInt::from(3), crate::ideals::DEFAULT_BUDGET).unwrap());
        assert_eq!(r.totally_positive_rep(), r);
        assert_eq!(qf(2, 1, 3).totally_positive_rep(), qf(2, 1, 3));
    }

    #[test]
    fn cm_point_of_gaussian_form() {
        let q = BaseField::Rational;
        let k = CMField::new(q.int(0), q.int(1)).unwrap();
        let mut ctx = Ctx::new(64).unwrap();
        let p = qf(1, 0, 1).cm_point(&k, &mut ctx).unwrap();
        let (re, im) = p[0].to_f64();
        assert!(re.abs() < 1e-15 && (im - 1.0).abs() < 1e-15);
    }
}
