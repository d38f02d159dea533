//! Exact identities checked on randomized inputs. Each property takes a
//! field index, a level and a bag of small integers, and either passes,
//! rejects an unusable draw, or fails.

use cmforms::analytic::{invariant_setup, invariant_setup_from_form};
use cmforms::class_groups::{decompose_a, lift_sl2, phi, phi_inverse, phi_inverse_from_basis};
use cmforms::cm_field::{regular_rep, CMElem};
use cmforms::forms::{equivalence_certificate, equivalent, form_from_point, in_gamma1};
use cmforms::ideals::{mult_congruent_one, FracIdeal, DEFAULT_BUDGET};
use cmforms::matrix::Mat2;
use cmforms::mp::Ctx;
use cmforms::number_ring::{gcd_many, gcd_of, inverse_mod, is_unit, RingElem};
use cmforms::reflex::{congruent_one, GaloisField};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::*;

pub const PARAMS: usize = 48;

#[derive(Clone, Debug)]
pub struct Input {
    pub field: usize,
    pub n: u64,
    pub p: Vec<i64>,
}

impl Input {
    pub fn field(&self) -> CMField {
        fields()[self.field].clone()
    }

    /// Levels are kept small over real quadratic bases.
    pub fn level(&self) -> BigInt {
        let k = self.field();
        BigInt::from(if k.g() == 2 { 1 + (self.n - 1) % 3 } else { self.n })
    }
}

pub fn input() -> impl Strategy<Value = Input> {
    (0..fields().len(), 1u64..=6, prop::collection::vec(-6i64..=6, PARAMS))
        .prop_map(|(field, n, p)| Input { field, n, p })
}

pub type Prop = fn(&Input) -> Result<(), TestCaseError>;

fn err<E: std::fmt::Debug>(e: E) -> TestCaseError {
    TestCaseError::fail(format!("{e:?}"))
}

fn some<T>(x: Option<T>) -> Result<T, TestCaseError> {
    x.ok_or_else(|| TestCaseError::reject("unusable draw"))
}

fn form(inp: &Input, at: usize) -> Result<QuadForm, TestCaseError> {
    some(random_form(&inp.field(), &inp.level(), &inp.p[at..at + 16]))
}

/// `a·𝔞·𝔞̄ = O_K` for `𝔞 = [ω_Q, 1]_F`.
pub fn fractional_norm(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let q = form(inp, 0)?;
    let a = q.ideal(&k).map_err(err)?;
    let prod = a.mul(&a.conj()).scale(&k.from_base(q.a.clone())).map_err(err)?;
    prop_assert_eq!(prod, FracIdeal::unit(&k));
    Ok(())
}

/// `ω_Q = γ(ω_{Q^γ})` in `K`.
pub fn action_zero(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let n = inp.level();
    let q = form(inp, 0)?;
    let g = gamma1(k.base(), &n, &inp.p[16..23]);
    prop_assert!(in_gamma1(&g, &n));
    let q2 = q.act(&g).map_err(err)?;
    prop_assert!(q2.membership(&k, &n));
    let w2 = q2.omega(&k).map_err(err)?;
    prop_assert_eq!(q.omega(&k).map_err(err)?, w2.mobius(&g).map_err(err)?);
    Ok(())
}

/// Forward: `d_Q = d_K` makes `[ω_Q, 1]_F` an `O_K`-module. Backward: for
/// `z = u·ω_Q + t` the primitive form of `min(z, F)` has `d = η²·d_K` for
/// a unit `η`, and the rescaled form has root `z` and discriminant `d_K`.
pub fn unit_discriminant(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let f = k.base();
    let n = inp.level();
    let q = form(inp, 0)?;
    let w = q.omega(&k).map_err(err)?;
    prop_assert!(FracIdeal::reduce(&w, &k.one()).is_ok());

    let u = positive_unit(f, inp.p[16] % 3).pow(2);
    let t = base_elem(f, inp.p[17], inp.p[18]);
    let z = &(&k.from_base(u) * &w) + &k.from_base(t);
    let (tr, nm) = (z.trace_rel(), z.norm_rel());
    let den = tr.denominator() * nm.denominator();
    let s = f.integer(&den);
    let coeffs = [s.clone(), -&(&s * &tr), &s * &nm];
    let content = gcd_many(&coeffs).map_err(err)?;
    let [a, b, c] = coeffs.map(|x| x.div_exact(&content).unwrap());
    let d_raw = &(&b * &b) - &(&f.int(4) * &(&a * &c));
    let ratio = d_raw.checked_div(k.d()).map_err(err)?;
    prop_assert!(ratio.is_integral() && is_unit(&ratio), "d_Q / d_K = {:?}", ratio);
    prop_assert!(ratio.sqrt().is_some(), "d_Q / d_K = {:?} is not a square", ratio);

    let q2 = form_from_point(&k, &z, &n).map_err(err)?;
    prop_assert_eq!(q2.discriminant(), k.d().clone());
    prop_assert_eq!(q2.omega(&k).map_err(err)?, z);
    Ok(())
}

/// `Q ~ Q'` exactly when a `Γ_{F,1}(N)` certificate exists, which happens
/// exactly when the ray classes of `[ω_Q, 1]_F` agree.
pub fn equivalence_ray_class(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let n = inp.level();
    let q = form(inp, 0)?;
    let g = gamma1(k.base(), &n, &inp.p[16..23]);
    let moved = q.act(&g).map_err(err)?;
    let other = form(inp, 23)?;
    for q2 in [moved, other] {
        let same = phi(&k, &q)
            .and_then(|a| phi(&k, &q2).and_then(|b| a.same_ray_class(&b, &n, DEFAULT_BUDGET)))
            .map_err(err)?;
        prop_assert_eq!(equivalent(&k, &q, &q2, &n, DEFAULT_BUDGET).map_err(err)?, same);
        match equivalence_certificate(&k, &q, &q2, &n, DEFAULT_BUDGET).map_err(err)? {
            Some(c) => {
                prop_assert!(same);
                prop_assert!(in_gamma1(&c, &n));
                prop_assert_eq!(q.act(&c).map_err(err)?, q2.clone());
            }
            None => prop_assert!(!same),
        }
    }
    let moved = q.act(&g).map_err(err)?;
    prop_assert!(equivalent(&k, &q, &moved, &n, DEFAULT_BUDGET).map_err(err)?);
    Ok(())
}

/// A matrix over `O_F` with determinant `≡ 1 (mod N)`.
fn det_one_mod(inp: &Input, n: &BigInt) -> Result<Mat2, TestCaseError> {
    let f = inp.field().base();
    let p = &inp.p;
    let a = base_elem(f, p[0], p[1]);
    let b = base_elem(f, p[2], p[3]);
    let c = base_elem(f, p[4], p[5]);
    let ai = some(inverse_mod(&a, n))?;
    let d = &(&f.one() + &(&b * &c)) * &ai;
    let nn = f.integer(n);
    let shift = |x: RingElem, i: usize| &x + &(&nn * &base_elem(f, p[i], p[i + 1]));
    Ok(Mat2::new(shift(a, 8), shift(b, 10), shift(c, 12), shift(d, 14)))
}

/// `det L = 1` and `L ≡ M (mod N)`.
pub fn lift_congruence(inp: &Input) -> Result<(), TestCaseError> {
    let n = inp.level();
    let m = det_one_mod(inp, &n)?;
    let l = lift_sl2(&m, &n).map_err(err)?;
    prop_assert!(l.det().is_one(), "det {:?}", l.det());
    prop_assert!(l.congruent_mod(&m, &n));
    Ok(())
}

/// `A ≡ diag(1, det A)·A₁ (mod N)` with `A₁ ∈ SL₂(O_F)`.
pub fn decompose_congruence(inp: &Input) -> Result<(), TestCaseError> {
    let f = inp.field().base();
    let n = inp.level();
    let p = &inp.p;
    let a = Mat2::new(base_elem(f, p[0], p[1]), base_elem(f, p[2], p[3]), base_elem(f, p[4], p[5]), base_elem(f, p[6], p[7]));
    let det = a.det();
    let coprime = !det.is_zero() && is_unit(&gcd_of(&det, &f.integer(&n)).map_err(err)?);
    prop_assume!(det.is_totally_positive() && coprime);
    let (d, a1) = decompose_a(&a, &n).map_err(err)?;
    prop_assert_eq!(&d, &det);
    prop_assert!(a1.det().is_one());
    prop_assert!((&Mat2::diag(f.one(), d) * &a1).congruent_mod(&a, &n));
    Ok(())
}

/// `det A ≫ 0` and `gcd(det A, N) = 1` for both setup choices.
pub fn setup_determinant(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let f = k.base();
    let n = inp.level();
    let mut ctx = Ctx::new(64).map_err(err)?;
    let c = some(coprime_ideal(&k, &n, &inp.p[0..8], inp.p[8] % 2 == 0))?;
    let q = form(inp, 16)?;
    let setups = [
        invariant_setup(&c, &n, &mut ctx).map_err(err)?,
        invariant_setup_from_form(&k, &q.totally_positive_rep(), &n, &mut ctx).map_err(err)?,
    ];
    for s in setups {
        let d = s.a.det();
        prop_assert!(d.is_totally_positive(), "det A = {:?}", d);
        prop_assert!(is_unit(&gcd_of(&d, &f.integer(&n)).map_err(err)?));
        prop_assert!(s.verify(&n).map_err(err)?);
        for v in &s.cm_values {
            prop_assert!(v.im.is_positive());
        }
    }
    Ok(())
}

/// `d ≡* 1 (mod N·O_{K*})` implies `g(d) ≡* 1 (mod N·O_K)`.
pub fn reflex_norm_congruence(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let n = inp.level();
    let gf = GaloisField::new(&k).map_err(err)?;
    let x = cm_elem(&k, &inp.p[0..4]);
    let y = cm_elem(&k, &inp.p[4..8]);
    let den = congruent_one(&k, &n, &y);
    prop_assume!(!den.is_zero());
    let d = congruent_one(&k, &n, &x).checked_div(&den).map_err(err)?;
    prop_assume!(!d.is_zero());
    let mut star = k.one();
    for &h in &gf.reflex.h_star {
        star = &star * &gf.autos[h].apply(&d);
    }
    prop_assert!(gf.in_reflex_field(&star));
    prop_assert!(mult_congruent_one(&star, &n).map_err(err)?);
    let g = gf.reflex_norm_elem(&star).map_err(err)?;
    prop_assert!(mult_congruent_one(&g, &n).map_err(err)?, "g(d) = {:?}", g);
    Ok(())
}

fn non_base(k: &CMField, p: &[i64]) -> Result<CMElem, TestCaseError> {
    let z = cm_elem(k, p);
    prop_assume!(!z.in_base());
    Ok(z)
}

/// `h_ξ(νλ) = h_ξ(ν)·h_ξ(λ)`.
pub fn regular_rep_multiplicative(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let nu = cm_elem(&k, &inp.p[0..4]);
    let la = cm_elem(&k, &inp.p[4..8]);
    let xi = non_base(&k, &inp.p[8..12])?.checked_div(&k.from_base(base_elem(k.base(), inp.p[12].abs() + 1, 0))).map_err(err)?;
    let h = |z: &CMElem| regular_rep(z, &xi).map_err(err);
    prop_assert_eq!(h(&(&nu * &la))?, &h(&nu)? * &h(&la)?);
    let hn = h(&nu)?;
    prop_assert_eq!(hn.det(), nu.norm_rel());
    prop_assert_eq!(hn.trace(), nu.trace_rel());
    Ok(())
}

/// `(Q^γ)^σ = Q^{γσ}`.
pub fn action_composition(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let n = inp.level();
    let q = form(inp, 0)?;
    let g = gamma1(k.base(), &n, &inp.p[16..23]);
    let s = gamma1(k.base(), &n, &inp.p[23..30]);
    prop_assert_eq!(q.act(&g).and_then(|x| x.act(&s)).map_err(err)?, q.act(&(&g * &s)).map_err(err)?);
    prop_assert_eq!(q.act(&Mat2::identity(k.base())).map_err(err)?, q.clone());
    prop_assert_eq!(q.act(&g).map_err(err)?.discriminant(), k.d().clone());
    Ok(())
}

/// `form_from_point(ω_Q) = Q`, and `φ⁻¹∘φ` stays in the class.
pub fn point_round_trip(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let n = inp.level();
    let q = form(inp, 0)?;
    prop_assert_eq!(form_from_point(&k, &q.omega(&k).map_err(err)?, &n).map_err(err)?, q.clone());
    let back = phi_inverse(&phi(&k, &q).map_err(err)?, &n).map_err(err)?;
    prop_assert!(back.membership(&k, &n) && back.is_totally_positive());
    prop_assert!(equivalent(&k, &q, &back, &n, DEFAULT_BUDGET).map_err(err)?);
    Ok(())
}

/// Any `O_F`-basis of `𝔞⁻¹` gives the same class.
pub fn basis_independence(inp: &Input) -> Result<(), TestCaseError> {
    let k = inp.field();
    let n = inp.level();
    let a = some(coprime_ideal(&k, &n, &inp.p[0..8], false))?;
    let (x1, x2) = a.inv().basis();
    let g = gamma1(k.base(), &BigInt::one(), &inp.p[16..23]);
    let (y1, y2) = g.apply_cm(&x1, &x2);
    let q1 = phi_inverse_from_basis(&a, &x1, &x2, &n).map_err(err)?;
    let q2 = phi_inverse_from_basis(&a, &y1, &y2, &n).map_err(err)?;
    prop_assert!(q2.membership(&k, &n));
    prop_assert!(equivalent(&k, &q1, &q2, &n, DEFAULT_BUDGET).map_err(err)?);
    Ok(())
}

/// Properties making up the exact-identity suite, by name.
pub fn identity_suite() -> Vec<(&'static str, Prop)> {
    vec![
        ("fractional norm a·𝔞·𝔞̄ = O_K", fractional_norm),
        ("root transport ω_Q = γ(ω_{Q^γ})", action_zero),
        ("unit discriminant scaling, both directions", unit_discriminant),
        ("equivalence iff ray-class equality", equivalence_ray_class),
        ("lift_sl2 determinant and congruence", lift_congruence),
        ("decompose_a congruence", decompose_congruence),
        ("setup determinant totally positive and coprime", setup_determinant),
        ("reflex norm preserves ≡* 1", reflex_norm_congruence),
        ("regular representation multiplicative", regular_rep_multiplicative),
    ]
}

/// Runs a property on `cases` accepted inputs from a fixed seed.
pub fn run(prop: Prop, cases: u32, seed: u64) -> Result<u32, String> {
    let config = Config { cases, max_global_rejects: 20 * cases, failure_persistence: None, ..Config::default() };
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let rng = proptest::test_runner::TestRng::from_seed(proptest::test_runner::RngAlgorithm::ChaCha, &bytes);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner.run(&input(), |i| prop(&i)).map(|_| cases).map_err(|e| e.to_string())
}
