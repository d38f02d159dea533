#![allow(dead_code)]

pub mod gauss;
pub mod props;

use cmforms::class_groups::phi_inverse;
use cmforms::cm_field::{CMElem, CMField};
use cmforms::forms::{gamma1_from_params, QuadForm};
use cmforms::ideals::{integral_ideals_up_to, FracIdeal, DEFAULT_BUDGET};
use cmforms::matrix::Mat2;
use cmforms::number_ring::{BaseField, RingElem};
use cmforms::catalog;
use num_bigint::BigInt;

pub fn fields() -> Vec<CMField> {
    catalog::names().into_iter().map(|n| catalog::builtin(n).unwrap()).collect()
}

/// Element of `O_F` from two small integers (the second is dropped over `Q`).
pub fn base_elem(f: BaseField, x: i64, y: i64) -> RingElem {
    if f.degree() == 2 {
        f.elem(x, y)
    } else {
        f.int(x + 2 * y)
    }
}

/// `x + y·ω` with `x, y ∈ O_F` taken from four integers.
pub fn cm_elem(k: &CMField, p: &[i64]) -> CMElem {
    let f = k.base();
    k.elem(base_elem(f, p[0], p[1]), base_elem(f, p[2], p[3]))
}

/// The ideal `(α, β)` for `α, β` from eight integers, optionally inverted.
pub fn ideal_from_params(k: &CMField, p: &[i64], invert: bool) -> Option<FracIdeal> {
    let w = k.omega();
    let a = cm_elem(k, &p[0..4]);
    let b = cm_elem(k, &p[4..8]);
    if a.is_zero() && b.is_zero() {
        return None;
    }
    let i = FracIdeal::from_generators(k, &[a.clone(), &a * &w, b.clone(), &b * &w]).ok()?;
    Some(if invert { i.inv() } else { i })
}

pub fn coprime_ideal(k: &CMField, n: &BigInt, p: &[i64], invert: bool) -> Option<FracIdeal> {
    ideal_from_params(k, p, invert).filter(|i| i.is_coprime_to(n))
}

/// A unit of `O_F` positive at the identity embedding: `±ε^e`.
pub fn positive_unit(f: BaseField, e: i64) -> RingElem {
    let u = match f.fundamental_unit() {
        Some(eps) => eps.powi(e).unwrap(),
        None => f.one(),
    };
    if u.sign_at(0) == std::cmp::Ordering::Less {
        -u
    } else {
        u
    }
}

/// Element of `Γ_{F,1}(N)` mixing elementary matrices with unit diagonals.
pub fn gamma1(f: BaseField, n: &BigInt, p: &[i64]) -> Mat2 {
    let g = gamma1_from_params(f, n, [p[0], p[1], p[2], p[3]]);
    let d1 = Mat2::diag(positive_unit(f, p[4] % 3), f.one());
    let d2 = Mat2::diag(f.one(), positive_unit(f, p[5] % 3));
    let flip = if p[6] % 2 == 0 { Mat2::identity(f) } else { Mat2::diag(-f.one(), -f.one()) };
    &(&(&d1 * &g) * &d2) * &flip
}

/// A form in `𝒬_F(N, d_K)` from the class of an ideal, moved by some `γ ∈ Γ_{F,1}(N)`.
pub fn random_form(k: &CMField, n: &BigInt, p: &[i64]) -> Option<QuadForm> {
    let c = coprime_ideal(k, n, &p[0..8], p[8] % 2 == 0)?;
    let q = phi_inverse(&c, n).ok()?;
    q.act(&gamma1(k.base(), n, &p[9..16])).ok()
}

/// Ray class representatives by exhaustive pairwise comparison of all
/// integral ideals prime to `N` up to `bound`.
pub fn brute_ray_classes(k: &CMField, n: u64, bound: u64) -> Vec<FracIdeal> {
    let nb = BigInt::from(n);
    let mut reps: Vec<FracIdeal> = Vec::new();
    for i in integral_ideals_up_to(k, bound) {
        if !i.is_coprime_to(&nb) {
            continue;
        }
        let mut new = true;
        for r in &reps {
            if i.same_ray_class(r, &nb, DEFAULT_BUDGET).unwrap() {
                new = false;
                break;
            }
        }
        if new {
            reps.push(i);
        }
    }
    reps
}
