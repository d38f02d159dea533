//! Fractional ideals of `O_K` as `O_F`-modules `[ξ₁, ξ₂]_F`.
//!
//! Every ideal is stored as `(1/D)·M` where `D` is the least positive
//! integer making the ideal integral and `M = O_F(aω + b) + O_F·c` is in
//! Hermite form: `a`, `c` canonical associates and `b` the centered residue
//! modulo `c`. Two ideals are equal iff their stored data are equal.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cm_field::{integral_z_basis, z_coords, CMElem, CMField};
use crate::error::{Error, Result};
use crate::lattice::{combine, hnf2, short_vectors, trace_form, trace_gram, Visit};
use crate::number_ring::{
    canonical_associate, congruent_mod, div_round, gcd_many, round_rational, BaseField, RingElem,
};

/// Default node budget for principality searches.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    field: CMField,
    den: BigInt,
    a: RingElem,
    b: RingElem,
    c: RingElem,
}

/// `b - c·round(b/c)`: the canonical representative of `b` modulo `c`.
pub fn center_mod(b: &RingElem, c: &RingElem) -> RingElem {
    match div_round(b, c) {
        Ok(q) => b - &(&q * c),
        Err(_) => b.clone(),
    }
}

/// Hermite form `(a, b, c)` of the `O_F`-module spanned by rows
/// `(ω-coefficient, 1-coefficient)`, all integral.
fn hnf(field: BaseField, mut rows: Vec<(RingElem, RingElem)>) -> Result<(RingElem, RingElem, RingElem)> {
    loop {
        let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].0.is_zero()).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by(|&&i, &&j| rows[i].0.abs_norm().cmp(&rows[j].0.abs_norm())).unwrap();
        let (p0, p1) = rows[piv].clone();
        for &j in &nz {
            if j != piv {
                let q = div_round(&rows[j].0, &p0)?;
                rows[j].0 = &rows[j].0 - &(&q * &p0);
                rows[j].1 = &rows[j].1 - &(&q * &p1);
            }
        }
    }
    let piv = rows
        .iter()
        .position(|r| !r.0.is_zero())
        .ok_or_else(|| Error::DegenerateBasis("generators lie in F".into()))?;
    let (y, x) = rows.remove(piv);
    let rest: Vec<RingElem> = rows.into_iter().map(|r| r.1).filter(|x| !x.is_zero()).collect();
    if rest.is_empty() {
        return Err(Error::DegenerateBasis("generators span a rank-one module".into()));
    }
    let c = gcd_many(&rest)?;
    let (a, w) = canonical_associate(&y)?;
    let b = center_mod(&(&w * &x), &c);
    let _ = field;
    Ok((a, b, c))
}

/// Is the integral vector `v` in `O_F(aω + b) + O_F·c`?
fn hnf_contains(a: &RingElem, b: &RingElem, c: &RingElem, v: &CMElem) -> bool {
    let Some(s) = v.y().div_exact(a) else {
        return false;
    };
    let r = v.x() - &(&s * b);
    r.div_exact(c).is_some() || r.is_zero()
}

impl FracIdeal {
    /// The fractional ideal spanned over `O_F` by `gens`; errors unless the
    /// span is a rank-two `O_K`-module.
    pub fn from_generators(field: &CMField, gens: &[CMElem]) -> Result<Self> {
        let nonzero: Vec<&CMElem> = gens.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::DegenerateBasis("no nonzero generators".into()));
        }
        let d0 = nonzero.iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.denominator()));
        let d0r = BigRational::from_integer(d0.clone());
        let rows = nonzero
            .iter()
            .map(|g| {
                let h = g.scale_q(&d0r);
                (h.y().clone(), h.x().clone())
            })
            .collect();
        let (a, b, c) = hnf(field.base(), rows)?;
        // closure under ω: ω(aω + b) = (b - a·b_K)ω - a·c_K
        let w1 = field.elem(-&(&a * field.c()), &b - &(&a * field.b()));
        let w2 = field.elem(field.base().zero(), c.clone());
        if !hnf_contains(&a, &b, &c, &w1) || !hnf_contains(&a, &b, &c, &w2) {
            return Err(Error::NotAnIdeal("module is not closed under multiplication by ω".into()));
        }
        let mut content = d0.clone();
        for e in [&a, &b, &c] {
            let (x, y) = e.int_coords();
            content = content.gcd(&x).gcd(&y);
        }
        let t = BigRational::from_integer(content.clone()).recip();
        let (a, b, c) = (a.scale(&t), b.scale(&t), c.scale(&t));
        Ok(FracIdeal { field: field.clone(), den: d0 / content, a, b, c })
    }

    /// Canonical form of the module `[ξ₁, ξ₂]_F`.
    pub fn reduce(xi1: &CMElem, xi2: &CMElem) -> Result<Self> {
        FracIdeal::from_generators(xi1.field(), &[xi1.clone(), xi2.clone()])
    }

    pub fn unit(field: &CMField) -> Self {
        let f = field.base();
        FracIdeal { field: field.clone(), den: BigInt::one(), a: f.one(), b: f.zero(), c: f.one() }
    }

    /// `ν·O_K`.
    pub fn principal(nu: &CMElem) -> Result<Self> {
        let field = nu.field();
        FracIdeal::from_generators(field, &[nu.clone(), nu * &field.omega()])
    }

    pub fn field(&self) -> &CMField {
        &self.field
    }

    /// Denominator `D`.
    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Hermite data `(a, b, c)` of the integral module `D·A`.
    pub fn hnf(&self) -> (&RingElem, &RingElem, &RingElem) {
        (&self.a, &self.b, &self.c)
    }

    /// Builds an ideal from stored data, re-validating it.
    pub fn from_hnf(field: &CMField, den: &BigInt, a: RingElem, b: RingElem, c: RingElem) -> Result<Self> {
        if !den.is_positive() {
            return Err(Error::Domain("denominator must be positive".into()));
        }
        let inv = BigRational::new(BigInt::one(), den.clone());
        let xi1 = field.elem(b, a).scale_q(&inv);
        let xi2 = field.from_base(c).scale_q(&inv);
        FracIdeal::reduce(&xi1, &xi2)
    }

    /// The `O_F`-basis `(ξ₁, ξ₂) = ((aω + b)/D, c/D)`.
    pub fn basis(&self) -> (CMElem, CMElem) {
        let inv = BigRational::new(BigInt::one(), self.den.clone());
        (
            self.field.elem(self.b.clone(), self.a.clone()).scale_q(&inv),
            self.field.from_base(self.c.clone()).scale_q(&inv),
        )
    }

    /// The integral module `D·A` as an ideal.
    pub fn numerator_module(&self) -> FracIdeal {
        FracIdeal { den: BigInt::one(), ..self.clone() }
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.a.is_one() && self.c.is_one()
    }

    pub fn contains(&self, z: &CMElem) -> bool {
        let w = z.scale_q(&BigRational::from_integer(self.den.clone()));
        w.is_integral() && hnf_contains(&self.a, &self.b, &self.c, &w)
    }

    /// True iff `self ⊆ other`.
    pub fn is_subset_of(&self, other: &FracIdeal) -> bool {
        let (x, y) = self.basis();
        other.contains(&x) && other.contains(&y)
    }

    pub fn mul(&self, other: &FracIdeal) -> FracIdeal {
        let (x1, x2) = self.basis();
        let (y1, y2) = other.basis();
        FracIdeal::from_generators(&self.field, &[&x1 * &y1, &x1 * &y2, &x2 * &y1, &x2 * &y2])
            .expect("product of ideals is an ideal")
    }

    pub fn add(&self, other: &FracIdeal) -> FracIdeal {
        let (x1, x2) = self.basis();
        let (y1, y2) = other.basis();
        FracIdeal::from_generators(&self.field, &[x1, x2, y1, y2]).expect("sum of ideals is an ideal")
    }

    pub fn scale(&self, nu: &CMElem) -> Result<FracIdeal> {
        if nu.is_zero() {
            return Err(Error::Domain("scaling an ideal by zero".into()));
        }
        let (x1, x2) = self.basis();
        FracIdeal::from_generators(&self.field, &[nu * &x1, nu * &x2])
    }

    pub fn pow(&self, e: u64) -> FracIdeal {
        let mut acc = FracIdeal::unit(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Complex conjugate ideal `Ā`.
    pub fn conj(&self) -> FracIdeal {
        let (x1, x2) = self.basis();
        FracIdeal::from_generators(&self.field, &[x1.conj(), x2.conj()]).expect("conjugate of an ideal is an ideal")
    }

    /// `A⁻¹ = Ā / N_{K/F}(A)`, using `M·M̄ = (ac)·O_K` for the integral part.
    pub fn inv(&self) -> FracIdeal {
        let n = &self.a * &self.c;
        let s = BigRational::from_integer(self.den.clone());
        let scale = n.inv().expect("nonzero norm").scale(&s);
        let m = self.numerator_module().conj();
        let (x1, x2) = m.basis();
        FracIdeal::from_generators(&self.field, &[x1.scale(&scale), x2.scale(&scale)]).expect("inverse is an ideal")
    }

    pub fn div(&self, other: &FracIdeal) -> FracIdeal {
        self.mul(&other.inv())
    }

    /// Relative norm `N_{K/F}(A)` as the canonical generator of the `O_F`-ideal.
    pub fn norm_rel(&self) -> RingElem {
        let d2 = BigRational::from_integer(&self.den * &self.den);
        let n = (&self.a * &self.c).scale(&d2.recip());
        canonical_associate(&n).expect("nonzero norm").0
    }

    /// Absolute norm `N_{K/Q}(A)`.
    pub fn abs_norm(&self) -> BigRational {
        let num = (&self.a * &self.c).abs_norm();
        let d = BigRational::from_integer(self.den.clone());
        let mut den = BigRational::one();
        for _ in 0..2 * self.field.g() {
            den *= &d;
        }
        num / den
    }

    /// Absolute norm of an integral ideal as an integer.
    pub fn abs_norm_int(&self) -> BigInt {
        self.abs_norm().to_integer()
    }

    /// `(I, J)` integral and coprime with `A = I·J⁻¹`.
    pub fn split(&self) -> (FracIdeal, FracIdeal) {
        if self.is_integral() {
            return (self.clone(), FracIdeal::unit(&self.field));
        }
        let j = self.add(&FracIdeal::unit(&self.field)).inv();
        (self.mul(&j), j)
    }

    /// Membership in `I_K(N·O_K)`: numerator and denominator coprime to `N`.
    pub fn is_coprime_to(&self, n: &BigInt) -> bool {
        let (i, j) = self.split();
        i.abs_norm_int().gcd(n).is_one() && j.abs_norm_int().gcd(n).is_one()
    }

    /// Some `α` with `A = α·O_K`, or `None` if `A` is not principal.
    pub fn principal_generator(&self, budget: u64) -> Result<Option<CMElem>> {
        let m = self.numerator_module();
        let target = canonical_associate(&(&self.a * &self.c))?.0;
        let (e1, e2) = m.basis();
        let f = self.field.base();
        let basis: Vec<CMElem> = if f.degree() == 1 {
            vec![e1, e2]
        } else {
            let th = self.field.from_base(f.theta());
            vec![e1.clone(), &th * &e1, e2.clone(), &th * &e2]
        };
        let gram = trace_gram(&basis);
        let bound = target.trace();
        let mut found = None;
        short_vectors(&gram, &bound, budget, |v| {
            let z = combine(&basis, v);
            if !z.is_zero() && trace_form(&z) == bound && z.norm_rel() == target {
                found = Some(z);
                Visit::Stop
            } else {
                Visit::Continue
            }
        })?;
        let inv_den = BigRational::new(BigInt::one(), self.den.clone());
        Ok(found.map(|z| z.scale_q(&inv_den)))
    }

    /// A generator `ν ≡* 1 (mod N·O_K)` of `A`, if one exists.
    ///
    /// `Ok(None)` means `A` is provably not in `P_{K,1}(N·O_K)`; an exhausted
    /// budget is reported as [`Error::Inconclusive`].
    pub fn principal_generator_mod(&self, n: &BigInt, budget: u64) -> Result<Option<CMElem>> {
        if !self.is_coprime_to(n) {
            return Err(Error::NotCoprime(format!("{self:?} and N = {n}")));
        }
        let Some(alpha) = self.principal_generator(budget)? else {
            return Ok(None);
        };
        for u in unit_reps_mod(&self.field, n) {
            let nu = &u * &alpha;
            if mult_congruent_one(&nu, n)? {
                return Ok(Some(nu));
            }
        }
        Ok(None)
    }

    /// `[A] = [B]` in `C(N·O_K)`.
    pub fn same_ray_class(&self, other: &FracIdeal, n: &BigInt, budget: u64) -> Result<bool> {
        Ok(self.div(other).principal_generator_mod(n, budget)?.is_some())
    }

    /// Sort key: absolute norm, then Hermite data.
    fn order_key(&self) -> (BigRational, &BigInt, &RingElem, &RingElem, &RingElem) {
        (self.abs_norm(), &self.den, &self.a, &self.c, &self.b)
    }
}

impl PartialOrd for FracIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FracIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Debug for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "[({})ω+({}), {}]", self.a, self.b, self.c)
        } else {
            write!(f, "1/{}·[({})ω+({}), {}]", self.den, self.a, self.b, self.c)
        }
    }
}

/// Units of `O_K` modulo `N`: `ζ·εᵏ` for roots of unity `ζ` and
/// `0 ≤ k < ord(ε mod N)`. This covers `O_K^× = μ_K × O_F^×` modulo `N`.
pub fn unit_reps_mod(field: &CMField, n: &BigInt) -> Vec<CMElem> {
    let roots = field.roots_of_unity();
    let f = field.base();
    let Some(eps) = f.fundamental_unit() else {
        return roots;
    };
    let one = f.one();
    let mut powers = vec![one.clone()];
    let mut e = eps.clone();
    while !congruent_mod(&e, &one, n) {
        powers.push(e.clone());
        e = &e * &eps;
    }
    let mut out = Vec::with_capacity(roots.len() * powers.len());
    for z in &roots {
        for p in &powers {
            out.push(z.scale(p));
        }
    }
    out
}

/// `ν ≡* 1 (mod N·O_K)`. Writes `ν = α/D` with `D` the coordinate
/// denominator (necessarily prime to `N`) and tests `α ≡ D (mod N)`.
pub fn mult_congruent_one(nu: &CMElem, n: &BigInt) -> Result<bool> {
    if nu.is_zero() {
        return Err(Error::Domain("ν = 0".into()));
    }
    let d = nu.denominator();
    let alpha = nu.scale_q(&BigRational::from_integer(d.clone()));
    if !d.gcd(n).is_one() || !alpha.abs_norm().to_integer().gcd(n).is_one() {
        return Err(Error::NotCoprime(format!("{nu:?} is not prime to {n}")));
    }
    let diff = &alpha - &nu.field().from_base(nu.field().base().integer(&d));
    let nr = BigRational::from_integer(n.clone());
    Ok(z_coords(&diff).iter().all(|x| (x / &nr).is_integer()))
}

/// Canonical associates `r ∈ O_F` with `1 ≤ |N(r)| ≤ bound`, by norm then coordinates.
pub fn canonical_elements_up_to(f: BaseField, bound: u64) -> Vec<RingElem> {
    let mut out = Vec::new();
    match f.fundamental_unit() {
        None => out.extend((1..=bound as i64).map(|k| f.int(k))),
        Some(eps) => {
            let e = eps.approx(0);
            let sb = (bound as f64).sqrt();
            let th = f.theta();
            let (t1, t2) = (th.approx(0), th.approx(1));
            let y_max = (e * e * sb / (t1 - t2)).ceil() as i64 + 1;
            for y in 0..=y_max {
                let lo = (-(y as f64) * t2).floor() as i64 - 1;
                let hi = (sb - y as f64 * t2).ceil() as i64 + 1;
                for x in lo..=hi {
                    let r = f.elem(x, y);
                    if r.is_zero() {
                        continue;
                    }
                    let n = r.abs_norm().to_integer();
                    if n > BigInt::from(bound) {
                        continue;
                    }
                    if canonical_associate(&r).map(|c| c.0 == r).unwrap_or(false) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out.sort_by(|p, q| p.abs_norm().cmp(&q.abs_norm()).then(p.cmp(q)));
    out
}

/// Canonical representatives of `O_F / c·O_F`.
pub fn residues_mod(c: &RingElem) -> Vec<RingElem> {
    let f = c.field();
    let (c0, c1) = c.int_coords();
    if f.degree() == 1 {
        let n = c0.abs().to_i64().expect("small modulus");
        return (0..n).map(|k| center_mod(&f.int(k), c)).collect();
    }
    let th = f.theta();
    let (ct0, ct1) = (c * &th).int_coords();
    let ((p, _), s) = hnf2(&[(c0, c1), (ct0, ct1)]).expect("nonzero modulus");
    let (p, s) = (p.to_i64().expect("small modulus"), s.to_i64().expect("small modulus"));
    let mut out = BTreeSet::new();
    for x in 0..p {
        for y in 0..s {
            out.insert(center_mod(&f.elem(x, y), c));
        }
    }
    out.into_iter().collect()
}

/// All integral ideals with `N_{K/Q} ≤ bound`, sorted by norm then Hermite data.
pub fn integral_ideals_up_to(field: &CMField, bound: u64) -> Vec<FracIdeal> {
    let elems = canonical_elements_up_to(field.base(), bound);
    ideals_from_diagonals(field, &elems, bound)
}

/// Integral ideals containing the rational prime power `q`.
pub fn ideals_containing(field: &CMField, q: u64) -> Vec<FracIdeal> {
    let f = field.base();
    let qf = f.int(q as i64);
    let divisors: Vec<RingElem> = canonical_elements_up_to(f, q.pow(f.degree() as u32))
        .into_iter()
        .filter(|d| qf.div_exact(d).is_some())
        .collect();
    ideals_from_diagonals(field, &divisors, u64::MAX)
}

fn ideals_from_diagonals(field: &CMField, elems: &[RingElem], bound: u64) -> Vec<FracIdeal> {
    let f = field.base();
    let mut out = Vec::new();
    for c in elems {
        let nc = c.abs_norm().to_integer().to_u64().unwrap_or(u64::MAX);
        let residues = residues_mod(c);
        for a in elems {
            let na = a.abs_norm().to_integer().to_u64().unwrap_or(u64::MAX);
            if na.saturating_mul(nc) > bound {
                break;
            }
            if c.div_exact(a).is_none() {
                continue;
            }
            for b in &residues {
                let w1 = field.elem(-&(a * field.c()), b - &(a * field.b()));
                let w2 = field.elem(f.zero(), c.clone());
                if hnf_contains(a, b, c, &w1) && hnf_contains(a, b, c, &w2) {
                    out.push(FracIdeal {
                        field: field.clone(),
                        den: BigInt::one(),
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// Prime factorization of a positive integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The factorization `N·O_K = ∏ 𝔭^{n_𝔭}`.
#[derive(Clone, Debug)]
pub struct RayModulus {
    pub n: u64,
    pub primes: Vec<(FracIdeal, u32)>,
}

impl RayModulus {
    pub fn new(field: &CMField, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be positive".into()));
        }
        let mut primes = Vec::new();
        let nk = field.int(n as i64);
        for (p, _) in factor_u64(n) {
            let pk = field.int(p as i64);
            let over_p: Vec<FracIdeal> = ideals_containing(field, p)
                .into_iter()
                .filter(|i| !i.is_unit() && i.contains(&pk))
                .collect();
            for cand in &over_p {
                let maximal = !over_p.iter().any(|o| o != cand && cand.is_subset_of(o));
                if maximal {
                    let e = valuation(cand, &nk);
                    primes.push((cand.clone(), e as u32));
                }
            }
        }
        let m = RayModulus { n, primes };
        let prod = m.primes.iter().fold(FracIdeal::unit(field), |acc, (p, e)| acc.mul(&p.pow(*e as u64)));
        if prod != FracIdeal::principal(&nk)? {
            return Err(Error::Invariant("prime factorization of N·O_K does not multiply back".into()));
        }
        Ok(m)
    }

    /// `ν ≡* 1` checked through valuations `v_𝔭(ν - 1) ≥ n_𝔭`.
    pub fn congruent_one_by_valuation(&self, nu: &CMElem) -> bool {
        let diff = nu - &nu.field().one();
        if diff.is_zero() {
            return true;
        }
        self.primes.iter().all(|(p, e)| valuation(p, &diff) >= *e as i64)
    }
}

/// `v_𝔭(z)` for nonzero `z ∈ K`.
pub fn valuation(p: &FracIdeal, z: &CMElem) -> i64 {
    let d = z.denominator();
    let alpha = z.scale_q(&BigRational::from_integer(d.clone()));
    let dk = z.field().from_base(z.field().base().integer(&d));
    integral_valuation(p, &alpha) - integral_valuation(p, &dk)
}

fn integral_valuation(p: &FracIdeal, alpha: &CMElem) -> i64 {
    let mut e = 0;
    let mut pe = p.clone();
    while pe.contains(alpha) {
        e += 1;
        pe = pe.mul(p);
    }
    e
}

/// Minkowski bound `(4/π)^g · (2g)!/(2g)^{2g} · √|d_K|`, rounded up.
pub fn minkowski_bound(field: &CMField) -> u64 {
    let n = 2 * field.g();
    let g = field.g() as i32;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let d = field.abs_discriminant().to_f64().unwrap_or(f64::INFINITY);
    let b = (4.0 / std::f64::consts::PI).powi(g) * fact / (n as f64).powi(n as i32) * d.sqrt();
    b.floor() as u64
}

/// Class number of `K` from ideals under the Minkowski bound.
pub fn class_number(field: &CMField, ideal_budget: usize, budget: u64) -> Result<u64> {
    let bound = minkowski_bound(field).max(1);
    let ideals = integral_ideals_up_to(field, bound);
    if ideals.len() > ideal_budget {
        return Err(Error::Resource(format!("{} ideals below the Minkowski bound {bound}", ideals.len())));
    }
    let one = BigInt::one();
    let mut reps: Vec<FracIdeal> = Vec::new();
    for i in ideals {
        let mut new = true;
        for r in &reps {
            if i.same_ray_class(r, &one, budget)? {
                new = false;
                break;
            }
        }
        if new {
            reps.push(i);
        }
    }
    Ok(reps.len() as u64)
}

/// `|(O_K / N·O_K)^×|` by direct count.
pub fn units_mod_count(field: &CMField, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let nb = BigInt::from(n);
    let dim = 2 * field.g();
    let basis = integral_z_basis(field);
    let mut count = 0;
    let mut v = vec![BigInt::zero(); dim];
    let total = n.pow(dim as u32);
    for idx in 0..total {
        let mut k = idx;
        for c in v.iter_mut() {
            *c = BigInt::from(k % n);
            k /= n;
        }
        let z = combine(&basis, &v);
        if z.abs_norm().to_integer().gcd(&nb).is_one() {
            count += 1;
        }
    }
    count
}

/// Size of the image of `O_K^×` in `(O_K / N·O_K)^×`.
pub fn unit_image_size(field: &CMField, n: u64) -> u64 {
    let nb = BigInt::from(n);
    let reduce = |z: &CMElem| -> Vec<BigInt> {
        z_coords(z).iter().map(|x| x.to_integer().mod_floor(&nb)).collect()
    };
    let mut gens = field.roots_of_unity();
    if let Some(eps) = field.base().fundamental_unit() {
        gens.push(field.from_base(eps));
    }
    let mut seen = BTreeSet::new();
    seen.insert(reduce(&field.one()));
    let mut frontier = vec![field.one()];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = &x * g;
            let key = reduce(&y);
            if seen.insert(key.clone()) {
                frontier.push(crate::cm_field::from_z_coords(
                    field,
                    &key.into_iter().map(BigRational::from_integer).collect::<Vec<_>>(),
                ));
            }
        }
    }
    seen.len() as u64
}

/// Centered rounding used to express rational coordinates (re-exported for tests).
pub fn round_coord(t: &BigRational) -> BigInt {
    round_rational(t)
}
