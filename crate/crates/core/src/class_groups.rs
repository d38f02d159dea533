//! Ray class groups `C(N·O_K)`, form class groups `𝒞_F(N, d_K)` and the
//! bijection `φ_{K,N}: [Q] ↦ [[ω_Q, 1]_F]` with its constructive inverse.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::cm_field::{coords_in_basis, CMElem, CMField};
use crate::error::{Error, Result};
use crate::forms::{equivalent, form_from_point, reduce_in_orbit, QuadForm};
use crate::ideals::{class_number, integral_ideals_up_to, unit_image_size, units_mod_count, FracIdeal};
use crate::matrix::Mat2;
use crate::number_ring::{bezout, congruent_mod, div_rem, gcd_many, inverse_mod, RingElem};

/// Ceiling on ideals examined when computing `h_K` below the Minkowski bound.
pub const CLASS_NUMBER_IDEALS: usize = 20_000;

/// A finite group given by its multiplication table on indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupTable<T> {
    pub elements: Vec<T>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl<T> GroupTable<T> {
    /// Builds the table, deriving the identity and inverses from `table`.
    pub fn new(elements: Vec<T>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&k| k >= n)) {
            return Err(Error::Invariant("malformed multiplication table".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Invariant("no identity element".into()))?;
        let inverse = (0..n)
            .map(|x| (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invariant("missing inverse".into()))?;
        Ok(GroupTable { elements, table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    /// Associativity, identity, inverses and commutativity, exhaustively.
    pub fn check_axioms(&self) -> bool {
        let n = self.order();
        let t = &self.table;
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])));
        let ident = (0..n).all(|x| t[self.identity][x] == x && t[x][self.identity] == x);
        let inv = (0..n).all(|x| t[x][self.inverse[x]] == self.identity);
        let comm = (0..n).all(|a| (0..n).all(|b| t[a][b] == t[b][a]));
        assoc && ident && inv && comm
    }

    /// Order of element `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.table[x][i];
            k += 1;
        }
        k
    }
}

/// `|C(N·O_K)| = h_K·|(O_K/N)^×| / |image of O_K^×|`, without listing classes.
pub fn ray_class_number(field: &CMField, n: u64, budget: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let h = class_number(field, CLASS_NUMBER_IDEALS, budget)?;
    let phi = units_mod_count(field, n);
    let units = unit_image_size(field, n);
    if !(h * phi).is_multiple_of(units) {
        return Err(Error::Invariant(format!("{h}·{phi} not divisible by {units}")));
    }
    Ok(h * phi / units)
}

/// An enumerated and certified ray class group.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    pub field: CMField,
    pub modulus: BigInt,
    pub group: GroupTable<FracIdeal>,
    pub budget: u64,
}

/// Outcome of brute-force enumeration.
#[derive(Clone, Debug)]
pub enum Enumeration {
    Complete(RayClassGroup),
    Incomplete { classes: Vec<FracIdeal>, expected: u64 },
}

/// Representatives of `C(N·O_K)` among integral ideals prime to `N`, by
/// absolute norm up to `norm_bound`. The first ideal met in each class is
/// its representative. The enumeration stops once `ray_class_number`
/// classes are found; the table is then built and closure-checked.
pub fn enumerate_ray_classes(field: &CMField, n: u64, norm_bound: u64, budget: u64) -> Result<Enumeration> {
    let expected = ray_class_number(field, n, budget)?;
    let nb = BigInt::from(n);
    let mut reps: Vec<FracIdeal> = Vec::new();
    'outer: for ideal in integral_ideals_up_to(field, norm_bound) {
        if reps.len() as u64 == expected {
            break;
        }
        if !ideal.is_coprime_to(&nb) {
            continue;
        }
        for r in &reps {
            if ideal.same_ray_class(r, &nb, budget)? {
                continue 'outer;
            }
        }
        reps.push(ideal);
    }
    if (reps.len() as u64) < expected {
        return Ok(Enumeration::Incomplete { classes: reps, expected });
    }
    let k = reps.len();
    let mut table = vec![vec![0; k]; k];
    for i in 0..k {
        for j in i..k {
            let p = reps[i].mul(&reps[j]);
            let idx = locate(&reps, &p, &nb, budget)?
                .ok_or_else(|| Error::Invariant(format!("product {p:?} is in no enumerated class")))?;
            table[i][j] = idx;
            table[j][i] = idx;
        }
    }
    let group = GroupTable::new(reps, table)?;
    Ok(Enumeration::Complete(RayClassGroup { field: field.clone(), modulus: nb, group, budget }))
}

fn locate(reps: &[FracIdeal], ideal: &FracIdeal, n: &BigInt, budget: u64) -> Result<Option<usize>> {
    for (i, r) in reps.iter().enumerate() {
        if ideal.same_ray_class(r, n, budget)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

impl RayClassGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn reps(&self) -> &[FracIdeal] {
        &self.group.elements
    }

    /// Index of the class of a fractional ideal prime to `N`.
    pub fn classify(&self, ideal: &FracIdeal) -> Result<usize> {
        if !ideal.is_coprime_to(&self.modulus) {
            return Err(Error::NotCoprime(format!("{ideal:?} and N = {}", self.modulus)));
        }
        locate(self.reps(), ideal, &self.modulus, self.budget)?
            .ok_or_else(|| Error::Invariant(format!("{ideal:?} is in no enumerated class")))
    }
}

/// `φ_{K,N}`: the ideal `[ω_Q, 1]_F` representing the image class.
pub fn phi(field: &CMField, q: &QuadForm) -> Result<FracIdeal> {
    q.ideal(field)
}

/// An integral ideal in the ray class of `c` (which must be prime to `N`).
pub fn integral_representative(c: &FracIdeal, n: &BigInt) -> Result<FracIdeal> {
    if !c.is_coprime_to(n) {
        return Err(Error::NotCoprime(format!("{c:?} and N = {n}")));
    }
    let (i, j) = c.split();
    if j.is_unit() {
        return Ok(i);
    }
    // J⁻¹ = J̄/t with t = N(J); multiply by s ≡ t⁻¹ so that s·t ≡ 1
    let s = unit_inverse_mod(&j.norm_rel(), n)?;
    let field = c.field();
    i.mul(&j.conj()).scale(&field.from_base(s))
}

/// Some nonzero `s ∈ O_F` with `s·t ≡ 1 (mod N)`.
fn unit_inverse_mod(t: &RingElem, n: &BigInt) -> Result<RingElem> {
    let s = inverse_mod(t, n).ok_or_else(|| Error::NotCoprime(format!("{t} is not invertible mod {n}")))?;
    Ok(if s.is_zero() { t.field().one() } else { s })
}

/// Multiplies `ξ₁` by a unit so that `ξ₁/ξ₂ ∈ ℍ` at every embedding.
pub(crate) fn orient_basis(xi1: &CMElem, xi2: &CMElem) -> Result<CMElem> {
    let xi = xi1.checked_div(xi2)?;
    if xi.in_base() {
        return Err(Error::DegenerateBasis("ξ₁/ξ₂ lies in F".into()));
    }
    let want: Vec<bool> = (0..xi.field().g()).map(|i| xi.im_sign(i) == Ordering::Less).collect();
    let f = xi.field().base();
    let mut candidates = vec![f.one(), f.int(-1)];
    if let Some(eps) = f.fundamental_unit() {
        candidates.push(eps.clone());
        candidates.push(-&eps);
    }
    let unit = candidates
        .into_iter()
        .find(|u| (0..want.len()).all(|i| (u.sign_at(i) == Ordering::Less) == want[i]))
        .ok_or_else(|| Error::NotImplementable("no unit of the required signs".into()))?;
    Ok(xi1.scale(&unit))
}

/// The constructive inverse of `φ_{K,N}` on the class of `c`.
///
/// Takes an integral `𝔞 ∈ C⁻¹`, the Hermite basis of `𝔞⁻¹` oriented so
/// that `ξ = ξ₁/ξ₂ ∈ ℍ`, and returns the totally positive form with
/// `ω_Q = γ(ξ)` for a lifted `γ ∈ SL₂(O_F)`.
pub fn phi_inverse(c: &FracIdeal, n: &BigInt) -> Result<QuadForm> {
    let ci = integral_representative(c, n)?;
    let s = unit_inverse_mod(&ci.norm_rel(), n)?;
    let a = ci.conj().scale(&ci.field().from_base(s))?;
    let (xi1, xi2) = a.inv().basis();
    phi_inverse_from_basis(&a, &xi1, &xi2, n)
}

/// [`phi_inverse`] for a caller-chosen integral `𝔞` prime to `N` and any
/// `O_F`-basis `[ξ₁, ξ₂]_F = 𝔞⁻¹`. Returns the form for the class of `𝔞⁻¹`.
pub fn phi_inverse_from_basis(a: &FracIdeal, xi1: &CMElem, xi2: &CMElem, n: &BigInt) -> Result<QuadForm> {
    let field = a.field().clone();
    let f = field.base();
    if !a.is_integral() || !a.is_coprime_to(n) {
        return Err(Error::Domain(format!("𝔞 = {a:?} must be integral and prime to {n}")));
    }
    if FracIdeal::reduce(xi1, xi2)? != a.inv() {
        return Err(Error::Domain("[ξ₁, ξ₂]_F is not 𝔞⁻¹".into()));
    }
    let xi1 = orient_basis(xi1, xi2)?;
    let xi = xi1.checked_div(xi2)?;

    // 1 = u·ξ₁ + v·ξ₂
    let (u, v) = coords_in_basis(&field.one(), &xi1, xi2)?;
    if !u.is_integral() || !v.is_integral() {
        return Err(Error::Invariant(format!("1 = uξ₁ + vξ₂ with u = {u}, v = {v} not integral")));
    }
    let nn = f.integer(n);
    if !gcd_many(&[nn.clone(), u.clone(), v.clone()])?.is_one() {
        return Err(Error::Invariant(format!("gcd(N, {u}, {v}) ≠ 1")));
    }
    let (e, u1, v1) = bezout(&u, &v)?;
    let (g, _n1, e1) = bezout(&nn, &e)?;
    if !g.is_one() {
        return Err(Error::Invariant(format!("gcd(N, e) = {g}")));
    }
    let m = Mat2::new(&v1 * &e1, -&(&u1 * &e1), u, v);
    let gamma = lift_sl2(&m, n)?;
    let z = xi.mobius(&gamma)?;
    let q = form_from_point(&field, &z, n)?;
    Ok(reduce_in_orbit(&q.totally_positive_rep(), n).0)
}

/// The transported group law: `φ⁻¹(φ(Q₁)·φ(Q₂))`.
pub fn compose(field: &CMField, q1: &QuadForm, q2: &QuadForm, n: &BigInt) -> Result<QuadForm> {
    phi_inverse(&phi(field, q1)?.mul(&phi(field, q2)?), n)
}

/// Inverse class, from the inverse ideal.
pub fn inverse_form(field: &CMField, q: &QuadForm, n: &BigInt) -> Result<QuadForm> {
    phi_inverse(&phi(field, q)?.inv(), n)
}

/// A matrix in `SL₂(O_F)` congruent to `m` modulo `N·O_F`.
///
/// Euclid on the first column gives `U·m = [[p, x], [0, y]]` with
/// `det U = 1`; then `[[p, x + Nt], [N, y + Nr]]` has determinant one for
/// suitable `t, r`, and `U⁻¹` times it is the lift.
pub fn lift_sl2(m: &Mat2, n: &BigInt) -> Result<Mat2> {
    let f = m.field();
    if !m.is_integral() {
        return Err(Error::Domain("matrix entries must lie in O_F".into()));
    }
    if !congruent_mod(&m.det(), &f.one(), n) {
        return Err(Error::Domain(format!("det = {} is not ≡ 1 mod {n}", m.det())));
    }
    if m.det().is_one() {
        return Ok(m.clone());
    }
    if n.is_one() {
        return Ok(Mat2::identity(f));
    }
    let r = m.reduce_mod(n);
    if r.det().is_one() {
        return Ok(r);
    }
    let mut u = Mat2::identity(f);
    let mut col = (r.a.clone(), r.c.clone());
    while !col.1.is_zero() {
        let (q, rem) = div_rem(&col.0, &col.1)?;
        let step = Mat2::new(f.zero(), f.one(), f.int(-1), q);
        u = &step * &u;
        col = (col.1, -&rem);
    }
    let um = &u * &r;
    let (p, x, y) = (um.a.clone(), um.b.clone(), um.d.clone());
    let nn = f.integer(n);
    let h = (&(&p * &y) - &f.one()).checked_div(&nn)?;
    if !h.is_integral() {
        return Err(Error::Invariant("p·y ≢ 1 mod N".into()));
    }
    let (g, bu, bv) = bezout(&nn, &p)?;
    if !g.is_one() {
        return Err(Error::Invariant(format!("gcd(N, p) = {g}")));
    }
    let k = &x - &h;
    let t = -&(&bu * &k);
    let rr = &bv * &k;
    let l0 = Mat2::new(p, &x + &(&nn * &t), nn.clone(), &y + &(&nn * &rr));
    let lift = &u.adj() * &l0;
    debug_assert!(lift.det().is_one() && lift.congruent_mod(m, n));
    Ok(lift)
}

/// `A ≡ diag(1, d)·A₁ (mod N)` with `d = det A` and `A₁ ∈ SL₂(O_F)`.
pub fn decompose_a(a: &Mat2, n: &BigInt) -> Result<(RingElem, Mat2)> {
    let d = a.det();
    if d.is_zero() || !d.is_totally_positive() {
        return Err(Error::Domain(format!("det A = {d} is not totally positive")));
    }
    let dinv = inverse_mod(&d, n).ok_or_else(|| Error::Domain(format!("gcd(det A, {n}) ≠ 1")))?;
    let f = a.field();
    let scaled = (&Mat2::diag(f.one(), dinv) * a).reduce_mod(n);
    let a1 = lift_sl2(&scaled, n)?;
    Ok((d, a1))
}

/// Outcome of checking `φ_{K,N}` against the enumerated ray class group.
#[derive(Clone, Debug)]
pub struct IsomorphismReport {
    pub ray: RayClassGroup,
    pub forms: GroupTable<QuadForm>,
    /// `bijection[i]`: the ray class index of `φ(forms[i])`.
    pub bijection: Vec<usize>,
    pub expected_order: u64,
    pub bijective: bool,
    pub homomorphism: bool,
    pub cardinality: bool,
    pub axioms: bool,
    pub forms_valid: bool,
}

impl IsomorphismReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.homomorphism && self.cardinality && self.axioms && self.forms_valid
    }
}

/// Enumerates both sides of `φ_{K,N}` and checks it is a group isomorphism.
pub fn verify_isomorphism(field: &CMField, n: u64, norm_bound: u64, budget: u64) -> Result<IsomorphismReport> {
    let expected = ray_class_number(field, n, budget)?;
    let ray = match enumerate_ray_classes(field, n, norm_bound, budget)? {
        Enumeration::Complete(r) => r,
        Enumeration::Incomplete { classes, expected } => {
            return Err(Error::Incomplete { found: classes.len(), expected: expected as usize })
        }
    };
    let nb = ray.modulus.clone();
    let k = ray.order();
    let forms: Vec<QuadForm> = ray.reps().iter().map(|c| phi_inverse(c, &nb)).collect::<Result<_>>()?;
    let forms_valid = forms.iter().all(|q| q.membership(field, &nb) && q.is_totally_positive());

    let bijection: Vec<usize> = forms.iter().map(|q| ray.classify(&phi(field, q)?)).collect::<Result<_>>()?;
    let mut seen = bijection.clone();
    seen.sort_unstable();
    seen.dedup();
    let mut bijective = seen.len() == k && bijection.iter().enumerate().all(|(i, &j)| i == j);
    for i in 0..k {
        for j in i + 1..k {
            if equivalent(field, &forms[i], &forms[j], &nb, budget)? {
                bijective = false;
            }
        }
    }

    // transported law on forms, located among the form representatives
    let mut table = vec![vec![0; k]; k];
    let mut homomorphism = true;
    for i in 0..k {
        for j in 0..k {
            let q = compose(field, &forms[i], &forms[j], &nb)?;
            let mut idx = None;
            for (t, r) in forms.iter().enumerate() {
                if equivalent(field, &q, r, &nb, budget)? {
                    idx = Some(t);
                    break;
                }
            }
            let idx = idx.ok_or_else(|| Error::Invariant(format!("{q:?} matches no form class")))?;
            table[i][j] = idx;
            let image = ray.classify(&phi(field, &q)?)?;
            if image != ray.group.mul(bijection[i], bijection[j]) || bijection[idx] != image {
                homomorphism = false;
            }
        }
    }
    let forms = GroupTable::new(forms, table)?;
    let axioms = forms.check_axioms() && ray.group.check_axioms();
    Ok(IsomorphismReport {
        cardinality: k as u64 == expected,
        expected_order: expected,
        ray,
        forms,
        bijection,
        bijective,
        homomorphism,
        axioms,
        forms_valid,
    })
}

/// Default norm bound used when none is given: enough for desk-scale cases.
pub fn default_norm_bound(field: &CMField, n: u64) -> u64 {
    let base = field.abs_discriminant().to_u64().unwrap_or(u64::MAX).min(1 << 20);
    (4 * n * n + base).clamp(50, 5000)
}
