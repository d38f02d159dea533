//! CM types on finite Galois data, their reflex, and the reflex norm maps
//! `g`, `𝔤` and `𝔤_N`.
//!
//! Automorphisms compose as exponents: `a^{στ} = (a^σ)^τ`, so `table[i][j]`
//! is the element acting first as `i` then as `j`. Embeddings of the subfield
//! fixed by a subgroup `H` correspond to right cosets `Hσ`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::class_groups::RayClassGroup;
use crate::cm_field::{CMElem, CMField};
use crate::error::{Error, Result};
use crate::ideals::FracIdeal;
use crate::number_ring::{BaseField, RingElem};

/// Multiplication table of `Gal(L/Q)` with the subgroup fixing `K`, coset
/// representatives of the CM type, and complex conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisData {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(rename = "H")]
    pub h: Vec<usize>,
    #[serde(rename = "T")]
    pub t: Vec<usize>,
    pub rho: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflexData {
    pub t_star: Vec<usize>,
    pub h_star: Vec<usize>,
    pub k_star_degree: usize,
    /// One representative per embedding `ψⱼ` of `K*`.
    pub psi: Vec<usize>,
}

type Set = BTreeSet<usize>;

impl GaloisData {
    pub fn identity(&self) -> usize {
        (0..self.order).find(|&e| (0..self.order).all(|x| self.table[e][x] == x)).unwrap_or(0)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        let e = self.identity();
        (0..self.order).find(|&y| self.table[x][y] == e).unwrap_or(e)
    }

    fn left(&self, g: usize, s: &Set) -> Set {
        s.iter().map(|&x| self.mul(g, x)).collect()
    }

    /// `H·x`.
    pub fn right_coset(&self, h: &[usize], x: usize) -> Set {
        h.iter().map(|&y| self.mul(y, x)).collect()
    }

    /// `T` as the full set of σ restricting to the CM type: `∪ H·t`.
    pub fn t_full(&self) -> Set {
        self.t.iter().flat_map(|&t| self.right_coset(&self.h, t)).collect()
    }

    pub fn is_subgroup(&self, s: &[usize]) -> bool {
        let set: Set = s.iter().copied().collect();
        !set.is_empty() && set.iter().all(|&x| set.iter().all(|&y| set.contains(&self.mul(x, self.inv(y)))))
    }

    /// Group axioms, `H ≤ G`, `ρ` an involution, and the CM-type axiom:
    /// the cosets `Ht` and `Htρ` for `t ∈ T` partition `H\G`.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        let bad = |m: &str| Err(Error::NotCmType(m.into()));
        if n == 0 || self.table.len() != n || self.table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("malformed table");
        }
        if self.h.iter().chain(&self.t).chain([&self.rho]).any(|&x| x >= n) {
            return bad("index out of range");
        }
        let e = self.identity();
        let t = &self.table;
        if (0..n).any(|x| t[e][x] != x || t[x][e] != x)
            || (0..n).any(|x| (0..n).all(|y| t[x][y] != e))
            || (0..n).any(|a| (0..n).any(|b| (0..n).any(|c| t[t[a][b]][c] != t[a][t[b][c]])))
        {
            return bad("table is not a group");
        }
        if !self.is_subgroup(&self.h) {
            return bad("H is not a subgroup");
        }
        if self.rho == e || self.mul(self.rho, self.rho) != e {
            return bad("ρ is not an involution");
        }
        let index = n / self.h.len();
        if !index.is_multiple_of(2) || self.t.len() * 2 != index {
            return bad("|T| must be half of [G : H]");
        }
        let mut cosets: BTreeSet<Set> = BTreeSet::new();
        for &s in &self.t {
            cosets.insert(self.right_coset(&self.h, s));
            cosets.insert(self.right_coset(&self.h, self.mul(s, self.rho)));
        }
        if cosets.len() != index {
            return bad("T ∪ Tρ does not cover H\\G disjointly");
        }
        Ok(())
    }

    /// `{γ : γS = S}`.
    pub fn left_stabilizer(&self, s: &Set) -> Vec<usize> {
        (0..self.order).filter(|&g| &self.left(g, s) == s).collect()
    }

    /// The CM type is not induced from a smaller CM subfield.
    pub fn is_primitive(&self) -> bool {
        let stab = self.left_stabilizer(&self.t_full());
        let h: Set = self.h.iter().copied().collect();
        stab.into_iter().collect::<Set>() == h
    }
}

/// `T* = T⁻¹`, `H* = {γ : γT* = T*}`, `[K* : Q] = [G : H*]`, and the
/// embeddings `ψⱼ` as the cosets `H*σ` inside `T*`.
pub fn reflex_of(data: &GaloisData) -> Result<ReflexData> {
    data.validate()?;
    let t_star: Set = data.t_full().into_iter().map(|s| data.inv(s)).collect();
    let h_star = data.left_stabilizer(&t_star);
    let mut psi = Vec::new();
    let mut covered = Set::new();
    for &s in &t_star {
        if covered.insert(s) {
            covered.extend(data.right_coset(&h_star, s));
            psi.push(s);
        }
    }
    Ok(ReflexData {
        k_star_degree: data.order / h_star.len(),
        t_star: t_star.into_iter().collect(),
        h_star,
        psi,
    })
}

/// The reflex as a CM type on the same group, for bidual checks.
pub fn reflex_as_galois(data: &GaloisData, r: &ReflexData) -> GaloisData {
    GaloisData { order: data.order, table: data.table.clone(), h: r.h_star.clone(), t: r.psi.clone(), rho: data.rho }
}

/// The three catalogued groups: `Z/2`, `Z/4` and `Z/2 × Z/2`.
pub fn catalog() -> Vec<(&'static str, GaloisData)> {
    let cyclic = |n: usize| (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect::<Vec<Vec<usize>>>();
    // (a, b) ↦ 2a + b
    let klein = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    vec![
        ("Z/2", GaloisData { order: 2, table: cyclic(2), h: vec![0], t: vec![0], rho: 1 }),
        ("Z/4", GaloisData { order: 4, table: cyclic(4), h: vec![0], t: vec![0, 1], rho: 2 }),
        ("Z/2xZ/2", GaloisData { order: 4, table: klein, h: vec![0], t: vec![0, 2], rho: 1 }),
    ]
}

/// An automorphism of `K`: optionally conjugating `F`, then `ω ↦ image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub conj_base: bool,
    pub image: CMElem,
}

impl Automorphism {
    pub fn apply(&self, z: &CMElem) -> CMElem {
        let s = |r: &RingElem| if self.conj_base { r.conj() } else { r.clone() };
        let f = z.field();
        &f.from_base(s(z.x())) + &self.image.scale(&s(z.y()))
    }

    pub fn apply_ideal(&self, a: &FracIdeal) -> Result<FracIdeal> {
        let (x1, x2) = a.basis();
        FracIdeal::reduce(&self.apply(&x1), &self.apply(&x2))
    }
}

/// `K` Galois over `Q` with its automorphisms realised on coordinates,
/// the CM type `{φ₁ = id, φ₂}` and the induced [`GaloisData`] with `L = K`.
#[derive(Clone, Debug)]
pub struct GaloisField {
    pub field: CMField,
    pub autos: Vec<Automorphism>,
    pub data: GaloisData,
    pub reflex: ReflexData,
}

impl GaloisField {
    pub fn new(field: &CMField) -> Result<Self> {
        let f = field.base();
        let w = field.omega();
        let cc = Automorphism { conj_base: false, image: w.conj() };
        let id = Automorphism { conj_base: false, image: w.clone() };
        let (autos, t) = match f {
            BaseField::Rational => (vec![id, cc], vec![0]),
            BaseField::RealQuadratic { .. } => {
                // √σ(d) = v(b/2 + ω) with v² = 4σ(d)/d
                let d = field.d();
                let v2 = (&d.conj() * &f.int(4)).checked_div(d)?;
                let v = v2.sqrt().ok_or_else(|| Error::NotImplementable(format!("{field:?} is not Galois over Q")))?;
                let v = if v.sign_at(0) == std::cmp::Ordering::Less { -&v } else { v };
                let half_b = field.b().scale(&num_rational::BigRational::new(1.into(), 2.into()));
                let root = (&field.from_base(half_b) + &w).scale(&v);
                let image = (&root - &field.from_base(field.b().conj())).scale_q(&num_rational::BigRational::new(1.into(), 2.into()));
                if !image.is_integral() {
                    return Err(Error::Invariant("conjugate of ω is not integral".into()));
                }
                let tau = Automorphism { conj_base: true, image: image.clone() };
                let tau_c = Automorphism { conj_base: true, image: image.conj() };
                (vec![id, tau, cc, tau_c], vec![0, 1])
            }
        };
        let n = autos.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                // first i, then j
                let img = autos[j].apply(&autos[i].image);
                let conj_base = autos[i].conj_base ^ autos[j].conj_base;
                table[i][j] = autos
                    .iter()
                    .position(|a| a.conj_base == conj_base && a.image == img)
                    .ok_or_else(|| Error::Invariant("automorphisms do not close".into()))?;
            }
        }
        let rho = if n == 2 { 1 } else { 2 };
        let data = GaloisData { order: n, table, h: vec![0], t, rho };
        let reflex = reflex_of(&data)?;
        Ok(GaloisField { field: field.clone(), autos, data, reflex })
    }

    /// `K* = K`, so ideals and ray classes of `K*` are those of `K`.
    pub fn reflex_is_k(&self) -> bool {
        self.reflex.h_star.len() == 1
    }

    /// `d ∈ K` lies in `K*` iff it is fixed by `H*`.
    pub fn in_reflex_field(&self, d: &CMElem) -> bool {
        self.reflex.h_star.iter().all(|&h| &self.autos[h].apply(d) == d)
    }

    /// `g(d) = ∏ⱼ ψⱼ(d)`.
    pub fn reflex_norm_elem(&self, d: &CMElem) -> Result<CMElem> {
        if !self.in_reflex_field(d) {
            return Err(Error::Domain(format!("{d:?} is not in K*")));
        }
        let mut acc = self.field.one();
        for &p in &self.reflex.psi {
            acc = &acc * &self.autos[p].apply(d);
        }
        Ok(acc)
    }

    /// `𝔤(𝔞) = ∏ⱼ ψⱼ(𝔞)`, for `𝔞` given by its extension to `O_K`.
    pub fn reflex_norm_ideal(&self, a: &FracIdeal) -> Result<FracIdeal> {
        let mut acc = FracIdeal::unit(&self.field);
        for &p in &self.reflex.psi {
            acc = acc.mul(&self.autos[p].apply_ideal(a)?);
        }
        Ok(acc)
    }

    /// `𝔤_N` on an enumerated `C(N·O_K)`, as a map on class indices.
    /// Needs `K* = K`.
    pub fn g_n(&self, group: &RayClassGroup) -> Result<Vec<usize>> {
        if !self.reflex_is_k() {
            return Err(Error::NotImplementable("𝔤_N with K* ≠ K needs arithmetic in K*".into()));
        }
        group.reps().iter().map(|a| group.classify(&self.reflex_norm_ideal(a)?)).collect()
    }
}

/// Indices of `𝔤_N` mapping to the identity class.
pub fn kernel(map: &[usize], identity: usize) -> Vec<usize> {
    (0..map.len()).filter(|&i| map[i] == identity).collect()
}

/// `1 + N·x`, which is `≡* 1 (mod N·O_K)` for integral `x`.
pub fn congruent_one(field: &CMField, n: &BigInt, x: &CMElem) -> CMElem {
    &field.one() + &x.scale(&field.base().integer(n))
}
