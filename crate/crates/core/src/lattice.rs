//! Exact Fincke–Pohst enumeration of short vectors in a positive definite
//! integral lattice, plus a few small integer-matrix helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cm_field::{integral_z_basis, z_coords, CMElem, CMField};
use crate::error::{Error, Result};
use crate::number_ring::round_rational;

/// Gram matrix of `q(α) = Tr_{F/Q}(α·ᾱ)` on the given Z-basis.
pub fn trace_gram(basis: &[CMElem]) -> Vec<Vec<BigRational>> {
    let half = BigRational::new(1.into(), 2.into());
    basis
        .iter()
        .map(|u| {
            basis
                .iter()
                .map(|v| (u * &v.conj()).trace_rel().trace() * &half)
                .collect()
        })
        .collect()
}

/// `q(α) = Tr_{F/Q}(N_{K/F}(α))`, equal to `Σᵢ |φᵢ(α)|²`.
pub fn trace_form(z: &CMElem) -> BigRational {
    z.norm_rel().trace()
}

/// Cholesky data `q(x) = Σᵢ Q[i][i]·(xᵢ + Σ_{j>i} Q[i][j]·xⱼ)²`.
fn quadratic_decomposition(gram: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = gram.len();
    let mut q: Vec<Vec<BigRational>> = gram.to_vec();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(Error::Invariant("Gram matrix is not positive definite".into()));
        }
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &q[k][i] * &q[i][l];
                q[k][l] = &q[k][l] - &t;
            }
        }
    }
    Ok(q)
}

/// Outcome of a visitor callback.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

/// Exact LLL reduction (`δ = 3/4`) of a Gram matrix. Returns the reduced
/// Gram matrix and the unimodular `U` whose rows express the new basis in
/// the old one.
pub fn lll_reduce(gram: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigInt>>) {
    let n = gram.len();
    let mut g = gram.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let delta = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            let r = round_rational(&mu[k][j]);
            if r.is_zero() {
                continue;
            }
            let rq = BigRational::from_integer(r.clone());
            for c in 0..n {
                let t = &g[j][c] * &rq;
                g[k][c] -= t;
            }
            for row in g.iter_mut() {
                let t = &row[j] * &rq;
                row[k] -= t;
            }
            for c in 0..n {
                let t = &u[j][c] * &r;
                u[k][c] -= t;
            }
        }
        let (mu, b) = gram_schmidt(&g);
        let m = &mu[k][k - 1];
        if b[k] >= (&delta - m * m) * &b[k - 1] {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (g, u)
}

/// Gram–Schmidt coefficients `μ` and squared lengths `B` from a Gram matrix.
fn gram_schmidt(g: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = g.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut t = g[i][j].clone();
            for l in 0..j {
                t -= &mu[j][l] * &mu[i][l] * &b[l];
            }
            mu[i][j] = t / &b[j];
        }
        let mut t = g[i][i].clone();
        for l in 0..i {
            t -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        b[i] = t;
    }
    (mu, b)
}

/// Calls `visit` on every integer vector `x` with `xᵀ·G·x ≤ bound`
/// (including zero). Returns the number of nodes explored, or
/// [`Error::Inconclusive`] once `budget` nodes are exceeded.
///
/// The enumeration runs on an LLL-reduced basis; vectors are reported in
/// the original coordinates.
pub fn short_vectors<F>(gram: &[Vec<BigRational>], bound: &BigRational, budget: u64, mut visit: F) -> Result<u64>
where
    F: FnMut(&[BigInt]) -> Visit,
{
    let (reduced, u) = lll_reduce(gram);
    let q = quadratic_decomposition(&reduced)?;
    let n = q.len();
    let mut x = vec![BigInt::zero(); n];
    let mut nodes = 0u64;
    let mut stop = false;
    let mut back = |y: &[BigInt]| {
        let orig: Vec<BigInt> = (0..n).map(|j| (0..n).map(|i| &y[i] * &u[i][j]).sum()).collect();
        visit(&orig)
    };
    enumerate(&q, n - 1, &mut x, bound.clone(), &mut nodes, budget, &mut back, &mut stop)?;
    Ok(nodes)
}

#[allow(clippy::too_many_arguments)]
fn enumerate<F>(
    q: &[Vec<BigRational>],
    i: usize,
    x: &mut Vec<BigInt>,
    remaining: BigRational,
    nodes: &mut u64,
    budget: u64,
    visit: &mut F,
    stop: &mut bool,
) -> Result<()>
where
    F: FnMut(&[BigInt]) -> Visit,
{
    let mut center = BigRational::zero();
    for j in i + 1..q.len() {
        center -= &q[i][j] * BigRational::from_integer(x[j].clone());
    }
    let x0 = round_rational(&center);
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { x0.clone() } else { &x0 - 1 };
        loop {
            let diff = BigRational::from_integer(k.clone()) - &center;
            let t = &q[i][i] * &diff * &diff;
            if t > remaining {
                break;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Inconclusive { explored: *nodes });
            }
            x[i] = k.clone();
            if i == 0 {
                if visit(x) == Visit::Stop {
                    *stop = true;
                }
            } else {
                enumerate(q, i - 1, x, &remaining - &t, nodes, budget, visit, stop)?;
            }
            if *stop {
                return Ok(());
            }
            k += dir;
        }
    }
    x[i] = BigInt::zero();
    Ok(())
}

/// Roots of unity of `O_K`: the vectors with `q = g` and relative norm one.
pub fn roots_of_unity(field: &CMField) -> Vec<CMElem> {
    let basis = integral_z_basis(field);
    let gram = trace_gram(&basis);
    let g = BigRational::from_integer((field.g() as i64).into());
    let mut out = Vec::new();
    short_vectors(&gram, &g, u64::MAX, |v| {
        let z = combine(&basis, v);
        if !z.is_zero() && z.norm_rel().is_one() {
            out.push(z);
        }
        Visit::Continue
    })
    .expect("unbounded budget cannot run out");
    out.sort_by_key(z_coords);
    out
}

/// `Σ vᵢ·basisᵢ`.
pub fn combine(basis: &[CMElem], v: &[BigInt]) -> CMElem {
    let field = basis[0].field();
    let mut acc = field.zero();
    for (b, c) in basis.iter().zip(v) {
        if !c.is_zero() {
            acc = &acc + &b.scale(&field.base().integer(c));
        }
    }
    acc
}

/// Upper-triangular integer basis `[[p, q], [0, s]]` of the lattice spanned
/// by `rows`, with `p, s > 0` and `0 ≤ q < s`.
pub fn hnf2(rows: &[(BigInt, BigInt)]) -> Option<((BigInt, BigInt), BigInt)> {
    let mut rows: Vec<(BigInt, BigInt)> = rows.to_vec();
    loop {
        rows.retain(|r| !(r.0.is_zero() && r.1.is_zero()));
        let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].0.is_zero()).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| rows[i].0.abs()).unwrap();
        let (p0, p1) = rows[piv].clone();
        for &j in &nz {
            if j != piv {
                let k = rows[j].0.div_floor(&p0);
                rows[j].0 -= &k * &p0;
                rows[j].1 -= &k * &p1;
            }
        }
    }
    let piv = rows.iter().position(|r| !r.0.is_zero())?;
    let (mut p, mut q) = rows.remove(piv);
    let s = rows.iter().fold(BigInt::zero(), |g, r| g.gcd(&r.1));
    if s.is_zero() {
        return None;
    }
    if p.is_negative() {
        p = -p;
        q = -q;
    }
    Some(((p, q.mod_floor(&s)), s))
}

/// `gcd` of a list of integers (zero for an empty list).
pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_ring::BaseField;
    use num_traits::One;

    #[test]
    fn counts_small_vectors() {
        // Z²: vectors of norm ≤ 2 are 0, 4 of norm 1, 4 of norm 2
        let one = BigRational::one;
        let z = BigRational::zero;
        let gram = vec![vec![one(), z()], vec![z(), one()]];
        let mut count = 0;
        short_vectors(&gram, &BigRational::from_integer(2.into()), 1000, |_| {
            count += 1;
            Visit::Continue
        })
        .unwrap();
        assert_eq!(count, 9);
        assert!(matches!(
            short_vectors(&gram, &BigRational::from_integer(100.into()), 10, |_| Visit::Continue),
            Err(Error::Inconclusive { .. })
        ));
    }

    #[test]
    fn lll_shortens_skewed_basis() {
        let r = |x: i64| BigRational::from_integer(x.into());
        // basis (1, 0), (1000, 1) of Z²
        let gram = vec![vec![r(1), r(1000)], vec![r(1000), r(1_000_001)]];
        let (g, u) = lll_reduce(&gram);
        assert_eq!(g, vec![vec![r(1), r(0)], vec![r(0), r(1)]]);
        let det = &u[0][0] * &u[1][1] - &u[0][1] * &u[1][0];
        assert_eq!(det.abs(), BigInt::one());
        let mut count = 0;
        short_vectors(&gram, &r(2), 20, |_| {
            count += 1;
            Visit::Continue
        })
        .unwrap();
        assert_eq!(count, 9);
    }

    #[test]
    fn roots_of_unity_counts() {
        let q = BaseField::Rational;
        assert_eq!(roots_of_unity(&CMField::new(q.int(0), q.int(1)).unwrap()).len(), 4);
        assert_eq!(roots_of_unity(&CMField::new(q.int(1), q.int(6)).unwrap()).len(), 2);
        assert_eq!(roots_of_unity(&CMField::new(q.int(1), q.int(1)).unwrap()).len(), 6);
        let f = BaseField::real_quadratic(5).unwrap();
        assert_eq!(roots_of_unity(&CMField::new(f.elem(1, -1), f.int(1)).unwrap()).len(), 10);
        let f2 = BaseField::real_quadratic(2).unwrap();
        assert_eq!(roots_of_unity(&CMField::new(f2.elem(0, -1), f2.int(1)).unwrap()).len(), 8);
    }

    #[test]
    fn integer_hnf() {
        let r = |a: i64, b: i64| (BigInt::from(a), BigInt::from(b));
        let ((p, q), s) = hnf2(&[r(4, 2), r(6, 1)]).unwrap();
        // det = 4 - 12 = -8
        assert_eq!(&p * &s, BigInt::from(8));
        assert!(q < s);
        assert!(hnf2(&[r(1, 1), r(2, 2)]).is_none());
    }
}
