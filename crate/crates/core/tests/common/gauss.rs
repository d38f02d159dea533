//! Classical composition and reduction of positive definite binary
//! quadratic forms over `Z`, written from scratch on machine integers.

pub type Form = (i128, i128, i128);

pub fn disc(f: Form) -> i128 {
    f.1 * f.1 - 4 * f.0 * f.2
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// The reduced form: `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
pub fn reduce(f: Form) -> Form {
    let (mut a, mut b, mut c) = f;
    assert!(a > 0 && disc(f) < 0, "not positive definite: {f:?}");
    loop {
        // normalise: -a < b ≤ a
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            let nb = b + 2 * k * a;
            c += k * (b + k * a);
            b = nb;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// Dirichlet composition of two forms of the same discriminant.
pub fn compose(f1: Form, f2: Form) -> Form {
    let d = disc(f1);
    assert_eq!(d, disc(f2));
    let (a1, b1, _) = f1;
    let (a2, b2, _) = f2;
    let s = (b1 + b2) / 2;
    let (d1, x, y) = ext_gcd(a1, a2);
    let (e, p, q) = ext_gcd(d1, s);
    let (u, v, w) = (p * x, p * y, q);
    let a3 = a1 * a2 / (e * e);
    let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + d) / 2;
    let b3 = (num / e).rem_euclid(2 * a3);
    let c3 = (b3 * b3 - d) / (4 * a3);
    assert_eq!(b3 * b3 - 4 * a3 * c3, d);
    reduce((a3, b3, c3))
}

/// Every reduced form of discriminant `d < 0`.
pub fn reduced_forms(d: i128) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let f = (a, b, c);
                if c >= a && reduce(f) == f {
                    out.push(f);
                }
            }
        }
        a += 1;
    }
    out
}

#[test]
fn oracle_self_check() {
    assert_eq!(reduced_forms(-23), vec![(1, 1, 6), (2, -1, 3), (2, 1, 3)]);
    assert_eq!(reduced_forms(-4), vec![(1, 0, 1)]);
    assert_eq!(reduce((3, 7, 6)), reduce((6, -7, 3)));
    let f = (2, 1, 3);
    let f2 = compose(f, f);
    assert_eq!(f2, (2, -1, 3));
    assert_eq!(compose(f2, f), (1, 1, 6));
    assert_eq!(reduced_forms(-47).len(), 5);
}
