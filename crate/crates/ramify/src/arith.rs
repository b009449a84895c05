//! Small integer and polynomial helpers shared by the other modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).filter(|d| d * d <= n && n % d == 0).collect();
    let mut big: Vec<u64> = ds.iter().rev().map(|d| n / d).filter(|&e| e * e != n).collect();
    ds.append(&mut big);
    ds.sort_unstable();
    ds
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factor(n.unsigned_abs()).iter().all(|&(_, k)| k == 1)
}

/// Fundamental discriminant test (either sign; 1 excluded).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => d != 1 && is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Exponent of the prime `p` in `n` (`n` nonzero).
pub fn vp(mut n: i128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Exponent of `p` in a nonzero big integer.
pub fn vp_big(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

pub fn pow_mod(mut b: i128, mut e: u64, m: i128) -> i128 {
    let mut r = 1i128.rem_euclid(m);
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Extended gcd: returns (g, x, y) with a x + b y = g ≥ 0.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = xgcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Kronecker symbol (a / n).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut a = a;
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi (a / n) for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

pub fn ipow(b: u64, e: u32) -> u64 {
    b.checked_pow(e).expect("integer power overflow")
}

// ---------------------------------------------------------------------------
// Dense polynomials over ℤ, coefficients low degree first.

pub type BigPoly = Vec<BigInt>;

pub fn big_poly(c: &[i64]) -> BigPoly {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn poly_trim(p: &mut BigPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn poly_is_zero(p: &[BigInt]) -> bool {
    p.iter().all(Zero::is_zero)
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> BigPoly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn poly_rem_monic(a: &[BigInt], m: &[BigInt]) -> BigPoly {
    let n = m.len() - 1;
    debug_assert!(m[n].is_one());
    let mut r: BigPoly = a.to_vec();
    while r.len() > n {
        let lead = r.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = r.len() - n;
        for k in 0..n {
            r[shift + k] -= &lead * &m[k];
        }
    }
    r.resize(n, BigInt::zero());
    r
}

pub fn poly_mulmod(a: &[BigInt], b: &[BigInt], m: &[BigInt]) -> BigPoly {
    poly_rem_monic(&poly_mul(a, b), m)
}

/// Evaluate `p` at the polynomial `x` modulo `m` (Horner).
pub fn poly_compose_mod(p: &[BigInt], x: &[BigInt], m: &[BigInt]) -> BigPoly {
    let n = m.len() - 1;
    let mut acc = vec![BigInt::zero(); n];
    for c in p.iter().rev() {
        acc = poly_mulmod(&acc, x, m);
        acc[0] += c;
    }
    acc
}

/// Coefficients of p(t + c).
pub fn taylor_shift(p: &[BigInt], c: i64) -> BigPoly {
    let mut a = p.to_vec();
    let c = BigInt::from(c);
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &a[j + 1] * &c;
            a[j] += t;
        }
    }
    a
}

pub fn is_eisenstein(p: &[BigInt], prime: u64) -> bool {
    let n = p.len() - 1;
    let q = BigInt::from(prime);
    let q2 = &q * &q;
    p[n].is_one()
        && p[..n].iter().all(|c| c.is_multiple_of(&q))
        && !p[0].is_multiple_of(&q2)
}

/// Root of x² − δx + (δ − D)/4 modulo q^k (simple root lifted by Newton),
/// starting from the residue `r0` mod q.
pub fn hensel_root(disc: i64, r0: i64, q: u64, k: u32) -> BigInt {
    let delta = BigInt::from(disc.rem_euclid(2));
    let c = (&delta - BigInt::from(disc)) / 4;
    let f = |x: &BigInt| -> BigInt { x * x - &delta * x + &c };
    let df = |x: &BigInt| -> BigInt { BigInt::from(2) * x - &delta };
    let mut modulus = BigInt::from(q);
    let target = BigInt::from(q).pow(k);
    let mut r = BigInt::from(r0).mod_floor(&modulus);
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let d = df(&r).mod_floor(&modulus);
        let inv: BigInt = d.extended_gcd(&modulus).x.mod_floor(&modulus);
        let step: BigInt = f(&r) * inv;
        r = (&r - step).mod_floor(&modulus);
    }
    let r = r.mod_floor(&target);
    debug_assert!(f(&r).mod_floor(&target).is_zero());
    r
}

pub fn big_abs(x: &BigInt) -> BigInt {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(2) && is_prime(4919) && !is_prime(1) && !is_prime(91));
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
    }

    #[test]
    fn fundamental() {
        for d in [-3, -4, -7, -8, -23, 5, 8, 12, -20] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [-1, -12, -16, 1, 4, -27, 9] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in -20i64..20 {
                let e = pow_mod(a as i128, (p - 1) / 2, p as i128);
                let expect = match e {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(a, p as i64), expect, "({a}/{p})");
            }
        }
        // 2 splits exactly when D ≡ 1 mod 8
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
    }

    #[test]
    fn taylor_and_eisenstein() {
        // x^4 - 4x^2 + 1 at x = t + 1
        let p = big_poly(&[1, 0, -4, 0, 1]);
        let s = taylor_shift(&p, 1);
        assert_eq!(s, big_poly(&[-2, -4, 2, 4, 1]));
        assert!(is_eisenstein(&s, 2));
        assert!(!is_eisenstein(&p, 2));
    }

    #[test]
    fn hensel() {
        let r = hensel_root(-7, 0, 2, 20);
        let x = r.clone();
        let v = &x * &x - &x + BigInt::from(2);
        assert!(v.is_multiple_of(&BigInt::from(1u64 << 20)));
    }

    #[test]
    fn xgcd_identity() {
        for (a, b) in [(12i128, 18i128), (-7, 3), (0, 5), (5, 0)] {
            let (g, x, y) = xgcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, num_integer::gcd(a, b));
        }
    }
}

// ---------------------------------------------------------------------------
// Small dense linear algebra.

/// Determinant by fraction-free elimination.
pub fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a square rational matrix, or None if singular.
pub fn rational_inverse(m: &[Vec<crate::Rational>]) -> Option<Vec<Vec<crate::Rational>>> {
    use crate::Rational;
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from_int(i128::from(i == j))));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| a[i][c] != Rational::zero())?;
        a.swap(c, p);
        let piv = a[c][c];
        for x in a[c].iter_mut() {
            *x = *x / piv;
        }
        for i in 0..n {
            if i != c && a[i][c] != Rational::zero() {
                let f = a[i][c];
                for j in 0..2 * n {
                    let t = a[c][j];
                    a[i][j] = a[i][j] - f * t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod linalg_tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn determinant() {
        let m: Vec<Vec<BigInt>> = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_big(&m), BigInt::from(0));
        let m: Vec<Vec<BigInt>> = [[0, 1], [1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_big(&m), BigInt::from(-1));
        let m: Vec<Vec<BigInt>> = [[2, 1, 0], [1, 2, 1], [0, 1, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_big(&m), BigInt::from(4));
    }

    #[test]
    fn inverse() {
        let r = |x: i128| Rational::from_int(x);
        let m = vec![vec![r(2), r(1)], vec![r(1), r(1)]];
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![r(1), r(-1)], vec![r(-1), r(2)]]);
        assert!(rational_inverse(&[vec![r(1), r(2)], vec![r(2), r(4)]]).is_none());
    }
}
