//! Dense univariate integer polynomials: just enough exact arithmetic for
//! resultants (fraction-free Sylvester determinant) and factoring of the
//! resulting integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients low-to-high; no trailing zeros (zero polynomial = empty).
pub type IntPoly = Vec<BigInt>;

pub fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &IntPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn from_coeffs(cs: &[i64]) -> IntPoly {
    let mut p: IntPoly = cs.iter().map(|&c| BigInt::from(c)).collect();
    trim(&mut p);
    p
}

/// x^m - c
pub fn power_minus(m: usize, c: &BigInt) -> IntPoly {
    let mut p = vec![BigInt::zero(); m + 1];
    p[0] = -c.clone();
    p[m] = BigInt::one();
    p
}

pub fn eval(p: &IntPoly, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &IntPoly) -> IntPoly {
    let mut out: IntPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| BigInt::from(i) * c)
        .collect();
    trim(&mut out);
    out
}

/// Resultant of `f` and `g` as the determinant of the Sylvester matrix,
/// computed fraction-free (Bareiss).
pub fn resultant_sylvester(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (n, m) = match (degree(f), degree(g)) {
        (Some(n), Some(m)) => (n, m),
        _ => return BigInt::zero(),
    };
    if n == 0 {
        return f[0].pow(m as u32);
    }
    if m == 0 {
        return g[0].pow(n as u32);
    }
    let size = n + m;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for (i, row) in mat.iter_mut().enumerate().take(m) {
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
    }
    for (i, row) in mat.iter_mut().enumerate().skip(m) {
        let i = i - m;
        for (j, c) in g.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Full prime factorization of |n| by small trial division plus
/// Miller-Rabin/Pollard-rho for large cofactors. Returns (prime, exponent)
/// pairs sorted ascending; |n| must be nonzero.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero());
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in 2u64.. {
        if p > 100_000 {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > n {
            break;
        }
        loop {
            let (q, r) = n.div_rem(&pb);
            if r.is_zero() {
                push(pb.clone(), &mut out);
                n = q;
            } else {
                break;
            }
        }
    }
    if n > BigInt::one() {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            let m128: u128 = (&m).try_into().expect("cofactor fits in u128");
            if is_prime_u128(m128) {
                push(m.clone(), &mut out);
            } else {
                let d = pollard_rho(m128);
                stack.push(BigInt::from(d));
                stack.push(BigInt::from(m128 / d));
            }
        }
    }
    out.sort();
    out
}

pub fn largest_prime_factor(n: &BigInt) -> Option<BigInt> {
    if n.is_zero() || n.abs().is_one() {
        return None;
    }
    factor(n).into_iter().map(|(p, _)| p).max()
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    // m < 2^64 in all our uses after reduction; use widening when possible
    if let (Ok(a64), Ok(b64), Ok(m64)) = (
        u64::try_from(a),
        u64::try_from(b),
        u64::try_from(m),
    ) {
        return (a64 as u128 * b64 as u128) % m64 as u128;
    }
    // fallback: double-and-add
    let mut acc = 0u128;
    let mut a = a % m;
    let mut b = b;
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    acc
}

fn pow_mod(mut a: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u128(acc, a, m);
        }
        a = mul_mod_u128(a, a, m);
        e >>= 1;
    }
    acc
}

pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let r = d.trailing_zeros();
    let d = d >> r;
    'wit: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    assert!(n > 1 && !is_prime_u128(n));
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = x.abs_diff(y);
            d = gcd_u128(diff, n);
        }
        if d != n && d != 0 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_small() {
        // Res(x^2 - 2, x^2 - 3) = (2-3)^2 = 1
        let f = from_coeffs(&[-2, 0, 1]);
        let g = from_coeffs(&[-3, 0, 1]);
        assert_eq!(resultant_sylvester(&f, &g), BigInt::one());
        // Res(x - 1, x^2 + 1) = 1^2 + 1 = 2
        let f = from_coeffs(&[-1, 1]);
        let g = from_coeffs(&[1, 0, 1]);
        assert_eq!(resultant_sylvester(&g, &f), BigInt::from(2));
        // Res(x^2 - 4, x^2 + 4): roots +-2i of the second, (x^2-4)(+-2i) = -8
        let f = from_coeffs(&[-4, 0, 1]);
        let g = from_coeffs(&[4, 0, 1]);
        assert_eq!(resultant_sylvester(&f, &g), BigInt::from(64));
    }

    #[test]
    fn factor_small() {
        let n = BigInt::from(4194303u64); // 2^22 - 1 = 3 * 23 * 89 * 683
        let fs = factor(&n);
        assert_eq!(
            fs,
            vec![
                (BigInt::from(3), 1),
                (BigInt::from(23), 1),
                (BigInt::from(89), 1),
                (BigInt::from(683), 1)
            ]
        );
        assert_eq!(largest_prime_factor(&n).unwrap(), BigInt::from(683));
    }
}
