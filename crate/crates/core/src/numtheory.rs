//! Small integer helpers shared by the group and discriminant code.

use num_integer::Integer;

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Units of `ℤ/eℤ` in increasing order (`[0]` for `e = 1`).
pub fn units_mod(e: u64) -> Vec<u64> {
    if e == 1 {
        return vec![0];
    }
    (1..e).filter(|u| u.gcd(&e) == 1).collect()
}

/// Inverse of `u` modulo `e`, if `u` is a unit.
pub fn inverse_mod(u: u64, e: u64) -> Option<u64> {
    if e == 1 {
        return Some(0);
    }
    let g = (u as i64 % e as i64).extended_gcd(&(e as i64));
    (g.gcd == 1).then(|| g.x.rem_euclid(e as i64) as u64)
}

/// Squarefree part of a nonzero integer, keeping the sign: `n = s · t²`.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0, "squarefree part of zero");
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut s = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if k % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    s *= m;
    sign * s as i64
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(4608), vec![2, 3]);
        assert_eq!(prime_factors(97), vec![97]);
    }

    #[test]
    fn units_and_inverses() {
        assert_eq!(units_mod(2), vec![1]);
        assert_eq!(units_mod(9), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(inverse_mod(2, 3), Some(2));
        assert_eq!(inverse_mod(2, 5), Some(3));
        assert_eq!(inverse_mod(2, 4), None);
        for e in 2..40 {
            for u in units_mod(e) {
                assert_eq!(u * inverse_mod(u, e).unwrap() % e, 1);
            }
        }
    }

    #[test]
    fn squarefree_helpers() {
        assert_eq!(squarefree_part(-32), -2);
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(-64), -1);
        assert!(is_squarefree(30));
        assert!(!is_squarefree(18));
        assert_eq!(isqrt(1_000_000_000), 31622);
        assert_eq!(isqrt(15), 3);
    }
}
