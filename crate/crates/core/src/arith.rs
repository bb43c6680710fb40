//! Small integer helpers shared by the modules.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::ResourceLimit(format!("{base}^{exp} overflows")))
}

/// Exponent `e` with `p^e == n`, if `n` is a power of `p`.
pub fn log_p(p: u64, mut n: u64) -> Option<u32> {
    let mut e = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        e += 1;
    }
    (n == 1).then_some(e)
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_logs() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(log_p(3, 27), Some(3));
        assert_eq!(log_p(2, 12), None);
        assert_eq!(log_p(5, 1), Some(0));
    }

    #[test]
    fn inverses() {
        for m in [8u64, 9, 27, 16] {
            for a in 1..m {
                match mod_inverse(a, m) {
                    Some(b) => assert_eq!(a * b % m, 1),
                    None => assert!(num_integer::gcd(a, m) > 1),
                }
            }
        }
    }
}
