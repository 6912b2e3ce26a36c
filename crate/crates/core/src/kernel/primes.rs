//! Small-integer primality and factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `p <= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Distinct prime factors of `n > 0`, ascending.
pub fn prime_factors_u64(n: u64) -> Vec<u64> {
    fn rec(n: u64, out: &mut Vec<u64>) {
        if n == 1 {
            return;
        }
        if is_prime_u64(n) {
            out.push(n);
            return;
        }
        for p in [2u64, 3, 5, 7, 11, 13] {
            if n % p == 0 {
                out.push(p);
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                }
                rec(m, out);
                return;
            }
        }
        let d = pollard_rho(n);
        rec(d, out);
        rec(n / d, out);
    }
    let mut out = Vec::new();
    rec(n, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

/// Distinct prime factors of a nonzero big integer.
///
/// Returns `None` when the absolute value does not fit in 64 bits.
pub fn prime_factors(n: &BigInt) -> Option<Vec<u64>> {
    if n.is_zero() {
        return None;
    }
    let a = n.abs().to_u64()?;
    Some(prime_factors_u64(a))
}

/// True when `n` has no repeated prime factor. Zero is not squarefree.
pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// True when `n` is a perfect square (negative numbers are not).
pub fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).any(|s| s >= 0 && s * s == n)
}

/// Least common multiple of a list of big integers (absolute value).
pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let brute: Vec<u64> = (0..200)
            .filter(|&n| n >= 2 && (2..n).all(|d| n % d != 0))
            .collect();
        let fast: Vec<u64> = (0..200).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(brute, fast);
        assert_eq!(primes_up_to(199), brute);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors_u64(360), vec![2, 3, 5]);
        assert_eq!(prime_factors_u64(1_000_003 * 101), vec![101, 1_000_003]);
        assert_eq!(prime_factors_u64(1), Vec::<u64>::new());
    }

    #[test]
    fn squarefree_and_squares() {
        assert!(is_squarefree(-7));
        assert!(!is_squarefree(-27));
        assert!(!is_squarefree(45));
        assert!(is_perfect_square(49));
        assert!(!is_perfect_square(-1));
        assert!(!is_perfect_square(17));
    }
}
