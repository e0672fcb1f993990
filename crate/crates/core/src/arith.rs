//! Small deterministic integer helpers shared across modules.

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin; the base set is a proven witness set for all of u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
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

/// Prime factorization by trial division. Caller guarantees desk-scale input:
/// any cofactor surviving division by primes below 10^6 must itself be prime.
pub fn factor_u64(mut n: u64) -> Result<Vec<(u64, u32)>, ()> {
    let mut out = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    let push = |p: u64, e: u32, out: &mut Vec<(u64, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n & 1 == 0 {
        n >>= 1;
        e += 1;
    }
    push(2, e, &mut out);
    let mut p = 3u64;
    while p <= 1_000_000 && p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e, &mut out);
        p += 2;
    }
    if n > 1 {
        if is_prime_u64(n) {
            out.push((n, 1));
        } else {
            return Err(());
        }
    }
    Ok(out)
}

/// Moebius function of a small integer.
pub fn moebius_u64(n: u64) -> i64 {
    debug_assert!(n >= 1);
    let factors = factor_u64(n).expect("moebius argument is desk-scale");
    for (_, e) in &factors {
        if *e > 1 {
            return 0;
        }
    }
    if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// FNV-1a over bytes; used to derive deterministic per-input seeds.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn primality_large() {
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007u64.wrapping_mul(3)));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_u64(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1).unwrap(), vec![]);
        assert_eq!(factor_u64(999_999_999_989).unwrap(), vec![(999_999_999_989, 1)]);
    }

    #[test]
    fn moebius_values() {
        let expected = [1i64, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(moebius_u64(i as u64 + 1), m);
        }
    }
}
