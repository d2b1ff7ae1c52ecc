//! Primality and working-prime selection.

use rand::Rng;

use super::scalar::{mul_mod, pow_mod};

/// Lower end of the default working-prime range.
pub const PRIME_RANGE_LOW: u64 = 1 << 50;
/// Upper end of the default working-prime range.
pub const PRIME_RANGE_HIGH: u64 = 1 << 62;

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
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

/// Smallest odd prime strictly greater than `n`, if one fits below 2^63.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.checked_add(1)?;
    if c <= 3 {
        return Some(3);
    }
    if c % 2 == 0 {
        c += 1;
    }
    while c < 1 << 63 {
        if is_prime_u64(c) {
            return Some(c);
        }
        c += 2;
    }
    None
}

/// A uniformly drawn prime in `[2^50, 2^62]` (first prime above a uniform point).
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let start = rng.gen_range(PRIME_RANGE_LOW..PRIME_RANGE_HIGH);
        if let Some(p) = next_prime(start) {
            if p <= PRIME_RANGE_HIGH {
                return p;
            }
        }
    }
}
