//! Small-integer number theory used by the lattice and growth modules.
//!
//! Everything here runs on machine integers; inputs at the scales this crate
//! targets (indices and horizons up to about 10^6) stay far inside `u64`.

/// Divisors of `n` in increasing order. `n` must be positive.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors of zero are undefined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Prime factorization of `n` as (prime, exponent) pairs in increasing
/// prime order. `n` must be positive; `factor(1)` is empty.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorization of zero is undefined");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Classical Moebius function on positive integers: 0 on non-squarefree
/// input, otherwise (-1)^(number of prime factors).
pub fn classical_mobius(n: u64) -> i32 {
    let fac = factor(n);
    if fac.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if fac.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Deterministic primality by trial division; adequate for the desk-scale
/// inputs used in tests.
pub fn is_prime(n: u64) -> bool {
    n > 1 && factor(n).len() == 1 && factor(n)[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(97), vec![1, 97]);
    }

    #[test]
    fn factorizations() {
        assert_eq!(factor(1), vec![]);
        assert_eq!(factor(2), vec![(2, 1)]);
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(9973), vec![(9973, 1)]);
    }

    #[test]
    fn mobius_values() {
        // First ten values of the classical function.
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(classical_mobius(i as u64 + 1), m);
        }
        assert_eq!(classical_mobius(30), -1);
        assert_eq!(classical_mobius(210), 1);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }
}
