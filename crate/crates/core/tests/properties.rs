//! Randomized structural properties: canonicalization invariance, coset
//! reduction, Moebius envelopes, and decimal rendering, each checked
//! against exact arithmetic rather than float comparisons.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use orbitzeta::lattice::{quotient_invariants, Sublattice};
use orbitzeta::moebius::moebius_closed;
use orbitzeta::oracle::reduce_mod;
use orbitzeta::render::decimal_string;
use proptest::prelude::*;

// Canonical rank-two lattice with small entries.
fn small_lattice() -> impl Strategy<Value = Sublattice> {
    (1i64..=6, 1i64..=6, 0i64..=5).prop_map(|(d0, d1, off)| {
        Sublattice::from_canonical_rows(2, vec![d0, off % d1, 0, d1]).unwrap()
    })
}

// Unimodular row operations: (target, source, multiplier) triples applied as
// row_target += multiplier * row_source, plus an optional sign flip.
fn row_ops() -> impl Strategy<Value = Vec<(usize, usize, i64, bool)>> {
    proptest::collection::vec(
        (0usize..2, 0usize..2, -4i64..=4, proptest::bool::ANY),
        0..8,
    )
}

proptest! {
    #[test]
    fn canonical_form_survives_unimodular_churn(
        l in small_lattice(),
        ops in row_ops(),
    ) {
        let mut m = [
            [l.entry(0, 0), l.entry(0, 1)],
            [l.entry(1, 0), l.entry(1, 1)],
        ];
        for (t, s, c, flip) in ops {
            if t != s {
                m[t][0] += c * m[s][0];
                m[t][1] += c * m[s][1];
            } else if flip {
                m[t][0] = -m[t][0];
                m[t][1] = -m[t][1];
            }
        }
        let churned =
            Sublattice::from_generators(2, &[m[0][0], m[0][1], m[1][0], m[1][1]]).unwrap();
        prop_assert_eq!(churned, l);
    }

    #[test]
    fn redundant_generators_do_not_change_the_lattice(
        l in small_lattice(),
        a in -3i64..=3,
        b in -3i64..=3,
    ) {
        let extra = [
            a * l.entry(0, 0) + b * l.entry(1, 0),
            a * l.entry(0, 1) + b * l.entry(1, 1),
        ];
        let gens = [
            l.entry(0, 0), l.entry(0, 1),
            l.entry(1, 0), l.entry(1, 1),
            extra[0], extra[1],
        ];
        prop_assert_eq!(Sublattice::from_generators(2, &gens).unwrap(), l);
    }

    #[test]
    fn coset_reduction_is_a_lattice_translate_in_the_box(
        l in small_lattice(),
        x in -40i64..=40,
        y in -40i64..=40,
    ) {
        let r = reduce_mod(&l, &[x, y]).unwrap();
        prop_assert!(0 <= r[0] && r[0] < l.entry(0, 0));
        prop_assert!(0 <= r[1] && r[1] < l.entry(1, 1));
        let gens = [
            l.entry(0, 0), l.entry(0, 1),
            l.entry(1, 0), l.entry(1, 1),
            x - r[0], y - r[1],
        ];
        // Adjoining the difference must not enlarge the lattice.
        prop_assert_eq!(Sublattice::from_generators(2, &gens).unwrap(), l);
    }

    #[test]
    fn moebius_respects_sign_and_envelope(l in small_lattice()) {
        for m in l.superlattices().unwrap() {
            let mu = moebius_closed(&m, &l).unwrap();
            if mu.is_zero() {
                continue;
            }
            let inv = quotient_invariants(&m, &l).unwrap();
            let prime_count: u32 = inv
                .iter()
                .map(|&f| {
                    let mut c = 0u32;
                    let mut rest = f;
                    let mut p = 2u64;
                    while rest > 1 {
                        if rest % p == 0 {
                            c += 1;
                            while rest % p == 0 {
                                rest /= p;
                            }
                        }
                        p += 1;
                    }
                    c
                })
                .sum();
            let expect_negative = prime_count % 2 == 1;
            prop_assert_eq!(mu.is_negative(), expect_negative);
            // |mu|^2 <= k^(log2 k) restated in integers: |mu|^2 <= k^e with
            // e the bit length minus one rounded up to cover log2.
            let k: u64 = inv.iter().product::<u64>().max(1);
            let mu_sq = mu.clone() * mu.clone();
            let log2_ceil = 64 - (k - 1).leading_zeros().min(63);
            let envelope = BigInt::from(k).pow(log2_ceil);
            prop_assert!(mu_sq.magnitude() <= envelope.magnitude());
        }
    }

    #[test]
    fn decimal_rendering_is_correctly_rounded(
        num in -100_000i64..=100_000,
        den in 1i64..=10_000,
        precision in 0usize..=8,
    ) {
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        let text = decimal_string(&r, precision);
        // Parse the decimal back exactly.
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, text.as_str()),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        prop_assert_eq!(frac_part.len(), precision);
        let scale = BigInt::from(10).pow(precision as u32);
        let parsed_units: BigInt = if frac_part.is_empty() {
            int_part.parse::<BigInt>().unwrap() * &scale
        } else {
            int_part.parse::<BigInt>().unwrap() * &scale
                + frac_part.parse::<BigInt>().unwrap()
        };
        let parsed = BigRational::new(BigInt::from(sign) * parsed_units, scale.clone());
        let err = (parsed - r).abs();
        let half_ulp = BigRational::new(BigInt::one(), BigInt::from(2) * scale);
        prop_assert!(err <= half_ulp, "rendered {} for {}/{}", text, num, den);
    }
}
