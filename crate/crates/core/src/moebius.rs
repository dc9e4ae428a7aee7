//! Moebius function of the sublattice poset.
//!
//! For `L <= M` the value depends only on the quotient `M/L`: it vanishes
//! unless every invariant factor is squarefree (so the quotient is a direct
//! product of elementary abelian groups), and in that case equals the
//! product over primes `p` of `(-1)^{n_p} p^{n_p (n_p - 1) / 2}` where `n_p`
//! counts the invariant factors `p` divides.
//!
//! [`moebius_recursive`] evaluates the defining recursion over the interval
//! instead and exists purely as an oracle against the closed form; it shares
//! only the lattice primitives with it.

use crate::arith::factor;
use crate::lattice::{quotient_invariants, Sublattice};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;
use std::collections::HashMap;

/// Quotient-size cap for [`moebius_recursive`]; the recursion walks every
/// interval element, so it is meant for small verification instances only.
pub const RECURSIVE_QUOTIENT_CAP: u64 = 256;

/// Moebius value of the interval `[L, M]` by the closed form on the
/// invariant factors of `M/L`. Errors when `L` is not contained in `M`.
pub fn moebius_closed(m: &Sublattice, l: &Sublattice) -> Result<BigInt> {
    let factors = quotient_invariants(m, l)?;
    // n_p = number of invariant factors divisible by p.
    let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
    for f in factors {
        for (p, e) in factor(f) {
            if e > 1 {
                // Quotient has a Z/p^e component: not elementary.
                return Ok(BigInt::from(0));
            }
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    let mut out = BigInt::one();
    for (p, n) in counts {
        if n % 2 == 1 {
            out = -out;
        }
        out *= BigInt::from(p).pow(n * (n - 1) / 2);
    }
    Ok(out)
}

/// Moebius value of `[L, M]` by the defining recursion
/// `mu(M, L) = -sum over L < K <= M of mu(M, K)`, memoized per evaluator.
///
/// Rejects intervals whose quotient exceeds [`RECURSIVE_QUOTIENT_CAP`]; use
/// [`MoebiusEvaluator`] directly to choose a different cap.
pub fn moebius_recursive(m: &Sublattice, l: &Sublattice) -> Result<BigInt> {
    MoebiusEvaluator::new(RECURSIVE_QUOTIENT_CAP).eval(m, l)
}

/// Memoizing evaluator for the recursive Moebius definition.
pub struct MoebiusEvaluator {
    cap: u64,
    memo: HashMap<(Sublattice, Sublattice), BigInt>,
}

impl MoebiusEvaluator {
    pub fn new(quotient_cap: u64) -> MoebiusEvaluator {
        MoebiusEvaluator {
            cap: quotient_cap,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, m: &Sublattice, l: &Sublattice) -> Result<BigInt> {
        if !m.contains(l)? {
            return Err(Error::NotContained);
        }
        let quotient = interval_size(m, l)?;
        if quotient > self.cap {
            return Err(Error::CapExceeded(format!(
                "recursive Moebius interval has quotient size {quotient}, cap is {}",
                self.cap
            )));
        }
        self.eval_inner(m, l)
    }

    fn eval_inner(&mut self, m: &Sublattice, l: &Sublattice) -> Result<BigInt> {
        if m == l {
            return Ok(BigInt::one());
        }
        let key = (m.clone(), l.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        // Sum over K with L < K <= M; the superlattice walk yields every K
        // above L, filtered down to the interval.
        let mut acc = BigInt::from(0);
        for k in l.superlattices()? {
            if k == *l || !m.contains(&k)? {
                continue;
            }
            acc += self.eval_inner(m, &k)?;
        }
        let value = -acc;
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

fn interval_size(m: &Sublattice, l: &Sublattice) -> Result<u64> {
    let il = l
        .index_u64()
        .ok_or_else(|| Error::CapExceeded("interval index exceeds 64-bit range".into()))?;
    let im = m
        .index_u64()
        .ok_or_else(|| Error::CapExceeded("interval index exceeds 64-bit range".into()))?;
    Ok(il / im)
}

/// Envelope `floor(k^(log2(k)/2)) + 1` dominating `|mu|` on any interval of
/// quotient size `k`; the trivial interval is pinned to its exact value 1.
pub fn moebius_bound(k: u64) -> BigInt {
    assert!(k > 0, "quotient size must be positive");
    if k == 1 {
        return BigInt::one();
    }
    let kf = k as f64;
    let power = kf.powf(kf.log2() / 2.0);
    BigInt::from(power.floor() as u64) + 1
}
