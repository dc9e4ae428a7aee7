//! Brute-force ground truth for orbit counts.
//!
//! Everything here works by enumerating actual periodic configurations on
//! the torus `Z^d / L` and computing exact stabilizers by trying every
//! torus translation. No Moebius data is consulted anywhere in this module;
//! agreement with the inversion-based counts is what the rest of the crate
//! is tested against, so the two paths must stay independent.

use crate::lattice::{enumerate_sublattices, Sublattice};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Enumeration refuses tori with more than this many configurations.
pub const ORACLE_CONFIG_CAP: u64 = 1 << 20;

/// The torus `Z^d / L` with a fixed transversal and precomputed translation
/// permutations, one per coset representative.
pub struct CosetSpace {
    lattice: Sublattice,
    reps: Vec<Vec<i64>>,
    // perms[t][i] = position of reps[i] + reps[t], reduced mod the lattice.
    perms: Vec<Vec<usize>>,
}

impl CosetSpace {
    pub fn new(lattice: &Sublattice) -> Result<CosetSpace> {
        let reps = coset_representatives(lattice)?;
        let pos: std::collections::HashMap<Vec<i64>, usize> = reps
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let mut perms = Vec::with_capacity(reps.len());
        for t in &reps {
            let mut perm = Vec::with_capacity(reps.len());
            for r in &reps {
                let shifted: Vec<i64> = r.iter().zip(t).map(|(a, b)| a + b).collect();
                let reduced = reduce_mod(lattice, &shifted)?;
                perm.push(pos[&reduced]);
            }
            perms.push(perm);
        }
        Ok(CosetSpace {
            lattice: lattice.clone(),
            reps,
            perms,
        })
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.lattice
    }

    pub fn reps(&self) -> &[Vec<i64>] {
        &self.reps
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    /// Does translating `config` by representative `t` leave it unchanged?
    fn translation_fixes(&self, config: &[u8], t: usize) -> bool {
        let perm = &self.perms[t];
        config
            .iter()
            .enumerate()
            .all(|(i, &v)| config[perm[i]] == v)
    }

    /// Configuration translated by representative `t`.
    pub fn translate(&self, config: &[u8], t: usize) -> Vec<u8> {
        let perm = &self.perms[t];
        (0..config.len()).map(|i| config[perm[i]]).collect()
    }
}

/// Canonical transversal of `Z^d / L`: vectors with `v[i]` in
/// `[0, H[i][i])`, obtained by triangular reduction. Row-major order.
pub fn coset_representatives(l: &Sublattice) -> Result<Vec<Vec<i64>>> {
    let idx = l
        .index_u64()
        .ok_or_else(|| Error::CapExceeded("transversal needs a machine-size index".into()))?;
    let d = l.dim();
    let mut reps = Vec::with_capacity(idx as usize);
    let mut v = vec![0i64; d];
    loop {
        reps.push(v.clone());
        // Odometer over the box, last coordinate fastest.
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(reps);
            }
            i -= 1;
            v[i] += 1;
            if v[i] < l.entry(i, i) {
                break;
            }
            v[i] = 0;
        }
    }
}

/// Reduces `v` to its unique transversal representative: for each row in
/// turn, subtract the multiple of that generator that brings coordinate `i`
/// into `[0, H[i][i])`. Rows below `i` never disturb coordinates before `i`.
pub fn reduce_mod(l: &Sublattice, v: &[i64]) -> Result<Vec<i64>> {
    if v.len() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: v.len(),
        });
    }
    let mut w = v.to_vec();
    for i in 0..l.dim() {
        let q = w[i].div_euclid(l.entry(i, i));
        if q != 0 {
            for (j, wj) in w.iter_mut().enumerate().skip(i) {
                *wj -= q * l.entry(i, j);
            }
        }
    }
    Ok(w)
}

/// Exact stabilizer of a configuration on the torus: the sublattice of all
/// translations fixing it. Always contains the period lattice.
pub fn stabilizer(space: &CosetSpace, config: &[u8]) -> Result<Sublattice> {
    if config.len() != space.size() {
        return Err(Error::DimensionMismatch {
            expected: space.size(),
            got: config.len(),
        });
    }
    let l = space.lattice();
    let d = l.dim();
    let mut gens: Vec<i64> = Vec::new();
    for row in 0..d {
        gens.extend_from_slice(l.row(row));
    }
    for t in 0..space.size() {
        if space.translation_fixes(config, t) {
            gens.extend_from_slice(&space.reps()[t]);
        }
    }
    Sublattice::from_generators(d, &gens)
}

fn config_total(symbols: u32, index: u64) -> Result<u64> {
    (symbols as u64)
        .checked_pow(u32::try_from(index).unwrap_or(u32::MAX))
        .filter(|&t| t <= ORACLE_CONFIG_CAP)
        .ok_or_else(|| {
            Error::CapExceeded(format!(
                "oracle enumeration needs {symbols}^{index} <= {ORACLE_CONFIG_CAP} configurations"
            ))
        })
}

/// Orbits with stabilizer exactly `l`, counted by enumerating all
/// configurations on the torus and keeping those no nontrivial translation
/// fixes. The count is divided by the index; each surviving orbit meets the
/// torus in exactly `[L]` configurations.
pub fn orbit_count_oracle(symbols: u32, l: &Sublattice) -> Result<u64> {
    if symbols < 2 {
        return Err(Error::Domain("oracle needs at least two symbols".into()));
    }
    let idx = l
        .index_u64()
        .ok_or_else(|| Error::CapExceeded("oracle needs a machine-size index".into()))?;
    config_total(symbols, idx)?;
    let space = CosetSpace::new(l)?;
    let k = space.size();
    let mut config = vec![0u8; k];
    let mut exact = 0u64;
    loop {
        // Representative 0 is the zero vector; skip it.
        let fixed_by_other = (1..k).any(|t| space.translation_fixes(&config, t));
        if !fixed_by_other {
            exact += 1;
        }
        // Mixed-radix increment, last cell fastest.
        let mut i = k;
        loop {
            if i == 0 {
                if !exact.is_multiple_of(idx) {
                    return Err(Error::Inconsistency(format!(
                        "exact-stabilizer count {exact} not divisible by index {idx}"
                    )));
                }
                return Ok(exact / idx);
            }
            i -= 1;
            config[i] += 1;
            if (config[i] as u32) < symbols {
                break;
            }
            config[i] = 0;
        }
    }
}

/// Orbit-counting function by brute force: sum of oracle counts over all
/// lattices of index up to the horizon.
pub fn pi_oracle(symbols: u32, dim: usize, horizon: usize) -> Result<u64> {
    let mut total = 0u64;
    for n in 1..=horizon {
        for l in enumerate_sublattices(dim, n as u64)? {
            total += orbit_count_oracle(symbols, &l)?;
        }
    }
    Ok(total)
}

/// Mertens orbit sum by brute force.
pub fn mertens_oracle(symbols: u32, dim: usize, horizon: usize) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for n in 1..=horizon {
        let weight = BigInt::from(symbols).pow(n as u32);
        for l in enumerate_sublattices(dim, n as u64)? {
            let count = orbit_count_oracle(symbols, &l)?;
            total += BigRational::new(BigInt::from(count), weight.clone());
        }
    }
    Ok(total)
}
