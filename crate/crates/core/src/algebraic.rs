//! Fixed-point counts for two algebraic Z^2-actions whose periodic-point
//! behavior depends on lattice shape, not just index.
//!
//! The first is the binary system cut out by the three-term relation
//! `x(v) + x(v + e1) + x(v + e2) = 0` over the two-element field: its
//! L-periodic points form the kernel of the operator `1 + U + V` acting on
//! functions on the torus `Z^2 / L`, so the count is a power of two computed
//! by elimination. The second is the doubling-with-shift solenoid, exposed
//! only through its two published lattice families with closed-form counts.

use crate::lattice::Sublattice;
use crate::oracle::{coset_representatives, reduce_mod};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use std::collections::HashMap;
use std::fmt;

/// Elimination works on an index x index bit matrix; this keeps it at a few
/// megabytes and a couple of seconds.
pub const LEDRAPPIER_INDEX_CAP: u64 = 8192;

/// Guards the solenoid closed forms against absurd exponents.
pub const SOLENOID_N_CAP: u64 = 1 << 20;

/// Kernel data for the three-term relation on one torus.
#[derive(Clone, Debug)]
pub struct LedrappierReport {
    pub lattice: Sublattice,
    pub index: u64,
    pub kernel_dim: u32,
    /// Always `2^kernel_dim`; at least 1 (the zero configuration).
    pub fix_count: BigUint,
}

/// Counts L-periodic points of the three-term-relation system by computing
/// the kernel dimension of `1 + U + V` on the torus `Z^2 / L` over GF(2).
pub fn ledrappier_fix(l: &Sublattice) -> Result<LedrappierReport> {
    if l.dim() != 2 {
        return Err(Error::Unsupported(
            "the three-term relation is a Z^2 system".into(),
        ));
    }
    let idx = l
        .index_u64()
        .filter(|&n| n <= LEDRAPPIER_INDEX_CAP)
        .ok_or_else(|| {
            Error::CapExceeded(format!(
                "kernel elimination capped at index {LEDRAPPIER_INDEX_CAP}"
            ))
        })?;
    let reps = coset_representatives(l)?;
    let pos: HashMap<Vec<i64>, usize> = reps
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), i))
        .collect();
    let shift_perm = |dx: i64, dy: i64| -> Result<Vec<usize>> {
        reps.iter()
            .map(|r| Ok(pos[&reduce_mod(l, &[r[0] + dx, r[1] + dy])?]))
            .collect()
    };
    let p1 = shift_perm(1, 0)?;
    let p2 = shift_perm(0, 1)?;

    let k = idx as usize;
    let words = k.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = vec![0u64; words];
        // XOR toggling folds coincident shifts (e.g. a generator lying in L)
        // into the correct GF(2) coefficient.
        for &c in &[i, p1[i], p2[i]] {
            row[c >> 6] ^= 1u64 << (c & 63);
        }
        rows.push(row);
    }
    let rank = gf2_rank(&mut rows, k);
    let kernel_dim = (k - rank) as u32;
    Ok(LedrappierReport {
        lattice: l.clone(),
        index: idx,
        kernel_dim,
        fix_count: BigUint::one() << kernel_dim,
    })
}

/// Row-echelon rank over GF(2); rows are bitsets of `cols` columns.
fn gf2_rank(rows: &mut [Vec<u64>], cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let w = col >> 6;
        let bit = 1u64 << (col & 63);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for r in tail.iter_mut() {
            if r[w] & bit != 0 {
                // Columns before `col` are already clear below the pivot.
                for (a, b) in r[w..].iter_mut().zip(&prow[w..]) {
                    *a ^= *b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The two published lattice families of the doubling-with-shift solenoid.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolenoidFamily {
    /// Lattice `(n,0), (0,1)`.
    Horizontal,
    /// Lattice `(1,0), (0,n)`.
    Vertical,
}

impl SolenoidFamily {
    pub fn parse(text: &str) -> Result<SolenoidFamily> {
        match text {
            "horizontal" => Ok(SolenoidFamily::Horizontal),
            "vertical" => Ok(SolenoidFamily::Vertical),
            other => Err(Error::Parse(format!(
                "unknown solenoid family {other:?}; expected horizontal or vertical"
            ))),
        }
    }
}

impl fmt::Display for SolenoidFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolenoidFamily::Horizontal => write!(f, "horizontal"),
            SolenoidFamily::Vertical => write!(f, "vertical"),
        }
    }
}

/// The lattice a solenoid family member lives on; both have index `n`.
pub fn solenoid_lattice(family: SolenoidFamily, n: u64) -> Result<Sublattice> {
    validate_solenoid_n(n)?;
    let n = n as i64;
    match family {
        SolenoidFamily::Horizontal => Sublattice::from_generators(2, &[n, 0, 0, 1]),
        SolenoidFamily::Vertical => Sublattice::from_generators(2, &[1, 0, 0, n]),
    }
}

/// Periodic-point counts for the solenoid families: `2^n - 1` along the
/// horizontal family, `1` along the vertical one. Only these two published
/// closed forms are implemented; there is no general-lattice evaluation.
pub fn solenoid_fix(family: SolenoidFamily, n: u64) -> Result<BigUint> {
    validate_solenoid_n(n)?;
    match family {
        SolenoidFamily::Horizontal => Ok((BigUint::one() << n) - BigUint::one()),
        SolenoidFamily::Vertical => Ok(BigUint::one()),
    }
}

fn validate_solenoid_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("solenoid parameter must be positive".into()));
    }
    if n > SOLENOID_N_CAP {
        return Err(Error::CapExceeded(format!(
            "solenoid parameter capped at {SOLENOID_N_CAP}"
        )));
    }
    Ok(())
}
