//! Closed-orbit counting for full shifts via Moebius inversion.
//!
//! For a full shift with `b` symbols over `Z^d`, a sublattice `L` fixes
//! exactly `b^[L]` configurations (`[L]` short for the index). The number
//! of closed orbits whose stabilizer is exactly `L` is
//!
//! ```text
//! O(L) = (1/[L]) * sum over M >= L of mu(M, L) * b^[M]
//! ```
//!
//! and the division is always exact; a remainder would mean the Moebius
//! data is wrong, so it is checked. Orbit totals, the orbit-counting
//! function `pi`, Mertens-style orbit sums, and the two error-term
//! decompositions are all assembled from these per-lattice counts with
//! big-integer and big-rational arithmetic.
//!
//! Heisenberg systems deliberately support only the growth-side main term;
//! orbit-level operations fail loudly instead of guessing.

use crate::growth::{free_abelian_sieve, GroupDescriptor, GroupKind};
use crate::lattice::{enumerate_sublattices, Sublattice};
use crate::moebius::moebius_closed;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Default horizon cap for exact orbit tables; raising it is an explicit
/// caller decision via [`OrbitTable::compute_with_cap`].
pub const DEFAULT_HORIZON_CAP: usize = 120;

/// Exponent cap for `b^[L]`: indices above this would allocate absurd
/// fixed-point counts.
const FIX_EXPONENT_CAP: u64 = 1 << 20;

/// A full shift: `b` symbols indexed by a finitely generated group.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ShiftSystem {
    group: GroupDescriptor,
    symbols: u32,
}

impl ShiftSystem {
    pub fn new(group: GroupDescriptor, symbols: u32) -> Result<ShiftSystem> {
        if symbols < 2 {
            return Err(Error::Domain(format!(
                "a full shift needs at least two symbols, got {symbols}"
            )));
        }
        Ok(ShiftSystem { group, symbols })
    }

    pub fn free_abelian(d: usize, symbols: u32) -> Result<ShiftSystem> {
        ShiftSystem::new(GroupDescriptor::free_abelian(d)?, symbols)
    }

    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn symbols(&self) -> u32 {
        self.symbols
    }

    /// Topological entropy `ln b`.
    pub fn entropy(&self) -> f64 {
        (self.symbols as f64).ln()
    }

    /// Ambient dimension for lattice-level operations; Heisenberg systems
    /// have no sublattice calculus wired up and refuse here.
    fn lattice_dim(&self) -> Result<usize> {
        match self.group.kind() {
            GroupKind::FreeAbelian(d) => Ok(d),
            GroupKind::Heisenberg => Err(Error::Unsupported(
                "orbit-level operations are implemented for free-abelian shifts only; \
                 Heisenberg systems expose just the Mertens main term"
                    .into(),
            )),
        }
    }
}

/// Points fixed by every translation in `L`: exactly `b^[L]`.
pub fn fix_count(sys: &ShiftSystem, l: &Sublattice) -> Result<BigUint> {
    let d = sys.lattice_dim()?;
    if l.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: l.dim(),
        });
    }
    let idx = l
        .index_u64()
        .filter(|&n| n <= FIX_EXPONENT_CAP)
        .ok_or_else(|| {
            Error::CapExceeded(format!(
                "fixed-point count needs index <= {FIX_EXPONENT_CAP}"
            ))
        })?;
    Ok(BigUint::from(sys.symbols).pow(idx as u32))
}

/// Orbit count over the interval above `l`, with the superlattice list
/// supplied by the caller (everything containing `l`, including `l`).
fn orbit_count_from_interval(
    sys: &ShiftSystem,
    l: &Sublattice,
    interval: &[&Sublattice],
) -> Result<BigUint> {
    let idx = l.index_u64().ok_or_else(|| {
        Error::CapExceeded("orbit count needs a machine-size index".into())
    })?;
    let mut acc = BigInt::zero();
    for m in interval {
        let mu = moebius_closed(m, l)?;
        if mu.is_zero() {
            continue;
        }
        let fix = BigInt::from(fix_count(sys, m)?);
        acc += mu * fix;
    }
    let (q, r) = num_integer::Integer::div_rem(&acc, &BigInt::from(idx));
    if !r.is_zero() || q.sign() == Sign::Minus {
        return Err(Error::Inconsistency(format!(
            "orbit sum {acc} at lattice {l} is not a nonnegative multiple of the index {idx}"
        )));
    }
    Ok(q.to_biguint().expect("nonnegative by the check above"))
}

/// Closed orbits with stabilizer exactly `l`, by Moebius inversion over the
/// superlattice interval. The division by the index must be exact.
pub fn orbit_count(sys: &ShiftSystem, l: &Sublattice) -> Result<BigUint> {
    sys.lattice_dim()?;
    let sup = l.superlattices()?;
    let refs: Vec<&Sublattice> = sup.iter().collect();
    orbit_count_from_interval(sys, l, &refs)
}

/// One row of an [`OrbitTable`]: everything known at horizon `n`.
#[derive(Clone, Debug)]
pub struct OrbitRow {
    pub n: u64,
    /// Number of index-`n` sublattices (the growth coefficient `a_n`).
    pub subgroup_count: u64,
    /// Total closed orbits of length exactly `n`.
    pub orbit_total: BigUint,
    /// Cumulative orbit count `pi(n)`.
    pub pi: BigUint,
    /// Cumulative weighted sum `M(n) = sum of orbits / b^length`.
    pub mertens: BigRational,
    /// `pi(n) / b^n`.
    pub phi: BigRational,
    /// `(1/b^n) * sum over m <= n of (a_m / m) b^m`.
    pub psi: BigRational,
}

/// Exact orbit statistics for every horizon `1..=n`.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    system: ShiftSystem,
    rows: Vec<OrbitRow>,
}

impl OrbitTable {
    /// Computes up to `horizon`, refusing anything above
    /// [`DEFAULT_HORIZON_CAP`].
    pub fn compute(sys: &ShiftSystem, horizon: usize) -> Result<OrbitTable> {
        OrbitTable::compute_with_cap(sys, horizon, DEFAULT_HORIZON_CAP)
    }

    /// Computes up to `horizon` under an explicit cap.
    pub fn compute_with_cap(sys: &ShiftSystem, horizon: usize, cap: usize) -> Result<OrbitTable> {
        if horizon == 0 {
            return Err(Error::Domain("horizon must be positive".into()));
        }
        if horizon > cap {
            return Err(Error::CapExceeded(format!(
                "orbit horizon {horizon} exceeds the cap {cap}"
            )));
        }
        let d = sys.lattice_dim()?;
        let by_index = enumerate_all(d, horizon)?;
        let b_pow = symbol_powers(sys.symbols, horizon);

        let mut rows = Vec::with_capacity(horizon);
        let mut pi = BigUint::zero();
        let mut mertens = BigRational::zero();
        let mut main_sum = BigRational::zero(); // sum (a_m / m) b^m
        for n in 1..=horizon {
            let lattices = &by_index[n];
            // Per-lattice counts are independent; keep lattice order for
            // deterministic error selection and summation.
            let counts: Vec<BigUint> = lattices
                .par_iter()
                .map(|l| {
                    let interval = superlattices_cached(l, &by_index)?;
                    orbit_count_from_interval(sys, l, &interval)
                })
                .collect::<Result<_>>()?;
            let orbit_total: BigUint = counts.iter().sum();
            pi += &orbit_total;
            mertens += BigRational::new(
                BigInt::from(orbit_total.clone()),
                BigInt::from(b_pow[n].clone()),
            );
            main_sum += BigRational::new(
                BigInt::from(lattices.len() as u64) * BigInt::from(b_pow[n].clone()),
                BigInt::from(n as u64),
            );
            let bn = BigRational::from(BigInt::from(b_pow[n].clone()));
            rows.push(OrbitRow {
                n: n as u64,
                subgroup_count: lattices.len() as u64,
                orbit_total,
                pi: pi.clone(),
                mertens: mertens.clone(),
                phi: BigRational::from(BigInt::from(pi.clone())) / bn.clone(),
                psi: main_sum.clone() / bn,
            });
        }
        Ok(OrbitTable {
            system: *sys,
            rows,
        })
    }

    pub fn system(&self) -> ShiftSystem {
        self.system
    }

    pub fn rows(&self) -> &[OrbitRow] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &OrbitRow {
        &self.rows[n - 1]
    }
}

/// Orbit-counting function `pi(n)`: closed orbits of length at most `n`.
pub fn closed_orbit_total(sys: &ShiftSystem, horizon: usize) -> Result<BigUint> {
    Ok(OrbitTable::compute(sys, horizon)?.row(horizon).pi.clone())
}

/// Mertens orbit sum `M(n) = sum over orbits of length <= n of b^-length`.
pub fn mertens_orbit_sum(sys: &ShiftSystem, horizon: usize) -> Result<BigRational> {
    Ok(OrbitTable::compute(sys, horizon)?
        .row(horizon)
        .mertens
        .clone())
}

/// The two exact error terms at horizon `N`.
#[derive(Clone, Debug)]
pub struct ErrorTerms {
    /// `Sigma_N / b^N`: the gap `(pi(N) - sum (a_n/n) b^n) / b^N`.
    pub sigma_over_bn: BigRational,
    /// `Delta_N = M(N) - sum a_n/n`.
    pub delta: BigRational,
}

/// Computes both error terms directly from per-lattice Moebius data, then
/// cross-checks them against the difference identities they must satisfy.
pub fn error_terms(sys: &ShiftSystem, horizon: usize) -> Result<ErrorTerms> {
    let d = sys.lattice_dim()?;
    let table = OrbitTable::compute(sys, horizon)?;
    let by_index = enumerate_all(d, horizon)?;
    let b_pow = symbol_powers(sys.symbols, horizon);

    let mut sigma = BigRational::zero();
    let mut delta = BigRational::zero();
    for n in 1..=horizon {
        let inners: Vec<BigInt> = by_index[n]
            .par_iter()
            .map(|l| {
                // Strict superlattice part of the inversion sum.
                let interval = superlattices_cached(l, &by_index)?;
                let mut inner = BigInt::zero();
                for m in interval {
                    if m == l {
                        continue;
                    }
                    let mu = moebius_closed(m, l)?;
                    if mu.is_zero() {
                        continue;
                    }
                    inner += mu * BigInt::from(fix_count(sys, m)?);
                }
                Ok(inner)
            })
            .collect::<Result<_>>()?;
        let inner_total: BigInt = inners.into_iter().sum();
        sigma += BigRational::new(inner_total.clone(), BigInt::from(n as u64));
        delta += BigRational::new(
            inner_total,
            BigInt::from(n as u64) * BigInt::from(b_pow[n].clone()),
        );
    }

    // Identity 1: pi(N) = sum (a_n/n) b^n + Sigma_N.
    let seq = free_abelian_sieve(d, horizon)?;
    let mut main_pi = BigRational::zero();
    let mut main_mertens = BigRational::zero();
    for (n, bp) in b_pow.iter().enumerate().take(horizon + 1).skip(1) {
        main_pi += BigRational::new(seq.a(n) * BigInt::from(bp.clone()), BigInt::from(n as u64));
        main_mertens += BigRational::new(seq.a(n).clone(), BigInt::from(n as u64));
    }
    let pi_exact = BigRational::from(BigInt::from(table.row(horizon).pi.clone()));
    if pi_exact.clone() - main_pi != sigma {
        return Err(Error::Inconsistency(
            "orbit-count decomposition identity failed".into(),
        ));
    }
    // Identity 2: M(N) = sum a_n/n + Delta_N.
    if table.row(horizon).mertens.clone() - main_mertens != delta {
        return Err(Error::Inconsistency(
            "Mertens decomposition identity failed".into(),
        ));
    }

    let bn = BigRational::from(BigInt::from(b_pow[horizon].clone()));
    Ok(ErrorTerms {
        sigma_over_bn: sigma / bn,
        delta,
    })
}

/// One comparison row for the orbit-density figure.
#[derive(Clone, Debug)]
pub struct FigureRow {
    pub n: u64,
    pub phi: BigRational,
    pub psi: BigRational,
}

/// The `(n, phi, psi)` series up to `horizon`: normalized orbit counts
/// against the growth-only main term, both exact.
pub fn figure_series(sys: &ShiftSystem, horizon: usize) -> Result<Vec<FigureRow>> {
    let table = OrbitTable::compute(sys, horizon)?;
    Ok(table
        .rows()
        .iter()
        .map(|r| FigureRow {
            n: r.n,
            phi: r.phi.clone(),
            psi: r.psi.clone(),
        })
        .collect())
}

fn enumerate_all(d: usize, horizon: usize) -> Result<Vec<Vec<Sublattice>>> {
    let mut by_index = Vec::with_capacity(horizon + 1);
    by_index.push(Vec::new()); // index 0 unused
    for n in 1..=horizon {
        by_index.push(enumerate_sublattices(d, n as u64)?);
    }
    Ok(by_index)
}

fn symbol_powers(b: u32, horizon: usize) -> Vec<BigUint> {
    let mut pows = Vec::with_capacity(horizon + 1);
    pows.push(BigUint::one());
    for n in 1..=horizon {
        pows.push(&pows[n - 1] * BigUint::from(b));
    }
    pows
}

/// Superlattices of `l` pulled from precomputed enumerations by index.
fn superlattices_cached<'a>(
    l: &Sublattice,
    by_index: &'a [Vec<Sublattice>],
) -> Result<Vec<&'a Sublattice>> {
    let n = l
        .index_u64()
        .ok_or_else(|| Error::CapExceeded("index exceeds 64-bit range".into()))?;
    let mut out = Vec::new();
    for m in crate::arith::divisors(n) {
        for cand in &by_index[m as usize] {
            if cand.contains(l)? {
                out.push(cand);
            }
        }
    }
    Ok(out)
}
