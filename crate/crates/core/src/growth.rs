//! Subgroup growth sequences and their partial sums.
//!
//! For `Z^d` the count `a_n` of index-`n` subgroups satisfies the Dirichlet
//! recursion `a_n(Z^d) = sum over k | n of a_{n/k}(Z^{d-1}) k^{d-1}`, so the
//! whole sequence up to a horizon comes from `d - 1` divisor-convolution
//! sieve passes. For the discrete Heisenberg group the Dirichlet series
//! factors as
//!
//! ```text
//! zeta(z) zeta(z-1) zeta(2z-2) zeta(2z-3) / zeta(3z-3)
//! ```
//!
//! and the sequence is the five-way Dirichlet convolution of the coefficient
//! sequences of those factors (the last three are supported on squares,
//! squares, and cubes respectively).
//!
//! Sieve passes run in checked `i128`; a value that would leave that range
//! is reported as a cap error rather than silently truncated. Results are
//! exposed as big integers.

use crate::arith::classical_mobius;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact Mertens main-term summation refuses horizons above this; the
/// reduced fractions grow like lcm(1..N) and stop being useful to print.
pub const MERTENS_EXACT_CAP: usize = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupKind {
    FreeAbelian(usize),
    Heisenberg,
}

/// A group together with the exponents governing its subgroup growth.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GroupDescriptor {
    kind: GroupKind,
}

impl GroupDescriptor {
    pub fn free_abelian(d: usize) -> Result<GroupDescriptor> {
        if d == 0 {
            return Err(Error::Domain("rank must be positive".into()));
        }
        Ok(GroupDescriptor {
            kind: GroupKind::FreeAbelian(d),
        })
    }

    pub fn heisenberg() -> GroupDescriptor {
        GroupDescriptor {
            kind: GroupKind::Heisenberg,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Maximal generator count over finite-index subgroups.
    pub fn rank(&self) -> u32 {
        match self.kind {
            GroupKind::FreeAbelian(d) => d as u32,
            GroupKind::Heisenberg => 3,
        }
    }

    pub fn abelianization_rank(&self) -> u32 {
        match self.kind {
            GroupKind::FreeAbelian(d) => d as u32,
            GroupKind::Heisenberg => 2,
        }
    }

    /// Polynomial degree of the partial-sum growth `s_n`.
    pub fn growth_degree(&self) -> u32 {
        match self.kind {
            GroupKind::FreeAbelian(d) => d as u32,
            GroupKind::Heisenberg => 2,
        }
    }

    /// Exponent of the logarithmic correction in `s_n`.
    pub fn log_exponent(&self) -> u32 {
        match self.kind {
            GroupKind::FreeAbelian(_) => 0,
            GroupKind::Heisenberg => 1,
        }
    }

    /// Parses the CLI spelling: `z:<d>` or `heisenberg`.
    pub fn parse(text: &str) -> Result<GroupDescriptor> {
        if text == "heisenberg" {
            return Ok(GroupDescriptor::heisenberg());
        }
        if let Some(d) = text.strip_prefix("z:") {
            let d: usize = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad rank in group {text:?}")))?;
            return GroupDescriptor::free_abelian(d);
        }
        Err(Error::Parse(format!(
            "unknown group {text:?}; expected z:<d> or heisenberg"
        )))
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::FreeAbelian(d) => write!(f, "z:{d}"),
            GroupKind::Heisenberg => write!(f, "heisenberg"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SieveMethod {
    FreeAbelianConvolution,
    HeisenbergEulerFactors,
}

/// Subgroup counts `a_1..a_horizon` and partial sums for one group.
#[derive(Clone, Debug)]
pub struct GrowthSequence {
    group: GroupDescriptor,
    method: SieveMethod,
    a: Vec<BigInt>, // a[0] unused
    s: Vec<BigInt>, // s[n] = a[1] + ... + a[n]
}

impl GrowthSequence {
    fn from_machine(group: GroupDescriptor, method: SieveMethod, vals: &[i128]) -> Result<Self> {
        let horizon = vals.len() - 1;
        let mut a = Vec::with_capacity(horizon + 1);
        let mut s = Vec::with_capacity(horizon + 1);
        a.push(BigInt::zero());
        s.push(BigInt::zero());
        let mut run: i128 = 0;
        for &v in &vals[1..] {
            run = run
                .checked_add(v)
                .ok_or_else(|| Error::CapExceeded("partial sum exceeds exact range".into()))?;
            a.push(BigInt::from(v));
            s.push(BigInt::from(run));
        }
        Ok(GrowthSequence {
            group,
            method,
            a,
            s,
        })
    }

    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn method(&self) -> SieveMethod {
        self.method
    }

    pub fn horizon(&self) -> usize {
        self.a.len() - 1
    }

    /// Subgroup count at index `n` (1-based, `n <= horizon`).
    pub fn a(&self, n: usize) -> &BigInt {
        &self.a[n]
    }

    /// Partial sum `s_n = a_1 + ... + a_n`.
    pub fn partial_sum(&self, n: usize) -> &BigInt {
        &self.s[n]
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be positive".into()));
    }
    Ok(())
}

fn mul_overflow() -> Error {
    Error::CapExceeded("sieve value exceeds exact i128 range".into())
}

/// Dirichlet convolution of `a` with the full-support weight `k^e`.
fn convolve_power(a: &[i128], e: u32) -> Result<Vec<i128>> {
    let n = a.len() - 1;
    let mut out = vec![0i128; n + 1];
    for k in 1..=n {
        let w = (k as i128).checked_pow(e).ok_or_else(mul_overflow)?;
        for m in 1..=n / k {
            let term = a[m].checked_mul(w).ok_or_else(mul_overflow)?;
            out[k * m] = out[k * m].checked_add(term).ok_or_else(mul_overflow)?;
        }
    }
    Ok(out)
}

/// Dirichlet convolution with a sequence supported on `power`-th powers:
/// position `m^power` carries weight `m^wexp` times `sign(m)`.
fn convolve_sparse(
    a: &[i128],
    power: u32,
    wexp: u32,
    sign: impl Fn(u64) -> i128,
) -> Result<Vec<i128>> {
    let n = a.len() - 1;
    let mut out = a.to_vec(); // m = 1 term
    let mut m: u64 = 2;
    loop {
        let pos = (m as i128).checked_pow(power).ok_or_else(mul_overflow)?;
        if pos > n as i128 {
            break;
        }
        let pos = pos as usize;
        let s = sign(m);
        if s != 0 {
            let w = (m as i128)
                .checked_pow(wexp)
                .ok_or_else(mul_overflow)?
                .checked_mul(s)
                .ok_or_else(mul_overflow)?;
            for j in 1..=n / pos {
                let term = a[j].checked_mul(w).ok_or_else(mul_overflow)?;
                out[j * pos] = out[j * pos].checked_add(term).ok_or_else(mul_overflow)?;
            }
        }
        m += 1;
    }
    Ok(out)
}

/// Subgroup growth of `Z^d` up to `horizon` by iterated divisor-sum sieve,
/// one convolution per rank step.
pub fn free_abelian_sieve(d: usize, horizon: usize) -> Result<GrowthSequence> {
    let group = GroupDescriptor::free_abelian(d)?;
    check_horizon(horizon)?;
    let mut vals = vec![1i128; horizon + 1];
    vals[0] = 0;
    for step in 1..d {
        vals = convolve_power(&vals, step as u32)?;
    }
    GrowthSequence::from_machine(group, SieveMethod::FreeAbelianConvolution, &vals)
}

/// Subgroup growth of the discrete Heisenberg group up to `horizon` from
/// the five zeta factors of its subgroup zeta function.
pub fn heisenberg_sieve(horizon: usize) -> Result<GrowthSequence> {
    check_horizon(horizon)?;
    // zeta(z): all ones.
    let mut vals = vec![1i128; horizon + 1];
    vals[0] = 0;
    // zeta(z-1): weight k at position k.
    vals = convolve_power(&vals, 1)?;
    // zeta(2z-2): weight m^2 at position m^2.
    vals = convolve_sparse(&vals, 2, 2, |_| 1)?;
    // zeta(2z-3): weight m^3 at position m^2.
    vals = convolve_sparse(&vals, 2, 3, |_| 1)?;
    // 1/zeta(3z-3): weight mu(m) m^3 at position m^3.
    vals = convolve_sparse(&vals, 3, 3, |m| classical_mobius(m) as i128)?;
    GrowthSequence::from_machine(
        GroupDescriptor::heisenberg(),
        SieveMethod::HeisenbergEulerFactors,
    &vals)
}

/// One violated growth bound.
#[derive(Clone, Debug)]
pub struct BoundViolation {
    pub n: usize,
    pub description: String,
}

/// Outcome of [`check_bounds`]; empty `violations` means every bound held.
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub checked_through: usize,
    pub violations: Vec<BoundViolation>,
}

impl BoundsReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the growth bounds over the whole sequence:
///
/// * `n^(dab - 1) <= a_n` for all `n`, where `dab` is the abelianization
///   rank (subgroups of the abelianization pull back);
/// * `a_n(Z^d) <= 3^d n^(d-1) (ln n)^(d-1)` for `n >= 2`;
/// * `a_n < n^rank` for `n >= 2`.
pub fn check_bounds(seq: &GrowthSequence) -> BoundsReport {
    let mut violations = Vec::new();
    let dab = seq.group().abelianization_rank();
    let rank = seq.group().rank();
    let log_upper_rank = match seq.group().kind() {
        GroupKind::FreeAbelian(d) => Some(d),
        GroupKind::Heisenberg => None,
    };
    for n in 1..=seq.horizon() {
        let a_n = seq.a(n);
        let lower = BigInt::from(n).pow(dab - 1);
        if *a_n < lower {
            violations.push(BoundViolation {
                n,
                description: format!("a_{n} = {a_n} below the lower bound {lower}"),
            });
        }
        if n >= 2 {
            let upper = BigInt::from(n).pow(rank);
            if *a_n >= upper {
                violations.push(BoundViolation {
                    n,
                    description: format!("a_{n} = {a_n} reaches the rank bound {upper}"),
                });
            }
            if let Some(d) = log_upper_rank {
                let a_f = a_n.to_f64().unwrap_or(f64::INFINITY);
                let nf = n as f64;
                let bound = 3f64.powi(d as i32) * nf.powi(d as i32 - 1) * nf.ln().powi(d as i32 - 1);
                if a_f > bound {
                    violations.push(BoundViolation {
                        n,
                        description: format!(
                            "a_{n} = {a_n} above the logarithmic upper bound {bound:.3}"
                        ),
                    });
                }
            }
        }
    }
    BoundsReport {
        checked_through: seq.horizon(),
        violations,
    }
}

/// Exact Mertens main term `sum over n <= horizon of a_n / n` as a reduced
/// fraction. Refuses horizons above [`MERTENS_EXACT_CAP`].
pub fn mertens_main_term_exact(seq: &GrowthSequence, horizon: usize) -> Result<BigRational> {
    if horizon == 0 || horizon > seq.horizon() {
        return Err(Error::Domain(format!(
            "main-term horizon {horizon} outside computed range 1..={}",
            seq.horizon()
        )));
    }
    if horizon > MERTENS_EXACT_CAP {
        return Err(Error::CapExceeded(format!(
            "exact main term capped at horizon {MERTENS_EXACT_CAP}, use the float mode beyond"
        )));
    }
    let mut acc = BigRational::zero();
    for n in 1..=horizon {
        acc += BigRational::new(seq.a(n).clone(), BigInt::from(n));
    }
    Ok(acc)
}

/// Float Mertens main term with Neumaier-compensated summation; usable at
/// any computed horizon.
pub fn mertens_main_term_float(seq: &GrowthSequence, horizon: usize) -> Result<f64> {
    if horizon == 0 || horizon > seq.horizon() {
        return Err(Error::Domain(format!(
            "main-term horizon {horizon} outside computed range 1..={}",
            seq.horizon()
        )));
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=horizon {
        let term = seq.a(n).to_f64().unwrap_or(f64::INFINITY) / n as f64;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}

/// Exact two-sided data for the partial-summation estimate
/// `sum over n <= N of n^e b^n  vs  (b/(b-1)) N^e b^N`:
/// returns `(gap, unit)` where `gap = |sum - main|` and `unit = N^{e-1} b^N`,
/// so callers can assert `gap <= C * unit` for an explicit constant.
pub fn partial_summation_gap(e: u32, b: u32, horizon: usize) -> Result<(BigRational, BigRational)> {
    if e < 1 || b < 2 || horizon < 1 {
        return Err(Error::Domain(format!(
            "partial summation needs e >= 1, b >= 2, N >= 1; got e={e}, b={b}, N={horizon}"
        )));
    }
    let big_b = BigInt::from(b);
    let mut b_pow = BigInt::one();
    let mut sum = BigInt::zero();
    for n in 1..=horizon {
        b_pow *= &big_b;
        sum += BigInt::from(n).pow(e) * &b_pow;
    }
    // b_pow is now b^N.
    let n_big = BigInt::from(horizon);
    let main = BigRational::new(
        &big_b * n_big.pow(e) * &b_pow,
        &big_b - BigInt::one(),
    );
    let gap = (BigRational::from(sum) - main).abs();
    let unit = BigRational::from(n_big.pow(e - 1) * b_pow);
    Ok((gap, unit))
}

/// Normalized partial sum `s_n / (n^gamma (ln n)^delta)` with the group's
/// growth exponents; defined for `n >= 2`.
pub fn asymptotic_ratio(seq: &GrowthSequence, n: usize) -> Result<f64> {
    if n < 2 || n > seq.horizon() {
        return Err(Error::Domain(format!(
            "asymptotic ratio needs 2 <= n <= {}, got {n}",
            seq.horizon()
        )));
    }
    let gamma = seq.group().growth_degree();
    let delta = seq.group().log_exponent();
    let s = seq.partial_sum(n).to_f64().unwrap_or(f64::INFINITY);
    let nf = n as f64;
    Ok(s / (nf.powi(gamma as i32) * nf.ln().powi(delta as i32)))
}
