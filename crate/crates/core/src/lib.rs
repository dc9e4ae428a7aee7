//! Exact orbit counting for full shifts on `Z^d` and the discrete Heisenberg
//! group.
//!
//! A full shift with `b` symbols over a group `G` has, for each finite-index
//! subgroup `L <= G`, exactly `b^[G:L]` points fixed by every element of `L`.
//! Closed orbits correspond to subgroups together with an orbit of points
//! whose stabilizer is exactly that subgroup, so counting them reduces to
//! Moebius inversion over the lattice of finite-index subgroups.
//!
//! Everything upstream of presentation is exact: indices and fixed-point
//! counts are big integers, orbit sums and error terms are big rationals.
//! Floating point appears only in diagnostic ratios and rendered decimals.
//!
//! Module map:
//! * [`lattice`]: finite-index sublattices of `Z^d` in row Hermite normal
//!   form; enumeration, containment, superlattices, quotient invariants.
//! * [`moebius`]: the Moebius function of the sublattice poset, as a closed
//!   form on quotient invariants and as the literal recursive definition.
//! * [`growth`]: subgroup growth sequences `a_n` and partial sums for `Z^d`
//!   and the Heisenberg group, with bound checks and Mertens main terms.
//! * [`shiftorbits`]: orbit counts, the orbit-counting function, Mertens
//!   orbit sums, and the error-term decompositions for full shifts.
//! * [`oracle`]: independent brute-force recount by enumerating periodic
//!   configurations; shares nothing with the Moebius path.
//! * [`algebraic`]: fixed-point counts for two algebraic systems with
//!   non-shift behavior (a GF(2) kernel system and two solenoid families).
//! * [`checks`]: the consistency suite wired into `check-all` and the
//!   acceptance tests.

pub mod algebraic;
pub mod arith;
pub mod checks;
mod error;
pub mod growth;
pub mod lattice;
pub mod moebius;
pub mod oracle;
pub mod render;
pub mod shiftorbits;

pub use error::{Error, Result};

// The arithmetic types appearing in public signatures, so downstream crates
// need no separate num-* dependency pins.
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
