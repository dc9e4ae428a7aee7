//! Finite-index sublattices of `Z^d` in canonical Hermite normal form.
//!
//! A sublattice is stored as a `d x d` integer matrix whose *rows* generate
//! it. The canonical form is upper triangular with positive diagonal and
//! every entry above a diagonal reduced modulo that column's diagonal:
//!
//! * `h[i][j] = 0` for `i > j`
//! * `h[i][i] >= 1`
//! * `0 <= h[i][j] < h[j][j]` for `i < j`
//!
//! Each finite-index sublattice has exactly one such matrix, so structural
//! equality on `Sublattice` is lattice equality and the derived ordering is
//! a stable canonical order. The index equals the diagonal product.

use crate::arith::divisors;
use crate::{Error, Result};
use num_bigint::BigUint;
use std::fmt;

/// A finite-index sublattice of `Z^d`, always held in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sublattice {
    dim: usize,
    rows: Vec<i64>, // row-major d*d
}

impl Sublattice {
    /// The full lattice `Z^d` itself.
    pub fn identity(dim: usize) -> Sublattice {
        assert!(dim >= 1, "ambient dimension must be positive");
        let mut rows = vec![0; dim * dim];
        for i in 0..dim {
            rows[i * dim + i] = 1;
        }
        Sublattice { dim, rows }
    }

    /// Builds from a row-major `d x d` matrix that must already be in
    /// canonical form; rejects anything else.
    pub fn from_canonical_rows(dim: usize, rows: Vec<i64>) -> Result<Sublattice> {
        if dim == 0 {
            return Err(Error::Domain("ambient dimension must be positive".into()));
        }
        if rows.len() != dim * dim {
            return Err(Error::Domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                rows.len()
            )));
        }
        let lat = Sublattice { dim, rows };
        lat.check_canonical()?;
        Ok(lat)
    }

    /// Builds from an arbitrary generating set (one generator per row,
    /// `rows.len()` divisible by `dim`), reducing to canonical form. The
    /// generators must span a finite-index subgroup.
    pub fn from_generators(dim: usize, rows: &[i64]) -> Result<Sublattice> {
        if dim == 0 {
            return Err(Error::Domain("ambient dimension must be positive".into()));
        }
        if rows.is_empty() || !rows.len().is_multiple_of(dim) {
            return Err(Error::Domain(format!(
                "generator list length {} is not a positive multiple of {dim}",
                rows.len()
            )));
        }
        let m = rows.len() / dim;
        let wide: Vec<i128> = rows.iter().map(|&x| x as i128).collect();
        hermite_normal_form(&wide, m, dim)
    }

    fn check_canonical(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            if self.entry(i, i) < 1 {
                return Err(Error::NonCanonical(format!(
                    "diagonal entry at row {i} is {}, must be >= 1",
                    self.entry(i, i)
                )));
            }
            for j in 0..i {
                if self.entry(i, j) != 0 {
                    return Err(Error::NonCanonical(format!(
                        "entry ({i},{j}) below the diagonal is nonzero"
                    )));
                }
            }
            for j in i + 1..d {
                let v = self.entry(i, j);
                if v < 0 || v >= self.entry(j, j) {
                    return Err(Error::NonCanonical(format!(
                        "entry ({i},{j}) = {v} is not reduced modulo the column diagonal {}",
                        self.entry(j, j)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i * self.dim + j]
    }

    /// Row-major entries of the canonical matrix.
    pub fn rows(&self) -> &[i64] {
        &self.rows
    }

    /// Generator `i` as a coordinate vector.
    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i * self.dim..(i + 1) * self.dim]
    }

    /// Index `[Z^d : L]`, the diagonal product.
    pub fn index(&self) -> BigUint {
        let mut n = BigUint::from(1u32);
        for i in 0..self.dim {
            n *= BigUint::from(self.entry(i, i) as u64);
        }
        n
    }

    /// Index as a machine integer, if it fits.
    pub fn index_u64(&self) -> Option<u64> {
        let mut n: u64 = 1;
        for i in 0..self.dim {
            n = n.checked_mul(self.entry(i, i) as u64)?;
        }
        Some(n)
    }

    /// True iff `other` is a subgroup of `self`, decided by expressing each
    /// generator of `other` in `self`'s triangular basis.
    pub fn contains(&self, other: &Sublattice) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        for i in 0..self.dim {
            if solve_in_basis(self, other.row(i)).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All lattices `M` with `self <= M <= Z^d`, including both endpoints,
    /// in canonical order. Obtained by filtering the full enumeration at
    /// each index dividing `[Z^d : self]`.
    pub fn superlattices(&self) -> Result<Vec<Sublattice>> {
        let n = self.index_u64().ok_or_else(|| {
            Error::CapExceeded("superlattice enumeration needs a machine-size index".into())
        })?;
        let mut out = Vec::new();
        for m in divisors(n) {
            for cand in enumerate_sublattices(self.dim, m)? {
                if cand.contains(self)? {
                    out.push(cand);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Parses the text form `"2 1; 0 3"` (rows split on `;`, entries on
    /// whitespace). With `canonicalize` set, arbitrary full-rank square
    /// generator matrices are accepted and reduced; otherwise the input must
    /// already be canonical.
    pub fn parse(text: &str, canonicalize: bool) -> Result<Sublattice> {
        let rows_txt: Vec<&str> = text.split(';').collect();
        let dim = rows_txt.len();
        let mut rows = Vec::with_capacity(dim * dim);
        for row in &rows_txt {
            let entries: Vec<i64> = row
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad integer entry {tok:?}")))
                })
                .collect::<Result<_>>()?;
            if entries.len() != dim {
                return Err(Error::Parse(format!(
                    "row {:?} has {} entries, expected {dim} (matrix must be square)",
                    row.trim(),
                    entries.len()
                )));
            }
            rows.extend(entries);
        }
        if canonicalize {
            Sublattice::from_generators(dim, &rows)
        } else {
            Sublattice::from_canonical_rows(dim, rows)
        }
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

/// Solves `x * M = v` over the integers for a canonical `M`; `None` when no
/// integer solution exists. Forward substitution down the triangle.
fn solve_in_basis(m: &Sublattice, v: &[i64]) -> Option<Vec<i128>> {
    let d = m.dim;
    let mut x = vec![0i128; d];
    for j in 0..d {
        let mut acc = v[j] as i128;
        for (i, &xi) in x.iter().enumerate().take(j) {
            acc -= xi * m.entry(i, j) as i128;
        }
        let diag = m.entry(j, j) as i128;
        if acc % diag != 0 {
            return None;
        }
        x[j] = acc / diag;
    }
    Some(x)
}

/// All sublattices of `Z^dim` of index exactly `n`, in canonical order.
///
/// Walks every diagonal tuple with product `n` and every reduced offset
/// choice above the diagonal; by uniqueness of the canonical form this hits
/// each sublattice exactly once.
pub fn enumerate_sublattices(dim: usize, n: u64) -> Result<Vec<Sublattice>> {
    if dim == 0 {
        return Err(Error::Domain("ambient dimension must be positive".into()));
    }
    if n == 0 {
        return Err(Error::Domain("index must be positive".into()));
    }
    let mut out = Vec::new();
    let mut diag = Vec::with_capacity(dim);
    fill_diagonals(dim, n, &mut diag, &mut out);
    out.sort();
    Ok(out)
}

fn fill_diagonals(dim: usize, remaining: u64, diag: &mut Vec<u64>, out: &mut Vec<Sublattice>) {
    if diag.len() == dim {
        if remaining == 1 {
            emit_offsets(dim, diag, out);
        }
        return;
    }
    for h in divisors(remaining) {
        diag.push(h);
        fill_diagonals(dim, remaining / h, diag, out);
        diag.pop();
    }
}

fn emit_offsets(dim: usize, diag: &[u64], out: &mut Vec<Sublattice>) {
    // Slots are the above-diagonal positions; each cycles through the
    // residues modulo its column's diagonal.
    let slots: Vec<(usize, usize)> = (0..dim)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut offsets = vec![0u64; slots.len()];
    loop {
        let mut rows = vec![0i64; dim * dim];
        for i in 0..dim {
            rows[i * dim + i] = diag[i] as i64;
        }
        for (slot, &(i, j)) in slots.iter().enumerate() {
            rows[i * dim + j] = offsets[slot] as i64;
        }
        out.push(Sublattice { dim, rows });
        // Odometer increment over mixed radix (diag of each slot's column).
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            offsets[k] += 1;
            if offsets[k] < diag[slots[k].1] {
                break;
            }
            offsets[k] = 0;
            k += 1;
        }
    }
}

/// Row Hermite normal form of an `m x dim` generator matrix with full
/// column rank; errors when the rows do not span a finite-index subgroup.
fn hermite_normal_form(entries: &[i128], m: usize, dim: usize) -> Result<Sublattice> {
    let mut a = entries.to_vec();
    let at = |a: &Vec<i128>, r: usize, c: usize| a[r * dim + c];

    // Full column rank forces the pivot row of each column to be the column
    // number itself.
    for col in 0..dim {
        let pivot = col;
        // Euclidean elimination below the pivot in this column.
        loop {
            let best = (pivot..m)
                .filter(|&r| at(&a, r, col) != 0)
                .min_by_key(|&r| at(&a, r, col).unsigned_abs());
            let Some(best) = best else {
                return Err(Error::Domain(
                    "generators do not span a finite-index subgroup".into(),
                ));
            };
            if best != pivot {
                for c in 0..dim {
                    a.swap(pivot * dim + c, best * dim + c);
                }
            }
            let mut any_left = false;
            for r in pivot + 1..m {
                if at(&a, r, col) != 0 {
                    let q = at(&a, r, col).div_euclid(at(&a, pivot, col));
                    for c in 0..dim {
                        a[r * dim + c] -= q * at(&a, pivot, c);
                    }
                    if at(&a, r, col) != 0 {
                        any_left = true;
                    }
                }
            }
            if !any_left {
                break;
            }
        }
        if at(&a, pivot, col) < 0 {
            for c in 0..dim {
                a[pivot * dim + c] = -a[pivot * dim + c];
            }
        }
    }

    // Reduce above-diagonal entries; ascending column order keeps earlier
    // columns reduced because row j is zero left of column j.
    for j in 0..dim {
        for i in 0..j {
            let q = at(&a, i, j).div_euclid(at(&a, j, j));
            if q != 0 {
                for c in j..dim {
                    a[i * dim + c] -= q * at(&a, j, c);
                }
            }
        }
    }

    let mut rows = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            let v = at(&a, r, c);
            let small = i64::try_from(v)
                .map_err(|_| Error::CapExceeded("matrix entries exceed 64-bit range".into()))?;
            rows.push(small);
        }
    }
    let lat = Sublattice { dim, rows };
    debug_assert!(lat.check_canonical().is_ok());
    Ok(lat)
}

/// Invariant factors of the finite quotient `M / L` for `L <= M`, each
/// dividing the next, with trivial factors dropped. Empty means `L = M`.
///
/// The generators of `L` are written in `M`'s basis and the resulting
/// square matrix is brought to Smith normal form.
pub fn quotient_invariants(m: &Sublattice, l: &Sublattice) -> Result<Vec<u64>> {
    if m.dim != l.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            got: l.dim,
        });
    }
    let d = m.dim;
    let mut coeffs = Vec::with_capacity(d * d);
    for i in 0..d {
        let x = solve_in_basis(m, l.row(i)).ok_or(Error::NotContained)?;
        coeffs.extend(x);
    }
    let diag = smith_diagonal(coeffs, d);
    let mut factors = Vec::new();
    for v in diag {
        debug_assert!(v > 0, "full-rank quotient matrix cannot be singular");
        if v != 1 {
            let f = u64::try_from(v)
                .map_err(|_| Error::CapExceeded("invariant factor exceeds 64-bit range".into()))?;
            factors.push(f);
        }
    }
    Ok(factors)
}

/// Smith normal form diagonal of a square integer matrix, nonnegative with
/// each entry dividing the next.
fn smith_diagonal(mut a: Vec<i128>, d: usize) -> Vec<i128> {
    for k in 0..d {
        'pivot: loop {
            // Minimal-magnitude nonzero pivot in the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for i in k..d {
                for j in k..d {
                    let v = a[i * d + j];
                    if v != 0
                        && best
                            .is_none_or(|(bi, bj)| v.unsigned_abs() < a[bi * d + bj].unsigned_abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Trailing block is zero; remaining invariant factors are 0.
                break 'pivot;
            };
            if pi != k {
                for c in 0..d {
                    a.swap(k * d + c, pi * d + c);
                }
            }
            if pj != k {
                for r in 0..d {
                    a.swap(r * d + k, r * d + pj);
                }
            }
            let p = a[k * d + k];
            let mut dirty = false;
            for i in k + 1..d {
                if a[i * d + k] != 0 {
                    let q = a[i * d + k].div_euclid(p);
                    if q != 0 {
                        for c in k..d {
                            a[i * d + c] -= q * a[k * d + c];
                        }
                    }
                    if a[i * d + k] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..d {
                if a[k * d + j] != 0 {
                    let q = a[k * d + j].div_euclid(p);
                    if q != 0 {
                        for r in k..d {
                            a[r * d + j] -= q * a[r * d + k];
                        }
                    }
                    if a[k * d + j] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Pivot now alone in its row and column; force divisibility of
            // the trailing block before moving on.
            let p = a[k * d + k];
            for i in k + 1..d {
                for j in k + 1..d {
                    if a[i * d + j] % p != 0 {
                        for c in k..d {
                            a[k * d + c] += a[i * d + c];
                        }
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if a[k * d + k] < 0 {
            a[k * d + k] = -a[k * d + k];
        }
    }
    (0..d).map(|k| a[k * d + k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(text: &str) -> Sublattice {
        Sublattice::parse(text, false).unwrap()
    }

    #[test]
    fn identity_and_index() {
        let full = Sublattice::identity(2);
        assert_eq!(full.index_u64(), Some(1));
        assert_eq!(lat("3 0; 0 1").index_u64(), Some(3));
        assert_eq!(lat("2 1; 0 3").index_u64(), Some(6));
        assert_eq!(
            lat("2 0 0; 0 3 0; 0 0 5").index(),
            BigUint::from(30u32)
        );
    }

    #[test]
    fn enumerate_small() {
        let one = enumerate_sublattices(2, 1).unwrap();
        assert_eq!(one, vec![Sublattice::identity(2)]);

        let two = enumerate_sublattices(2, 2).unwrap();
        assert_eq!(two.len(), 3);
        assert_eq!(two[0], lat("1 0; 0 2"));
        assert_eq!(two[1], lat("1 1; 0 2"));
        assert_eq!(two[2], lat("2 0; 0 1"));

        assert_eq!(enumerate_sublattices(3, 2).unwrap().len(), 7);
    }

    #[test]
    fn enumerate_rejects_degenerate_input() {
        assert!(enumerate_sublattices(0, 4).is_err());
        assert!(enumerate_sublattices(2, 0).is_err());
    }

    #[test]
    fn sublattice_count_is_sigma_in_rank_two() {
        // Number of index-n sublattices of Z^2 equals the divisor sum of n.
        let sigma = |n: u64| divisors(n).iter().sum::<u64>();
        for n in 1..=60 {
            let got = enumerate_sublattices(2, n).unwrap().len() as u64;
            assert_eq!(got, sigma(n), "count mismatch at index {n}");
        }
    }

    #[test]
    fn rank_three_count_satisfies_dirichlet_recursion() {
        // a_n(Z^3) = sum over k | n of a_{n/k}(Z^2) * k^2.
        for n in 1..=24u64 {
            let lhs = enumerate_sublattices(3, n).unwrap().len() as u64;
            let rhs: u64 = divisors(n)
                .iter()
                .map(|&k| enumerate_sublattices(2, n / k).unwrap().len() as u64 * k * k)
                .sum();
            assert_eq!(lhs, rhs, "recursion mismatch at index {n}");
        }
    }

    #[test]
    fn containment_by_back_substitution() {
        let l = lat("2 0; 0 2");
        let m = lat("2 0; 0 1");
        assert!(m.contains(&l).unwrap());
        assert!(!l.contains(&m).unwrap());
        assert!(Sublattice::identity(2).contains(&l).unwrap());
        // Containment needs every generator to resolve, not just the first.
        let skew = lat("1 1; 0 2");
        assert!(!skew.contains(&lat("2 0; 0 1")).unwrap());
        assert!(skew.contains(&lat("2 0; 0 2")).unwrap());

        let err = m.contains(&Sublattice::identity(3));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn superlattice_intervals() {
        let full = Sublattice::identity(2);
        assert_eq!(full.superlattices().unwrap(), vec![full.clone()]);

        // Exponent-two quotient: the five-element interval.
        let sup = lat("2 0; 0 2").superlattices().unwrap();
        assert_eq!(sup.len(), 5);
        assert!(sup.contains(&full));
        assert!(sup.contains(&lat("2 0; 0 2")));
        assert!(sup.contains(&lat("1 0; 0 2")));
        assert!(sup.contains(&lat("1 1; 0 2")));
        assert!(sup.contains(&lat("2 0; 0 1")));

        // Cyclic quotient of order four: a chain of three.
        let chain = lat("4 0; 0 1").superlattices().unwrap();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[0], full);
        assert_eq!(chain[1], lat("2 0; 0 1"));
        assert_eq!(chain[2], lat("4 0; 0 1"));
    }

    #[test]
    fn quotient_invariant_examples() {
        let full = Sublattice::identity(2);
        assert_eq!(quotient_invariants(&full, &full).unwrap(), Vec::<u64>::new());
        assert_eq!(
            quotient_invariants(&full, &lat("2 0; 0 2")).unwrap(),
            vec![2, 2]
        );
        assert_eq!(
            quotient_invariants(&full, &lat("4 0; 0 1")).unwrap(),
            vec![4]
        );
        // Skew index-4 lattice is cyclic, not (2,2).
        assert_eq!(
            quotient_invariants(&full, &lat("2 1; 0 2")).unwrap(),
            vec![4]
        );
        assert_eq!(
            quotient_invariants(&lat("2 0; 0 1"), &lat("4 0; 0 2")).unwrap(),
            vec![2, 2]
        );
        assert!(matches!(
            quotient_invariants(&lat("2 0; 0 2"), &lat("3 0; 0 1")),
            Err(Error::NotContained)
        ));
    }

    #[test]
    fn invariant_product_equals_index_ratio() {
        for n in 1..=12u64 {
            for l in enumerate_sublattices(2, n).unwrap() {
                for m in l.superlattices().unwrap() {
                    let inv = quotient_invariants(&m, &l).unwrap();
                    let prod: u64 = inv.iter().product();
                    assert_eq!(prod, n / m.index_u64().unwrap());
                }
            }
        }
    }

    #[test]
    fn partial_order_axioms_exhaustive() {
        // All sublattices of Z^2 with index <= 12, pairwise.
        let mut all = Vec::new();
        for n in 1..=12 {
            all.extend(enumerate_sublattices(2, n).unwrap());
        }
        for a in &all {
            assert!(a.contains(a).unwrap());
        }
        for a in &all {
            for b in &all {
                let ab = a.contains(b).unwrap();
                let ba = b.contains(a).unwrap();
                if ab && ba {
                    assert_eq!(a, b, "antisymmetry violated");
                }
            }
        }
        // Transitivity via the containment matrix.
        let n = all.len();
        let mut le = vec![false; n * n];
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                le[i * n + j] = a.contains(b).unwrap();
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !le[i * n + j] {
                    continue;
                }
                for k in 0..n {
                    if le[j * n + k] {
                        assert!(le[i * n + k], "transitivity violated");
                    }
                }
            }
        }
    }

    #[test]
    fn canonicalization_from_generators() {
        // Same lattice, different generating sets.
        let a = Sublattice::from_generators(2, &[2, 0, 0, 2, 4, 2]).unwrap();
        assert_eq!(a, lat("2 0; 0 2"));
        let b = Sublattice::from_generators(2, &[2, 1, 1, 1]).unwrap();
        assert_eq!(b, Sublattice::identity(2));
        let c = Sublattice::from_generators(2, &[-2, 1, 0, -2]).unwrap();
        assert_eq!(c.index_u64(), Some(4));
        // Rank-deficient generators are rejected.
        assert!(Sublattice::from_generators(2, &[1, 2, 2, 4]).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["1 0; 0 1", "2 1; 0 3", "4 0 3; 0 2 1; 0 0 5"] {
            let l = Sublattice::parse(text, false).unwrap();
            assert_eq!(l.to_string(), text);
            assert_eq!(Sublattice::parse(&l.to_string(), false).unwrap(), l);
        }
    }

    #[test]
    fn parse_rejects_or_repairs_non_canonical() {
        // Lower-triangular junk is refused without the canonicalize flag...
        assert!(matches!(
            Sublattice::parse("2 0; 1 2", false),
            Err(Error::NonCanonical(_))
        ));
        assert!(matches!(
            Sublattice::parse("1 3; 0 2", false),
            Err(Error::NonCanonical(_))
        ));
        // ...and accepted with it.
        assert_eq!(
            Sublattice::parse("2 0; 1 2", true).unwrap().index_u64(),
            Some(4)
        );
        assert_eq!(
            Sublattice::parse("1 3; 0 2", true).unwrap(),
            lat("1 1; 0 2")
        );
        assert!(Sublattice::parse("1 2; 3", false).is_err());
        assert!(Sublattice::parse("1 x; 0 1", false).is_err());
    }

    #[test]
    fn smith_diagonal_known_matrices() {
        assert_eq!(smith_diagonal(vec![2, 0, 0, 2], 2), vec![2, 2]);
        assert_eq!(smith_diagonal(vec![2, 1, 0, 2], 2), vec![1, 4]);
        assert_eq!(smith_diagonal(vec![6, 4, 2, 8], 2), vec![2, 20]);
        assert_eq!(
            smith_diagonal(vec![2, 0, 0, 0, 3, 0, 0, 0, 5], 3),
            vec![1, 1, 30]
        );
    }
}
