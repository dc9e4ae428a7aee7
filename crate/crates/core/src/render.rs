//! Deterministic decimal rendering for exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Renders `r` with exactly `precision` digits after the decimal point,
/// rounding half away from zero. Output is locale-independent and stable.
pub fn decimal_string(r: &BigRational, precision: usize) -> String {
    let scale = BigInt::from(10).pow(precision as u32);
    let den = r.denom(); // normalized positive
    let abs_num = r.numer().abs();
    // floor((2 |num| scale + den) / (2 den)) rounds half away from zero.
    let scaled = (BigInt::from(2) * &abs_num * &scale + den) / (BigInt::from(2) * den);
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let mut out = String::new();
    if r.numer().is_negative() && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if precision > 0 {
        let digits = frac_part.to_string();
        out.push('.');
        for _ in digits.len()..precision {
            out.push('0');
        }
        out.push_str(&digits);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn renders_exactly() {
        assert_eq!(decimal_string(&rat(11, 4), 6), "2.750000");
        assert_eq!(decimal_string(&rat(-3, 4), 3), "-0.750");
        assert_eq!(decimal_string(&rat(1, 3), 8), "0.33333333");
        assert_eq!(decimal_string(&rat(2, 3), 6), "0.666667");
        assert_eq!(decimal_string(&rat(5, 1), 0), "5");
        assert_eq!(decimal_string(&rat(0, 1), 4), "0.0000");
    }

    #[test]
    fn rounds_half_away_from_zero() {
        assert_eq!(decimal_string(&rat(1, 2), 0), "1");
        assert_eq!(decimal_string(&rat(-1, 2), 0), "-1");
        assert_eq!(decimal_string(&rat(25, 1000), 2), "0.03");
        assert_eq!(decimal_string(&rat(-1, 200000000), 6), "0.000000");
    }
}
