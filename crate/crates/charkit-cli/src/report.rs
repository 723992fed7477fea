//! CSV formatting helpers: comma separator, LF line endings, floats at six
//! significant digits.

/// Format a float with exactly six significant digits (plain notation).
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Median of integer counts as a float (mean of the middle pair for even
/// lengths).
pub fn median(values: &[usize]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig6(0.9), "0.900000");
        assert_eq!(fmt_sig6(1.0), "1.00000");
        assert_eq!(fmt_sig6(41.5), "41.5000");
        assert_eq!(fmt_sig6(0.883333333), "0.883333");
        assert_eq!(fmt_sig6(123456.0), "123456");
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(-0.25), "-0.250000");
    }

    #[test]
    fn median_handles_both_parities() {
        assert_eq!(median(&[3, 1, 2]), 2.0);
        assert_eq!(median(&[4, 1, 2, 3]), 2.5);
        assert_eq!(median(&[7]), 7.0);
    }
}
