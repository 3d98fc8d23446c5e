//! Number formatting shared by the CSV writers.

/// Formats `x` in plain decimal notation with 17 significant digits.
pub fn fmt_sig17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.16}", 0.0);
    }
    let exp = x.abs().log10().floor() as i32;
    let mut decimals = 16 - exp;
    let mut s = format!("{:.*}", decimals.max(0) as usize, x);
    // log10 can be off by one right at powers of ten.
    let digits = s
        .chars()
        .filter(|c| c.is_ascii_digit())
        .skip_while(|&c| c == '0')
        .count();
    if digits > 17 && decimals > 0 {
        decimals -= 1;
        s = format!("{:.*}", decimals.max(0) as usize, x);
    }
    s
}
