//! Locale-independent number formatting for CSV artifacts.

/// Formats `x` with 6 significant digits in the style of C's `%.6g`:
/// fixed notation for exponents in [-4, 6), scientific otherwise, trailing
/// zeros trimmed. Non-finite values print as `nan`, `inf`, `-inf`.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round once in scientific form so the exponent reflects the rounding.
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let mantissa = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Formats an optional value, rendering `None` as `-`.
pub fn sig6_or_dash(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), sig6)
}

#[cfg(test)]
mod tests {
    use super::sig6;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (35.9, "35.9"),
            (683.6, "683.6"),
            (1.0 / 3.0, "0.333333"),
            (123456.7, "123457"),
            (999999.5, "1e+06"),
            (1234567.0, "1.23457e+06"),
            (0.0001234567, "0.000123457"),
            (0.00001234567, "1.23457e-05"),
            (2883.2, "2883.2"),
        ];
        for (x, s) in cases {
            assert_eq!(sig6(x), s, "{x}");
        }
    }
}
