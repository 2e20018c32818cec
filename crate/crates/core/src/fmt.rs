//! Number formatting for reports: 12 significant digits, like C's `%.12g`.

/// Formats `x` with 12 significant digits, trimming trailing zeros.
pub fn sig12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first so the exponent reflects carries like 9.9999999999999 -> 10.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let mantissa = trim_zeros(mantissa.to_string());
        format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

/// [`sig12`] parsed back to `f64`, for JSON output.
pub fn round12(x: f64) -> f64 {
    sig12(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-0.0), "0");
        assert_eq!(sig12(2.0), "2");
        assert_eq!(sig12(-3.5), "-3.5");
        assert_eq!(sig12(2.0 - 2f64.sqrt()), "0.585786437627");
        assert_eq!(sig12(2f64.sqrt()), "1.41421356237");
        assert_eq!(sig12(1e-20), "1e-20");
        assert_eq!(sig12(-1.5e-7), "-1.5e-07");
        assert_eq!(sig12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(sig12(0.0001234), "0.0001234");
        assert_eq!(sig12(9.9999999999999), "10");
        assert_eq!(sig12(-1e-17), "-1e-17");
    }

    #[test]
    fn round_trip() {
        assert_eq!(round12(2f64.sqrt()).to_string(), "1.41421356237");
    }
}
