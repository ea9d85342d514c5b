//! Locale-independent number formatting.

/// `x` with 12 significant digits in plain decimal notation.
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}

pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round in scientific form first so the exponent reflects carries.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(0.4), "0.400000000000");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(0.890625), "0.890625000000");
        assert_eq!(sig12(11.0 / 35.0), "0.314285714286");
        assert_eq!(sig12(0.0123456789012345), "0.0123456789012");
        assert_eq!(sig12(-0.5), "-0.500000000000");
        assert_eq!(sig12(0.99999999999999), "1.00000000000");
    }
}
