//! Number formatting shared by every CSV writer.

/// Formats `v` with 15 significant digits: plain decimal for moderate
/// magnitudes, scientific notation otherwise.
pub fn sig15(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // Rounding can carry into a new leading digit; fall back when it does.
        let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
        if digits.trim_start_matches('0').len() <= 15 {
            return s;
        }
        let decimals = decimals.saturating_sub(1);
        return format!("{v:.decimals$}");
    }
    format!("{v:.14e}")
}
