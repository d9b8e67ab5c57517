use alloc::format;
use alloc::string::String;

/// Rounds half away from zero to `decimals` places.
///
/// Values too large to scale into an `i64` are returned unchanged.
pub fn round_half_up(x: f64, decimals: u32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let p = pow10(decimals);
    let scaled = x.abs() * p;
    if scaled >= 9.0e15 {
        return x;
    }
    let floor = scaled as i64 as f64;
    let r = if scaled - floor >= 0.5 {
        floor + 1.0
    } else {
        floor
    };
    let r = r / p;
    if x < 0.0 {
        -r
    } else {
        r
    }
}

/// Formats a score the way human-facing reports show it: half-up at two decimals.
pub fn format_fixed2(x: f64) -> String {
    let r = round_half_up(x, 2);
    // avoid "-0.00"
    if r == 0.0 {
        return String::from("0.00");
    }
    format!("{r:.2}")
}

fn pow10(d: u32) -> f64 {
    let mut p = 1.0;
    for _ in 0..d {
        p *= 10.0;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_up_at_two_decimals() {
        assert_eq!(round_half_up(3.0 / 2.167, 2), 1.38);
        assert_eq!(round_half_up(3.0 / 2.162, 2), 1.39);
        assert_eq!(round_half_up(0.125, 2), 0.13);
        assert_eq!(round_half_up(-0.125, 2), -0.13);
        assert_eq!(round_half_up(2.0, 2), 2.0);
    }

    #[test]
    fn fixed2_formatting() {
        assert_eq!(format_fixed2(1.3844), "1.38");
        assert_eq!(format_fixed2(9.0), "9.00");
        assert_eq!(format_fixed2(-0.001), "0.00");
        assert_eq!(format_fixed2(-1.554), "-1.55");
    }
}
