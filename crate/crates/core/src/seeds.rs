//! Seed profiles for localized initial data.

/// Smooth compactly supported bump: exp(-1/(1 - (r/radius)^2)) inside,
/// exactly zero outside. Any tail a projected state grows from this seed is
/// attributable to the projection, not to the seed.
pub fn bump(r: f64, radius: f64) -> f64 {
    let x = r / radius;
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

pub fn gaussian(r: f64, width: f64) -> f64 {
    (-r * r / (2.0 * width * width)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_compact_and_smoothly_peaked() {
        assert_eq!(bump(1.0, 1.0), 0.0);
        assert_eq!(bump(2.5, 1.0), 0.0);
        assert!(bump(0.0, 1.0) > bump(0.9, 1.0));
        assert!(bump(0.999, 1.0) > 0.0);
    }
}
