//! Bundled reference data.

/// Survival times (days) of 72 guinea pigs injected with tubercle bacilli
/// (Bjerkedal, 1960), in the published order.
pub const GUINEA_PIGS: [f64; 72] = [
    12.0, 15.0, 22.0, 24.0, 24.0, 32.0, 32.0, 33.0, 34.0, 38.0, 38.0, 43.0, 44.0, 48.0, 52.0, 53.0,
    54.0, 54.0, 55.0, 56.0, 57.0, 58.0, 58.0, 59.0, 60.0, 60.0, 60.0, 60.0, 61.0, 62.0, 63.0, 65.0,
    65.0, 67.0, 68.0, 70.0, 70.0, 72.0, 73.0, 75.0, 76.0, 76.0, 81.0, 83.0, 84.0, 85.0, 87.0, 91.0,
    95.0, 96.0, 98.0, 99.0, 109.0, 110.0, 121.0, 127.0, 129.0, 131.0, 143.0, 146.0, 146.0, 175.0,
    175.0, 211.0, 233.0, 258.0, 258.0, 263.0, 297.0, 341.0, 341.0, 376.0,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guinea_shape() {
        assert_eq!(GUINEA_PIGS.len(), 72);
        assert_eq!(GUINEA_PIGS[0], 12.0);
        assert_eq!(GUINEA_PIGS[71], 376.0);
        assert!(GUINEA_PIGS.windows(2).all(|w| w[0] <= w[1]));
    }
}
