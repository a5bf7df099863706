//! Deterministic reductions.
//!
//! All norm and integral accumulations in this crate go through pairwise
//! summation so results are reproducible to ~1e-12 independent of how the
//! caller chunks the data.

/// Pairwise sum of a slice. O(n) with O(log n) error growth.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 32;
    if values.len() <= BASE {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(i)` over `0..n` without materializing the slice.
pub fn pairwise_sum_by<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
    fn go<F: Fn(usize) -> f64>(lo: usize, hi: usize, f: &F) -> f64 {
        const BASE: usize = 32;
        if hi - lo <= BASE {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, n, &f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_on_small_input() {
        let v = [1.0, 2.0, 3.5, -0.5];
        assert_eq!(pairwise_sum(&v), 6.0);
    }

    #[test]
    fn order_of_magnitude_cancellation() {
        let mut v = vec![1e16, 1.0, -1e16];
        v.extend(std::iter::repeat_n(1.0, 1000));
        // grouping keeps the small terms alive
        let s = pairwise_sum(&v);
        assert!((s - 1001.0).abs() <= 2.0);
    }

    #[test]
    fn sum_by_agrees_with_slice_sum() {
        let v: Vec<f64> = (0..10_000).map(|i| (i as f64).sin()).collect();
        let a = pairwise_sum(&v);
        let b = pairwise_sum_by(v.len(), |i| v[i]);
        assert_eq!(a, b);
    }
}
