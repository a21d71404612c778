//! Exact two-sample Kolmogorov–Smirnov statistic.

use alloc::vec::Vec;

/// `sup_t |F_a(t) − F_b(t)|` over the empirical CDFs of `a` and `b`.
///
/// Both slices are sorted in place. Returns 0 when either sample is empty.
pub fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_unstable_by(|x, y| x.total_cmp(y));
    b.sort_unstable_by(|x, y| x.total_cmp(y));
    ks_statistic_sorted(a, b)
}

/// As [`ks_statistic`] for inputs already sorted ascending.
pub fn ks_statistic_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len(), b.len());
    if na == 0 || nb == 0 {
        return 0.0;
    }
    let (fa, fb) = (na as f64, nb as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < na && j < nb {
        let v = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < na && a[i] <= v {
            i += 1;
        }
        while j < nb && b[j] <= v {
            j += 1;
        }
        let diff = (i as f64 / fa - j as f64 / fb).abs();
        if diff > sup {
            sup = diff;
        }
    }
    sup
}

/// Convenience wrapper that copies its inputs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (mut a, mut b): (Vec<f64>, Vec<f64>) = (a.to_vec(), b.to_vec());
    ks_statistic(&mut a, &mut b)
}
