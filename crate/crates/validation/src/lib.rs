//! Helpers shared by the acceptance suite: curve interpolation, trend tests
//! and time-window statistics.

/// Linear interpolation of `(x, y)` points (any order) at `x`; `None` outside their range.
pub fn interpolate(points: &[(f64, f64)], x: f64) -> Option<f64> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(&(_, y)) = p.iter().find(|(px, _)| (*px - x).abs() < 1e-12) {
        return Some(y);
    }
    p.windows(2).find(|w| w[0].0 < x && x < w[1].0).map(|w| {
        let s = (x - w[0].0) / (w[1].0 - w[0].0);
        w[0].1 + s * (w[1].1 - w[0].1)
    })
}

pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Abscissae where `y` crosses `level` upward, linearly interpolated between samples.
pub fn upward_crossings(x: &[f64], y: &[f64], level: f64) -> Vec<f64> {
    x.windows(2)
        .zip(y.windows(2))
        .filter(|(_, w)| w[0] < level && w[1] >= level)
        .map(|(xs, w)| xs[0] + (level - w[0]) / (w[1] - w[0]) * (xs[1] - xs[0]))
        .collect()
}

/// Means of `values` at times inside and outside the open interval (lo, hi).
pub fn split_means(times: &[f64], values: &[f64], lo: f64, hi: f64) -> (f64, f64) {
    let (mut a, mut na, mut b, mut nb) = (0.0, 0usize, 0.0, 0usize);
    for (&t, &v) in times.iter().zip(values) {
        if t > lo && t < hi {
            a += v;
            na += 1;
        } else {
            b += v;
            nb += 1;
        }
    }
    (a / na as f64, b / nb as f64)
}

/// Index of the smallest value.
pub fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty series")
}
