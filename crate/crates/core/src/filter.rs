//! Normalized Gaussian windows and valid-region (no padding) separable filtering.

/// 1-D Gaussian taps of length `size`, normalized to sum 1.
pub fn gaussian_taps(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size as f64 - 1.0) / 2.0;
    let mut taps: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - c;
            (-(d * d) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    taps
}

/// Weighted local averages of `data` under the separable window `taps ⊗ taps`,
/// evaluated only where the window fits. Returns the `(w-k+1)×(h-k+1)` map.
pub fn filter_valid(data: &[f64], width: usize, height: usize, taps: &[f64]) -> Vec<f64> {
    let k = taps.len();
    debug_assert!(width >= k && height >= k);
    let ow = width - k + 1;
    let oh = height - k + 1;

    let mut horiz = vec![0.0; ow * height];
    for i in 0..height {
        let row = &data[i * width..(i + 1) * width];
        let out = &mut horiz[i * ow..(i + 1) * ow];
        for (j, o) in out.iter_mut().enumerate() {
            *o = row[j..j + k].iter().zip(taps).map(|(a, t)| a * t).sum();
        }
    }

    let mut out = vec![0.0; ow * oh];
    for i in 0..oh {
        for (t, &tap) in taps.iter().enumerate() {
            let src = &horiz[(i + t) * ow..(i + t + 1) * ow];
            let dst = &mut out[i * ow..(i + 1) * ow];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += tap * s;
            }
        }
    }
    out
}
