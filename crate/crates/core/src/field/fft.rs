//! Unnormalized multidimensional FFTs built from `rustfft` line transforms.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

/// In-place unnormalized FFT along every axis of a row-major 4-D array.
///
/// Each pass transforms the contiguous last axis and then transposes so the
/// next axis becomes contiguous; four passes restore the original layout.
pub fn fft4_in_place(values: &mut Vec<Complex64>, counts: [usize; 4], direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let mut dims = counts;
    let mut scratch = vec![Complex64::default(); values.len()];
    for _ in 0..4 {
        let n = dims[3];
        let fft = planner.plan_fft(n, direction);
        let rows = values.len() / n;
        values.par_chunks_mut(n * rows.clamp(1, 64)).for_each(|chunk| {
            let mut buf = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(chunk, &mut buf);
        });
        transpose(values, &mut scratch, rows, n);
        std::mem::swap(values, &mut scratch);
        dims = [dims[3], dims[0], dims[1], dims[2]];
    }
}

/// `dst[c * rows + r] = src[r * cols + c]`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    dst.par_chunks_mut(rows).enumerate().for_each(|(c, out)| {
        for (r, o) in out.iter_mut().enumerate() {
            *o = src[r * cols + c];
        }
    });
}

/// In-place unnormalized 1-D FFT.
pub fn fft1_in_place(values: &mut [Complex64], direction: FftDirection) {
    let fft = FftPlanner::new().plan_fft(values.len(), direction);
    fft.process(values);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft4(x: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); x.len()];
        let w = |k: usize, j: usize| Complex64::from_polar(1.0, -std::f64::consts::TAU * (k * j % n) as f64 / n as f64);
        for (ko, o) in out.iter_mut().enumerate() {
            let k = [ko / (n * n * n), (ko / (n * n)) % n, (ko / n) % n, ko % n];
            for (jo, v) in x.iter().enumerate() {
                let j = [jo / (n * n * n), (jo / (n * n)) % n, (jo / n) % n, jo % n];
                *o += v * w(k[0], j[0]) * w(k[1], j[1]) * w(k[2], j[2]) * w(k[3], j[3]);
            }
        }
        out
    }

    #[test]
    fn matches_naive_transform() {
        let n: usize = 3;
        let x: Vec<Complex64> = (0..n.pow(4))
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut y = x.clone();
        fft4_in_place(&mut y, [n; 4], FftDirection::Forward);
        let want = naive_dft4(&x, n);
        for (a, b) in y.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn non_cubic_round_trip() {
        let counts = [2, 3, 4, 5];
        let x: Vec<Complex64> = (0..120).map(|i| Complex64::new(i as f64, -(i as f64) / 3.0)).collect();
        let mut y = x.clone();
        fft4_in_place(&mut y, counts, FftDirection::Forward);
        fft4_in_place(&mut y, counts, FftDirection::Inverse);
        for (a, b) in y.iter().zip(&x) {
            assert!((a / 120.0 - b).norm() < 1e-10);
        }
    }
}
