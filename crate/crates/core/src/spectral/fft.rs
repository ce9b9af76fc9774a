use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Lines handed to one rayon task at a time.
const LINES_PER_TASK: usize = 16;

/// Multi-dimensional complex FFT on a cube of side `n`, x fastest.
///
/// Axis 0 is transformed in place; higher axes are transposed to contiguous
/// lines, transformed, and transposed back. Each line is handled by a single
/// task, so results do not depend on the thread count.
pub(crate) struct FftNd {
    n: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftNd {
    pub(crate) fn new(n: usize, dim: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftNd {
            n,
            dim,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Unnormalized transform in place.
    pub(crate) fn process(&self, data: &mut [Complex64], inverse: bool) {
        let fft = if inverse { &self.inverse } else { &self.forward };
        let n = self.n;
        process_lines(fft.as_ref(), n, data);
        if self.dim < 2 {
            return;
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); data.len()];
        for axis in 1..self.dim {
            let rows = n;
            let cols = n.pow(axis as u32);
            let block = rows * cols;
            transpose_blocks(data, &mut buf, block, cols, rows);
            process_lines(fft.as_ref(), n, &mut buf);
            transpose_blocks(&buf, data, block, rows, cols);
        }
    }
}

fn process_lines(fft: &dyn Fft<f64>, n: usize, data: &mut [Complex64]) {
    data.par_chunks_mut(n * LINES_PER_TASK).for_each(|chunk| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(chunk, &mut scratch);
    });
}

/// Transposes every `block`-sized chunk, read as a `height x width` row-major matrix.
fn transpose_blocks(
    src: &[Complex64],
    dst: &mut [Complex64],
    block: usize,
    width: usize,
    height: usize,
) {
    dst.par_chunks_mut(block)
        .zip(src.par_chunks(block))
        .for_each(|(d, s)| transpose::transpose(s, d, width, height));
}
