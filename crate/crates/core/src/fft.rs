//! Radix-2 complex FFT for power-of-two lengths.
//!
//! Twiddle factors are evaluated directly with `sin`/`cos` (no recurrence), so
//! round-off stays at a few ulps times `log2 N`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `X_k = sum_j x_j e^{-2 pi i jk/N}`
    Forward,
    /// `x_j = sum_k X_k e^{+2 pi i jk/N}` (no `1/N` factor)
    Inverse,
}

/// Precomputed twiddles and bit-reversal permutation for one length.
#[derive(Clone, Debug)]
pub struct FftPlan {
    len: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl FftPlan {
    /// Panics unless `len` is a power of two.
    pub fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "FFT length {len} is not a power of two");
        let twiddles = (0..len / 2)
            .map(|k| {
                let angle = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        let bits = len.trailing_zeros();
        let bitrev = (0..len).map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) }).collect();
        Self { len, twiddles, bitrev }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn process(&self, data: &mut [Complex64], direction: Direction) {
        assert_eq!(data.len(), self.len);
        let n = self.len;
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if direction == Direction::Inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// Row-major transform of an `n`-dimensional cube with side `side`.
pub fn fft_nd(data: &mut [Complex64], side: usize, dim: usize, direction: Direction) {
    let plan = FftPlan::new(side);
    match dim {
        1 => plan.process(data, direction),
        2 => {
            assert_eq!(data.len(), side * side);
            for row in data.chunks_exact_mut(side) {
                plan.process(row, direction);
            }
            let mut column = alloc::vec![Complex64::new(0.0, 0.0); side];
            for c in 0..side {
                for r in 0..side {
                    column[r] = data[r * side + c];
                }
                plan.process(&mut column, direction);
                for r in 0..side {
                    data[r * side + c] = column[r];
                }
            }
        }
        _ => panic!("unsupported dimension {dim}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(input: &[Complex64]) -> Vec<Complex64> {
        let n = input.len();
        (0..n)
            .map(|k| {
                input
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let a = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                        x * Complex64::new(a.cos(), a.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for &n in &[1usize, 2, 8, 64] {
            let input: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos())).collect();
            let expected = naive_dft(&input);
            let mut data = input.clone();
            FftPlan::new(n).process(&mut data, Direction::Forward);
            for (a, b) in data.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-12, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let n = 256;
        let input: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, -(i as f64).sqrt())).collect();
        let mut data = input.clone();
        let plan = FftPlan::new(n);
        plan.process(&mut data, Direction::Forward);
        plan.process(&mut data, Direction::Inverse);
        for (a, b) in data.iter().zip(&input) {
            assert!((a / n as f64 - b).norm() < 1e-10);
        }
    }

    #[test]
    fn two_dimensional_delta_is_flat() {
        let side = 16;
        let mut data = alloc::vec![Complex64::new(0.0, 0.0); side * side];
        data[0] = Complex64::new(1.0, 0.0);
        fft_nd(&mut data, side, 2, Direction::Forward);
        assert!(data.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }
}
