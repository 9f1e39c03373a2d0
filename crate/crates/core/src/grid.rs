//! Periodic sampling grids, the discrete Fourier pair and `L^p` quasi-norms.
//!
//! Samples sit at `x_i = -L/2 + i h`, `h = L/N`, on every axis. Frequencies are
//! `xi_k = 2 pi k / L` with `k` in `[-N/2, N/2)`, stored in FFT order (index `i`
//! holds `k = i` for `i < N/2` and `k = i - N` otherwise). The transform pair is
//!
//! ```text
//! F(xi_k) = h^n  sum_x f(x) e^{-i x.xi_k}
//! f(x)    = L^-n sum_k F(xi_k) e^{+i x.xi_k}
//! ```
//!
//! so that `F` approximates the continuous transform and `L^-n = (2 pi)^-n (2 pi / L)^n`
//! is the lattice version of the measure `(2 pi)^-n d xi`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::{fft_nd, Direction};

/// A point of `R^n` padded to two coordinates; in one dimension the second
/// coordinate is always zero.
pub type Point = [f64; 2];

pub(crate) fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn norm(a: &Point) -> f64 {
    a[0].hypot(a[1])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    dim: usize,
    length: f64,
    samples: usize,
}

impl GridSpec {
    /// Torus `[-L/2, L/2)^dim` with `samples` points per axis.
    ///
    /// Requires `dim` in `{1, 2}`, a power-of-two `samples >= 8`, and enough
    /// resolution for at least one dyadic shell past the unit ball (`J >= 1`).
    pub fn new(dim: usize, length: f64, samples: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Parameter(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Parameter(format!("box length must be positive, got {length}")));
        }
        if samples < 8 || !samples.is_power_of_two() {
            return Err(Error::Parameter(format!("samples per axis must be a power of two >= 8, got {samples}")));
        }
        let spec = Self { dim, length, samples };
        if spec.max_level() < 1 {
            return Err(Error::GridTooCoarse(format!(
                "max frequency {:.4} resolves no dyadic shell (need >= 4)",
                spec.max_frequency()
            )));
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.samples as f64
    }

    /// `pi N / L`, the largest frequency on each axis.
    pub fn max_frequency(&self) -> f64 {
        PI * self.samples as f64 / self.length
    }

    /// `J = floor(log2 xi_max) - 1`; the shell of `psi_J` fits under Nyquist.
    pub fn max_level(&self) -> i32 {
        self.max_frequency().log2().floor() as i32 - 1
    }

    /// Number of samples, `N^n`.
    pub fn len(&self) -> usize {
        self.samples.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h^n`, the Riemann-sum weight.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// `L^-n = (2 pi)^-n (2 pi / L)^n`, the lattice weight of the inverse transform.
    pub fn lattice_weight(&self) -> f64 {
        self.length.powi(-(self.dim as i32))
    }

    /// `L^n`.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    fn axis_indices(&self, idx: usize) -> [usize; 2] {
        match self.dim {
            1 => [idx, 0],
            _ => [idx / self.samples, idx % self.samples],
        }
    }

    fn signed(&self, i: usize) -> i64 {
        if i < self.samples / 2 {
            i as i64
        } else {
            i as i64 - self.samples as i64
        }
    }

    /// Sample location of flat index `idx`.
    pub fn point(&self, idx: usize) -> Point {
        let h = self.spacing();
        let [i0, i1] = self.axis_indices(idx);
        let x0 = -0.5 * self.length + i0 as f64 * h;
        match self.dim {
            1 => [x0, 0.0],
            _ => [x0, -0.5 * self.length + i1 as f64 * h],
        }
    }

    /// Integer wavenumber `k` stored at flat spectral index `idx`.
    pub fn wavenumber(&self, idx: usize) -> [i64; 2] {
        let [i0, i1] = self.axis_indices(idx);
        match self.dim {
            1 => [self.signed(i0), 0],
            _ => [self.signed(i0), self.signed(i1)],
        }
    }

    /// Frequency `xi_k = 2 pi k / L` stored at flat spectral index `idx`.
    pub fn frequency(&self, idx: usize) -> Point {
        let k = self.wavenumber(idx);
        let unit = 2.0 * PI / self.length;
        [unit * k[0] as f64, unit * k[1] as f64]
    }

    /// Flat spectral index of wavenumber `k`, if it lies in `[-N/2, N/2)^n`.
    pub fn index_of_wavenumber(&self, k: [i64; 2]) -> Option<usize> {
        let half = (self.samples / 2) as i64;
        let wrap = |v: i64| -> Option<usize> {
            if v < -half || v >= half {
                None
            } else if v < 0 {
                Some((v + self.samples as i64) as usize)
            } else {
                Some(v as usize)
            }
        };
        match self.dim {
            1 => (k[1] == 0).then(|| wrap(k[0])).flatten(),
            _ => Some(wrap(k[0])? * self.samples + wrap(k[1])?),
        }
    }

    /// True when the axis index of either coordinate is the unpaired `-N/2`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = (self.samples / 2) as i64;
        let k = self.wavenumber(idx);
        k[0] == -half || (self.dim == 2 && k[1] == -half)
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Structural(format!("grid mismatch: {self:?} vs {other:?}")))
        }
    }
}

/// Complex samples of a function on the grid, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Structural(format!("expected {} samples, got {}", spec.len(), values.len())));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Parameter(format!("non-finite sample at index {i}")));
        }
        Ok(Self { spec, values })
    }

    pub(crate) fn from_parts(spec: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        Self { spec, values }
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self::from_parts(spec, alloc::vec![Complex64::new(0.0, 0.0); spec.len()])
    }

    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(Point) -> Complex64) -> Result<Self> {
        let values = (0..spec.len()).map(|i| f(spec.point(i))).collect();
        Self::new(spec, values)
    }

    pub fn from_real_fn(spec: GridSpec, mut f: impl FnMut(Point) -> f64) -> Result<Self> {
        Self::from_fn(spec, |x| Complex64::new(f(x), 0.0))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(self.spec, self.values.iter().map(|z| z.conj()).collect())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_parts(self.spec, self.values.iter().map(|z| z * factor).collect())
    }

    pub fn real_part(&self) -> Self {
        Self::from_parts(self.spec, self.values.iter().map(|z| Complex64::new(z.re, 0.0)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `g(x) = f(x + steps * h)` with periodic wrap-around.
    pub fn shifted(&self, steps: [i64; 2]) -> Self {
        let n = self.spec.samples as i64;
        let wrap = |i: i64| i.rem_euclid(n) as usize;
        let values = (0..self.spec.len())
            .map(|idx| match self.spec.dim {
                1 => self.values[wrap(idx as i64 + steps[0])],
                _ => {
                    let (r, c) = ((idx / self.spec.samples) as i64, (idx % self.spec.samples) as i64);
                    self.values[wrap(r + steps[0]) * self.spec.samples + wrap(c + steps[1])]
                }
            })
            .collect();
        Self::from_parts(self.spec, values)
    }

    pub fn forward(&self) -> Spectrum {
        forward_transform(self)
    }

    /// Max absolute difference; panics if the grids differ.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        assert_eq!(self.spec, other.spec, "grid mismatch");
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Lattice coefficients `F(xi_k)` in FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    spec: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(spec: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != spec.len() {
            return Err(Error::Structural(format!("expected {} coefficients, got {}", spec.len(), coeffs.len())));
        }
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Parameter("non-finite spectral coefficient".into()));
        }
        Ok(Self { spec, coeffs })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, coeffs: alloc::vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    /// Coefficients from a closed form `F(xi)`.
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(Point) -> Complex64) -> Result<Self> {
        let coeffs = (0..spec.len()).map(|i| f(spec.frequency(i))).collect();
        Self::new(spec, coeffs)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coefficient(&self, k: [i64; 2]) -> Option<Complex64> {
        self.spec.index_of_wavenumber(k).map(|i| self.coeffs[i])
    }

    /// Pointwise product with a real multiplier table.
    pub fn multiplied_real(&self, table: &[f64]) -> Self {
        assert_eq!(table.len(), self.coeffs.len());
        Self { spec: self.spec, coeffs: self.coeffs.iter().zip(table).map(|(c, m)| c * m).collect() }
    }

    /// Pointwise product with a complex multiplier table.
    pub fn multiplied(&self, table: &[Complex64]) -> Self {
        assert_eq!(table.len(), self.coeffs.len());
        Self { spec: self.spec, coeffs: self.coeffs.iter().zip(table).map(|(c, m)| c * m).collect() }
    }

    /// `L^-n sum |F|^2`, which equals `h^n sum |f|^2` by Parseval.
    pub fn energy(&self) -> f64 {
        self.spec.lattice_weight() * self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn inverse(&self) -> GridFunction {
        inverse_transform(self)
    }
}

fn apply_alternating_sign(spec: &GridSpec, data: &mut [Complex64]) {
    for (idx, z) in data.iter_mut().enumerate() {
        let [i0, i1] = spec.axis_indices(idx);
        if (i0 + i1) % 2 == 1 {
            *z = -*z;
        }
    }
}

/// `F(xi_k) = h^n sum_x f(x) e^{-i x.xi_k}`.
pub fn forward_transform(f: &GridFunction) -> Spectrum {
    let spec = f.spec;
    let mut data = f.values.clone();
    fft_nd(&mut data, spec.samples, spec.dim, Direction::Forward);
    // x_0 = -L/2 contributes e^{i pi k} = (-1)^k.
    apply_alternating_sign(&spec, &mut data);
    let h_n = spec.cell_volume();
    for z in data.iter_mut() {
        *z *= h_n;
    }
    Spectrum { spec, coeffs: data }
}

/// `f(x) = L^-n sum_k F(xi_k) e^{i x.xi_k}`.
pub fn inverse_transform(spectrum: &Spectrum) -> GridFunction {
    let spec = spectrum.spec;
    let mut data = spectrum.coeffs.clone();
    apply_alternating_sign(&spec, &mut data);
    fft_nd(&mut data, spec.samples, spec.dim, Direction::Inverse);
    let w = spec.lattice_weight();
    for z in data.iter_mut() {
        *z *= w;
    }
    GridFunction::from_parts(spec, data)
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && (p.is_finite() || p == f64::INFINITY) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("exponent must lie in (0, inf], got {p}")))
    }
}

/// `(cell * sum |v|^p)^{1/p}`, or the max for `p = inf`. Sequential sum.
pub(crate) fn lp_of_moduli(moduli: impl Iterator<Item = f64>, p: f64, cell: f64) -> f64 {
    if p == f64::INFINITY {
        moduli.fold(0.0, f64::max)
    } else if p == 2.0 {
        (cell * moduli.map(|m| m * m).sum::<f64>()).sqrt()
    } else if p == 1.0 {
        cell * moduli.sum::<f64>()
    } else {
        (cell * moduli.map(|m| m.powf(p)).sum::<f64>()).powf(1.0 / p)
    }
}

/// `(h^n sum_x |f(x)|^p)^{1/p}` for `0 < p < inf`, `max_x |f(x)|` for `p = inf`.
pub fn lp_quasinorm(f: &GridFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_of_moduli(f.values.iter().map(|z| z.norm()), p, f.spec.cell_volume()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Add,
    Sub,
    Mul,
}

/// Elementwise `(alpha f) op (beta g)`.
pub fn pointwise_combine(
    f: &GridFunction,
    g: &GridFunction,
    op: Combine,
    alpha: Complex64,
    beta: Complex64,
) -> Result<GridFunction> {
    f.spec.check_same(&g.spec)?;
    let values = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| {
            let (a, b) = (alpha * a, beta * b);
            match op {
                Combine::Add => a + b,
                Combine::Sub => a - b,
                Combine::Mul => a * b,
            }
        })
        .collect();
    Ok(GridFunction::from_parts(f.spec, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn random_function(spec: GridSpec, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..spec.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        GridFunction::new(spec, values).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(3, 1.0, 64).is_err());
        assert!(GridSpec::new(1, 1.0, 48).is_err());
        assert!(GridSpec::new(1, 1.0, 4).is_err());
        assert!(GridSpec::new(1, -1.0, 64).is_err());
        // pi * 8 / 10 < 4: not even one shell.
        assert!(matches!(GridSpec::new(1, 10.0, 8), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn derived_quantities() {
        let spec = GridSpec::new(2, 2.0 * PI, 64).unwrap();
        assert_eq!(spec.len(), 4096);
        assert!((spec.max_frequency() - 32.0).abs() < 1e-12);
        assert_eq!(spec.max_level(), 4);
        assert_eq!(spec.wavenumber(spec.index_of_wavenumber([-32, 5]).unwrap()), [-32, 5]);
        assert!(spec.index_of_wavenumber([32, 0]).is_none());
    }

    #[test]
    fn constant_has_single_coefficient() {
        for dim in [1, 2] {
            let spec = GridSpec::new(dim, 3.0, 32).unwrap();
            let f = GridFunction::from_fn(spec, |_| one()).unwrap();
            let big_f = forward_transform(&f);
            let vol = spec.volume();
            for (i, c) in big_f.coeffs().iter().enumerate() {
                let expected = if i == 0 { vol } else { 0.0 };
                assert!((c - Complex64::new(expected, 0.0)).norm() < 1e-12 * vol);
            }
        }
    }

    #[test]
    fn plane_wave_is_a_delta() {
        let spec = GridSpec::new(2, 5.0, 32).unwrap();
        let k0 = [3i64, -7];
        let xi0 = spec.frequency(spec.index_of_wavenumber(k0).unwrap());
        let f = GridFunction::from_fn(spec, |x| Complex64::cis(dot(&x, &xi0))).unwrap();
        let big_f = forward_transform(&f);
        for (i, c) in big_f.coeffs().iter().enumerate() {
            let expected = if spec.wavenumber(i) == k0 { spec.volume() } else { 0.0 };
            assert!((c - Complex64::new(expected, 0.0)).norm() < 1e-11);
        }
        // and back
        let mut delta = Spectrum::zeros(spec);
        delta.coeffs_mut()[spec.index_of_wavenumber(k0).unwrap()] = Complex64::new(spec.volume(), 0.0);
        assert!(inverse_transform(&delta).max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn gaussian_matches_closed_form() {
        // Oracle: int e^{-x^2/2} e^{-i x xi} dx = sqrt(2 pi) e^{-xi^2/2}.
        let spec = GridSpec::new(1, 64.0, 4096).unwrap();
        let f = GridFunction::from_real_fn(spec, |x| (-0.5 * x[0] * x[0]).exp()).unwrap();
        let big_f = forward_transform(&f);
        for (i, c) in big_f.coeffs().iter().enumerate() {
            let xi = spec.frequency(i)[0];
            let expected = (2.0 * PI).sqrt() * (-0.5 * xi * xi).exp();
            assert!((c - Complex64::new(expected, 0.0)).norm() < 1e-10, "xi={xi}");
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        for (dim, n, seed) in [(1, 256, 1u64), (2, 32, 2)] {
            let spec = GridSpec::new(dim, 7.0, n).unwrap();
            for s in 0..100 {
                let f = random_function(spec, seed * 1000 + s);
                let big_f = forward_transform(&f);
                let back = inverse_transform(&big_f);
                assert!(back.max_abs_diff(&f) <= 1e-12 * f.max_abs());
                let lhs = lp_quasinorm(&f, 2.0).unwrap().powi(2);
                assert!((lhs - big_f.energy()).abs() <= 1e-12 * lhs);
            }
        }
    }

    #[test]
    fn inverse_is_linear() {
        let spec = GridSpec::new(1, 4.0, 64).unwrap();
        let a = forward_transform(&random_function(spec, 5));
        let b = forward_transform(&random_function(spec, 6));
        let (alpha, beta) = (Complex64::new(0.3, -1.2), Complex64::new(-2.0, 0.5));
        let combo = Spectrum::new(spec, a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| alpha * x + beta * y).collect()).unwrap();
        let lhs = inverse_transform(&combo);
        let rhs = pointwise_combine(&a.inverse(), &b.inverse(), Combine::Add, alpha, beta).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12 * rhs.max_abs());
    }

    #[test]
    fn indicator_norm_is_one() {
        let spec = GridSpec::new(1, 16.0, 256).unwrap();
        // [0, 1) holds exactly 16 samples of width 1/16.
        let f = GridFunction::from_real_fn(spec, |x| if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 }).unwrap();
        for p in [0.3, 0.5, 1.0, 2.0, 3.5] {
            assert!((lp_quasinorm(&f, p).unwrap() - 1.0).abs() < 1e-13, "p={p}");
        }
        assert_eq!(lp_quasinorm(&f, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_quasinorm(&f, 0.0).is_err());
        assert!(lp_quasinorm(&f, -1.0).is_err());
        assert!(lp_quasinorm(&f, f64::NAN).is_err());
    }

    #[test]
    fn p_half_quasi_triangle() {
        let spec = GridSpec::new(2, 3.0, 16).unwrap();
        for s in 0..20 {
            let f = random_function(spec, 40 + s);
            let g = random_function(spec, 90 + s);
            let sum = pointwise_combine(&f, &g, Combine::Add, one(), one()).unwrap();
            let p = 0.5;
            let lhs = lp_quasinorm(&sum, p).unwrap();
            let rhs = 2.0 * (lp_quasinorm(&f, p).unwrap() + lp_quasinorm(&g, p).unwrap());
            assert!(lhs <= rhs);
        }
    }

    #[test]
    fn combine_identities() {
        let spec = GridSpec::new(1, 2.0, 32).unwrap();
        let f = random_function(spec, 3);
        let zero = GridFunction::zeros(spec);
        let added = pointwise_combine(&f, &zero, Combine::Add, one(), one()).unwrap();
        assert_eq!(added, f);
        let diff = pointwise_combine(&f, &f, Combine::Sub, one(), one()).unwrap();
        assert_eq!(diff.max_abs(), 0.0);
        let sq = pointwise_combine(&f, &f.conj(), Combine::Mul, one(), one()).unwrap();
        assert!(sq.values().iter().all(|z| z.re >= 0.0 && z.im.abs() < 1e-15));
        let other = GridSpec::new(1, 2.0, 64).unwrap();
        assert!(pointwise_combine(&f, &GridFunction::zeros(other), Combine::Add, one(), one()).is_err());
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        let spec = GridSpec::new(1, 2.0, 32).unwrap();
        assert!(matches!(GridFunction::new(spec, alloc::vec![one(); 31]), Err(Error::Structural(_))));
        let mut v = alloc::vec![one(); 32];
        v[7] = Complex64::new(f64::NAN, 0.0);
        assert!(GridFunction::new(spec, v).is_err());
    }
}
