//! Second dyadic decomposition: cones of angular width `~2^{-j/2}` around
//! directions `xi_j^nu`, the cutoffs built on them, and the localised kernels
//! `K_j^nu(x, y) = int e^{i Phi(x, y, xi)} psi_j(xi) chi_j^nu(xi) a d-bar xi`.
//!
//! In two dimensions the directions form the uniform angular grid of
//! `K = ceil(2 pi 2^{j/2})` points, so neighbours are `2 pi / K` apart in arc
//! length (slightly below `2^{-j/2}`; see [`ConeCover::min_arc_separation`])
//! and every unit vector lies within `pi / K <= 2^{-j/2} / 2` of a direction.
//! In one dimension the directions are `+1` and `-1`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fio::{Amplitude, FioOperator, Phase};
use crate::grid::{dot, inverse_transform, norm, GridFunction, GridSpec, Point, Spectrum};
use crate::profile::BumpProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `chi = eta / sum eta`, so that `sum chi = 1`.
    Simple,
    /// `chi~ = eta / (sum eta^2)^{1/2}`, so that `sum chi~^2 = 1`.
    Quadratic,
}

#[derive(Clone, Debug)]
pub struct ConeCover {
    level: u32,
    dim: usize,
    directions: Vec<Point>,
    profile: BumpProfile,
}

/// Directions and cutoffs for level `j >= 1`.
pub fn build_directions(level: u32, dim: usize, profile: BumpProfile) -> Result<ConeCover> {
    if level == 0 {
        return Err(Error::Parameter("cone covers start at level 1".into()));
    }
    let directions = match dim {
        1 => alloc::vec![[1.0, 0.0], [-1.0, 0.0]],
        2 => {
            let count = (2.0 * PI * 2f64.powf(level as f64 / 2.0)).ceil() as usize;
            (0..count)
                .map(|nu| {
                    let angle = 2.0 * PI * nu as f64 / count as f64;
                    [angle.cos(), angle.sin()]
                })
                .collect()
        }
        _ => return Err(Error::Parameter(format!("cone covers exist for n in {{1, 2}}, got {dim}"))),
    };
    Ok(ConeCover { level, dim, directions, profile })
}

impl ConeCover {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Point] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// `2^{j/2}`
    pub fn angular_scale(&self) -> f64 {
        2f64.powf(self.level as f64 / 2.0)
    }

    /// `count / 2^{j(n-1)/2}`
    pub fn count_constant(&self) -> f64 {
        self.len() as f64 / 2f64.powf(self.level as f64 * (self.dim as f64 - 1.0) / 2.0)
    }

    /// Smallest Euclidean distance between two directions.
    pub fn min_chord_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.directions.iter().enumerate() {
            for b in &self.directions[i + 1..] {
                best = best.min((a[0] - b[0]).hypot(a[1] - b[1]));
            }
        }
        best
    }

    /// Smallest angle between two directions.
    pub fn min_arc_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.directions.iter().enumerate() {
            for b in &self.directions[i + 1..] {
                best = best.min(dot(a, b).clamp(-1.0, 1.0).acos());
            }
        }
        best
    }

    /// Largest angle from a unit vector to its nearest direction.
    pub fn covering_radius(&self) -> f64 {
        match self.dim {
            1 => 0.0,
            _ => PI / self.len() as f64,
        }
    }

    fn unit(xi: &Point) -> Result<Point> {
        let r = norm(xi);
        if r == 0.0 {
            return Err(Error::Parameter("cone cutoffs are undefined at xi = 0".into()));
        }
        Ok([xi[0] / r, xi[1] / r])
    }

    fn eta_unit(&self, nu: usize, u: &Point) -> f64 {
        let d = self.directions[nu];
        self.profile.eval(self.angular_scale() * (u[0] - d[0]).hypot(u[1] - d[1]))
    }

    /// `eta_j^nu(xi) = phi(2^{j/2} |xi/|xi| - xi_j^nu|)`.
    pub fn eta(&self, nu: usize, xi: &Point) -> Result<f64> {
        self.check_index(nu)?;
        Ok(self.eta_unit(nu, &Self::unit(xi)?))
    }

    fn check_index(&self, nu: usize) -> Result<()> {
        if nu < self.len() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("cone index {nu} out of range 0..{}", self.len())))
        }
    }

    /// All cutoffs at `xi`, in direction order.
    pub fn cutoffs(&self, xi: &Point, normalization: Normalization) -> Result<Vec<f64>> {
        let u = Self::unit(xi)?;
        let etas: Vec<f64> = (0..self.len()).map(|nu| self.eta_unit(nu, &u)).collect();
        let denom = match normalization {
            Normalization::Simple => etas.iter().sum::<f64>(),
            Normalization::Quadratic => etas.iter().map(|e| e * e).sum::<f64>().sqrt(),
        };
        Ok(etas.into_iter().map(|e| e / denom).collect())
    }

    /// `chi_j^nu(xi)` or `chi~_j^nu(xi)`.
    pub fn cutoff(&self, nu: usize, xi: &Point, normalization: Normalization) -> Result<f64> {
        self.check_index(nu)?;
        Ok(self.cutoffs(xi, normalization)?[nu])
    }

    /// Membership in `Gamma_j^nu = { |xi/|xi| - xi_j^nu| <= 2 * 2^{-j/2} }`.
    pub fn in_cone(&self, nu: usize, xi: &Point) -> Result<bool> {
        self.check_index(nu)?;
        let u = Self::unit(xi)?;
        let d = self.directions[nu];
        Ok((u[0] - d[0]).hypot(u[1] - d[1]) <= 2.0 / self.angular_scale())
    }

    /// `sup |xi|^{|alpha|} 2^{-j|alpha|/2} |d^alpha chi_j^nu|` over a sample of
    /// the cone at radii 1 and `2^j`, by central differences (`|alpha| <= 2`).
    pub fn cutoff_derivative_probe(&self, nu: usize, alpha: [u32; 2], normalization: Normalization) -> Result<f64> {
        self.check_index(nu)?;
        let order = alpha[0] + alpha[1];
        if order > 2 {
            return Err(Error::Parameter(format!("derivative order {order} > 2")));
        }
        let d = self.directions[nu];
        let centre = d[1].atan2(d[0]);
        let half_width = 2.5 / self.angular_scale();
        let scale = self.angular_scale();
        let mut worst: f64 = 0.0;
        for &radius in &[1.0, 2f64.powi(self.level as i32)] {
            let h = 1e-4 * radius / scale;
            for i in 0..=200 {
                let angle = centre - half_width + 2.0 * half_width * i as f64 / 200.0;
                let xi = [radius * angle.cos(), radius * angle.sin()];
                let value = self.derivative(nu, &xi, alpha, h, normalization)?;
                worst = worst.max(radius.powi(order as i32) * scale.powi(-(order as i32)) * value.abs());
            }
        }
        Ok(worst)
    }

    fn derivative(&self, nu: usize, xi: &Point, alpha: [u32; 2], h: f64, normalization: Normalization) -> Result<f64> {
        match alpha.iter().position(|&a| a > 0) {
            None => self.cutoff(nu, xi, normalization),
            Some(axis) => {
                let mut reduced = alpha;
                reduced[axis] -= 1;
                let (mut plus, mut minus) = (*xi, *xi);
                plus[axis] += h;
                minus[axis] -= h;
                Ok((self.derivative(nu, &plus, reduced, h, normalization)?
                    - self.derivative(nu, &minus, reduced, h, normalization)?)
                    / (2.0 * h))
            }
        }
    }
}

/// Which of the two kernel phases is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelForm {
    /// `Phi = phi(x, xi) - y.xi`, amplitude `a(x, xi)`
    Standard,
    /// `Phi = x.xi - phi(y, xi)`, amplitude `a(y, xi)`
    Adjoint,
}

/// Direct quadrature of `K_j^nu(., y_ref)` over the x-grid. `cone = None`
/// gives the whole band kernel of `psi_j(D) T`.
pub struct ConeKernelPlan<'a> {
    op: &'a FioOperator,
    spec: GridSpec,
    form: KernelForm,
    y_ref: Point,
    terms: Vec<(Point, f64)>,
}

impl<'a> ConeKernelPlan<'a> {
    pub fn new(
        op: &'a FioOperator,
        spec: &GridSpec,
        level: usize,
        cone: Option<(&ConeCover, usize)>,
        y_ref: Point,
        form: KernelForm,
    ) -> Result<Self> {
        let max = spec.max_level();
        if level as i32 > max {
            return Err(Error::LevelOutOfRange { level, max: max.max(0) as usize });
        }
        if let Some((cover, nu)) = cone {
            cover.check_index(nu)?;
        }
        let weight = spec.lattice_weight();
        let mut keyed: Vec<([i64; 2], Point, f64)> = Vec::new();
        for i in 0..spec.len() {
            let xi = spec.frequency(i);
            let band = op.profile().shell(norm(&xi), level);
            if band == 0.0 {
                continue;
            }
            let chi = match cone {
                Some((cover, nu)) => cover.cutoffs(&xi, Normalization::Simple)?[nu],
                None => 1.0,
            };
            if chi != 0.0 {
                keyed.push((spec.wavenumber(i), xi, weight * band * chi));
            }
        }
        keyed.sort_by_key(|(k, _, _)| (k[0] * k[0] + k[1] * k[1], k[0], k[1]));
        Ok(Self { op, spec: *spec, form, y_ref, terms: keyed.into_iter().map(|(_, xi, w)| (xi, w)).collect() })
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn value_at(&self, idx: usize) -> Result<Complex64> {
        let x = self.spec.point(idx);
        let y = self.y_ref;
        let amplitude: &dyn Amplitude = self.op.amplitude();
        let phase: &dyn Phase = self.op.phase();
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi, w) in &self.terms {
            let (phi, a) = match self.form {
                KernelForm::Standard => (phase.eval(&x, xi) - dot(&y, xi), amplitude.eval(&x, xi)),
                KernelForm::Adjoint => (dot(&x, xi) - phase.eval(&y, xi), amplitude.eval(&y, xi)),
            };
            if !(phi.is_finite() && a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::Evaluation { what: "kernel integrand", x, xi: *xi });
            }
            acc += a * Complex64::cis(phi) * w;
        }
        Ok(acc)
    }

    pub fn evaluate(&self) -> Result<GridFunction> {
        let values = (0..self.spec.len()).map(|i| self.value_at(i)).collect::<Result<Vec<_>>>()?;
        GridFunction::new(self.spec, values)
    }
}

/// `K_j^nu(., y_ref)`; uses an inverse FFT when the operator is a Fourier
/// multiplier (the kernel is then a function of `x - y`), direct quadrature
/// otherwise.
pub fn cone_kernel(
    op: &FioOperator,
    spec: &GridSpec,
    level: usize,
    cone: Option<(&ConeCover, usize)>,
    y_ref: Point,
    form: KernelForm,
) -> Result<GridFunction> {
    if !op.is_multiplier() {
        return ConeKernelPlan::new(op, spec, level, cone, y_ref, form)?.evaluate();
    }
    let max = spec.max_level();
    if level as i32 > max {
        return Err(Error::LevelOutOfRange { level, max: max.max(0) as usize });
    }
    let origin = [0.0, 0.0];
    let coeffs = (0..spec.len())
        .map(|i| {
            let xi = spec.frequency(i);
            let band = op.profile().shell(norm(&xi), level);
            if band == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let chi = match cone {
                Some((cover, nu)) => cover.cutoff(nu, &xi, Normalization::Simple)?,
                None => 1.0,
            };
            let a = op.amplitude().eval(&origin, &xi);
            // phi(x, xi) = x.xi + phi0(xi); the adjoint form conjugates phi0.
            let phi0 = op.phase().eval(&origin, &xi);
            let theta = match form {
                KernelForm::Standard => phi0 - dot(&y_ref, &xi),
                KernelForm::Adjoint => -phi0 - dot(&y_ref, &xi),
            };
            Ok(a * Complex64::cis(theta) * (band * chi))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(inverse_transform(&Spectrum::new(*spec, coeffs)?))
}

fn nearest_image(d: Point, length: f64) -> Point {
    let wrap = |v: f64| v - length * (v / length).round();
    [wrap(d[0]), wrap(d[1])]
}

/// Smallest `C` with `|K| <= C 2^{j(m + (n+1)/2)} / envelope(x)` on the grid,
/// where `envelope = (1 + |2^j d_1|^2)^N (1 + |2^{j/2} d'|^2)^N` and
/// `d = grad_xi Phi(x, y_ref, xi_j^nu)` split along and across `xi_j^nu`.
/// The grid kernel is periodic, so `d` is reduced to its nearest periodic
/// image before weighting.
#[allow(clippy::too_many_arguments)]
pub fn envelope_fit(
    kernel: &GridFunction,
    level: usize,
    direction: Point,
    phase: &dyn Phase,
    order: f64,
    n_env: u32,
    y_ref: Point,
    form: KernelForm,
) -> f64 {
    let spec = kernel.spec();
    let n = spec.dim() as f64;
    let j = level as f64;
    let normalise = 2f64.powf(-j * (order + (n + 1.0) / 2.0));
    let (s1, s2) = (2f64.powf(j), 2f64.powf(j / 2.0));
    let mut best: f64 = 0.0;
    for (i, z) in kernel.values().iter().enumerate() {
        let x = spec.point(i);
        let grad = match form {
            KernelForm::Standard => {
                let g = phase.grad_xi(&x, &direction);
                [g[0] - y_ref[0], g[1] - y_ref[1]]
            }
            KernelForm::Adjoint => {
                let g = phase.grad_xi(&y_ref, &direction);
                [x[0] - g[0], x[1] - g[1]]
            }
        };
        let grad = nearest_image(grad, spec.length());
        let along = dot(&grad, &direction);
        let across = [grad[0] - along * direction[0], grad[1] - along * direction[1]];
        let env = (1.0 + (s1 * along).powi(2)).powi(n_env as i32) * (1.0 + (s2 * norm(&across)).powi(2)).powi(n_env as i32);
        best = best.max(z.norm() * normalise * env);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fio::{apply_multiplier, ConstantAmplitude, JapaneseAmplitude, LinearPhase, WavePhase};
    use crate::grid::pointwise_combine;
    use crate::Combine;
    use alloc::sync::Arc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cover(j: u32) -> ConeCover {
        build_directions(j, 2, BumpProfile::default()).unwrap()
    }

    fn random_xi(rng: &mut ChaCha8Rng) -> Point {
        let r = 10f64.powf(rng.gen_range(-2.0..3.0));
        let a = rng.gen_range(0.0..2.0 * PI);
        [r * a.cos(), r * a.sin()]
    }

    #[test]
    fn direction_counts_and_geometry() {
        let c = cover(4);
        assert_eq!(c.len(), 26);
        let theta = 2f64.powf(-2.0);
        let arc = c.min_arc_separation();
        assert!((arc - 2.0 * PI / 26.0).abs() < 1e-12);
        assert!(arc >= 0.95 * theta);
        assert!(c.min_chord_separation() >= 2.0 / PI * arc);
        assert!(c.covering_radius() <= theta / 2.0);
        for j in 1..=6 {
            let ratio = cover(j + 2).len() as f64 / cover(j).len() as f64;
            assert!((1.8..=2.2).contains(&ratio), "j={j}: {ratio}");
        }
        assert_eq!(build_directions(3, 1, BumpProfile::default()).unwrap().len(), 2);
        assert!(build_directions(0, 2, BumpProfile::default()).is_err());
        assert!(build_directions(2, 3, BumpProfile::default()).is_err());
    }

    #[test]
    fn covering_by_exhaustive_scan() {
        for j in 1..=7 {
            let c = cover(j);
            let theta = 2f64.powf(-(j as f64) / 2.0);
            for i in 0..5000 {
                let a = 2.0 * PI * i as f64 / 5000.0;
                let u = [a.cos(), a.sin()];
                let nearest = c.directions().iter().map(|d| (u[0] - d[0]).hypot(u[1] - d[1])).fold(f64::MAX, f64::min);
                assert!(nearest < theta);
            }
        }
    }

    #[test]
    fn partitions_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for j in 1..=7 {
            let c = cover(j);
            for _ in 0..500 {
                let xi = random_xi(&mut rng);
                let simple: f64 = c.cutoffs(&xi, Normalization::Simple).unwrap().iter().sum();
                let quad: f64 = c.cutoffs(&xi, Normalization::Quadratic).unwrap().iter().map(|v| v * v).sum();
                assert!((simple - 1.0).abs() <= 1e-12 && (quad - 1.0).abs() <= 1e-12);
            }
        }
        let one_d = build_directions(2, 1, BumpProfile::default()).unwrap();
        assert_eq!(one_d.cutoffs(&[-3.0, 0.0], Normalization::Simple).unwrap(), [0.0, 1.0]);
        assert!(c_zero_fails());
    }

    fn c_zero_fails() -> bool {
        cover(3).cutoff(0, &[0.0, 0.0], Normalization::Simple).is_err()
    }

    #[test]
    fn cutoff_dominates_on_its_axis() {
        // eta_nu = 1 on its axis, but so is the eta of every direction within
        // 2^{-j/2}, so chi is only maximal there
        for j in 5..=7 {
            let c = cover(j);
            for nu in [0, 3, c.len() - 1] {
                let d = c.directions()[nu];
                let all = c.cutoffs(&[7.0 * d[0], 7.0 * d[1]], Normalization::Simple).unwrap();
                assert!(all[nu] >= 0.2 && all.iter().all(|&v| v <= all[nu]));
            }
        }
    }

    #[test]
    fn support_inside_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = cover(5);
        for _ in 0..10_000 {
            let xi = random_xi(&mut rng);
            let nu = rng.gen_range(0..c.len());
            if !c.in_cone(nu, &xi).unwrap() {
                assert_eq!(c.cutoff(nu, &xi, Normalization::Simple).unwrap(), 0.0);
                assert_eq!(c.cutoff(nu, &xi, Normalization::Quadratic).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn derivative_probes() {
        let zeroth = cover(4).cutoff_derivative_probe(2, [0, 0], Normalization::Simple).unwrap();
        assert!((0.2..=1.0 + 1e-12).contains(&zeroth));
        // chi is 0-homogeneous: no radial variation
        let c = cover(5);
        let d = c.directions()[1];
        let perp_angle = d[1].atan2(d[0]) + 0.05;
        let u = [perp_angle.cos(), perp_angle.sin()];
        let at = |r: f64| c.cutoff(1, &[r * u[0], r * u[1]], Normalization::Simple).unwrap();
        let radial = (at(10.0 + 1e-4) - at(10.0 - 1e-4)) / 2e-4;
        assert!(radial.abs() < 1e-6);
        let consts: alloc::vec::Vec<f64> = (3..=7)
            .map(|j| {
                cover(j)
                    .cutoff_derivative_probe(0, [1, 0], Normalization::Simple)
                    .unwrap()
                    .max(cover(j).cutoff_derivative_probe(0, [0, 1], Normalization::Simple).unwrap())
            })
            .collect();
        let (lo, hi) = consts.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi.is_finite() && hi / lo <= 4.0, "{consts:?}");
    }

    fn op(phase: impl Phase + 'static) -> FioOperator {
        FioOperator::new(Arc::new(ConstantAmplitude::one()), Arc::new(phase))
    }

    #[test]
    fn linear_kernel_matches_multiplier_on_delta() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let c = cover(3);
        let t = op(LinearPhase);
        let direct =
            ConeKernelPlan::new(&t, &spec, 3, Some((&c, 2)), [0.0, 0.0], KernelForm::Standard).unwrap().evaluate().unwrap();
        let symbol: alloc::vec::Vec<Complex64> = (0..spec.len())
            .map(|i| {
                let xi = spec.frequency(i);
                let band = t.profile().shell(norm(&xi), 3);
                if band == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(band * c.cutoff(2, &xi, Normalization::Simple).unwrap(), 0.0)
                }
            })
            .collect();
        let delta = GridFunction::from_fn(spec, |x| {
            if x == [0.0, 0.0] {
                Complex64::new(1.0 / spec.cell_volume(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let oracle = apply_multiplier(&symbol, &delta).unwrap();
        assert!(direct.max_abs_diff(&oracle) <= 1e-10 * oracle.max_abs());
    }

    #[test]
    fn fast_path_matches_quadrature_and_translates() {
        let spec = GridSpec::new(2, 4.0, 32).unwrap();
        let c = cover(2);
        let h = spec.spacing();
        for form in [KernelForm::Standard, KernelForm::Adjoint] {
            let t = op(WavePhase { t: 0.5 });
            let y = [4.0 * h, -2.0 * h];
            let fast = cone_kernel(&t, &spec, 2, Some((&c, 5)), y, form).unwrap();
            let direct = ConeKernelPlan::new(&t, &spec, 2, Some((&c, 5)), y, form).unwrap().evaluate().unwrap();
            assert!(fast.max_abs_diff(&direct) <= 1e-10 * direct.max_abs(), "{form:?}");
            let at_origin = cone_kernel(&t, &spec, 2, Some((&c, 5)), [0.0, 0.0], form).unwrap();
            assert!(fast.max_abs_diff(&at_origin.shifted([-4, 2])) <= 1e-10 * direct.max_abs());
        }
    }

    #[test]
    fn zero_amplitude_gives_zero_kernel() {
        let spec = GridSpec::new(2, 4.0, 32).unwrap();
        let t = FioOperator::new(Arc::new(ConstantAmplitude::zero()), Arc::new(WavePhase { t: 1.0 }));
        let k = cone_kernel(&t, &spec, 2, Some((&cover(2), 0)), [0.0, 0.0], KernelForm::Standard).unwrap();
        assert_eq!(k.max_abs(), 0.0);
    }

    #[test]
    fn cone_kernels_reassemble_band_kernel() {
        let spec = GridSpec::new(2, 4.0, 32).unwrap();
        let c = cover(2);
        let t = FioOperator::new(Arc::new(JapaneseAmplitude { m: 0.5 }), Arc::new(crate::fio::AnisotropicPhase::default()));
        let y = [0.25, -0.5];
        let full = ConeKernelPlan::new(&t, &spec, 2, None, y, KernelForm::Standard).unwrap().evaluate().unwrap();
        let mut acc = GridFunction::zeros(spec);
        for nu in 0..c.len() {
            let k = cone_kernel(&t, &spec, 2, Some((&c, nu)), y, KernelForm::Standard).unwrap();
            acc = pointwise_combine(&acc, &k, Combine::Add, 1.0.into(), 1.0.into()).unwrap();
        }
        assert!(acc.max_abs_diff(&full) <= 1e-9 * full.max_abs());
    }

    #[test]
    fn envelope_scales_with_amplitude_order() {
        let spec = GridSpec::new(2, 4.0, 128).unwrap();
        let j = 4;
        let c = cover(j as u32);
        let nu = 3;
        let dir = c.directions()[nu];
        let base = FioOperator::new(Arc::new(JapaneseAmplitude { m: 0.0 }), Arc::new(WavePhase { t: 1.0 }));
        let lifted = FioOperator::new(Arc::new(JapaneseAmplitude { m: 1.0 }), Arc::new(WavePhase { t: 1.0 }));
        let k0 = cone_kernel(&base, &spec, j, Some((&c, nu)), [0.0, 0.0], KernelForm::Standard).unwrap();
        let k1 = cone_kernel(&lifted, &spec, j, Some((&c, nu)), [0.0, 0.0], KernelForm::Standard).unwrap();
        let c0 = envelope_fit(&k0, j, dir, base.phase(), 0.0, 2, [0.0, 0.0], KernelForm::Standard);
        let c1 = envelope_fit(&k1, j, dir, lifted.phase(), 1.0, 2, [0.0, 0.0], KernelForm::Standard);
        // <xi> ~ 2^j on the shell, up to the shell width
        let ratio = c1 / c0;
        assert!((0.5..=2.0).contains(&ratio), "{ratio}");
    }
}
