//! Exact identities that every build must satisfy: Fourier orthogonality,
//! inversion, partitions of unity, identity and translation operators,
//! half-wave group laws, and a few closed-form values.

use std::f64::consts::PI;
use std::sync::Arc;

use fiolab_core::atoms::make_atom;
use fiolab_core::cones::{build_directions, cone_kernel, KernelForm, Normalization};
use fiolab_core::fio::{
    apply, apply_fio, critical_order, hilbert_transform, snd_margin, split_low_high, ConstantAmplitude, FioOperator, LinearPhase,
    ShiftedPhase, WavePhase, Window,
};
use fiolab_core::grid::{lp_quasinorm, pointwise_combine};
use fiolab_core::spaces::{besov_norm, bessel_lift};
use fiolab_core::wave::{energy, half_wave, solve_wave, CauchyData, Sign};
use fiolab_core::{BallMode, BumpProfile, Combine, Complex64, DyadicCutoffFamily, GridFunction, GridSpec, SpaceParams, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Transforms,
    LittlewoodPaley,
    Operators,
    Cones,
    Wave,
    Atoms,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub group: Group,
    pub name: &'static str,
    /// Measured discrepancy (or 0/1 for boolean checks).
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.value <= self.tolerance
    }
}

fn random(spec: GridSpec, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridFunction::new(spec, (0..spec.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .expect("sizes match")
}

fn mode(spec: GridSpec, k: [i64; 2]) -> GridFunction {
    let xi = [2.0 * PI * k[0] as f64 / spec.length(), 2.0 * PI * k[1] as f64 / spec.length()];
    GridFunction::from_fn(spec, |x| Complex64::cis(x[0] * xi[0] + x[1] * xi[1])).expect("sizes match")
}

fn rel(a: &GridFunction, b: &GridFunction) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1e-300)
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn one() -> Arc<ConstantAmplitude> {
    Arc::new(ConstantAmplitude::one())
}

struct Recorder {
    group: Group,
    out: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, name: &'static str, value: f64, tolerance: f64) {
        self.out.push(Check { group: self.group, name, value, tolerance });
    }
}

pub fn run() -> Result<Vec<Check>> {
    let mut r = Recorder { group: Group::Transforms, out: Vec::new() };
    let profile = BumpProfile::default();
    let s2 = GridSpec::new(2, 6.0, 32)?;
    let s1 = GridSpec::new(1, 8.0, 64)?;
    let volume = s2.volume();

    // transforms
    let ones = GridFunction::from_real_fn(s2, |_| 1.0)?;
    let spec_ones = ones.forward();
    let zero_mode = spec_ones.coefficient([0, 0]).expect("lattice point");
    let others = spec_ones.coeffs().iter().map(|c| c.norm()).sum::<f64>() - zero_mode.norm();
    r.push("constant has only the zero mode", ((zero_mode.re - volume).abs() + others) / volume, 1e-12);
    let m = mode(s2, [3, -2]).forward();
    let at = m.coefficient([3, -2]).expect("lattice point");
    let rest = m.coeffs().iter().map(|c| c.norm()).sum::<f64>() - at.norm();
    r.push("exponential has a single coefficient", ((at.re - volume).abs() + at.im.abs() + rest) / volume, 1e-12);
    let f = random(s2, 1);
    r.push("inverse(forward(f)) = f", rel(&f.forward().inverse(), &f), 1e-12);
    let mut delta = Spectrum::zeros(s2);
    let k0 = s2.index_of_wavenumber([-4, 5]).expect("lattice point");
    delta.coeffs_mut()[k0] = Complex64::new(volume, 0.0);
    r.push("delta spectrum inverts to an exponential", rel(&delta.inverse(), &mode(s2, [-4, 5])), 1e-12);
    let indicator = GridFunction::from_real_fn(s1, |x| if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 })?;
    r.push("L^p norm of a grid-exact unit indicator", (lp_quasinorm(&indicator, 0.7)? - 1.0).abs(), 1e-12);
    let parseval = f.forward().energy().sqrt();
    r.push("L^2 norm equals Parseval", (lp_quasinorm(&f, 2.0)? / parseval - 1.0).abs(), 1e-12);
    let diff = pointwise_combine(&f, &f, Combine::Sub, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))?;
    r.push("f - f = 0", diff.max_abs(), 0.0);
    let sq = pointwise_combine(&f, &f.conj(), Combine::Mul, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))?;
    r.push(
        "f conj(f) is real and nonnegative",
        sq.values().iter().map(|z| z.im.abs() + (-z.re).max(0.0)).fold(0.0, f64::max),
        1e-15,
    );

    // Littlewood-Paley
    r.group = Group::LittlewoodPaley;
    let fam = DyadicCutoffFamily::build(GridSpec::new(2, 4.0, 128)?, profile.clone())?;
    let fspec = *fam.spec();
    let top = 2f64.powi(fam.max_level() as i32);
    let sum = fam.level_sum();
    let defect = (0..fspec.len())
        .filter(|&i| {
            let xi = fspec.frequency(i);
            xi[0].hypot(xi[1]) <= top
        })
        .map(|i| (sum[i] - 1.0).abs())
        .fold(0.0, f64::max);
    r.push("sum of psi_j is one on the resolvable ball", defect, 1e-13);
    let psi3 = fam.psi(3)?;
    let outside = (0..fspec.len())
        .filter(|&i| {
            let xi = fspec.frequency(i);
            let r = xi[0].hypot(xi[1]);
            r <= 4.0 - 1e-9 || r >= 16.0 + 1e-9
        })
        .map(|i| psi3[i].abs())
        .fold(0.0, f64::max);
    r.push("psi_3 vanishes outside [4, 16]", outside, 0.0);
    let big = fam.big_psi(3)?;
    r.push("Psi_j psi_j = psi_j", big.iter().zip(psi3).map(|(b, p)| (b * p - p).abs()).fold(0.0, f64::max), 1e-15);
    let g = random(fspec, 2);
    let smooth = fam.ball_project(&g, BallMode::Unit)?;
    let bands: Vec<GridFunction> =
        (0..=fam.max_level()).map(|j| fam.band_project(&smooth, j)).collect::<fiolab_core::Result<_>>()?;
    let mut total = GridFunction::zeros(fspec);
    for b in &bands {
        total = pointwise_combine(&total, b, Combine::Add, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))?;
    }
    r.push("bands of a low-frequency function sum to it", rel(&total, &smooth), 1e-12);
    let far = fam.band_project(&fam.band_project(&g, 2)?, 4)?;
    r.push("bands two levels apart are orthogonal", far.max_abs() / g.max_abs(), 1e-12);
    let low = mode(fspec, [0, 0]);
    r.push("psi_0(D) fixes the zero mode", rel(&fam.ball_project(&low, BallMode::Unit)?, &low), 1e-14);
    r.push("1 - psi_0(2D) kills the zero mode", fam.ball_project(&low, BallMode::HalfComplement)?.max_abs(), 1e-14);
    let params = SpaceParams::besov(1.0, 3.0, 0.5)?;
    let low_norm = besov_norm(&low, &params, &fam)?;
    r.push("Besov norm of a psi_0-band function is its L^p norm", (low_norm / lp_quasinorm(&low, 3.0)? - 1.0).abs(), 1e-12);
    r.push("Bessel lift round trip", rel(&bessel_lift(&bessel_lift(&g, 1.5), -1.5), &g), 1e-11);
    r.push("Bessel lift of order 0 is the identity", rel(&bessel_lift(&g, 0.0), &g), 1e-14);

    // operators
    r.group = Group::Operators;
    let id = FioOperator::new(one(), Arc::new(LinearPhase));
    let h = random(s2, 3);
    r.push("a = 1, phi = x.xi is the identity (quadrature)", rel(&apply_fio(&id, &h)?, &h), 1e-10);
    r.push("a = 1, phi = x.xi is the identity (multiplier)", rel(&apply(&id, &h)?, &h), 1e-12);
    let v = [2.0 * s2.spacing(), -3.0 * s2.spacing()];
    let shift = FioOperator::new(one(), Arc::new(ShiftedPhase { shift: v }));
    r.push("phi = (x + v).xi translates by v", rel(&apply(&shift, &h)?, &h.shifted([2, -3])), 1e-10);
    let (lo, hi) = split_low_high(&FioOperator::new(one(), Arc::new(WavePhase { t: 0.7 })))?;
    let both =
        pointwise_combine(&apply(&lo, &h)?, &apply(&hi, &h)?, Combine::Add, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))?;
    let full = apply(&FioOperator::new(one(), Arc::new(WavePhase { t: 0.7 })), &h)?;
    r.push("low and high parts reassemble the operator", rel(&both, &full), 1e-12);
    let fam2 = DyadicCutoffFamily::build(s2, profile.clone())?;
    r.push(
        "low part of the identity is psi_0(D)",
        rel(&apply(&id.clone().with_window(Window::Low), &h)?, &fam2.ball_project(&h, BallMode::Unit)?),
        1e-12,
    );
    let sphere: Vec<[f64; 2]> = (0..12).map(|k| [(k as f64 * 0.5).cos(), (k as f64 * 0.5).sin()]).collect();
    let probes = [[0.0, 0.0], [1.0, 2.0]];
    r.push("SND margin of x.xi is 1", (snd_margin(&LinearPhase, 2, &probes, &sphere)? - 1.0).abs(), 1e-12);
    r.push("SND margin of x.xi + t|xi| is 1", (snd_margin(&WavePhase { t: 1.0 }, 2, &probes, &sphere)? - 1.0).abs(), 1e-12);
    let c = mode(s1, [3, 0]);
    let cos = c.real_part();
    let sin = GridFunction::from_real_fn(s1, |x| (2.0 * PI * 3.0 * x[0] / s1.length()).sin())?;
    r.push("H cos = sin", rel(&hilbert_transform(&cos)?, &sin), 1e-11);
    r.push("m_c(2) = 0", critical_order(2.0, 2)?.abs(), 0.0);
    r.push("m_c(inf) = -1/2 in two dimensions", (critical_order(f64::INFINITY, 2)? + 0.5).abs(), 0.0);
    r.push("m_c(p) = 0 in one dimension", critical_order(0.6, 1)?.abs(), 0.0);

    // cones
    r.group = Group::Cones;
    let cover = build_directions(4, 2, profile.clone())?;
    r.push("26 directions at j = 4", flag(cover.len() == 26), 0.0);
    r.push(
        "covering radius at most half the angular scale",
        (cover.covering_radius() - 0.5 / cover.angular_scale()).max(0.0),
        1e-15,
    );
    // Neighbouring axes lie within 2^{-j/2}, so no cutoff reaches 1 on an
    // axis; the check is that the cone's own cutoff dominates there.
    let axis = cover.directions()[5];
    let chis = cover.cutoffs(&[8.0 * axis[0], 8.0 * axis[1]], Normalization::Simple)?;
    let own = chis[5];
    r.push("cone cutoff is maximal on its own axis", flag(chis.iter().all(|&c| c <= own)), 0.0);
    let zero_op = FioOperator::new(Arc::new(ConstantAmplitude::zero()), Arc::new(WavePhase { t: 1.0 }));
    let ck = cone_kernel(&zero_op, &s2, 2, Some((&build_directions(2, 2, profile)?, 0)), [0.0, 0.0], KernelForm::Standard)?;
    r.push("zero amplitude gives a zero kernel", ck.max_abs(), 0.0);

    // wave
    r.group = Group::Wave;
    let w = random(s2, 4);
    r.push("half-wave at t = 0 is the identity", rel(&half_wave(&w, 0.0, Sign::Plus)?, &w), 1e-14);
    r.push(
        "half-wave preserves L^2",
        (lp_quasinorm(&half_wave(&w, 1.3, Sign::Plus)?, 2.0)? / lp_quasinorm(&w, 2.0)? - 1.0).abs(),
        1e-11,
    );
    r.push(
        "half-wave group law",
        rel(&half_wave(&half_wave(&w, 0.4, Sign::Plus)?, 0.9, Sign::Plus)?, &half_wave(&w, 1.3, Sign::Plus)?),
        1e-10,
    );
    let data = CauchyData::new(w.clone(), random(s2, 5))?;
    r.push("u(0) = f0", rel(&solve_wave(&data, 0.0)?, &w), 1e-12);
    let k = [2, 1];
    let eig = CauchyData::new(mode(s2, k), GridFunction::zeros(s2))?;
    let radius = 2.0 * PI / s2.length() * ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
    let expected = mode(s2, k).scaled(Complex64::new((0.8 * radius).cos(), 0.0));
    r.push("eigenmode evolves by cos(t|xi|)", rel(&solve_wave(&eig, 0.8)?, &expected), 1e-11);
    let e0 = energy(&data, 0.0);
    let drift = [0.5, 1.0, 2.0].iter().map(|&t| (energy(&data, t) / e0 - 1.0).abs()).fold(0.0, f64::max);
    r.push("energy is conserved", drift, 1e-9);
    let none = CauchyData::new(GridFunction::zeros(s2), GridFunction::zeros(s2))?;
    r.push("zero data have zero energy", energy(&none, 1.0), 0.0);

    // atoms
    r.group = Group::Atoms;
    let atom_grid = GridSpec::new(2, 8.0, 128)?;
    let atom = make_atom(&atom_grid, [0.5, -0.25], 0.5, 0.6, 11)?;
    let worst_moment = atom.moments(atom.moment_order().unwrap_or(0)).iter().map(|m| m.1.abs()).fold(0.0, f64::max);
    r.push("atom moments vanish", worst_moment, 1e-10);
    r.push("atom size bound", (atom.sup_bound_ratio() - 1.0).max(0.0), 1e-12);
    let zero = GridFunction::zeros(atom_grid);
    let wave_op = FioOperator::new(one(), Arc::new(WavePhase { t: 1.0 })).with_window(Window::High);
    r.push("zero atom has zero image", lp_quasinorm(&apply(&wave_op, &zero)?, 0.75)?, 0.0);

    Ok(r.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let checks = run().unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.ok()).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks.len() >= 40);
    }
}
