//! Dyadic frequency cutoffs and band projections.
//!
//! `psi_0` is the radial profile itself; for `j >= 1`
//! `psi_j(xi) = psi_0(2^-j xi) - psi_0(2^-(j-1) xi)`, supported in the shell
//! `2^(j-1) <= |xi| <= 2^(j+1)`. The family is sampled on the frequency lattice
//! for `j = 0..=J` (plus `J + 1`, needed by `Psi_J`).
//!
//! `Psi_j = psi_(j-1) + psi_j + psi_(j+1)` equals one on the support of
//! `psi_j`. For `j = 0` we take `Psi_0 = psi_0 + psi_1`; the literal convention
//! `psi_-1 := psi_0` would make `Psi_0 = 2` on the unit ball.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{forward_transform, inverse_transform, norm, GridFunction, GridSpec, Spectrum};
use crate::profile::BumpProfile;

/// Low-frequency multipliers built from `psi_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallMode {
    /// `psi_0(xi)`
    Unit,
    /// `psi_0(2 xi)`
    Half,
    /// `1 - psi_0(2 xi)`
    HalfComplement,
}

impl BallMode {
    pub fn weight(self, profile: &BumpProfile, radius: f64) -> f64 {
        match self {
            BallMode::Unit => profile.eval(radius),
            BallMode::Half => profile.eval(2.0 * radius),
            BallMode::HalfComplement => 1.0 - profile.eval(2.0 * radius),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DyadicCutoffFamily {
    spec: GridSpec,
    profile: BumpProfile,
    max_level: usize,
    /// `tables[j][idx] = psi_j(xi_idx)` for `j = 0..=max_level + 1`.
    tables: Vec<Vec<f64>>,
}

impl DyadicCutoffFamily {
    pub fn build(spec: GridSpec, profile: BumpProfile) -> Result<Self> {
        let max_level = spec.max_level();
        if max_level < 1 {
            return Err(Error::GridTooCoarse(format!("max level {max_level} < 1")));
        }
        let max_level = max_level as usize;
        let radii: Vec<f64> = (0..spec.len()).map(|i| norm(&spec.frequency(i))).collect();
        // dilated[l] = psi_0(2^-l xi) for l = 0..=J+1; each psi_j is a difference.
        let dilated: Vec<Vec<f64>> =
            (0..=max_level + 1).map(|l| radii.iter().map(|&r| profile.dilated(r, l as i32)).collect()).collect();
        let mut tables = Vec::with_capacity(max_level + 2);
        tables.push(dilated[0].clone());
        for j in 1..=max_level + 1 {
            tables.push(dilated[j].iter().zip(&dilated[j - 1]).map(|(a, b)| a - b).collect());
        }
        Ok(Self { spec, profile, max_level, tables })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    /// `J`, the largest resolvable level.
    pub fn max_level(&self) -> usize {
        self.max_level
    }

    fn check_level(&self, j: usize) -> Result<()> {
        if j > self.max_level {
            Err(Error::LevelOutOfRange { level: j, max: self.max_level })
        } else {
            Ok(())
        }
    }

    /// Lattice samples of `psi_j`.
    pub fn psi(&self, j: usize) -> Result<&[f64]> {
        self.check_level(j)?;
        Ok(&self.tables[j])
    }

    /// Lattice samples of `Psi_j`.
    pub fn big_psi(&self, j: usize) -> Result<Vec<f64>> {
        self.check_level(j)?;
        let lower: Option<&Vec<f64>> = if j == 0 { None } else { Some(&self.tables[j - 1]) };
        Ok((0..self.spec.len()).map(|i| self.tables[j][i] + self.tables[j + 1][i] + lower.map_or(0.0, |t| t[i])).collect())
    }

    /// `sum_{j <= J} psi_j`, which telescopes to `psi_0(2^-J xi)`.
    pub fn level_sum(&self) -> Vec<f64> {
        (0..self.spec.len()).map(|i| (0..=self.max_level).map(|j| self.tables[j][i]).sum()).collect()
    }

    pub fn ball_table(&self, mode: BallMode) -> Vec<f64> {
        (0..self.spec.len()).map(|i| mode.weight(&self.profile, norm(&self.spec.frequency(i)))).collect()
    }

    /// `psi_j(D) f` from an already computed spectrum.
    pub fn band_of_spectrum(&self, spectrum: &Spectrum, j: usize) -> Result<GridFunction> {
        self.spec.check_same(spectrum.spec())?;
        Ok(inverse_transform(&spectrum.multiplied_real(self.psi(j)?)))
    }

    /// `psi_j(D) f`.
    pub fn band_project(&self, f: &GridFunction, j: usize) -> Result<GridFunction> {
        self.spec.check_same(f.spec())?;
        self.band_of_spectrum(&forward_transform(f), j)
    }

    /// `Psi_j(D) f`.
    pub fn big_band_project(&self, f: &GridFunction, j: usize) -> Result<GridFunction> {
        self.spec.check_same(f.spec())?;
        Ok(inverse_transform(&forward_transform(f).multiplied_real(&self.big_psi(j)?)))
    }

    /// `psi_0(D) f`, `psi_0(2D) f` or `(1 - psi_0(2D)) f`.
    pub fn ball_project(&self, f: &GridFunction, mode: BallMode) -> Result<GridFunction> {
        self.spec.check_same(f.spec())?;
        Ok(inverse_transform(&forward_transform(f).multiplied_real(&self.ball_table(mode))))
    }

    /// Radial cutoff table: rows `(|xi|, psi_0(|xi|), ..., psi_J(|xi|))` on
    /// `count` equispaced radii in `[0, 2^(J+1)]`.
    pub fn radial_table(&self, count: usize) -> Vec<Vec<f64>> {
        let top = 2f64.powi(self.max_level as i32 + 1);
        (0..count)
            .map(|i| {
                let r = top * i as f64 / (count.max(2) - 1) as f64;
                let mut row = Vec::with_capacity(self.max_level + 2);
                row.push(r);
                row.extend((0..=self.max_level).map(|j| self.profile.shell(r, j)));
                row
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{dot, Point};
    use crate::profile::ProfileKind;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn family(dim: usize, samples: usize, length: f64) -> DyadicCutoffFamily {
        DyadicCutoffFamily::build(GridSpec::new(dim, length, samples).unwrap(), BumpProfile::default()).unwrap()
    }

    /// Random function whose spectrum lives in `|xi| <= radius`.
    fn band_limited(spec: GridSpec, radius: f64, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..spec.len())
            .map(|i| {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if norm(&spec.frequency(i)) <= radius {
                    c
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Spectrum::new(spec, coeffs).unwrap().inverse()
    }

    #[test]
    fn partition_of_unity() {
        for (dim, n) in [(1, 256), (2, 128)] {
            let fam = family(dim, n, 4.0);
            let top = 2f64.powi(fam.max_level() as i32);
            let sum = fam.level_sum();
            for (i, s) in sum.iter().enumerate() {
                let r = norm(&fam.spec().frequency(i));
                if r <= top {
                    assert!((s - 1.0).abs() <= 1e-13, "r={r} sum={s}");
                }
                assert!((s - fam.profile().dilated(r, fam.max_level() as i32)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn shell_support() {
        let p = BumpProfile::default();
        for i in 0..20000 {
            let r = i as f64 * 20.0 / 20000.0;
            let v = p.shell(r, 3);
            if r <= 4.0 - 1e-9 || r >= 16.0 + 1e-9 {
                assert!(v.abs() <= 1e-15, "r={r} v={v}");
            }
            assert!((-1e-15..=1.0 + 1e-15).contains(&v));
        }
    }

    #[test]
    fn big_psi_is_one_on_support() {
        let fam = family(2, 64, 2.0);
        for j in 0..=fam.max_level() {
            let psi = fam.psi(j).unwrap();
            let big = fam.big_psi(j).unwrap();
            for (a, b) in psi.iter().zip(&big) {
                assert!((a * b - a).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn almost_orthogonality() {
        let fam = family(1, 1024, 8.0);
        for j in 0..=fam.max_level() {
            for k in j + 2..=fam.max_level() {
                let (a, b) = (fam.psi(j).unwrap(), fam.psi(k).unwrap());
                assert!(a.iter().zip(b).all(|(x, y)| x * y == 0.0));
            }
        }
    }

    #[test]
    fn single_mode_in_shell_interior() {
        let fam = family(1, 512, 2.0 * core::f64::consts::PI);
        let spec = *fam.spec();
        // L = 2 pi: lattice frequencies are the integers. 3 * 2^(j-1) = 12 for j = 3.
        let j = 3;
        let idx = spec.index_of_wavenumber([12, 0]).unwrap();
        let xi0: Point = spec.frequency(idx);
        let f = GridFunction::from_fn(spec, |x| Complex64::cis(dot(&x, &xi0))).unwrap();
        let weight = fam.psi(j).unwrap()[idx];
        let out = fam.band_project(&f, j).unwrap();
        assert!(out.max_abs_diff(&f.scaled(Complex64::new(weight, 0.0))) < 1e-12);
    }

    #[test]
    fn bands_reassemble_band_limited_functions() {
        let fam = family(2, 64, 3.0);
        let spec = *fam.spec();
        let top = 2f64.powi(fam.max_level() as i32);
        let f = band_limited(spec, top, 11);
        let big_f = f.forward();
        let mut acc = GridFunction::zeros(spec);
        for j in 0..=fam.max_level() {
            let band = fam.band_of_spectrum(&big_f, j).unwrap();
            acc = crate::grid::pointwise_combine(&acc, &band, crate::Combine::Add, 1.0.into(), 1.0.into()).unwrap();
        }
        assert!(acc.max_abs_diff(&f) < 1e-12 * f.max_abs().max(1.0));
        // ball + bands >= 1 is the same identity
        let low = fam.ball_project(&f, BallMode::Unit).unwrap();
        let b0 = fam.band_project(&f, 0).unwrap();
        assert!(low.max_abs_diff(&b0) < 1e-15 * f.max_abs().max(1.0));
    }

    #[test]
    fn separated_bands_annihilate() {
        let fam = family(1, 512, 5.0);
        let f = band_limited(*fam.spec(), 1e9, 3);
        for j in 0..=fam.max_level() {
            for k in 0..=fam.max_level() {
                if j.abs_diff(k) >= 2 {
                    let g = fam.band_project(&fam.band_project(&f, j).unwrap(), k).unwrap();
                    assert!(g.max_abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn big_psi_fixes_bands() {
        let fam = family(2, 64, 2.5);
        let f = band_limited(*fam.spec(), 1e9, 7);
        for j in 0..=fam.max_level() {
            let band = fam.band_project(&f, j).unwrap();
            let again = fam.big_band_project(&band, j).unwrap();
            assert!(again.max_abs_diff(&band) < 1e-12 * band.max_abs().max(1e-300) + 1e-14);
        }
    }

    #[test]
    fn ball_modes() {
        let fam = family(1, 256, 40.0);
        let spec = *fam.spec();
        let inner = band_limited(spec, 1.0, 9);
        assert!(fam.ball_project(&inner, BallMode::Unit).unwrap().max_abs_diff(&inner) < 1e-13);
        let tiny = band_limited(spec, 0.5, 10);
        assert!(fam.ball_project(&tiny, BallMode::HalfComplement).unwrap().max_abs() < 1e-13);
        assert!(fam.ball_project(&tiny, BallMode::Half).unwrap().max_abs_diff(&tiny) < 1e-13);
    }

    #[test]
    fn projection_commutes_with_lattice_shift() {
        let fam = family(2, 32, 1.0);
        let f = band_limited(*fam.spec(), 1e9, 21);
        for j in 0..=fam.max_level() {
            let a = fam.band_project(&f.shifted([3, -5]), j).unwrap();
            let b = fam.band_project(&f, j).unwrap().shifted([3, -5]);
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn level_out_of_range() {
        let fam = family(1, 64, 1.0);
        let f = GridFunction::zeros(*fam.spec());
        assert!(matches!(fam.band_project(&f, fam.max_level() + 1), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn second_profile_builds() {
        let spec = GridSpec::new(1, 1.0, 64).unwrap();
        let fam = DyadicCutoffFamily::build(spec, BumpProfile::new(ProfileKind::SmoothStep)).unwrap();
        let sum = fam.level_sum();
        assert!(sum.iter().all(|s| (-1e-15..=1.0 + 1e-15).contains(s)));
    }
}
