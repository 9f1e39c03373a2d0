//! Test data for the experiments.
//!
//! Every member is a pure function of `(seed, member index, level)`: the
//! random stream of member `k` is ChaCha8 seeded with `seed` on stream `k`,
//! so members can be generated in any order or in parallel.

use fiolab_core::cones::{build_directions, Normalization};
use fiolab_core::wave::{focusing_data, random_band_limited, CauchyData};
use fiolab_core::{Complex64, DyadicCutoffFamily, GridFunction, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub fn member_rng(seed: u64, member: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingCorpus {
    /// Independent uniform coefficients on every lattice mode, so that the
    /// spectrum is statistically flat under every cutoff.
    Random,
    /// `f^ = e^{-i t|xi| - i x0.xi} sum_j c_j psi_j`, which the wave phase
    /// focuses onto a bump at `x0`.
    Focusing,
    /// `f^ = psi_j chi_j^nu e^{-i x0.xi}`: one cone of one shell.
    Knapp,
}

impl ScalingCorpus {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "random" => Ok(Self::Random),
            "focusing" => Ok(Self::Focusing),
            "knapp" => Ok(Self::Knapp),
            other => Err(Error::Config(format!("unknown scaling corpus {other:?} (expected random, focusing, knapp)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::Focusing => "focusing",
            Self::Knapp => "knapp",
        }
    }

    /// Whether members depend on the level being probed.
    pub fn per_level(self) -> bool {
        self == Self::Knapp
    }
}

fn random_offset(rng: &mut ChaCha8Rng, family: &DyadicCutoffFamily) -> [f64; 2] {
    let spec = family.spec();
    let reach = spec.length() / 8.0;
    let second = if spec.dim() == 2 { rng.gen_range(-reach..reach) } else { 0.0 };
    [rng.gen_range(-reach..reach), second]
}

fn from_spectrum(
    family: &DyadicCutoffFamily,
    mut coeff: impl FnMut([f64; 2], usize) -> Result<Complex64>,
) -> Result<GridFunction> {
    let spec = *family.spec();
    let coeffs = (0..spec.len()).map(|i| coeff(spec.frequency(i), i)).collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::new(spec, coeffs)?.inverse())
}

/// Member `member` of a scaling corpus probed at level `level`; `t` is the
/// focusing time.
pub fn scaling_member(
    kind: ScalingCorpus,
    family: &DyadicCutoffFamily,
    seed: u64,
    member: usize,
    level: usize,
    t: f64,
) -> Result<GridFunction> {
    let top = family.max_level();
    match kind {
        ScalingCorpus::Random => {
            let mut rng = member_rng(seed, member);
            from_spectrum(family, |_, _| Ok(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        }
        ScalingCorpus::Focusing => {
            let mut rng = member_rng(seed, member);
            let x0 = random_offset(&mut rng, family);
            let weights: Vec<f64> = (0..=top).map(|_| rng.gen_range(0.5..1.5)).collect();
            let psi: Vec<&[f64]> = (0..=top).map(|j| family.psi(j)).collect::<fiolab_core::Result<_>>()?;
            from_spectrum(family, |xi, i| {
                let shell: f64 = psi.iter().zip(&weights).map(|(p, c)| p[i] * c).sum();
                let r = xi[0].hypot(xi[1]);
                Ok(Complex64::cis(-t * r - x0[0] * xi[0] - x0[1] * xi[1]) * shell)
            })
        }
        ScalingCorpus::Knapp => {
            let mut rng = member_rng(seed, member);
            let dim = family.spec().dim();
            let cover = build_directions(level.max(1) as u32, dim, family.profile().clone())?;
            let nu = rng.gen_range(0..cover.len());
            let x0 = random_offset(&mut rng, family);
            let psi = family.psi(level)?;
            from_spectrum(family, |xi, i| {
                if psi[i] == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let chi = cover.cutoff(nu, &xi, Normalization::Simple)?;
                Ok(Complex64::cis(-x0[0] * xi[0] - x0[1] * xi[1]) * (psi[i] * chi))
            })
        }
    }
}

/// Wave-sweep corpus of `size` members: random position and velocity on
/// the shells `shells`, except that the last two members (when `size >= 4`)
/// are focusing data at the two top shells with zero velocity.
pub fn wave_member(
    family: &DyadicCutoffFamily,
    shells: std::ops::RangeInclusive<usize>,
    seed: u64,
    size: usize,
    member: usize,
) -> Result<CauchyData> {
    let (lo, hi) = (*shells.start(), *shells.end());
    let focusing = size >= 4 && member + 2 >= size;
    if focusing {
        let level = if member + 1 == size { hi } else { hi.saturating_sub(1).max(lo) };
        let f0 = focusing_data(family, level, 1.0)?;
        let f1 = GridFunction::zeros(*family.spec());
        return Ok(CauchyData::new(f0, f1)?);
    }
    let mut rng = member_rng(seed, member);
    let (s0, s1): (u64, u64) = (rng.gen(), rng.gen());
    Ok(CauchyData::new(random_band_limited(family, lo..=hi, s0)?, random_band_limited(family, lo..=hi, s1)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fiolab_core::{BumpProfile, GridSpec};

    fn family() -> DyadicCutoffFamily {
        DyadicCutoffFamily::build(GridSpec::new(2, 4.0, 128).unwrap(), BumpProfile::default()).unwrap()
    }

    #[test]
    fn members_are_reproducible_and_distinct() {
        let fam = family();
        for kind in [ScalingCorpus::Random, ScalingCorpus::Focusing, ScalingCorpus::Knapp] {
            let a = scaling_member(kind, &fam, 9, 1, 3, 1.0).unwrap();
            let b = scaling_member(kind, &fam, 9, 1, 3, 1.0).unwrap();
            let c = scaling_member(kind, &fam, 9, 2, 3, 1.0).unwrap();
            assert_eq!(a.values(), b.values(), "{}", kind.name());
            assert!(a.max_abs_diff(&c) > 1e-6, "{}", kind.name());
        }
    }

    #[test]
    fn knapp_member_lives_on_one_shell() {
        let fam = family();
        let f = scaling_member(ScalingCorpus::Knapp, &fam, 4, 0, 3, 1.0).unwrap();
        let spec = *fam.spec();
        let spectrum = f.forward();
        for (i, c) in spectrum.coeffs().iter().enumerate() {
            let r = spec.frequency(i);
            let r = r[0].hypot(r[1]);
            if !(4.0 - 1e-9..=16.0 + 1e-9).contains(&r) {
                assert!(c.norm() < 1e-9 * spec.volume(), "mode at |xi| = {r} has {c}");
            }
        }
    }

    #[test]
    fn wave_corpus_ends_with_focusing_data() {
        let fam = family();
        let last = wave_member(&fam, 2..=3, 1, 6, 5).unwrap();
        assert_eq!(last.velocity().max_abs(), 0.0);
        let first = wave_member(&fam, 2..=3, 1, 6, 0).unwrap();
        assert!(first.velocity().max_abs() > 0.0);
    }

    #[test]
    fn unknown_corpus_is_a_config_error() {
        assert!(matches!(ScalingCorpus::parse("gaussian"), Err(Error::Config(_))));
    }
}
