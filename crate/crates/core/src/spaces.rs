//! Besov-Lipschitz and Triebel-Lizorkin quasi-norms, truncated at the largest
//! resolvable level `J` of the grid.
//!
//! ```text
//! B^s_{p,q}:  ( sum_j 2^{jqs} ||psi_j(D) f||_p^q )^{1/q}
//! F^s_{p,q}:  || ( sum_j 2^{jqs} |psi_j(D) f|^q )^{1/q} ||_p
//! ```
//!
//! `q = inf` (and `p = inf`) use the maximum over the finite index set. For
//! `F` with `p = inf` only `q = 2` is accepted, evaluated with the same formula.
//!
//! Computing the bands dominates the cost, so [`BandDecomposition`] keeps
//! them and evaluates any number of `(s, p, q)` triples afterwards.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{check_exponent, forward_transform, inverse_transform, lp_of_moduli, norm, GridFunction};
use crate::littlewood_paley::DyadicCutoffFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Besov,
    TriebelLizorkin,
}

impl SpaceKind {
    pub fn label(self) -> &'static str {
        match self {
            SpaceKind::Besov => "B",
            SpaceKind::TriebelLizorkin => "F",
        }
    }
}

/// `(kind, s, p, q)`; validated on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceParams {
    kind: SpaceKind,
    s: f64,
    p: f64,
    q: f64,
}

impl SpaceParams {
    pub fn new(kind: SpaceKind, s: f64, p: f64, q: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::Parameter(format!("smoothness must be finite, got {s}")));
        }
        check_exponent(p)?;
        check_exponent(q)?;
        if kind == SpaceKind::TriebelLizorkin && p == f64::INFINITY && q != 2.0 {
            return Err(Error::Parameter(format!("F^s_(inf,q) is only supported for q = 2, got q = {q}")));
        }
        Ok(Self { kind, s, p, q })
    }

    pub fn besov(s: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(SpaceKind::Besov, s, p, q)
    }

    pub fn triebel(s: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(SpaceKind::TriebelLizorkin, s, p, q)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Same space with smoothness `s + ds`.
    pub fn shifted(&self, ds: f64) -> Self {
        Self { s: self.s + ds, ..*self }
    }
}

/// The bands `psi_j(D) f`, `j = 0..=J`, of one function.
#[derive(Clone, Debug)]
pub struct BandDecomposition {
    bands: Vec<GridFunction>,
    cell: f64,
}

impl BandDecomposition {
    pub fn new(f: &GridFunction, family: &DyadicCutoffFamily) -> Result<Self> {
        family.spec().check_same(f.spec())?;
        let spectrum = forward_transform(f);
        let bands = (0..=family.max_level()).map(|j| family.band_of_spectrum(&spectrum, j)).collect::<Result<Vec<_>>>()?;
        Ok(Self { bands, cell: f.spec().cell_volume() })
    }

    pub fn bands(&self) -> &[GridFunction] {
        &self.bands
    }

    pub fn max_level(&self) -> usize {
        self.bands.len() - 1
    }

    /// `||psi_j(D) f||_p` for every level.
    pub fn band_norms(&self, p: f64) -> Result<Vec<f64>> {
        check_exponent(p)?;
        Ok(self.bands.iter().map(|b| lp_of_moduli(b.values().iter().map(|z| z.norm()), p, self.cell)).collect())
    }

    pub fn norm(&self, params: &SpaceParams) -> f64 {
        match params.kind {
            SpaceKind::Besov => self.besov(params),
            SpaceKind::TriebelLizorkin => self.triebel(params),
        }
    }

    fn besov(&self, params: &SpaceParams) -> f64 {
        let weighted = self.bands.iter().enumerate().map(|(j, b)| {
            2f64.powf(j as f64 * params.s) * lp_of_moduli(b.values().iter().map(|z| z.norm()), params.p, self.cell)
        });
        lp_of_moduli(weighted, params.q, 1.0)
    }

    fn triebel(&self, params: &SpaceParams) -> f64 {
        let weights: Vec<f64> = (0..self.bands.len()).map(|j| 2f64.powf(j as f64 * params.s)).collect();
        let len = self.bands[0].values().len();
        let pointwise =
            (0..len).map(|i| lp_of_moduli(self.bands.iter().zip(&weights).map(|(b, w)| w * b.values()[i].norm()), params.q, 1.0));
        lp_of_moduli(pointwise, params.p, self.cell)
    }
}

/// `||f||_{B^s_{p,q}}`; `params` must be of Besov kind.
pub fn besov_norm(f: &GridFunction, params: &SpaceParams, family: &DyadicCutoffFamily) -> Result<f64> {
    if params.kind != SpaceKind::Besov {
        return Err(Error::Parameter("besov_norm called with Triebel-Lizorkin parameters".into()));
    }
    Ok(BandDecomposition::new(f, family)?.norm(params))
}

/// `||f||_{F^s_{p,q}}`; `params` must be of Triebel-Lizorkin kind.
pub fn triebel_norm(f: &GridFunction, params: &SpaceParams, family: &DyadicCutoffFamily) -> Result<f64> {
    if params.kind != SpaceKind::TriebelLizorkin {
        return Err(Error::Parameter("triebel_norm called with Besov parameters".into()));
    }
    Ok(BandDecomposition::new(f, family)?.norm(params))
}

/// Either quasi-norm, dispatched on `params.kind()`.
pub fn space_norm(f: &GridFunction, params: &SpaceParams, family: &DyadicCutoffFamily) -> Result<f64> {
    Ok(BandDecomposition::new(f, family)?.norm(params))
}

/// Lattice samples of `<xi>^s = (1 + |xi|^2)^{s/2}`.
pub fn bessel_symbol(spec: &crate::GridSpec, s: f64) -> Vec<f64> {
    (0..spec.len()).map(|i| (1.0 + norm(&spec.frequency(i)).powi(2)).powf(0.5 * s)).collect()
}

/// `(1 - Laplacian)^{s/2} f`.
pub fn bessel_lift(f: &GridFunction, s: f64) -> GridFunction {
    if s == 0.0 {
        return f.clone();
    }
    let symbol = bessel_symbol(f.spec(), s);
    inverse_transform(&forward_transform(f).multiplied_real(&symbol))
}

/// `(1 + |xi|^2)^{1/2}`.
pub fn japanese_bracket(xi: &crate::Point) -> f64 {
    (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).sqrt()
}
