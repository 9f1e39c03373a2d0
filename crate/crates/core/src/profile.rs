//! Smooth radial cutoff profiles `sigma: [0, inf) -> [0, 1]` with
//! `sigma = 1` on `[0, 1]` and `sigma = 0` on `[2, inf)`.
//!
//! The canonical profile integrates the mollifier `rho(u) = exp(-1/(1-u^2))`:
//!
//! ```text
//! G(v)     = int_{-1}^{v} rho / int_{-1}^{1} rho
//! sigma(t) = 1 - G(2(t-1) - 1)        for 1 < t < 2
//! ```
//!
//! Integrals are evaluated with 40-point Gauss-Legendre panels of width 1/4;
//! cumulative panel sums are precomputed, so one evaluation costs a single
//! partial panel. Absolute accuracy is below `1e-15`. Because `rho` is even,
//! `sigma(t) = G(-(2(t-1)-1))` on the upper half of the transition, which keeps
//! full relative accuracy as `sigma -> 0`.
//!
//! [`ProfileKind::SmoothStep`] is a second admissible profile,
//! `g(2-t)/(g(2-t)+g(t-1))` with `g(s) = exp(-1/s)`, used to check that
//! norm values do not depend on the choice beyond bounded factors.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::quadrature::{gauss_legendre, integrate};

const PANEL_WIDTH: f64 = 0.25;
const PANELS_TO_ORIGIN: usize = 4;
const PANEL_NODES: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Mollifier,
    SmoothStep,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BumpProfile {
    kind: ProfileKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `int_{-1}^{-1 + k/4} rho` for `k = 0..=4`.
    cumulative: [f64; PANELS_TO_ORIGIN + 1],
}

fn mollifier(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

fn smooth_step_factor(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

impl Default for BumpProfile {
    fn default() -> Self {
        Self::new(ProfileKind::Mollifier)
    }
}

impl BumpProfile {
    pub fn new(kind: ProfileKind) -> Self {
        Self::with_nodes(kind, PANEL_NODES)
    }

    fn with_nodes(kind: ProfileKind, nodes_per_panel: usize) -> Self {
        let (nodes, weights) = gauss_legendre(nodes_per_panel);
        let mut cumulative = [0.0; PANELS_TO_ORIGIN + 1];
        for k in 0..PANELS_TO_ORIGIN {
            let a = -1.0 + k as f64 * PANEL_WIDTH;
            cumulative[k + 1] = cumulative[k] + integrate(&nodes, &weights, a, a + PANEL_WIDTH, mollifier);
        }
        Self { kind, nodes, weights, cumulative }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Normalized `G(v)` for `v <= 0`.
    fn lower_mass(&self, v: f64) -> f64 {
        debug_assert!(v <= 0.0);
        if v <= -1.0 {
            return 0.0;
        }
        let total_half = self.cumulative[PANELS_TO_ORIGIN];
        let k = (((v + 1.0) / PANEL_WIDTH).floor() as usize).min(PANELS_TO_ORIGIN - 1);
        let a = -1.0 + k as f64 * PANEL_WIDTH;
        let partial = integrate(&self.nodes, &self.weights, a, v, mollifier);
        0.5 * (self.cumulative[k] + partial) / total_half
    }

    /// `sigma(t)`; exactly 1 for `t <= 1` and exactly 0 for `t >= 2`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 1.0;
        }
        if t >= 2.0 {
            return 0.0;
        }
        match self.kind {
            ProfileKind::Mollifier => {
                let v = 2.0 * (t - 1.0) - 1.0;
                if v > 0.0 {
                    self.lower_mass(-v)
                } else {
                    1.0 - self.lower_mass(v)
                }
            }
            ProfileKind::SmoothStep => {
                let up = smooth_step_factor(2.0 - t);
                let down = smooth_step_factor(t - 1.0);
                up / (up + down)
            }
        }
    }

    /// `psi_0(2^-level xi)` for a frequency of modulus `radius`.
    pub fn dilated(&self, radius: f64, level: i32) -> f64 {
        self.eval(radius * 2f64.powi(-level))
    }

    /// `psi_j(xi)` from the telescoping definition (`j = 0` gives `psi_0`).
    pub fn shell(&self, radius: f64, level: usize) -> f64 {
        if level == 0 {
            self.eval(radius)
        } else {
            let j = level as i32;
            self.dilated(radius, j) - self.dilated(radius, j - 1)
        }
    }
}

/// `exp(1 - 1/(1 - rho^2))` for `rho < 1`, else 0: a smooth window with peak 1
/// at the origin and compact support in the unit ball.
pub fn ball_window(rho: f64) -> f64 {
    let rho2 = rho * rho;
    if rho2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - rho2)).exp()
    }
}
