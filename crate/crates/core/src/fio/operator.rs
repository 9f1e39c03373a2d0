use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::amplitude::Amplitude;
use super::phase::Phase;
use crate::error::{Error, Result};
use crate::grid::{forward_transform, inverse_transform, norm, GridFunction, GridSpec, Point};
use crate::profile::BumpProfile;

/// Frequency window applied before the operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    All,
    /// `psi_0(xi)`
    Low,
    /// `1 - psi_0(xi)`
    High,
    /// `psi_j(xi) (1 - psi_0(2 xi))`, the Littlewood-Paley piece of level `j`.
    Band(usize),
}

impl Window {
    pub fn weight(self, profile: &BumpProfile, xi: &Point) -> f64 {
        let r = norm(xi);
        match self {
            Window::All => 1.0,
            Window::Low => profile.eval(r),
            Window::High => 1.0 - profile.eval(r),
            Window::Band(j) => profile.shell(r, j) * (1.0 - profile.eval(2.0 * r)),
        }
    }
}

/// `T f(x) = int window(xi) a(x, xi) e^{i phi(x, xi)} f^(xi) dxi / (2 pi)^n`.
#[derive(Clone, Debug)]
pub struct FioOperator {
    amplitude: Arc<dyn Amplitude>,
    phase: Arc<dyn Phase>,
    window: Window,
    profile: BumpProfile,
}

impl FioOperator {
    pub fn new(amplitude: Arc<dyn Amplitude>, phase: Arc<dyn Phase>) -> Self {
        Self { amplitude, phase, window: Window::All, profile: BumpProfile::default() }
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn with_profile(mut self, profile: BumpProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn amplitude(&self) -> &dyn Amplitude {
        self.amplitude.as_ref()
    }

    pub fn phase(&self) -> &dyn Phase {
        self.phase.as_ref()
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    /// True when the operator is a Fourier multiplier (x-independent
    /// amplitude and a translation-form phase).
    pub fn is_multiplier(&self) -> bool {
        self.amplitude.is_x_independent() && self.phase.is_translation_form()
    }

    /// Lattice symbol `window a(0, xi) e^{i phi(0, xi)}` (phase 0 at `xi = 0`),
    /// or `None` if the operator is not a multiplier.
    pub fn multiplier_symbol(&self, spec: &GridSpec) -> Option<Result<Vec<Complex64>>> {
        if !self.is_multiplier() {
            return None;
        }
        let origin = [0.0, 0.0];
        Some(
            (0..spec.len())
                .map(|i| {
                    let xi = spec.frequency(i);
                    let w = self.window.weight(&self.profile, &xi);
                    if w == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    let a = self.amplitude.eval(&origin, &xi);
                    let phi = if xi == origin { 0.0 } else { self.phase.eval(&origin, &xi) };
                    let value = a * Complex64::cis(phi) * w;
                    if value.re.is_finite() && value.im.is_finite() {
                        Ok(value)
                    } else {
                        Err(Error::Evaluation { what: "multiplier symbol", x: origin, xi })
                    }
                })
                .collect(),
        )
    }
}

/// Split a full operator into its `psi_0` and `1 - psi_0` parts.
pub fn split_low_high(op: &FioOperator) -> Result<(FioOperator, FioOperator)> {
    if op.window != Window::All {
        return Err(Error::Parameter(format!("cannot split an operator already windowed by {:?}", op.window)));
    }
    Ok((op.clone().with_window(Window::Low), op.clone().with_window(Window::High)))
}

/// Direct-quadrature evaluation plan: the windowed, weighted spectrum of `f`
/// sorted by `(|k|^2, k)`. [`FioPlan::value_at`] is independent per output
/// point, so the points may be evaluated in any order or in parallel.
pub struct FioPlan<'a> {
    op: &'a FioOperator,
    spec: GridSpec,
    terms: Vec<(Point, Complex64)>,
}

impl<'a> FioPlan<'a> {
    pub fn new(op: &'a FioOperator, f: &GridFunction) -> Self {
        let spec = *f.spec();
        let spectrum = forward_transform(f);
        let weight = spec.lattice_weight();
        let mut keyed: Vec<([i64; 2], Point, Complex64)> = spectrum
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let xi = spec.frequency(i);
                let c = c * (weight * op.window.weight(&op.profile, &xi));
                (c != Complex64::new(0.0, 0.0)).then(|| (spec.wavenumber(i), xi, c))
            })
            .collect();
        keyed.sort_by_key(|(k, _, _)| (k[0] * k[0] + k[1] * k[1], k[0], k[1]));
        Self { op, spec, terms: keyed.into_iter().map(|(_, xi, c)| (xi, c)).collect() }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Number of nonzero quadrature terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `T f` at the sample with flat index `idx`.
    pub fn value_at(&self, idx: usize) -> Result<Complex64> {
        let x = self.spec.point(idx);
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi, c) in &self.terms {
            let a = self.op.amplitude.eval(&x, xi);
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::Evaluation { what: "amplitude", x, xi: *xi });
            }
            let phi = if xi[0] == 0.0 && xi[1] == 0.0 { 0.0 } else { self.op.phase.eval(&x, xi) };
            if !phi.is_finite() {
                return Err(Error::Evaluation { what: "phase", x, xi: *xi });
            }
            acc += a * Complex64::cis(phi) * c;
        }
        Ok(acc)
    }

    /// Evaluate every output point sequentially.
    pub fn evaluate(&self) -> Result<GridFunction> {
        let values = (0..self.spec.len()).map(|i| self.value_at(i)).collect::<Result<Vec<_>>>()?;
        Ok(GridFunction::from_parts(self.spec, values))
    }
}

/// `T f` by direct frequency quadrature, `O(N^{2n})`.
pub fn apply_fio(op: &FioOperator, f: &GridFunction) -> Result<GridFunction> {
    FioPlan::new(op, f).evaluate()
}

/// `T f` through the multiplier fast path when the operator allows it,
/// otherwise by direct quadrature.
pub fn apply(op: &FioOperator, f: &GridFunction) -> Result<GridFunction> {
    match op.multiplier_symbol(f.spec()) {
        Some(symbol) => apply_multiplier(&symbol?, f),
        None => apply_fio(op, f),
    }
}

/// `inverse(symbol * forward(f))`.
pub fn apply_multiplier(symbol: &[Complex64], f: &GridFunction) -> Result<GridFunction> {
    if symbol.len() != f.spec().len() {
        return Err(Error::Structural(format!("symbol has {} entries, grid has {}", symbol.len(), f.spec().len())));
    }
    if symbol.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Parameter("non-finite multiplier symbol".into()));
    }
    Ok(inverse_transform(&forward_transform(f).multiplied(symbol)))
}

/// `m_c(p) = -(n - 1) |1/p - 1/2|`, with `1/inf = 0`.
pub fn critical_order(p: f64, n: usize) -> Result<f64> {
    crate::grid::check_exponent(p)?;
    if n == 0 {
        return Err(Error::Parameter("dimension must be at least 1".into()));
    }
    let inv = if p == f64::INFINITY { 0.0 } else { 1.0 / p };
    Ok(-((n - 1) as f64) * (inv - 0.5).abs())
}
