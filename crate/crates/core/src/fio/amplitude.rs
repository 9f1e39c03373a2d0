use core::fmt::Debug;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::Point;
use crate::profile::ball_window;
use crate::spaces::japanese_bracket;

/// A symbol `a(x, xi)` of order `m`.
///
/// Implementations are called concurrently from several workers and must be
/// pure.
pub trait Amplitude: Debug + Send + Sync {
    fn order(&self) -> f64;

    fn eval(&self, x: &Point, xi: &Point) -> Complex64;

    /// True when `a(x, xi)` does not depend on `x`.
    fn is_x_independent(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantAmplitude(pub Complex64);

impl ConstantAmplitude {
    pub fn one() -> Self {
        Self(Complex64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }
}

impl Amplitude for ConstantAmplitude {
    fn order(&self) -> f64 {
        0.0
    }

    fn eval(&self, _x: &Point, _xi: &Point) -> Complex64 {
        self.0
    }

    fn is_x_independent(&self) -> bool {
        true
    }
}

/// `<xi>^m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JapaneseAmplitude {
    pub m: f64,
}

impl Amplitude for JapaneseAmplitude {
    fn order(&self) -> f64 {
        self.m
    }

    fn eval(&self, _x: &Point, xi: &Point) -> Complex64 {
        Complex64::new(japanese_bracket(xi).powf(self.m), 0.0)
    }

    fn is_x_independent(&self) -> bool {
        true
    }
}

/// `<xi>^m w(|x - center| / radius)` with the compact window of
/// [`ball_window`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompactXAmplitude {
    pub m: f64,
    pub center: Point,
    pub radius: f64,
}

impl Amplitude for CompactXAmplitude {
    fn order(&self) -> f64 {
        self.m
    }

    fn eval(&self, x: &Point, xi: &Point) -> Complex64 {
        let rho = (x[0] - self.center[0]).hypot(x[1] - self.center[1]) / self.radius;
        Complex64::new(ball_window(rho) * japanese_bracket(xi).powf(self.m), 0.0)
    }
}

/// Largest `|d_xi^alpha a(x, xi)| / <xi>^{m - |alpha|}` over the probes, for
/// `|alpha| <= 2`, with central differences of step `1e-3 max(1, |xi|)`.
pub fn amplitude_seminorm_probe(amplitude: &dyn Amplitude, dim: usize, x_probes: &[Point], xi_probes: &[Point]) -> f64 {
    let m = amplitude.order();
    let mut worst: f64 = 0.0;
    for x in x_probes {
        for xi in xi_probes {
            let step = 1e-3 * xi[0].hypot(xi[1]).max(1.0);
            let at = |d0: f64, d1: f64| amplitude.eval(x, &[xi[0] + d0, xi[1] + d1]);
            let bracket = japanese_bracket(xi);
            let mut record = |value: Complex64, order: i32| {
                worst = worst.max(value.norm() / bracket.powf(m - order as f64));
            };
            record(at(0.0, 0.0), 0);
            for k in 0..dim {
                let e = |s: f64| if k == 0 { (s, 0.0) } else { (0.0, s) };
                let (p, q) = (e(step), e(-step));
                record((at(p.0, p.1) - at(q.0, q.1)) / (2.0 * step), 1);
                record((at(p.0, p.1) - at(0.0, 0.0) * 2.0 + at(q.0, q.1)) / (step * step), 2);
            }
            if dim == 2 {
                let mixed = (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) / (4.0 * step * step);
                record(mixed, 2);
            }
        }
    }
    worst
}
