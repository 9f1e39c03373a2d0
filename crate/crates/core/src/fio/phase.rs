use alloc::vec::Vec;
use core::fmt::Debug;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{dot, norm, Point};

/// Relative frequency step for finite differences, scaled by `|xi|`.
pub const XI_STEP: f64 = 1e-5;
/// Absolute spatial step for finite differences.
pub const X_STEP: f64 = 1e-5;

/// `d^2 phi / dx_j dxi_k`, indexed `[j][k]`.
pub type MixedHessian = [[f64; 2]; 2];

fn xi_step(xi: &Point) -> f64 {
    let r = norm(xi);
    if r > 0.0 {
        XI_STEP * r
    } else {
        XI_STEP
    }
}

fn bumped(p: &Point, axis: usize, by: f64) -> Point {
    let mut q = *p;
    q[axis] += by;
    q
}

/// A real phase `phi(x, xi)`, positively homogeneous of degree one in `xi`.
///
/// Derivatives default to central differences (relative step `1e-5 |xi|` in
/// `xi`, absolute `1e-5` in `x`); the built-in phases override them with
/// closed forms. Implementations must be pure.
pub trait Phase: Debug + Send + Sync {
    fn eval(&self, x: &Point, xi: &Point) -> f64;

    fn grad_xi(&self, x: &Point, xi: &Point) -> Point {
        let h = xi_step(xi);
        let d = |k| (self.eval(x, &bumped(xi, k, h)) - self.eval(x, &bumped(xi, k, -h))) / (2.0 * h);
        [d(0), d(1)]
    }

    fn grad_x(&self, x: &Point, xi: &Point) -> Point {
        let h = X_STEP;
        let d = |j| (self.eval(&bumped(x, j, h), xi) - self.eval(&bumped(x, j, -h), xi)) / (2.0 * h);
        [d(0), d(1)]
    }

    fn mixed_hessian(&self, x: &Point, xi: &Point) -> MixedHessian {
        let h = xi_step(xi);
        let mut out = [[0.0; 2]; 2];
        for k in 0..2 {
            let plus = self.grad_x(x, &bumped(xi, k, h));
            let minus = self.grad_x(x, &bumped(xi, k, -h));
            for (row, (p, m)) in out.iter_mut().zip(plus.iter().zip(&minus)) {
                row[k] = (p - m) / (2.0 * h);
            }
        }
        out
    }

    /// True when `phi(x, xi) = x.xi + phi(0, xi)`, which makes an
    /// x-independent operator a Fourier multiplier.
    fn is_translation_form(&self) -> bool {
        false
    }
}

/// `x.xi`
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LinearPhase;

impl Phase for LinearPhase {
    fn eval(&self, x: &Point, xi: &Point) -> f64 {
        dot(x, xi)
    }

    fn grad_xi(&self, x: &Point, _xi: &Point) -> Point {
        *x
    }

    fn grad_x(&self, _x: &Point, xi: &Point) -> Point {
        *xi
    }

    fn mixed_hessian(&self, _x: &Point, _xi: &Point) -> MixedHessian {
        [[1.0, 0.0], [0.0, 1.0]]
    }

    fn is_translation_form(&self) -> bool {
        true
    }
}

/// `x.xi + t |xi|`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavePhase {
    pub t: f64,
}

impl Phase for WavePhase {
    fn eval(&self, x: &Point, xi: &Point) -> f64 {
        dot(x, xi) + self.t * norm(xi)
    }

    fn grad_xi(&self, x: &Point, xi: &Point) -> Point {
        let r = norm(xi);
        if r == 0.0 {
            return *x;
        }
        [x[0] + self.t * xi[0] / r, x[1] + self.t * xi[1] / r]
    }

    fn grad_x(&self, _x: &Point, xi: &Point) -> Point {
        *xi
    }

    fn mixed_hessian(&self, _x: &Point, _xi: &Point) -> MixedHessian {
        [[1.0, 0.0], [0.0, 1.0]]
    }

    fn is_translation_form(&self) -> bool {
        true
    }
}

/// `x.(A xi) + t |xi|` with `A = diag(a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnisotropicPhase {
    pub diag: [f64; 2],
    pub t: f64,
}

impl Default for AnisotropicPhase {
    fn default() -> Self {
        Self { diag: [2.0, 0.5], t: 1.0 }
    }
}

impl Phase for AnisotropicPhase {
    fn eval(&self, x: &Point, xi: &Point) -> f64 {
        self.diag[0] * x[0] * xi[0] + self.diag[1] * x[1] * xi[1] + self.t * norm(xi)
    }

    fn grad_xi(&self, x: &Point, xi: &Point) -> Point {
        let r = norm(xi);
        let (u0, u1) = if r == 0.0 { (0.0, 0.0) } else { (xi[0] / r, xi[1] / r) };
        [self.diag[0] * x[0] + self.t * u0, self.diag[1] * x[1] + self.t * u1]
    }

    fn grad_x(&self, _x: &Point, xi: &Point) -> Point {
        [self.diag[0] * xi[0], self.diag[1] * xi[1]]
    }

    fn mixed_hessian(&self, _x: &Point, _xi: &Point) -> MixedHessian {
        [[self.diag[0], 0.0], [0.0, self.diag[1]]]
    }

    fn is_translation_form(&self) -> bool {
        self.diag == [1.0, 1.0]
    }
}

/// `(x + v).xi`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftedPhase {
    pub shift: Point,
}

impl Phase for ShiftedPhase {
    fn eval(&self, x: &Point, xi: &Point) -> f64 {
        (x[0] + self.shift[0]) * xi[0] + (x[1] + self.shift[1]) * xi[1]
    }

    fn grad_xi(&self, x: &Point, _xi: &Point) -> Point {
        [x[0] + self.shift[0], x[1] + self.shift[1]]
    }

    fn grad_x(&self, _x: &Point, xi: &Point) -> Point {
        *xi
    }

    fn mixed_hessian(&self, _x: &Point, _xi: &Point) -> MixedHessian {
        [[1.0, 0.0], [0.0, 1.0]]
    }

    fn is_translation_form(&self) -> bool {
        true
    }
}

/// `min |det d^2_{x xi} phi|` over `x_probes x sphere_probes` (only the
/// `[0][0]` entry in one dimension). By homogeneity, unit vectors suffice.
pub fn snd_margin(phase: &dyn Phase, dim: usize, x_probes: &[Point], sphere_probes: &[Point]) -> Result<f64> {
    if x_probes.is_empty() || sphere_probes.is_empty() {
        return Err(Error::Parameter("SND probe sets must be nonempty".into()));
    }
    let mut margin = f64::INFINITY;
    for x in x_probes {
        for xi in sphere_probes {
            let h = phase.mixed_hessian(x, xi);
            if h.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Evaluation { what: "mixed Hessian", x: *x, xi: *xi });
            }
            let det = match dim {
                1 => h[0][0],
                _ => h[0][0] * h[1][1] - h[0][1] * h[1][0],
            };
            margin = margin.min(det.abs());
        }
    }
    Ok(margin)
}

/// `max |phi(x, l xi) - l phi(x, xi)| / (l |xi| max|phi|)` over `l` in
/// `{1/2, 2}` and the probes (`xi != 0`).
pub fn homogeneity_defect(phase: &dyn Phase, x_probes: &[Point], xi_probes: &[Point]) -> f64 {
    let scale = x_probes
        .iter()
        .flat_map(|x| xi_probes.iter().map(move |xi| phase.eval(x, xi).abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for x in x_probes {
        for xi in xi_probes {
            let r = norm(xi);
            if r == 0.0 {
                continue;
            }
            for lambda in [0.5, 2.0] {
                let scaled = [lambda * xi[0], lambda * xi[1]];
                let defect = (phase.eval(x, &scaled) - lambda * phase.eval(x, xi)).abs();
                worst = worst.max(defect / (lambda * r * scale));
            }
        }
    }
    worst
}

/// Largest `|xi|^{|alpha| - 1} |d_xi^alpha d_x^beta phi|` for
/// `2 <= |alpha| + |beta| <= 3`, by nested central differences with step
/// `2e-3` (relative in `xi`). The returned constant is a probe, not a proof.
pub fn phase_class_probe(phase: &dyn Phase, dim: usize, x_probes: &[Point], xi_probes: &[Point]) -> f64 {
    // orders over the variables (x0, x1, xi0, xi1)
    let mut multi: Vec<[u32; 4]> = Vec::new();
    let axes: Vec<usize> = if dim == 1 { alloc::vec![0, 2] } else { alloc::vec![0, 1, 2, 3] };
    let mut stack: Vec<[u32; 4]> = alloc::vec![[0; 4]];
    for _ in 0..3 {
        let mut next = Vec::new();
        for m in &stack {
            for &a in &axes {
                let mut n = *m;
                n[a] += 1;
                if !next.contains(&n) {
                    next.push(n);
                }
            }
        }
        multi.extend(next.iter().filter(|n| n.iter().sum::<u32>() >= 2).copied());
        stack = next;
    }
    multi.sort();
    multi.dedup();

    let mut worst: f64 = 0.0;
    for x in x_probes {
        for xi in xi_probes {
            let r = norm(xi);
            if r == 0.0 {
                continue;
            }
            let steps = [2e-3, 2e-3, 2e-3 * r, 2e-3 * r];
            for m in &multi {
                let d = nested_difference(phase, [x[0], x[1], xi[0], xi[1]], *m, &steps);
                let alpha = m[2] + m[3];
                worst = worst.max(r.powi(alpha as i32 - 1) * d.abs());
            }
        }
    }
    worst
}

fn nested_difference(phase: &dyn Phase, at: [f64; 4], orders: [u32; 4], steps: &[f64; 4]) -> f64 {
    match orders.iter().position(|&o| o > 0) {
        None => phase.eval(&[at[0], at[1]], &[at[2], at[3]]),
        Some(axis) => {
            let mut reduced = orders;
            reduced[axis] -= 1;
            let h = steps[axis];
            let mut plus = at;
            let mut minus = at;
            plus[axis] += h;
            minus[axis] -= h;
            (nested_difference(phase, plus, reduced, steps) - nested_difference(phase, minus, reduced, steps)) / (2.0 * h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    /// Same formula as [`WavePhase`] but without closed-form derivatives.
    #[derive(Debug)]
    struct OpaqueWave;

    impl Phase for OpaqueWave {
        fn eval(&self, x: &Point, xi: &Point) -> f64 {
            dot(x, xi) + norm(xi)
        }
    }

    #[derive(Debug)]
    struct OpaqueAnisotropic;

    impl Phase for OpaqueAnisotropic {
        fn eval(&self, x: &Point, xi: &Point) -> f64 {
            2.0 * x[0] * xi[0] + 0.5 * x[1] * xi[1]
        }
    }

    fn sphere(count: usize) -> Vec<Point> {
        (0..count)
            .map(|i| {
                let a = 2.0 * PI * (i as f64 + 0.3) / count as f64;
                [a.cos(), a.sin()]
            })
            .collect()
    }

    fn xs() -> Vec<Point> {
        alloc::vec![[0.0, 0.0], [1.5, -0.5], [-3.0, 2.0]]
    }

    #[test]
    fn snd_margins() {
        assert_eq!(snd_margin(&LinearPhase, 2, &xs(), &sphere(12)).unwrap(), 1.0);
        assert_eq!(snd_margin(&WavePhase { t: 1.0 }, 2, &xs(), &sphere(12)).unwrap(), 1.0);
        let aniso = AnisotropicPhase { diag: [2.0, 0.5], t: 0.0 };
        assert!((snd_margin(&aniso, 2, &xs(), &sphere(12)).unwrap() - 1.0).abs() < 1e-15);
        let fd = snd_margin(&OpaqueAnisotropic, 2, &xs(), &sphere(12)).unwrap();
        assert!((fd - 1.0).abs() < 1e-5, "{fd}");
        let fd = snd_margin(&OpaqueWave, 2, &xs(), &sphere(12)).unwrap();
        assert!((fd - 1.0).abs() < 1e-5, "{fd}");
        assert!(snd_margin(&LinearPhase, 2, &[], &sphere(3)).is_err());
    }

    #[test]
    fn snd_margin_is_scale_invariant() {
        let doubled: Vec<Point> = sphere(12).iter().map(|p| [2.0 * p[0], 2.0 * p[1]]).collect();
        for phase in [&WavePhase { t: 1.0 } as &dyn Phase, &AnisotropicPhase::default()] {
            let a = snd_margin(phase, 2, &xs(), &sphere(12)).unwrap();
            let b = snd_margin(phase, 2, &xs(), &doubled).unwrap();
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn finite_difference_defaults_match_closed_forms() {
        let closed = WavePhase { t: 1.0 };
        for x in xs() {
            for xi in sphere(7) {
                let xi = [3.0 * xi[0], 3.0 * xi[1]];
                let (a, b) = (OpaqueWave.grad_xi(&x, &xi), closed.grad_xi(&x, &xi));
                assert!((a[0] - b[0]).abs() < 1e-8 && (a[1] - b[1]).abs() < 1e-8);
                let (a, b) = (OpaqueWave.grad_x(&x, &xi), closed.grad_x(&x, &xi));
                assert!((a[0] - b[0]).abs() < 1e-8 && (a[1] - b[1]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn homogeneity() {
        let probes = sphere(9);
        for phase in [&LinearPhase as &dyn Phase, &WavePhase { t: 2.0 }, &AnisotropicPhase::default(), &OpaqueWave] {
            assert!(homogeneity_defect(phase, &xs(), &probes) <= 1e-9);
        }
        #[derive(Debug)]
        struct Quadratic;
        impl Phase for Quadratic {
            fn eval(&self, _x: &Point, xi: &Point) -> f64 {
                dot(xi, xi)
            }
        }
        assert!(homogeneity_defect(&Quadratic, &xs(), &probes) > 0.1);
    }

    #[test]
    fn class_probe() {
        // x.xi has no derivatives of total order >= 2 except d_x d_xi = 1
        let c = phase_class_probe(&LinearPhase, 2, &xs(), &sphere(5));
        assert!((c - 1.0).abs() < 1e-6, "{c}");
        // |xi| contributes |xi| d^2|xi| = O(1) and |xi|^2 d^3 |xi| = O(1)
        let c = phase_class_probe(&WavePhase { t: 1.0 }, 2, &xs(), &sphere(5));
        assert!(c.is_finite() && c < 10.0, "{c}");
        let doubled: Vec<Point> = sphere(5).iter().map(|p| [4.0 * p[0], 4.0 * p[1]]).collect();
        let c2 = phase_class_probe(&WavePhase { t: 1.0 }, 2, &xs(), &doubled);
        assert!((c - c2).abs() < 1e-3 * c, "{c} vs {c2}");
    }
}
