//! Pseudorandom smooth `h^p` atoms.
//!
//! An atom for `B(x0, r)` is supported in the ball, bounded by `|B|^{-1/p}`,
//! and, when `r <= 1`, has vanishing moments up to order
//! `M = floor(n (1/p - 1)_+)`. Balls with `r > 1` carry no moment condition.
//!
//! Construction: a random smooth profile `g` times the window
//! `w(x) = exp(1 - 1/(1 - |u|^2))`, `u = (x - x0)/r`. Moments are removed by
//! orthonormalising the monomials `u^alpha` in `<f, g>_w = int f g w` and
//! subtracting `w sum_i (int g P_i) P_i`, which kills `int g P_i` for every
//! basis polynomial. The projection runs twice to clean up round-off. The
//! result is finally scaled so that `sup |a| = |B|^{-1/p}`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec, Point};
use crate::profile::ball_window;

const WAVES: usize = 4;

/// `|B(0, r)|` in dimension `dim`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    match dim {
        1 => 2.0 * r,
        _ => PI * r * r,
    }
}

/// `floor(n (1/p - 1)_+)`.
pub fn moment_order(dim: usize, p: f64) -> usize {
    let excess = (1.0 / p - 1.0).max(0.0);
    // guard against 2 * (1/0.5 - 1) = 1.9999999
    (dim as f64 * excess + 1e-12).floor() as usize
}

/// Multi-indices `alpha` with `|alpha| <= order` (second entry 0 in 1D).
pub fn multi_indices(dim: usize, order: usize) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for total in 0..=order as u32 {
        match dim {
            1 => out.push([total, 0]),
            _ => out.extend((0..=total).map(|a| [total - a, a])),
        }
    }
    out
}

fn monomial(u: &Point, alpha: [u32; 2]) -> f64 {
    u[0].powi(alpha[0] as i32) * u[1].powi(alpha[1] as i32)
}

#[derive(Clone, Debug)]
pub struct Atom {
    center: Point,
    radius: f64,
    exponent: f64,
    moment_order: Option<usize>,
    values: GridFunction,
}

impl Atom {
    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// `Some(M)` when moments were removed, `None` for `r > 1`.
    pub fn moment_order(&self) -> Option<usize> {
        self.moment_order
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    pub fn into_function(self) -> GridFunction {
        self.values
    }

    /// `int (x - x0)^alpha a(x) dx` for `|alpha| <= order`.
    pub fn moments(&self, order: usize) -> Vec<([u32; 2], f64)> {
        let spec = *self.values.spec();
        let cell = spec.cell_volume();
        multi_indices(spec.dim(), order)
            .into_iter()
            .map(|alpha| {
                let m = self
                    .values
                    .values()
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| z.re != 0.0)
                    .map(|(i, z)| {
                        let x = spec.point(i);
                        z.re * monomial(&[x[0] - self.center[0], x[1] - self.center[1]], alpha)
                    })
                    .sum::<f64>();
                (alpha, m * cell)
            })
            .collect()
    }

    /// `sup |a| * |B|^{1/p}`, at most one for a valid atom.
    pub fn sup_bound_ratio(&self) -> f64 {
        let dim = self.values.spec().dim();
        self.values.max_abs() * ball_volume(dim, self.radius).powf(1.0 / self.exponent)
    }

    /// Largest `|a(x)|` at a sample with `|x - x0| >= r`.
    pub fn leakage(&self) -> f64 {
        let spec = self.values.spec();
        self.values
            .values()
            .iter()
            .enumerate()
            .filter(|(i, _)| distance(&spec.point(*i), &self.center) >= self.radius)
            .fold(0.0, |m, (_, z)| m.max(z.norm()))
    }
}

fn distance(a: &Point, b: &Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Generate an atom on `spec` for the ball `B(center, radius)` and exponent `p`.
pub fn make_atom(spec: &GridSpec, center: Point, radius: f64, p: f64, seed: u64) -> Result<Atom> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Parameter(format!("atom radius must be positive, got {radius}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Parameter(format!("atom exponent must lie in (0, 1], got {p}")));
    }
    let dim = spec.dim();
    let half = 0.5 * spec.length();
    for axis in 0..dim {
        if center[axis].abs() + 2.0 * radius > half {
            return Err(Error::Parameter(format!(
                "ball B({center:?}, {radius}) with margin {radius} does not fit in the torus of side {}",
                spec.length()
            )));
        }
    }
    if dim == 1 && center[1] != 0.0 {
        return Err(Error::Parameter("1D atom center must have zero second coordinate".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = rng.gen_range(0.5..1.5);
    let waves: Vec<(f64, Point, f64)> = (0..WAVES)
        .map(|_| {
            let amp = rng.gen_range(-1.0..1.0);
            let freq = [rng.gen_range(-3.0..3.0), if dim == 2 { rng.gen_range(-3.0..3.0) } else { 0.0 }];
            (amp, freq, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();

    // samples strictly inside the ball: (flat index, scaled coordinate u, window)
    let inside: Vec<(usize, Point, f64)> = (0..spec.len())
        .filter_map(|i| {
            let x = spec.point(i);
            let u = [(x[0] - center[0]) / radius, (x[1] - center[1]) / radius];
            let rho = u[0].hypot(u[1]);
            (rho < 1.0).then(|| (i, u, ball_window(rho)))
        })
        .collect();

    let moment_order = (radius <= 1.0).then(|| moment_order(dim, p));
    let basis_len = moment_order.map_or(0, |m| multi_indices(dim, m).len());
    if inside.len() < 4 * basis_len.max(1) {
        return Err(Error::GridTooCoarse(format!("only {} samples inside a ball of radius {radius}", inside.len())));
    }

    let mut g: Vec<f64> = inside
        .iter()
        .map(|(_, u, w)| {
            let content: f64 = waves.iter().map(|(amp, k, phase)| amp * (k[0] * u[0] + k[1] * u[1] + phase).cos()).sum();
            w * (offset + 0.5 * content)
        })
        .collect();

    if let Some(order) = moment_order {
        let basis = weighted_orthonormal_basis(&inside, dim, order)?;
        for _ in 0..2 {
            for poly in &basis {
                let c: f64 = g.iter().zip(poly).map(|(a, b)| a * b).sum();
                for ((gi, pi), (_, _, w)) in g.iter_mut().zip(poly).zip(&inside) {
                    *gi -= c * w * pi;
                }
            }
        }
    }

    let peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(Error::Parameter("moment removal annihilated the atom".into()));
    }
    // a hair below the bound so that round-off never pushes the ratio above one
    let scale = ball_volume(dim, radius).powf(-1.0 / p) / peak * (1.0 - 4.0 * f64::EPSILON);
    let mut values = alloc::vec![Complex64::new(0.0, 0.0); spec.len()];
    for ((i, _, _), v) in inside.iter().zip(&g) {
        values[*i] = Complex64::new(v * scale, 0.0);
    }
    Ok(Atom { center, radius, exponent: p, moment_order, values: GridFunction::new(*spec, values)? })
}

/// Monomials in `u`, orthonormalised (modified Gram-Schmidt, two passes) in
/// the discrete weighted product `sum w f g`. Returned as values on `inside`.
fn weighted_orthonormal_basis(inside: &[(usize, Point, f64)], dim: usize, order: usize) -> Result<Vec<Vec<f64>>> {
    let inner = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).zip(inside).map(|((x, y), (_, _, w))| x * y * w).sum() };
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for alpha in multi_indices(dim, order) {
        let mut v: Vec<f64> = inside.iter().map(|(_, u, _)| monomial(u, alpha)).collect();
        for _ in 0..2 {
            for e in &basis {
                let c = inner(&v, e);
                v.iter_mut().zip(e).for_each(|(vi, ei)| *vi -= c * ei);
            }
        }
        let n = inner(&v, &v).sqrt();
        if n.partial_cmp(&1e-12) != Some(core::cmp::Ordering::Greater) {
            return Err(Error::GridTooCoarse(format!("monomial {alpha:?} is degenerate on the sampled ball")));
        }
        v.iter_mut().for_each(|vi| *vi /= n);
        basis.push(v);
    }
    // a bare sum (cell volume folded into the coefficients) is fine: the
    // subtraction only needs sum g P_i = 0.
    Ok(basis)
}
