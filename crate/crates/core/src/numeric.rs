//! Small numerical kernels shared by the geometry, mass and mode modules.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Compensated (Neumaier) accumulator. Summation order is the caller's order,
/// so results are reproducible for a fixed traversal.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

/// Gauss–Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Chebyshev rule of the second kind: integrates `f(x) sqrt(1 - x^2)`
/// on [-1, 1] exactly for polynomials of degree < 2n.
pub fn gauss_chebyshev_second(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = PI / (n as f64 + 1.0);
    (1..=n)
        .map(|k| {
            let theta = k as f64 * h;
            (libm::cos(theta), h * libm::sin(theta) * libm::sin(theta))
        })
        .unzip()
}

/// Nodes and weights for `∫_0^π sin^j θ f(θ) dθ`, returned as (cos θ, weight).
/// Odd powers reduce to Gauss–Legendre in cos θ with a polynomial factor,
/// even powers to Gauss–Chebyshev (second kind) with a polynomial factor.
pub fn polar_rule(power: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    if power % 2 == 1 {
        let (x, w) = gauss_legendre(n);
        let e = ((power - 1) / 2) as i32;
        let w = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * libm::pow(1.0 - xi * xi, e as f64))
            .collect();
        (x, w)
    } else {
        let (x, w) = gauss_chebyshev_second(n);
        let e = (power.saturating_sub(2) / 2) as i32;
        let w = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * libm::pow(1.0 - xi * xi, e as f64))
            .collect();
        (x, w)
    }
}

/// Composite Simpson rule on uniformly spaced samples; an odd number of
/// intervals closes with a 3/8 panel.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let (simpson_end, tail) = if intervals % 2 == 0 {
                (n - 1, 0.0)
            } else {
                let k = n - 4;
                let tail = 3.0 * h / 8.0
                    * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
                (k, tail)
            };
            let mut acc = CompensatedSum::new();
            for i in (0..simpson_end).step_by(2) {
                acc.add(h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]));
            }
            acc.add(tail);
            acc.value()
        }
    }
}

/// Nodes per interpolation window in [`interval_integrals`].
const WINDOW: usize = 6;

/// Weights w with Σ w_k f(k) = ∫_a^{a+1} p(x) dx for the polynomial p
/// interpolating f at x = 0..WINDOW.
fn window_weights(a: usize) -> [f64; WINDOW] {
    // moment equations Σ_k w_k k^p = ∫_a^{a+1} x^p dx, solved exactly by
    // integrating the Lagrange basis
    let mut w = [0.0; WINDOW];
    for (k, wk) in w.iter_mut().enumerate() {
        // coefficients of Π_{l≠k} (x − l) / (k − l), ascending powers
        let mut poly = vec![1.0];
        let mut den = 1.0;
        for l in 0..WINDOW {
            if l == k {
                continue;
            }
            let mut next = vec![0.0; poly.len() + 1];
            for (p, c) in poly.iter().enumerate() {
                next[p + 1] += c;
                next[p] -= c * l as f64;
            }
            poly = next;
            den *= k as f64 - l as f64;
        }
        let (lo, hi) = (a as f64, a as f64 + 1.0);
        *wk = poly
            .iter()
            .enumerate()
            .map(|(p, c)| c * (libm::pow(hi, p as f64 + 1.0) - libm::pow(lo, p as f64 + 1.0)) / (p as f64 + 1.0))
            .sum::<f64>()
            / den;
    }
    w
}

/// Integrals over each interval [x_i, x_{i+1}] of the quintic through six
/// surrounding nodes (shifted inwards at the ends). Every interval uses a
/// rule of the same order, so the error varies smoothly from node to node.
pub fn interval_integrals(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    if n < WINDOW {
        return values.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).collect();
    }
    let table: Vec<[f64; WINDOW]> = (0..WINDOW - 1).map(window_weights).collect();
    (0..n - 1)
        .map(|i| {
            // window start, keeping the interval as central as possible
            let start = i.saturating_sub(WINDOW / 2 - 1).min(n - WINDOW);
            let w = &table[i - start];
            h * w.iter().zip(&values[start..start + WINDOW]).map(|(a, b)| a * b).sum::<f64>()
        })
        .collect()
}

/// `∫_{x_0}^{x_i}` at every node, from [`interval_integrals`].
pub fn cumulative_integral(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    let mut acc = CompensatedSum::new();
    for (i, piece) in interval_integrals(values, h).into_iter().enumerate() {
        acc.add(piece);
        out[i + 1] = acc.value();
    }
    out
}

/// `∫_{x_i}^{x_{n−1}}` at every node, accumulated from the far end.
pub fn reverse_cumulative_integral(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    let mut acc = CompensatedSum::new();
    for (i, piece) in interval_integrals(values, h).into_iter().enumerate().rev() {
        acc.add(piece);
        out[i] = acc.value();
    }
    out
}

/// Finite-difference weights (Fornberg) for the derivatives of order
/// 0..=`order` at `z` from samples at `x`. Row d holds the weights of d/dz^d.
pub fn fd_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Solves a tridiagonal system (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::LinearSolve("band lengths differ".into()));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::LinearSolve("zero pivot at row 0".into()));
    }
    c[0] = upper[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - lower[i] * c[i - 1];
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::LinearSolve(alloc::format!("zero pivot at row {i}")));
        }
        c[i] = upper[i] / beta;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

/// Ordinary least-squares slope and intercept of y against x.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Volume of the unit sphere S^{m-1} in R^m.
/// Remainder in [0, |b|), like `f64::rem_euclid`.
pub fn rem_euclid(a: f64, b: f64) -> f64 {
    let r = libm::fmod(a, b);
    if r < 0.0 {
        r + libm::fabs(b)
    } else {
        r
    }
}

pub fn unit_sphere_area(m: usize) -> f64 {
    let half = m as f64 / 2.0;
    2.0 * libm::pow(PI, half) / libm::tgamma(half)
}
