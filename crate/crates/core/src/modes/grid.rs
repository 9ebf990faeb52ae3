use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{invalid, Error, Result};

/// Uniform grid in s = log r.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub n_points: usize,
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self {
            s_min: core::f64::consts::LN_2,
            s_max: libm::log(2048.0),
            n_points: 1024,
        }
    }
}

impl RadialGrid {
    pub const MIN_POINTS: usize = 64;

    pub fn new(s_min: f64, s_max: f64, n_points: usize) -> Result<Self> {
        let g = Self { s_min, s_max, n_points };
        g.validate()?;
        Ok(g)
    }

    /// Grid on [r_min, r_max].
    pub fn from_radii(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_min > 0.0) {
            return Err(invalid("r_min", "must be positive"));
        }
        Self::new(libm::log(r_min), libm::log(r_max), n_points)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s_min.is_finite() && self.s_max.is_finite() && self.s_max > self.s_min) {
            return Err(invalid("grid", "need finite s_min < s_max"));
        }
        if self.n_points < Self::MIN_POINTS {
            return Err(invalid("n_points", "need at least 64 grid points"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n_points - 1) as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            return self.s_max;
        }
        self.s_min + i as f64 * self.spacing()
    }

    pub fn r(&self, i: usize) -> f64 {
        libm::exp(self.s(i))
    }

    pub fn s_nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.s(i)).collect()
    }

    pub fn r_nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.r(i)).collect()
    }

    /// Density of dμ_δ = e^{(m−2δ)s} ds at node i.
    pub fn measure(&self, i: usize, delta: f64, m: usize) -> f64 {
        libm::exp((m as f64 - 2.0 * delta) * self.s(i))
    }

    /// Same grid with twice the resolution (2n − 1 points).
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    /// Index of the node at radius `r`, if `r` is a node to relative 1e−9.
    pub fn node_at(&self, r: f64) -> Option<usize> {
        let x = (libm::log(r) - self.s_min) / self.spacing();
        let i = libm::round(x);
        if i < 0.0 || i >= self.n_points as f64 || (x - i).abs() > 1e-9 * self.n_points as f64 {
            return None;
        }
        Some(i as usize)
    }
}

/// Spherical degree j and fiber wavenumber index k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Mode {
    pub j: usize,
    pub k: usize,
}

/// One mode amplitude sampled on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialProfile {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
    pub mode: Mode,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, values: Vec<f64>, mode: Mode) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.n_points {
            return Err(invalid("values", "length differs from the grid"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "radial profile",
                at: vec![grid.r(i)],
            });
        }
        Ok(Self { grid, values, mode })
    }

    /// Samples f(r) at the nodes.
    pub fn from_fn(grid: RadialGrid, mode: Mode, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.r_nodes().into_iter().map(f).collect();
        Self::new(grid, values, mode)
    }

    pub fn zeros(grid: RadialGrid, mode: Mode) -> Result<Self> {
        Self::new(grid, vec![0.0; grid.n_points], mode)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Cubic Lagrange interpolation at s.
    pub fn interpolate(&self, s: f64) -> f64 {
        let n = self.grid.n_points;
        let h = self.grid.spacing();
        let x = (s - self.grid.s_min) / h;
        let base = (libm::floor(x) as isize - 1).clamp(0, n as isize - 4) as usize;
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (x - (base + b) as f64) / (a as f64 - b as f64);
                }
            }
            acc += w * self.values[base + a];
        }
        acc
    }

    /// `s,r,value` rows after a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,r,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", self.grid.s(i), self.grid.r(i), v);
        }
        out
    }
}

/// Stencils of sixth-order accuracy for d/ds (row 1) and d²/ds² (row 2)
/// at every node: centred in the interior, one sided near the ends.
struct Stencils {
    centre: [Vec<f64>; 2],
    // edge[i] serves node i, i < 3, using nodes 0..8
    edge: Vec<[Vec<f64>; 2]>,
}

const HALF: usize = 3;
const EDGE_WIDTH: usize = 8;

impl Stencils {
    fn new() -> Self {
        let centre_nodes: Vec<f64> = (-(HALF as i32)..=HALF as i32).map(|v| v as f64).collect();
        let c = crate::numeric::fd_weights(0.0, &centre_nodes, 2);
        let edge_nodes: Vec<f64> = (0..EDGE_WIDTH).map(|v| v as f64).collect();
        let edge = (0..HALF)
            .map(|i| {
                let w = crate::numeric::fd_weights(i as f64, &edge_nodes, 2);
                [w[1].clone(), w[2].clone()]
            })
            .collect();
        Self {
            centre: [c[1].clone(), c[2].clone()],
            edge,
        }
    }

    fn apply(&self, f: &[f64], h: f64, d: usize) -> Vec<f64> {
        let n = f.len();
        let scale = libm::pow(h, d as f64);
        let row = d - 1;
        let mut out = vec![0.0; n];
        for i in HALF..n - HALF {
            out[i] = self.centre[row].iter().zip(&f[i - HALF..=i + HALF]).map(|(w, v)| w * v).sum::<f64>() / scale;
        }
        // mirrored nodes pick up a sign for odd derivatives
        let sign = if d % 2 == 1 { -1.0 } else { 1.0 };
        for i in 0..HALF {
            let w = &self.edge[i][row];
            out[i] = w.iter().enumerate().map(|(k, wk)| wk * f[k]).sum::<f64>() / scale;
            out[n - 1 - i] = sign * w.iter().enumerate().map(|(k, wk)| wk * f[n - 1 - k]).sum::<f64>() / scale;
        }
        out
    }
}

/// Sixth-order first derivative in s on a uniform grid.
pub(crate) fn d_s(f: &[f64], h: f64) -> Vec<f64> {
    Stencils::new().apply(f, h, 1)
}

/// Sixth-order second derivative in s on a uniform grid.
pub(crate) fn d2_s(f: &[f64], h: f64) -> Vec<f64> {
    Stencils::new().apply(f, h, 2)
}

/// Second-order counterparts, used to check the stencils are resolved.
pub(crate) fn d_s_low(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}

pub(crate) fn d2_s_low(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / (h * h);
    }
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / (h * h);
    d
}
