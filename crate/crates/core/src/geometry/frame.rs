use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::model::{radius, ModelMetric};
use crate::error::{Error, Result};

/// A point of the exterior fibration in local coordinates: base coordinates
/// x_1..x_m and a fiber coordinate t.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePoint {
    base: Vec<f64>,
    t: f64,
}

impl FramePoint {
    /// Requires r > 1.
    pub fn new(base: Vec<f64>, t: f64) -> Result<Self> {
        let p = Self::unchecked(base, t);
        if p.base.iter().any(|v| !v.is_finite()) || !t.is_finite() {
            return Err(Error::NonFinite {
                what: "frame point",
                at: p.base.clone(),
            });
        }
        let r = p.radius();
        if r <= 1.0 {
            return Err(Error::Domain {
                radius: r,
                minimum: 1.0,
            });
        }
        Ok(p)
    }

    /// Builds a point on `model`, wrapping t into [0, L).
    pub fn on_model(model: &ModelMetric, base: Vec<f64>, t: f64) -> Result<Self> {
        if base.len() != model.base_dim() {
            return Err(crate::error::invalid(
                "base",
                alloc::format!("expected {} coordinates, got {}", model.base_dim(), base.len()),
            ));
        }
        Self::new(base, crate::numeric::rem_euclid(t, model.fiber_length()))
    }

    pub(crate) fn unchecked(base: Vec<f64>, t: f64) -> Self {
        Self { base, t }
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn radius(&self) -> f64 {
        radius(&self.base)
    }

    /// Unit radial direction x/r in the horizontal frame.
    pub fn radial_direction(&self) -> Vec<f64> {
        let r = self.radius();
        self.base.iter().map(|v| v / r).collect()
    }

    pub(crate) fn shifted(&self, dx: &[f64], dt: f64) -> Self {
        Self {
            base: self.base.iter().zip(dx).map(|(a, b)| a + b).collect(),
            t: self.t + dt,
        }
    }
}

/// Symmetric bilinear form in the adapted frame (X_1, …, X_m, T).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTensor2(DMatrix<f64>);

impl FrameTensor2 {
    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        Self(m)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// Diagonal horizontal block `a·δ_ij + b·n_i n_j` plus fiber entry `c`.
    pub fn radial(n: &[f64], a: f64, b: f64, c: f64) -> Self {
        let m = n.len();
        Self::from_fn(m + 1, |i, j| {
            if i < m && j < m {
                let d = if i == j { a } else { 0.0 };
                d + b * n[i] * n[j]
            } else if i == m && j == m {
                c
            } else {
                0.0
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.0[(a, b)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..a).all(|b| (self.get(a, b) - self.get(b, a)).abs() <= tol))
    }

    /// Largest |g_ab − δ_ab|.
    pub fn deviation_from_identity(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let d = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((self.get(a, b) - d).abs());
            }
        }
        worst
    }
}

/// Rank-3 frame array T(a, b; c) stored densely. Used for connection
/// coefficients h(∇_{e_a} e_b, e_c), for directional derivatives
/// e_c(g_ab), and for covariant derivatives (∇_{e_c} g)(e_a, e_b).
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[self.idx(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let i = self.idx(a, b, c);
        self.data[i] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_difference(&self, other: &Tensor3) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// (∇^h_{e_c} g)(e_a, e_b), indexed (a, b; c).
pub type CovDerivTensor = Tensor3;
/// Directional derivatives e_c(g_ab), indexed (a, b; c).
pub type FrameDerivative = Tensor3;
/// h(∇^h_{e_a} e_b, e_c), indexed (a, b, c).
pub type ConnectionCoeffs = Tensor3;
