use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Result};

/// Connection one-form data of a model fibration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ConnectionData {
    /// Product fibration, η = dt.
    TrivialFlat,
    /// Circle bundle over R^3 with dη = charge · strength · σ, where σ is the
    /// pullback of the unit-sphere area form by x ↦ x/|x|.
    Monopole { charge: u32, strength: f64 },
}

/// Which coordinate patch of the monopole potential is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Patch {
    /// Regular away from the negative x_3 axis.
    North,
    /// Regular away from the positive x_3 axis.
    South,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FibrationKind {
    Trivial,
    Hopf,
}

/// Asymptotic model h = dx² + η² on the exterior circle fibration over
/// R^m minus the unit ball. The adapted frame is ordered (X_1, …, X_m, T).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMetric {
    base_dim: usize,
    fiber_length: f64,
    connection: ConnectionData,
}

impl ModelMetric {
    pub fn trivial(base_dim: usize, fiber_length: f64) -> Result<Self> {
        if base_dim < 3 {
            return Err(invalid("base_dim", format!("need m >= 3, got {base_dim}")));
        }
        if !(fiber_length > 0.0 && fiber_length.is_finite()) {
            return Err(invalid("fiber_length", format!("need L > 0, got {fiber_length}")));
        }
        Ok(Self {
            base_dim,
            fiber_length,
            connection: ConnectionData::TrivialFlat,
        })
    }

    /// Hopf-type model over R^3 with curvature `charge · strength · σ`.
    ///
    /// The fiber length is 4π·strength, the smallest length for which the
    /// patch transition t_S = t_N + 2·charge·strength·φ is single valued
    /// for every charge.
    pub fn monopole(charge: u32, strength: f64) -> Result<Self> {
        if charge == 0 {
            return Err(invalid("charge", "monopole charge must be >= 1"));
        }
        if !(strength > 0.0 && strength.is_finite()) {
            return Err(invalid("strength", format!("need strength > 0, got {strength}")));
        }
        Ok(Self {
            base_dim: 3,
            fiber_length: 4.0 * PI * strength,
            connection: ConnectionData::Monopole { charge, strength },
        })
    }

    /// Hopf model with unit strength, dη = k σ.
    pub fn hopf(charge: u32) -> Result<Self> {
        Self::monopole(charge, 1.0)
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// Total dimension m + 1.
    pub fn dim(&self) -> usize {
        self.base_dim + 1
    }

    pub fn fiber_length(&self) -> f64 {
        self.fiber_length
    }

    pub fn connection(&self) -> ConnectionData {
        self.connection
    }

    pub fn kind(&self) -> FibrationKind {
        match self.connection {
            ConnectionData::TrivialFlat => FibrationKind::Trivial,
            ConnectionData::Monopole { .. } => FibrationKind::Hopf,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.connection, ConnectionData::TrivialFlat)
    }

    /// Coefficient multiplying the unit-sphere area form in dη.
    pub fn monopole_coefficient(&self) -> f64 {
        match self.connection {
            ConnectionData::TrivialFlat => 0.0,
            ConnectionData::Monopole { charge, strength } => charge as f64 * strength,
        }
    }

    pub fn patch_for(&self, x: &[f64]) -> Patch {
        if x.len() >= 3 && x[2] < 0.0 {
            Patch::South
        } else {
            Patch::North
        }
    }

    /// Components A_i of η = dt + A_i dx_i in the given patch.
    pub fn potential(&self, x: &[f64], patch: Patch) -> Vec<f64> {
        let c = self.monopole_coefficient();
        if c == 0.0 {
            return vec![0.0; x.len()];
        }
        let r = radius(x);
        let (px, py, pz) = (x[0], x[1], x[2]);
        // A_N = c (1 - cos θ) dφ, A_S = -c (1 + cos θ) dφ
        let f = match patch {
            Patch::North => c / (r * (r + pz)),
            Patch::South => -c / (r * (r - pz)),
        };
        vec![-py * f, px * f, 0.0]
    }

    /// Curvature two-form ω with dη = π*ω as an antisymmetric m×m array
    /// (row-major), ω_ij = dη(X_i, X_j).
    pub fn curvature(&self, x: &[f64]) -> Vec<f64> {
        let m = self.base_dim;
        let mut out = vec![0.0; m * m];
        let c = self.monopole_coefficient();
        if c == 0.0 {
            return out;
        }
        let r = radius(x);
        let r3 = r * r * r;
        // ω_ij = c ε_ijl x_l / r^3
        let w = [c * x[0] / r3, c * x[1] / r3, c * x[2] / r3];
        out[1] = w[2];
        out[3] = -w[2];
        out[2 * 3] = w[1];
        out[2] = -w[1];
        out[3 + 2] = w[0];
        out[2 * 3 + 1] = -w[0];
        out
    }
}

pub fn radius(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum::<f64>())
}
