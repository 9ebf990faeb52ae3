use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::geometry::{FramePoint, ModelMetric};
use crate::numeric::{polar_rule, CompensatedSum};

/// Node counts of the product rule on ∂B_R = S^{m−1}(R) × S¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSpec {
    /// Nodes per polar angle (there are m − 2 of them).
    pub polar_nodes: usize,
    pub azimuth_nodes: usize,
    pub fiber_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            polar_nodes: 8,
            azimuth_nodes: 8,
            fiber_nodes: 4,
        }
    }
}

impl QuadratureSpec {
    pub fn new(polar_nodes: usize, azimuth_nodes: usize, fiber_nodes: usize) -> Result<Self> {
        let spec = Self {
            polar_nodes,
            azimuth_nodes,
            fiber_nodes,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.polar_nodes < 4 {
            return Err(invalid("polar-nodes", "need at least 4 nodes"));
        }
        if self.azimuth_nodes < 4 || self.azimuth_nodes % 2 != 0 {
            return Err(invalid("azimuth-nodes", "need an even count of at least 4"));
        }
        if self.fiber_nodes < 4 || self.fiber_nodes % 2 != 0 {
            return Err(invalid("fiber-nodes", "need an even count of at least 4"));
        }
        Ok(())
    }

    /// Every count doubled.
    pub fn doubled(&self) -> Self {
        Self {
            polar_nodes: 2 * self.polar_nodes,
            azimuth_nodes: 2 * self.azimuth_nodes,
            fiber_nodes: 2 * self.fiber_nodes,
        }
    }
}

/// Product rule on the unit sphere S^{m−1} in hyperspherical angles;
/// the weights sum to ω_m.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(m: usize, polar_nodes: usize, azimuth_nodes: usize) -> Result<Self> {
        if m < 2 {
            return Err(invalid("base_dim", "sphere rules need m >= 2"));
        }
        let dphi = 2.0 * PI / azimuth_nodes as f64;
        let mut points: Vec<Vec<f64>> = Vec::with_capacity(azimuth_nodes);
        let mut weights = Vec::with_capacity(azimuth_nodes);
        for j in 0..azimuth_nodes {
            let (s, c) = libm::sincos(j as f64 * dphi);
            points.push(vec![c, s]);
            weights.push(dphi);
        }
        // each new polar angle θ carries the factor sin^{d−2} θ on S^{d−1}
        for d in 3..=m {
            let (x, w) = polar_rule(d - 2, polar_nodes);
            let mut next_points = Vec::with_capacity(points.len() * x.len());
            let mut next_weights = Vec::with_capacity(points.len() * x.len());
            for (xi, wi) in x.iter().zip(&w) {
                let sin = libm::sqrt((1.0 - xi * xi).max(0.0));
                for (pt, pw) in points.iter().zip(&weights) {
                    let mut q = Vec::with_capacity(d);
                    q.push(*xi);
                    q.extend(pt.iter().map(|v| v * sin));
                    next_points.push(q);
                    next_weights.push(pw * wi);
                }
            }
            points = next_points;
            weights = next_weights;
        }
        Ok(Self { points, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// ∫_{∂B_R} f dA_h = R^{m−1} ∫_{S^{m−1}} ∫_0^L f dt dω, by the product rule.
pub fn boundary_integral<F>(integrand: F, model: &ModelMetric, radius: f64, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(&FramePoint) -> Result<f64>,
{
    let v = boundary_integral_vec(|p| integrand(p).map(|v| vec![v]), 1, model, radius, quad)?;
    Ok(v[0])
}

/// Component-wise boundary integral of a vector-valued integrand.
pub fn boundary_integral_vec<F>(
    integrand: F,
    len: usize,
    model: &ModelMetric,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>>
where
    F: Fn(&FramePoint) -> Result<Vec<f64>>,
{
    quad.validate()?;
    if !(radius > 1.0) || !radius.is_finite() {
        return Err(Error::Domain {
            radius,
            minimum: 1.0,
        });
    }
    let m = model.base_dim();
    let sphere = SphereRule::new(m, quad.polar_nodes, quad.azimuth_nodes)?;
    let l = model.fiber_length();
    let dt = l / quad.fiber_nodes as f64;
    let mut acc = vec![CompensatedSum::new(); len];
    for (dir, w) in sphere.points.iter().zip(&sphere.weights) {
        let base: Vec<f64> = dir.iter().map(|v| v * radius).collect();
        for k in 0..quad.fiber_nodes {
            let p = FramePoint::unchecked(base.clone(), k as f64 * dt);
            let values = integrand(&p)?;
            for (a, v) in acc.iter_mut().zip(&values) {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        what: "boundary integrand",
                        at: base,
                    });
                }
                a.add(w * dt * v);
            }
        }
    }
    let area = libm::pow(radius, (m - 1) as f64);
    Ok(acc.iter().map(|a| a.value() * area).collect())
}
