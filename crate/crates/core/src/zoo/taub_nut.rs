use super::params::TaubNutParams;
use super::radial::Radial;
use crate::error::Result;
use crate::geometry::{FrameDerivative, FramePoint, FrameTensor2, MetricFamily, ModelMetric};

/// (Multi-)Taub-NUT asymptotics V dx² + V⁻¹ η_k², V = 1 + 2km/r.
///
/// The model has dη = 2km σ and fiber length 8πm, the normalization in
/// which the Gibbons–Hawking form is Ricci flat.
#[derive(Debug, Clone, PartialEq)]
pub struct TaubNut {
    params: TaubNutParams,
    model: ModelMetric,
}

fn coefficients(params: &TaubNutParams, r: f64) -> Radial {
    let mu = 2.0 * params.k() as f64 * params.m_param();
    let v = 1.0 + mu / r;
    let dv = -mu / (r * r);
    Radial {
        a: v,
        b: 0.0,
        c: 1.0 / v,
        da: dv,
        db: 0.0,
        dc: -dv / (v * v),
    }
}

pub fn taubnut_components(params: &TaubNutParams, p: &FramePoint) -> FrameTensor2 {
    coefficients(params, p.radius()).components(p)
}

impl TaubNut {
    pub fn new(params: TaubNutParams) -> Result<Self> {
        let model = ModelMetric::monopole(params.k(), 2.0 * params.m_param())?;
        Ok(Self { params, model })
    }

    pub fn params(&self) -> &TaubNutParams {
        &self.params
    }
}

impl MetricFamily for TaubNut {
    fn model(&self) -> &ModelMetric {
        &self.model
    }

    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        Ok(taubnut_components(&self.params, p))
    }

    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        Some(Ok(coefficients(&self.params, p.radius()).derivative(p)))
    }

    fn decay_order(&self) -> f64 {
        1.0
    }
}
