use super::params::{Chart, ReissnerNordstromParams};
use super::radial::Radial;
use super::schwarzschild::check_outside;
use crate::error::{invalid, Result};
use crate::geometry::{FrameDerivative, FramePoint, FrameTensor2, MetricFamily, ModelMetric};

fn coefficients(params: &ReissnerNordstromParams, chart: Chart, r: f64) -> Result<Radial> {
    check_outside("reissner-nordstrom", r, params.horizon(chart))?;
    let (m, q) = (params.m_param(), params.q());
    Ok(match chart {
        Chart::AreaRadial => {
            let w = 2.0 * m / r + q * q / (r * r);
            let f = 1.0 - w;
            let df = 2.0 * m / (r * r) + 2.0 * q * q / (r * r * r);
            Radial {
                a: 1.0,
                b: w / f,
                c: f,
                da: 0.0,
                db: -df / (f * f),
                dc: df,
            }
        }
        Chart::Isotropic => {
            let d = params.discriminant();
            let psi = 1.0 + m / r + d / (4.0 * r * r);
            let dpsi = -m / (r * r) - d / (2.0 * r * r * r);
            let top = 1.0 - d / (4.0 * r * r);
            let v = top / psi;
            let dv = (d / (2.0 * r * r * r) * psi - top * dpsi) / (psi * psi);
            Radial {
                a: psi * psi,
                b: 0.0,
                c: v * v,
                da: 2.0 * psi * dpsi,
                db: 0.0,
                dc: 2.0 * v * dv,
            }
        }
    })
}

/// Frame components of the Reissner–Nordström metric relative to
/// dx² + dt² on R³ × S¹.
pub fn rn_components(params: &ReissnerNordstromParams, chart: Chart, p: &FramePoint) -> Result<FrameTensor2> {
    if p.base().len() != 3 {
        return Err(invalid("point", "Reissner–Nordström lives over R^3"));
    }
    Ok(coefficients(params, chart, p.radius())?.components(p))
}

/// r = u [1 + m/u + (m² + q²)/(4u²)].
pub fn rn_isotropic_radius(params: &ReissnerNordstromParams, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(invalid("u", "isotropic radius must be positive"));
    }
    Ok(u + params.m_param() + params.discriminant() / (4.0 * u))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReissnerNordstrom {
    params: ReissnerNordstromParams,
    chart: Chart,
    model: ModelMetric,
}

impl ReissnerNordstrom {
    pub fn new(params: ReissnerNordstromParams, chart: Chart) -> Result<Self> {
        let model = ModelMetric::trivial(3, params.fiber_length())?;
        Ok(Self { params, chart, model })
    }

    pub fn params(&self) -> &ReissnerNordstromParams {
        &self.params
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }
}

impl MetricFamily for ReissnerNordstrom {
    fn model(&self) -> &ModelMetric {
        &self.model
    }

    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        rn_components(&self.params, self.chart, p)
    }

    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        Some(coefficients(&self.params, self.chart, p.radius()).map(|c| c.derivative(p)))
    }

    fn decay_order(&self) -> f64 {
        1.0
    }

    fn min_radius(&self) -> f64 {
        self.params.horizon(self.chart).max(1.0)
    }
}
