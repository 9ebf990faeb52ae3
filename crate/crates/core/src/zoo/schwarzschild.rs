use alloc::vec::Vec;

use super::params::{Chart, SchwarzschildParams};
use super::radial::Radial;
use crate::error::{invalid, Error, Result};
use crate::geometry::{FrameDerivative, FramePoint, FrameTensor2, MetricFamily, ModelMetric};

pub(crate) fn check_outside(family: &'static str, r: f64, horizon: f64) -> Result<()> {
    if r <= horizon {
        return Err(Error::Horizon {
            family,
            radius: r,
            horizon,
        });
    }
    Ok(())
}

fn coefficients(params: &SchwarzschildParams, chart: Chart, r: f64) -> Result<Radial> {
    check_outside("schwarzschild", r, params.horizon(chart))?;
    let p = params.power();
    let eps = libm::pow(params.gamma() / r, p);
    Ok(match chart {
        Chart::AreaRadial => {
            // f = 1 − ε, b = 1/f − 1 = ε/(1 − ε)
            let f = 1.0 - eps;
            let df = p * eps / r;
            Radial {
                a: 1.0,
                b: eps / f,
                c: f,
                da: 0.0,
                db: -df / (f * f),
                dc: df,
            }
        }
        Chart::Isotropic => {
            let w = 1.0 + 0.25 * eps;
            let psi = libm::pow(w, 4.0 / p);
            let v = (1.0 - 0.25 * eps) / w;
            Radial {
                a: psi,
                b: 0.0,
                c: v * v,
                da: -eps / r * libm::pow(w, 4.0 / p - 1.0),
                db: 0.0,
                dc: p * eps * v / (r * w * w),
            }
        }
    })
}

/// Frame components of the Schwarzschild metric relative to the flat
/// model dx² + dt², with |x| the chart radius.
pub fn schwarzschild_components(params: &SchwarzschildParams, chart: Chart, p: &FramePoint) -> Result<FrameTensor2> {
    if p.base().len() != params.base_dim() {
        return Err(invalid("point", "dimension does not match n − 1"));
    }
    Ok(coefficients(params, chart, p.radius())?.components(p))
}

/// Area radius r as a function of the isotropic radius u.
pub fn isotropic_radius(params: &SchwarzschildParams, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(invalid("u", "isotropic radius must be positive"));
    }
    let p = params.power();
    Ok(u * libm::pow(1.0 + 0.25 * libm::pow(params.gamma() / u, p), 2.0 / p))
}

/// Schwarzschild metric on R^{n−1} × S¹ outside the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Schwarzschild {
    params: SchwarzschildParams,
    chart: Chart,
    model: ModelMetric,
}

impl Schwarzschild {
    pub fn new(params: SchwarzschildParams, chart: Chart) -> Result<Self> {
        let model = ModelMetric::trivial(params.base_dim(), params.fiber_length())?;
        Ok(Self { params, chart, model })
    }

    pub fn params(&self) -> &SchwarzschildParams {
        &self.params
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }
}

impl MetricFamily for Schwarzschild {
    fn model(&self) -> &ModelMetric {
        &self.model
    }

    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        schwarzschild_components(&self.params, self.chart, p)
    }

    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        Some(coefficients(&self.params, self.chart, p.radius()).map(|c| c.derivative(p)))
    }

    fn decay_order(&self) -> f64 {
        self.params.power()
    }

    fn min_radius(&self) -> f64 {
        self.params.horizon(self.chart).max(1.0)
    }
}

/// Samples of G(ρ) and F(ρ) on a uniform ρ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpTable {
    pub rho: Vec<f64>,
    pub g: Vec<f64>,
    pub f: Vec<f64>,
}

/// Integrates G' = √(1 − (γ/G)^{n−3}), G(0) = γ, by RK4 on y = √(G − γ),
/// which removes the square-root singularity at ρ = 0.
pub fn warp_profile(params: &SchwarzschildParams, rho_max: f64, steps: usize) -> Result<WarpTable> {
    if steps < 100 {
        return Err(invalid("steps", "need at least 100 steps"));
    }
    if !(rho_max > 0.0 && rho_max.is_finite()) {
        return Err(invalid("rho_max", "need a positive finite range"));
    }
    let gamma = params.gamma();
    let p = params.power();
    // f(s)/s with s = G − γ, finite at s = 0
    let ratio = |s: f64| {
        if s <= 0.0 {
            p / gamma
        } else {
            -libm::expm1(-p * libm::log1p(s / gamma)) / s
        }
    };
    let rhs = |y: f64| 0.5 * libm::sqrt(ratio(y * y));
    let h = rho_max / steps as f64;
    let mut rho = Vec::with_capacity(steps + 1);
    let mut g = Vec::with_capacity(steps + 1);
    let mut f = Vec::with_capacity(steps + 1);
    let mut y = 0.0f64;
    let warp_f = |gv: f64| 2.0 * gamma / p * libm::sqrt((-libm::expm1(p * libm::log(gamma / gv))).max(0.0));
    for i in 0..=steps {
        let gv = gamma + y * y;
        if let Some(&prev) = g.last() {
            if !(gv > prev) {
                return Err(Error::NonConvergence {
                    reason: alloc::format!("warp profile not increasing at step {i}; refine the grid"),
                    table: rho.iter().copied().zip(g.iter().copied()).collect(),
                });
            }
        }
        rho.push(i as f64 * h);
        g.push(gv);
        f.push(warp_f(gv));
        let k1 = rhs(y);
        let k2 = rhs(y + 0.5 * h * k1);
        let k3 = rhs(y + 0.5 * h * k2);
        let k4 = rhs(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(WarpTable { rho, g, f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::covariant_derivative_metric;
    use alloc::vec;

    fn point(r: f64, m: usize) -> FramePoint {
        let mut x = vec![0.0; m];
        x[0] = r * 0.6;
        x[1] = r * 0.8;
        FramePoint::new(x, 0.3).unwrap()
    }

    #[test]
    fn fiber_component_in_area_chart() {
        let params = SchwarzschildParams::new(4, 1.0).unwrap();
        let g = schwarzschild_components(&params, Chart::AreaRadial, &point(2.0, 3)).unwrap();
        assert!((g.get(3, 3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn isotropic_conformal_factor() {
        // [1 + 1/4]^{4} at n = 4, γ = 1, u = 1; evaluated just outside u = 1
        // because frame points need r > 1
        let params = SchwarzschildParams::new(4, 1.0).unwrap();
        let c = coefficients(&params, Chart::Isotropic, 1.0).unwrap();
        assert!((c.a - 2.44140625).abs() < 1e-14);
        assert!((isotropic_radius(&params, 1.0).unwrap() - 1.5625).abs() < 1e-15);
    }

    #[test]
    fn inside_horizon_is_rejected() {
        let params = SchwarzschildParams::new(4, 3.0).unwrap();
        let err = schwarzschild_components(&params, Chart::AreaRadial, &point(2.0, 3)).unwrap_err();
        assert!(matches!(err, Error::Horizon { horizon, .. } if horizon == 3.0));
    }

    #[test]
    fn charts_are_isometric() {
        for n in 4..7 {
            let params = SchwarzschildParams::new(n, 1.3).unwrap();
            for &u in &[1.5, 3.0, 10.0, 77.0] {
                let r = isotropic_radius(&params, u).unwrap();
                let iso = coefficients(&params, Chart::Isotropic, u).unwrap();
                let area = coefficients(&params, Chart::AreaRadial, r).unwrap();
                // radial: ψ du² = dr²/f, tangential: ψ u² = r², fiber equal
                let h = 1e-6 * u;
                let drdu = (isotropic_radius(&params, u + h).unwrap()
                    - isotropic_radius(&params, u - h).unwrap())
                    / (2.0 * h);
                assert!((iso.a - (area.a + area.b) * drdu * drdu).abs() < 1e-8);
                assert!((iso.a * u * u - r * r).abs() < 1e-10 * r * r);
                assert!((iso.c - area.c).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn area_chart_derivative_of_fiber_component() {
        let fam = Schwarzschild::new(SchwarzschildParams::new(4, 1.0).unwrap(), Chart::AreaRadial).unwrap();
        let p = point(10.0, 3);
        let d = covariant_derivative_metric(&fam, &p, 1e-3).unwrap();
        let n = p.radial_direction();
        let radial: f64 = (0..3).map(|c| n[c] * d.get(3, 3, c)).sum();
        assert!((radial - 0.01).abs() < 1e-12);
    }

    #[test]
    fn isotropic_radius_is_increasing() {
        let params = SchwarzschildParams::new(5, 2.0).unwrap();
        let mut prev = 0.0;
        for i in 0..1000 {
            let u = 2.0 + 198.0 * i as f64 / 999.0;
            let r = isotropic_radius(&params, u).unwrap();
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn warp_profile_shape() {
        for n in [4usize, 5] {
            let params = SchwarzschildParams::new(n, 1.0).unwrap();
            let t = warp_profile(&params, 1000.0, 20000).unwrap();
            assert_eq!(t.g[0], 1.0);
            assert!(t.g.windows(2).all(|w| w[1] > w[0]));
            let last = *t.g.last().unwrap();
            assert!((last / 1000.0 - 1.0).abs() < 0.01, "{last}");
            // F ∼ ρ near 0
            assert!((t.f[1] / t.rho[1] - 1.0).abs() < 1e-2, "{}", t.f[1] / t.rho[1]);
        }
        assert!(warp_profile(&SchwarzschildParams::new(4, 1.0).unwrap(), 10.0, 50).is_err());
    }
}
