use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{covariant_from_plain, frame_derivative, DerivativeSource, FramePoint, MetricFamily};

/// Frame data entering every mass integrand at one point.
struct Local {
    m: usize,
    normal: Vec<f64>,
    /// e_c(g_ab)
    plain: crate::geometry::FrameDerivative,
    /// (∇_c g)(a, b)
    cov: crate::geometry::CovDerivTensor,
}

impl Local {
    fn new<F: MetricFamily + ?Sized>(family: &F, p: &FramePoint, source: DerivativeSource) -> Result<Self> {
        let model = family.model();
        let g = family.frame_components(p)?;
        let plain = frame_derivative(family, p, source)?;
        let cov = covariant_from_plain(model, p, &g, &plain)?;
        Ok(Self {
            m: model.base_dim(),
            normal: p.radial_direction(),
            plain,
            cov,
        })
    }

    /// (Div_h g)(e_c) = −Σ_a (∇_{e_a} g)(e_a, e_c).
    fn div(&self, c: usize) -> f64 {
        -(0..=self.m).map(|a| self.cov.get(a, c, a)).sum::<f64>()
    }

    /// e_c(Tr_h g).
    fn dtr(&self, c: usize) -> f64 {
        (0..=self.m).map(|a| self.plain.get(a, a, c)).sum()
    }

    /// e_c(g(T, T)).
    fn dgtt(&self, c: usize) -> f64 {
        self.plain.get(self.m, self.m, c)
    }

    fn radial(&self, f: impl Fn(usize) -> f64) -> f64 {
        (0..self.m).map(|c| self.normal[c] * f(c)).sum()
    }
}

/// −(Div_h g + d Tr_h g − ½ d g(T,T))(∂_r).
pub fn gb_integrand_radial<F: MetricFamily + ?Sized>(family: &F, p: &FramePoint) -> Result<f64> {
    gb_integrand_with(family, p, DerivativeSource::Auto)
}

pub fn gb_integrand_with<F: MetricFamily + ?Sized>(family: &F, p: &FramePoint, source: DerivativeSource) -> Result<f64> {
    let l = Local::new(family, p, source)?;
    Ok(-l.radial(|c| l.div(c) + l.dtr(c) - 0.5 * l.dgtt(c)))
}

/// −(Div_{h₀} g + d Tr_{h₀} g)(∂_r); defined for trivial fibrations only.
pub fn dirac_integrand_radial<F: MetricFamily + ?Sized>(family: &F, p: &FramePoint) -> Result<f64> {
    dirac_integrand_with(family, p, DerivativeSource::Auto)
}

pub fn dirac_integrand_with<F: MetricFamily + ?Sized>(
    family: &F,
    p: &FramePoint,
    source: DerivativeSource,
) -> Result<f64> {
    if !family.model().is_trivial() {
        return Err(Error::UnsupportedModel(
            "the Dirac mass is defined only for trivial fibrations".into(),
        ));
    }
    let l = Local::new(family, p, source)?;
    Ok(-l.radial(|c| l.div(c) + l.dtr(c)))
}

/// Leading-order form of the GB integrand, which drops the T-derivative
/// term and the connection corrections:
/// Σ_i n_i [Σ_j X_j g(X_i, X_j) − X_i Σ_j g(X_j, X_j) − ½ X_i g(T, T)].
pub fn gb_integrand_simplified<F: MetricFamily + ?Sized>(
    family: &F,
    p: &FramePoint,
    source: DerivativeSource,
) -> Result<f64> {
    let l = Local::new(family, p, source)?;
    let m = l.m;
    Ok(l.radial(|i| {
        (0..m).map(|j| l.plain.get(i, j, j) - l.plain.get(j, j, i)).sum::<f64>() - 0.5 * l.dgtt(i)
    }))
}

/// Radial component of the polarized quadratic-form density q(X_i, X_j),
/// returned as the upper triangle in row-major order. Its trace is the GB
/// integrand.
pub fn quadratic_form_integrand<F: MetricFamily + ?Sized>(
    family: &F,
    p: &FramePoint,
    source: DerivativeSource,
) -> Result<Vec<f64>> {
    let l = Local::new(family, p, source)?;
    let m = l.m;
    let n = &l.normal;
    let div: Vec<f64> = (0..m).map(|i| l.div(i)).collect();
    let dtr: Vec<f64> = (0..m).map(|i| l.dtr(i)).collect();
    let mut out = vec![0.0; m * (m + 1) / 2];
    let mut idx = 0;
    for i in 0..m {
        for j in i..m {
            let dgij = l.radial(|c| l.plain.get(i, j, c));
            out[idx] = -0.5 * (div[i] * n[j] + div[j] * n[i]) - 0.25 * (dtr[i] * n[j] + dtr[j] * n[i]) - 0.5 * dgij;
            idx += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{Chart, Schwarzschild, SchwarzschildParams, TaubNut, TaubNutParams};

    fn iso(n: usize) -> Schwarzschild {
        Schwarzschild::new(SchwarzschildParams::new(n, 1.0).unwrap(), Chart::Isotropic).unwrap()
    }

    #[test]
    fn schwarzschild_isotropic_values() {
        let fam = iso(4);
        let p = FramePoint::new(vec![6.0, 0.0, 8.0], 0.2).unwrap();
        let u: f64 = 10.0;
        let gb = gb_integrand_radial(&fam, &p).unwrap();
        let dirac = dirac_integrand_radial(&fam, &p).unwrap();
        // closed form for ψ = 1 + 1/(4u), a = ψ⁴, c = ((1 − 1/(4u))/ψ)²
        let psi = 1.0 + 0.25 / u;
        let da = -psi.powi(3) / (u * u);
        let sq = (1.0 - 0.25 / u) / psi;
        let dc = 2.0 * sq * (0.5 / (u * u)) / (psi * psi);
        assert!((gb - (-2.0 * da - 0.5 * dc)).abs() < 1e-12, "{gb}");
        assert!((dirac - (-2.0 * da - dc)).abs() < 1e-12, "{dirac}");
        // leading terms 1.5 u^{-2} and u^{-2}, up to O(u^{-3})
        assert!((gb - 0.015).abs() < 3.0 / u.powi(3), "{gb}");
        assert!((dirac - 0.01).abs() < 3.0 / u.powi(3), "{dirac}");
    }

    #[test]
    fn taub_nut_leading_term() {
        let fam = TaubNut::new(TaubNutParams::new(1.0, 1).unwrap()).unwrap();
        let p = FramePoint::new(vec![0.0, 6.0, 8.0], 0.0).unwrap();
        let r: f64 = 10.0;
        let v = 1.0 + 2.0 / r;
        let gb = gb_integrand_radial(&fam, &p).unwrap();
        assert!((gb - (4.0 / (r * r) - 1.0 / (r * r * v * v))).abs() < 1e-12, "{gb}");
        assert!((gb - 0.03).abs() < 4.0 / r.powi(3), "{gb}");
        assert!(matches!(dirac_integrand_radial(&fam, &p), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn quadratic_form_trace_is_gb_integrand() {
        let p = FramePoint::new(vec![3.0, -4.0, 1.0], 0.5).unwrap();
        let tn = TaubNut::new(TaubNutParams::new(0.7, 2).unwrap()).unwrap();
        for fam in [&iso(4) as &dyn MetricFamily, &tn] {
            let q = quadratic_form_integrand(fam, &p, DerivativeSource::Auto).unwrap();
            let trace = q[0] + q[3] + q[5];
            let gb = gb_integrand_radial(fam, &p).unwrap();
            assert!((trace - gb).abs() < 1e-15 + 1e-12 * gb.abs());
        }
    }
}
