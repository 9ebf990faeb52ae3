use alloc::format;

use crate::error::{invalid, Result};

/// Radial coordinate in which a spherically symmetric family is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Chart {
    /// r is the area radius of the orbit spheres.
    AreaRadial,
    /// Base metric conformally flat.
    #[default]
    Isotropic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SchwarzschildParams {
    n: usize,
    gamma: f64,
}

impl SchwarzschildParams {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if n < 4 {
            return Err(invalid("n", format!("need total dimension n >= 4, got {n}")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("need gamma > 0, got {gamma}")));
        }
        Ok(Self { n, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Base dimension m = n − 1.
    pub fn base_dim(&self) -> usize {
        self.n - 1
    }

    pub(crate) fn power(&self) -> f64 {
        (self.n - 3) as f64
    }

    /// Asymptotic fiber length 4πγ/(n−3).
    pub fn fiber_length(&self) -> f64 {
        4.0 * core::f64::consts::PI * self.gamma / self.power()
    }

    /// Horizon in the given chart: γ, or γ·4^{−1/(n−3)} isotropically.
    pub fn horizon(&self, chart: Chart) -> f64 {
        match chart {
            Chart::AreaRadial => self.gamma,
            Chart::Isotropic => self.gamma * libm::pow(4.0, -1.0 / self.power()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReissnerNordstromParams {
    m_param: f64,
    q: f64,
}

impl ReissnerNordstromParams {
    pub fn new(m_param: f64, q: f64) -> Result<Self> {
        if !m_param.is_finite() || !q.is_finite() {
            return Err(invalid("mass-param", "parameters must be finite"));
        }
        if q == 0.0 && m_param <= 0.0 {
            return Err(invalid(
                "charge",
                format!("the metric is complete for mass-param = {m_param} <= 0 only if q != 0"),
            ));
        }
        Ok(Self { m_param, q })
    }

    pub fn m_param(&self) -> f64 {
        self.m_param
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// m² + q².
    pub(crate) fn discriminant(&self) -> f64 {
        self.m_param * self.m_param + self.q * self.q
    }

    /// G₀ = m + √(m² + q²), the bolt radius.
    pub fn g0(&self) -> f64 {
        self.m_param + libm::sqrt(self.discriminant())
    }

    /// Fiber length 2π G₀² / (G₀ − m).
    pub fn fiber_length(&self) -> f64 {
        let g0 = self.g0();
        2.0 * core::f64::consts::PI * g0 * g0 / (g0 - self.m_param)
    }

    pub fn horizon(&self, chart: Chart) -> f64 {
        match chart {
            Chart::AreaRadial => self.g0(),
            Chart::Isotropic => 0.5 * libm::sqrt(self.discriminant()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaubNutParams {
    m_param: f64,
    k: u32,
}

impl TaubNutParams {
    pub fn new(m_param: f64, k: u32) -> Result<Self> {
        if !(m_param > 0.0 && m_param.is_finite()) {
            return Err(invalid("mass-param", format!("need m > 0, got {m_param}")));
        }
        if k == 0 {
            return Err(invalid("monopole-k", "need k >= 1"));
        }
        Ok(Self { m_param, k })
    }

    pub fn m_param(&self) -> f64 {
        self.m_param
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn rn_completeness_requires_charge() {
        let err = ReissnerNordstromParams::new(-0.5, 0.0).unwrap_err();
        match err {
            Error::InvalidParameter { name, reason } => {
                assert_eq!(name, "charge");
                assert!(reason.contains("q != 0"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
        assert!(ReissnerNordstromParams::new(0.0, 0.0).is_err());
        assert!(ReissnerNordstromParams::new(-0.5, 1.0).is_ok());
        assert!(ReissnerNordstromParams::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn rn_fiber_length_is_smooth_period() {
        let p = ReissnerNordstromParams::new(-0.5, 1.0).unwrap();
        let g0 = p.g0();
        let fprime = 2.0 * p.m_param() / (g0 * g0) + 2.0 * p.q() * p.q() / (g0 * g0 * g0);
        assert!((p.fiber_length() - 4.0 * core::f64::consts::PI / fprime).abs() < 1e-12);
    }

    #[test]
    fn schwarzschild_validation() {
        assert!(SchwarzschildParams::new(3, 1.0).is_err());
        assert!(SchwarzschildParams::new(4, 0.0).is_err());
        let p = SchwarzschildParams::new(4, 1.0).unwrap();
        assert!((p.fiber_length() - 4.0 * core::f64::consts::PI).abs() < 1e-15);
        assert!((p.horizon(Chart::Isotropic) - 0.25).abs() < 1e-15);
    }
}
