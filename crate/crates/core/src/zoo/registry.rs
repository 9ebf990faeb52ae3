use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use super::params::{Chart, ReissnerNordstromParams, SchwarzschildParams, TaubNutParams};
use super::reissner_nordstrom::ReissnerNordstrom;
use super::schwarzschild::Schwarzschild;
use super::taub_nut::TaubNut;
use super::transform::Flat;
use crate::error::{invalid, Result};
use crate::geometry::{MetricFamily, ModelMetric};

pub const FAMILY_NAMES: [&str; 4] = ["flat", "schwarzschild", "reissner-nordstrom", "taub-nut"];

pub type DynFamily = Box<dyn MetricFamily + Send + Sync>;

/// A named zoo family with validated parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Flat { model: ModelMetric },
    Schwarzschild { params: SchwarzschildParams, chart: Chart },
    ReissnerNordstrom { params: ReissnerNordstromParams, chart: Chart },
    TaubNut { params: TaubNutParams },
}

fn required(params: &BTreeMap<String, f64>, key: &'static str, family: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| invalid(key, format!("required by family `{family}`")))
}

fn integer(value: f64, key: &'static str) -> Result<usize> {
    if value < 0.0 || libm::trunc(value) != value || value > 1e6 {
        return Err(invalid(key, format!("expected a non-negative integer, got {value}")));
    }
    Ok(value as usize)
}

impl FamilySpec {
    /// Looks up `name` in the registry and reads its parameters from `params`.
    ///
    /// Keys: `m`, `monopole-k` and `fiber-length` for flat; `n` and `gamma` for
    /// schwarzschild; `mass-param` and `charge` for reissner-nordstrom;
    /// `mass-param` and `monopole-k` for taub-nut.
    pub fn from_params(name: &str, params: &BTreeMap<String, f64>, chart: Chart) -> Result<Self> {
        match name {
            "flat" => {
                let model = match params.get("monopole-k") {
                    Some(&k) => {
                        if let Some(&m) = params.get("m") {
                            if m != 3.0 {
                                return Err(invalid("m", "Hopf models need m = 3"));
                            }
                        }
                        ModelMetric::hopf(integer(k, "monopole-k")? as u32)?
                    }
                    None => {
                        let m = integer(params.get("m").copied().unwrap_or(3.0), "m")?;
                        ModelMetric::trivial(m, params.get("fiber-length").copied().unwrap_or(1.0))?
                    }
                };
                Ok(Self::Flat { model })
            }
            "schwarzschild" => {
                let n = integer(required(params, "n", name)?, "n")?;
                let gamma = required(params, "gamma", name)?;
                Ok(Self::Schwarzschild {
                    params: SchwarzschildParams::new(n, gamma)?,
                    chart,
                })
            }
            "reissner-nordstrom" => Ok(Self::ReissnerNordstrom {
                params: ReissnerNordstromParams::new(
                    required(params, "mass-param", name)?,
                    required(params, "charge", name)?,
                )?,
                chart,
            }),
            "taub-nut" => {
                let k = integer(params.get("monopole-k").copied().unwrap_or(1.0), "monopole-k")?;
                Ok(Self::TaubNut {
                    params: TaubNutParams::new(required(params, "mass-param", name)?, k as u32)?,
                })
            }
            other => Err(invalid(
                "family",
                format!("unknown family `{other}`; expected one of {}", FAMILY_NAMES.join(", ")),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Flat { .. } => "flat",
            Self::Schwarzschild { .. } => "schwarzschild",
            Self::ReissnerNordstrom { .. } => "reissner-nordstrom",
            Self::TaubNut { .. } => "taub-nut",
        }
    }

    pub fn build(&self) -> Result<DynFamily> {
        Ok(match self {
            Self::Flat { model } => Box::new(Flat::new(model.clone())),
            Self::Schwarzschild { params, chart } => Box::new(Schwarzschild::new(*params, *chart)?),
            Self::ReissnerNordstrom { params, chart } => Box::new(ReissnerNordstrom::new(*params, *chart)?),
            Self::TaubNut { params } => Box::new(TaubNut::new(*params)?),
        })
    }
}
