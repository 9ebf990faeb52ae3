use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use super::derivative::check_step;
use super::family::MetricFamily;
use super::frame::FramePoint;
use super::model::{radius, Patch};
use crate::error::{Error, Result};

/// Coordinate components g(∂_μ, ∂_ν) of a metric in some chart.
pub trait CoordinateChart {
    fn dim(&self) -> usize;
    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>>;
}

impl<C: CoordinateChart + ?Sized> CoordinateChart for &C {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        (**self).metric(x)
    }
}

/// Coordinate chart (x_1, …, x_m, t) of a frame family, using one fixed
/// patch of the model potential. With ∂_i = X_i + A_i T and ∂_t = T the
/// coordinate metric is Eᵀ G E.
pub struct FrameChart<F> {
    family: F,
    patch: Patch,
}

impl<F: MetricFamily> FrameChart<F> {
    pub fn new(family: F, patch: Patch) -> Self {
        Self { family, patch }
    }

    /// Chart whose patch is regular at `x`.
    pub fn around(family: F, x: &[f64]) -> Self {
        let patch = family.model().patch_for(x);
        Self { family, patch }
    }
}

impl<F: MetricFamily> CoordinateChart for FrameChart<F> {
    fn dim(&self) -> usize {
        self.family.model().dim()
    }

    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let model = self.family.model();
        let m = model.base_dim();
        let p = FramePoint::unchecked(x[..m].to_vec(), x[m]);
        if p.radius() <= 1.0 {
            return Err(Error::Domain {
                radius: p.radius(),
                minimum: 1.0,
            });
        }
        let g = self.family.frame_components(&p)?.into_matrix();
        let a = model.potential(&x[..m], self.patch);
        let mut e = DMatrix::identity(m + 1, m + 1);
        for (i, ai) in a.iter().enumerate() {
            e[(m, i)] = *ai;
        }
        Ok(e.transpose() * g * e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciOptions {
    /// Base step; `None` selects [`default_ricci_step`].
    pub step: Option<f64>,
    /// Combine steps h and h/2 to cancel the O(h²) error.
    pub richardson: bool,
}

impl Default for RicciOptions {
    fn default() -> Self {
        Self {
            step: None,
            richardson: true,
        }
    }
}

/// Default base step for [`ricci_fd`] at radius r.
pub fn default_ricci_step(r: f64) -> f64 {
    1e-2 * r.max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicciReport {
    /// Coordinate components R_μν.
    pub ricci: DMatrix<f64>,
    /// Eigenvalues of g⁻¹Ric, ascending.
    pub eigenvalues: Vec<f64>,
    pub scalar: f64,
    pub step: f64,
}

fn christoffel<C: CoordinateChart + ?Sized>(chart: &C, x: &[f64], h: f64) -> Result<Vec<f64>> {
    // Γ^k_ij stored at (k * n + i) * n + j
    let n = chart.dim();
    let g = chart.metric(x)?;
    let ginv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularMetric { at: x.to_vec() })?;
    let mut dg = Vec::with_capacity(n);
    let mut y = x.to_vec();
    for l in 0..n {
        y[l] = x[l] + h;
        let gp = chart.metric(&y)?;
        y[l] = x[l] - h;
        let gm = chart.metric(&y)?;
        y[l] = x[l];
        dg.push((gp - gm) / (2.0 * h));
    }
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += ginv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                gamma[(k * n + i) * n + j] = 0.5 * s;
                gamma[(k * n + j) * n + i] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

fn ricci_at_step<C: CoordinateChart + ?Sized>(chart: &C, x: &[f64], h: f64) -> Result<DMatrix<f64>> {
    let n = chart.dim();
    let idx = |k: usize, i: usize, j: usize| (k * n + i) * n + j;
    let g0 = christoffel(chart, x, h)?;
    let mut dgamma = Vec::with_capacity(n);
    let mut y = x.to_vec();
    for l in 0..n {
        y[l] = x[l] + h;
        let gp = christoffel(chart, &y, h)?;
        y[l] = x[l] - h;
        let gm = christoffel(chart, &y, h)?;
        y[l] = x[l];
        dgamma.push(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<_>>());
    }
    let mut ric = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for k in 0..n {
                s += dgamma[k][idx(k, i, j)] - dgamma[j][idx(k, i, k)];
                for l in 0..n {
                    s += g0[idx(k, k, l)] * g0[idx(l, i, j)] - g0[idx(k, j, l)] * g0[idx(l, i, k)];
                }
            }
            ric[(i, j)] = s;
            ric[(j, i)] = s;
        }
    }
    Ok(ric)
}

/// Ricci tensor at `x` by nested central differences of the Christoffel
/// symbols, with eigenvalues relative to g and the scalar curvature.
pub fn ricci_fd<C: CoordinateChart + ?Sized>(chart: &C, x: &[f64], options: RicciOptions) -> Result<RicciReport> {
    let n = chart.dim();
    if x.len() != n {
        return Err(crate::error::invalid("point", "dimension does not match the chart"));
    }
    let scale = radius(&x[..n.saturating_sub(1).max(1)]);
    let h = options.step.unwrap_or_else(|| default_ricci_step(scale));
    check_step(h, scale)?;
    let ricci = if options.richardson {
        let coarse = ricci_at_step(chart, x, h)?;
        let fine = ricci_at_step(chart, x, 0.5 * h)?;
        (fine * 4.0 - coarse) / 3.0
    } else {
        ricci_at_step(chart, x, h)?
    };
    if ricci.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "ricci tensor",
            at: x.to_vec(),
        });
    }
    let g = chart.metric(x)?;
    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularMetric { at: x.to_vec() })?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::SingularMetric { at: x.to_vec() })?;
    let mut sym = &linv * &ricci * linv.transpose();
    sym = (&sym + sym.transpose()) * 0.5;
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let scalar = eigenvalues.iter().sum();
    Ok(RicciReport {
        ricci,
        eigenvalues,
        scalar,
        step: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Euclid(usize);

    impl CoordinateChart for Euclid {
        fn dim(&self) -> usize {
            self.0
        }
        fn metric(&self, _x: &[f64]) -> Result<DMatrix<f64>> {
            Ok(DMatrix::identity(self.0, self.0))
        }
    }

    /// Round 2-sphere of radius a in (θ, φ), Ric = g / a².
    struct Sphere(f64);

    impl CoordinateChart for Sphere {
        fn dim(&self) -> usize {
            2
        }
        fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
            let a2 = self.0 * self.0;
            Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                a2,
                a2 * libm::sin(x[0]).powi(2),
            ])))
        }
    }

    #[test]
    fn flat_metric_has_zero_ricci() {
        let r = ricci_fd(&Euclid(4), &[2.0, 1.0, 0.5, 0.0], RicciOptions::default()).unwrap();
        assert!(r.ricci.amax() < 1e-8);
    }

    #[test]
    fn round_sphere() {
        let opts = RicciOptions {
            step: Some(1e-2),
            richardson: true,
        };
        let r = ricci_fd(&Sphere(2.0), &[1.1, 0.3], opts).unwrap();
        for e in &r.eigenvalues {
            assert!((e - 0.25).abs() < 1e-8, "{e}");
        }
        assert!((r.scalar - 0.5).abs() < 1e-8);
    }

    #[test]
    fn richardson_improves_on_plain_differences() {
        let plain = |h| {
            ricci_fd(
                &Sphere(1.0),
                &[0.9, 0.0],
                RicciOptions {
                    step: Some(h),
                    richardson: false,
                },
            )
            .unwrap()
            .scalar
        };
        let e1 = (plain(0.025) - 2.0).abs();
        let e2 = (plain(0.0125) - 2.0).abs();
        assert!(e1 / e2 > 3.5, "{e1} {e2}");
    }
}
