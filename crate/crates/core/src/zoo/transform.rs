use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::geometry::{FrameDerivative, FramePoint, FrameTensor2, MetricFamily, ModelMetric};

/// The model metric itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Flat {
    model: ModelMetric,
}

impl Flat {
    pub fn new(model: ModelMetric) -> Self {
        Self { model }
    }
}

impl MetricFamily for Flat {
    fn model(&self) -> &ModelMetric {
        &self.model
    }
    fn frame_components(&self, _p: &FramePoint) -> Result<FrameTensor2> {
        Ok(FrameTensor2::identity(self.model.dim()))
    }
    fn exact_frame_derivative(&self, _p: &FramePoint) -> Option<Result<FrameDerivative>> {
        Some(Ok(FrameDerivative::zeros(self.model.dim())))
    }
    fn decay_order(&self) -> f64 {
        f64::INFINITY
    }
}

fn require_trivial(model: &ModelMetric) -> Result<()> {
    if !model.is_trivial() {
        return Err(invalid("family", "base isometries are only supported on trivial fibrations"));
    }
    Ok(())
}

/// Pullback of a family by a rotation x ↦ Rx of the base.
#[derive(Debug, Clone)]
pub struct Rotated<F> {
    inner: F,
    frame: DMatrix<f64>,
}

impl<F: MetricFamily> Rotated<F> {
    pub fn new(inner: F, rotation: DMatrix<f64>) -> Result<Self> {
        require_trivial(inner.model())?;
        let m = inner.model().base_dim();
        if rotation.nrows() != m || rotation.ncols() != m {
            return Err(invalid("rotation", "shape must be m × m"));
        }
        let defect = (rotation.transpose() * &rotation - DMatrix::identity(m, m)).amax();
        if defect > 1e-12 {
            return Err(invalid("rotation", alloc::format!("not orthogonal (defect {defect:e})")));
        }
        let mut frame = DMatrix::identity(m + 1, m + 1);
        frame.view_mut((0, 0), (m, m)).copy_from(&rotation);
        Ok(Self { inner, frame })
    }

    fn image(&self, p: &FramePoint) -> FramePoint {
        let m = self.frame.nrows() - 1;
        let x: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| self.frame[(i, j)] * p.base()[j]).sum())
            .collect();
        FramePoint::unchecked(x, p.t())
    }
}

/// Rotation by `angle` in the (i, j) coordinate plane of R^m.
pub fn plane_rotation(m: usize, i: usize, j: usize, angle: f64) -> DMatrix<f64> {
    let mut r = DMatrix::identity(m, m);
    let (s, c) = libm::sincos(angle);
    r[(i, i)] = c;
    r[(j, j)] = c;
    r[(i, j)] = -s;
    r[(j, i)] = s;
    r
}

impl<F: MetricFamily> MetricFamily for Rotated<F> {
    fn model(&self) -> &ModelMetric {
        self.inner.model()
    }

    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        let g = self.inner.frame_components(&self.image(p))?.into_matrix();
        Ok(FrameTensor2::from_matrix(self.frame.transpose() * g * &self.frame))
    }

    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        let q = self.image(p);
        let d = match self.inner.exact_frame_derivative(&q)? {
            Ok(d) => d,
            Err(e) => return Some(Err(e)),
        };
        let n = self.frame.nrows();
        let mut out = FrameDerivative::zeros(n);
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for dd in 0..n {
                        let w = self.frame[(dd, c)];
                        if w == 0.0 {
                            continue;
                        }
                        for k in 0..n {
                            for l in 0..n {
                                s += w * self.frame[(k, a)] * self.frame[(l, b)] * d.get(k, l, dd);
                            }
                        }
                    }
                    out.set(a, b, c, s);
                }
            }
        }
        Some(Ok(out))
    }

    fn decay_order(&self) -> f64 {
        self.inner.decay_order()
    }

    fn min_radius(&self) -> f64 {
        self.inner.min_radius()
    }
}

/// Pullback by a base translation x ↦ x + c.
#[derive(Debug, Clone)]
pub struct Translated<F> {
    inner: F,
    shift: Vec<f64>,
}

impl<F: MetricFamily> Translated<F> {
    pub fn new(inner: F, shift: Vec<f64>) -> Result<Self> {
        require_trivial(inner.model())?;
        if shift.len() != inner.model().base_dim() {
            return Err(invalid("shift", "length must equal the base dimension"));
        }
        Ok(Self { inner, shift })
    }

    fn image(&self, p: &FramePoint) -> FramePoint {
        p.shifted(&self.shift, 0.0)
    }
}

impl<F: MetricFamily> MetricFamily for Translated<F> {
    fn model(&self) -> &ModelMetric {
        self.inner.model()
    }
    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        self.inner.frame_components(&self.image(p))
    }
    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        self.inner.exact_frame_derivative(&self.image(p))
    }
    fn decay_order(&self) -> f64 {
        self.inner.decay_order()
    }
    fn min_radius(&self) -> f64 {
        let norm = libm::sqrt(self.shift.iter().map(|v| v * v).sum::<f64>());
        (self.inner.min_radius() + norm).max(1.0)
    }
}

/// Pullback by the fiber translation t ↦ t + c.
#[derive(Debug, Clone)]
pub struct FiberShifted<F> {
    inner: F,
    shift: f64,
}

impl<F: MetricFamily> FiberShifted<F> {
    pub fn new(inner: F, shift: f64) -> Self {
        Self { inner, shift }
    }

    fn image(&self, p: &FramePoint) -> FramePoint {
        let l = self.inner.model().fiber_length();
        FramePoint::unchecked(p.base().to_vec(), crate::numeric::rem_euclid(p.t() + self.shift, l))
    }
}

impl<F: MetricFamily> MetricFamily for FiberShifted<F> {
    fn model(&self) -> &ModelMetric {
        self.inner.model()
    }
    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        self.inner.frame_components(&self.image(p))
    }
    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        self.inner.exact_frame_derivative(&self.image(p))
    }
    fn decay_order(&self) -> f64 {
        self.inner.decay_order()
    }
    fn min_radius(&self) -> f64 {
        self.inner.min_radius()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{Chart, Schwarzschild, SchwarzschildParams};
    use alloc::vec;

    fn schw() -> Schwarzschild {
        Schwarzschild::new(SchwarzschildParams::new(4, 1.0).unwrap(), Chart::AreaRadial).unwrap()
    }

    #[test]
    fn rotated_exact_derivative_matches_differences() {
        let r = plane_rotation(3, 0, 2, 0.7) * plane_rotation(3, 0, 1, -0.4);
        let fam = Rotated::new(schw(), r).unwrap();
        let p = FramePoint::new(vec![3.0, -2.0, 1.0], 0.0).unwrap();
        let exact = fam.exact_frame_derivative(&p).unwrap().unwrap();
        let fd = crate::geometry::frame_derivative_fd(&fam, &p, 1e-4).unwrap();
        assert!(exact.max_abs_difference(&fd) < 1e-9);
    }

    #[test]
    fn rotation_preserves_radial_family() {
        let fam = Rotated::new(schw(), plane_rotation(3, 1, 2, 1.1)).unwrap();
        let p = FramePoint::new(vec![3.0, -2.0, 1.0], 0.0).unwrap();
        let a = fam.frame_components(&p).unwrap();
        let b = schw().frame_components(&p).unwrap();
        assert!((a.matrix() - b.matrix()).amax() < 1e-14);
    }

    #[test]
    fn rejects_non_orthogonal_and_hopf() {
        let mut r = plane_rotation(3, 0, 1, 0.3);
        r[(0, 0)] = 2.0;
        assert!(Rotated::new(schw(), r).is_err());
        let hopf = Flat::new(ModelMetric::hopf(1).unwrap());
        assert!(Translated::new(hopf, vec![0.1, 0.0, 0.0]).is_err());
    }

    #[test]
    fn translation_moves_the_center() {
        let fam = Translated::new(schw(), vec![0.5, 0.0, 0.0]).unwrap();
        let p = FramePoint::new(vec![2.5, 0.0, 0.0], 0.0).unwrap();
        assert!((fam.frame_components(&p).unwrap().get(3, 3) - (1.0 - 1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(fam.min_radius(), 1.5);
    }
}
