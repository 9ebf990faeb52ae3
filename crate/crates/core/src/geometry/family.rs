use super::frame::{FrameDerivative, FramePoint, FrameTensor2};
use super::model::ModelMetric;
use crate::error::Result;

/// An evaluatable metric g on the exterior region, expressed through its
/// components in the adapted frame of its model h.
pub trait MetricFamily {
    fn model(&self) -> &ModelMetric;

    /// g_ab at `p` in the h-orthonormal frame (X_1, …, X_m, T).
    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2>;

    /// Exact directional derivatives e_c(g_ab), when the family knows them.
    fn exact_frame_derivative(&self, _p: &FramePoint) -> Option<Result<FrameDerivative>> {
        None
    }

    /// The exponent a with g − h = O(r^{−a}).
    fn decay_order(&self) -> f64;

    /// Smallest coordinate radius at which the family may be evaluated.
    fn min_radius(&self) -> f64 {
        1.0
    }
}

impl<F: MetricFamily + ?Sized> MetricFamily for &F {
    fn model(&self) -> &ModelMetric {
        (**self).model()
    }
    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        (**self).frame_components(p)
    }
    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        (**self).exact_frame_derivative(p)
    }
    fn decay_order(&self) -> f64 {
        (**self).decay_order()
    }
    fn min_radius(&self) -> f64 {
        (**self).min_radius()
    }
}

impl<F: MetricFamily + ?Sized> MetricFamily for alloc::boxed::Box<F> {
    fn model(&self) -> &ModelMetric {
        (**self).model()
    }
    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        (**self).frame_components(p)
    }
    fn exact_frame_derivative(&self, p: &FramePoint) -> Option<Result<FrameDerivative>> {
        (**self).exact_frame_derivative(p)
    }
    fn decay_order(&self) -> f64 {
        (**self).decay_order()
    }
    fn min_radius(&self) -> f64 {
        (**self).min_radius()
    }
}
