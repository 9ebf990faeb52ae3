//! Model metrics on exterior circle fibrations, adapted frames and
//! finite-difference curvature.

mod connection;
mod derivative;
mod family;
mod frame;
mod laplacian;
mod model;
mod ricci;

pub use connection::frame_connection_coeffs;
pub use derivative::{
    covariant_derivative_metric, covariant_from_plain, default_step, frame_derivative,
    frame_derivative_fd, DerivativeSource, CROSS_CHECK_TOLERANCE,
};
pub use family::MetricFamily;
pub use frame::{ConnectionCoeffs, CovDerivTensor, FrameDerivative, FramePoint, FrameTensor2, Tensor3};
pub use laplacian::model_laplacian;
pub use model::{radius, ConnectionData, FibrationKind, ModelMetric, Patch};
pub use ricci::{default_ricci_step, ricci_fd, CoordinateChart, FrameChart, RicciOptions, RicciReport};
