use super::super::geometry::{FrameDerivative, FramePoint, FrameTensor2};

/// Rotationally symmetric frame components
/// g_ij = a(r) δ_ij + b(r) n_i n_j, g_TT = c(r), with r-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Radial {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub da: f64,
    pub db: f64,
    pub dc: f64,
}

impl Radial {
    pub fn components(&self, p: &FramePoint) -> FrameTensor2 {
        FrameTensor2::radial(&p.radial_direction(), self.a, self.b, self.c)
    }

    /// X_c(g_ab); the coefficients do not depend on t, and on such
    /// functions X_c acts as ∂_c.
    pub fn derivative(&self, p: &FramePoint) -> FrameDerivative {
        let nv = p.radial_direction();
        let r = p.radius();
        let m = nv.len();
        let mut d = FrameDerivative::zeros(m + 1);
        let kd = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        for c in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let dni = (kd(i, c) - nv[i] * nv[c]) / r;
                    let dnj = (kd(j, c) - nv[j] * nv[c]) / r;
                    let v = self.da * nv[c] * kd(i, j)
                        + self.db * nv[c] * nv[i] * nv[j]
                        + self.b * (dni * nv[j] + nv[i] * dnj);
                    d.set(i, j, c, v);
                }
            }
            d.set(m, m, c, self.dc * nv[c]);
        }
        d
    }
}
