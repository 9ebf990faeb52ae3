use std::f64::consts::PI;

use alf_core::geometry::{DerivativeSource, FrameDerivative, FramePoint, FrameTensor2, MetricFamily, ModelMetric};
use alf_core::mass::*;
use alf_core::numeric::{linear_fit, unit_sphere_area};
use alf_core::zoo::*;
use alf_core::Result;

fn schw(n: usize, gamma: f64, chart: Chart) -> Schwarzschild {
    Schwarzschild::new(SchwarzschildParams::new(n, gamma).unwrap(), chart).unwrap()
}

fn default_run() -> (RadiusSchedule, QuadratureSpec) {
    (RadiusSchedule::default(), QuadratureSpec::default())
}

#[test]
fn flat_families_have_zero_mass() {
    let (s, q) = default_run();
    for model in [ModelMetric::trivial(3, 1.0).unwrap(), ModelMetric::trivial(5, 2.0).unwrap(), ModelMetric::hopf(2).unwrap()] {
        let fam = Flat::new(model.clone());
        let gb = mass_gb(&fam, &s, &q).unwrap();
        assert_eq!(gb.extrapolated, 0.0);
        assert_eq!(gb.method, FitMethod::Constant);
        if model.is_trivial() {
            assert_eq!(mass_dirac(&fam, &s, &q).unwrap().extrapolated, 0.0);
        } else {
            assert!(mass_dirac(&fam, &s, &q).is_err());
        }
    }
}

#[test]
fn schwarzschild_masses_in_both_charts() {
    let (s, q) = default_run();
    for chart in [Chart::Isotropic, Chart::AreaRadial] {
        let f4 = schw(4, 1.0, chart);
        assert!((mass_gb(&f4, &s, &q).unwrap().extrapolated - 1.5).abs() < 1e-3);
        assert!((mass_dirac(&f4, &s, &q).unwrap().extrapolated - 1.0).abs() < 1e-3);
        let f4b = schw(4, 2.0, chart);
        let r = RadiusSchedule::new(32.0, 2.0, 6).unwrap();
        assert!((mass_dirac(&f4b, &r, &q).unwrap().extrapolated - 2.0).abs() < 2e-3);
        let f5 = schw(5, 1.0, chart);
        let gb = mass_gb(&f5, &s, &q).unwrap().extrapolated;
        let d = mass_dirac(&f5, &s, &q).unwrap().extrapolated;
        assert!((gb - 2.0).abs() < 1e-3 && (d - 1.0).abs() < 1e-3);
        assert!((gb / d - 2.0).abs() < 2e-3);
    }
}

#[test]
fn report_metadata() {
    let (s, q) = default_run();
    let rep = mass_gb(&schw(5, 1.0, Chart::Isotropic), &s, &q).unwrap();
    assert_eq!(rep.per_radius.len(), 6);
    assert_eq!(rep.model.base_dim, 4);
    assert!((rep.model.fiber_length - 2.0 * PI).abs() < 1e-14);
    assert!((rep.model.sphere_area - 2.0 * PI * PI).abs() < 1e-12);
    assert!(rep.residual.is_finite());
    // Aitken and the fit agree within twice the residual plus the tail size
    let a = rep.aitken.unwrap();
    assert!((a - rep.extrapolated).abs() < 2.0 * rep.residual + 1e-6);
}

#[test]
fn reissner_nordstrom_negative_mass() {
    let (s, q) = default_run();
    let params = ReissnerNordstromParams::new(-0.5, 1.0).unwrap();
    for chart in [Chart::Isotropic, Chart::AreaRadial] {
        let fam = ReissnerNordstrom::new(params, chart).unwrap();
        let d = mass_dirac(&fam, &s, &q).unwrap().extrapolated;
        assert!((d + 1.0).abs() < 1e-3, "{chart:?} {d}");
    }
}

#[test]
fn taub_nut_masses() {
    let (s, q) = default_run();
    for (k, tol) in [(1u32, 1e-2), (2, 2e-2)] {
        let fam = TaubNut::new(TaubNutParams::new(1.0, k).unwrap()).unwrap();
        let rep = mass_gb(&fam, &s, &q).unwrap();
        assert!((rep.extrapolated - 3.0 * k as f64).abs() < tol, "{}", rep.extrapolated);
        assert_eq!(rep.model.kind, alf_core::geometry::FibrationKind::Hopf);
    }
    // L does not enter: halving m halves the mass
    let fam = TaubNut::new(TaubNutParams::new(0.5, 1).unwrap()).unwrap();
    assert!((mass_gb(&fam, &s, &q).unwrap().extrapolated - 1.5).abs() < 1e-2);
}

#[test]
fn quadratic_form_of_schwarzschild() {
    let (s, q) = default_run();
    let fam = schw(4, 1.0, Chart::Isotropic);
    let form = mass_quadratic_form(&fam, &s, &q).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let expected = if i == j { 0.5 } else { 0.0 };
            assert!((form.matrix[i][j] - expected).abs() < 1e-3, "{:?}", form.matrix);
        }
    }
    assert_eq!(form.asymmetry(), 0.0);
    let gb = mass_gb(&fam, &s, &q).unwrap();
    assert!((form.trace() - gb.extrapolated).abs() < 3.0 * (form.residual + gb.residual) + 1e-9);

    let flat = mass_quadratic_form(&Flat::new(ModelMetric::trivial(3, 1.0).unwrap()), &s, &q).unwrap();
    assert!(flat.matrix.iter().flatten().all(|v| *v == 0.0));
}

#[test]
fn quadratic_form_of_taub_nut_is_isotropic() {
    let (s, q) = default_run();
    let fam = TaubNut::new(TaubNutParams::new(1.0, 1).unwrap()).unwrap();
    let form = mass_quadratic_form(&fam, &s, &q).unwrap();
    for i in 0..3 {
        assert!((form.matrix[i][i] - 1.0).abs() < 1e-2);
    }
}

#[test]
fn chart_invariance() {
    let (s, q) = default_run();
    for n in [4, 5] {
        let rep = chart_invariance_check(&schw(n, 1.0, Chart::AreaRadial), &schw(n, 1.0, Chart::Isotropic), &s, &q).unwrap();
        assert!(rep.difference < 1e-3, "n={n} {}", rep.difference);
    }
    let flat = Flat::new(ModelMetric::trivial(3, 1.0).unwrap());
    let rotated = Rotated::new(flat.clone(), plane_rotation(3, 0, 1, 0.4)).unwrap();
    let rep = chart_invariance_check(&flat, &rotated, &s, &q).unwrap();
    assert_eq!((rep.first.extrapolated, rep.second.extrapolated), (0.0, 0.0));

    let base = schw(4, 1.0, Chart::Isotropic);
    let shifted = FiberShifted::new(base.clone(), 2.345);
    let rep = chart_invariance_check(&base, &shifted, &s, &q).unwrap();
    assert_eq!(rep.first.per_radius, rep.second.per_radius);
}

#[test]
fn radial_integrand_integrates_exactly() {
    for m in [3usize, 4, 5] {
        let model = ModelMetric::trivial(m, 1.3).unwrap();
        let f = |p: &FramePoint| Ok(1.0 / (1.0 + p.radius()));
        let expected = 1.0 / 4.0 * unit_sphere_area(m) * 3f64.powi(m as i32 - 1) * 1.3;
        for nodes in [4, 6, 10] {
            let spec = QuadratureSpec::new(nodes, nodes, 4).unwrap();
            let v = boundary_integral(f, &model, 3.0, &spec).unwrap();
            assert!((v - expected).abs() < 1e-12 * expected, "m={m} nodes={nodes}");
        }
    }
}

#[test]
fn nan_integrand_reports_location() {
    let model = ModelMetric::trivial(3, 1.0).unwrap();
    let err = boundary_integral(|_| Ok(f64::NAN), &model, 2.0, &QuadratureSpec::default()).unwrap_err();
    assert!(matches!(err, alf_core::Error::NonFinite { ref at, .. } if at.len() == 3));
}

#[test]
fn schedule_inside_horizon_is_rejected() {
    let fam = schw(4, 20.0, Chart::AreaRadial);
    let err = mass_gb(&fam, &RadiusSchedule::default(), &QuadratureSpec::default()).unwrap_err();
    assert!(matches!(err, alf_core::Error::Domain { .. }));
}

/// A family plus a fiber-dependent mixed term g(X_i, T) = ε n_i cos(κt) r^{2−m}.
struct Wobbly {
    inner: Box<dyn MetricFamily>,
    eps: f64,
}

impl MetricFamily for Wobbly {
    fn model(&self) -> &ModelMetric {
        self.inner.model()
    }
    fn frame_components(&self, p: &FramePoint) -> Result<FrameTensor2> {
        let g = self.inner.frame_components(p)?;
        let m = p.base().len();
        let kappa = 2.0 * PI / self.model().fiber_length();
        let w = self.eps * (kappa * p.t()).cos() * p.radius().powf(2.0 - m as f64);
        let n = p.radial_direction();
        let mut mat = g.into_matrix();
        for i in 0..m {
            mat[(i, m)] += w * n[i];
            mat[(m, i)] += w * n[i];
        }
        Ok(FrameTensor2::from_matrix(mat))
    }
    fn exact_frame_derivative(&self, _p: &FramePoint) -> Option<Result<FrameDerivative>> {
        None
    }
    fn decay_order(&self) -> f64 {
        1.0
    }
}

fn wobbly() -> Vec<Wobbly> {
    vec![
        Wobbly {
            inner: Box::new(schw(4, 1.0, Chart::Isotropic)),
            eps: 0.3,
        },
        Wobbly {
            inner: Box::new(TaubNut::new(TaubNutParams::new(1.0, 1).unwrap()).unwrap()),
            eps: 0.3,
        },
        Wobbly {
            inner: Box::new(schw(5, 1.0, Chart::AreaRadial)),
            eps: 0.3,
        },
    ]
}

#[test]
fn fiber_derivative_term_integrates_to_zero() {
    let q = QuadratureSpec::default();
    let src = DerivativeSource::FiniteDifference(None);
    for fam in wobbly() {
        for r in [10.0, 40.0] {
            let full = boundary_integral(|p| gb_integrand_with(&fam, p, src), fam.model(), r, &q).unwrap();
            let simple = boundary_integral(|p| gb_integrand_simplified(&fam, p, src), fam.model(), r, &q).unwrap();
            assert!((full - simple).abs() < 1e-9 * full.abs(), "{full} {simple}");
        }
    }
}

#[test]
fn expanded_and_simplified_integrands_differ_at_order_r_2_minus_m() {
    let src = DerivativeSource::FiniteDifference(None);
    for fam in wobbly() {
        let m = fam.model().base_dim();
        let radii: Vec<f64> = (0..5).map(|i| 10.0 * 10f64.powf(i as f64 / 4.0)).collect();
        let mut gaps = Vec::new();
        for &r in &radii {
            let mut x = vec![0.0; m];
            x[1] = 0.6 * r;
            x[2] = 0.8 * r;
            let p = FramePoint::new(x, 0.25 * fam.model().fiber_length()).unwrap();
            let d = gb_integrand_with(&fam, &p, src).unwrap() - gb_integrand_simplified(&fam, &p, src).unwrap();
            gaps.push(d.abs());
        }
        let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let ly: Vec<f64> = gaps.iter().map(|d| d.ln()).collect();
        let (slope, _) = linear_fit(&lx, &ly);
        assert!((slope - (2.0 - m as f64)).abs() < 0.05, "m={m} slope {slope}");
    }
}

#[test]
fn connection_corrections_do_not_reach_the_radial_component() {
    // on the Hopf model the expanded and simplified forms agree pointwise
    // for fiber-independent metrics, because ω(∂_r, ·) = 0
    let fam = TaubNut::new(TaubNutParams::new(1.0, 2).unwrap()).unwrap();
    let p = FramePoint::new(vec![3.0, -4.0, 12.0], 1.0).unwrap();
    let a = gb_integrand_radial(&fam, &p).unwrap();
    let b = gb_integrand_simplified(&fam, &p, DerivativeSource::Auto).unwrap();
    assert!((a - b).abs() < 1e-15);
}
