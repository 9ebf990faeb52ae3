//! The six commands.

use alf_core::geometry::{ricci_fd, FrameChart, MetricFamily, RicciOptions};
use alf_core::mass::{chart_invariance_check, mass_dirac, mass_gb, MassReport};
use alf_core::modes::{
    classify_membership, critical_set, green_outer, radial_apply, solve_k_mode, IndicialData, Mode, RadialGrid,
    RadialProfile,
};
use alf_core::zoo::{Chart, FamilySpec};
use serde_json::{json, Value};

use crate::config::{Command, ModeSettings, RunConfig};
use crate::report::{num, Cell, Failure, Report};

type Outcome = Result<Report, Failure>;

pub fn run(cfg: &RunConfig) -> Outcome {
    match cfg.command {
        Command::Mass => mass(cfg),
        Command::Curvature => curvature(cfg),
        Command::Modes => modes(cfg),
        Command::SolveExterior => solve_exterior(&cfg.modes),
        Command::Norms => norms(&cfg.modes),
        Command::Invariance => invariance(cfg),
    }
}

fn family(cfg: &RunConfig) -> &FamilySpec {
    cfg.family.as_ref().expect("validated: command needs a family")
}

fn chart_name(spec: &FamilySpec) -> Value {
    match spec {
        FamilySpec::Schwarzschild { chart, .. } | FamilySpec::ReissnerNordstrom { chart, .. } => match chart {
            Chart::AreaRadial => "area".into(),
            Chart::Isotropic => "isotropic".into(),
        },
        _ => Value::Null,
    }
}

fn header(cfg: &RunConfig, r: &mut Report) {
    let spec = family(cfg);
    r.field("family", spec.name().into());
    r.field("params", json!(cfg.params));
    r.field("chart", chart_name(spec));
    r.note("family", spec.name());
    for (k, v) in &cfg.params {
        r.note_num(k, *v);
    }
}

fn schedule_fields(cfg: &RunConfig, r: &mut Report) {
    let (s, q) = (cfg.schedule, cfg.quadrature);
    r.field("schedule", json!({ "r0": s.r0, "growth": s.growth, "count": s.count }));
    r.field(
        "quadrature",
        json!({ "polar_nodes": q.polar_nodes, "azimuth_nodes": q.azimuth_nodes, "fiber_nodes": q.fiber_nodes }),
    );
}

fn fit_fields(m: &MassReport) -> Value {
    json!({
        "values": m.per_radius.iter().map(|p| num(p.1)).collect::<Vec<_>>(),
        "mass": m.extrapolated,
        "fit_order": m.fit_order,
        "residual": m.residual,
        "method": m.method,
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

fn mass(cfg: &RunConfig) -> Outcome {
    let fam = family(cfg).build()?;
    let gb = mass_gb(&fam, &cfg.schedule, &cfg.quadrature)?;
    let dirac = if fam.model().is_trivial() {
        Some(mass_dirac(&fam, &cfg.schedule, &cfg.quadrature)?)
    } else {
        None
    };

    let mut r = Report::default();
    header(cfg, &mut r);
    schedule_fields(cfg, &mut r);
    r.field("model", to_value(&gb.model));
    r.field("radii", gb.per_radius.iter().map(|p| num(p.0)).collect());
    r.field("values", gb.per_radius.iter().map(|p| num(p.1)).collect());
    r.field("mass", num(gb.extrapolated));
    r.field("fit_order", num(gb.fit_order));
    r.field("residual", num(gb.residual));
    r.field("mass_gb", num(gb.extrapolated));
    r.field("mass_dirac", dirac.as_ref().map_or(Value::Null, |d| num(d.extrapolated)));
    r.field("gauss_bonnet", fit_fields(&gb));
    r.field("dirac", dirac.as_ref().map_or(Value::Null, fit_fields));

    r.note_num("mass_gb", gb.extrapolated);
    r.note_num("fit_order_gb", gb.fit_order);
    match &dirac {
        Some(d) => {
            r.note_num("mass_dirac", d.extrapolated);
            r.note_num("fit_order_dirac", d.fit_order);
            r.columns(&["R", "gauss_bonnet", "dirac"]);
        }
        None => {
            r.note("mass_dirac", "n/a (non-trivial fibration)");
            r.columns(&["R", "gauss_bonnet"]);
        }
    }
    for (i, &(radius, v)) in gb.per_radius.iter().enumerate() {
        let mut row = vec![Cell::from(radius), Cell::from(v)];
        if let Some(d) = &dirac {
            row.push(Cell::from(d.per_radius[i].1));
        }
        r.rows.push(row);
    }
    Ok(r)
}

/// Fixed off-axis unit direction in R^m.
fn direction(m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|i| 1.0 + 0.37 * i as f64).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    raw.into_iter().map(|x| x / norm).collect()
}

fn curvature(cfg: &RunConfig) -> Outcome {
    let fam = family(cfg).build()?;
    let m = fam.model().base_dim();
    let dir = direction(m);
    let t = 0.3 * fam.model().fiber_length();

    let mut r = Report::default();
    header(cfg, &mut r);
    let mut names = vec!["r".to_owned(), "scalar".to_owned()];
    names.extend((1..=m + 1).map(|i| format!("eigenvalue_{i}")));
    r.header = names;
    let mut rows = Vec::new();
    for radius in cfg.schedule.radii() {
        let mut x: Vec<f64> = dir.iter().map(|d| d * radius).collect();
        x.push(t);
        let chart = FrameChart::around(&fam, &x[..m]);
        let rep = ricci_fd(&chart, &x, RicciOptions::default())?;
        rows.push(json!({
            "r": num(radius),
            "scalar": num(rep.scalar),
            "eigenvalues": rep.eigenvalues.iter().map(|&e| num(e)).collect::<Vec<_>>(),
            "step": num(rep.step),
        }));
        let mut row = vec![Cell::from(radius), Cell::from(rep.scalar)];
        row.extend(rep.eigenvalues.iter().map(|&e| Cell::from(e)));
        r.rows.push(row);
    }
    r.field("direction", dir.iter().map(|&d| num(d)).collect());
    r.field("fiber_coordinate", num(t));
    r.field("ladder", Value::Array(rows));
    Ok(r)
}

fn modes(cfg: &RunConfig) -> Outcome {
    let m = cfg.modes.m;
    let table = IndicialData::table(m, cfg.jmax)?;
    let critical = critical_set(m, cfg.jmax)?;

    let mut r = Report::default();
    r.field("m", m.into());
    r.field("jmax", cfg.jmax.into());
    r.field("modes", Value::Array(table.iter().map(to_value).collect()));
    r.field("critical", critical.iter().map(|&d| num(d)).collect());
    r.note("m", m.to_string());
    r.note(
        "critical",
        critical.iter().map(|d| crate::report::round12(*d).to_string()).collect::<Vec<_>>().join(", "),
    );
    r.columns(&["j", "lambda", "delta", "nu_plus", "nu_minus"]);
    for d in &table {
        r.rows.push(vec![
            Cell::from(d.j),
            Cell::from(d.lambda_j),
            Cell::from(d.delta_j),
            Cell::from(d.nu_plus),
            Cell::from(d.nu_minus),
        ]);
    }
    Ok(r)
}

/// Reads `r,value` rows; the radii must be log-uniform.
fn read_source(path: &std::path::Path, mode: Mode) -> Result<RadialProfile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io("source", e))?;
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E')) {
            continue;
        }
        let parsed: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::config("source", format!("line {}: {e}", i + 1)))?;
        if parsed.len() != 2 {
            return Err(Failure::config("source", format!("line {}: expected `r,value`", i + 1)));
        }
        radii.push(parsed[0]);
        values.push(parsed[1]);
    }
    let n = radii.len();
    if n < 2 {
        return Err(Failure::config("source", "needs at least two rows"));
    }
    let grid = RadialGrid::from_radii(radii[0], radii[n - 1], n)?;
    for (i, &r) in radii.iter().enumerate() {
        if ((r.ln() - grid.s(i)) / grid.spacing()).abs() > 1e-6 {
            return Err(Failure::config("source", format!("radius {r} breaks the log-uniform spacing")));
        }
    }
    Ok(RadialProfile::new(grid, values, mode)?)
}

fn profile(s: &ModeSettings, default_exponent: f64) -> Result<(RadialProfile, Value), Failure> {
    let mode = Mode { j: s.j, k: s.k };
    if let Some(path) = &s.source {
        return Ok((read_source(path, mode)?, json!({ "file": path.display().to_string() })));
    }
    let a = s.exponent.unwrap_or(default_exponent);
    let grid = RadialGrid::from_radii(s.r_min, s.r_max, s.grid_points).map_err(|e| match e {
        alf_core::Error::InvalidParameter { reason, .. } => Failure::config("r-min", reason),
        other => other.into(),
    })?;
    let p = RadialProfile::from_fn(grid, mode, |r| r.powf(a))?;
    Ok((p, json!({ "exponent": num(a) })))
}

fn grid_fields(p: &RadialProfile) -> Value {
    let g = p.grid;
    json!({ "r_min": num(g.s_min.exp()), "r_max": num(g.s_max.exp()), "points": g.n_points })
}

fn solve_exterior(s: &ModeSettings) -> Outcome {
    let (f, source) = profile(s, -(s.m as f64 + s.j as f64))?;
    let u = if s.k == 0 {
        green_outer(s.m, s.j, &f)?
    } else {
        solve_k_mode(s.m, s.j, s.k, s.fiber_length, &f)?
    };
    let lu = radial_apply(&u, s.m, s.j, s.k, s.fiber_length)?;
    let scale = f.max_abs().max(f64::MIN_POSITIVE);
    let residual: Vec<f64> = lu.values.iter().zip(&f.values).map(|(a, b)| a - b).collect();
    let worst = residual.iter().fold(0.0f64, |a, b| a.max(b.abs())) / scale;

    let mut r = Report::default();
    r.field("mode", json!({ "m": s.m, "j": s.j, "k": s.k, "fiber_length": num(s.fiber_length) }));
    r.field("solver", (if s.k == 0 { "green-outer" } else { "k-mode" }).into());
    r.field("source", source);
    r.field("grid", grid_fields(&f));
    r.field("relative_residual", num(worst));
    r.field("r", f.grid.r_nodes().into_iter().map(num).collect());
    r.field("f", f.values.iter().map(|&v| num(v)).collect());
    r.field("u", u.values.iter().map(|&v| num(v)).collect());
    r.note("solver", if s.k == 0 { "green-outer" } else { "k-mode" });
    r.note_num("relative_residual", worst);
    r.columns(&["s", "r", "f", "u", "residual"]);
    for i in 0..f.grid.n_points {
        r.rows.push(vec![
            Cell::from(f.grid.s(i)),
            Cell::from(f.grid.r(i)),
            Cell::from(f.values[i]),
            Cell::from(u.values[i]),
            Cell::from(residual[i]),
        ]);
    }
    Ok(r)
}

fn norms(s: &ModeSettings) -> Outcome {
    let delta = s.delta.expect("validated: norms needs delta");
    let (p, source) = profile(s, -(s.m as f64))?;
    let rep = classify_membership(&p, delta, s.m, s.fiber_length)?;

    let mut r = Report::default();
    r.field("mode", json!({ "m": s.m, "j": s.j, "k": s.k, "fiber_length": num(s.fiber_length) }));
    r.field("delta", num(delta));
    r.field("source", source);
    r.field("grid", grid_fields(&p));
    r.field("class", to_value(&rep.class));
    r.field("slope", num(rep.slope));
    r.field(
        "annuli",
        rep.annuli
            .iter()
            .zip(&rep.partial_sums)
            .map(|(&(r0, c), &s)| json!({ "inner_radius": num(r0), "contribution": num(c), "partial_sum": num(s) }))
            .collect(),
    );
    r.note("class", to_value(&rep.class).as_str().unwrap_or_default());
    r.note_num("slope", rep.slope);
    r.columns(&["inner_radius", "contribution", "partial_sum"]);
    for (&(r0, c), &sum) in rep.annuli.iter().zip(&rep.partial_sums) {
        r.rows.push(vec![Cell::from(r0), Cell::from(c), Cell::from(sum)]);
    }
    Ok(r)
}

fn invariance(cfg: &RunConfig) -> Outcome {
    let with_chart = |chart| match family(cfg).clone() {
        FamilySpec::Schwarzschild { params, .. } => FamilySpec::Schwarzschild { params, chart },
        FamilySpec::ReissnerNordstrom { params, .. } => FamilySpec::ReissnerNordstrom { params, chart },
        other => other,
    };
    let area = with_chart(Chart::AreaRadial).build()?;
    let iso = with_chart(Chart::Isotropic).build()?;
    let rep = chart_invariance_check(&area, &iso, &cfg.schedule, &cfg.quadrature)?;

    let mut r = Report::default();
    r.field("family", family(cfg).name().into());
    r.field("params", json!(cfg.params));
    r.note("family", family(cfg).name());
    schedule_fields(cfg, &mut r);
    r.field("radii", rep.first.per_radius.iter().map(|p| num(p.0)).collect());
    r.field("area", fit_fields(&rep.first));
    r.field("isotropic", fit_fields(&rep.second));
    r.field("difference", num(rep.difference));
    r.note_num("mass_area", rep.first.extrapolated);
    r.note_num("mass_isotropic", rep.second.extrapolated);
    r.note_num("difference", rep.difference);
    r.columns(&["R", "area", "isotropic"]);
    for (a, b) in rep.first.per_radius.iter().zip(&rep.second.per_radius) {
        r.rows.push(vec![Cell::from(a.0), Cell::from(a.1), Cell::from(b.1)]);
    }
    Ok(r)
}
