//! Command implementations.

use crate::config::{AxisSpec, Format, RunConfig};
use crate::export::{export_grid, number, render, with_footer, write_text};
use crate::verify::{self, Ctx};
use crate::{Command, Failure, EXIT_FAILED, EXIT_OK};
use std::io::Write;
use wigner_lab::moyal::{average_force, classical_limit_force, default_moyal_stencil, evolution_residual_report, CatalogueModel, TruncationOrder};
use wigner_lab::numerics::{Axis, NamedAxis, SampledField};
use wigner_lab::observables::*;
use wigner_lab::phase_model::{characteristic_curve, magnetic_field, mean_momentum_exact, quantum_potential, scalar_potential, vector_potential};
use wigner_lab::transforms::EvalRoute;
use wigner_lab::{Point, SystemVariant as S, Vector, WignerKind as K};

type Outcome = Result<i32, Failure>;

fn put(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}

fn vector(text: Option<&str>, default: [f64; 3], what: &str) -> Result<Vector, Failure> {
    let Some(text) = text else { return Ok(Vector::new(default[0], default[1], default[2])) };
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("{what}: expected three comma-separated numbers, got '{text}'")))?;
    match parts[..] {
        [a, b, c] if parts.iter().all(|v| v.is_finite()) => Ok(Vector::new(a, b, c)),
        _ => Err(Failure::usage(format!("{what}: expected three finite numbers, got '{text}'"))),
    }
}

fn fmt_vec(v: Vector) -> String {
    format!("{},{},{}", number(v.x), number(v.y), number(v.z))
}

fn axis(cfg: &RunConfig, name: &str) -> Result<Axis<f64>, Failure> {
    let a: AxisSpec = cfg.axis(name);
    Axis::new(a.min, a.max, a.count).map_err(|e| Failure::usage(format!("axis {name}: {e}")))
}

fn route(cfg: &RunConfig) -> EvalRoute {
    if cfg.direct {
        EvalRoute::Direct
    } else {
        EvalRoute::Fast
    }
}

/// Writes a field to the configured output, or to `out` when none is set.
fn emit(cfg: &RunConfig, field: &SampledField<f64>, footer: &[(String, String)], out: &mut dyn Write) -> Result<(), Failure> {
    let mut text = render(field, cfg.format);
    if cfg.format == Format::Csv {
        text = with_footer(text, footer);
    }
    match &cfg.output {
        Some(path) => {
            if cfg.format == Format::Csv {
                write_text(path, &text)?;
            } else {
                export_grid(field, path, cfg.format)?;
            }
            let mut summary = format!("wrote {} samples to {}\n", field.values.len(), path.display());
            for (k, v) in footer {
                summary.push_str(&format!("{k}={v}\n"));
            }
            put(out, &summary)
        }
        None => {
            if cfg.format == Format::Json {
                text.push('\n');
                text = with_footer(text, footer);
            }
            put(out, &text)
        }
    }
}

pub fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Verify { suite, list, common } => verify_cmd(&suite, list, &common, out),
        Command::Energy { mode, common } => energy(&mode, &common.resolve()?, out),
        Command::Marginal { variable, at, common } => marginal(&variable, at.as_deref(), &common.resolve()?, out),
        Command::MomentumDist { dist, common } => momentum_dist(dist.as_deref(), &common.resolve()?, out),
        Command::MeanMomentum { at, common } => mean_momentum(at.as_deref(), &common.resolve()?, out),
        Command::ScanNegativity { plane, fixed, common } => scan(&plane, fixed.as_deref(), &common.resolve()?, out),
        Command::MoyalResidual { at, p, common } => moyal_residual(at.as_deref(), p.as_deref(), &common.resolve()?, out),
        Command::ForceAverage { at, common } => force_average(at.as_deref(), &common.resolve()?, out),
        Command::Characteristics { radius, kk, n, theta0, phi0, t_max, t_count, common } => {
            characteristics(radius, kk, n, theta0, phi0, t_max, t_count, &common.resolve()?, out)
        }
        Command::Grid { field, plane, common } => grid(&field, &plane, &common.resolve()?, out),
    }
}

fn verify_cmd(suite: &str, list: bool, common: &crate::Common, out: &mut dyn Write) -> Outcome {
    if !verify::SUITES.contains(&suite) {
        return Err(Failure::usage(format!("unknown suite '{suite}'; expected one of {}", verify::SUITES.join(", "))));
    }
    let cfg = common.resolve()?;
    if list {
        put(out, &(verify::check_ids(suite).join("\n") + "\n"))?;
        return Ok(EXIT_OK);
    }
    let systems = if cfg.explicit.contains("system") { vec![cfg.system] } else { S::ALL.to_vec() };
    let ctx = Ctx { params: cfg.params(), systems };
    let tags: Vec<&str> = ctx.systems.iter().map(|s| s.tag()).collect();
    put(out, &format!("suite {suite}, systems {}\n", tags.join(" ")))?;
    let mut io_err = None;
    let results = verify::run_suite(suite, &ctx, |r| {
        let line = format!("{:<4} {:<32} {}\n", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail);
        if let Err(e) = put(out, &line) {
            io_err = Some(e);
        }
    });
    if let Some(e) = io_err {
        return Err(e);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    put(out, &format!("{} checks, {} passed, {} failed\n", results.len(), results.len() - failed, failed))?;
    Ok(verify::exit_code(&results))
}

fn energy(mode: &str, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let mode = match mode {
        "combined" => EnergyMode::Combined,
        "split" => EnergyMode::Split,
        other => return Err(Failure::usage(format!("unknown mode '{other}' (expected combined or split)"))),
    };
    let params = cfg.params();
    let rep = mean_energy(cfg.kind, cfg.system, &params, mode, &EnergySpec::default())?;
    let expected = params.energy();
    let rel = (rep.total / expected - 1.0).abs();
    let ok = rel < 1e-4;
    put(
        out,
        &format!(
            "system={}\nkind={}\nenergy={}\nkinetic_finite={}\npotential_finite={}\nexpected={}\nrel_error={rel:.3e}\nwithin_1e-4={ok}\n",
            cfg.system,
            cfg.kind,
            number(rep.total),
            number(rep.kinetic_finite),
            number(rep.potential_finite),
            number(expected)
        ),
    )?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn marginal(variable: &str, at: Option<&str>, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let params = cfg.params();
    match variable {
        "position" => {
            let r = vector(at, [1.0, 0.0, 0.5], "--at")?;
            let v = position_marginal(cfg.kind, cfg.system, r, &params)?;
            let exact = position_density_exact(r, &params);
            put(out, &format!("r={}\nmarginal={}\ndensity={}\nrel_error={:.3e}\n", fmt_vec(r), number(v), number(exact), (v / exact - 1.0).abs()))?;
        }
        "momentum" => {
            let p = vector(at, [0.0; 3], "--at")?;
            let v = momentum_marginal(cfg.kind, cfg.system, p, &params, &MarginalSpec::default())?;
            put(out, &format!("p={}\nmarginal={}\n", fmt_vec(p), number(v)))?;
        }
        other => return Err(Failure::usage(format!("unknown variable '{other}' (expected position or momentum)"))),
    }
    Ok(EXIT_OK)
}

fn default_distribution(cfg: &RunConfig) -> DistributionKind {
    match (cfg.kind, cfg.system) {
        (K::GaugeFw, S::EmA1) => DistributionKind::FwA1,
        (K::GaugeFw, S::EmA2) => DistributionKind::FwA2,
        (K::GaugeFw, S::ESystem) => DistributionKind::Numeric,
        _ => DistributionKind::Gaussian,
    }
}

fn momentum_dist(dist: Option<&str>, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let dist = match dist {
        Some(d) => d.parse()?,
        None => default_distribution(cfg),
    };
    let params = cfg.params();
    let prho = cfg.axis("prho").coords();
    let pz = cfg.axis("pz").coords();
    let mut values = Vec::with_capacity(prho.len() * pz.len());
    for &a in &prho {
        for &b in &pz {
            values.push(momentum_distribution(dist, cfg.system, Vector::new(a, 0.0, b), &params)?);
        }
    }
    let field = SampledField::new(vec![NamedAxis { name: "p_rho".into(), values: prho }, NamedAxis { name: "p_z".into(), values: pz }], values)?;
    let footer = vec![
        ("system".to_string(), cfg.system.to_string()),
        ("distribution".to_string(), format!("{dist:?}")),
        ("eta".to_string(), number(cfg.eta)),
    ];
    emit(cfg, &field, &footer, out)?;
    Ok(EXIT_OK)
}

fn mean_momentum(at: Option<&str>, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let params = cfg.params();
    let r = vector(at, [1.0, 0.0, 0.0], "--at")?;
    let own = mean_momentum_field(cfg.kind, cfg.system, r, &params)?;
    let kinetic = kinetic_mean_momentum(cfg.kind, cfg.system, r, &params)?;
    let exact = mean_momentum_exact(cfg.system, r, &params)?;
    put(
        out,
        &format!(
            "r={}\nmean={}\nkinetic_mean={}\nexact_kinetic_flow={}\nerror={:.3e}\n",
            fmt_vec(r),
            fmt_vec(own),
            fmt_vec(kinetic),
            fmt_vec(exact),
            (kinetic - exact).norm()
        ),
    )?;
    Ok(EXIT_OK)
}

fn scan(plane: &str, fixed: Option<&str>, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let params = cfg.params();
    let region = match plane {
        "rho-pphi" => {
            let f = vector(fixed, [0.0; 3], "--fixed")?;
            ScanRegion::RhoPphi { rho: axis(cfg, "rho")?, p_phi: axis(cfg, "pphi")?, z: f.x, p_rho: f.y, p_z: f.z }
        }
        "box" => {
            let names = ["x", "y", "z", "px", "py", "pz"];
            let specs = names.map(|n| cfg.axis(n));
            ScanRegion::Box { lower: specs.map(|a| a.min), upper: specs.map(|a| a.max), counts: specs.map(|a| a.count) }
        }
        other => return Err(Failure::usage(format!("unknown plane '{other}' (expected rho-pphi or box)"))),
    };
    let (rep, field) = negativity_scan(cfg.kind, cfg.system, &region, &params, route(cfg), &cfg.transform_spec())?;
    let a = rep.argmin.to_array();
    let footer = vec![
        ("system".to_string(), cfg.system.to_string()),
        ("kind".to_string(), cfg.kind.to_string()),
        ("route".to_string(), if cfg.direct { "direct" } else { "fast" }.to_string()),
        ("min_value".to_string(), number(rep.min_value)),
        ("argmin".to_string(), a.iter().map(|v| number(*v)).collect::<Vec<_>>().join(" ")),
        ("peak".to_string(), number(rep.peak)),
        ("min_over_peak".to_string(), number(rep.min_value / rep.peak)),
        ("negative_fraction".to_string(), number(rep.negative_fraction)),
        ("tolerance".to_string(), number(rep.tolerance)),
        ("n_samples".to_string(), rep.n_samples.to_string()),
    ];
    emit(cfg, &field, &footer, out)?;
    Ok(EXIT_OK)
}

fn order(cfg: &RunConfig) -> Result<TruncationOrder, Failure> {
    Ok(TruncationOrder::new(cfg.k)?)
}

fn moyal_residual(at: Option<&str>, p: Option<&str>, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let params = cfg.params();
    let r = vector(at, [1.0, 0.3, 0.2], "--at")?;
    let p = vector(p, [0.2, -0.1, 0.3], "--p")?;
    let model = CatalogueModel::new(cfg.system, params);
    let rep = evolution_residual_report(&model, order(cfg)?, Point::new(r, p), &default_moyal_stencil(&params))?;
    let mut text = format!("system={}\nK={}\nr={}\nP={}\n", cfg.system, cfg.k, fmt_vec(r), fmt_vec(p));
    for (l, c) in rep.contributions.iter().enumerate() {
        text.push_str(&format!("order_{l}={}\n", number(*c)));
    }
    text.push_str(&format!("residual={}\nconverged={}\ntail_estimate={}\n", number(rep.total.abs()), rep.converged, number(rep.tail_estimate)));
    put(out, &text)?;
    Ok(EXIT_OK)
}

fn force_average(at: Option<&str>, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let params = cfg.params();
    let r = vector(at, [1.0, 0.0, 0.0], "--at")?;
    let model = CatalogueModel::new(cfg.system, params);
    let stencil = default_moyal_stencil(&params);
    let f = average_force(&model, order(cfg)?, r, &stencil)?;
    let f0 = average_force(&model, TruncationOrder::new(0)?, r, &stencil)?;
    let classical = classical_limit_force(&model, Point::new(r, Vector::zero()))?;
    put(
        out,
        &format!(
            "system={}\nK={}\nr={}\naverage_force={}\naverage_force_K0={}\nquantum_shift={:.3e}\nclassical_force_at_P0={}\n",
            cfg.system,
            cfg.k,
            fmt_vec(r),
            fmt_vec(f),
            fmt_vec(f0),
            (f - f0).norm(),
            fmt_vec(classical)
        ),
    )?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn characteristics(radius: f64, kk: i32, n: i32, theta0: f64, phi0: f64, t_max: f64, t_count: usize, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    if t_count < 2 || !(t_max.is_finite() && t_max > 0.0) {
        return Err(Failure::usage("need --t-count >= 2 and a positive --t-max"));
    }
    let ts: Vec<f64> = (0..t_count).map(|i| t_max * i as f64 / (t_count - 1) as f64).collect();
    let curve = characteristic_curve(radius, kk, n, theta0, phi0, &ts, &cfg.params())?;
    let mut text = String::from("t,phi,theta\n");
    for (t, phi, theta) in &curve.points {
        text.push_str(&format!("{},{},{}\n", number(*t), number(*phi), number(*theta)));
    }
    text.push_str(&format!("# truncated={}\n", curve.truncated));
    match &cfg.output {
        Some(path) => {
            write_text(path, &text)?;
            put(out, &format!("wrote {} points to {}\n", curve.points.len(), path.display()))?;
        }
        None => put(out, &text)?,
    }
    Ok(EXIT_OK)
}

fn grid(field: &str, plane: &str, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let params = cfg.params();
    let (a_name, b_name, place): (&str, &str, fn(f64, f64) -> Vector) = match plane {
        "z0" => ("x", "y", |a, b| Vector::new(a, b, 0.0)),
        "y0" => ("x", "z", |a, b| Vector::new(a, 0.0, b)),
        "x0" => ("y", "z", |a, b| Vector::new(0.0, a, b)),
        other => return Err(Failure::usage(format!("unknown plane '{other}' (expected z0, y0 or x0)"))),
    };
    let sys = cfg.system;
    let eval: Box<dyn Fn(Vector) -> wigner_lab::Result<f64>> = match field {
        "U" => Box::new(move |r| scalar_potential(sys, r, &params)),
        "U1" => Box::new(move |r| scalar_potential(S::ESystem, r, &params)),
        "U2" => Box::new(move |r| scalar_potential(S::EmA2, r, &params)),
        "Q" => Box::new(move |r| Ok(quantum_potential(r, &params))),
        "density" => Box::new(move |r| Ok(position_density_exact(r, &params))),
        "qA_x" => Box::new(move |r| vector_potential(sys, r, &params).map(|a| a.x)),
        "qA_y" => Box::new(move |r| vector_potential(sys, r, &params).map(|a| a.y)),
        "qA_z" => Box::new(move |r| vector_potential(sys, r, &params).map(|a| a.z)),
        "B_z" => Box::new(move |r| magnetic_field(sys, r, &params).map(|b| b.z)),
        other => {
            return Err(Failure::usage(format!("unknown field '{other}' (expected U, U1, U2, Q, density, qA_x, qA_y, qA_z or B_z)")))
        }
    };
    let a = cfg.axis(a_name).coords();
    let b = cfg.axis(b_name).coords();
    let mut values = Vec::with_capacity(a.len() * b.len());
    for &u in &a {
        for &v in &b {
            values.push(eval(place(u, v))?);
        }
    }
    let field_out = SampledField::new(vec![NamedAxis { name: a_name.into(), values: a }, NamedAxis { name: b_name.into(), values: b }], values)?;
    let footer = vec![("field".to_string(), field.to_string()), ("plane".to_string(), plane.to_string()), ("system".to_string(), sys.to_string())];
    emit(cfg, &field_out, &footer, out)?;
    Ok(EXIT_OK)
}
