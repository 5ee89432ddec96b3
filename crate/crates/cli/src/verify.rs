//! Named invariant checks behind `verify`.

use num_complex::Complex;
use std::f64::consts::PI;
use wigner_lab::moyal::{
    average_force, classical_limit_force, default_moyal_stencil, evolution_residual, momentum_field_average,
    potential_series_term, vector_series_term, vlasov_moyal_field, CatalogueModel, MoyalModel, PolynomialTest,
    TruncationOrder,
};
use wigner_lab::numerics::quadrature::{gauss_hermite_f64, gauss_legendre_f64};
use wigner_lab::numerics::{fourier_momentum, integrate, inverse_fourier_momentum, mixed_derivative, Axis, DiffStencil, Grid3, QuadratureSpec, Rule1D};
use wigner_lab::observables::*;
use wigner_lab::phase_model::{
    default_schrodinger_stencil, hamilton_jacobi_residual, mean_momentum_exact, psi, quantum_potential, schrodinger_residual,
};
use wigner_lab::transforms::{
    catalogue_transform, gauge_transform, wigner_bound, wigner_fw, wigner_w_e_semianalytic, wigner_w_em_closed, CatalogueState,
    CataloguePotential, CubicGauge, EvalRoute,
};
use wigner_lab::{Params, Point, SystemVariant as S, TransformSpec, Vector, WignerKind as K};

pub const SUITES: [&str; 6] = ["all", "numerics", "phase-model", "transforms", "observables", "moyal"];

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn(&Ctx) -> anyhow::Result<(bool, String)>;

/// Inputs shared by the checks.
pub struct Ctx {
    pub params: Params,
    pub systems: Vec<S>,
}

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("numerics", "NUM-HERMITE-EXACT", hermite_exact),
    ("numerics", "NUM-FOURIER-ROUNDTRIP", fourier_roundtrip),
    ("numerics", "NUM-RICHARDSON-GAIN", richardson_gain),
    ("phase-model", "PM-NORMALISATION", normalisation),
    ("phase-model", "PM-QUANTUM-POTENTIAL-SHARED", quantum_potential_shared),
    ("phase-model", "PM-ETA-BALANCE", eta_balance),
    ("phase-model", "PM-GAUGE-RELATION", gauge_relation),
    ("phase-model", "PM-SCHRODINGER-RESIDUAL", schrodinger),
    ("phase-model", "PM-HAMILTON-JACOBI", hamilton_jacobi),
    ("transforms", "TR-FW-GAUGE-INVARIANCE", fw_gauge_invariance),
    ("transforms", "TR-W-GAUGE-DEPENDENCE", w_gauge_dependence),
    ("transforms", "TR-FW-VORTEX-IDENTITY", fw_vortex_identity),
    ("transforms", "TR-REALITY", reality),
    ("transforms", "TR-HUDSON-W-GAUSSIAN", hudson_w),
    ("transforms", "TR-HUDSON-FW-A1-NEGATIVE", hudson_fw_a1),
    ("transforms", "TR-HUDSON-FW-A3-POSITIVE", hudson_fw_a3),
    ("observables", "OB-MARGINAL-W", marginal_w),
    ("observables", "OB-MARGINAL-FW-POSITION", marginal_fw),
    ("observables", "OB-MARGINAL-FW-MOMENTUM-GAP", momentum_gap),
    ("observables", "OB-DISTRIBUTION-NORMALISATION", distribution_norm),
    ("observables", "OB-MEAN-MOMENTUM-FLOW", mean_flow),
    ("observables", "OB-ENERGY-KIND-INDEPENDENT", energy),
    ("observables", "OB-QUANTUM-PRESSURE", pressure),
    ("moyal", "MO-SERIES-TERMINATION", termination),
    ("moyal", "MO-EVOLUTION-RESIDUAL", residual),
    ("moyal", "MO-AVERAGE-FORCE-TRUNCATION", force_truncation),
    ("moyal", "MO-MOMENTUM-AVERAGE", momentum_average),
    ("moyal", "MO-CLASSICAL-LIMIT", classical_limit),
];

/// Check IDs belonging to `suite`.
pub fn check_ids(suite: &str) -> Vec<&'static str> {
    CHECKS.iter().filter(|c| suite == "all" || c.0 == suite).map(|c| c.1).collect()
}

pub fn run_suite(suite: &str, ctx: &Ctx, mut report: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for &(group, id, check) in CHECKS {
        if suite != "all" && group != suite {
            continue;
        }
        let (passed, detail) = match check(ctx) {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let r = CheckResult { id, passed, detail };
        report(&r);
        out.push(r);
    }
    out
}

/// 0 when every check passed, 1 otherwise.
pub fn exit_code(results: &[CheckResult]) -> i32 {
    if results.iter().all(|r| r.passed) {
        crate::EXIT_OK
    } else {
        crate::EXIT_FAILED
    }
}

fn cyl(rho: f64, phi: f64, z: f64) -> Vector {
    Vector::from_cylindrical(rho, phi, z)
}

/// Deterministic off-axis sample points.
fn sample_points(n: usize) -> Vec<Vector> {
    (0..n)
        .map(|k| {
            let t = k as f64;
            cyl(0.35 + 1.8 * (0.5 + 0.5 * (1.3 * t + 0.2).sin()), 2.4 * t - 1.0, 1.2 * (0.7 * t).cos())
        })
        .collect()
}

fn sample_momenta(n: usize) -> Vec<Vector> {
    (0..n).map(|k| {
        let t = k as f64;
        Vector::new(0.9 * (1.1 * t).sin(), 0.8 * (0.6 * t + 1.0).cos(), 0.7 * (1.7 * t + 0.4).sin())
    }).collect()
}

fn order(k: usize) -> TruncationOrder {
    TruncationOrder::new(k).expect("k within range")
}

fn hermite_exact(_: &Ctx) -> anyhow::Result<(bool, String)> {
    let spec = QuadratureSpec::gauss_hermite(8);
    let mut worst = 0.0f64;
    for k in 0..8i32 {
        let v = integrate(|r: Vector| r.x.powi(2 * k) * (-r.norm_sqr() / 2.0).exp(), &spec)?;
        let dfact: f64 = (1..=2 * k).filter(|i| i % 2 == 1).map(f64::from).product();
        let exact = (2.0 * PI).powf(1.5) * dfact;
        worst = worst.max((v / exact - 1.0).abs());
    }
    Ok((worst < 1e-12, format!("degree <= 14 at order 8, max rel error {worst:.1e}")))
}

fn fourier_roundtrip(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let a = Axis::new(-8.0, 8.0, 32)?;
    let grid = Grid3::from_fn([a, a, a], |x: [f64; 3]| {
        let env = (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 3.0).exp();
        Complex::from_polar(env * (1.0 + 0.3 * x[0]), 0.7 * x[1] - 0.2 * x[2])
    });
    let tilde = fourier_momentum(&grid, &ctx.params, None)?;
    let back = inverse_fourier_momentum(&tilde, grid.axes, &ctx.params)?;
    let err = back.values.iter().zip(&grid.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok((err < 1e-10, format!("32^3 grid, max round-trip error {err:.1e}")))
}

fn richardson_gain(_: &Ctx) -> anyhow::Result<(bool, String)> {
    let f = |v: &[f64]| (1.3 * v[0]).sin() * (0.7 * v[1]).exp();
    let exact = 1.3 * (1.3f64 * 0.2).cos() * 0.7 * (0.7f64 * 0.1).exp();
    let err = |levels| -> anyhow::Result<f64> {
        let st = DiffStencil::uniform(2, 0.2, levels)?;
        Ok((mixed_derivative(&f, &[1, 1], &st, &[0.2, 0.1])? - exact).abs())
    };
    let e = [err(0)?, err(1)?, err(2)?];
    Ok((e[1] * 4.0 <= e[0] && e[2] * 4.0 <= e[1], format!("errors per level {:.1e} {:.1e} {:.1e}", e[0], e[1], e[2])))
}

fn normalisation(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = &ctx.params;
    let s = pr.sigma_r;
    let rho = Rule1D::gauss_legendre(60, 1e-9 * s, 12.0 * s);
    let z = Rule1D::gauss_hermite(24, 0.0, s);
    let phi = Rule1D::trapezoid(16, -PI, PI);
    let mut worst = 0.0f64;
    for &sys in &ctx.systems {
        let mut total = 0.0;
        for (&r, &wr) in rho.nodes.iter().zip(&rho.weights) {
            for (&zz, &wz) in z.nodes.iter().zip(&z.weights) {
                for (&f, &wf) in phi.nodes.iter().zip(&phi.weights) {
                    total += wr * wz * wf * r * psi(sys, cyl(r, f, zz), 0.0, pr)?.norm_sqr();
                }
            }
        }
        worst = worst.max((total - 1.0).abs());
    }
    let cart = integrate(|r: Vector| psi(S::EmA1, r, 0.0, pr).map(|v| v.norm_sqr()).unwrap_or(f64::NAN), &QuadratureSpec::gauss_hermite_scaled(24, [0.0; 3], [s; 3]))?;
    worst = worst.max((cart - 1.0).abs());
    Ok((worst < 1e-8, format!("max |norm - 1| {worst:.1e}")))
}

fn quantum_potential_shared(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    // Bohm's Q from each variant's |Ψ| against the shared closed form.
    let pr = &ctx.params;
    let h = 1e-3 * pr.sigma_r;
    let mut worst = 0.0f64;
    for r in sample_points(100) {
        let q = quantum_potential(r, pr);
        for &sys in &S::ALL {
            let a = |x: Vector| psi(sys, x, 0.0, pr).map(|v| v.norm()).unwrap_or(f64::NAN);
            let mut lap = 0.0;
            for i in 0..3 {
                let mut e = Vector::zero();
                e[i] = h;
                lap += (a(r + e) - 2.0 * a(r) + a(r - e)) / (h * h);
            }
            let bohm = -pr.hbar * pr.hbar / (2.0 * pr.mass) * lap / a(r);
            worst = worst.max((bohm - q).abs());
        }
    }
    Ok((worst < 1e-5, format!("100 points x 4 variants, max |Q_bohm - Q| {worst:.1e}")))
}

fn eta_balance(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let st = default_schrodinger_stencil(&ctx.params);
    let mut worst = 0.0f64;
    for eta in [0.0, 0.5, 1.0, 2.0] {
        let pr = ctx.params.with_eta(eta);
        for r in sample_points(5) {
            worst = worst.max(schrodinger_residual(S::EmA2, r, 0.0, &pr, &st)?);
        }
    }
    Ok((worst < 1e-6, format!("EM_A2 at eta 0, 0.5, 1, 2: max residual {worst:.1e}")))
}

fn gauge_relation(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for r in sample_points(20) {
        let em = psi(S::EmA1, r, 0.4, &ctx.params)?;
        let e = psi(S::ESystem, r, 0.4, &ctx.params)?;
        worst = worst.max((em - e * Complex::from_polar(1.0, -r.phi())).norm());
    }
    Ok((worst < 1e-12, format!("max |Psi_EM - Psi_E e^(-i phi)| {worst:.1e}")))
}

fn schrodinger(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let st = default_schrodinger_stencil(&ctx.params);
    let mut worst = 0.0f64;
    for &sys in &ctx.systems {
        for r in sample_points(20) {
            worst = worst.max(schrodinger_residual(sys, r, 0.3, &ctx.params, &st)?);
        }
    }
    Ok((worst < 1e-6, format!("{} system(s) x 20 points, max residual {worst:.1e}", ctx.systems.len())))
}

fn hamilton_jacobi(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &sys in &ctx.systems {
        for r in sample_points(20) {
            worst = worst.max(hamilton_jacobi_residual(sys, r, &ctx.params)?);
        }
    }
    Ok((worst < 1e-10, format!("max residual {worst:.1e}")))
}

fn fw_gauge_invariance(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let state = CatalogueState::new(S::EmA2, pr);
    let base = CataloguePotential::new(S::EmA2, pr);
    let coeffs: Vec<f64> = (0..20).map(|k| 0.15 * (k as f64 * 1.7).sin()).collect();
    let chi = CubicGauge::from_coefficients(&coeffs);
    let (psi2, a2) = gauge_transform(&state, Some(&base), &chi, &pr);
    let spec = TransformSpec::default();
    let mut worst = 0.0f64;
    for (r, p) in sample_points(4).into_iter().zip(sample_momenta(4)) {
        let pt = Point::new(r * 0.6, p * 0.6);
        let before = wigner_fw(&state, &base, pt, 0.0, &pr, &spec)?.value;
        let after = wigner_fw(&psi2, &a2, pt, 0.0, &pr, &spec)?.value;
        worst = worst.max((before - after).abs() / wigner_bound(&pr));
    }
    Ok((worst < 1e-6, format!("cubic gauge on EM_A2, max change/bound {worst:.1e}")))
}

fn w_gauge_dependence(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let spec = TransformSpec::default();
    let (mut diff, mut peak) = (0.0f64, 0.0f64);
    for rho in [0.5, 1.0, 1.5] {
        for pphi in [-1.0, 0.0, 1.0] {
            let pt = Point::new(cyl(rho, 0.0, 0.0), Vector::new(0.0, pphi, 0.0));
            let em = wigner_w_em_closed(pt, &pr);
            let e = wigner_w_e_semianalytic(rho, 0.0, pt.p, &pr, &spec)?.value;
            diff = diff.max((em - e).abs());
            peak = peak.max(em.abs()).max(e.abs());
        }
    }
    Ok((diff > 0.1 * peak, format!("max |W_EM - W_E| / max W {:.3}", diff / peak)))
}

fn fw_vortex_identity(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let direct = TransformSpec::default().with_rel_tol(1e-8);
    let mut worst = 0.0f64;
    for (r, p) in sample_points(3).into_iter().zip(sample_momenta(3)) {
        let pt = Point::new(r, p);
        let d = catalogue_transform(K::GaugeFw, S::EmA1, pt, &pr, EvalRoute::Direct, &direct)?.value;
        let s = catalogue_transform(K::StandardW, S::ESystem, pt, &pr, EvalRoute::Fast, &TransformSpec::default())?.value;
        worst = worst.max((d - s).abs() / wigner_bound(&pr));
    }
    Ok((worst < 1e-6, format!("f_w(EM, A1) vs W(E), max diff/bound {worst:.1e}")))
}

fn reality(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let spec = TransformSpec::default();
    let mut worst = 0.0f64;
    for (r, p) in sample_points(3).into_iter().zip(sample_momenta(3)) {
        let pt = Point::new(r, p);
        for (kind, sys) in [(K::StandardW, S::EmA1), (K::GaugeFw, S::EmA2), (K::GaugeFw, S::EmA3), (K::StandardW, S::ESystem)] {
            let v = catalogue_transform(kind, sys, pt, &pr, EvalRoute::Direct, &spec)?;
            worst = worst.max(v.imag.abs());
        }
    }
    Ok((worst < 1e-8, format!("max imaginary part {worst:.1e}")))
}

fn scan_min(kind: K, sys: S, region: &ScanRegion<f64>, ctx: &Ctx, route: EvalRoute) -> anyhow::Result<f64> {
    let (rep, _) = negativity_scan(kind, sys, region, &ctx.params, route, &TransformSpec::default())?;
    Ok(rep.min_value / rep.peak)
}

fn hudson_w(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let s = ctx.params.sigma_r;
    let region = ScanRegion::Box { lower: [-3.0 * s, -3.0 * s, -s, -2.0 / s, -2.0 / s, -2.0 / s], upper: [3.0 * s, 3.0 * s, 1.0 * s, 2.0 / s, 2.0 / s, 2.0 / s], counts: [3; 6] };
    let m = scan_min(K::StandardW, S::EmA1, &region, ctx, EvalRoute::Direct)?;
    Ok((m >= -1e-8, format!("W of the Gaussian state, min/peak {m:.2e}")))
}

fn hudson_fw_a1(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let s = ctx.params.sigma_r;
    let region = ScanRegion::RhoPphi { rho: Axis::new(0.05 * s, 4.0 * s, 12)?, p_phi: Axis::new(-4.0 / s, 4.0 / s, 13)?, z: 0.0, p_rho: 0.0, p_z: 0.0 };
    let m = scan_min(K::GaugeFw, S::EmA1, &region, ctx, EvalRoute::Fast)?;
    Ok((m < -1e-3, format!("f_w(EM, A1) in the (rho, P_phi) plane, min/peak {m:.3e}")))
}

fn hudson_fw_a3(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let s = ctx.params.sigma_r;
    let region = ScanRegion::Box { lower: [-2.0 * s, -2.0 * s, 0.0, -1.5 / s, -1.5 / s, 0.0], upper: [2.0 * s, 2.0 * s, 0.0, 1.5 / s, 1.5 / s, 0.0], counts: [4, 4, 1, 3, 3, 1] };
    let m = scan_min(K::GaugeFw, S::EmA3, &region, ctx, EvalRoute::Direct)?;
    Ok((m >= -1e-8, format!("f_w(E, A3) direct, min/peak {m:.2e}")))
}

fn density(r: Vector, pr: &Params) -> f64 {
    position_density_exact(r, pr)
}

fn marginal_w(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let mut worst = 0.0f64;
    for &sys in &ctx.systems {
        for r in sample_points(3) {
            worst = worst.max((position_marginal(K::StandardW, sys, r, &pr)? / density(r, &pr) - 1.0).abs());
        }
        // ∫W d³r against |Ψ̃|²: Gaussian for Ψ^(EM), the vortex distribution for Ψ^(E).
        let p = Vector::new(0.6, 0.2, -0.3);
        let reference = if sys.has_vortex() {
            momentum_distribution(DistributionKind::FwA1, S::EmA1, p, &pr)?
        } else {
            momentum_distribution(DistributionKind::Gaussian, sys, p, &pr)?
        };
        let v = momentum_marginal(K::StandardW, sys, p, &pr, &MarginalSpec::default())?;
        worst = worst.max((v / reference - 1.0).abs());
    }
    Ok((worst < 1e-6, format!("position and momentum marginals of W, max rel error {worst:.1e}")))
}

fn marginal_fw(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let mut worst = 0.0f64;
    for &sys in &ctx.systems {
        for r in sample_points(3) {
            worst = worst.max((position_marginal(K::GaugeFw, sys, r, &pr)? / density(r, &pr) - 1.0).abs());
        }
    }
    Ok((worst < 1e-6, format!("integral of f_w over P vs |Psi|^2, max rel error {worst:.1e}")))
}

fn momentum_gap(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let g = momentum_distribution(DistributionKind::Gaussian, S::EmA1, Vector::zero(), &pr)?;
    let f1 = momentum_distribution(DistributionKind::FwA1, S::EmA1, Vector::zero(), &pr)?;
    let pe = pr.with_eta(1.0);
    let f2 = momentum_distribution(DistributionKind::FwA2, S::EmA2, Vector::zero(), &pe)?;
    let ok = (g - f1).abs() > 0.1 * g && (g - f2).abs() > 0.1 * g;
    Ok((ok, format!("at P=0: |Psi~|^2 {g:.4}, F_w(A1) {f1:.4}, F_w(A2, eta=1) {f2:.4}")))
}

fn gl_panels(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre_f64(32);
    let h = (hi - lo) / panels as f64;
    (0..panels)
        .map(|k| {
            let c = lo + h * (k as f64 + 0.5);
            x.iter().zip(&w).map(|(&t, &wt)| 0.5 * h * wt * f(c + 0.5 * h * t)).sum::<f64>()
        })
        .sum()
}

fn distribution_norm(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let scale = pr.hbar / pr.sigma_r;
    let (hx, hw) = gauss_hermite_f64(40);
    let pz_integral = |f: &dyn Fn(f64) -> f64| -> f64 { hx.iter().zip(&hw).map(|(&t, &w)| w * (t * t).exp() * scale * f(scale * t)).sum() };
    // P_ρ = u/(1−u) folds the algebraic tail of the vortex density onto [0, 1).
    let radial = |f: &dyn Fn(f64) -> f64| -> f64 {
        gl_panels(|u| { let k = scale * u / (1.0 - u); scale * k * f(k) / ((1.0 - u) * (1.0 - u)) }, 0.0, 1.0, 64)
    };
    let total = |dist, sys, p: &Params| -> f64 {
        2.0 * PI * radial(&|k| pz_integral(&|pz| momentum_distribution(dist, sys, Vector::new(k, 0.0, pz), p).unwrap_or(f64::NAN)))
    };
    let norms = [
        total(DistributionKind::Gaussian, S::EmA1, &pr),
        total(DistributionKind::FwA1, S::EmA1, &pr),
        total(DistributionKind::FwA2, S::EmA2, &pr),
    ];
    let worst = norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    Ok((worst < 1e-6, format!("Gaussian {:.8}, F_w(A1) {:.8}, F_w(A2) {:.8}", norms[0], norms[1], norms[2])))
}

fn mean_flow(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let mut worst = 0.0f64;
    for &sys in &ctx.systems {
        for r in sample_points(3) {
            let flow = mean_momentum_exact(sys, r, &pr)?;
            let scale = flow.norm().max(pr.hbar / pr.sigma_r);
            for kind in [K::GaugeFw, K::StandardW] {
                worst = worst.max((kinetic_mean_momentum(kind, sys, r, &pr)? - flow).norm() / scale);
            }
        }
    }
    Ok((worst < 1e-5, format!("kinetic mean momentum vs hbar grad(phase) - qA, max rel error {worst:.1e}")))
}

fn energy(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let spec = EnergySpec::default();
    let fw = mean_energy(K::GaugeFw, S::EmA1, &pr, EnergyMode::Combined, &spec)?.total;
    let w = mean_energy(K::StandardW, S::EmA1, &pr, EnergyMode::Combined, &spec)?.total;
    let e = pr.energy();
    let ok = (fw - w).abs() < 1e-4 && (fw / e - 1.0).abs() < 1e-4;
    Ok((ok, format!("EM_A1: f_w {fw:.8}, W {w:.8}, E {e:.8}")))
}

fn pressure(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for r in sample_points(20) {
        let (lhs, rhs) = quantum_pressure_check(r, &ctx.params);
        for a in 0..3 {
            worst = worst.max((lhs[a] - rhs[a]).abs() / lhs.norm().max(1e-3));
        }
    }
    Ok((worst < 1e-10, format!("(1/m) grad Q vs pressure divergence, max rel mismatch {worst:.1e}")))
}

fn gaussian_w(pr: Params) -> impl Fn(&[f64]) -> f64 {
    move |x: &[f64]| wigner_w_em_closed(Point::from_slice(x), &pr)
}

fn termination(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let m = CatalogueModel::new(S::EmA2, pr);
    let st = default_moyal_stencil(&pr);
    let w = gaussian_w(pr);
    let mut worst = 0.0f64;
    for (r, p) in sample_points(5).into_iter().zip(sample_momenta(5)) {
        let at = Point::new(r, p);
        for l in 1..=3 {
            worst = worst.max(potential_series_term(&m, l, &w, at, &st)?.abs());
            worst = worst.max(vector_series_term(&m, l, &w, at, &st)?.norm());
        }
    }
    Ok((worst == 0.0, format!("EM_A2 terms l, k >= 1: max magnitude {worst:e}")))
}

fn residual(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for eta in [0.0, 0.5, 1.0, 2.0] {
        let pr = ctx.params.with_eta(eta);
        let m = CatalogueModel::new(S::EmA2, pr);
        let st = default_moyal_stencil(&pr);
        for (r, p) in sample_points(5).into_iter().zip(sample_momenta(5)) {
            for k in 0..=3 {
                worst = worst.max(evolution_residual(&m, order(k), Point::new(r, p), &st)?);
            }
        }
    }
    Ok((worst < 1e-7, format!("EM_A2, 4 eta x 5 points x K 0..3: max residual {worst:.1e}")))
}

fn force_truncation(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let st = default_moyal_stencil(&pr);
    let em = CatalogueModel::new(S::EmA2, pr);
    let quartic = PolynomialTest::quartic(pr, 0.8 * pr.sigma_r);
    let models: [&dyn MoyalModel<f64>; 2] = [&em, &quartic];
    let mut worst = 0.0f64;
    for m in models {
        for r in [cyl(1.0, 0.0, 0.0), cyl(0.7, 1.1, -0.4)] {
            let f0 = average_force(m, order(0), r, &st)?;
            let f3 = average_force(m, order(3), r, &st)?;
            worst = worst.max((f3 - f0).norm());
        }
    }
    let lorentz = average_force(&em, order(3), cyl(1.0, 0.0, 0.0), &st)?;
    Ok((worst < 1e-6, format!("max |F(K=3) - F(K=0)| {worst:.1e}; EM_A2 at rho=1: ({:.6}, {:.6}, {:.6})", lorentz.x, lorentz.y, lorentz.z)))
}

fn momentum_average(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let st = default_moyal_stencil(&pr);
    let m = CatalogueModel::new(S::EmA2, pr);
    let mut worst = 0.0f64;
    for r in sample_points(3) {
        let (field, plain) = momentum_field_average(&m, order(3), r, &st)?;
        worst = worst.max((field - plain).norm() / plain.norm().max(1e-3));
    }
    Ok((worst < 1e-6, format!("EM_A2 momentum-averaged field vs f <P>, max rel error {worst:.1e}")))
}

fn classical_limit(ctx: &Ctx) -> anyhow::Result<(bool, String)> {
    let pr = ctx.params;
    let st = default_moyal_stencil(&pr);
    let em = CatalogueModel::new(S::EmA2, pr);
    let quartic = PolynomialTest::quartic(pr, 0.8 * pr.sigma_r);
    let models: [&dyn MoyalModel<f64>; 2] = [&em, &quartic];
    let mut worst = 0.0f64;
    for m in models {
        for (r, p) in sample_points(3).into_iter().zip(sample_momenta(3)) {
            let at = Point::new(r * 0.5, p);
            let c = classical_limit_force(m, at)?;
            let f = vlasov_moyal_field(m, order(0), at, &st)?.total;
            worst = worst.max((c - f).norm());
        }
    }
    Ok((worst < 1e-10, format!("classical force vs K=0 field, max difference {worst:.1e}")))
}
