use proptest::prelude::*;
use std::f64::consts::PI;
use wigner_lab::numerics::grid::Axis;
use wigner_lab::numerics::quadrature::{gauss_hermite_f64, gauss_legendre_f64};
use wigner_lab::observables::*;
use wigner_lab::phase_model::{mean_momentum_exact, psi, vector_potential};
use wigner_lab::transforms::EvalRoute;
use wigner_lab::{Error, Params, SystemVariant as S, TransformSpec, Vector, WignerKind as K};

fn params() -> Params {
    Params::default()
}

fn density_oracle(r: Vector) -> f64 {
    (2.0 * PI).powf(-1.5) * (-r.norm_sqr() / 2.0).exp()
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

fn bessel_j1(x: f64) -> f64 {
    gl_panels(|t| (t - x * t.sin()).cos(), 0.0, PI, 4) / PI
}

/// |Ψ̃^(E)(P)|² from the Hankel transform of the transverse Gaussian (σ = ħ = 1).
fn vortex_momentum_density(p: Vector) -> f64 {
    let k = p.rho();
    let hankel = gl_panels(|rho| rho * (-rho * rho / 4.0).exp() * bessel_j1(k * rho), 0.0, 16.0, 16);
    (2.0 * PI).powf(-4.5) * 4.0 * PI * (-2.0 * p.z * p.z).exp() * 4.0 * PI * PI * hankel * hankel
}

#[test]
fn position_marginals_reproduce_the_density() {
    let pr = params();
    let r = Vector::from_cylindrical(0.01, 0.4, 0.2);
    let v = position_marginal(K::GaugeFw, S::EmA1, r, &pr).unwrap();
    assert!((v / density_oracle(r) - 1.0).abs() < 1e-6);
    for sys in S::ALL {
        for r in [Vector::new(0.6, -0.3, 0.4), Vector::new(-1.5, 0.9, -0.2)] {
            for kind in [K::StandardW, K::GaugeFw] {
                let v = position_marginal(kind, sys, r, &pr).unwrap();
                assert!((v / density_oracle(r) - 1.0).abs() < 1e-6, "{kind} {sys}");
            }
        }
    }
}

#[test]
fn marginal_refuses_the_axis_for_vortex_forms() {
    let pr = params();
    assert!(matches!(position_marginal(K::GaugeFw, S::EmA1, Vector::new(0.0, 0.0, 0.3), &pr), Err(Error::AxisSingular { .. })));
}

#[test]
fn distribution_reference_values() {
    let pr = params();
    let g = momentum_distribution(DistributionKind::Gaussian, S::EmA1, Vector::zero(), &pr).unwrap();
    assert!((g - (2.0 * PI).powf(1.5) / PI.powi(3)).abs() < 1e-14);
    assert!((g - 0.5080).abs() < 1e-4);
    for pz in [0.0, 0.7, -1.3] {
        assert_eq!(momentum_distribution(DistributionKind::FwA1, S::EmA1, Vector::new(0.0, 0.0, pz), &pr).unwrap(), 0.0);
    }
    let a2 = momentum_distribution(DistributionKind::FwA2, S::EmA2, Vector::zero(), &pr.with_eta(0.0)).unwrap();
    assert!((a2 - g).abs() < 1e-14);
}

#[test]
fn incompatible_distribution_pairs_are_rejected() {
    let pr = params();
    let p = Vector::new(0.1, 0.2, 0.3);
    assert!(matches!(momentum_distribution(DistributionKind::FwA1, S::EmA2, p, &pr), Err(Error::Unsupported(_))));
    assert!(matches!(momentum_distribution(DistributionKind::FwA2, S::EmA1, p, &pr), Err(Error::Unsupported(_))));
    assert!("fw-a3".parse::<DistributionKind>().is_err());
}

#[test]
fn fw_a1_equals_vortex_momentum_density() {
    let pr = params();
    for p in [Vector::new(0.3, 0.1, 0.0), Vector::new(-0.8, 0.5, 0.4), Vector::new(1.4, -0.2, -0.9)] {
        let closed = momentum_distribution(DistributionKind::FwA1, S::EmA1, p, &pr).unwrap();
        let oracle = vortex_momentum_density(p);
        assert!((closed - oracle).abs() < 1e-10 * oracle.max(1e-3), "{p:?}: {closed} vs {oracle}");
    }
}

#[test]
fn closed_distributions_are_normalised() {
    let pr = params();
    let (hx, hw) = gauss_hermite_f64(40);
    // ∫ dP_z by Gauss–Hermite with the weight folded back.
    let pz_integral = |f: &dyn Fn(f64) -> f64| -> f64 { hx.iter().zip(&hw).map(|(&t, &w)| w * (t * t).exp() * f(t)).sum() };
    // P_ρ = u/(1−u) maps the algebraic 1/P⁴ tail of the vortex density onto [0, 1).
    let radial = |f: &dyn Fn(f64) -> f64| -> f64 {
        gl_panels(|u| { let k = u / (1.0 - u); k * f(k) / ((1.0 - u) * (1.0 - u)) }, 0.0, 1.0, 64)
    };
    let a1 = 2.0 * PI * radial(&|k| pz_integral(&|pz| momentum_distribution(DistributionKind::FwA1, S::EmA1, Vector::new(k, 0.0, pz), &pr).unwrap()));
    assert!((a1 - 1.0).abs() < 1e-6, "{a1}");
    for eta in [0.0, 1.0, 2.0] {
        let pe = pr.with_eta(eta);
        let a2 = 2.0
            * PI
            * gl_panels(
                |prho| prho * pz_integral(&|pz| momentum_distribution(DistributionKind::FwA2, S::EmA2, Vector::new(prho, 0.0, pz), &pe).unwrap()),
                0.0,
                12.0,
                24,
            );
        assert!((a2 - 1.0).abs() < 1e-6, "eta {eta}: {a2}");
    }
}

#[test]
fn fw_a2_matches_numeric_r_integral() {
    let pr = params();
    let p = Vector::new(0.7, 0.0, 0.3);
    let closed = momentum_distribution(DistributionKind::FwA2, S::EmA2, p, &pr).unwrap();
    let numeric = momentum_distribution(DistributionKind::Numeric, S::EmA2, p, &pr).unwrap();
    assert!((closed - numeric).abs() < 1e-10, "{closed} vs {numeric}");
}

#[test]
fn fw_a1_momentum_marginal_differs_from_gaussian_state() {
    let pr = params();
    let f1 = momentum_distribution(DistributionKind::FwA1, S::EmA1, Vector::zero(), &pr).unwrap();
    let g = momentum_distribution(DistributionKind::Gaussian, S::EmA1, Vector::zero(), &pr).unwrap();
    assert!(f1 == 0.0 && g > 0.5);
    let w = momentum_marginal(K::StandardW, S::EmA1, Vector::new(0.3, -0.2, 0.5), &pr, &MarginalSpec::default()).unwrap();
    let exact = momentum_distribution(DistributionKind::Gaussian, S::EmA1, Vector::new(0.3, -0.2, 0.5), &pr).unwrap();
    assert!((w / exact - 1.0).abs() < 1e-10);
}

#[test]
fn mean_momentum_contracts() {
    let pr = params();
    let r = Vector::from_cylindrical(2.0, 0.8, -0.3);
    let fw = mean_momentum_field(K::GaugeFw, S::EmA1, r, &pr).unwrap();
    assert!((fw - r.e_phi() * 0.5).norm() < 1e-6, "{fw:?}");
    let w = mean_momentum_field(K::StandardW, S::EmA1, r, &pr).unwrap();
    assert!(w.norm() < 1e-8);
    let we = mean_momentum_field(K::StandardW, S::ESystem, r, &pr).unwrap();
    assert!((we - r.e_phi() * 0.5).norm() < 1e-6, "{we:?}");
    // Canonical mean minus qA gives the kinetic flow, here −qA₁.
    let kin = kinetic_mean_momentum(K::StandardW, S::EmA1, r, &pr).unwrap();
    let qa = vector_potential(S::EmA1, r, &pr).unwrap();
    assert!((kin + qa).norm() < 1e-8);
}

#[test]
fn kinetic_flow_is_phase_gradient_minus_potential() {
    let pr = params().with_eta(0.7);
    for sys in S::ALL {
        for r in [Vector::new(0.5, 0.4, -0.2), Vector::new(-1.1, 0.3, 0.9)] {
            let exact = mean_momentum_exact(sys, r, &pr).unwrap();
            for kind in [K::GaugeFw, K::StandardW] {
                let v = kinetic_mean_momentum(kind, sys, r, &pr).unwrap();
                assert!((v - exact).norm() < 1e-6, "{kind} {sys}: {v:?} vs {exact:?}");
            }
        }
    }
}

#[test]
fn mean_energy_is_kind_independent() {
    let pr = params();
    let spec = EnergySpec::default();
    let fw = mean_energy(K::GaugeFw, S::EmA1, &pr, EnergyMode::Combined, &spec).unwrap();
    let w = mean_energy(K::StandardW, S::EmA1, &pr, EnergyMode::Combined, &spec).unwrap();
    assert!((fw.total - 0.75).abs() < 1e-4 * 0.75);
    assert!((w.total - 0.75).abs() < 1e-4 * 0.75);
    assert!((fw.total - w.total).abs() < 1e-4);
    assert!((fw.kinetic_finite - 0.375).abs() < 1e-6, "{fw:?}");
    let harmonic = mean_energy(K::GaugeFw, S::EmA2, &pr, EnergyMode::Combined, &spec).unwrap();
    assert!((harmonic.total - 0.75).abs() < 1e-6);
}

#[test]
fn split_energy_integration_is_refused() {
    let pr = params();
    let err = mean_energy(K::GaugeFw, S::EmA1, &pr, EnergyMode::Split, &EnergySpec::default()).unwrap_err();
    assert!(matches!(err, Error::DivergentSplit { .. }), "{err}");
}

#[test]
fn pressure_reference_values() {
    let pr = params();
    let p0 = pressure_tensor_diag(S::EmA2, Vector::zero(), &pr).unwrap();
    for a in 0..3 {
        assert!((p0.momentum[a] - (2.0 * PI).powf(-1.5) * 0.25).abs() < 1e-12);
    }
    assert!((p0.momentum.x - 0.015874).abs() < 1e-6);
    for k in 0..10 {
        let t = k as f64;
        let r = Vector::from_cylindrical(0.3 + 0.2 * t, 0.9 * t, 0.5 * (t * 0.7).sin());
        let d = pressure_tensor_diag(S::EmA1, r, &pr).unwrap();
        let f = density_oracle(r);
        let qa = vector_potential(S::EmA1, r, &pr).unwrap();
        for a in 0..3 {
            assert!((d.momentum[a] / f - 0.25).abs() < 1e-8, "r {r:?}");
            // Second moments carry the flow: f (ħ²/4σ² + q²A_a²).
            assert!((d.second_moment[a] - f * (0.25 + qa[a] * qa[a])).abs() < 1e-8 * f);
        }
    }
}

#[test]
fn quantum_pressure_reference_values() {
    let pr = params();
    let (lhs, rhs) = quantum_pressure_check(Vector::new(1.0, 0.0, 0.0), &pr);
    assert!((lhs - Vector::new(-0.25, 0.0, 0.0)).norm() < 1e-14);
    assert!((rhs - Vector::new(-0.25, 0.0, 0.0)).norm() < 1e-10);
    let (lhs, rhs) = quantum_pressure_check(Vector::zero(), &pr);
    assert!(lhs.norm() == 0.0 && rhs.norm() < 1e-12);
}

#[test]
fn negativity_scans() {
    let pr = params();
    let spec = TransformSpec::default();
    let plane = ScanRegion::RhoPphi {
        rho: Axis::new(0.05, 4.0, 12).unwrap(),
        p_phi: Axis::new(-4.0, 4.0, 13).unwrap(),
        z: 0.0,
        p_rho: 0.0,
        p_z: 0.0,
    };
    let (rep, field) = negativity_scan(K::GaugeFw, S::EmA1, &plane, &pr, EvalRoute::Fast, &spec).unwrap();
    assert!(rep.min_value < 0.0 && rep.negative_fraction > 0.0);
    assert_eq!(rep.n_samples, 12 * 13);
    assert_eq!(field.values.len(), rep.n_samples);
    let imin = field.values.iter().position(|&v| v == rep.min_value).unwrap();
    let c = field.coords_of(imin);
    assert_eq!((c[0], c[1]), (rep.argmin.r.x, rep.argmin.p.y));
    let counted = field.values.iter().filter(|&&v| v < -rep.tolerance).count();
    assert_eq!(counted as f64 / rep.n_samples as f64, rep.negative_fraction);

    let cube = ScanRegion::Box { lower: [-2.0, -2.0, -2.0, -2.0, -2.0, -2.0], upper: [2.0; 6], counts: [3, 3, 3, 3, 3, 3] };
    let (w, _) = negativity_scan(K::StandardW, S::EmA1, &cube, &pr, EvalRoute::Direct, &spec).unwrap();
    assert!(w.min_value >= -1e-8 * w.peak && w.negative_fraction == 0.0);
    let small = ScanRegion::Box { lower: [0.3, -1.0, 0.0, -1.0, -1.0, 0.0], upper: [1.5, 1.0, 0.0, 1.0, 1.0, 0.0], counts: [2, 2, 1, 2, 2, 1] };
    let (a3, _) = negativity_scan(K::GaugeFw, S::EmA3, &small, &pr, EvalRoute::Direct, &spec).unwrap();
    assert!(a3.min_value >= -1e-8 * a3.peak);
}

#[test]
fn single_precision_marginal() {
    let pr = wigner_lab::Params32::default();
    let r = wigner_lab::Vector32::new(0.4, -0.2, 0.3);
    let v = position_marginal(K::StandardW, S::EmA2, r, &pr).unwrap();
    let exact = psi(S::EmA2, r, 0.0, &pr).unwrap().norm_sqr();
    assert!((v / exact - 1.0).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quantum_pressure_identity(x in -3.0f64..3.0, y in -3.0f64..3.0, z in -3.0f64..3.0) {
        let (lhs, rhs) = quantum_pressure_check(Vector::new(x, y, z), &params());
        for a in 0..3 {
            prop_assert!((lhs[a] - rhs[a]).abs() <= 1e-10 * lhs.norm().max(1e-3));
        }
    }

    #[test]
    fn fw_marginal_matches_density(rho in 0.05f64..3.0, phi in -3.1f64..3.1, z in -2.0f64..2.0) {
        let r = Vector::from_cylindrical(rho, phi, z);
        let v = position_marginal(K::GaugeFw, S::EmA1, r, &params()).unwrap();
        prop_assert!((v / density_oracle(r) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pressure_ratio_is_constant(rho in 0.1f64..3.0, phi in -3.1f64..3.1, z in -2.0f64..2.0, eta in 0.0f64..2.0) {
        let pr = params().with_eta(eta);
        let r = Vector::from_cylindrical(rho, phi, z);
        let d = pressure_tensor_diag(S::EmA2, r, &pr).unwrap();
        for a in 0..3 {
            prop_assert!((d.momentum[a] / d.density - 0.25).abs() < 1e-9);
        }
    }
}
