use num_complex::Complex;
use proptest::prelude::*;
use std::f64::consts::PI;
use wigner_lab::numerics::quadrature::{integrate, Rule1D, QuadratureSpec};
use wigner_lab::phase_model::*;
use wigner_lab::{Error, Params, SystemVariant as S, Vector};

fn p() -> Params {
    Params::default()
}

fn cyl(rho: f64, phi: f64, z: f64) -> Vector {
    Vector::from_cylindrical(rho, phi, z)
}

#[test]
fn energy_is_derived() {
    let params = Params::new(1.0, 2.0, 1.0, 0.5, 1.0).unwrap();
    assert!((params.energy() - 3.0 / (4.0 * 2.0 * 0.25)).abs() < 1e-15);
    assert!(Params::natural(0.0, 1.0).is_err());
    assert!(Params::natural(-1.0, 1.0).is_err());
}

#[test]
fn psi_reference_values() {
    let a0 = (2.0 * PI).powf(-0.75);
    let v = psi(S::EmA1, Vector::zero(), 0.0, &p()).unwrap();
    assert!((v.norm() - 0.25198).abs() < 1e-5 && (v.norm() - a0).abs() < 1e-15);
    assert!(v.arg().abs() < 1e-15);
    let v = psi(S::EmA1, Vector::zero(), 1.0, &p()).unwrap();
    assert!((v.arg() + 0.75).abs() < 1e-14);
    let v = psi(S::ESystem, Vector::new(1.0, 0.0, 0.0), 0.0, &p()).unwrap();
    assert!((v.norm() - a0 * (-0.25f64).exp()).abs() < 1e-15);
    assert!(v.arg().abs() < 1e-15);
}

#[test]
fn vortex_states_refuse_the_axis() {
    for s in [S::ESystem, S::EmA3] {
        match psi(s, Vector::new(0.0, 0.0, 1.0), 0.0, &p()) {
            Err(e @ Error::AxisSingular { .. }) => assert!(e.to_string().starts_with("phase singular on z-axis")),
            other => panic!("{other:?}"),
        }
    }
    assert!(psi(S::EmA1, Vector::new(0.0, 0.0, 1.0), 0.0, &p()).is_ok());
}

#[test]
fn normalisation_of_all_variants() {
    // Gaussian states in Cartesian Hermite; vortex states in cylindrical coordinates.
    let spec = QuadratureSpec::gauss_hermite_scaled(24, [0.0; 3], [1.0; 3]);
    let n = integrate(|r: Vector| psi(S::EmA1, r, 0.0, &p()).unwrap().norm_sqr(), &spec).unwrap();
    assert!((n - 1.0).abs() < 1e-8);
    let rho = Rule1D::gauss_legendre(60, 1e-9, 12.0);
    let z = Rule1D::gauss_hermite(24, 0.0, 1.0);
    let phi = Rule1D::trapezoid(16, -PI, PI);
    for s in S::ALL {
        let mut total = 0.0;
        for (&r, &wr) in rho.nodes.iter().zip(&rho.weights) {
            for (&zz, &wz) in z.nodes.iter().zip(&z.weights) {
                for (&f, &wf) in phi.nodes.iter().zip(&phi.weights) {
                    total += wr * wz * wf * r * psi(s, cyl(r, f, zz), 0.0, &p()).unwrap().norm_sqr();
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-8, "{s}: {total}");
    }
}

#[test]
fn vector_potential_reference_values() {
    let a = vector_potential(S::EmA1, cyl(2.0, 0.3, 0.0), &p()).unwrap();
    let e_phi = cyl(2.0, 0.3, 0.0).e_phi();
    assert!((a - e_phi * -0.5).norm() < 1e-15);
    let a = vector_potential(S::EmA2, cyl(2.0, 1.1, 0.4), &p()).unwrap();
    assert!((a - cyl(2.0, 1.1, 0.4).e_phi() * -1.0).norm() < 1e-15);
    assert_eq!(vector_potential(S::ESystem, Vector::new(0.3, 0.1, 0.0), &p()).unwrap(), Vector::zero());
    assert!(vector_potential(S::EmA1, Vector::new(0.0, 0.0, 2.0), &p()).is_err());
    let a3 = vector_potential(S::EmA3, cyl(2.0, 0.3, 0.0), &p()).unwrap();
    assert!((a3 - e_phi * 0.5).norm() < 1e-15);
}

#[test]
fn scalar_potential_reference_values() {
    let u1 = scalar_potential(S::EmA1, Vector::new(2f64.sqrt(), 0.0, 0.0), &p()).unwrap();
    assert!(u1.abs() < 1e-15);
    let u2 = scalar_potential(S::EmA2, cyl(3.0, 0.2, 0.0), &p()).unwrap();
    assert!(u2.abs() < 1e-15);
    let u2 = scalar_potential(S::EmA2, Vector::new(0.0, 0.0, 2.0), &p().with_eta(0.5)).unwrap();
    assert!((u2 - 0.5).abs() < 1e-15);
    assert!(scalar_potential(S::EmA1, Vector::new(0.0, 0.0, 1.0), &p()).is_err());
}

#[test]
fn magnetic_field_reference_values() {
    let b = magnetic_field(S::EmA2, Vector::new(0.3, -2.0, 5.0), &p()).unwrap();
    assert!((b - Vector::new(0.0, 0.0, -1.0)).norm() < 1e-15);
    assert_eq!(magnetic_field(S::EmA1, cyl(1.0, 0.0, 0.0), &p()).unwrap(), Vector::zero());
    assert_eq!(magnetic_field(S::EmA2, cyl(1.0, 0.0, 0.0), &p().with_eta(0.0)).unwrap(), Vector::zero());
}

#[test]
fn quantum_potential_reference_values() {
    assert!((quantum_potential(Vector::zero(), &p()) - 0.75).abs() < 1e-15);
    assert!(quantum_potential(Vector::new(6f64.sqrt(), 0.0, 0.0), &p()).abs() < 1e-15);
    assert!((quantum_potential(Vector::new(0.0, 2.0, 0.0), &p()) - 0.25).abs() < 1e-15);
}

#[test]
fn quantum_potential_matches_bohm_definition() {
    // Q = −(ħ²/2m) Δ|Ψ|/|Ψ| by finite differences, same for every variant.
    let h = 1e-3;
    for r in [Vector::new(0.4, -0.7, 0.2), Vector::new(1.5, 0.3, -1.0)] {
        for s in S::ALL {
            let a = |x: Vector| psi(s, x, 0.0, &p()).unwrap().norm();
            let mut lap = 0.0;
            for i in 0..3 {
                let mut e = Vector::zero();
                e[i] = h;
                lap += (a(r + e) - 2.0 * a(r) + a(r - e)) / (h * h);
            }
            let q = -0.5 * lap / a(r);
            assert!((q - quantum_potential(r, &p())).abs() < 1e-6, "{s}");
        }
    }
}

#[test]
fn schrodinger_residuals_of_exact_states() {
    let st = default_schrodinger_stencil(&p());
    let r = schrodinger_residual(S::EmA2, cyl(1.0, 0.4, 0.5), 0.0, &p(), &st).unwrap();
    assert!(r < 1e-6, "{r}");
    let r = schrodinger_residual(S::EmA1, cyl(1.5, 0.0, 0.0), 0.0, &p(), &st).unwrap();
    assert!(r < 1e-6, "{r}");
}

#[test]
fn perturbed_state_is_detected() {
    let st = default_schrodinger_stencil(&p());
    let wrong = p().with_sigma(1.05).unwrap();
    let wave = move |x: Vector| psi(S::EmA1, x, 0.0, &wrong).unwrap_or(Complex::new(0.0, 0.0));
    let r = hamiltonian_residual(&wave, S::EmA1, cyl(1.5, 0.2, 0.3), &p(), &st).unwrap();
    assert!(r > 1e-2, "{r}");
}

#[test]
fn eta_balance_keeps_residual_small() {
    let st = default_schrodinger_stencil(&p());
    for eta in [0.0, 0.5, 1.0, 2.0, 3.5] {
        let params = p().with_eta(eta);
        let r = schrodinger_residual(S::EmA2, Vector::new(0.7, -0.4, 0.9), 0.3, &params, &st).unwrap();
        assert!(r < 1e-6, "eta {eta}: {r}");
    }
}

#[test]
fn hamilton_jacobi_reference_values() {
    assert!(hamilton_jacobi_residual(S::EmA1, cyl(1.0, 0.0, 0.0), &p()).unwrap() < 1e-10);
    assert!(hamilton_jacobi_residual(S::ESystem, cyl(2.0, 0.0, 1.0), &p()).unwrap() < 1e-10);
    let r = Vector::new(0.3, 1.2, -0.8);
    for s in S::ALL {
        let without = hamilton_jacobi_terms(s, r, &p(), false).unwrap();
        assert!((without - quantum_potential(r, &p()).abs()).abs() < 1e-12, "{s}");
    }
}

#[test]
fn mean_momentum_reference_values() {
    let v = mean_momentum_exact(S::ESystem, cyl(2.0, 0.5, 0.0), &p()).unwrap();
    assert!((v - cyl(2.0, 0.5, 0.0).e_phi() * 0.5).norm() < 1e-15);
    let v = mean_momentum_exact(S::EmA2, cyl(2.0, 0.5, 0.0), &p()).unwrap();
    assert!((v - cyl(2.0, 0.5, 0.0).e_phi()).norm() < 1e-15);
    let v = mean_momentum_exact(S::EmA2, cyl(2.0, 0.5, 0.0), &p().with_eta(0.0)).unwrap();
    assert!(v.norm() < 1e-15);
    let v = mean_momentum_exact(S::EmA1, cyl(2.0, 0.5, 0.0), &p()).unwrap();
    assert!((v - cyl(2.0, 0.5, 0.0).e_phi() * 0.5).norm() < 1e-15);
}

#[test]
fn gauge_relation_between_states() {
    for r in [Vector::new(1.0, 0.5, 0.2), Vector::new(-0.3, -1.4, 0.7), Vector::new(-2.0, 1e-3, 0.0)] {
        let em = psi(S::EmA1, r, 0.4, &p()).unwrap();
        let e = psi(S::ESystem, r, 0.4, &p()).unwrap();
        let rotated = e * Complex::from_polar(1.0, -r.phi());
        assert!((em - rotated).norm() < 1e-12);
    }
}

#[test]
fn characteristic_curves() {
    let ts: Vec<f64> = (0..20).map(|i| 0.02 * i as f64).collect();
    let c = characteristic_curve(1.0, 0, 4, PI / 2.0, 0.3, &ts, &p()).unwrap();
    assert!(c.points.iter().all(|&(_, phi, _)| (phi - 0.3).abs() < 1e-15));
    let d: Vec<f64> = c.points.windows(2).map(|w| w[1].2 - w[0].2).collect();
    assert!(d.iter().all(|&x| (x - d[0]).abs() < 1e-12 && x != 0.0));
    let c = characteristic_curve(1.0, 1, 4, PI / 2.0, 0.3, &[0.0], &p()).unwrap();
    assert_eq!(c.points[0], (0.0, 0.3, PI / 2.0));
    // Along the curve the F₀ arguments keep their initial values.
    let c = characteristic_curve(1.0, 1, 4, PI / 2.0, 0.3, &ts, &p()).unwrap();
    let (a0, b0) = f0_arguments(1.0, 1, 4, 0.3, PI / 2.0, 0.0, &p());
    for &(t, phi, theta) in &c.points {
        let (a, b) = f0_arguments(1.0, 1, 4, phi, theta, t, &p());
        assert!((a - a0).abs() < 1e-12 && (b - b0).abs() < 1e-12, "t={t}");
    }
}

#[test]
fn characteristic_curve_truncates_at_pole() {
    let ts: Vec<f64> = (0..100).map(|i| 0.1 * i as f64).collect();
    let c = characteristic_curve(1.0, 1, 4, PI / 2.0, 0.0, &ts, &p()).unwrap();
    assert!(c.truncated && c.points.len() < ts.len());
    assert!(characteristic_curve(1.0, 1, 0, 1.0, 0.0, &ts, &p()).is_err());
}

#[test]
fn jets_match_pointwise_potentials() {
    let r = Vector::new(0.8, -1.1, 0.4);
    for s in S::ALL {
        let u = scalar_potential_jet(s, r, 3, &p()).unwrap();
        assert!((u.value() - scalar_potential(s, r, &p()).unwrap()).abs() < 1e-14);
        let a = vector_potential_jet(s, r, 3, &p()).unwrap();
        let a0 = vector_potential(s, r, &p()).unwrap();
        for i in 0..3 {
            assert!((a[i].value() - a0[i]).abs() < 1e-14);
        }
        // curl of qA equals qB
        let curl_z = a[1].derivative([1, 0, 0]) - a[0].derivative([0, 1, 0]);
        assert!((curl_z - magnetic_field(s, r, &p()).unwrap().z).abs() < 1e-13, "{s}");
    }
}

proptest! {
    #[test]
    fn quantum_potential_is_variant_independent(x in -3.0f64..3.0, y in -3.0f64..3.0, z in -3.0f64..3.0) {
        prop_assume!(x.hypot(y) > 1e-3);
        let r = Vector::new(x, y, z);
        let q = quantum_potential(r, &p());
        prop_assert!((q - 0.75 * (1.0 - r.norm_sqr() / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn hamilton_jacobi_holds_everywhere(x in -3.0f64..3.0, y in -3.0f64..3.0, z in -3.0f64..3.0, eta in 0.0f64..3.0) {
        prop_assume!(x.hypot(y) > 0.05);
        let params = p().with_eta(eta);
        for s in S::ALL {
            prop_assert!(hamilton_jacobi_residual(s, Vector::new(x, y, z), &params).unwrap() < 1e-10);
        }
    }

    #[test]
    fn schrodinger_holds_at_random_points(rho in 0.3f64..2.5, phi in -3.1f64..3.1, z in -2.0f64..2.0) {
        let st = default_schrodinger_stencil(&p());
        for s in S::ALL {
            let r = schrodinger_residual(s, cyl(rho, phi, z), 0.0, &p(), &st).unwrap();
            prop_assert!(r < 1e-6, "{} {}", s, r);
        }
    }
}
