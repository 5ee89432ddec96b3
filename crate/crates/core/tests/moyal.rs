use proptest::prelude::*;
use std::f64::consts::PI;
use wigner_lab::moyal::*;
use wigner_lab::phase_model::{scalar_potential, vector_potential};
use wigner_lab::{Error, Params, Point, SystemVariant as S, Vector};

fn params() -> Params {
    Params::default()
}

/// dⁿ/dpⁿ e^{−2p²} via physicists' Hermite polynomials.
fn gauss_deriv(n: usize, p: f64) -> f64 {
    let x = 2f64.sqrt() * p;
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    let h = match n {
        0 => h0,
        _ => {
            for k in 1..n {
                let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        }
    };
    (-(2f64.sqrt())).powi(n as i32) * h * (-2.0 * p * p).exp()
}

/// ∂_p^α of the Gaussian phase-space density (σ = ħ = 1).
fn w_deriv(r: Vector, p: Vector, a: [usize; 3]) -> f64 {
    PI.powi(-3) * (-r.norm_sqr() / 2.0).exp() * gauss_deriv(a[0], p.x) * gauss_deriv(a[1], p.y) * gauss_deriv(a[2], p.z)
}

fn gaussian_w(x: &[f64]) -> f64 {
    PI.powi(-3) * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.0 - 2.0 * (x[3] * x[3] + x[4] * x[4] + x[5] * x[5])).exp()
}

fn k(n: usize) -> TruncationOrder {
    TruncationOrder::new(n).unwrap()
}

#[test]
fn truncation_is_capped() {
    assert!(TruncationOrder::new(3).is_ok());
    assert!(matches!(TruncationOrder::new(4), Err(Error::OrderTooHigh { .. })));
}

#[test]
fn leading_potential_term_is_convective() {
    let pr = params().with_eta(0.5);
    let m = CatalogueModel::new(S::EmA2, pr);
    let st = default_moyal_stencil(&pr);
    let (r, p) = (Vector::new(0.4, -0.3, 0.8), Vector::new(0.2, 0.1, -0.3));
    let v = potential_series_term(&m, 0, &gaussian_w, Point::new(r, p), &st).unwrap();
    // ∇U₂ = (1/4)((1−η²)x, (1−η²)y, z)
    let grad = Vector::new(0.75 * r.x, 0.75 * r.y, r.z) * 0.25;
    let oracle = -(grad.x * w_deriv(r, p, [1, 0, 0]) + grad.y * w_deriv(r, p, [0, 1, 0]) + grad.z * w_deriv(r, p, [0, 0, 1]));
    assert!((v - oracle).abs() < 1e-10, "{v} vs {oracle}");
    assert!((scalar_potential(S::EmA2, r, &pr).unwrap() - (0.75 * (r.x * r.x + r.y * r.y) + r.z * r.z) / 8.0).abs() < 1e-15);
}

#[test]
fn terminating_system_has_no_quantum_terms() {
    let pr = params();
    let m = CatalogueModel::new(S::EmA2, pr);
    let st = default_moyal_stencil(&pr);
    let at = Point::new(Vector::new(0.7, 0.2, -0.5), Vector::new(0.3, -0.4, 0.2));
    for l in 1..=3 {
        assert_eq!(potential_series_term(&m, l, &gaussian_w, at, &st).unwrap(), 0.0);
        assert_eq!(vector_series_term(&m, l, &gaussian_w, at, &st).unwrap(), Vector::zero());
    }
    assert_eq!(quantum_vector_potential(&m, k(3), &gaussian_w, at, &st).unwrap(), Vector::zero());
    let lead = vector_series_term(&m, 0, &gaussian_w, at, &st).unwrap();
    let qa = vector_potential(S::EmA2, at.r, &pr).unwrap();
    assert!((lead - qa * gaussian_w(&at.to_array())).norm() < 1e-16);
}

#[test]
fn funnel_potential_third_order_term_matches_symbolic_oracle() {
    let pr = params();
    let m = CatalogueModel::new(S::EmA1, pr);
    let st = default_moyal_stencil(&pr);
    let r = Vector::new(2.0, 0.0, 0.0);
    for p in [Vector::zero(), Vector::new(0.3, -0.2, 0.1), Vector::new(-0.4, 0.5, 0.0)] {
        let v = potential_series_term(&m, 1, &gaussian_w, Point::new(r, p), &st).unwrap();
        // U₁ = (r² − 4/ρ²)/8 on the x-axis: ∂³_x U = 12/x⁵, ∂_x∂²_y U = −4/x⁵, others vanish.
        let (uxxx, uxyy) = (12.0 / 32.0, -4.0 / 32.0);
        let op3 = uxxx * w_deriv(r, p, [3, 0, 0]) + 3.0 * uxyy * w_deriv(r, p, [1, 2, 0]);
        let oracle = op3 / 24.0;
        assert!((v - oracle).abs() < 1e-9, "{p:?}: {v} vs {oracle}");
    }
}

#[test]
fn string_potential_second_order_term_matches_symbolic_oracle() {
    let pr = params();
    let m = CatalogueModel::new(S::EmA1, pr);
    let st = default_moyal_stencil(&pr);
    let x0 = 1.5;
    let r = Vector::new(x0, 0.0, 0.0);
    let p = Vector::new(0.3, -0.25, 0.2);
    let v = vector_series_term(&m, 1, &gaussian_w, Point::new(r, p), &st).unwrap();
    // qA₁ = (y, −x, 0)/ρ²; on the x-axis ∂x∂y a_x = −2/x³, ∂²_x a_y = −2/x³, ∂²_y a_y = 2/x³.
    let c = -1.0 / 8.0;
    let x3 = x0 * x0 * x0;
    let ax = c * 2.0 * (-2.0 / x3) * w_deriv(r, p, [1, 1, 0]);
    let ay = c * ((-2.0 / x3) * w_deriv(r, p, [2, 0, 0]) + (2.0 / x3) * w_deriv(r, p, [0, 2, 0]));
    assert!((v.x - ax).abs() < 1e-9 && (v.y - ay).abs() < 1e-9 && v.z.abs() < 1e-15, "{v:?} vs ({ax}, {ay})");
}

#[test]
fn field_of_terminating_system_is_classical() {
    let pr = params();
    let st = default_moyal_stencil(&pr);
    for eta in [0.0, 1.0, 2.0] {
        let m = CatalogueModel::new(S::EmA2, pr.with_eta(eta));
        let at = Point::new(Vector::new(0.5, -0.6, 0.3), Vector::new(0.2, 0.4, -0.1));
        let classical = classical_limit_force(&m, at).unwrap();
        for kk in 0..=3 {
            let f = vlasov_moyal_field(&m, k(kk), at, &st).unwrap();
            assert!((f.total - classical).norm() < 1e-12, "eta {eta} K {kk}");
            let sum = f.contributions.iter().fold(Vector::zero(), |a, &b| a + b);
            assert_eq!(sum, f.total);
        }
    }
}

#[test]
fn classical_force_reference_values() {
    let pr = params();
    let m = CatalogueModel::new(S::EmA2, pr);
    let r = Vector::from_cylindrical(1.0, 0.0, 0.0);
    let f = classical_limit_force(&m, Point::new(r, r.e_phi() * 0.5)).unwrap();
    assert!((f + r.e_rho() * 0.5).norm() < 1e-15, "{f:?}");
    // P = 0 keeps only the electric part −∇U₂ = −z/4 e_z at η = 1.
    let f0 = classical_limit_force(&m, Point::new(Vector::new(0.3, 0.1, 0.8), Vector::zero())).unwrap();
    assert!((f0 - Vector::new(0.0, 0.0, -0.2)).norm() < 1e-15);
}

#[test]
fn vortex_system_without_field_feels_minus_grad_u() {
    let pr = params();
    let m = CatalogueModel::new(S::ESystem, pr);
    let st = default_moyal_stencil(&pr);
    let r = Vector::from_cylindrical(1.2, 0.5, 0.3);
    let f = vlasov_moyal_field(&m, k(0), Point::new(r, Vector::new(0.2, -0.1, 0.0)), &st).unwrap();
    // ∇U₁ = (r + 4 e_ρ/ρ³)/4
    let grad = (r + r.e_rho() * (4.0 / 1.2f64.powi(3))) * 0.25;
    assert!((f.total + grad).norm() < 1e-12, "{f:?}");
}

#[test]
fn sextic_order_difference_matches_oracle() {
    let pr = params();
    let st = default_moyal_stencil(&pr);
    let m = PolynomialTest { quartic: 0.0, sextic: 1.0, harmonic: 0.0, width: 0.8, params: pr };
    let at = Point::new(Vector::new(0.6, 0.1, 0.0), Vector::new(0.3, 0.0, 0.1));
    let f1 = vlasov_moyal_field(&m, k(1), at, &st).unwrap();
    let f2 = vlasov_moyal_field(&m, k(2), at, &st).unwrap();
    // −c₂ Op₄[∂_x U] f / f with ∂⁴_x (6x⁵) = 720x and ∂⁴_P f / f = He₄(P/w)/w⁴.
    let u: f64 = 0.3 / 0.8;
    let he4 = u.powi(4) - 6.0 * u * u + 3.0;
    let oracle = -(0.0625 / 120.0) * 720.0 * 0.6 * he4 / 0.8f64.powi(4);
    let diff = f2.total - f1.total;
    assert!((diff.x - oracle).abs() < 1e-6 * oracle.abs(), "{} vs {oracle}", diff.x);
    assert!(diff.y.abs() < 1e-12 && diff.z.abs() < 1e-12);
}

#[test]
fn terminating_residual_vanishes_for_all_eta() {
    for eta in [0.0, 0.5, 1.0, 2.0] {
        let pr = params().with_eta(eta);
        let m = CatalogueModel::new(S::EmA2, pr);
        let st = default_moyal_stencil(&pr);
        for (r, p) in [
            (Vector::new(0.8, -0.4, 0.3), Vector::new(0.3, 0.2, -0.5)),
            (Vector::new(-1.5, 1.0, -0.9), Vector::new(-0.6, 0.1, 0.4)),
        ] {
            for kk in 0..=3 {
                let v = evolution_residual(&m, k(kk), Point::new(r, p), &st).unwrap();
                assert!(v < 1e-7, "eta {eta} K {kk}: {v:e}");
            }
        }
    }
}

#[test]
fn residual_report_sums_to_total() {
    let pr = params();
    let m = CatalogueModel::new(S::EmA1, pr);
    let rep = evolution_residual_report(&m, k(3), Point::new(Vector::from_cylindrical(2.0, 0.4, 0.1), Vector::new(0.1, 0.4, -0.2)), &default_moyal_stencil(&pr)).unwrap();
    assert_eq!(rep.contributions.len(), 4);
    let sum: f64 = rep.contributions.iter().sum();
    assert_eq!(sum, rep.total);
    assert_eq!(rep.tail_estimate, rep.contributions[3].abs());
}

#[test]
fn string_system_residual_decreases_with_order_at_two_sigma() {
    let pr = params();
    let m = CatalogueModel::new(S::EmA1, pr);
    let st = default_moyal_stencil(&pr);
    for p in [Vector::new(0.1, -0.1, 0.05), Vector::new(-0.2, 0.1, 0.1), Vector::new(0.05, 0.15, -0.1)] {
        let at = Point::new(Vector::from_cylindrical(2.0, 0.4, 0.0), p);
        let vals: Vec<f64> = (0..=3).map(|kk| evolution_residual(&m, k(kk), at, &st).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "{vals:?}");
        }
    }
}

#[test]
fn average_force_reference_values() {
    let pr = params();
    let st = default_moyal_stencil(&pr);
    let m = CatalogueModel::new(S::EmA2, pr);
    let r = Vector::from_cylindrical(1.0, 0.0, 0.0);
    for kk in [0, 3] {
        let f = average_force(&m, k(kk), r, &st).unwrap();
        assert!((f + r.e_rho() * 0.5).norm() < 1e-6, "{f:?}");
    }
    let h = PolynomialTest::harmonic(pr, 0.7, 0.6);
    let r = Vector::new(0.4, -0.3, 0.9);
    let f = average_force(&h, k(2), r, &st).unwrap();
    assert!((f + r * 0.7).norm() < 1e-10);
}

#[test]
fn quantum_terms_average_out() {
    let pr = params();
    let st = default_moyal_stencil(&pr);
    let q = PolynomialTest::quartic(pr, 0.8);
    let r = Vector::new(0.7, 0.2, -0.1);
    let f0 = average_force(&q, k(0), r, &st).unwrap();
    let f3 = average_force(&q, k(3), r, &st).unwrap();
    assert!((f3 - f0).norm() < 1e-6);
    // Pointwise the K = 1 correction is not zero.
    let pointwise = vlasov_moyal_field(&q, k(1), Point::new(r, Vector::new(0.5, 0.0, 0.0)), &st).unwrap();
    assert!(pointwise.contributions[1].norm() > 1e-2);

    let m = CatalogueModel::new(S::EmA2, pr);
    for comp in 0..3 {
        for src in [CorrectionSource::Scalar, CorrectionSource::Vector(0), CorrectionSource::Vector(1)] {
            let v = quantum_correction_integral(&m, 1, Vector::from_cylindrical(1.0, 0.3, 0.2), comp, src, &st).unwrap();
            assert!(v.abs() < 1e-8, "{comp} {src:?}: {v:e}");
        }
        let v = quantum_correction_integral(&q, 1, r, comp, CorrectionSource::Scalar, &st).unwrap();
        assert!(v.abs() < 1e-8);
    }
}

#[test]
fn momentum_field_average_is_mean_momentum() {
    let pr = params();
    let st = default_moyal_stencil(&pr);
    for sys in [S::EmA2, S::EmA1] {
        let m = CatalogueModel::new(sys, pr);
        let r = Vector::from_cylindrical(1.3, -0.6, 0.4);
        let (field, plain) = momentum_field_average(&m, k(3), r, &st).unwrap();
        assert!((field - plain).norm() < 1e-6 * plain.norm().max(1e-3), "{sys}");
    }
}

#[test]
fn dissipation_divergence_reference_values() {
    let pr = params();
    let st = default_moyal_stencil(&pr);
    let m = CatalogueModel::new(S::EmA2, pr);
    let at = Point::new(Vector::new(0.6, -0.2, 0.4), Vector::new(0.3, 0.2, -0.1));
    for kk in 0..=3 {
        assert!(dissipation_divergence(&m, k(kk), at, &st).unwrap().abs() < 1e-7);
    }
    let q = PolynomialTest::quartic(pr, 0.8);
    for (x, px) in [(0.5, 0.3), (1.0, -0.7), (0.3, 1.2)] {
        let at = Point::new(Vector::new(x, 0.2, -0.1), Vector::new(px, 0.1, 0.2));
        assert_eq!(dissipation_divergence(&q, k(0), at, &st).unwrap(), 0.0);
        let d = dissipation_divergence(&q, k(1), at, &st).unwrap();
        let oracle = 2.0 * x * px / 0.8f64.powi(4);
        assert!((d - oracle).abs() < 1e-5 * oracle.abs(), "{d} vs {oracle}");
    }
}

#[test]
fn errors_are_reported() {
    let pr = params();
    let st = default_moyal_stencil(&pr);
    let q = PolynomialTest::quartic(pr, 0.8);
    let far = Point::new(Vector::zero(), Vector::new(60.0, 0.0, 0.0));
    assert!(matches!(vlasov_moyal_field(&q, k(1), far, &st), Err(Error::ZeroDensity { .. })));
    let vortex = CatalogueModel::new(S::ESystem, pr);
    assert!(matches!(average_force(&vortex, k(0), Vector::new(1.0, 0.0, 0.0), &st), Err(Error::Unsupported(_))));
    let axis = Point::new(Vector::new(0.0, 0.0, 0.5), Vector::zero());
    assert!(matches!(classical_limit_force(&CatalogueModel::new(S::EmA1, pr), axis), Err(Error::AxisSingular { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn terminating_residual_at_random_points(
        rho in 0.2f64..2.5, phi in -3.1f64..3.1, z in -1.5f64..1.5,
        px in -1.0f64..1.0, py in -1.0f64..1.0, pz in -1.0f64..1.0, eta in 0.0f64..2.0,
    ) {
        let pr = params().with_eta(eta);
        let m = CatalogueModel::new(S::EmA2, pr);
        let v = evolution_residual(&m, k(3), Point::new(Vector::from_cylindrical(rho, phi, z), Vector::new(px, py, pz)), &default_moyal_stencil(&pr)).unwrap();
        prop_assert!(v < 1e-7);
    }

    #[test]
    fn zero_order_field_is_classical(
        x in -1.5f64..1.5, y in -1.5f64..1.5, z in -1.5f64..1.5, px in -1.0f64..1.0,
    ) {
        let pr = params();
        let q = PolynomialTest { quartic: 0.5, sextic: 0.1, harmonic: 1.0, width: 0.7, params: pr };
        let at = Point::new(Vector::new(x, y, z), Vector::new(px, 0.2, -0.1));
        let f = vlasov_moyal_field(&q, k(0), at, &default_moyal_stencil(&pr)).unwrap();
        prop_assert_eq!(f.total, classical_limit_force(&q, at).unwrap());
    }
}
