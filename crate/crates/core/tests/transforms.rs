use num_complex::Complex;
use proptest::prelude::*;
use std::f64::consts::PI;
use wigner_lab::numerics::quadrature::gauss_legendre_f64;
use wigner_lab::phase_model::psi;
use wigner_lab::transforms::*;
use wigner_lab::{Error, Params, Point, SystemVariant as S, TransformSpec, Vector, WignerKind};

fn params() -> Params {
    Params::default()
}

fn bound() -> f64 {
    PI.powi(-3)
}

fn em_closed_oracle(r: Vector, p: Vector) -> f64 {
    bound() * (-r.norm_sqr() / 2.0 - 2.0 * p.norm_sqr()).exp()
}

#[test]
fn closed_form_reference_values() {
    let pr = params();
    assert!((wigner_w_em_closed(Point::new(Vector::zero(), Vector::zero()), &pr) - 0.032251534433199495).abs() < 1e-15);
    let v = wigner_w_em_closed(Point::new(Vector::new(2f64.sqrt(), 0.0, 0.0), Vector::zero()), &pr);
    assert!((v - bound() * (-1f64).exp()).abs() < 1e-15);
    // Completing the square: the EM_A2 maximum at r = (1,0,0) sits at P = −qA₂(r).
    let r = Vector::new(1.0, 0.0, 0.0);
    let a = wigner_lab::phase_model::vector_potential(S::EmA2, r, &pr).unwrap();
    let peak = wigner_fw_closed(S::EmA2, Point::new(r, -a), &pr).unwrap();
    assert!((peak - bound() * (-0.5f64).exp()).abs() < 1e-15);
    let off = wigner_fw_closed(S::EmA2, Point::new(r, -a + Vector::new(0.01, 0.0, 0.0)), &pr).unwrap();
    assert!(off < peak);
}

#[test]
fn fw_closed_forms_reduce_and_reject() {
    let pr = params().with_eta(0.0);
    let pt = Point::new(Vector::new(0.3, -0.4, 0.2), Vector::new(0.1, 0.5, -0.2));
    assert!((wigner_fw_closed(S::EmA2, pt, &pr).unwrap() - wigner_w_em_closed(pt, &pr)).abs() < 1e-16);
    assert!(wigner_fw_closed(S::EmA3, pt, &pr).unwrap() > 0.0);
    assert!(matches!(wigner_fw_closed(S::EmA1, pt, &pr), Err(Error::Unsupported(_))));
}

#[test]
fn direct_w_of_gaussian_state_at_origin() {
    let pr = params();
    let v = wigner_w(&CatalogueState::em(pr), Point::new(Vector::zero(), Vector::zero()), 0.0, &pr, &TransformSpec::default()).unwrap();
    assert!((v.value - bound()).abs() < 1e-12, "{v:?}");
    assert!(v.imag.abs() < 1e-8);
}

#[test]
fn direct_w_matches_closed_form_at_large_momentum() {
    let pr = params();
    for p in [Vector::new(1.5, -2.0, 0.5), Vector::new(0.0, 0.0, 3.0)] {
        let spec = TransformSpec::default().with_order(required_hermite_order(p.max_abs(), &pr).max(32));
        let r = Vector::new(0.4, 0.2, -0.6);
        let v = wigner_w(&CatalogueState::em(pr), Point::new(r, p), 0.0, &pr, &spec).unwrap();
        assert!((v.value - em_closed_oracle(r, p)).abs() < 1e-8 * bound(), "{p:?}");
    }
}

#[test]
fn too_low_order_is_reported_as_oscillation() {
    let pr = params();
    let spec = TransformSpec::default().with_order(10);
    let err = wigner_w(&CatalogueState::em(pr), Point::new(Vector::zero(), Vector::new(3.0, 0.0, 0.0)), 0.0, &pr, &spec).unwrap_err();
    assert!(matches!(err, Error::Oscillation { .. }), "{err}");
}

#[test]
fn vortex_w_direct_matches_semianalytic() {
    let pr = params();
    let r = Vector::new(1.0, 0.0, 0.0);
    let direct = wigner_w(&CatalogueState::e(pr), Point::new(r, Vector::zero()), 0.0, &pr, &TransformSpec::default()).unwrap();
    let semi = wigner_w_e_semianalytic(1.0, 0.0, Vector::zero(), &pr, &TransformSpec::default()).unwrap();
    assert!((direct.value - semi.value).abs() < 1e-6 * bound(), "{direct:?} {semi:?}");
    assert!(direct.imag.abs() < 1e-8);
}

#[test]
fn vortex_state_with_a3_reaches_the_bound_at_origin() {
    let pr = params();
    let origin = Point::new(Vector::zero(), Vector::zero());
    let fast = catalogue_transform(WignerKind::GaugeFw, S::EmA3, origin, &pr, EvalRoute::Fast, &TransformSpec::default()).unwrap();
    assert!((fast.value - bound()).abs() < 1e-15);
    // The defining integral is only a limit on the string itself.
    let state = CatalogueState::new(S::EmA3, pr);
    let pot = CataloguePotential::new(S::EmA3, pr);
    let spec = TransformSpec::default();
    assert!(matches!(wigner_fw(&state, &pot, origin, 0.0, &pr, &spec), Err(Error::AxisSingular { .. })));
    let near = Point::new(Vector::new(1e-3, 0.0, 0.0), Vector::zero());
    let v = wigner_fw(&state, &pot, near, 0.0, &pr, &spec).unwrap();
    assert!((v.value - bound()).abs() < 1e-6 * bound(), "{v:?}");
}

#[test]
fn fw_with_vanishing_potential_is_w() {
    let pr = params();
    let state = CatalogueState::em(pr);
    let zero = CataloguePotential::new(S::ESystem, pr);
    let pt = Point::new(Vector::new(0.5, 0.3, -0.2), Vector::new(0.2, -0.4, 0.3));
    let fw = wigner_fw(&state, &zero, pt, 0.0, &pr, &TransformSpec::default()).unwrap();
    let w = wigner_w(&state, pt, 0.0, &pr, &TransformSpec::default()).unwrap();
    assert!((fw.value - w.value).abs() < 1e-14);
}

#[test]
fn fw_of_string_gauge_matches_vortex_w_at_sample_points() {
    let pr = params();
    let spec = TransformSpec::default().with_rel_tol(1e-8);
    for (rho, phi, z, p) in [
        (1.0, 0.3, 0.0, Vector::new(0.2, -0.1, 0.3)),
        (0.4, 2.5, -0.5, Vector::new(-0.5, 0.4, 0.0)),
    ] {
        let r = Vector::from_cylindrical(rho, phi, z);
        let direct = catalogue_transform(WignerKind::GaugeFw, S::EmA1, Point::new(r, p), &pr, EvalRoute::Direct, &spec).unwrap();
        let (a, b, c) = p.cylindrical_components(phi);
        let semi = wigner_w_e_semianalytic(rho, z, Vector::new(a, b, c), &pr, &TransformSpec::default()).unwrap();
        assert!((direct.value - semi.value).abs() < 1e-6 * bound(), "{direct:?} vs {semi:?}");
        assert!(direct.imag.abs() < 1e-8);
    }
}

#[test]
fn semianalytic_pz_dependence_is_gaussian() {
    let pr = params();
    let spec = TransformSpec::default();
    let v1 = wigner_w_e_semianalytic(0.8, 0.1, Vector::new(0.3, -0.2, 0.4), &pr, &spec).unwrap().value;
    let v2 = wigner_w_e_semianalytic(0.8, 0.1, Vector::new(0.3, -0.2, 0.9), &pr, &spec).unwrap().value;
    let expected = (-2.0f64 * (0.4 * 0.4 - 0.9 * 0.9)).exp();
    assert!((v1 / v2 / expected - 1.0).abs() < 1e-10);
}

#[test]
fn semianalytic_has_negative_region_in_rho_pphi_plane() {
    let pr = params();
    let spec = TransformSpec::default();
    let mut min = f64::MAX;
    for i in 1..=8 {
        for j in -8..=8 {
            let v = wigner_w_e_semianalytic(0.25 * i as f64, 0.0, Vector::new(0.0, 0.25 * j as f64, 0.0), &pr, &spec).unwrap();
            min = min.min(v.value);
        }
    }
    assert!(min < -1e-3 * bound(), "min {min}");
}

#[test]
fn semianalytic_refuses_the_axis() {
    let pr = params();
    assert!(wigner_w_e_semianalytic(0.0, 0.0, Vector::zero(), &pr, &TransformSpec::default()).is_err());
}

/// q∫A₁·dr along the segment by composite Gauss–Legendre, written out here
/// from qA₁ = −ħ e_φ/ρ.
fn a1_segment_oracle(r: Vector, s: Vector) -> f64 {
    let (x, w) = gauss_legendre_f64(40);
    let panels = 64;
    let mut acc = 0.0;
    for k in 0..panels {
        let (lo, hi) = (-1.0 + 2.0 * k as f64 / panels as f64, -1.0 + 2.0 * (k + 1) as f64 / panels as f64);
        for (&t, &wt) in x.iter().zip(&w) {
            let tau = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
            let q = r + s * (0.5 * tau);
            let rho2 = q.x * q.x + q.y * q.y;
            let a = Vector::new(q.y / rho2, -q.x / rho2, 0.0);
            acc += 0.5 * (hi - lo) * wt * a.dot(s) * 0.5;
        }
    }
    acc
}

#[test]
fn gauge_line_integral_reference_values() {
    let pr = params();
    let a1 = CataloguePotential::new(S::EmA1, pr);
    let r = Vector::new(1.0, 0.0, 0.0);
    let s = Vector::new(0.0, 2.0, 0.0);
    let v = gauge_line_integral(&a1, r, s, &pr).unwrap();
    assert!((v + PI / 2.0).abs() < 1e-12, "{v}");
    assert!((v - a1_segment_oracle(r, s)).abs() < 1e-10);
    // A segment passing behind the axis on the branch-cut side.
    let r = Vector::new(-1.0, 0.2, 0.3);
    let s = Vector::new(0.5, -1.5, 0.4);
    assert!((gauge_line_integral(&a1, r, s, &pr).unwrap() - a1_segment_oracle(r, s)).abs() < 1e-10);

    let a2 = CataloguePotential::new(S::EmA2, pr);
    let r = Vector::new(0.7, -0.3, 1.1);
    let s = Vector::new(1.3, 0.4, -2.0);
    let qa = wigner_lab::phase_model::vector_potential(S::EmA2, r, &pr).unwrap();
    assert!((gauge_line_integral(&a2, r, s, &pr).unwrap() - s.dot(qa)).abs() < 1e-14);

    let zero = CataloguePotential::new(S::ESystem, pr);
    assert_eq!(gauge_line_integral(&zero, r, s, &pr).unwrap(), 0.0);
}

#[test]
fn segment_through_the_string_is_rejected() {
    let pr = params();
    let a1 = CataloguePotential::new(S::EmA1, pr);
    let err = gauge_line_integral(&a1, Vector::new(0.0, 0.0, 0.5), Vector::new(1.0, 0.0, 0.0), &pr).unwrap_err();
    assert!(matches!(err, Error::PathCrossesGaugeString { .. }));
}

#[test]
fn zero_gauge_function_is_the_identity() {
    let pr = params();
    let state = CatalogueState::em(pr);
    let base = CataloguePotential::new(S::EmA2, pr);
    let chi = CubicGauge::<f64>::from_coefficients(&[0.0; 20]);
    let (psi2, a2) = gauge_transform(&state, Some(&base), &chi, &pr);
    let r = Vector::new(0.3, 0.8, -0.4);
    assert_eq!(psi2.amplitude(r, 0.0), state.amplitude(r, 0.0));
    assert_eq!(a2.q_a(r), base.q_a(r));
}

#[test]
fn azimuthal_gauge_maps_vortex_state_to_gaussian_state() {
    let pr = params();
    let e = CatalogueState::e(pr);
    let chi = AzimuthalGauge { coefficient: -1.0 };
    let (psi2, a2) = gauge_transform(&e, None, &chi, &pr);
    for r in [Vector::new(0.5, 0.2, -0.3), Vector::new(-1.2, -0.4, 0.8), Vector::new(0.01, -2.0, 0.0)] {
        let target: Complex<f64> = psi(S::EmA1, r, 0.0, &pr).unwrap();
        assert!((psi2.amplitude(r, 0.0) - target).norm() < 1e-12);
        let qa1 = wigner_lab::phase_model::vector_potential(S::EmA1, r, &pr).unwrap();
        assert!((a2.q_a(r) - qa1).norm() < 1e-12);
    }
}

#[test]
fn cubic_gauge_leaves_fw_unchanged() {
    let pr = params();
    let state = CatalogueState::new(S::EmA2, pr);
    let base = CataloguePotential::new(S::EmA2, pr);
    let coeffs: Vec<f64> = (0..20).map(|k| 0.15 * ((k as f64 * 1.7).sin())).collect();
    let chi = CubicGauge::from_coefficients(&coeffs);
    let (psi2, a2) = gauge_transform(&state, Some(&base), &chi, &pr);
    let spec = TransformSpec::default();
    for k in 0..10 {
        let t = k as f64;
        let pt = Point::new(
            Vector::new((t * 0.7).sin(), (t * 1.1).cos(), 0.5 * (t * 0.3).sin()),
            Vector::new(0.6 * (t * 0.9).cos(), 0.4 * (t * 1.7).sin(), 0.3),
        );
        let before = wigner_fw(&state, &base, pt, 0.0, &pr, &spec).unwrap();
        let after = wigner_fw(&psi2, &a2, pt, 0.0, &pr, &spec).unwrap();
        assert!((before.value - after.value).abs() < 1e-6 * bound(), "point {k}");
        assert!((before.value - wigner_fw_closed(S::EmA2, pt, &pr).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn w_is_not_gauge_invariant() {
    let pr = params();
    let spec = TransformSpec::default();
    let (mut max_val, mut max_diff) = (0.0f64, 0.0f64);
    for i in 1..=4 {
        for j in -3..=3 {
            let r = Vector::new(0.4 * i as f64, 0.0, 0.0);
            let p = Vector::new(0.0, 0.4 * j as f64, 0.0);
            let em = wigner_w_em_closed(Point::new(r, p), &pr);
            let e = wigner_w_e_semianalytic(r.rho(), 0.0, Vector::new(0.0, p.y, 0.0), &pr, &spec).unwrap().value;
            max_val = max_val.max(em.abs()).max(e.abs());
            max_diff = max_diff.max((em - e).abs());
        }
    }
    assert!(max_diff > 0.1 * max_val, "{max_diff} vs {max_val}");
}

#[test]
fn single_precision_closed_form() {
    let pr = wigner_lab::Params32::default();
    let v = wigner_w_em_closed(wigner_lab::Point32::new(wigner_lab::Vector32::zero(), wigner_lab::Vector32::zero()), &pr);
    assert!((v - 0.032_251_534f32).abs() < 1e-7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn direct_w_agrees_with_closed_form(
        x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0,
        px in -1.5f64..1.5, py in -1.5f64..1.5, pz in -1.5f64..1.5,
    ) {
        let pr = params();
        let (r, p) = (Vector::new(x, y, z), Vector::new(px, py, pz));
        let v = wigner_w(&CatalogueState::em(pr), Point::new(r, p), 0.0, &pr, &TransformSpec::default()).unwrap();
        prop_assert!((v.value - em_closed_oracle(r, p)).abs() < 1e-8 * bound());
        prop_assert!(v.imag.abs() < 1e-8);
    }

    #[test]
    fn transforms_are_bounded_and_real(
        rho in 0.2f64..2.5, z in -1.5f64..1.5,
        pr_ in -1.5f64..1.5, pp in -1.5f64..1.5, pz in -1.0f64..1.0,
    ) {
        let pr = params();
        let v = wigner_w_e_semianalytic(rho, z, Vector::new(pr_, pp, pz), &pr, &TransformSpec::default()).unwrap();
        prop_assert!(v.value.abs() <= wigner_bound(&pr) * (1.0 + 1e-9));
        prop_assert!(v.imag.abs() < 1e-8);
    }
}
