//! Marginals, momentum moments, mean energy, pressure, momentum
//! distributions and negativity scans of the catalogued transforms.
//!
//! Gaussian transforms are integrated over momentum by Gauss–Hermite. The
//! vortex transforms (W^(E), and f_w of EM_A1 which equals it) have slowly
//! decaying momentum tails, so their momentum moments are taken in the
//! conjugate variable: ∫W = g(0), ∫pW = −iħ∇g(0), ∫p_a p_b W = −ħ²∂_a∂_b g(0),
//! where g is the dressed density of the transform.

use crate::error::{Error, Result};
use crate::numerics::grid::{Axis, NamedAxis, SampledField};
use crate::numerics::parallel::par_map;
use crate::numerics::quadrature::{gauss_legendre_f64, Rule1D};
use crate::phase_model::{
    potential_pole_part, scalar_potential, vector_potential_unchecked, ModelParams, PhasePoint, SystemVariant,
};
use crate::scalar::Real;
use crate::transforms::{
    catalogue_transform, dressed_density, gaussian_momentum_center, is_gaussian_in_momentum, position_density,
    wigner_bound, wigner_w_e_semianalytic, wigner_w_em_closed, CatalogueState, CataloguePotential, EvalRoute,
    TransformSpec, VectorPotential, WignerKind,
};
use crate::vec3::Vec3;
use num_complex::Complex;

/// Zeroth, first and second momentum moments of a transform at fixed r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumMoments<T> {
    /// ∫T d³p
    pub m0: T,
    /// ∫p T d³p
    pub m1: Vec3<T>,
    /// ∫p_a p_b T d³p
    pub m2: [[T; 3]; 3],
}

impl<T: Real> MomentumMoments<T> {
    pub fn mean(&self) -> Vec3<T> {
        self.m1 * (T::one() / self.m0)
    }

    /// Central second moments ∫(p−⟨p⟩)_a(p−⟨p⟩)_b T d³p.
    pub fn central(&self) -> [[T; 3]; 3] {
        let c = self.mean();
        let mut out = [[T::zero(); 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                out[a][b] = self.m2[a][b] - self.m0 * c[a] * c[b];
            }
        }
        out
    }
}

const MOMENT_ORDER: usize = 12;

fn hermite_moments<T: Real>(
    density: impl Fn(Vec3<T>) -> T,
    center: Vec3<T>,
    params: &ModelParams<T>,
) -> MomentumMoments<T> {
    let scale = params.hbar / (T::lit(2.0) * params.sigma_r);
    let rules: Vec<Rule1D<T>> = (0..3).map(|i| Rule1D::gauss_hermite(MOMENT_ORDER, center[i], scale)).collect();
    let mut m = MomentumMoments { m0: T::zero(), m1: Vec3::zero(), m2: [[T::zero(); 3]; 3] };
    for (&px, &wx) in rules[0].nodes.iter().zip(&rules[0].weights) {
        for (&py, &wy) in rules[1].nodes.iter().zip(&rules[1].weights) {
            for (&pz, &wz) in rules[2].nodes.iter().zip(&rules[2].weights) {
                let p = Vec3::new(px, py, pz);
                let v = wx * wy * wz * density(p);
                m.m0 = m.m0 + v;
                m.m1 = m.m1 + p * v;
                for a in 0..3 {
                    for b in 0..3 {
                        m.m2[a][b] = m.m2[a][b] + p[a] * p[b] * v;
                    }
                }
            }
        }
    }
    m
}

/// Central-difference derivatives of g at s = 0 with two Richardson levels.
fn conjugate_moments<T: Real>(g: &dyn Fn(Vec3<T>) -> Complex<T>, h0: T, hbar: T) -> MomentumMoments<T> {
    let e = |i: usize, h: T| {
        let mut v = Vec3::zero();
        v[i] = h;
        v
    };
    let g0 = g(Vec3::zero());
    let estimate = |h: T| -> ([Complex<T>; 3], [[Complex<T>; 3]; 3]) {
        let mut grad = [Complex::new(T::zero(), T::zero()); 3];
        let mut hess = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        for a in 0..3 {
            let (gp, gm) = (g(e(a, h)), g(e(a, -h)));
            grad[a] = (gp - gm) / (T::lit(2.0) * h);
            hess[a][a] = (gp - g0 * T::lit(2.0) + gm) / (h * h);
            for b in 0..a {
                let pp = g(e(a, h) + e(b, h));
                let pm = g(e(a, h) + e(b, -h));
                let mp = g(e(a, -h) + e(b, h));
                let mm = g(e(a, -h) + e(b, -h));
                hess[a][b] = (pp - pm - mp + mm) / (T::lit(4.0) * h * h);
                hess[b][a] = hess[a][b];
            }
        }
        (grad, hess)
    };
    let levels = [h0, h0 * T::lit(0.5), h0 * T::lit(0.25)];
    let est: Vec<_> = levels.iter().map(|&h| estimate(h)).collect();
    // Two Richardson sweeps for an O(h²) error series.
    let rich = |x: [Complex<T>; 3]| {
        let r1 = (x[1] * T::lit(4.0) - x[0]) / T::lit(3.0);
        let r2 = (x[2] * T::lit(4.0) - x[1]) / T::lit(3.0);
        (r2 * T::lit(16.0) - r1) / T::lit(15.0)
    };
    let mut m = MomentumMoments { m0: g0.re, m1: Vec3::zero(), m2: [[T::zero(); 3]; 3] };
    for a in 0..3 {
        let d = rich([est[0].0[a], est[1].0[a], est[2].0[a]]);
        // −iħ ∂g, real part
        m.m1[a] = hbar * d.im;
        for b in 0..3 {
            let d2 = rich([est[0].1[a][b], est[1].1[a][b], est[2].1[a][b]]);
            m.m2[a][b] = -hbar * hbar * d2.re;
        }
    }
    m
}

fn require_off_axis<T: Real>(system: SystemVariant, kind: WignerKind, r: Vec3<T>, params: &ModelParams<T>) -> Result<()> {
    let singular = system.has_vortex() || (kind == WignerKind::GaugeFw && system.has_gauge_string());
    if singular && !(r.rho() >= params.sigma_r * T::lit(crate::phase_model::AXIS_EXCLUSION)) {
        return Err(Error::AxisSingular { what: "momentum moments", rho: r.rho().to_f64_lossy() });
    }
    Ok(())
}

/// Momentum moments of the (kind, system) transform at `r` (t = 0).
pub fn momentum_moments<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    r: Vec3<T>,
    params: &ModelParams<T>,
) -> Result<MomentumMoments<T>> {
    if !r.is_finite() {
        return Err(Error::InvalidSpec("position must be finite".into()));
    }
    require_off_axis(system, kind, r, params)?;
    if is_gaussian_in_momentum(kind, system) {
        let center = gaussian_momentum_center(kind, system, r, params);
        let spec = TransformSpec::default();
        let density = |p: Vec3<T>| {
            catalogue_transform(kind, system, PhasePoint::new(r, p), params, EvalRoute::Fast, &spec)
                .map(|v| v.value)
                .unwrap_or_else(|_| T::nan())
        };
        let m = hermite_moments(density, center, params);
        if !m.m0.is_finite() {
            return Err(Error::NonFinite { node: "momentum moments".into() });
        }
        return Ok(m);
    }
    let state = CatalogueState::new(system, *params);
    let pot = CataloguePotential::new(system, *params);
    let a: Option<&dyn VectorPotential<T>> = match kind {
        WignerKind::GaugeFw => Some(&pot),
        WignerKind::StandardW => None,
    };
    let g = |s: Vec3<T>| dressed_density(&state, a, r, s, T::zero(), params);
    let h0 = (params.sigma_r * T::lit(0.1)).min(r.rho() * T::lit(0.05));
    Ok(conjugate_moments(&g, h0, params.hbar))
}

/// ∫ T(r, p) d³p.
pub fn position_marginal<T: Real>(kind: WignerKind, system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<T> {
    Ok(momentum_moments(kind, system, r, params)?.m0)
}

/// Mean of the transform's own momentum variable (canonical p for
/// STANDARD_W, kinetic P for GAUGE_FW).
pub fn mean_momentum_field<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    r: Vec3<T>,
    params: &ModelParams<T>,
) -> Result<Vec3<T>> {
    let m = momentum_moments(kind, system, r, params)?;
    if !(m.m0 > T::zero()) {
        return Err(Error::ZeroDensity { value: m.m0.to_f64_lossy() });
    }
    Ok(m.mean())
}

/// Mean kinetic momentum from either transform: ⟨p⟩ − qA for STANDARD_W.
pub fn kinetic_mean_momentum<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    r: Vec3<T>,
    params: &ModelParams<T>,
) -> Result<Vec3<T>> {
    let mean = mean_momentum_field(kind, system, r, params)?;
    Ok(match kind {
        WignerKind::GaugeFw => mean,
        WignerKind::StandardW => mean - vector_potential_unchecked(system, r, params),
    })
}

// ---------------------------------------------------------------------------
// Energy
// ---------------------------------------------------------------------------

/// How the kinetic and potential parts are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    /// (P²/2m + U)·T summed per point before the r-integration.
    Combined,
    /// Kinetic part integrated on its own (rejected when it diverges).
    Split,
}

/// Resolution of the r-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySpec {
    pub rho_order: usize,
    pub rho_panels: usize,
    pub rho_max_sigmas: f64,
    pub z_order: usize,
    pub phi_count: usize,
}

impl Default for EnergySpec {
    fn default() -> Self {
        Self { rho_order: 16, rho_panels: 8, rho_max_sigmas: 10.0, z_order: 24, phi_count: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    pub total: T,
    /// Kinetic part with its 1/ρ² pole piece moved to the potential side.
    pub kinetic_finite: T,
    /// Potential part without its 1/ρ² pole.
    pub potential_finite: T,
}

/// Panel edges: decades from `lo` up to σ/2, then `uniform` equal panels to `hi`.
fn rho_edges<T: Real>(lo: T, hi: T, sigma: T, uniform: usize) -> Vec<T> {
    let knee = sigma * T::lit(0.5);
    let mut edges = vec![lo];
    let mut x = lo * T::lit(10.0);
    while x < knee {
        edges.push(x);
        x = x * T::lit(10.0);
    }
    let start = if lo < knee {
        edges.push(knee);
        knee
    } else {
        lo
    };
    for k in 1..=uniform {
        edges.push(start + (hi - start) * T::from_usize_lossy(k) / T::from_usize_lossy(uniform));
    }
    edges
}

/// Per-point energy pieces (kinetic, potential, pole·density).
fn energy_density<T: Real>(kind: WignerKind, system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<(T, T, T)> {
    let m = momentum_moments(kind, system, r, params)?;
    // Kinetic momentum is p − qA for W and P itself for f_w.
    let c = match kind {
        WignerKind::StandardW => vector_potential_unchecked(system, r, params),
        WignerKind::GaugeFw => Vec3::zero(),
    };
    let trace = m.m2[0][0] + m.m2[1][1] + m.m2[2][2];
    let kinetic = (trace - T::lit(2.0) * c.dot(m.m1) + c.norm_sqr() * m.m0) / (T::lit(2.0) * params.mass);
    let u = scalar_potential(system, r, params)?;
    Ok((kinetic, u * m.m0, potential_pole_part(system, r, params) * m.m0))
}

fn energy_integral<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    params: &ModelParams<T>,
    spec: &EnergySpec,
    rho_min: T,
) -> Result<[T; 4]> {
    let s = params.sigma_r;
    let edges = rho_edges(rho_min, s * T::lit(spec.rho_max_sigmas), s, spec.rho_panels);
    let mut rho_nodes = Vec::new();
    for w in edges.windows(2) {
        let rule = Rule1D::gauss_legendre(spec.rho_order, w[0], w[1]);
        rho_nodes.extend(rule.nodes.into_iter().zip(rule.weights));
    }
    let z = Rule1D::gauss_hermite(spec.z_order, T::zero(), s);
    let n_phi = spec.phi_count.max(1);
    let rows = par_map(&rho_nodes, |&(rho, wr)| -> Result<[T; 4]> {
        // [combined, kinetic, potential, pole]
        let mut acc = [T::zero(); 4];
        for (&zz, &wz) in z.nodes.iter().zip(&z.weights) {
            for k in 0..n_phi {
                let f = -T::PI() + T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n_phi);
                let w = wr * wz * rho * T::TAU() / T::from_usize_lossy(n_phi);
                let (kin, pot, pole) = energy_density(kind, system, Vec3::from_cylindrical(rho, f, zz), params)?;
                acc[0] = acc[0] + w * (kin + pot);
                acc[1] = acc[1] + w * kin;
                acc[2] = acc[2] + w * pot;
                acc[3] = acc[3] + w * pole;
            }
        }
        Ok(acc)
    });
    let mut total = [T::zero(); 4];
    for row in rows {
        let row = row?;
        for i in 0..4 {
            total[i] = total[i] + row[i];
        }
    }
    Ok(total)
}

/// Mean energy ∬ (P²/2m + U) T d³r d³P of the (kind, system) transform.
pub fn mean_energy<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    params: &ModelParams<T>,
    mode: EnergyMode,
    spec: &EnergySpec,
) -> Result<EnergyReport<T>> {
    let excl = params.axis_radius();
    let [combined, kinetic, potential, pole] = energy_integral(kind, system, params, spec, excl)?;
    if mode == EnergyMode::Split {
        // The kinetic piece alone must not depend on the axis cutoff.
        let coarse = energy_integral(kind, system, params, spec, params.sigma_r * T::lit(1e-3))?;
        let drift = (coarse[1] - kinetic).abs();
        if drift > T::lit(1e-6) * (T::one() + kinetic.abs()) {
            return Err(Error::DivergentSplit { drift: drift.to_f64_lossy() });
        }
        return Ok(EnergyReport { total: kinetic + potential, kinetic_finite: kinetic + pole, potential_finite: potential - pole });
    }
    Ok(EnergyReport { total: combined, kinetic_finite: kinetic + pole, potential_finite: potential - pole })
}

// ---------------------------------------------------------------------------
// Pressure
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureDiag<T> {
    /// Position density f(r) = ∫f_w d³P.
    pub density: T,
    /// ⟨P⟩.
    pub mean: Vec3<T>,
    /// ∫(P_a − ⟨P_a⟩)² f_w d³P.
    pub momentum: Vec3<T>,
    /// The same in velocity variables (divided by m²).
    pub velocity: Vec3<T>,
    /// ∫P_a² f_w d³P.
    pub second_moment: Vec3<T>,
}

/// Diagonal pressure tensor of f_w for `system` at `r`.
pub fn pressure_tensor_diag<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<PressureDiag<T>> {
    let m = momentum_moments(WignerKind::GaugeFw, system, r, params)?;
    let c = m.central();
    let momentum = Vec3::new(c[0][0], c[1][1], c[2][2]);
    let m2 = params.mass * params.mass;
    Ok(PressureDiag {
        density: m.m0,
        mean: m.mean(),
        momentum,
        velocity: momentum * (T::one() / m2),
        second_moment: Vec3::new(m.m2[0][0], m.m2[1][1], m.m2[2][2]),
    })
}

/// Velocity-normalised pressure tensor of the Gaussian state.
fn velocity_pressure<T: Real>(r: Vec3<T>, params: &ModelParams<T>) -> ([[T; 3]; 3], T) {
    let m = hermite_moments(|p| wigner_w_em_closed(PhasePoint::new(r, p), params), Vec3::zero(), params);
    let c = m.central();
    let m2 = params.mass * params.mass;
    let mut out = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            out[a][b] = c[a][b] / m2;
        }
    }
    (out, m.m0)
}

/// `((1/m)∇Q, (1/f)∂_λ P_kλ)`; the second uses finite differences of the
/// momentum-integrated Gaussian transform.
pub fn quantum_pressure_check<T: Real>(r: Vec3<T>, params: &ModelParams<T>) -> (Vec3<T>, Vec3<T>) {
    let s2 = params.sigma_r * params.sigma_r;
    let lhs = r * (-params.hbar * params.hbar / (T::lit(4.0) * params.mass * params.mass * s2 * s2));
    let (_, f) = velocity_pressure(r, params);
    let h0 = params.sigma_r * T::lit(0.05);
    let mut rhs = Vec3::zero();
    for lam in 0..3 {
        let d = |h: T| -> [T; 3] {
            let mut e = Vec3::zero();
            e[lam] = h;
            let (pp, _) = velocity_pressure(r + e, params);
            let (pm, _) = velocity_pressure(r - e, params);
            [0, 1, 2].map(|k| (pp[k][lam] - pm[k][lam]) / (T::lit(2.0) * h))
        };
        let (d0, d1, d2) = (d(h0), d(h0 * T::lit(0.5)), d(h0 * T::lit(0.25)));
        for k in 0..3 {
            let r1 = (d1[k] * T::lit(4.0) - d0[k]) / T::lit(3.0);
            let r2 = (d2[k] * T::lit(4.0) - d1[k]) / T::lit(3.0);
            rhs[k] = rhs[k] + (r2 * T::lit(16.0) - r1) / T::lit(15.0);
        }
    }
    (lhs, rhs * (T::one() / f))
}

// ---------------------------------------------------------------------------
// Momentum distributions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    /// ∫f_w d³r for EM_A1.
    FwA1,
    /// ∫f_w d³r for EM_A2.
    FwA2,
    /// |Ψ̃^(EM)|².
    Gaussian,
    /// Numerical r-integral of f_w.
    Numeric,
}

impl std::str::FromStr for DistributionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fw-a1" | "fw_a1" => Ok(Self::FwA1),
            "fw-a2" | "fw_a2" => Ok(Self::FwA2),
            "gaussian" => Ok(Self::Gaussian),
            "numeric" => Ok(Self::Numeric),
            other => Err(Error::InvalidSpec(format!("unknown distribution '{other}'"))),
        }
    }
}

/// Resolution of numerical r-integrals over vortex transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalSpec<T> {
    pub rho_order: usize,
    pub rho_panels: usize,
    pub phi_count: usize,
    pub gauss_order: usize,
    pub transform: TransformSpec<T>,
}

impl<T: Real> Default for MarginalSpec<T> {
    fn default() -> Self {
        Self {
            rho_order: 12,
            rho_panels: 3,
            phi_count: 12,
            gauss_order: 24,
            transform: TransformSpec::default().with_rel_tol(T::lit(1e-9)),
        }
    }
}

fn gaussian_distribution<T: Real>(p: Vec3<T>, params: &ModelParams<T>) -> T {
    let s = params.sigma_r;
    let h = params.hbar;
    (s * T::TAU().sqrt() / (T::PI() * h)).powi(3) * (-T::lit(2.0) * s * s * p.norm_sqr() / (h * h)).exp()
}

/// Closed momentum distribution `dist` for `system` at kinetic momentum `p`.
pub fn momentum_distribution<T: Real>(
    dist: DistributionKind,
    system: SystemVariant,
    p: Vec3<T>,
    params: &ModelParams<T>,
) -> Result<T> {
    let s = params.sigma_r;
    let h = params.hbar;
    let mismatch = || Err(Error::Unsupported(format!("distribution {dist:?} does not belong to system {system}")));
    match dist {
        DistributionKind::FwA1 => {
            if system != SystemVariant::EmA1 {
                return mismatch();
            }
            let p_rho = p.rho();
            let a = s * s * p_rho * p_rho / (h * h);
            // ∫_0^{π/2} e^{−a cos²φ} cos²φ dφ, written in ψ = π/2 − φ and cut where
            // e^{−a sin²ψ} is below e^{−64} so large |P| stays resolved.
            let (x, w) = gauss_legendre_f64(48);
            let upper = if a > T::lit(64.0) { T::lit(8.0) / a.sqrt() } else { T::FRAC_PI_2() };
            let half = upper * T::lit(0.5);
            let inner = x.iter().zip(&w).fold(T::zero(), |acc, (&t, &wt)| {
                let s2 = (half * (T::one() + T::lit(t))).sin().powi(2);
                acc + T::lit(wt) * half * (-a * s2).exp() * s2
            });
            let pre = T::lit(32.0) * s.powi(5) / (T::PI() * T::TAU().powf(T::lit(1.5)) * h.powi(5));
            Ok(pre * p_rho * p_rho * (-T::lit(2.0) * s * s * p.z * p.z / (h * h)).exp() * inner * inner)
        }
        DistributionKind::FwA2 => {
            if system != SystemVariant::EmA2 {
                return mismatch();
            }
            let e2 = T::one() + params.eta * params.eta;
            let perp = p.x * p.x + p.y * p.y;
            let pre = (T::PI() * h).powi(-3) * s * T::TAU().sqrt() * T::TAU() * s * s / e2;
            Ok(pre * (-T::lit(2.0) * s * s * (p.z * p.z + perp / e2) / (h * h)).exp())
        }
        DistributionKind::Gaussian => match system {
            SystemVariant::EmA1 | SystemVariant::EmA2 | SystemVariant::EmA3 => Ok(gaussian_distribution(p, params)),
            _ => mismatch(),
        },
        DistributionKind::Numeric => momentum_marginal(WignerKind::GaugeFw, system, p, params, &MarginalSpec::default()),
    }
}

/// ∫ T(r, p) d³r by quadrature in r.
pub fn momentum_marginal<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    p: Vec3<T>,
    params: &ModelParams<T>,
    spec: &MarginalSpec<T>,
) -> Result<T> {
    let s = params.sigma_r;
    if is_gaussian_in_momentum(kind, system) {
        let rule = Rule1D::gauss_hermite(spec.gauss_order, T::zero(), s);
        let tspec = TransformSpec::default();
        let mut total = T::zero();
        for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
            for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
                for (&z, &wz) in rule.nodes.iter().zip(&rule.weights) {
                    let pt = PhasePoint::new(Vec3::new(x, y, z), p);
                    total = total + wx * wy * wz * catalogue_transform(kind, system, pt, params, EvalRoute::Fast, &tspec)?.value;
                }
            }
        }
        return Ok(total);
    }
    // Vortex transforms: W^(E)(ρ, z, p) with the z-dependence e^{−z²/2σ²}
    // factored out and integrated in closed form.
    let rho_max = s * T::lit(8.0);
    let mut rho_nodes = Vec::new();
    for k in 0..spec.rho_panels {
        let lo = rho_max * T::from_usize_lossy(k) / T::from_usize_lossy(spec.rho_panels);
        let hi = rho_max * T::from_usize_lossy(k + 1) / T::from_usize_lossy(spec.rho_panels);
        let rule = Rule1D::gauss_legendre(spec.rho_order, lo, hi);
        rho_nodes.extend(rule.nodes.into_iter().zip(rule.weights));
    }
    let n_phi = spec.phi_count;
    let mut tasks = Vec::new();
    for &(rho, wr) in &rho_nodes {
        for k in 0..n_phi {
            let phi = -T::PI() + T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n_phi);
            tasks.push((rho, wr, phi));
        }
    }
    let tspec = spec.transform;
    let values = par_map(&tasks, |&(rho, wr, phi)| -> Result<T> {
        let (pr, pp, pz) = p.cylindrical_components(phi);
        let v = wigner_w_e_semianalytic(rho, T::zero(), Vec3::new(pr, pp, pz), params, &tspec)?;
        Ok(wr * rho * v.value * T::TAU() / T::from_usize_lossy(n_phi))
    });
    let mut total = T::zero();
    for v in values {
        total = total + v?;
    }
    Ok(total * s * T::TAU().sqrt())
}

// ---------------------------------------------------------------------------
// Negativity scans
// ---------------------------------------------------------------------------

/// Phase-space region sampled by [`negativity_scan`].
#[derive(Debug, Clone, PartialEq)]
pub enum ScanRegion<T> {
    /// Cartesian box in (x, y, z, p_x, p_y, p_z); axes with count 1 sit at `lower`.
    Box { lower: [T; 6], upper: [T; 6], counts: [usize; 6] },
    /// The (ρ, p_φ) plane at azimuth 0 with fixed z, p_ρ, p_z.
    RhoPphi { rho: Axis<T>, p_phi: Axis<T>, z: T, p_rho: T, p_z: T },
}

impl<T: Real> ScanRegion<T> {
    fn samples(&self) -> Result<(Vec<NamedAxis<T>>, Vec<PhasePoint<T>>)> {
        match self {
            ScanRegion::Box { lower, upper, counts } => {
                const NAMES: [&str; 6] = ["x", "y", "z", "px", "py", "pz"];
                let mut axes = Vec::new();
                for i in 0..6 {
                    let values = if counts[i] <= 1 {
                        vec![lower[i]]
                    } else {
                        Axis::new(lower[i], upper[i], counts[i])?.coords()
                    };
                    axes.push(NamedAxis { name: NAMES[i].to_string(), values });
                }
                let total: usize = axes.iter().map(|a| a.values.len()).product();
                let field = SampledField { axes: axes.clone(), values: vec![T::zero(); total] };
                let pts = (0..total).map(|n| PhasePoint::from_slice(&field.coords_of(n))).collect();
                Ok((axes, pts))
            }
            ScanRegion::RhoPphi { rho, p_phi, z, p_rho, p_z } => {
                let axes = vec![
                    NamedAxis { name: "rho".into(), values: rho.coords() },
                    NamedAxis { name: "p_phi".into(), values: p_phi.coords() },
                ];
                let mut pts = Vec::new();
                for &r in &axes[0].values {
                    for &pp in &axes[1].values {
                        pts.push(PhasePoint::new(Vec3::new(r, T::zero(), *z), Vec3::new(*p_rho, pp, *p_z)));
                    }
                }
                Ok((axes, pts))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport<T> {
    pub min_value: T,
    pub argmin: PhasePoint<T>,
    pub negative_fraction: T,
    pub n_samples: usize,
    pub peak: T,
    /// Threshold below which a sample counts as negative.
    pub tolerance: T,
}

/// Relative negativity threshold: 1e−8 of the peak value in the region.
pub const NEGATIVITY_REL_TOL: f64 = 1e-8;

/// Samples the (kind, system) transform over `region`.
pub fn negativity_scan<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    region: &ScanRegion<T>,
    params: &ModelParams<T>,
    route: EvalRoute,
    spec: &TransformSpec<T>,
) -> Result<(NegativityReport<T>, SampledField<T>)> {
    let (axes, pts) = region.samples()?;
    if pts.is_empty() {
        return Err(Error::InvalidSpec("empty scan region".into()));
    }
    let values = par_map(&pts, |pt| catalogue_transform(kind, system, *pt, params, route, spec).map(|v| v.value));
    let values: Vec<T> = values.into_iter().collect::<Result<_>>()?;
    let (mut imin, mut peak) = (0, T::neg_infinity());
    for (i, &v) in values.iter().enumerate() {
        if v < values[imin] {
            imin = i;
        }
        peak = peak.max(v);
    }
    let tol = T::lit(NEGATIVITY_REL_TOL) * peak.abs().max(T::min_positive_value());
    let negatives = values.iter().filter(|&&v| v < -tol).count();
    let report = NegativityReport {
        min_value: values[imin],
        argmin: pts[imin],
        negative_fraction: T::from_usize_lossy(negatives) / T::from_usize_lossy(values.len()),
        n_samples: values.len(),
        peak,
        tolerance: tol,
    };
    Ok((report, SampledField::new(axes, values)?))
}

/// Largest value any of the transforms can take, for scale-free reporting.
pub fn transform_peak_bound<T: Real>(params: &ModelParams<T>) -> T {
    wigner_bound(params)
}

/// |Ψ(r)|², shared by every catalogued state.
pub fn position_density_exact<T: Real>(r: Vec3<T>, params: &ModelParams<T>) -> T {
    position_density(r, params)
}
