//! Standard Wigner transform, the gauge-invariant Weyl–Stratonovich transform,
//! their closed forms for the catalogued states, and gauge transformations.
//!
//! Both transforms are evaluated as
//! `(2πħ)^{-3} ∫ Ψ(r+s/2) Ψ̄(r−s/2) e^{−i L(r,s)/ħ} e^{−i p·s/ħ} d³s`
//! where `L = q∫A·dr` along the straight segment (zero for the standard one).

use crate::error::{Error, Result};
use crate::numerics::adaptive::{breakpoints, integrate_adaptive, AdaptiveSpec};
use crate::numerics::quadrature::{gauss_legendre_f64, QuadKind, QuadratureSpec, Rule1D};
use crate::phase_model::{
    gaussian_amplitude, psi_unchecked, vector_potential_unchecked, ModelParams, PhasePoint, SystemVariant,
};
use crate::scalar::Real;
use crate::vec3::Vec3;
use num_complex::Complex;
use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

/// Which transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WignerKind {
    /// Standard Wigner function over canonical momentum.
    StandardW,
    /// Weyl–Stratonovich transform over kinetic momentum.
    GaugeFw,
}

impl fmt::Display for WignerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::StandardW => "w",
            Self::GaugeFw => "fw",
        })
    }
}

impl FromStr for WignerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "w" | "standard" | "standard-w" => Ok(Self::StandardW),
            "fw" | "gauge" | "gauge-fw" => Ok(Self::GaugeFw),
            other => Err(Error::InvalidSpec(format!("unknown kind '{other}' (expected w or fw)"))),
        }
    }
}

/// A transform value with its imaginary part kept as an accuracy diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue<T> {
    pub value: T,
    pub imag: T,
}

impl<T: Real> TransformValue<T> {
    pub fn real(value: T) -> Self {
        Self { value, imag: T::zero() }
    }
}

/// Largest possible |W| for a pure state: (πħ)^{-3}.
pub fn wigner_bound<T: Real>(params: &ModelParams<T>) -> T {
    (T::PI() * params.hbar).powi(-3)
}

// ---------------------------------------------------------------------------
// Wave functions, potentials and gauge functions
// ---------------------------------------------------------------------------

pub trait WaveFunction<T: Real>: Sync {
    /// Ψ(r, t). Must be finite everywhere, including on the z-axis.
    fn amplitude(&self, r: Vec3<T>, t: T) -> Complex<T>;
    /// True when Ψ has a phase singularity on the z-axis.
    fn axis_singular(&self) -> bool {
        false
    }
}

pub trait VectorPotential<T: Real>: Sync {
    /// qA(r); finite off the axis.
    fn q_a(&self, r: Vec3<T>) -> Vec3<T>;
    /// q∫A·dr' from r−s/2 to r+s/2, without any axis check.
    fn line_integral(&self, r: Vec3<T>, s: Vec3<T>) -> T {
        gl_segment(|x| self.q_a(x).dot(s), r, s)
    }
    /// True when A is singular on the z-axis.
    fn axis_singular(&self) -> bool {
        false
    }
}

/// A gauge function χ(r); `value`/`gradient` are χ and ∇χ (not multiplied by q).
pub trait GaugeFunction<T: Real>: Sync {
    fn value(&self, r: Vec3<T>) -> T;
    fn gradient(&self, r: Vec3<T>) -> Vec3<T>;
    /// ∫∇χ·dr' along the segment; Gauss–Legendre unless overridden.
    fn segment_integral(&self, r: Vec3<T>, s: Vec3<T>) -> T {
        gl_segment(|x| self.gradient(x).dot(s), r, s)
    }
    fn axis_singular(&self) -> bool {
        false
    }
}

/// (1/2)∫_{−1}^{1} h(r + τs/2) dτ with a 16-point Gauss–Legendre rule
/// (`h` already contains the factor `·s`).
fn gl_segment<T: Real>(h: impl Fn(Vec3<T>) -> T, r: Vec3<T>, s: Vec3<T>) -> T {
    let (x, w) = gauss_legendre_f64(16);
    let half = s * T::lit(0.5);
    x.iter()
        .zip(&w)
        .fold(T::zero(), |acc, (&t, &wt)| acc + T::lit(wt) * h(r + half * T::lit(t)))
        * T::lit(0.5)
}

/// Catalogued wave function of a system.
#[derive(Debug, Clone, Copy)]
pub struct CatalogueState<T> {
    pub system: SystemVariant,
    pub params: ModelParams<T>,
}

impl<T: Real> CatalogueState<T> {
    pub fn new(system: SystemVariant, params: ModelParams<T>) -> Self {
        Self { system, params }
    }
    /// Gaussian state Ψ^(EM).
    pub fn em(params: ModelParams<T>) -> Self {
        Self::new(SystemVariant::EmA1, params)
    }
    /// Vortex state Ψ^(E).
    pub fn e(params: ModelParams<T>) -> Self {
        Self::new(SystemVariant::ESystem, params)
    }
}

impl<T: Real> WaveFunction<T> for CatalogueState<T> {
    fn amplitude(&self, r: Vec3<T>, t: T) -> Complex<T> {
        psi_unchecked(self.system, r, t, &self.params)
    }
    fn axis_singular(&self) -> bool {
        self.system.has_vortex()
    }
}

/// Sum of principal azimuth increments along the xy-projection of the
/// segment `a → b`, split into `pieces` equal parts.
pub fn winding_angle<T: Real>(a: Vec3<T>, b: Vec3<T>, pieces: usize) -> T {
    let n = pieces.max(1);
    let mut total = T::zero();
    let mut prev = a;
    for k in 1..=n {
        let t = T::from_usize_lossy(k) / T::from_usize_lossy(n);
        let next = a + (b - a) * t;
        let cross = prev.x * next.y - prev.y * next.x;
        let dot = prev.x * next.x + prev.y * next.y;
        total = total + cross.atan2(dot);
        prev = next;
    }
    total
}

/// Catalogued vector potential of a system.
#[derive(Debug, Clone, Copy)]
pub struct CataloguePotential<T> {
    pub system: SystemVariant,
    pub params: ModelParams<T>,
}

impl<T: Real> CataloguePotential<T> {
    pub fn new(system: SystemVariant, params: ModelParams<T>) -> Self {
        Self { system, params }
    }
}

impl<T: Real> VectorPotential<T> for CataloguePotential<T> {
    fn q_a(&self, r: Vec3<T>) -> Vec3<T> {
        vector_potential_unchecked(self.system, r, &self.params)
    }
    fn line_integral(&self, r: Vec3<T>, s: Vec3<T>) -> T {
        let h = self.params.hbar;
        match self.system {
            SystemVariant::ESystem => T::zero(),
            // Linear potential: the midpoint rule is exact.
            SystemVariant::EmA2 => s.dot(self.q_a(r)),
            SystemVariant::EmA1 => -h * winding_angle(r - s * T::lit(0.5), r + s * T::lit(0.5), 4),
            SystemVariant::EmA3 => h * winding_angle(r - s * T::lit(0.5), r + s * T::lit(0.5), 4),
        }
    }
    fn axis_singular(&self) -> bool {
        self.system.has_gauge_string()
    }
}

/// Distance from the z-axis to the xy-projection of the segment a → b.
fn segment_axis_distance<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    let (ax, ay, dx, dy) = (a.x, a.y, b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > T::zero() { (-(ax * dx + ay * dy) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
    (ax + dx * t).hypot(ay + dy * t)
}

/// q∫A·dr' along r−s/2 → r+s/2; refuses segments that pass through the
/// excluded tube around a gauge string.
pub fn gauge_line_integral<T: Real>(
    a: &dyn VectorPotential<T>,
    r: Vec3<T>,
    s: Vec3<T>,
    params: &ModelParams<T>,
) -> Result<T> {
    if a.axis_singular() {
        let half = s * T::lit(0.5);
        let d = segment_axis_distance(r - half, r + half);
        if d < params.axis_radius() {
            return Err(Error::PathCrossesGaugeString { distance: d.to_f64_lossy() });
        }
    }
    Ok(a.line_integral(r, s))
}

/// Ψ(r+s/2) Ψ̄(r−s/2) e^{−iL/ħ}, the integrand before the Fourier factor.
pub fn dressed_density<T: Real>(
    psi: &dyn WaveFunction<T>,
    a: Option<&dyn VectorPotential<T>>,
    r: Vec3<T>,
    s: Vec3<T>,
    t: T,
    params: &ModelParams<T>,
) -> Complex<T> {
    let half = s * T::lit(0.5);
    let rho = psi.amplitude(r + half, t) * psi.amplitude(r - half, t).conj();
    match a {
        Some(pot) => rho * Complex::from_polar(T::one(), -pot.line_integral(r, s) / params.hbar),
        None => rho,
    }
}

// ---------------------------------------------------------------------------
// Quadrature plumbing
// ---------------------------------------------------------------------------

/// Controls for the s-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec<T> {
    /// Gauss–Hermite order per s-axis (only s_z for axis-singular integrands).
    pub order: usize,
    /// Target error relative to the bound (πħ)^{-3}.
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for TransformSpec<T> {
    fn default() -> Self {
        Self { order: 32, rel_tol: T::default_rel_tol(), max_intervals: 400 }
    }
}

impl<T: Real> TransformSpec<T> {
    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_rel_tol(mut self, tol: T) -> Self {
        self.rel_tol = tol;
        self
    }

    /// Takes the order from a Gauss–Hermite quadrature spec.
    pub fn from_quadrature(spec: &QuadratureSpec<T>) -> Result<Self> {
        spec.validate()?;
        if spec.kind != QuadKind::GaussHermite {
            return Err(Error::InvalidSpec("transforms use Gauss-Hermite s-quadrature".into()));
        }
        Ok(Self::default().with_order(spec.order))
    }

    fn adaptive(&self, abs_tol: T) -> AdaptiveSpec<T> {
        AdaptiveSpec::new(abs_tol, self.rel_tol).with_max_intervals(self.max_intervals)
    }
}

/// Smallest Gauss–Hermite order that resolves e^{−i p s/ħ} under the
/// e^{−s²/8σ²} weight to ~1e−8 (validated empirically against the closed form).
pub fn required_hermite_order<T: Real>(p: T, params: &ModelParams<T>) -> usize {
    let x = (params.sigma_r * p / params.hbar).abs().to_f64_lossy();
    (4.0 * x * x).ceil() as usize + 8
}

fn check_oscillation<T: Real>(order: usize, p: T, params: &ModelParams<T>) -> Result<()> {
    let need = required_hermite_order(p, params);
    if order < need {
        return Err(Error::Oscillation { order, required: need, p: p.to_f64_lossy() });
    }
    Ok(())
}

/// Tensor Gauss–Hermite s-integral for smooth integrands.
fn tensor_transform<T: Real>(
    g: &dyn Fn(Vec3<T>) -> Complex<T>,
    p: Vec3<T>,
    params: &ModelParams<T>,
    spec: &TransformSpec<T>,
) -> Result<TransformValue<T>> {
    for i in 0..3 {
        check_oscillation(spec.order, p[i], params)?;
    }
    let rule = Rule1D::gauss_hermite(spec.order, T::zero(), T::lit(2.0) * params.sigma_r);
    let n = rule.len();
    let h = params.hbar;
    let phase = |pi: T| -> Vec<Complex<T>> {
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&s, &w)| Complex::from_polar(w, -pi * s / h))
            .collect()
    };
    let (fx, fy, fz) = (phase(p.x), phase(p.y), phase(p.z));
    let mut total = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        let mut sy = Complex::new(T::zero(), T::zero());
        for j in 0..n {
            let mut sz = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                let s = Vec3::new(rule.nodes[i], rule.nodes[j], rule.nodes[k]);
                let v = g(s);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite { node: format!("s = ({}, {}, {})", s.x, s.y, s.z) });
                }
                sz = sz + v * fz[k];
            }
            sy = sy + sz * fy[j];
        }
        total = total + sy * fx[i];
    }
    let norm = (T::TAU() * h).powi(-3);
    Ok(TransformValue { value: total.re * norm, imag: total.im * norm })
}

/// Radius beyond which e^{−s²/8σ²} is below 1e−16.
fn s_cutoff<T: Real>(params: &ModelParams<T>) -> T {
    T::lit(8.0_f64.sqrt() * 6.1) * params.sigma_r
}

/// Nested adaptive integral over the transverse s-plane,
/// `∫₀^R ρ_s dρ_s ∫_{ψ0−π}^{ψ0+π} dψ h(ρ_s, ψ)`, with breakpoints at
/// ρ_s = 2ρ and ψ = ψ0 (and the end points ψ0 ± π).
fn polar_integral<T: Real>(
    h: &dyn Fn(T, T) -> Complex<T>,
    rho: T,
    psi0: T,
    cutoff: T,
    abs_tol: T,
    spec: &TransformSpec<T>,
) -> Result<Complex<T>> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_tol = abs_tol / (T::lit(8.0) * cutoff * cutoff);
    let inner_spec = spec.adaptive(inner_tol);
    let outer_spec = spec.adaptive(abs_tol);
    let angles = [psi0 - T::PI(), psi0, psi0 + T::PI()];
    let radial = |rs: T| -> Complex<T> {
        if failure.borrow().is_some() || rs == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        match integrate_adaptive(|psi: T| h(rs, psi), &angles, &inner_spec) {
            Ok(e) => e.value * rs,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                Complex::new(T::zero(), T::zero())
            }
        }
    };
    let pts = breakpoints(T::zero(), cutoff, &[T::lit(2.0) * rho]);
    let out = integrate_adaptive(radial, &pts, &outer_spec);
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    Ok(out?.value)
}

/// Axial-polar s-integral for integrands with a vortex line on the z-axis.
fn axial_transform<T: Real>(
    g: &dyn Fn(Vec3<T>) -> Complex<T>,
    r: Vec3<T>,
    p: Vec3<T>,
    params: &ModelParams<T>,
    spec: &TransformSpec<T>,
) -> Result<TransformValue<T>> {
    check_oscillation(spec.order, p.z, params)?;
    let h = params.hbar;
    let zrule = Rule1D::gauss_hermite(spec.order, T::zero(), T::lit(2.0) * params.sigma_r);
    let zphase: Vec<Complex<T>> = zrule
        .nodes
        .iter()
        .zip(&zrule.weights)
        .map(|(&s, &w)| Complex::from_polar(w, -p.z * s / h))
        .collect();
    let integrand = |rs: T, psi: T| -> Complex<T> {
        let (sn, cs) = psi.sin_cos();
        let (sx, sy) = (rs * cs, rs * sn);
        let transverse = Complex::from_polar(T::one(), -(p.x * sx + p.y * sy) / h);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, &sz) in zrule.nodes.iter().enumerate() {
            acc = acc + g(Vec3::new(sx, sy, sz)) * zphase[k];
        }
        acc * transverse
    };
    let norm = (T::TAU() * h).powi(-3);
    // Absolute target on the raw integral so the result meets rel_tol · (πħ)^{-3}.
    let abs_tol = spec.rel_tol * wigner_bound(params) / norm;
    let total = polar_integral(&integrand, r.rho(), r.phi(), s_cutoff(params), abs_tol, spec)?;
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::NonFinite { node: "axial-polar transform".into() });
    }
    Ok(TransformValue { value: total.re * norm, imag: total.im * norm })
}

fn transform<T: Real>(
    psi: &dyn WaveFunction<T>,
    a: Option<&dyn VectorPotential<T>>,
    point: PhasePoint<T>,
    t: T,
    params: &ModelParams<T>,
    spec: &TransformSpec<T>,
) -> Result<TransformValue<T>> {
    if !(point.r.is_finite() && point.p.is_finite()) {
        return Err(Error::InvalidSpec("phase point must be finite".into()));
    }
    let r = point.r;
    // On the string every segment through r crosses it; the value there is a limit only.
    if a.map(|x| x.axis_singular()).unwrap_or(false) && r.rho() < params.axis_radius() {
        return Err(Error::AxisSingular { what: "gauge-string transform", rho: r.rho().to_f64_lossy() });
    }
    let g = |s: Vec3<T>| dressed_density(psi, a, r, s, t, params);
    let singular = psi.axis_singular() || a.map(|x| x.axis_singular()).unwrap_or(false);
    if singular {
        axial_transform(&g, r, point.p, params, spec)
    } else {
        tensor_transform(&g, point.p, params, spec)
    }
}

/// Standard Wigner function W(r, p) of `psi` (p canonical).
pub fn wigner_w<T: Real>(
    psi: &dyn WaveFunction<T>,
    point: PhasePoint<T>,
    t: T,
    params: &ModelParams<T>,
    spec: &TransformSpec<T>,
) -> Result<TransformValue<T>> {
    transform(psi, None, point, t, params, spec)
}

/// Weyl–Stratonovich transform f_w(r, P) (P kinetic).
pub fn wigner_fw<T: Real>(
    psi: &dyn WaveFunction<T>,
    a: &dyn VectorPotential<T>,
    point: PhasePoint<T>,
    t: T,
    params: &ModelParams<T>,
    spec: &TransformSpec<T>,
) -> Result<TransformValue<T>> {
    transform(psi, Some(a), point, t, params, spec)
}

// ---------------------------------------------------------------------------
// Closed and semianalytic forms
// ---------------------------------------------------------------------------

/// Gaussian phase-space density (πħ)^{-3} e^{−r²/2σ² − 2σ²k²/ħ²}.
fn gaussian_phase_density<T: Real>(r: Vec3<T>, k: Vec3<T>, params: &ModelParams<T>) -> T {
    let s2 = params.sigma_r * params.sigma_r;
    let h2 = params.hbar * params.hbar;
    wigner_bound(params) * (-r.norm_sqr() / (T::lit(2.0) * s2) - T::lit(2.0) * s2 * k.norm_sqr() / h2).exp()
}

/// W of the Gaussian state Ψ^(EM).
pub fn wigner_w_em_closed<T: Real>(point: PhasePoint<T>, params: &ModelParams<T>) -> T {
    gaussian_phase_density(point.r, point.p, params)
}

/// Closed f_w for EM_A3 (Gaussian in P) and EM_A2 (Gaussian in P + qA₂).
pub fn wigner_fw_closed<T: Real>(system: SystemVariant, point: PhasePoint<T>, params: &ModelParams<T>) -> Result<T> {
    match system {
        SystemVariant::EmA3 => Ok(gaussian_phase_density(point.r, point.p, params)),
        SystemVariant::EmA2 => {
            let shift = vector_potential_unchecked(system, point.r, params);
            Ok(gaussian_phase_density(point.r, point.p + shift, params))
        }
        other => Err(Error::Unsupported(format!("no closed-form f_w for system {other}"))),
    }
}

/// W of the vortex state Ψ^(E) from the reduced two-dimensional integral.
///
/// `p_cyl = (p_ρ, p_φ, p_z)` in the frame of the point's azimuth. The s_z
/// integral is done analytically; the transverse plane uses ρ_s = 2ρρ' and
/// the closed form e^{i(φ₊−φ₋)} = (1 − ρ'² + 2iρ' sin ψ)/|·|.
pub fn wigner_w_e_semianalytic<T: Real>(
    rho: T,
    z: T,
    p_cyl: Vec3<T>,
    params: &ModelParams<T>,
    spec: &TransformSpec<T>,
) -> Result<TransformValue<T>> {
    if !(rho >= params.axis_radius()) {
        return Err(Error::AxisSingular { what: "semianalytic W^(E)", rho: rho.to_f64_lossy() });
    }
    let s = params.sigma_r;
    let h = params.hbar;
    let (p_rho, p_phi, p_z) = (p_cyl.x, p_cyl.y, p_cyl.z);
    let integrand = |rs: T, psi: T| -> Complex<T> {
        let rp = rs / (T::lit(2.0) * rho);
        let (sn, cs) = psi.sin_cos();
        let num = Complex::new(T::one() - rp * rp, T::lit(2.0) * rp * sn);
        let norm = num.norm();
        let vortex = if norm > T::zero() { num / norm } else { Complex::new(T::zero(), T::zero()) };
        let envelope = (-rs * rs / (T::lit(8.0) * s * s)).exp();
        vortex * Complex::from_polar(envelope, -rs * (p_rho * cs + p_phi * sn) / h)
    };
    let prefactor = (-(rho * rho + z * z) / (T::lit(2.0) * s * s) - T::lit(2.0) * s * s * p_z * p_z / (h * h)).exp()
        / (T::lit(8.0) * T::PI().powi(4) * h.powi(3) * s * s);
    let abs_tol = spec.rel_tol * wigner_bound(params) * T::lit(8.0) * T::PI().powi(4) * h.powi(3) * s * s;
    let total = polar_integral(&integrand, rho, T::zero(), s_cutoff(params), abs_tol, spec)?;
    Ok(TransformValue { value: total.re * prefactor, imag: total.im * prefactor })
}

/// Evaluation strategy for catalogued transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalRoute {
    /// Closed forms where they exist, otherwise the semianalytic integral.
    Fast,
    /// The defining s-integral with the catalogued Ψ and A.
    Direct,
}

/// The transform of kind `kind` for the catalogued system at `point`
/// (canonical p for STANDARD_W, kinetic P for GAUGE_FW), at t = 0.
pub fn catalogue_transform<T: Real>(
    kind: WignerKind,
    system: SystemVariant,
    point: PhasePoint<T>,
    params: &ModelParams<T>,
    route: EvalRoute,
    spec: &TransformSpec<T>,
) -> Result<TransformValue<T>> {
    let state = CatalogueState::new(system, *params);
    if route == EvalRoute::Direct {
        return match kind {
            WignerKind::StandardW => wigner_w(&state, point, T::zero(), params, spec),
            WignerKind::GaugeFw => {
                let pot = CataloguePotential::new(system, *params);
                wigner_fw(&state, &pot, point, T::zero(), params, spec)
            }
        };
    }
    let semianalytic = |p: Vec3<T>| {
        let phi = point.r.phi();
        let (pr, pp, pz) = p.cylindrical_components(phi);
        wigner_w_e_semianalytic(point.r.rho(), point.r.z, Vec3::new(pr, pp, pz), params, spec)
    };
    match (kind, system) {
        (WignerKind::StandardW, SystemVariant::EmA1 | SystemVariant::EmA2) => {
            Ok(TransformValue::real(wigner_w_em_closed(point, params)))
        }
        (WignerKind::StandardW, SystemVariant::ESystem | SystemVariant::EmA3) => semianalytic(point.p),
        // f_w of (Ψ^(EM), A₁) is W^(E) at the kinetic momentum; with A = 0 f_w is W.
        (WignerKind::GaugeFw, SystemVariant::EmA1 | SystemVariant::ESystem) => semianalytic(point.p),
        (WignerKind::GaugeFw, SystemVariant::EmA2 | SystemVariant::EmA3) => {
            Ok(TransformValue::real(wigner_fw_closed(system, point, params)?))
        }
    }
}

/// True when the (kind, system) transform is a Gaussian in momentum.
pub fn is_gaussian_in_momentum(kind: WignerKind, system: SystemVariant) -> bool {
    matches!(
        (kind, system),
        (WignerKind::StandardW, SystemVariant::EmA1 | SystemVariant::EmA2)
            | (WignerKind::GaugeFw, SystemVariant::EmA2 | SystemVariant::EmA3)
    )
}

/// Momentum centre of the Gaussian transforms at `r`.
pub(crate) fn gaussian_momentum_center<T: Real>(kind: WignerKind, system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Vec3<T> {
    match (kind, system) {
        (WignerKind::GaugeFw, SystemVariant::EmA2) => -vector_potential_unchecked(system, r, params),
        _ => Vec3::zero(),
    }
}

/// |Ψ^(EM)(r)|², the common position density.
pub(crate) fn position_density<T: Real>(r: Vec3<T>, params: &ModelParams<T>) -> T {
    let a = gaussian_amplitude(r, params);
    a * a
}

// ---------------------------------------------------------------------------
// Gauge transformations
// ---------------------------------------------------------------------------

/// Ψ' = Ψ e^{iqχ/ħ}.
pub struct GaugedWave<'a, T> {
    base: &'a dyn WaveFunction<T>,
    chi: &'a dyn GaugeFunction<T>,
    params: ModelParams<T>,
}

impl<T: Real> WaveFunction<T> for GaugedWave<'_, T> {
    fn amplitude(&self, r: Vec3<T>, t: T) -> Complex<T> {
        let q = self.params.charge;
        self.base.amplitude(r, t) * Complex::from_polar(T::one(), q * self.chi.value(r) / self.params.hbar)
    }
    fn axis_singular(&self) -> bool {
        self.base.axis_singular() || self.chi.axis_singular()
    }
}

/// qA' = qA + q∇χ.
pub struct GaugedPotential<'a, T> {
    base: Option<&'a dyn VectorPotential<T>>,
    chi: &'a dyn GaugeFunction<T>,
    params: ModelParams<T>,
}

impl<T: Real> VectorPotential<T> for GaugedPotential<'_, T> {
    fn q_a(&self, r: Vec3<T>) -> Vec3<T> {
        let base = self.base.map(|a| a.q_a(r)).unwrap_or_else(Vec3::zero);
        base + self.chi.gradient(r) * self.params.charge
    }
    fn line_integral(&self, r: Vec3<T>, s: Vec3<T>) -> T {
        let base = self.base.map(|a| a.line_integral(r, s)).unwrap_or_else(T::zero);
        base + self.params.charge * self.chi.segment_integral(r, s)
    }
    fn axis_singular(&self) -> bool {
        self.base.map(|a| a.axis_singular()).unwrap_or(false) || self.chi.axis_singular()
    }
}

/// Applies the gauge function χ: (Ψ, A) ↦ (Ψ e^{iqχ/ħ}, A + ∇χ).
pub fn gauge_transform<'a, T: Real>(
    psi: &'a dyn WaveFunction<T>,
    a: Option<&'a dyn VectorPotential<T>>,
    chi: &'a dyn GaugeFunction<T>,
    params: &ModelParams<T>,
) -> (GaugedWave<'a, T>, GaugedPotential<'a, T>) {
    (
        GaugedWave { base: psi, chi, params: *params },
        GaugedPotential { base: a, chi, params: *params },
    )
}

/// χ = c·φ (azimuth); ∇χ = (c/ρ) e_φ. Singular on the z-axis.
#[derive(Debug, Clone, Copy)]
pub struct AzimuthalGauge<T> {
    pub coefficient: T,
}

impl<T: Real> GaugeFunction<T> for AzimuthalGauge<T> {
    fn value(&self, r: Vec3<T>) -> T {
        self.coefficient * r.phi()
    }
    fn gradient(&self, r: Vec3<T>) -> Vec3<T> {
        let rho2 = r.x * r.x + r.y * r.y;
        Vec3::new(-r.y, r.x, T::zero()) * (self.coefficient / rho2)
    }
    fn segment_integral(&self, r: Vec3<T>, s: Vec3<T>) -> T {
        self.coefficient * winding_angle(r - s * T::lit(0.5), r + s * T::lit(0.5), 4)
    }
    fn axis_singular(&self) -> bool {
        true
    }
}

/// Polynomial gauge function of total degree ≤ 3:
/// χ = Σ c_{abc} x^a y^b z^c over the 20 monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicGauge<T> {
    pub terms: Vec<([u32; 3], T)>,
}

impl<T: Real> CubicGauge<T> {
    /// Monomial exponents in a fixed order (20 entries).
    pub fn monomials() -> Vec<[u32; 3]> {
        let mut out = Vec::new();
        for d in 0..=3u32 {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    out.push([a, b, d - a - b]);
                }
            }
        }
        out
    }

    pub fn from_coefficients(coeffs: &[T]) -> Self {
        Self { terms: Self::monomials().into_iter().zip(coeffs.iter().copied()).collect() }
    }
}

impl<T: Real> GaugeFunction<T> for CubicGauge<T> {
    fn value(&self, r: Vec3<T>) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (e, c)| acc + *c * r.x.powi(e[0] as i32) * r.y.powi(e[1] as i32) * r.z.powi(e[2] as i32))
    }
    fn gradient(&self, r: Vec3<T>) -> Vec3<T> {
        let mut g = Vec3::zero();
        let pw = |x: T, n: u32| if n == 0 { T::one() } else { x.powi(n as i32) };
        for (e, c) in &self.terms {
            if e[0] > 0 {
                g.x = g.x + *c * T::lit(e[0] as f64) * pw(r.x, e[0] - 1) * pw(r.y, e[1]) * pw(r.z, e[2]);
            }
            if e[1] > 0 {
                g.y = g.y + *c * T::lit(e[1] as f64) * pw(r.x, e[0]) * pw(r.y, e[1] - 1) * pw(r.z, e[2]);
            }
            if e[2] > 0 {
                g.z = g.z + *c * T::lit(e[2] as f64) * pw(r.x, e[0]) * pw(r.y, e[1]) * pw(r.z, e[2] - 1);
            }
        }
        g
    }
}
