//! Catalogue of the exact stationary states, their potentials and the
//! pointwise checks that they solve the Schrödinger and Hamilton–Jacobi
//! equations.

use crate::error::{Error, Result};
use crate::numerics::diff::{mixed_derivative, DiffStencil};
use crate::numerics::jet::Jet;
use crate::scalar::Real;
use crate::vec3::Vec3;
use num_complex::Complex;
use std::fmt;
use std::str::FromStr;

/// Radius of the excluded tube around the z-axis, in units of `sigma_r`.
pub const AXIS_EXCLUSION: f64 = 1e-6;

/// Physical constants and free parameters. The energy is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    pub hbar: T,
    pub mass: T,
    pub charge: T,
    pub sigma_r: T,
    pub eta: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(hbar: T, mass: T, charge: T, sigma_r: T, eta: T) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("sigma_r", sigma_r)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(charge != T::zero() && charge.is_finite()) {
            return Err(Error::InvalidSpec("charge must be nonzero and finite".into()));
        }
        if !eta.is_finite() {
            return Err(Error::InvalidSpec("eta must be finite".into()));
        }
        Ok(Self { hbar, mass, charge, sigma_r, eta })
    }

    /// ħ = m = q = 1.
    pub fn natural(sigma_r: T, eta: T) -> Result<Self> {
        Self::new(T::one(), T::one(), T::one(), sigma_r, eta)
    }

    /// E = 3ħ²/(4mσ_r²).
    pub fn energy(&self) -> T {
        T::lit(3.0) * self.hbar * self.hbar / (T::lit(4.0) * self.mass * self.sigma_r * self.sigma_r)
    }

    pub fn with_eta(mut self, eta: T) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_sigma(mut self, sigma_r: T) -> Result<Self> {
        self.sigma_r = sigma_r;
        Self::new(self.hbar, self.mass, self.charge, self.sigma_r, self.eta)
    }

    /// ħ²/(8mσ⁴), the common prefactor of the potentials.
    fn u_scale(&self) -> T {
        let s2 = self.sigma_r * self.sigma_r;
        self.hbar * self.hbar / (T::lit(8.0) * self.mass * s2 * s2)
    }

    pub(crate) fn axis_radius(&self) -> T {
        T::lit(AXIS_EXCLUSION) * self.sigma_r
    }
}

impl<T: Real> Default for ModelParams<T> {
    fn default() -> Self {
        Self::natural(T::one(), T::one()).expect("valid defaults")
    }
}

/// The four catalogued (wave function, vector potential, scalar potential) triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemVariant {
    /// Ψ^(E) with A = 0 and the funnel U₁.
    ESystem,
    /// Ψ^(EM) with A₁ and U₁.
    EmA1,
    /// Ψ^(EM) with the linear A₂ and U₂(η).
    EmA2,
    /// Ψ^(E) with A₃; a pure gauge of the oscillator, so the scalar potential is U₀.
    EmA3,
}

impl SystemVariant {
    pub const ALL: [SystemVariant; 4] = [Self::ESystem, Self::EmA1, Self::EmA2, Self::EmA3];

    pub fn tag(self) -> &'static str {
        match self {
            Self::ESystem => "e",
            Self::EmA1 => "em-a1",
            Self::EmA2 => "em-a2",
            Self::EmA3 => "em-a3",
        }
    }

    /// True when the wave function carries the e^{iφ} vortex.
    pub fn has_vortex(self) -> bool {
        matches!(self, Self::ESystem | Self::EmA3)
    }

    /// True when the vector potential is singular on the z-axis.
    pub fn has_gauge_string(self) -> bool {
        matches!(self, Self::EmA1 | Self::EmA3)
    }

    /// True when U has the 1/ρ² pole.
    pub fn has_funnel_pole(self) -> bool {
        matches!(self, Self::ESystem | Self::EmA1)
    }

    /// Anything that must be kept away from the axis.
    pub fn axis_singular(self) -> bool {
        self.has_vortex() || self.has_gauge_string() || self.has_funnel_pole()
    }
}

impl fmt::Display for SystemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SystemVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "e" | "e-system" => Ok(Self::ESystem),
            "em-a1" | "a1" => Ok(Self::EmA1),
            "em-a2" | "a2" => Ok(Self::EmA2),
            "em-a3" | "a3" => Ok(Self::EmA3),
            other => Err(Error::InvalidSpec(format!(
                "unknown system '{other}' (expected e, em-a1, em-a2, em-a3)"
            ))),
        }
    }
}

/// Position and momentum. Whether `p` is canonical or kinetic depends on the operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<T> {
    pub r: Vec3<T>,
    pub p: Vec3<T>,
}

impl<T: Real> PhasePoint<T> {
    pub fn new(r: Vec3<T>, p: Vec3<T>) -> Self {
        Self { r, p }
    }

    pub fn to_array(self) -> [T; 6] {
        [self.r.x, self.r.y, self.r.z, self.p.x, self.p.y, self.p.z]
    }

    pub fn from_slice(v: &[T]) -> Self {
        Self::new(Vec3::new(v[0], v[1], v[2]), Vec3::new(v[3], v[4], v[5]))
    }
}

fn check_axis<T: Real>(r: Vec3<T>, params: &ModelParams<T>, what: &'static str) -> Result<T> {
    let rho = r.rho();
    if rho < params.axis_radius() {
        return Err(Error::AxisSingular { what, rho: rho.to_f64_lossy() });
    }
    Ok(rho)
}

/// Real Gaussian envelope (2π)^{-3/4} σ^{-3/2} e^{−r²/4σ²}.
pub fn gaussian_amplitude<T: Real>(r: Vec3<T>, params: &ModelParams<T>) -> T {
    let s = params.sigma_r;
    let norm = (T::TAU()).powf(T::lit(-0.75)) * s.powf(T::lit(-1.5));
    norm * (-r.norm_sqr() / (T::lit(4.0) * s * s)).exp()
}

/// e^{iφ}; on the axis itself (measure zero) returns 1.
pub(crate) fn unit_azimuth<T: Real>(r: Vec3<T>) -> Complex<T> {
    let rho = r.rho();
    if rho == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        Complex::new(r.x / rho, r.y / rho)
    }
}

/// Wave function without the axis check; used inside integrals.
pub(crate) fn psi_unchecked<T: Real>(system: SystemVariant, r: Vec3<T>, t: T, params: &ModelParams<T>) -> Complex<T> {
    let a = gaussian_amplitude(r, params);
    let time = Complex::from_polar(T::one(), -params.energy() * t / params.hbar);
    let base = time * a;
    if system.has_vortex() {
        base * unit_azimuth(r)
    } else {
        base
    }
}

/// Ψ(r, t) of the selected system.
pub fn psi<T: Real>(system: SystemVariant, r: Vec3<T>, t: T, params: &ModelParams<T>) -> Result<Complex<T>> {
    if system.has_vortex() {
        check_axis(r, params, "wave-function phase")?;
    }
    Ok(psi_unchecked(system, r, t, params))
}

/// qA without the axis check.
pub(crate) fn vector_potential_unchecked<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Vec3<T> {
    let h = params.hbar;
    match system {
        SystemVariant::ESystem => Vec3::zero(),
        SystemVariant::EmA1 | SystemVariant::EmA3 => {
            let rho2 = r.x * r.x + r.y * r.y;
            let sign = if system == SystemVariant::EmA1 { -T::one() } else { T::one() };
            // ±ħ/ρ e_φ = ±ħ(−y, x, 0)/ρ²
            Vec3::new(-r.y, r.x, T::zero()) * (sign * h / rho2)
        }
        SystemVariant::EmA2 => {
            let c = h * params.eta / (T::lit(2.0) * params.sigma_r * params.sigma_r);
            Vec3::new(r.y, -r.x, T::zero()) * c
        }
    }
}

/// qA(r).
pub fn vector_potential<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<Vec3<T>> {
    if system.has_gauge_string() {
        check_axis(r, params, "vector potential")?;
    }
    Ok(vector_potential_unchecked(system, r, params))
}

/// U(r).
pub fn scalar_potential<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<T> {
    let k = params.u_scale();
    let s2 = params.sigma_r * params.sigma_r;
    Ok(match system {
        SystemVariant::ESystem | SystemVariant::EmA1 => {
            let rho = check_axis(r, params, "funnel potential")?;
            k * (r.norm_sqr() - T::lit(4.0) * s2 * s2 / (rho * rho))
        }
        SystemVariant::EmA2 => {
            let rho2 = r.x * r.x + r.y * r.y;
            k * ((T::one() - params.eta * params.eta) * rho2 + r.z * r.z)
        }
        SystemVariant::EmA3 => k * r.norm_sqr(),
    })
}

/// The 1/ρ² part of U (zero for systems without the pole); used for energy bookkeeping.
pub fn potential_pole_part<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> T {
    if !system.has_funnel_pole() {
        return T::zero();
    }
    let rho2 = r.x * r.x + r.y * r.y;
    -params.hbar * params.hbar / (T::lit(2.0) * params.mass * rho2)
}

/// qB = curl(qA). Zero off-axis for the string potentials.
pub fn magnetic_field<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<Vec3<T>> {
    match system {
        SystemVariant::EmA2 => {
            let bz = -params.hbar * params.eta / (params.sigma_r * params.sigma_r);
            Ok(Vec3::new(T::zero(), T::zero(), bz))
        }
        SystemVariant::EmA1 | SystemVariant::EmA3 => {
            check_axis(r, params, "string magnetic field")?;
            Ok(Vec3::zero())
        }
        SystemVariant::ESystem => Ok(Vec3::zero()),
    }
}

/// Bohm potential Q = (ħ²/4mσ²)(3 − r²/2σ²), shared by all four systems.
pub fn quantum_potential<T: Real>(r: Vec3<T>, params: &ModelParams<T>) -> T {
    let s2 = params.sigma_r * params.sigma_r;
    params.hbar * params.hbar / (T::lit(4.0) * params.mass * s2) * (T::lit(3.0) - r.norm_sqr() / (T::lit(2.0) * s2))
}

/// ħ∇S for the stationary phase S (φ for the vortex states, 0 otherwise).
fn phase_gradient<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Vec3<T> {
    if system.has_vortex() {
        let rho2 = r.x * r.x + r.y * r.y;
        Vec3::new(-r.y, r.x, T::zero()) * (params.hbar / rho2)
    } else {
        Vec3::zero()
    }
}

/// Kinetic flow momentum ⟨p_c⟩ = ħ∇S − qA.
pub fn mean_momentum_exact<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<Vec3<T>> {
    if system.axis_singular() && system != SystemVariant::EmA2 {
        check_axis(r, params, "azimuthal flow")?;
    }
    Ok(phase_gradient(system, r, params) - vector_potential_unchecked(system, r, params))
}

/// Hamilton–Jacobi balance with the quantum potential optionally dropped.
pub fn hamilton_jacobi_terms<T: Real>(
    system: SystemVariant,
    r: Vec3<T>,
    params: &ModelParams<T>,
    include_quantum: bool,
) -> Result<T> {
    let pc = mean_momentum_exact(system, r, params)?;
    let u = scalar_potential(system, r, params)?;
    let q = if include_quantum { quantum_potential(r, params) } else { T::zero() };
    // −ħ ∂S/∂t = E for the stationary phase −Et/ħ.
    let lhs = params.energy();
    Ok((lhs - (pc.norm_sqr() / (T::lit(2.0) * params.mass) + u + q)).abs())
}

pub fn hamilton_jacobi_residual<T: Real>(system: SystemVariant, r: Vec3<T>, params: &ModelParams<T>) -> Result<T> {
    hamilton_jacobi_terms(system, r, params, true)
}

/// Default stencil for the pointwise Schrödinger check.
pub fn default_schrodinger_stencil<T: Real>(params: &ModelParams<T>) -> DiffStencil<T> {
    DiffStencil::uniform(3, T::lit(0.02) * params.sigma_r, 2).expect("positive step")
}

/// |ĤΨ − EΨ| / |EΨ| for an arbitrary amplitude `wave` placed in the
/// potentials of `system`; (p̂ − qA)² is expanded with div A = 0.
pub fn hamiltonian_residual<T: Real>(
    wave: &dyn Fn(Vec3<T>) -> Complex<T>,
    system: SystemVariant,
    r: Vec3<T>,
    params: &ModelParams<T>,
    stencil: &DiffStencil<T>,
) -> Result<T> {
    if stencil.steps.len() != 3 {
        return Err(Error::InvalidSpec("Schrödinger stencil must be three-dimensional".into()));
    }
    if system.axis_singular() {
        // Keep the whole stencil off the axis.
        let reach = stencil.steps.iter().fold(T::zero(), |m, &h| m.max(h)) * T::lit(3.0);
        if r.rho() < reach + params.axis_radius() {
            return Err(Error::AxisSingular { what: "Schrödinger stencil", rho: r.rho().to_f64_lossy() });
        }
    }
    let at = r.to_array();
    let re = |x: &[T]| wave(Vec3::new(x[0], x[1], x[2])).re;
    let im = |x: &[T]| wave(Vec3::new(x[0], x[1], x[2])).im;
    let d = |orders: [usize; 3]| -> Result<Complex<T>> {
        Ok(Complex::new(
            mixed_derivative(&re, &orders, stencil, &at)?,
            mixed_derivative(&im, &orders, stencil, &at)?,
        ))
    };
    let lap = d([2, 0, 0])? + d([0, 2, 0])? + d([0, 0, 2])?;
    let grad = [d([1, 0, 0])?, d([0, 1, 0])?, d([0, 0, 1])?];
    let qa = vector_potential(system, r, params)?;
    let u = scalar_potential(system, r, params)?;
    let psi0 = wave(r);
    let h = params.hbar;
    let i = Complex::new(T::zero(), T::one());
    let a_dot_grad = grad[0] * qa.x + grad[1] * qa.y + grad[2] * qa.z;
    let kinetic = (lap * (-h * h) + i * a_dot_grad * (T::lit(2.0) * h) + psi0 * qa.norm_sqr())
        * (T::one() / (T::lit(2.0) * params.mass));
    let h_psi = kinetic + psi0 * u;
    let e_psi = psi0 * params.energy();
    Ok((h_psi - e_psi).norm() / e_psi.norm())
}

/// Schrödinger residual of the catalogued state at time `t`.
pub fn schrodinger_residual<T: Real>(
    system: SystemVariant,
    r: Vec3<T>,
    t: T,
    params: &ModelParams<T>,
    stencil: &DiffStencil<T>,
) -> Result<T> {
    let p = *params;
    let wave = move |x: Vec3<T>| psi_unchecked(system, x, t, &p);
    hamiltonian_residual(&wave, system, r, params, stencil)
}

/// Taylor jet of U about `r` to the given degree.
pub fn scalar_potential_jet<T: Real>(system: SystemVariant, r: Vec3<T>, degree: usize, params: &ModelParams<T>) -> Result<Jet<T>> {
    let [x, y, z] = Jet::coordinates(r.to_array(), degree);
    let k = params.u_scale();
    let s2 = params.sigma_r * params.sigma_r;
    let rho2 = &x.square() + &y.square();
    let r2 = &rho2 + &z.square();
    Ok(match system {
        SystemVariant::ESystem | SystemVariant::EmA1 => {
            check_axis(r, params, "funnel potential")?;
            let pole = rho2.recip().scale(T::lit(4.0) * s2 * s2);
            (&r2 - &pole).scale(k)
        }
        SystemVariant::EmA2 => {
            (&rho2.scale(T::one() - params.eta * params.eta) + &z.square()).scale(k)
        }
        SystemVariant::EmA3 => r2.scale(k),
    })
}

/// Taylor jets of the components of qA about `r`.
pub fn vector_potential_jet<T: Real>(system: SystemVariant, r: Vec3<T>, degree: usize, params: &ModelParams<T>) -> Result<[Jet<T>; 3]> {
    let [x, y, _z] = Jet::coordinates(r.to_array(), degree);
    let zero = Jet::constant(T::zero(), degree);
    let h = params.hbar;
    Ok(match system {
        SystemVariant::ESystem => [zero.clone(), zero.clone(), zero],
        SystemVariant::EmA1 | SystemVariant::EmA3 => {
            check_axis(r, params, "vector potential")?;
            let sign = if system == SystemVariant::EmA1 { -T::one() } else { T::one() };
            let inv = (&x.square() + &y.square()).recip();
            [(&y * &inv).scale(-sign * h), (&x * &inv).scale(sign * h), zero]
        }
        SystemVariant::EmA2 => {
            let c = h * params.eta / (T::lit(2.0) * params.sigma_r * params.sigma_r);
            [y.scale(c), x.scale(-c), zero]
        }
    })
}

/// Points of a characteristic curve of the Ψ-model.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicCurve<T> {
    /// (t, φ, θ) samples, in input order.
    pub points: Vec<(T, T, T)>,
    /// True when θ reached the poles and later samples were dropped.
    pub truncated: bool,
}

/// The arguments (φ-slot, θ-slot) that F₀ receives at (φ, θ, t).
pub fn f0_arguments<T: Real>(r: T, k: i32, n: i32, phi: T, theta: T, t: T, params: &ModelParams<T>) -> (T, T) {
    let alpha = -params.hbar / (T::lit(2.0) * params.mass);
    let shift = T::lit(2.0) * alpha * T::lit(n as f64) / (r * r) * t;
    let kn = T::lit(k as f64) / T::lit(n as f64);
    let cot = |a: T| a.cos() / a.sin();
    (phi + kn * (cot(theta) - cot(theta + shift)), theta + shift)
}

/// Curve through (φ₀, θ₀) along which the F₀ arguments stay constant.
pub fn characteristic_curve<T: Real>(
    r: T,
    k: i32,
    n: i32,
    theta0: T,
    phi0: T,
    t_samples: &[T],
    params: &ModelParams<T>,
) -> Result<CharacteristicCurve<T>> {
    if n == 0 {
        return Err(Error::InvalidSpec("n must be nonzero".into()));
    }
    if !(r > T::zero()) {
        return Err(Error::InvalidSpec("radius must be positive".into()));
    }
    if !(theta0 > T::zero() && theta0 < T::PI()) {
        return Err(Error::InvalidSpec("theta0 must lie in (0, pi)".into()));
    }
    let alpha = -params.hbar / (T::lit(2.0) * params.mass);
    let rate = T::lit(2.0) * alpha * T::lit(n as f64) / (r * r);
    let kn = T::lit(k as f64) / T::lit(n as f64);
    let cot = |a: T| a.cos() / a.sin();
    let mut points = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let theta = theta0 - rate * t;
        if !(theta > T::zero() && theta < T::PI()) {
            return Ok(CharacteristicCurve { points, truncated: true });
        }
        let phi = phi0 + kn * (cot(theta0) - cot(theta));
        points.push((t, phi, theta));
    }
    Ok(CharacteristicCurve { points, truncated: false })
}
