//! Truncated Moyal-series dynamics: potential and vector-potential operator
//! series, the Vlasov–Moyal acceleration field, stationarity residuals,
//! momentum-averaged forces and the momentum divergence of the field.
//!
//! `Op_n[G] f = (∇_r^G · ∇_p^f)^n = Σ_{|α|=n} n!/α! ∂^α G ∂_p^α f`.
//! Derivatives of U and qA come from Taylor jets (exact); derivatives of the
//! phase-space density use finite differences.

use crate::error::{Error, Result};
use crate::numerics::diff::{mixed_derivative, DiffStencil};
use crate::numerics::jet::{multi_indices, multinomial, Jet};
use crate::numerics::quadrature::Rule1D;
use crate::phase_model::{scalar_potential_jet, vector_potential_jet, ModelParams, PhasePoint, SystemVariant};
use crate::scalar::Real;
use crate::transforms::{wigner_w_e_semianalytic, wigner_w_em_closed, TransformSpec};
use crate::vec3::Vec3;
use std::cell::RefCell;
use std::collections::HashMap;

/// Highest supported truncation index.
pub const MAX_K: usize = 3;

/// Series truncation K: terms through ħ^{2K} are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TruncationOrder(usize);

impl TruncationOrder {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_K {
            return Err(Error::OrderTooHigh { order: k, max: MAX_K });
        }
        Ok(Self(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl Default for TruncationOrder {
    fn default() -> Self {
        Self(MAX_K)
    }
}

/// Per-order breakdown of a truncated series; `contributions[n]` is the
/// ħ^{2n} part and they add up to `total`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTermReport<V, T> {
    pub contributions: Vec<V>,
    pub total: V,
    /// True when the last kept order is below 1e−6 of the total (or K = 0).
    pub converged: bool,
    /// Magnitude of the last kept order.
    pub tail_estimate: T,
}

trait Magnitude<T> {
    fn magnitude(&self) -> T;
}

impl<T: Real> Magnitude<T> for T {
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Real> Magnitude<T> for Vec3<T> {
    fn magnitude(&self) -> T {
        self.norm()
    }
}

fn report<V, T>(contributions: Vec<V>, zero: V) -> SeriesTermReport<V, T>
where
    V: Copy + std::ops::Add<Output = V> + Magnitude<T>,
    T: Real,
{
    let total = contributions.iter().fold(zero, |a, &b| a + b);
    let tail = if contributions.len() > 1 { contributions.last().unwrap().magnitude() } else { T::zero() };
    let converged = tail <= T::lit(1e-6) * total.magnitude().max(T::min_positive_value());
    SeriesTermReport { contributions, total, converged, tail_estimate: tail }
}

/// (−1)^l (ħ/2)^{2l} / (2l+1)!
fn odd_coefficient<T: Real>(l: usize, hbar: T) -> T {
    let fact: f64 = (1..=(2 * l + 1)).map(|k| k as f64).product();
    let sign = if l % 2 == 0 { T::one() } else { -T::one() };
    sign * (hbar * T::lit(0.5)).powi(2 * l as i32) / T::lit(fact)
}

/// (−1)^k (ħ/2)^{2k} / (2k)!
fn even_coefficient<T: Real>(k: usize, hbar: T) -> T {
    let fact: f64 = (1..=(2 * k)).map(|k| k as f64).product();
    let sign = if k % 2 == 0 { T::one() } else { -T::one() };
    sign * (hbar * T::lit(0.5)).powi(2 * k as i32) / T::lit(fact)
}

fn add_index(a: [usize; 3], b: [usize; 3]) -> [usize; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn unit(i: usize) -> [usize; 3] {
    let mut e = [0; 3];
    e[i] = 1;
    e
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

/// A stationary system for the series: potentials (as jets) and its
/// phase-space density f_v(r, P) over kinetic momentum.
pub trait MoyalModel<T: Real>: Sync {
    fn params(&self) -> &ModelParams<T>;
    /// Taylor jet of U about r.
    fn scalar_jet(&self, r: Vec3<T>, degree: usize) -> Result<Jet<T>>;
    /// Taylor jets of qA about r.
    fn vector_jets(&self, r: Vec3<T>, degree: usize) -> Result<[Jet<T>; 3]>;
    /// f_v(r, P).
    fn density(&self, r: Vec3<T>, p: Vec3<T>) -> Result<T>;
    /// Centre and width of f_v in P when it is Gaussian (enables momentum averages).
    fn gaussian_momentum(&self, r: Vec3<T>) -> Option<(Vec3<T>, T)>;
}

/// A catalogued system; f_v(r, P) = W(r, P + qA(r)).
#[derive(Debug, Clone, Copy)]
pub struct CatalogueModel<T> {
    pub system: SystemVariant,
    pub params: ModelParams<T>,
    /// Quadrature controls for the vortex density (E_SYSTEM, EM_A3).
    pub transform: TransformSpec<T>,
}

impl<T: Real> CatalogueModel<T> {
    pub fn new(system: SystemVariant, params: ModelParams<T>) -> Self {
        Self { system, params, transform: TransformSpec::default().with_rel_tol(T::lit(1e-9)) }
    }
}

impl<T: Real> MoyalModel<T> for CatalogueModel<T> {
    fn params(&self) -> &ModelParams<T> {
        &self.params
    }
    fn scalar_jet(&self, r: Vec3<T>, degree: usize) -> Result<Jet<T>> {
        scalar_potential_jet(self.system, r, degree, &self.params)
    }
    fn vector_jets(&self, r: Vec3<T>, degree: usize) -> Result<[Jet<T>; 3]> {
        vector_potential_jet(self.system, r, degree, &self.params)
    }
    fn density(&self, r: Vec3<T>, p: Vec3<T>) -> Result<T> {
        let a = self.vector_jets(r, 0)?;
        let canonical = p + Vec3::new(a[0].value(), a[1].value(), a[2].value());
        if self.system.has_vortex() {
            let (pr, pp, pz) = canonical.cylindrical_components(r.phi());
            Ok(wigner_w_e_semianalytic(r.rho(), r.z, Vec3::new(pr, pp, pz), &self.params, &self.transform)?.value)
        } else {
            Ok(wigner_w_em_closed(PhasePoint::new(r, canonical), &self.params))
        }
    }
    fn gaussian_momentum(&self, r: Vec3<T>) -> Option<(Vec3<T>, T)> {
        if self.system.has_vortex() {
            return None;
        }
        let a = self.vector_jets(r, 0).ok()?;
        let scale = self.params.hbar / (T::lit(2.0) * self.params.sigma_r);
        Some((-Vec3::new(a[0].value(), a[1].value(), a[2].value()), scale))
    }
}

/// A = 0 polynomial test system, U = quartic·x⁴ + sextic·x⁶ + harmonic·r²/2,
/// with a product Gaussian density of width σ in r and `width` in P.
#[derive(Debug, Clone, Copy)]
pub struct PolynomialTest<T> {
    pub quartic: T,
    pub sextic: T,
    pub harmonic: T,
    pub width: T,
    pub params: ModelParams<T>,
}

impl<T: Real> PolynomialTest<T> {
    /// U = x⁴.
    pub fn quartic(params: ModelParams<T>, width: T) -> Self {
        Self { quartic: T::one(), sextic: T::zero(), harmonic: T::zero(), width, params }
    }

    /// U = ω²r²/2.
    pub fn harmonic(params: ModelParams<T>, omega2: T, width: T) -> Self {
        Self { quartic: T::zero(), sextic: T::zero(), harmonic: omega2, width, params }
    }
}

impl<T: Real> MoyalModel<T> for PolynomialTest<T> {
    fn params(&self) -> &ModelParams<T> {
        &self.params
    }
    fn scalar_jet(&self, r: Vec3<T>, degree: usize) -> Result<Jet<T>> {
        let [x, y, z] = Jet::coordinates(r.to_array(), degree);
        let x2 = x.square();
        let x4 = x2.square();
        let x6 = &x4 * &x2;
        let r2 = &(&x2 + &y.square()) + &z.square();
        Ok(&(&x4.scale(self.quartic) + &x6.scale(self.sextic)) + &r2.scale(self.harmonic * T::lit(0.5)))
    }
    fn vector_jets(&self, _r: Vec3<T>, degree: usize) -> Result<[Jet<T>; 3]> {
        let z = Jet::constant(T::zero(), degree);
        Ok([z.clone(), z.clone(), z])
    }
    fn density(&self, r: Vec3<T>, p: Vec3<T>) -> Result<T> {
        let s = self.params.sigma_r;
        let w = self.width;
        let norm = (T::TAU() * s * s).powf(T::lit(-1.5)) * (T::TAU() * w * w).powf(T::lit(-1.5));
        Ok(norm * (-r.norm_sqr() / (T::lit(2.0) * s * s) - p.norm_sqr() / (T::lit(2.0) * w * w)).exp())
    }
    fn gaussian_momentum(&self, _r: Vec3<T>) -> Option<(Vec3<T>, T)> {
        Some((Vec3::zero(), self.width))
    }
}

/// Default stencil: 0.05σ in r, 0.1ħ/σ in p, two Richardson levels.
pub fn default_moyal_stencil<T: Real>(params: &ModelParams<T>) -> DiffStencil<T> {
    DiffStencil::phase_space(params.sigma_r * T::lit(0.05), params.hbar / params.sigma_r * T::lit(0.1), 2)
        .expect("positive steps")
}

// ---------------------------------------------------------------------------
// Momentum derivatives of a phase-space function
// ---------------------------------------------------------------------------

/// Memoised ∂_r^β ∂_p^α of a phase-space function at one point.
struct PhaseDerivatives<'a, T: Real> {
    f: &'a dyn Fn(&[T]) -> T,
    stencil: &'a DiffStencil<T>,
    at: [T; 6],
    cache: RefCell<HashMap<[usize; 6], T>>,
}

impl<'a, T: Real> PhaseDerivatives<'a, T> {
    fn new(f: &'a dyn Fn(&[T]) -> T, stencil: &'a DiffStencil<T>, at: PhasePoint<T>) -> Result<Self> {
        if stencil.steps.len() != 6 {
            return Err(Error::InvalidSpec("Moyal stencil needs six phase-space steps".into()));
        }
        Ok(Self { f, stencil, at: at.to_array(), cache: RefCell::new(HashMap::new()) })
    }

    fn get(&self, r_order: [usize; 3], p_order: [usize; 3]) -> Result<T> {
        let key = [r_order[0], r_order[1], r_order[2], p_order[0], p_order[1], p_order[2]];
        if let Some(&v) = self.cache.borrow().get(&key) {
            return Ok(v);
        }
        let v = mixed_derivative(self.f, &key, self.stencil, &self.at)?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    fn p(&self, alpha: [usize; 3]) -> Result<T> {
        self.get([0; 3], alpha)
    }
}

/// Op_n[G] applied to the p-derivatives, with `g(α)` = ∂^α G and an extra
/// r-derivative order `extra_r` on the density.
fn op<T: Real>(n: usize, g: impl Fn([usize; 3]) -> T, d: &PhaseDerivatives<'_, T>, extra_r: [usize; 3]) -> Result<T> {
    let mut acc = T::zero();
    for alpha in multi_indices(n) {
        let coeff = g(alpha);
        if coeff == T::zero() {
            continue;
        }
        acc = acc + coeff * T::lit(multinomial(alpha)) * d.get(extra_r, alpha)?;
    }
    Ok(acc)
}

/// Normal-ordered product Op_n[G] ∘ Op_m[H] = Σ n!/α! m!/γ! ∂^αG ∂^γH ∂_p^{α+γ}.
fn op_product<T: Real>(
    n: usize,
    g: impl Fn([usize; 3]) -> T,
    m: usize,
    h: impl Fn([usize; 3]) -> T,
    d: &PhaseDerivatives<'_, T>,
) -> Result<T> {
    let mut acc = T::zero();
    for alpha in multi_indices(n) {
        let ga = g(alpha);
        if ga == T::zero() {
            continue;
        }
        for gamma in multi_indices(m) {
            let hg = h(gamma);
            if hg == T::zero() {
                continue;
            }
            acc = acc + ga * hg * T::lit(multinomial(alpha) * multinomial(gamma)) * d.p(add_index(alpha, gamma))?;
        }
    }
    Ok(acc)
}

fn check_point<T: Real>(at: &PhasePoint<T>) -> Result<()> {
    if !(at.r.is_finite() && at.p.is_finite()) {
        return Err(Error::InvalidSpec("phase point must be finite".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Series terms
// ---------------------------------------------------------------------------

/// −c_l Op_{2l+1}[U] W at `at`, with c_l = (−1)^l (ħ/2)^{2l}/(2l+1)!.
/// For l = 0 this is the convective term −∇U·∇_p W.
pub fn potential_series_term<T: Real>(
    model: &dyn MoyalModel<T>,
    l: usize,
    w: &dyn Fn(&[T]) -> T,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<T> {
    check_point(&at)?;
    TruncationOrder::new(l)?;
    let n = 2 * l + 1;
    let u = model.scalar_jet(at.r, n)?;
    let d = PhaseDerivatives::new(w, stencil, at)?;
    Ok(-odd_coefficient(l, model.params().hbar) * op(n, |a| u.derivative(a), &d, [0; 3])?)
}

/// a_k Op_{2k}[qA_β] W for β = x, y, z, with a_k = (−1)^k (ħ/2)^{2k}/(2k)!.
/// k = 0 gives the plain contraction qA·W.
pub fn vector_series_term<T: Real>(
    model: &dyn MoyalModel<T>,
    k: usize,
    w: &dyn Fn(&[T]) -> T,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<Vec3<T>> {
    check_point(&at)?;
    TruncationOrder::new(k)?;
    let n = 2 * k;
    let a = model.vector_jets(at.r, n)?;
    let d = PhaseDerivatives::new(w, stencil, at)?;
    let c = even_coefficient(k, model.params().hbar);
    let mut out = Vec3::zero();
    for b in 0..3 {
        out[b] = c * op(n, |al| a[b].derivative(al), &d, [0; 3])?;
    }
    Ok(out)
}

/// The quantum part of the vector-potential series, Σ_{1≤k≤K} a_k Op_{2k}[qA] W.
pub fn quantum_vector_potential<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    w: &dyn Fn(&[T]) -> T,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<Vec3<T>> {
    let mut out = Vec3::zero();
    for k in 1..=order.get() {
        out = out + vector_series_term(model, k, w, at, stencil)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Stationarity residual
// ---------------------------------------------------------------------------

/// Per-order residual of the truncated Moyal equation for the stationary
/// density of `model`, written for W(r, p) = f_v(r, p − qA(r)) at canonical
/// p = P + qA(r); `at.p` is the kinetic momentum.
pub fn evolution_residual_report<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<SeriesTermReport<T, T>> {
    check_point(&at)?;
    let kk = order.get();
    let params = *model.params();
    let (h, m) = (params.hbar, params.mass);
    let deg = 2 * kk + 1;
    let u = model.scalar_jet(at.r, deg)?;
    let a = model.vector_jets(at.r, deg)?;
    // V = U + |qA|²/2m as a jet.
    let a2 = &(&a[0].square() + &a[1].square()) + &a[2].square();
    let v = &u + &a2.scale(T::one() / (T::lit(2.0) * m));
    let a0 = Vec3::new(a[0].value(), a[1].value(), a[2].value());
    let p = at.p + a0;
    // W over (r, p) built from f_v; errors inside the stencil become NaN.
    let w = |x: &[T]| -> T {
        let r = Vec3::new(x[0], x[1], x[2]);
        let pc = Vec3::new(x[3], x[4], x[5]);
        match model.vector_jets(r, 0) {
            Ok(ar) => model
                .density(r, pc - Vec3::new(ar[0].value(), ar[1].value(), ar[2].value()))
                .unwrap_or_else(|_| T::nan()),
            Err(_) => T::nan(),
        }
    };
    let d = PhaseDerivatives::new(&w, stencil, PhasePoint::new(at.r, p))?;
    let mut contributions = Vec::with_capacity(kk + 1);
    for n in 0..=kk {
        let mut term = T::zero();
        if n == 0 {
            for i in 0..3 {
                term = term - p[i] / m * d.get(unit(i), [0; 3])?;
            }
        }
        let cl = odd_coefficient(n, h);
        term = term + cl * op(2 * n + 1, |al| v.derivative(al), &d, [0; 3])?;
        for b in 0..3 {
            term = term - p[b] / m * cl * op(2 * n + 1, |al| a[b].derivative(al), &d, [0; 3])?;
        }
        let an = even_coefficient(n, h);
        for g in 0..3 {
            term = term + an / m * op(2 * n, |al| a[g].derivative(al), &d, unit(g))?;
        }
        if !term.is_finite() {
            return Err(Error::NonFinite { node: format!("residual order {n} at r = {:?}", at.r.to_array()) });
        }
        contributions.push(term);
    }
    Ok(report(contributions, T::zero()))
}

/// |truncated Moyal residual| of the stationary density.
pub fn evolution_residual<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<T> {
    Ok(evolution_residual_report(model, order, at, stencil)?.total.abs())
}

// ---------------------------------------------------------------------------
// Vlasov–Moyal field
// ---------------------------------------------------------------------------

/// (field · f) contributions per ħ order, in kinetic variables.
fn field_times_density<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<(Vec<Vec3<T>>, T)> {
    check_point(&at)?;
    let kk = order.get();
    let params = *model.params();
    let (h, m) = (params.hbar, params.mass);
    let deg = 2 * kk + 2;
    let u = model.scalar_jet(at.r, deg)?;
    let a = model.vector_jets(at.r, deg)?;
    let f = |x: &[T]| -> T {
        model.density(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5])).unwrap_or_else(|_| T::nan())
    };
    let d = PhaseDerivatives::new(&f, stencil, at)?;
    let f0 = d.p([0; 3])?;
    // ∂^γ of qB = curl qA, and of ∂_α qA_i.
    let db = |j: usize, g: [usize; 3]| -> T {
        let (k1, k2) = ((j + 1) % 3, (j + 2) % 3);
        a[k2].derivative(add_index(g, unit(k1))) - a[k1].derivative(add_index(g, unit(k2)))
    };
    let da = |al: usize, i: usize, g: [usize; 3]| a[i].derivative(add_index(g, unit(al)));
    let p = at.p;
    let mut per_order = vec![Vec3::zero(); kk + 1];
    for n in 0..=kk {
        let mut term = Vec3::zero();
        // Electric part: −Σ c_n Op_{2n}[∇U] f.
        let cn = odd_coefficient(n, h);
        for i in 0..3 {
            term[i] = term[i] - cn * op(2 * n, |al| u.derivative(add_index(al, unit(i))), &d, [0; 3])?;
        }
        // 𝓥 × 𝓑: P/m times the n-th B term, minus the 𝓐^(ħ)·𝓑 cross products of total order n.
        let an = even_coefficient(n, h);
        let mut bn = Vec3::zero();
        for j in 0..3 {
            bn[j] = an * op(2 * n, |g| db(j, g), &d, [0; 3])?;
        }
        term = term + (p * (T::one() / m)).cross(bn);
        for k1 in 1..=n {
            let k2 = n - k1;
            let c = even_coefficient(k1, h) * even_coefficient(k2, h) / m;
            // (𝓐^(ħ) × 𝓑)_i = ε_ijl 𝓐_j 𝓑_l
            for i in 0..3 {
                let (j, l) = ((i + 1) % 3, (i + 2) % 3);
                let jl = op_product(2 * k1, |al| a[j].derivative(al), 2 * k2, |g| db(l, g), &d)?;
                let lj = op_product(2 * k1, |al| a[l].derivative(al), 2 * k2, |g| db(j, g), &d)?;
                term[i] = term[i] - c * (jl - lj);
            }
        }
        // 𝓥·∇_r 𝓐^(ħ): only k ≥ 1 carries ħ.
        if n >= 1 {
            for i in 0..3 {
                for al in 0..3 {
                    term[i] = term[i] + p[al] / m * an * op(2 * n, |g| da(al, i, g), &d, [0; 3])?;
                }
            }
            for k1 in 1..n {
                let k2 = n - k1;
                let c = even_coefficient(k1, h) * even_coefficient(k2, h) / m;
                for i in 0..3 {
                    for al in 0..3 {
                        term[i] = term[i]
                            - c * op_product(2 * k1, |g| a[al].derivative(g), 2 * k2, |g| da(al, i, g), &d)?;
                    }
                }
            }
        }
        if !term.is_finite() {
            return Err(Error::NonFinite { node: format!("field order {n} at {:?}", at.to_array()) });
        }
        per_order[n] = term;
    }
    Ok((per_order, f0))
}

/// Mean acceleration field ⟨Ṗ⟩ of the truncated Vlasov–Moyal closure at
/// (r, P), with the density divided out, plus its per-order breakdown.
pub fn vlasov_moyal_field<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<SeriesTermReport<Vec3<T>, T>> {
    let (per_order, f0) = field_times_density(model, order, at, stencil)?;
    if !(f0.abs() > T::min_positive_value() * T::lit(1e10)) {
        return Err(Error::ZeroDensity { value: f0.to_f64_lossy() });
    }
    // Order zero is the pointwise force; dividing f back out would only add rounding.
    let classical = classical_limit_force(model, at)?;
    let scaled = per_order
        .into_iter()
        .enumerate()
        .map(|(n, v)| if n == 0 { classical } else { v * (T::one() / f0) })
        .collect();
    Ok(report(scaled, Vec3::zero()))
}

/// −∇U + (1/m) P × qB with pointwise fields (stationary potentials).
pub fn classical_limit_force<T: Real>(model: &dyn MoyalModel<T>, at: PhasePoint<T>) -> Result<Vec3<T>> {
    check_point(&at)?;
    let u = model.scalar_jet(at.r, 1)?;
    let a = model.vector_jets(at.r, 1)?;
    let grad_u = Vec3::new(u.derivative(unit(0)), u.derivative(unit(1)), u.derivative(unit(2)));
    let b = Vec3::new(
        a[2].derivative(unit(1)) - a[1].derivative(unit(2)),
        a[0].derivative(unit(2)) - a[2].derivative(unit(0)),
        a[1].derivative(unit(0)) - a[0].derivative(unit(1)),
    );
    Ok(-grad_u + at.p.cross(b) * (T::one() / model.params().mass))
}

const AVERAGE_ORDER: usize = 12;

fn momentum_rule<T: Real>(model: &dyn MoyalModel<T>, r: Vec3<T>) -> Result<[Rule1D<T>; 3]> {
    let (c, s) = model
        .gaussian_momentum(r)
        .ok_or_else(|| Error::Unsupported("momentum averages need a Gaussian density in P".into()))?;
    Ok([0, 1, 2].map(|i| Rule1D::gauss_hermite(AVERAGE_ORDER, c[i], s)))
}

fn momentum_average<T: Real, V>(
    model: &dyn MoyalModel<T>,
    r: Vec3<T>,
    zero: V,
    f: impl Fn(Vec3<T>) -> Result<V>,
) -> Result<(V, T)>
where
    V: Copy + std::ops::Add<Output = V> + std::ops::Mul<T, Output = V>,
{
    let rules = momentum_rule(model, r)?;
    let mut acc = zero;
    let mut mass = T::zero();
    for (&x, &wx) in rules[0].nodes.iter().zip(&rules[0].weights) {
        for (&y, &wy) in rules[1].nodes.iter().zip(&rules[1].weights) {
            for (&z, &wz) in rules[2].nodes.iter().zip(&rules[2].weights) {
                let p = Vec3::new(x, y, z);
                let w = wx * wy * wz;
                acc = acc + f(p)? * w;
                mass = mass + model.density(r, p)? * w;
            }
        }
    }
    Ok((acc, mass))
}

/// ∫F f d³P / ∫f d³P: the momentum-averaged truncated field.
pub fn average_force<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    r: Vec3<T>,
    stencil: &DiffStencil<T>,
) -> Result<Vec3<T>> {
    let (num, mass) = momentum_average(model, r, Vec3::zero(), |p| {
        let (per_order, _) = field_times_density(model, order, PhasePoint::new(r, p), stencil)?;
        Ok(per_order.into_iter().fold(Vec3::zero(), |a, b| a + b))
    })?;
    if !(mass > T::zero()) {
        return Err(Error::ZeroDensity { value: mass.to_f64_lossy() });
    }
    Ok(num * (T::one() / mass))
}

/// What the operator in [`quantum_correction_integral`] differentiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionSource {
    Scalar,
    Vector(usize),
}

/// ∫ P_α Op_{2k}[G] f d³P; vanishes for k ≥ 1 by integration by parts.
pub fn quantum_correction_integral<T: Real>(
    model: &dyn MoyalModel<T>,
    k: usize,
    r: Vec3<T>,
    component: usize,
    source: CorrectionSource,
    stencil: &DiffStencil<T>,
) -> Result<T> {
    TruncationOrder::new(k)?;
    let n = 2 * k;
    let g = match source {
        CorrectionSource::Scalar => model.scalar_jet(r, n)?,
        CorrectionSource::Vector(i) => model.vector_jets(r, n)?[i % 3].clone(),
    };
    let f = |x: &[T]| model.density(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5])).unwrap_or_else(|_| T::nan());
    let (v, _) = momentum_average(model, r, T::zero(), |p| {
        let d = PhaseDerivatives::new(&f, stencil, PhasePoint::new(r, p))?;
        Ok(p[component % 3] * op(n, |al| g.derivative(al), &d, [0; 3])?)
    })?;
    Ok(v)
}

/// (∫𝓟 f d³P, f₁⟨P⟩) with 𝓟 = P − Σ_{k≥1} a_k Op_{2k}[qA].
pub fn momentum_field_average<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    r: Vec3<T>,
    stencil: &DiffStencil<T>,
) -> Result<(Vec3<T>, Vec3<T>)> {
    let f = |x: &[T]| model.density(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5])).unwrap_or_else(|_| T::nan());
    let (field, _) = momentum_average(model, r, Vec3::zero(), |p| {
        let q = quantum_vector_potential(model, order, &f, PhasePoint::new(r, p), stencil)?;
        Ok(p * model.density(r, p)? - q)
    })?;
    let (plain, _) = momentum_average(model, r, Vec3::zero(), |p| Ok(p * model.density(r, p)?))?;
    Ok((field, plain))
}

/// div_P of the truncated field at (r, P), by central differences.
pub fn dissipation_divergence<T: Real>(
    model: &dyn MoyalModel<T>,
    order: TruncationOrder,
    at: PhasePoint<T>,
    stencil: &DiffStencil<T>,
) -> Result<T> {
    check_point(&at)?;
    let hp = stencil.steps.get(3).copied().unwrap_or_else(|| T::lit(0.1)) * T::lit(2.0);
    let comp = |i: usize, h: T| -> Result<T> {
        let mut e = Vec3::zero();
        e[i] = h;
        let fp = vlasov_moyal_field(model, order, PhasePoint::new(at.r, at.p + e), stencil)?.total[i];
        let fm = vlasov_moyal_field(model, order, PhasePoint::new(at.r, at.p - e), stencil)?.total[i];
        Ok((fp - fm) / (T::lit(2.0) * h))
    };
    let mut div = T::zero();
    for i in 0..3 {
        let (d0, d1) = (comp(i, hp)?, comp(i, hp * T::lit(0.5))?);
        div = div + (d1 * T::lit(4.0) - d0) / T::lit(3.0);
    }
    Ok(div)
}
