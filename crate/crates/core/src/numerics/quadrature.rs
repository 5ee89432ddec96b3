//! Fixed tensor-product rules (Gauss–Hermite, Gauss–Legendre, trapezoid).
//!
//! Node tables are built in `f64` by Newton iteration on the three-term
//! recurrences and converted to the working scalar afterwards, so `f32`
//! callers get correctly rounded nodes.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Nodes and weights of the `n`-point Gauss–Hermite rule for weight `exp(-x^2)`.
pub fn gauss_hermite_f64(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Hermite order must be positive");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        // Standard asymptotic initial guesses, refined by Newton on the
        // orthonormal recurrence.
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[m - 1] = 0.0;
    }
    // Ascending order.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap());
    (idx.iter().map(|&i| x[i]).collect(), idx.iter().map(|&i| w[i]).collect())
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre_f64(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// One-dimensional rule whose weights integrate a plain function: `∫ f ≈ Σ w_i f(x_i)`.
#[derive(Debug, Clone)]
pub struct Rule1D<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Rule1D<T> {
    /// Gauss–Hermite matched to `exp(−(x−c)²/2s²)`; the Gaussian weight is
    /// folded back into the weights so any integrand can be passed.
    pub fn gauss_hermite(order: usize, center: T, scale: T) -> Self {
        let (t, w) = gauss_hermite_f64(order);
        let s = scale.to_f64_lossy() * std::f64::consts::SQRT_2;
        let c = center.to_f64_lossy();
        Self {
            nodes: t.iter().map(|&ti| T::lit(c + s * ti)).collect(),
            weights: t
                .iter()
                .zip(&w)
                .map(|(&ti, &wi)| T::lit(wi * (ti * ti).exp() * s))
                .collect(),
        }
    }

    /// Gauss–Hermite weights for `∫ f(x) exp(−(x−c)²/2s²) dx` (weight not folded in).
    pub fn gauss_hermite_weighted(order: usize, center: T, scale: T) -> Self {
        let (t, w) = gauss_hermite_f64(order);
        let s = scale.to_f64_lossy() * std::f64::consts::SQRT_2;
        let c = center.to_f64_lossy();
        Self {
            nodes: t.iter().map(|&ti| T::lit(c + s * ti)).collect(),
            weights: w.iter().map(|&wi| T::lit(wi * s)).collect(),
        }
    }

    pub fn gauss_legendre(order: usize, lower: T, upper: T) -> Self {
        let (t, w) = gauss_legendre_f64(order);
        let half = (upper - lower).to_f64_lossy() * 0.5;
        let mid = (upper + lower).to_f64_lossy() * 0.5;
        Self {
            nodes: t.iter().map(|&ti| T::lit(mid + half * ti)).collect(),
            weights: w.iter().map(|&wi| T::lit(wi * half)).collect(),
        }
    }

    /// Composite Gauss–Legendre with `panels` equal panels.
    pub fn composite_legendre(order: usize, panels: usize, lower: T, upper: T) -> Self {
        let mut nodes = Vec::with_capacity(order * panels);
        let mut weights = Vec::with_capacity(order * panels);
        let width = (upper - lower) / T::from_usize_lossy(panels);
        for k in 0..panels {
            let a = lower + width * T::from_usize_lossy(k);
            let r = Self::gauss_legendre(order, a, a + width);
            nodes.extend(r.nodes);
            weights.extend(r.weights);
        }
        Self { nodes, weights }
    }

    pub fn trapezoid(order: usize, lower: T, upper: T) -> Self {
        let h = (upper - lower) / T::from_usize_lossy(order - 1);
        let nodes: Vec<T> = (0..order).map(|i| lower + h * T::from_usize_lossy(i)).collect();
        let weights = (0..order)
            .map(|i| if i == 0 || i + 1 == order { h * T::lit(0.5) } else { h })
            .collect();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    GaussHermite,
    GaussLegendre,
    Trapezoid,
}

/// Integration domain: a Gaussian-weighted line per axis (Hermite) or a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Gaussian { center: [T; 3], scale: [T; 3] },
    Box { lower: [T; 3], upper: [T; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub kind: QuadKind,
    pub order: usize,
    pub domain: Domain<T>,
}

impl<T: Real> QuadratureSpec<T> {
    /// Gauss–Hermite with standard-normal scaling on every axis.
    pub fn gauss_hermite(order: usize) -> Self {
        Self::gauss_hermite_scaled(order, [T::zero(); 3], [T::one(); 3])
    }

    pub fn gauss_hermite_scaled(order: usize, center: [T; 3], scale: [T; 3]) -> Self {
        Self { kind: QuadKind::GaussHermite, order, domain: Domain::Gaussian { center, scale } }
    }

    pub fn gauss_legendre(order: usize, lower: [T; 3], upper: [T; 3]) -> Self {
        Self { kind: QuadKind::GaussLegendre, order, domain: Domain::Box { lower, upper } }
    }

    pub fn trapezoid(order: usize, lower: [T; 3], upper: [T; 3]) -> Self {
        Self { kind: QuadKind::Trapezoid, order, domain: Domain::Box { lower, upper } }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidSpec(format!("quadrature order {} < 2", self.order)));
        }
        match (self.kind, self.domain) {
            (QuadKind::GaussHermite, Domain::Gaussian { scale, .. }) => {
                if scale.iter().any(|&s| !(s > T::zero())) {
                    return Err(Error::InvalidSpec("Gaussian scale must be positive".into()));
                }
            }
            (QuadKind::GaussHermite, Domain::Box { .. }) => {
                return Err(Error::InvalidSpec("Gauss-Hermite needs a gaussian-weighted domain".into()))
            }
            (_, Domain::Box { lower, upper }) => {
                if (0..3).any(|i| !(lower[i] < upper[i])) {
                    return Err(Error::InvalidSpec("interval lower bound must be below upper".into()));
                }
            }
            (_, Domain::Gaussian { .. }) => {
                return Err(Error::InvalidSpec("interval rules need a box domain".into()))
            }
        }
        Ok(())
    }

    /// The per-axis one-dimensional rules.
    pub fn rules(&self) -> Result<[Rule1D<T>; 3]> {
        self.validate()?;
        let axis = |i: usize| match (self.kind, self.domain) {
            (QuadKind::GaussHermite, Domain::Gaussian { center, scale }) => {
                Rule1D::gauss_hermite(self.order, center[i], scale[i])
            }
            (QuadKind::GaussLegendre, Domain::Box { lower, upper }) => {
                Rule1D::gauss_legendre(self.order, lower[i], upper[i])
            }
            (QuadKind::Trapezoid, Domain::Box { lower, upper }) => {
                Rule1D::trapezoid(self.order, lower[i], upper[i])
            }
            _ => unreachable!("validated above"),
        };
        Ok([axis(0), axis(1), axis(2)])
    }
}

/// Tensor-product integral of `f` over ℝ³ (or the box) with fixed summation order.
pub fn integrate<T: Real>(f: impl Fn(Vec3<T>) -> T, spec: &QuadratureSpec<T>) -> Result<T> {
    let [rx, ry, rz] = spec.rules()?;
    let mut total = T::zero();
    for (i, (&x, &wx)) in rx.nodes.iter().zip(&rx.weights).enumerate() {
        let mut sy = T::zero();
        for (j, (&y, &wy)) in ry.nodes.iter().zip(&ry.weights).enumerate() {
            let mut sz = T::zero();
            for (k, (&z, &wz)) in rz.nodes.iter().zip(&rz.weights).enumerate() {
                let v = f(Vec3::new(x, y, z));
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        node: format!("({i},{j},{k}) at ({x}, {y}, {z})"),
                    });
                }
                sz = sz + wz * v;
            }
            sy = sy + wy * sz;
        }
        total = total + wx * sy;
    }
    Ok(total)
}
