//! Central finite differences on tensor stencils with Richardson extrapolation.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Highest total derivative order accepted by [`mixed_derivative`].
pub const MAX_TOTAL_ORDER: usize = 7;

/// Smallest step the stencil may reach after Richardson halving.
pub const MIN_STEP: f64 = 1e-6;

/// Per-axis step sizes plus the number of Richardson levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffStencil<T> {
    pub steps: Vec<T>,
    pub richardson: usize,
}

impl<T: Real> DiffStencil<T> {
    pub fn new(steps: Vec<T>, richardson: usize) -> Result<Self> {
        if steps.iter().any(|&h| !(h > T::zero())) {
            return Err(Error::InvalidSpec("stencil steps must be positive".into()));
        }
        Ok(Self { steps, richardson })
    }

    /// Same step on every one of `dims` axes.
    pub fn uniform(dims: usize, step: T, richardson: usize) -> Result<Self> {
        Self::new(vec![step; dims], richardson)
    }

    /// Phase-space stencil: `hr` on the three position axes, `hp` on the momentum axes.
    pub fn phase_space(hr: T, hp: T, richardson: usize) -> Result<Self> {
        Self::new(vec![hr, hr, hr, hp, hp, hp], richardson)
    }
}

/// Integer-offset weights of the second-order central stencil for the `n`-th derivative
/// (unit spacing). Odd orders are `D1 ∘ D2^((n−1)/2)`, even orders `D2^(n/2)`.
pub fn central_weights(n: usize) -> Vec<(i32, f64)> {
    fn convolve(a: &[(i32, f64)], b: &[(i32, f64)]) -> Vec<(i32, f64)> {
        let mut out: Vec<(i32, f64)> = Vec::new();
        for &(i, u) in a {
            for &(j, v) in b {
                match out.iter_mut().find(|(k, _)| *k == i + j) {
                    Some(e) => e.1 += u * v,
                    None => out.push((i + j, u * v)),
                }
            }
        }
        out.retain(|&(_, w)| w != 0.0);
        out.sort_by_key(|&(k, _)| k);
        out
    }
    let d1 = [(-1, -0.5), (1, 0.5)];
    let d2 = [(-1, 1.0), (0, -2.0), (1, 1.0)];
    let mut w = if n % 2 == 1 { d1.to_vec() } else { vec![(0, 1.0)] };
    for _ in 0..n / 2 {
        w = convolve(&w, &d2);
    }
    w
}

/// Plain tensor-product stencil estimate at fixed steps.
fn tensor_estimate<T: Real>(
    f: &dyn Fn(&[T]) -> T,
    orders: &[usize],
    steps: &[T],
    at: &[T],
) -> Result<T> {
    let axes: Vec<(usize, Vec<(i32, f64)>)> = orders
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| (i, central_weights(n)))
        .collect();
    let mut point = at.to_vec();
    let mut acc = T::zero();
    // Odometer over the per-axis stencils.
    let mut idx = vec![0usize; axes.len()];
    loop {
        let mut w = 1.0f64;
        for (slot, (axis, weights)) in axes.iter().enumerate() {
            let (off, wt) = weights[idx[slot]];
            point[*axis] = at[*axis] + steps[*axis] * T::lit(off as f64);
            w *= wt;
        }
        let v = f(&point);
        if !v.is_finite() {
            return Err(Error::NonFinite { node: format!("stencil point {:?}", point) });
        }
        acc = acc + T::lit(w) * v;
        let mut slot = 0;
        loop {
            if slot == axes.len() {
                let scale = axes
                    .iter()
                    .fold(T::one(), |s, (axis, _)| s * steps[*axis].powi(orders[*axis] as i32));
                return Ok(acc / scale);
            }
            idx[slot] += 1;
            if idx[slot] < axes[slot].1.len() {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
    }
}

/// Estimates `∂^orders f(at)` with central differences and `stencil.richardson`
/// levels of Richardson extrapolation (steps halved per level, factor 4^k).
pub fn mixed_derivative<T: Real>(
    f: &dyn Fn(&[T]) -> T,
    orders: &[usize],
    stencil: &DiffStencil<T>,
    at: &[T],
) -> Result<T> {
    if orders.len() != at.len() || stencil.steps.len() != at.len() {
        return Err(Error::InvalidSpec(format!(
            "dimension mismatch: {} orders, {} steps, {} coordinates",
            orders.len(),
            stencil.steps.len(),
            at.len()
        )));
    }
    let total: usize = orders.iter().sum();
    if total > MAX_TOTAL_ORDER {
        return Err(Error::OrderTooHigh { order: total, max: MAX_TOTAL_ORDER });
    }
    if total == 0 {
        return Ok(f(at));
    }
    let levels = stencil.richardson;
    let shrink = T::lit(2f64.powi(-(levels as i32)));
    for (i, &h) in stencil.steps.iter().enumerate() {
        if orders[i] > 0 && h * shrink < T::lit(MIN_STEP) {
            return Err(Error::StepUnderflow { step: (h * shrink).to_f64_lossy() });
        }
    }
    let mut prev: Vec<T> = Vec::with_capacity(levels + 1);
    let mut steps = stencil.steps.clone();
    for j in 0..=levels {
        let mut row = Vec::with_capacity(j + 1);
        row.push(tensor_estimate(f, orders, &steps, at)?);
        for k in 1..=j {
            let factor = T::lit(4f64.powi(k as i32));
            let r = row[k - 1] + (row[k - 1] - prev[k - 1]) / (factor - T::one());
            row.push(r);
        }
        prev = row;
        for h in steps.iter_mut() {
            *h = *h * T::lit(0.5);
        }
    }
    Ok(prev[levels])
}
