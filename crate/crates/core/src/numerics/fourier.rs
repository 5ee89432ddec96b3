//! Momentum representation of sampled wave functions via FFT.
//!
//! Convention: `Ψ̃(p) = (2πħ)^{-3/2} ∫ Ψ(r) e^{−i p·r/ħ} d³r`, sampled on the
//! symmetric grid `p_k = (k − N/2) Δp`, `Δp = 2πħ/(N Δx)`.

use super::grid::{Axis, Grid3};
use crate::error::{Error, Result};
use crate::phase_model::ModelParams;
use crate::scalar::Real;
use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

fn momentum_axis<T: Real>(a: &Axis<T>, hbar: T) -> Axis<T> {
    let n = T::from_usize_lossy(a.count);
    let dp = T::TAU() * hbar / (n * a.spacing());
    let pmin = -dp * T::from_usize_lossy(a.count / 2);
    Axis { min: pmin, max: pmin + dp * T::from_usize_lossy(a.count - 1), count: a.count }
}

/// Applies a 1D transform along `axis` of a row-major 3D array, with a
/// per-output-index phase `post[k]` and per-input sign/phase `pre[j]`.
fn transform_axis<T: Real>(
    data: &mut [Complex<T>],
    shape: [usize; 3],
    axis: usize,
    dir: FftDirection,
    pre: &[Complex<T>],
    post: &[Complex<T>],
) {
    let n = shape[axis];
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft(n, dir);
    let stride = match axis {
        0 => shape[1] * shape[2],
        1 => shape[2],
        _ => 1,
    };
    let mut line = vec![Complex::new(T::zero(), T::zero()); n];
    let outer: Vec<usize> = (0..shape[0] * shape[1] * shape[2])
        .filter(|&flat| (flat / stride) % n == 0)
        .collect();
    for base in outer {
        for j in 0..n {
            line[j] = data[base + j * stride] * pre[j];
        }
        fft.process(&mut line);
        for k in 0..n {
            data[base + k * stride] = line[k] * post[k];
        }
    }
}

fn check_grid<T: Real>(psi: &Grid3<T, Complex<T>>, params: &ModelParams<T>) -> Result<()> {
    for (i, a) in psi.axes.iter().enumerate() {
        if a.max - a.min < T::lit(6.0) * params.sigma_r {
            return Err(Error::GridTooSmall(format!(
                "axis {i} spans {} < 6 sigma_r = {}",
                a.max - a.min,
                T::lit(6.0) * params.sigma_r
            )));
        }
    }
    Ok(())
}

/// Momentum-space amplitude of `psi`. If `p_extent` is given, every axis must
/// resolve `|p_i| ≤ p_extent` without aliasing (`p_extent ≤ πħ/Δx`).
pub fn fourier_momentum<T: Real>(
    psi: &Grid3<T, Complex<T>>,
    params: &ModelParams<T>,
    p_extent: Option<T>,
) -> Result<Grid3<T, Complex<T>>> {
    check_grid(psi, params)?;
    let hbar = params.hbar;
    if let Some(pe) = p_extent {
        for a in &psi.axes {
            let limit = T::PI() * hbar / a.spacing();
            if pe > limit {
                return Err(Error::Nyquist { requested: pe.to_f64_lossy(), limit: limit.to_f64_lossy() });
            }
        }
    }
    let shape = psi.shape();
    let mut data = psi.values.clone();
    let mut paxes = psi.axes;
    for axis in 0..3 {
        let a = psi.axes[axis];
        let pa = momentum_axis(&a, hbar);
        let n = a.count;
        let pre: Vec<Complex<T>> = (0..n)
            .map(|j| {
                // (−1)^j generalised to odd N: exp(iπ j·2⌊N/2⌋/N)
                let arg = T::TAU() * T::from_usize_lossy(j * (n / 2)) / T::from_usize_lossy(n);
                Complex::from_polar(T::one(), arg)
            })
            .collect();
        let norm = a.spacing() / (T::TAU() * hbar).sqrt();
        let post: Vec<Complex<T>> = (0..n)
            .map(|k| Complex::from_polar(norm, -pa.coord(k) * a.min / hbar))
            .collect();
        transform_axis(&mut data, shape, axis, FftDirection::Forward, &pre, &post);
        paxes[axis] = pa;
    }
    Grid3::new(paxes, data)
}

/// Inverse of [`fourier_momentum`] back onto the position axes `r_axes`.
pub fn inverse_fourier_momentum<T: Real>(
    tilde: &Grid3<T, Complex<T>>,
    r_axes: [Axis<T>; 3],
    params: &ModelParams<T>,
) -> Result<Grid3<T, Complex<T>>> {
    let hbar = params.hbar;
    let shape = tilde.shape();
    for axis in 0..3 {
        if r_axes[axis].count != shape[axis] {
            return Err(Error::InvalidSpec("position and momentum grids differ in size".into()));
        }
    }
    let mut data = tilde.values.clone();
    for axis in 0..3 {
        let a = r_axes[axis];
        let pa = tilde.axes[axis];
        let n = a.count;
        let pre: Vec<Complex<T>> = (0..n)
            .map(|k| Complex::from_polar(T::one(), pa.coord(k) * a.min / hbar))
            .collect();
        let norm = pa.spacing() / (T::TAU() * hbar).sqrt();
        let post: Vec<Complex<T>> = (0..n)
            .map(|j| {
                let arg = -T::TAU() * T::from_usize_lossy(j * (n / 2)) / T::from_usize_lossy(n);
                Complex::from_polar(norm, arg)
            })
            .collect();
        transform_axis(&mut data, shape, axis, FftDirection::Inverse, &pre, &post);
    }
    Grid3::new(r_axes, data)
}
