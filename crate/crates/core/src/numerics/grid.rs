//! Rectilinear sample grids.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform axis with `count` samples from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis<T> {
    pub min: T,
    pub max: T,
    pub count: usize,
}

impl<T: Real> Axis<T> {
    pub fn new(min: T, max: T, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidSpec(format!("axis needs at least 2 samples, got {count}")));
        }
        if !(min < max) {
            return Err(Error::InvalidSpec(format!("axis min {min} must be below max {max}")));
        }
        Ok(Self { min, max, count })
    }

    pub fn spacing(&self) -> T {
        (self.max - self.min) / T::from_usize_lossy(self.count - 1)
    }

    pub fn coord(&self, i: usize) -> T {
        self.min + self.spacing() * T::from_usize_lossy(i)
    }

    pub fn coords(&self) -> Vec<T> {
        (0..self.count).map(|i| self.coord(i)).collect()
    }
}

/// Values of type `V` on a 3D rectilinear grid, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid3<T, V> {
    pub axes: [Axis<T>; 3],
    pub values: Vec<V>,
}

impl<T: Real, V: Clone> Grid3<T, V> {
    pub fn new(axes: [Axis<T>; 3], values: Vec<V>) -> Result<Self> {
        let n = axes.iter().map(|a| a.count).product::<usize>();
        if values.len() != n {
            return Err(Error::InvalidSpec(format!("grid expects {n} values, got {}", values.len())));
        }
        Ok(Self { axes, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(axes: [Axis<T>; 3], f: impl Fn([T; 3]) -> V) -> Self {
        let mut values = Vec::with_capacity(axes.iter().map(|a| a.count).product());
        for i in 0..axes[0].count {
            for j in 0..axes[1].count {
                for k in 0..axes[2].count {
                    values.push(f([axes[0].coord(i), axes[1].coord(j), axes[2].coord(k)]));
                }
            }
        }
        Self { axes, values }
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.axes[0].count, self.axes[1].count, self.axes[2].count]
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.axes[1].count + j) * self.axes[2].count + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &V {
        &self.values[self.index(i, j, k)]
    }

    pub fn cell_volume(&self) -> T {
        self.axes.iter().fold(T::one(), |v, a| v * a.spacing())
    }
}

/// Named axis with explicit sample coordinates, used for export.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedAxis<T> {
    pub name: String,
    pub values: Vec<T>,
}

/// Scalar samples on a rectilinear grid of any dimension, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T> {
    pub axes: Vec<NamedAxis<T>>,
    pub values: Vec<T>,
}

impl<T: Real> SampledField<T> {
    pub fn new(axes: Vec<NamedAxis<T>>, values: Vec<T>) -> Result<Self> {
        let n: usize = axes.iter().map(|a| a.values.len()).product();
        if values.len() != n {
            return Err(Error::InvalidSpec(format!("field expects {n} values, got {}", values.len())));
        }
        Ok(Self { axes, values })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    /// Coordinates of flat sample `n`.
    pub fn coords_of(&self, mut n: usize) -> Vec<T> {
        let shape = self.shape();
        let mut out = vec![T::zero(); shape.len()];
        for d in (0..shape.len()).rev() {
            out[d] = self.axes[d].values[n % shape[d]];
            n /= shape[d];
        }
        out
    }
}
