//! Truncated Taylor polynomials in three variables (forward-mode AD).
//!
//! A `Jet` holds the Taylor coefficients of a function about a point up to a
//! fixed total degree. Arithmetic propagates them exactly, so the mixed
//! partial `∂^α g` is `α! · coeff(α)` with no truncation error.

use crate::scalar::Real;
use std::ops::{Add, Mul, Neg, Sub};

/// Highest total degree a jet can carry.
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    degree: usize,
    // Dense (degree+1)^3 storage; entries with a+b+c > degree stay zero.
    c: Vec<T>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

/// All multi-indices of total order exactly `n` in three variables.
pub fn multi_indices(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for b in (0..=n - a).rev() {
            out.push([a, b, n - a - b]);
        }
    }
    out
}

/// `n! / (a! b! c!)`.
pub fn multinomial(alpha: [usize; 3]) -> f64 {
    factorial(alpha[0] + alpha[1] + alpha[2]) / (factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]))
}

/// `a! b! c!`.
pub fn multi_factorial(alpha: [usize; 3]) -> f64 {
    factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2])
}

impl<T: Real> Jet<T> {
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.degree + 1;
        (a * n + b) * n + c
    }

    pub fn constant(value: T, degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "jet degree {degree} above {MAX_DEGREE}");
        let n = degree + 1;
        let mut c = vec![T::zero(); n * n * n];
        c[0] = value;
        Self { degree, c }
    }

    /// The coordinate `x_axis` expanded about `value`.
    pub fn variable(axis: usize, value: T, degree: usize) -> Self {
        let mut j = Self::constant(value, degree);
        if degree >= 1 {
            let mut e = [0; 3];
            e[axis] = 1;
            let i = j.idx(e[0], e[1], e[2]);
            j.c[i] = T::one();
        }
        j
    }

    /// Coordinates x, y, z about `point`.
    pub fn coordinates(point: [T; 3], degree: usize) -> [Self; 3] {
        [
            Self::variable(0, point[0], degree),
            Self::variable(1, point[1], degree),
            Self::variable(2, point[2], degree),
        ]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    pub fn coeff(&self, alpha: [usize; 3]) -> T {
        if alpha.iter().sum::<usize>() > self.degree {
            return T::zero();
        }
        self.c[self.idx(alpha[0], alpha[1], alpha[2])]
    }

    /// Mixed partial derivative `∂^α` at the expansion point.
    pub fn derivative(&self, alpha: [usize; 3]) -> T {
        self.coeff(alpha) * T::lit(multi_factorial(alpha))
    }

    pub fn scale(&self, k: T) -> Self {
        Self { degree: self.degree, c: self.c.iter().map(|&v| v * k).collect() }
    }

    pub fn add_const(&self, k: T) -> Self {
        let mut out = self.clone();
        out.c[0] = out.c[0] + k;
        out
    }

    /// `1 / self` via the geometric series about the constant term.
    pub fn recip(&self) -> Self {
        let c0 = self.c[0];
        let inv = T::one() / c0;
        // δ = (self − c0)/c0, result = inv Σ (−δ)^k
        let mut delta = self.scale(-inv);
        delta.c[0] = T::zero();
        let mut term = Self::constant(T::one(), self.degree);
        let mut sum = term.clone();
        for _ in 0..self.degree {
            term = &term * &delta;
            sum = &sum + &term;
        }
        sum.scale(inv)
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

impl<T: Real> Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, o: &Jet<T>) -> Jet<T> {
        assert_eq!(self.degree, o.degree);
        Jet { degree: self.degree, c: self.c.iter().zip(&o.c).map(|(&a, &b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, o: &Jet<T>) -> Jet<T> {
        assert_eq!(self.degree, o.degree);
        Jet { degree: self.degree, c: self.c.iter().zip(&o.c).map(|(&a, &b)| a - b).collect() }
    }
}

impl<T: Real> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, o: &Jet<T>) -> Jet<T> {
        assert_eq!(self.degree, o.degree);
        let d = self.degree;
        let mut out = Jet::constant(T::zero(), d);
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    let u = self.c[self.idx(a, b, c)];
                    if u == T::zero() {
                        continue;
                    }
                    let rest = d - a - b - c;
                    for e in 0..=rest {
                        for f in 0..=rest - e {
                            for g in 0..=rest - e - f {
                                let v = o.c[o.idx(e, f, g)];
                                if v == T::zero() {
                                    continue;
                                }
                                let k = out.idx(a + e, b + f, c + g);
                                out.c[k] = out.c[k] + u * v;
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
