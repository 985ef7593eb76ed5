//! Truncated Taylor jets.
//!
//! A `Jet<K>` carries the first `K` Taylor coefficients of a scalar function
//! at a point, `c[k] = f^(k)(x0) / k!`. Arithmetic and the elementary
//! functions propagate the coefficients exactly (up to rounding), which is the
//! forward-mode form of the Leibniz and Faa di Bruno rules.
//!
//! [`Jet3`] (value plus three derivatives) is the working type of the crate;
//! [`Dual`] is used where only a first derivative of a composite quantity is
//! needed.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const K: usize> {
    coeffs: [f64; K],
}

/// Value and first three derivatives.
pub type Jet3 = Jet<4>;
/// Value and first two derivatives.
pub type Jet2 = Jet<3>;
/// Value and first derivative.
pub type Dual = Jet<2>;

const FACTORIAL: [f64; 8] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

impl<const K: usize> Jet<K> {
    pub fn constant(value: f64) -> Self {
        let mut coeffs = [0.0; K];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity function evaluated at `x`.
    pub fn variable(x: f64) -> Self {
        let mut coeffs = [0.0; K];
        coeffs[0] = x;
        if K > 1 {
            coeffs[1] = 1.0;
        }
        Self { coeffs }
    }

    /// Builds a jet from `[f, f', f'', ...]`.
    pub fn from_derivatives(derivs: [f64; K]) -> Self {
        let mut coeffs = derivs;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c /= FACTORIAL[k];
        }
        Self { coeffs }
    }

    pub fn from_taylor(coeffs: [f64; K]) -> Self {
        Self { coeffs }
    }

    pub fn taylor(&self) -> [f64; K] {
        self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// The `k`-th derivative. Panics if `k >= K`.
    pub fn deriv(&self, k: usize) -> f64 {
        self.coeffs[k] * FACTORIAL[k]
    }

    pub fn derivatives(&self) -> [f64; K] {
        let mut out = self.coeffs;
        for (k, c) in out.iter_mut().enumerate() {
            *c *= FACTORIAL[k];
        }
        out
    }

    pub fn d1(&self) -> f64 {
        self.deriv(1)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Keeps the first `M` coefficients.
    pub fn truncate<const M: usize>(&self) -> Jet<M> {
        assert!(M <= K, "cannot extend a jet by truncation");
        let mut coeffs = [0.0; M];
        coeffs.copy_from_slice(&self.coeffs[..M]);
        Jet { coeffs }
    }

    #[allow(clippy::needless_range_loop)]
    fn map_unary(self, f0: f64, derivative: impl FnOnce(Self) -> Self) -> Self {
        // y' = g(x) x'  =>  k y_k = sum_{i=1..k} i x_i d_{k-i}, where d = g(x)
        let d = derivative(self);
        let mut out = [0.0; K];
        out[0] = f0;
        for k in 1..K {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * self.coeffs[i] * d.coeffs[k - i];
            }
            out[k] = acc / k as f64;
        }
        Self { coeffs: out }
    }

    pub fn recip(self) -> Self {
        Self::constant(1.0) / self
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            n if n < 0 => self.powi(-n).recip(),
            n => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
        }
    }

    pub fn sqrt(self) -> Self {
        let s0 = self.coeffs[0].sqrt();
        let mut out = [0.0; K];
        out[0] = s0;
        for k in 1..K {
            let mut acc = self.coeffs[k];
            for i in 1..k {
                acc -= out[i] * out[k - i];
            }
            out[k] = acc / (2.0 * s0);
        }
        Self { coeffs: out }
    }

    pub fn exp(self) -> Self {
        let mut out = [0.0; K];
        out[0] = self.coeffs[0].exp();
        for k in 1..K {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * self.coeffs[i] * out[k - i];
            }
            out[k] = acc / k as f64;
        }
        Self { coeffs: out }
    }

    /// Natural logarithm; the caller guarantees a positive value.
    #[allow(clippy::needless_range_loop)]
    pub fn ln(self) -> Self {
        let a0 = self.coeffs[0];
        let mut out = [0.0; K];
        out[0] = a0.ln();
        for k in 1..K {
            let mut acc = 0.0;
            for i in 1..k {
                acc += i as f64 * out[i] * self.coeffs[k - i];
            }
            out[k] = (self.coeffs[k] - acc / k as f64) / a0;
        }
        Self { coeffs: out }
    }

    /// `ln|x|`.
    pub fn ln_abs(self) -> Self {
        self.abs().ln()
    }

    pub fn abs(self) -> Self {
        if self.coeffs[0] < 0.0 {
            -self
        } else {
            self
        }
    }

    fn sin_cos(self) -> (Self, Self) {
        let mut s = [0.0; K];
        let mut c = [0.0; K];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..K {
            let (mut sa, mut ca) = (0.0, 0.0);
            for i in 1..=k {
                let w = i as f64 * self.coeffs[i];
                sa += w * c[k - i];
                ca -= w * s[k - i];
            }
            s[k] = sa / k as f64;
            c[k] = ca / k as f64;
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn sinh_cosh(self) -> (Self, Self) {
        let mut s = [0.0; K];
        let mut c = [0.0; K];
        s[0] = self.coeffs[0].sinh();
        c[0] = self.coeffs[0].cosh();
        for k in 1..K {
            let (mut sa, mut ca) = (0.0, 0.0);
            for i in 1..=k {
                let w = i as f64 * self.coeffs[i];
                sa += w * c[k - i];
                ca += w * s[k - i];
            }
            s[k] = sa / k as f64;
            c[k] = ca / k as f64;
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sinh(self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(self) -> Self {
        self.sinh_cosh().1
    }

    pub fn asin(self) -> Self {
        let v = self.coeffs[0].asin();
        self.map_unary(v, |x| (Self::constant(1.0) - x * x).sqrt().recip())
    }

    pub fn atan(self) -> Self {
        let v = self.coeffs[0].atan();
        self.map_unary(v, |x| (Self::constant(1.0) + x * x).recip())
    }

    /// Composes an outer function given by its jet at `self.value()`.
    ///
    /// `outer` must be the jet of `g` expanded at the value of `self`
    /// (as produced by evaluating `g` on `Jet::variable(self.value())`).
    pub fn compose(self, outer: Self) -> Self {
        // Horner on the shifted series: g(x0 + dx) = sum g_k dx^k
        let mut dx = self;
        dx.coeffs[0] = 0.0;
        let mut acc = Self::constant(outer.coeffs[K - 1]);
        for k in (0..K - 1).rev() {
            acc = acc * dx + outer.coeffs[k];
        }
        acc
    }
}

macro_rules! impl_shift {
    ($($from:literal => $to:literal),*) => {$(
        impl Jet<$from> {
            /// Jet of the derivative, one order shorter.
            pub fn derivative(&self) -> Jet<$to> {
                let mut coeffs = [0.0; $to];
                for k in 0..$to {
                    coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
                }
                Jet { coeffs }
            }
        }

        impl Jet<$to> {
            /// Jet of the antiderivative taking `value` at the expansion point.
            pub fn antiderivative(&self, value: f64) -> Jet<$from> {
                let mut coeffs = [0.0; $from];
                coeffs[0] = value;
                for k in 0..$to {
                    coeffs[k + 1] = self.coeffs[k] / (k + 1) as f64;
                }
                Jet { coeffs }
            }
        }
    )*};
}

impl_shift!(4 => 3, 3 => 2, 2 => 1);

impl Jet3 {
    pub fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self::from_derivatives([value, d1, d2, d3])
    }

    pub fn d2(&self) -> f64 {
        self.deriv(2)
    }

    pub fn d3(&self) -> f64 {
        self.deriv(3)
    }
}

impl Jet2 {
    pub fn d2(&self) -> f64 {
        self.deriv(2)
    }
}

impl Dual {
    pub fn new(value: f64, d1: f64) -> Self {
        Self::from_derivatives([value, d1])
    }
}

impl<const K: usize> Add for Jet<K> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a += b;
        }
        self
    }
}

impl<const K: usize> Sub for Jet<K> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a -= b;
        }
        self
    }
}

impl<const K: usize> Neg for Jet<K> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl<const K: usize> Mul for Jet<K> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = [0.0; K];
        for (k, slot) in out.iter_mut().enumerate() {
            for i in 0..=k {
                *slot += self.coeffs[i] * o.coeffs[k - i];
            }
        }
        Self { coeffs: out }
    }
}

impl<const K: usize> Div for Jet<K> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let b0 = o.coeffs[0];
        let mut out = [0.0; K];
        for k in 0..K {
            let mut acc = self.coeffs[k];
            for i in 1..=k {
                acc -= o.coeffs[i] * out[k - i];
            }
            out[k] = acc / b0;
        }
        Self { coeffs: out }
    }
}

impl<const K: usize> Add<f64> for Jet<K> {
    type Output = Self;
    fn add(mut self, s: f64) -> Self {
        self.coeffs[0] += s;
        self
    }
}

impl<const K: usize> Sub<f64> for Jet<K> {
    type Output = Self;
    fn sub(mut self, s: f64) -> Self {
        self.coeffs[0] -= s;
        self
    }
}

impl<const K: usize> Mul<f64> for Jet<K> {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for a in self.coeffs.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl<const K: usize> Div<f64> for Jet<K> {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        self * (1.0 / s)
    }
}

impl<const K: usize> Add<Jet<K>> for f64 {
    type Output = Jet<K>;
    fn add(self, j: Jet<K>) -> Jet<K> {
        j + self
    }
}

impl<const K: usize> Sub<Jet<K>> for f64 {
    type Output = Jet<K>;
    fn sub(self, j: Jet<K>) -> Jet<K> {
        -j + self
    }
}

impl<const K: usize> Mul<Jet<K>> for f64 {
    type Output = Jet<K>;
    fn mul(self, j: Jet<K>) -> Jet<K> {
        j * self
    }
}

impl<const K: usize> Div<Jet<K>> for f64 {
    type Output = Jet<K>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, j: Jet<K>) -> Jet<K> {
        j.recip() * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    fn assert_jet(j: Jet3, expect: [f64; 4]) {
        let d = j.derivatives();
        for k in 0..4 {
            assert!(close(d[k], expect[k], 1e-13), "order {k}: {} vs {}", d[k], expect[k]);
        }
    }

    #[test]
    fn elementary_functions() {
        let x = 0.3;
        let v = Jet3::variable(x);
        assert_jet(v.sin(), [x.sin(), x.cos(), -x.sin(), -x.cos()]);
        assert_jet(v.cos(), [x.cos(), -x.sin(), -x.cos(), x.sin()]);
        assert_jet(v.exp(), [x.exp(); 4]);
        assert_jet(v.sinh(), [x.sinh(), x.cosh(), x.sinh(), x.cosh()]);
        assert_jet(v.ln(), [x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)]);
        assert_jet(
            v.sqrt(),
            [x.sqrt(), 0.5 / x.sqrt(), -0.25 * x.powf(-1.5), 0.375 * x.powf(-2.5)],
        );
        let q = 1.0 - x * x;
        assert_jet(
            v.asin(),
            [x.asin(), q.powf(-0.5), x * q.powf(-1.5), (1.0 + 2.0 * x * x) * q.powf(-2.5)],
        );
        let p = 1.0 + x * x;
        assert_jet(
            v.atan(),
            [x.atan(), 1.0 / p, -2.0 * x / (p * p), (6.0 * x * x - 2.0) / (p * p * p)],
        );
    }

    #[test]
    fn product_and_quotient_rules() {
        let x = 0.7;
        let v = Jet3::variable(x);
        // x^2 sin x
        let p = v * v * v.sin();
        let (s, c) = (x.sin(), x.cos());
        assert_jet(
            p,
            [
                x * x * s,
                2.0 * x * s + x * x * c,
                2.0 * s + 4.0 * x * c - x * x * s,
                6.0 * c - 6.0 * x * s - x * x * c,
            ],
        );
        let q = 1.0 / v;
        assert_jet(q, [1.0 / x, -1.0 / (x * x), 2.0 / x.powi(3), -6.0 / x.powi(4)]);
    }

    #[test]
    fn composition_matches_direct_evaluation() {
        let x = 0.4;
        let inner = Jet3::variable(x).sin() * 2.0 + 0.5;
        let outer = Jet3::variable(inner.value()).exp();
        let composed = inner.compose(outer);
        let direct = inner.exp();
        for k in 0..4 {
            assert!(close(composed.deriv(k), direct.deriv(k), 1e-13));
        }
    }

    #[test]
    fn shifts_round_trip() {
        let j = Jet3::new(1.0, 2.0, 3.0, 4.0);
        let d = j.derivative();
        assert_eq!(d.derivatives(), [2.0, 3.0, 4.0]);
        assert_eq!(d.antiderivative(1.0), j);
        let t: Dual = j.truncate();
        assert_eq!(t.derivatives(), [1.0, 2.0]);
    }

    #[test]
    fn powi_negative() {
        let x = 1.3;
        let j = Jet3::variable(x).powi(-2);
        assert_jet(j, [x.powi(-2), -2.0 * x.powi(-3), 6.0 * x.powi(-4), -24.0 * x.powi(-5)]);
    }
}
