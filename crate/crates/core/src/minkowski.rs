//! Linear algebra of Minkowski 4-space with signature (+,+,+,-).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on `<v,v>` used by [`causal_character`] callers that have no better scale.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-10;

/// A vector of R^4_1 in the standard basis `(e1, e2, e3, e4)`; `e4` is timelike.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4M {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Vec4M {
    pub const ZERO: Vec4M = Vec4M::new(0.0, 0.0, 0.0, 0.0);
    pub const E1: Vec4M = Vec4M::new(1.0, 0.0, 0.0, 0.0);
    pub const E2: Vec4M = Vec4M::new(0.0, 1.0, 0.0, 0.0);
    pub const E3: Vec4M = Vec4M::new(0.0, 0.0, 1.0, 0.0);
    pub const E4: Vec4M = Vec4M::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    /// A vector of the spatial slice `span{e1, e2, e3}`.
    pub const fn spatial(x1: f64, x2: f64, x3: f64) -> Self {
        Self::new(x1, x2, x3, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn dot(self, other: Vec4M) -> f64 {
        minkowski_inner(self, other)
    }

    /// `<v, v>`.
    pub fn norm_sq(self) -> f64 {
        minkowski_inner(self, self)
    }

    /// Largest absolute coordinate.
    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Euclidean cross product of the spatial parts; the result has no `e4` part.
    pub fn cross3(self, other: Vec4M) -> Vec4M {
        Vec4M::spatial(
            self.x2 * other.x3 - self.x3 * other.x2,
            self.x3 * other.x1 - self.x1 * other.x3,
            self.x1 * other.x2 - self.x2 * other.x1,
        )
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }
}

impl fmt::Display for Vec4M {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x1, self.x2, self.x3, self.x4)
    }
}

impl Add for Vec4M {
    type Output = Vec4M;
    fn add(self, o: Vec4M) -> Vec4M {
        Vec4M::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl AddAssign for Vec4M {
    fn add_assign(&mut self, o: Vec4M) {
        *self = *self + o;
    }
}

impl Sub for Vec4M {
    type Output = Vec4M;
    fn sub(self, o: Vec4M) -> Vec4M {
        Vec4M::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Neg for Vec4M {
    type Output = Vec4M;
    fn neg(self) -> Vec4M {
        Vec4M::new(-self.x1, -self.x2, -self.x3, -self.x4)
    }
}

impl Mul<f64> for Vec4M {
    type Output = Vec4M;
    fn mul(self, s: f64) -> Vec4M {
        Vec4M::new(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)
    }
}

impl Mul<Vec4M> for f64 {
    type Output = Vec4M;
    fn mul(self, v: Vec4M) -> Vec4M {
        v * self
    }
}

/// `<a,b> = a1 b1 + a2 b2 + a3 b3 - a4 b4`.
pub fn minkowski_inner(a: Vec4M, b: Vec4M) -> f64 {
    a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3 - a.x4 * b.x4
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

impl fmt::Display for CausalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CausalClass::Spacelike => "spacelike",
            CausalClass::Timelike => "timelike",
            CausalClass::Lightlike => "lightlike",
            CausalClass::Zero => "zero",
        };
        f.write_str(s)
    }
}

/// Classifies `v` by the sign of `<v,v>`. `tol` applies both to `<v,v>` and to
/// the max-norm that separates a lightlike vector from the zero vector.
pub fn causal_character(v: Vec4M, tol: f64) -> CausalClass {
    let q = v.norm_sq();
    if q > tol {
        CausalClass::Spacelike
    } else if q < -tol {
        CausalClass::Timelike
    } else if v.max_abs() > tol {
        CausalClass::Lightlike
    } else {
        CausalClass::Zero
    }
}

/// Gram matrix of the orthonormal frame `{X, Y, N1, N2}` of a timelike surface.
pub const ORTHONORMAL_GRAM: [[f64; 4]; 4] = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Gram matrix of a pseudo-orthonormal frame `{x, y, n1, n2}` with lightlike `x, y`.
pub const PSEUDO_ORTHONORMAL_GRAM: [[f64; 4]; 4] = [
    [0.0, -1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Gram matrix of the standard basis.
pub const STANDARD_GRAM: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
];

/// One measured entry of a frame's Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramEntry {
    pub first: String,
    pub second: String,
    pub measured: f64,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    /// Every unordered pair (including the diagonal), in row-major upper-triangular order.
    pub entries: Vec<GramEntry>,
    pub max_deviation: f64,
    /// Labels of the entry where the deviation is attained.
    pub worst: (String, String),
    pub tol: f64,
    pub pass: bool,
}

/// Measures all pairwise inner products of a labelled frame against a target Gram matrix.
pub fn verify_frame<S: AsRef<[f64]>>(
    vectors: &[(&str, Vec4M)],
    target_gram: &[S],
    tol: f64,
) -> Result<FrameReport> {
    let n = vectors.len();
    if !(2..=4).contains(&n) {
        return Err(Error::SizeMismatch(format!(
            "a frame needs 2 to 4 vectors, got {n}"
        )));
    }
    if target_gram.len() != n || target_gram.iter().any(|row| row.as_ref().len() != n) {
        return Err(Error::SizeMismatch(format!(
            "{n} vectors but the target Gram matrix is not {n}x{n}"
        )));
    }

    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    let mut max_deviation = 0.0_f64;
    let mut worst = (vectors[0].0.to_string(), vectors[0].0.to_string());
    for i in 0..n {
        for j in i..n {
            let measured = minkowski_inner(vectors[i].1, vectors[j].1);
            let target = target_gram[i].as_ref()[j];
            let dev = (measured - target).abs();
            // NaN must never pass
            if dev > max_deviation || dev.is_nan() {
                max_deviation = if dev.is_nan() { f64::INFINITY } else { dev };
                worst = (vectors[i].0.to_string(), vectors[j].0.to_string());
            }
            entries.push(GramEntry {
                first: vectors[i].0.to_string(),
                second: vectors[j].0.to_string(),
                measured,
                target,
            });
        }
    }
    Ok(FrameReport {
        entries,
        max_deviation,
        worst,
        tol,
        pass: max_deviation <= tol,
    })
}
