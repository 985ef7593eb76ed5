//! Rectangular sample grids in the `(u, v)` parameter plane.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `nu x nv` points spaced evenly over `[u_min, u_max] x [v_min, v_max]`, ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2 {
    pub u_min: f64,
    pub u_max: f64,
    pub nu: usize,
    pub v_min: f64,
    pub v_max: f64,
    pub nv: usize,
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl Grid2 {
    pub fn new(u: (f64, f64), nu: usize, v: (f64, f64), nv: usize) -> Result<Self> {
        let grid = Self {
            u_min: u.0,
            u_max: u.1,
            nu,
            v_min: v.0,
            v_max: v.1,
            nv,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 2 || self.nv < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid counts must be at least 2, got {} x {}",
                self.nu, self.nv
            )));
        }
        for (lo, hi, axis) in [(self.u_min, self.u_max, "u"), (self.v_min, self.v_max, "v")] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::EmptyInterval(format!("{axis} range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u_at(&self, i: usize) -> f64 {
        linspace(self.u_min, self.u_max, self.nu, i)
    }

    pub fn v_at(&self, j: usize) -> f64 {
        linspace(self.v_min, self.v_max, self.nv, j)
    }

    /// Points in row-major order, `u` outer.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nu {
            for j in 0..self.nv {
                out.push((self.u_at(i), self.v_at(j)));
            }
        }
        out
    }

    /// `n` uniformly random points in the rectangle from a fixed seed.
    pub fn random_points(&self, n: usize, seed: u64) -> Vec<(f64, f64)> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                (
                    rng.gen_range(self.u_min..=self.u_max),
                    rng.gen_range(self.v_min..=self.v_max),
                )
            })
            .collect()
    }
}
