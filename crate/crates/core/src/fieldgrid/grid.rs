use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic parabolic grid: time-periodic `[0, T)` with `Nt` nodes, space
/// `[0, L)^3` with `Nx` nodes per axis, and `ht = hx^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolicGrid {
    pub nt: usize,
    pub nx: usize,
    pub t_len: f64,
    pub l_len: f64,
}

impl ParabolicGrid {
    pub fn new(nt: usize, nx: usize, t_len: f64, l_len: f64) -> Result<Self> {
        let g = ParabolicGrid { nt, nx, t_len, l_len };
        let (ht, hx) = (g.ht(), g.hx());
        if nt == 0 || nx == 0 || t_len <= 0.0 || l_len <= 0.0 {
            return Err(Error::Config("grid extents must be positive".into()));
        }
        if ((ht - hx * hx) / ht).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "parabolic consistency violated: ht = {ht} != hx^2 = {}",
                hx * hx
            )));
        }
        Ok(g)
    }

    /// Grid with `hx = L/nx`, `ht = hx^2` and the time extent rounded to an
    /// integral number of steps (errors if `t_len/hx^2` is not integral).
    pub fn with_box(nx: usize, l_len: f64, t_len: f64) -> Result<Self> {
        let hx = l_len / nx as f64;
        let nt = t_len / (hx * hx);
        if (nt - nt.round()).abs() > 1e-9 || nt < 0.5 {
            return Err(Error::Config(format!(
                "time extent {t_len} is not an integral number of steps ht = {}",
                hx * hx
            )));
        }
        Self::new(nt.round() as usize, nx, t_len, l_len)
    }

    /// Default desk-scale grid: box `T = L = 4`, `Nx` in `{8, 16, 32}`.
    pub fn desk(nx: usize) -> Result<Self> {
        Self::with_box(nx, 4.0, 4.0)
    }

    pub fn ht(&self) -> f64 {
        self.t_len / self.nt as f64
    }

    pub fn hx(&self) -> f64 {
        self.l_len / self.nx as f64
    }

    /// Cell volume `ht * hx^3`.
    pub fn vol(&self) -> f64 {
        self.ht() * self.hx().powi(3)
    }

    pub fn cells(&self) -> usize {
        self.nt * self.nx * self.nx * self.nx
    }

    pub fn dims(&self) -> [usize; 4] {
        [self.nt, self.nx, self.nx, self.nx]
    }

    /// Coordinates of a node.
    pub fn coords(&self, idx: [usize; 4]) -> [f64; 4] {
        [
            idx[0] as f64 * self.ht(),
            idx[1] as f64 * self.hx(),
            idx[2] as f64 * self.hx(),
            idx[3] as f64 * self.hx(),
        ]
    }

    /// Axis extents `[T, L, L, L]`.
    pub fn extents(&self) -> [f64; 4] {
        [self.t_len, self.l_len, self.l_len, self.l_len]
    }

    /// Torus-minimal representative of a coordinate difference, per axis in
    /// `(-S/2, S/2]`.
    pub fn min_rep(&self, diff: [f64; 4], out: &mut [f64; 4]) {
        let ext = self.extents();
        for i in 0..4 {
            let s = ext[i];
            let mut r = diff[i].rem_euclid(s);
            if r > s / 2.0 {
                r -= s;
            }
            out[i] = r;
        }
    }

    /// Minimal representative of the difference of two nodes.
    pub fn node_diff(&self, a: [usize; 4], b: [usize; 4]) -> [f64; 4] {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let mut out = [0.0; 4];
        self.min_rep(
            [ca[0] - cb[0], ca[1] - cb[1], ca[2] - cb[2], ca[3] - cb[3]],
            &mut out,
        );
        out
    }

    /// Parabolic norm `(t^2 + x1^4 + x2^4 + x3^4)^(1/4)` of a torus-minimal
    /// representative.
    pub fn parabolic_dist(&self, diff: [f64; 4]) -> f64 {
        let mut r = [0.0; 4];
        self.min_rep(diff, &mut r);
        parabolic_norm(r)
    }
}

/// Parabolic norm on R^4 (no wrapping).
pub fn parabolic_norm(x: [f64; 4]) -> f64 {
    (x[0] * x[0] + x[1].powi(4) + x[2].powi(4) + x[3].powi(4)).powf(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabolic_norm_examples() {
        assert_eq!(parabolic_norm([0.0; 4]), 0.0);
        assert_eq!(parabolic_norm([1.0, 0.0, 0.0, 0.0]), 1.0);
        let v = parabolic_norm([0.0, 1.0, 1.0, 1.0]);
        assert!((v - 3.0_f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn grid_consistency() {
        let g = ParabolicGrid::desk(16).unwrap();
        assert_eq!(g.nt, 64);
        assert_eq!(g.ht(), g.hx() * g.hx());
        assert!(ParabolicGrid::new(10, 16, 4.0, 4.0).is_err());
        // the coarse exact-algebra grid: 8 x 4^3 with box T = 8, L = 4
        let g = ParabolicGrid::new(8, 4, 8.0, 4.0).unwrap();
        assert_eq!(g.hx(), 1.0);
        assert_eq!(g.ht(), 1.0);
    }

    #[test]
    fn min_rep_is_half_open() {
        let g = ParabolicGrid::new(8, 4, 8.0, 4.0).unwrap();
        let mut r = [0.0; 4];
        g.min_rep([0.0, 2.0, -2.0, 3.0], &mut r);
        assert_eq!(r[1], 2.0); // +L/2 kept
        assert_eq!(r[2], 2.0); // -L/2 maps to +L/2
        assert_eq!(r[3], -1.0);
        let d = g.parabolic_dist([7.5, 0.0, 0.0, 0.0]);
        assert!((d - (0.25f64).sqrt()).abs() < 1e-12);
    }
}
