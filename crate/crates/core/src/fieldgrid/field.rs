use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::fieldgrid::grid::ParabolicGrid;
use crate::indexcalc::PolyExp;

/// Function on a periodic parabolic grid with values in a flat fiber of
/// dimension `fiber` (components are stored last, cell-major otherwise).
#[derive(Clone, Debug)]
pub struct GridField {
    grid: ParabolicGrid,
    fiber: usize,
    data: Vec<f64>,
}

impl GridField {
    pub fn zeros(grid: &ParabolicGrid, fiber: usize) -> Self {
        GridField { grid: grid.clone(), fiber, data: vec![0.0; grid.cells() * fiber] }
    }

    pub fn from_fn(
        grid: &ParabolicGrid,
        fiber: usize,
        mut f: impl FnMut([usize; 4], usize) -> f64,
    ) -> Self {
        let mut out = Self::zeros(grid, fiber);
        let [n0, n1, n2, n3] = grid.dims();
        let mut pos = 0;
        for t in 0..n0 {
            for x in 0..n1 {
                for y in 0..n2 {
                    for z in 0..n3 {
                        for c in 0..fiber {
                            out.data[pos] = f([t, x, y, z], c);
                            pos += 1;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &ParabolicGrid {
        &self.grid
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn flat(&self, idx: [usize; 4], c: usize) -> usize {
        let [_, n1, n2, n3] = self.grid.dims();
        (((idx[0] * n1 + idx[1]) * n2 + idx[2]) * n3 + idx[3]) * self.fiber + c
    }

    #[inline]
    pub fn value(&self, idx: [usize; 4], c: usize) -> f64 {
        self.data[self.flat(idx, c)]
    }

    #[inline]
    pub fn set(&mut self, idx: [usize; 4], c: usize, v: f64) {
        let i = self.flat(idx, c);
        self.data[i] = v;
    }

    pub fn same_shape(&self, other: &GridField) -> bool {
        self.grid == other.grid && self.fiber == other.fiber
    }

    pub fn check_same_shape(&self, other: &GridField) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::ShapeMismatch(format!(
                "{:?}/{} vs {:?}/{}",
                self.grid.dims(),
                self.fiber,
                other.grid.dims(),
                other.fiber
            )));
        }
        Ok(())
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &GridField) {
        debug_assert!(self.same_shape(other));
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    pub fn scale(&mut self, a: f64) {
        for x in self.data.iter_mut() {
            *x *= a;
        }
    }

    pub fn negated(&self) -> GridField {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = -*v;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &GridField) -> f64 {
        debug_assert!(self.same_shape(other));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Component `c` as a complex buffer for FFT work.
    pub fn component_complex(&self, c: usize) -> Vec<Complex<f64>> {
        let cells = self.grid.cells();
        let mut out = Vec::with_capacity(cells);
        for i in 0..cells {
            out.push(Complex::new(self.data[i * self.fiber + c], 0.0));
        }
        out
    }

    pub fn set_component_real(&mut self, c: usize, buf: &[Complex<f64>]) {
        for (i, v) in buf.iter().enumerate() {
            self.data[i * self.fiber + c] = v.re;
        }
    }

    /// Fixed stencil taps for `d^n`: forward first-order in time, centered
    /// first-order and compact second-order in space, composed per axis.
    /// Construction and verification always share these taps.
    pub fn stencil_taps(grid: &ParabolicGrid, n: PolyExp) -> Vec<([i64; 4], f64)> {
        let ht = grid.ht();
        let hx = grid.hx();
        let mut taps: Vec<([i64; 4], f64)> = vec![([0; 4], 1.0)];
        let mut apply = |taps: &mut Vec<([i64; 4], f64)>, axis: usize, elem: &[(i64, f64)]| {
            let mut combined: std::collections::BTreeMap<[i64; 4], f64> =
                std::collections::BTreeMap::new();
            for &(off, w) in taps.iter() {
                for &(d, ew) in elem {
                    let mut o2 = off;
                    o2[axis] += d;
                    *combined.entry(o2).or_insert(0.0) += w * ew;
                }
            }
            *taps = combined.into_iter().collect();
        };
        for _ in 0..n.0[0] {
            apply(&mut taps, 0, &[(1, 1.0 / ht), (0, -1.0 / ht)]);
        }
        for axis in 1..4 {
            let mut k = n.0[axis];
            while k >= 2 {
                apply(
                    &mut taps,
                    axis,
                    &[(1, 1.0 / (hx * hx)), (0, -2.0 / (hx * hx)), (-1, 1.0 / (hx * hx))],
                );
                k -= 2;
            }
            if k == 1 {
                apply(&mut taps, axis, &[(1, 1.0 / (2.0 * hx)), (-1, -1.0 / (2.0 * hx))]);
            }
        }
        taps
    }

    fn offset_index(&self, idx: [usize; 4], off: [i64; 4]) -> [usize; 4] {
        let dims = self.grid.dims();
        let mut out = [0usize; 4];
        for i in 0..4 {
            let n = dims[i] as i64;
            out[i] = (idx[i] as i64 + off[i]).rem_euclid(n) as usize;
        }
        out
    }

    /// Stencil derivative of component `c` at a node.
    pub fn deriv_at(&self, taps: &[([i64; 4], f64)], idx: [usize; 4], c: usize) -> f64 {
        let mut acc = 0.0;
        for &(off, w) in taps {
            acc += w * self.value(self.offset_index(idx, off), c);
        }
        acc
    }

    /// Finite-difference derivative field `d^n self` with the fixed stencils.
    pub fn fd_derivative(&self, n: PolyExp) -> GridField {
        let taps = Self::stencil_taps(&self.grid, n);
        let [n0, n1, n2, n3] = self.grid.dims();
        let mut out = Self::zeros(&self.grid, self.fiber);
        for t in 0..n0 {
            for x in 0..n1 {
                for y in 0..n2 {
                    for z in 0..n3 {
                        for c in 0..self.fiber {
                            let v = self.deriv_at(&taps, [t, x, y, z], c);
                            out.set([t, x, y, z], c, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Reflection of the spatial axis `axis` (1..=3): node `i -> (N - i) mod N`.
    pub fn reflect_spatial(&self, axis: usize) -> GridField {
        assert!((1..=3).contains(&axis));
        let dims = self.grid.dims();
        let mut out = Self::zeros(&self.grid, self.fiber);
        let [n0, n1, n2, n3] = dims;
        for t in 0..n0 {
            for x in 0..n1 {
                for y in 0..n2 {
                    for z in 0..n3 {
                        let mut src = [t, x, y, z];
                        src[axis] = (dims[axis] - src[axis]) % dims[axis];
                        for c in 0..self.fiber {
                            let v = self.value(src, c);
                            out.set([t, x, y, z], c, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Periodic translation by whole cells: `out(x) = self(x - shift)`.
    pub fn translate(&self, shift: [usize; 4]) -> GridField {
        let dims = self.grid.dims();
        let mut out = Self::zeros(&self.grid, self.fiber);
        let [n0, n1, n2, n3] = dims;
        for t in 0..n0 {
            for x in 0..n1 {
                for y in 0..n2 {
                    for z in 0..n3 {
                        let src = [
                            (t + n0 - shift[0] % n0) % n0,
                            (x + n1 - shift[1] % n1) % n1,
                            (y + n2 - shift[2] % n2) % n2,
                            (z + n3 - shift[3] % n3) % n3,
                        ];
                        for c in 0..self.fiber {
                            let v = self.value(src, c);
                            out.set([t, x, y, z], c, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Pairing against a scalar weight field: `sum_y f(y) w(y) vol`, one value
    /// per fiber component, accumulated in cell order.
    pub fn pair_with_weight(&self, w: &GridField) -> Result<Vec<f64>> {
        if self.grid != w.grid || w.fiber != 1 {
            return Err(Error::ShapeMismatch("weight must be a scalar field on the same grid".into()));
        }
        let vol = self.grid.vol();
        let mut out = vec![0.0; self.fiber];
        for cell in 0..self.grid.cells() {
            let wv = w.data[cell];
            if wv == 0.0 {
                continue;
            }
            for c in 0..self.fiber {
                out[c] += self.data[cell * self.fiber + c] * wv;
            }
        }
        for v in out.iter_mut() {
            *v *= vol;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> ParabolicGrid {
        ParabolicGrid::new(8, 4, 8.0, 4.0).unwrap()
    }

    #[test]
    fn fd_of_constant_is_zero() {
        let g = grid();
        let f = GridField::from_fn(&g, 2, |_, c| 3.25 + c as f64);
        for n in [PolyExp::e(0), PolyExp::e(1), PolyExp([0, 0, 2, 0])] {
            let d = f.fd_derivative(n);
            assert_eq!(d.max_abs(), 0.0);
        }
    }

    #[test]
    fn centered_stencil_exact_on_affine() {
        let g = grid();
        // f(y) = y1 via minimal representative of (y - 0)
        let f = GridField::from_fn(&g, 1, |idx, _| g.node_diff(idx, [0; 4])[1]);
        let d = f.fd_derivative(PolyExp::e(1));
        // exactly 1 away from the wrap seam (hx = 1, reps 0,1,2,-1)
        assert_eq!(d.value([0, 0, 0, 0], 0), 1.0);
        assert_eq!(d.value([0, 1, 0, 0], 0), 1.0);
    }

    #[test]
    fn second_stencil_is_compact() {
        let g = grid();
        let taps = GridField::stencil_taps(&g, PolyExp([0, 2, 0, 0]));
        assert_eq!(taps.len(), 3);
        let h2 = g.hx() * g.hx();
        assert!(taps.iter().any(|&(o, w)| o == [0, 0, 0, 0] && (w + 2.0 / h2).abs() < 1e-15));
    }

    #[test]
    fn reflection_is_an_involution() {
        let g = grid();
        let f = GridField::from_fn(&g, 3, |idx, c| (idx[1] * 7 + idx[2] * 3 + idx[3] + c) as f64);
        for axis in 1..=3 {
            let r = f.reflect_spatial(axis).reflect_spatial(axis);
            assert_eq!(f.max_abs_diff(&r), 0.0);
        }
    }

    #[test]
    fn pairing_accumulates_fiberwise() {
        let g = grid();
        let f = GridField::from_fn(&g, 2, |_, c| (c + 1) as f64);
        let mut w = GridField::zeros(&g, 1);
        w.set([0, 0, 0, 0], 0, 1.0);
        w.set([1, 2, 3, 0], 0, 2.0);
        let p = f.pair_with_weight(&w).unwrap();
        assert!((p[0] - 3.0 * g.vol()).abs() < 1e-15);
        assert!((p[1] - 6.0 * g.vol()).abs() < 1e-15);
    }
}
