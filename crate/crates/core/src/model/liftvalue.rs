use nalgebra::DMatrix;

use crate::fieldgrid::{GridField, ParabolicGrid, PolyField};
use crate::indexcalc::PolyExp;

/// A `Hom(W_beta, V)`-valued function split into a sampled grid part and an
/// exact polynomial part.
///
/// Fiber layout is `w * v_dim + v`. Keeping the polynomial sector symbolic is
/// what makes the vanishing-derivative and sector-zero assertions exact; the
/// two parts are differentiated consistently (stencils on the grid part,
/// exact derivatives on the polynomial part).
#[derive(Clone, Debug)]
pub struct LiftValue {
    pub w_dim: usize,
    pub v_dim: usize,
    pub grid: Option<GridField>,
    pub poly: Option<PolyField>,
}

impl LiftValue {
    pub fn zero(w_dim: usize, v_dim: usize) -> Self {
        LiftValue { w_dim, v_dim, grid: None, poly: None }
    }

    pub fn fiber(&self) -> usize {
        self.w_dim * self.v_dim
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_none() && self.poly.as_ref().map_or(true, |p| p.is_zero())
    }

    pub fn from_grid(w_dim: usize, v_dim: usize, grid: GridField) -> Self {
        debug_assert_eq!(grid.fiber(), w_dim * v_dim);
        LiftValue { w_dim, v_dim, grid: Some(grid), poly: None }
    }

    pub fn from_poly(w_dim: usize, v_dim: usize, poly: PolyField) -> Self {
        debug_assert_eq!(poly.fiber, w_dim * v_dim);
        LiftValue { w_dim, v_dim, grid: None, poly: Some(poly) }
    }

    pub fn grid_mut(&mut self, grid_shape: &ParabolicGrid) -> &mut GridField {
        if self.grid.is_none() {
            self.grid = Some(GridField::zeros(grid_shape, self.fiber()));
        }
        self.grid.as_mut().unwrap()
    }

    pub fn poly_mut(&mut self, base: [f64; 4]) -> &mut PolyField {
        if self.poly.is_none() {
            self.poly = Some(PolyField::zero(self.fiber(), base));
        }
        let p = self.poly.as_mut().unwrap();
        assert_eq!(p.base, base, "polynomial parts with mixed bases");
        p
    }

    pub fn negated(&self) -> LiftValue {
        let mut out = self.clone();
        if let Some(g) = out.grid.as_mut() {
            *g = g.negated();
        }
        if let Some(p) = out.poly.as_mut() {
            p.scale(-1.0);
        }
        out
    }

    /// `self += scale * (other ∘ block)` where `block` maps `W_self -> W_other`
    /// (entries `block[(w_other, w_self)]`), i.e. precomposition of the
    /// `Hom(W_other, V)` value with the block.
    pub fn add_scaled_composed(
        &mut self,
        scale: f64,
        other: &LiftValue,
        block: &DMatrix<f64>,
        grid_shape: &ParabolicGrid,
        poly_base: [f64; 4],
    ) {
        debug_assert_eq!(block.nrows(), other.w_dim);
        debug_assert_eq!(block.ncols(), self.w_dim);
        debug_assert_eq!(self.v_dim, other.v_dim);
        let vd = self.v_dim;
        if let Some(g) = &other.grid {
            let out = self.grid_mut(grid_shape);
            let cells = grid_shape.cells();
            let (of, sf) = (g.fiber(), out.fiber());
            let gd = g.data();
            let od = out.data_mut();
            for cell in 0..cells {
                for wg in 0..other.w_dim {
                    for wb in 0..self.w_dim {
                        let b = block[(wg, wb)];
                        if b == 0.0 {
                            continue;
                        }
                        let a = scale * b;
                        for v in 0..vd {
                            od[cell * sf + wb * vd + v] += a * gd[cell * of + wg * vd + v];
                        }
                    }
                }
            }
        }
        if let Some(p) = &other.poly {
            if !p.is_zero() {
                let wb_dim = self.w_dim;
                let mapped = p.fiber_map(self.fiber(), |out_c, in_c| {
                    let (wb, v) = (out_c / vd, out_c % vd);
                    let (wg, v2) = (in_c / vd, in_c % vd);
                    if v == v2 && wb < wb_dim {
                        block[(wg, wb)]
                    } else {
                        0.0
                    }
                });
                let rebased = mapped.rebase(poly_base);
                self.poly_mut(poly_base).axpy(scale, &rebased);
            }
        }
    }

    /// Plain `self += scale * other` (identical `W` shape and poly base).
    pub fn add_scaled(&mut self, scale: f64, other: &LiftValue, grid_shape: &ParabolicGrid) {
        debug_assert_eq!(self.w_dim, other.w_dim);
        if let Some(g) = &other.grid {
            self.grid_mut(grid_shape).axpy(scale, g);
        }
        if let Some(p) = &other.poly {
            if !p.is_zero() {
                self.poly_mut(p.base).axpy(scale, p);
            }
        }
    }

    /// Rescales each `W`-column by `s(w)`.
    pub fn scale_w_columns(&mut self, s: impl Fn(usize) -> f64) {
        let vd = self.v_dim;
        if let Some(g) = &mut self.grid {
            let fiber = g.fiber();
            for chunk in g.data_mut().chunks_mut(fiber) {
                for w in 0..self.w_dim {
                    let f = s(w);
                    if f != 1.0 {
                        for v in 0..vd {
                            chunk[w * vd + v] *= f;
                        }
                    }
                }
            }
        }
        if let Some(p) = &mut self.poly {
            for coeffs in p.terms.values_mut() {
                for w in 0..self.w_dim {
                    let f = s(w);
                    if f != 1.0 {
                        for v in 0..vd {
                            coeffs[w * vd + v] *= f;
                        }
                    }
                }
            }
        }
    }

    /// Value as a `v_dim x w_dim` matrix at a node.
    pub fn hom_at(&self, grid: &ParabolicGrid, idx: [usize; 4]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.v_dim, self.w_dim);
        if let Some(g) = &self.grid {
            for w in 0..self.w_dim {
                for v in 0..self.v_dim {
                    out[(v, w)] += g.value(idx, w * self.v_dim + v);
                }
            }
        }
        if let Some(p) = &self.poly {
            for w in 0..self.w_dim {
                for v in 0..self.v_dim {
                    out[(v, w)] += p.eval_node(grid, idx, w * self.v_dim + v);
                }
            }
        }
        out
    }

    /// Stencil derivative (grid part) plus exact derivative (poly part) of the
    /// `Hom` value at a node.
    pub fn deriv_hom_at(&self, grid: &ParabolicGrid, idx: [usize; 4], n: PolyExp) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.v_dim, self.w_dim);
        if let Some(g) = &self.grid {
            let taps = GridField::stencil_taps(grid, n);
            for w in 0..self.w_dim {
                for v in 0..self.v_dim {
                    out[(v, w)] += g.deriv_at(&taps, idx, w * self.v_dim + v);
                }
            }
        }
        if let Some(p) = &self.poly {
            let dp = p.derivative(&n);
            for w in 0..self.w_dim {
                for v in 0..self.v_dim {
                    out[(v, w)] += dp.eval_node(grid, idx, w * self.v_dim + v);
                }
            }
        }
        out
    }

    /// Pairing against a scalar weight field, as a `v_dim x w_dim` matrix.
    pub fn pair_with_weight(&self, grid: &ParabolicGrid, w: &GridField) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.v_dim, self.w_dim);
        let combined = self.materialize(grid);
        if let Some(g) = combined {
            let p = g.pair_with_weight(w).expect("pairing shapes");
            for wi in 0..self.w_dim {
                for v in 0..self.v_dim {
                    out[(v, wi)] = p[wi * self.v_dim + v];
                }
            }
        }
        out
    }

    /// Samples `grid + poly` into a single grid field (`None` if zero).
    pub fn materialize(&self, grid: &ParabolicGrid) -> Option<GridField> {
        match (&self.grid, &self.poly) {
            (None, None) => None,
            (Some(g), None) => Some(g.clone()),
            (g, Some(p)) => {
                let mut out = p.sample(grid);
                if let Some(g) = g {
                    out.axpy(1.0, g);
                }
                Some(out)
            }
        }
    }

    /// Max absolute difference of two values materialized on the grid.
    pub fn max_abs_diff(&self, other: &LiftValue, grid: &ParabolicGrid) -> f64 {
        let a = self.materialize(grid);
        let b = other.materialize(grid);
        match (a, b) {
            (None, None) => 0.0,
            (Some(a), None) => a.max_abs(),
            (None, Some(b)) => b.max_abs(),
            (Some(a), Some(b)) => a.max_abs_diff(&b),
        }
    }

    pub fn max_abs(&self, grid: &ParabolicGrid) -> f64 {
        self.materialize(grid).map_or(0.0, |g| g.max_abs())
    }
}
