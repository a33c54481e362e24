use std::collections::BTreeMap;

use crate::fieldgrid::field::GridField;
use crate::fieldgrid::grid::ParabolicGrid;
use crate::indexcalc::PolyExp;

/// Exact polynomial field with a vector fiber: `p(y) = sum_n c_n (y - base)^n`
/// where `(y - base)` is taken with the torus-minimal representative when the
/// polynomial is evaluated on a grid.
///
/// Lift entries with negative population are polynomial; keeping them
/// symbolic makes the algebraic zero assertions exact on the grid.
#[derive(Clone, Debug)]
pub struct PolyField {
    pub fiber: usize,
    pub base: [f64; 4],
    /// Monomial exponent -> fiber coefficient vector.
    pub terms: BTreeMap<PolyExp, Vec<f64>>,
}

impl PolyField {
    pub fn zero(fiber: usize, base: [f64; 4]) -> Self {
        PolyField { fiber, base, terms: BTreeMap::new() }
    }

    /// Single monomial with a given fiber coefficient vector.
    pub fn monomial(base: [f64; 4], n: PolyExp, coeff: Vec<f64>) -> Self {
        let fiber = coeff.len();
        let mut terms = BTreeMap::new();
        if coeff.iter().any(|&v| v != 0.0) {
            terms.insert(n, coeff);
        }
        PolyField { fiber, base, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_parabolic_degree(&self) -> u32 {
        self.terms.keys().map(|n| n.parabolic_degree()).max().unwrap_or(0)
    }

    pub fn coeff(&self, n: &PolyExp) -> Option<&Vec<f64>> {
        self.terms.get(n)
    }

    pub fn add_term(&mut self, n: PolyExp, c: usize, v: f64) {
        if v == 0.0 {
            return;
        }
        self.terms.entry(n).or_insert_with(|| vec![0.0; self.fiber])[c] += v;
    }

    /// `self += a * other`; bases must agree (rebase first otherwise).
    pub fn axpy(&mut self, a: f64, other: &PolyField) {
        assert_eq!(self.fiber, other.fiber);
        assert_eq!(self.base, other.base, "rebase before summing polynomial parts");
        for (n, coeffs) in &other.terms {
            let slot = self.terms.entry(*n).or_insert_with(|| vec![0.0; self.fiber]);
            for (s, &v) in slot.iter_mut().zip(coeffs) {
                *s += a * v;
            }
        }
        self.prune();
    }

    pub fn scale(&mut self, a: f64) {
        for coeffs in self.terms.values_mut() {
            for v in coeffs.iter_mut() {
                *v *= a;
            }
        }
        self.prune();
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.iter().any(|&v| v != 0.0));
    }

    /// Exact symbolic derivative `d^n self`.
    pub fn derivative(&self, n: &PolyExp) -> PolyField {
        let mut out = PolyField::zero(self.fiber, self.base);
        for (m, coeffs) in &self.terms {
            let Some(m2) = m.checked_sub(n) else { continue };
            // falling factorial m! / m2!
            let mut fall = 1.0;
            for i in 0..4 {
                for j in 0..n.0[i] {
                    fall *= (m.0[i] - j) as f64;
                }
            }
            for (c, &v) in coeffs.iter().enumerate() {
                out.add_term(m2, c, fall * v);
            }
        }
        out
    }

    /// Value of component `c` at a coordinate difference already reduced to
    /// its minimal representative.
    pub fn eval_rep(&self, rep: [f64; 4], c: usize) -> f64 {
        let mut acc = 0.0;
        for (n, coeffs) in &self.terms {
            let v = coeffs[c];
            if v == 0.0 {
                continue;
            }
            let mut mon = 1.0;
            for i in 0..4 {
                for _ in 0..n.0[i] {
                    mon *= rep[i];
                }
            }
            acc += v * mon;
        }
        acc
    }

    /// Value at a grid node using the torus-minimal representative of
    /// `(node - base)`.
    pub fn eval_node(&self, grid: &ParabolicGrid, idx: [usize; 4], c: usize) -> f64 {
        let coords = grid.coords(idx);
        let mut rep = [0.0; 4];
        grid.min_rep(
            [
                coords[0] - self.base[0],
                coords[1] - self.base[1],
                coords[2] - self.base[2],
                coords[3] - self.base[3],
            ],
            &mut rep,
        );
        self.eval_rep(rep, c)
    }

    /// Samples the polynomial on the grid.
    pub fn sample(&self, grid: &ParabolicGrid) -> GridField {
        GridField::from_fn(grid, self.fiber, |idx, c| self.eval_node(grid, idx, c))
    }

    /// Rewrites the polynomial around a new base point (exact binomial
    /// expansion; changes which torus representative is used at evaluation).
    pub fn rebase(&self, new_base: [f64; 4]) -> PolyField {
        if new_base == self.base {
            return self.clone();
        }
        // (y - b)^n = ((y - b') + (b' - b))^n
        let shift = [
            new_base[0] - self.base[0],
            new_base[1] - self.base[1],
            new_base[2] - self.base[2],
            new_base[3] - self.base[3],
        ];
        let mut out = PolyField::zero(self.fiber, new_base);
        for (n, coeffs) in &self.terms {
            for k0 in 0..=n.0[0] {
                for k1 in 0..=n.0[1] {
                    for k2 in 0..=n.0[2] {
                        for k3 in 0..=n.0[3] {
                            let k = PolyExp([k0, k1, k2, k3]);
                            let rest = n.checked_sub(&k).unwrap();
                            let mut w = n.binomial(&k);
                            for i in 0..4 {
                                for _ in 0..rest.0[i] {
                                    w *= shift[i];
                                }
                            }
                            if w == 0.0 {
                                continue;
                            }
                            for (c, &v) in coeffs.iter().enumerate() {
                                out.add_term(k, c, v * w);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Taylor truncation: keeps only terms of parabolic degree < `deg_bound`.
    pub fn truncate_degree(&self, deg_bound: u32) -> PolyField {
        let mut out = PolyField::zero(self.fiber, self.base);
        for (n, coeffs) in &self.terms {
            if n.parabolic_degree() < deg_bound {
                out.terms.insert(*n, coeffs.clone());
            }
        }
        out
    }

    /// Remaps the fiber through a dense matrix acting from the left:
    /// `out_c = sum_d mat[c][d] self_d` with `mat` given row-major
    /// `(out_fiber x in_fiber)`.
    pub fn fiber_map(&self, out_fiber: usize, mat: impl Fn(usize, usize) -> f64) -> PolyField {
        let mut out = PolyField::zero(out_fiber, self.base);
        for (n, coeffs) in &self.terms {
            for c in 0..out_fiber {
                let mut acc = 0.0;
                for (d, &v) in coeffs.iter().enumerate() {
                    if v != 0.0 {
                        acc += mat(c, d) * v;
                    }
                }
                out.add_term(*n, c, acc);
            }
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

/// Scalar polynomial product of two coefficient maps (no bases involved;
/// callers manage a shared base).
pub fn scalar_poly_mul(
    a: &BTreeMap<PolyExp, f64>,
    b: &BTreeMap<PolyExp, f64>,
) -> BTreeMap<PolyExp, f64> {
    let mut out = BTreeMap::new();
    for (na, &va) in a {
        for (nb, &vb) in b {
            if va * vb != 0.0 {
                *out.entry(na.add(nb)).or_insert(0.0) += va * vb;
            }
        }
    }
    out.retain(|_, v| *v != 0.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_and_eval() {
        // p(y) = 3 (y-b)_1^2 (y-b)_2
        let mut p = PolyField::zero(1, [0.0; 4]);
        p.add_term(PolyExp([0, 2, 1, 0]), 0, 3.0);
        let d = p.derivative(&PolyExp::e(1));
        assert_eq!(d.coeff(&PolyExp([0, 1, 1, 0])).unwrap()[0], 6.0);
        assert_eq!(p.eval_rep([0.0, 2.0, 1.0, 0.0], 0), 12.0);
    }

    #[test]
    fn rebase_is_exact() {
        let mut p = PolyField::zero(1, [0.0; 4]);
        p.add_term(PolyExp([0, 2, 0, 0]), 0, 1.0);
        p.add_term(PolyExp([1, 0, 0, 0]), 0, -2.0);
        let q = p.rebase([0.5, 1.0, 0.0, 0.0]);
        // compare values on unwrapped points
        for y in [[0.0, 0.0, 0.0, 0.0], [0.25, 0.5, 1.0, -1.0], [1.0, -0.5, 0.0, 2.0]] {
            let rep_p = [y[0], y[1], y[2], y[3]];
            let rep_q = [y[0] - 0.5, y[1] - 1.0, y[2], y[3]];
            assert!((p.eval_rep(rep_p, 0) - q.eval_rep(rep_q, 0)).abs() < 1e-14);
        }
    }

    #[test]
    fn truncation_keeps_low_degree() {
        let mut p = PolyField::zero(1, [0.0; 4]);
        p.add_term(PolyExp::ZERO, 0, 1.0);
        p.add_term(PolyExp::e(1), 0, 2.0);
        p.add_term(PolyExp([1, 0, 0, 0]), 0, 4.0); // parabolic degree 2
        let t = p.truncate_degree(2);
        assert_eq!(t.terms.len(), 2);
    }
}
