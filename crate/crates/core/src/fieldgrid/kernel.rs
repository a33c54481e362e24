use std::collections::BTreeMap;
use std::f64::consts::PI;

use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::fieldgrid::bumps::smooth_step_down;
use crate::fieldgrid::field::GridField;
use crate::fieldgrid::grid::{parabolic_norm, ParabolicGrid};
use crate::fieldgrid::polyfield::PolyField;
use crate::indexcalc::PolyExp;

/// Cut-off massive heat kernel data: mass `m > 0` and a radial smooth cutoff
/// supported in the parabolic ball of radius `cutoff_radius`, identically 1
/// inside half that radius.
#[derive(Clone, Debug)]
pub struct KernelSpec {
    pub mass: f64,
    pub cutoff_radius: f64,
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec { mass: 1.0, cutoff_radius: 1.0 }
    }
}

impl KernelSpec {
    pub fn varsigma(&self, par_norm: f64) -> f64 {
        let half = self.cutoff_radius / 2.0;
        smooth_step_down((par_norm - half) / half)
    }

    /// Closed-form kernel value away from the origin cell.
    pub fn point_value(&self, rep: [f64; 4]) -> f64 {
        let t = rep[0];
        if t <= 0.0 {
            return 0.0;
        }
        let r2 = rep[1] * rep[1] + rep[2] * rep[2] + rep[3] * rep[3];
        let gauss = (4.0 * PI * t).powf(-1.5) * (-r2 / (4.0 * t) - self.mass * self.mass * t).exp();
        gauss * self.varsigma(parabolic_norm(rep))
    }
}

/// Samples the kernel at the nodes (torus-minimal representatives); the
/// singular origin node carries the analytic average of the kernel over its
/// cell.
///
/// Requires the cutoff support to embed in the torus: `T > 2r`, `L > 2r`.
pub fn kernel_field(grid: &ParabolicGrid, spec: &KernelSpec) -> Result<GridField> {
    let r = spec.cutoff_radius;
    if grid.t_len <= 2.0 * r || grid.l_len <= 2.0 * r {
        return Err(Error::SupportViolation(format!(
            "kernel cutoff radius {r} does not embed in box T = {}, L = {}",
            grid.t_len, grid.l_len
        )));
    }
    if spec.mass <= 0.0 {
        return Err(Error::Config("kernel mass must be positive".into()));
    }
    let mut out = GridField::from_fn(grid, 1, |idx, _| {
        let rep = grid.node_diff(idx, [0; 4]);
        spec.point_value(rep)
    });
    let avg = origin_cell_average(grid, spec);
    out.set([0; 4], 0, avg);
    Ok(out)
}

/// Average of `K` over the origin cell `(0, ht/2] x [-hx/2, hx/2]^3`.
///
/// Per time slice the spatial integral is exact in terms of `erf`; the cutoff
/// factor is taken at the spatial origin, which is exact whenever the cell is
/// contained in the plateau of the cutoff.
fn origin_cell_average(grid: &ParabolicGrid, spec: &KernelSpec) -> f64 {
    let ht = grid.ht();
    let hx = grid.hx();
    let m2 = spec.mass * spec.mass;
    let integrand = |t: f64| -> f64 {
        let e = erf(hx / (4.0 * t.sqrt()));
        (-m2 * t).exp() * e * e * e * spec.varsigma(t.sqrt())
    };
    // graded geometric subdivision toward t = 0 with 8-point Gauss-Legendre
    let gl_x = [
        -0.9602898564975363,
        -0.7966664774136267,
        -0.525532409916329,
        -0.18343464249564978,
        0.18343464249564978,
        0.525532409916329,
        0.7966664774136267,
        0.9602898564975363,
    ];
    let gl_w = [
        0.10122853629037669,
        0.22238103445337434,
        0.31370664587788705,
        0.36268378337836193,
        0.36268378337836193,
        0.31370664587788705,
        0.22238103445337434,
        0.10122853629037669,
    ];
    let mut total = 0.0;
    let mut hi = ht / 2.0;
    while hi > 1e-18 {
        let lo = hi / 2.0;
        let (c, h) = ((hi + lo) / 2.0, (hi - lo) / 2.0);
        let mut part = 0.0;
        for i in 0..8 {
            part += gl_w[i] * integrand(c + h * gl_x[i]);
        }
        total += part * h;
        hi = lo;
    }
    total / (ht * hx * hx * hx)
}

/// Grid moments `mu_n = sum_y K(y) rep(y)^n vol` up to a parabolic degree.
pub fn kernel_moments(
    kernel: &GridField,
    max_parabolic_degree: u32,
) -> BTreeMap<PolyExp, f64> {
    let grid = kernel.grid();
    let vol = grid.vol();
    let exps = PolyExp::up_to_parabolic_degree(max_parabolic_degree);
    let mut out: BTreeMap<PolyExp, f64> = exps.iter().map(|&n| (n, 0.0)).collect();
    let [n0, n1, n2, n3] = grid.dims();
    for t in 0..n0 {
        for x in 0..n1 {
            for y in 0..n2 {
                for z in 0..n3 {
                    let k = kernel.value([t, x, y, z], 0);
                    if k == 0.0 {
                        continue;
                    }
                    let rep = grid.node_diff([t, x, y, z], [0; 4]);
                    for (n, acc) in out.iter_mut() {
                        let mut mon = 1.0;
                        for i in 0..4 {
                            for _ in 0..n.0[i] {
                                mon *= rep[i];
                            }
                        }
                        *acc += k * mon;
                    }
                }
            }
        }
    }
    for v in out.values_mut() {
        *v *= vol;
    }
    out
}

/// Exact action of the convolution operator on a polynomial via the kernel
/// moments: `(K p)(y) = sum_k C(n,k) (-1)^{|k|_tot} mu_k (y-b)^{n-k}`.
///
/// Polynomials are invariant under the operator; the result keeps the base.
pub fn apply_kernel_to_poly(moments: &BTreeMap<PolyExp, f64>, p: &PolyField) -> PolyField {
    let mut out = PolyField::zero(p.fiber, p.base);
    for (n, coeffs) in &p.terms {
        for k0 in 0..=n.0[0] {
            for k1 in 0..=n.0[1] {
                for k2 in 0..=n.0[2] {
                    for k3 in 0..=n.0[3] {
                        let k = PolyExp([k0, k1, k2, k3]);
                        let mu = match moments.get(&k) {
                            Some(&m) => m,
                            None => panic!("kernel moments missing degree {k}"),
                        };
                        let sign = if k.total_degree() % 2 == 0 { 1.0 } else { -1.0 };
                        let w = n.binomial(&k) * sign * mu;
                        if w == 0.0 {
                            continue;
                        }
                        let rest = n.checked_sub(&k).unwrap();
                        for (c, &v) in coeffs.iter().enumerate() {
                            out.add_term(rest, c, w * v);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_for_nonpositive_time() {
        let spec = KernelSpec::default();
        assert_eq!(spec.point_value([-0.5, 0.1, 0.0, 0.0]), 0.0);
        assert_eq!(spec.point_value([0.0, 0.1, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn closed_form_inside_plateau() {
        // K at (0.1, 0) with m = 1 and the cutoff still at 1
        let spec = KernelSpec::default();
        let t = 0.1;
        let expect = (4.0 * PI * t).powf(-1.5) * (-t).exp();
        let got = spec.point_value([t, 0.0, 0.0, 0.0]);
        assert!(((got - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn grid_integral_matches_fine_quadrature() {
        // integral of the cut-off kernel against a much finer grid
        let coarse = ParabolicGrid::desk(8).unwrap();
        let fine = ParabolicGrid::desk(24).unwrap();
        let spec = KernelSpec::default();
        let kc = kernel_field(&coarse, &spec).unwrap();
        let kf = kernel_field(&fine, &spec).unwrap();
        let ic: f64 = kc.data().iter().sum::<f64>() * coarse.vol();
        let if_: f64 = kf.data().iter().sum::<f64>() * fine.vol();
        assert!(
            ((ic - if_) / if_).abs() < 0.01,
            "coarse {ic} vs fine {if_}"
        );
    }

    #[test]
    fn poly_action_preserves_degree_and_matches_moments() {
        let grid = ParabolicGrid::desk(8).unwrap();
        let spec = KernelSpec::default();
        let k = kernel_field(&grid, &spec).unwrap();
        let mu = kernel_moments(&k, 2);
        // constant polynomial: K c = c * mu_0
        let p = PolyField::monomial([0.0; 4], PolyExp::ZERO, vec![2.0]);
        let kp = apply_kernel_to_poly(&mu, &p);
        assert_eq!(kp.coeff(&PolyExp::ZERO).unwrap()[0], 2.0 * mu[&PolyExp::ZERO]);
        // affine: K (y1) = mu_0 y1 - mu_{e1}
        let p = PolyField::monomial([0.0; 4], PolyExp::e(1), vec![1.0]);
        let kp = apply_kernel_to_poly(&mu, &p);
        assert_eq!(kp.coeff(&PolyExp::e(1)).unwrap()[0], mu[&PolyExp::ZERO]);
        assert_eq!(kp.coeff(&PolyExp::ZERO).unwrap()[0], -mu[&PolyExp::e(1)]);
        assert!(kp.max_parabolic_degree() <= 1);
    }
}
