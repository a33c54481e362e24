//! Periodic parabolic grid, white-noise sampling, mollification, the cut-off
//! massive heat kernel, convolution, test-function pairing, finite
//! differences, Taylor subtraction and bump-function construction.

pub mod bumps;
mod fft;
mod field;
mod grid;
mod kernel;
mod noise;
mod polyfield;
mod testfn;

use rustfft::num_complex::Complex;

pub use bumps::{base_bump, rescaled_eval, smooth_step_down, MomentBump, Profile};
pub use fft::Fft4;
pub use field::GridField;
pub use grid::{parabolic_norm, ParabolicGrid};
pub use kernel::{apply_kernel_to_poly, kernel_field, kernel_moments, KernelSpec};
pub use noise::{derive_seed, sample_white_noise};
pub use polyfield::{scalar_poly_mul, PolyField};
pub use testfn::{pair, TestFunction};

use crate::error::{Error, Result};
use crate::indexcalc::{GradedValue, HomParams, PolyExp};

/// How periodic convolutions are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvMode {
    /// FFT product; the default.
    Fft,
    /// Direct summation with reflection-paired accumulation; bitwise
    /// equivariant under spatial reflections (used by the symmetry suites).
    DirectSym,
}

/// Cached spectral multiplier of a scalar kernel for repeated convolutions.
pub struct KernelFft {
    grid: ParabolicGrid,
    fft: Fft4,
    khat: Vec<Complex<f64>>,
}

impl KernelFft {
    pub fn new(kernel: &GridField) -> Result<Self> {
        if kernel.fiber() != 1 {
            return Err(Error::ShapeMismatch("kernel must be a scalar field".into()));
        }
        let grid = kernel.grid().clone();
        let fft = Fft4::new(grid.dims());
        let mut khat = kernel.component_complex(0);
        fft.forward(&mut khat);
        Ok(KernelFft { grid, fft, khat })
    }

    pub fn grid(&self) -> &ParabolicGrid {
        &self.grid
    }

    pub fn spectrum(&self) -> &[Complex<f64>] {
        &self.khat
    }

    /// Periodic convolution `(K * f)(x) = sum_y K(y) f(x-y) vol`, fiberwise.
    pub fn convolve(&self, field: &GridField) -> Result<GridField> {
        if *field.grid() != self.grid {
            return Err(Error::ShapeMismatch("convolution grids differ".into()));
        }
        let vol = self.grid.vol();
        let mut out = GridField::zeros(&self.grid, field.fiber());
        for c in 0..field.fiber() {
            let mut buf = field.component_complex(c);
            self.fft.forward(&mut buf);
            for (v, k) in buf.iter_mut().zip(&self.khat) {
                *v *= k * vol;
            }
            self.fft.inverse(&mut buf);
            out.set_component_real(c, &buf);
        }
        Ok(out)
    }
}

/// One-shot FFT convolution (`KernelFft` caches the kernel spectrum when the
/// same kernel is reused).
pub fn convolve(kernel: &GridField, field: &GridField) -> Result<GridField> {
    KernelFft::new(kernel)?.convolve(field)
}

/// Brute-force periodic convolution; the oracle for the FFT path.
pub fn convolve_direct(kernel: &GridField, field: &GridField) -> Result<GridField> {
    if kernel.fiber() != 1 || kernel.grid() != field.grid() {
        return Err(Error::ShapeMismatch("kernel/field mismatch".into()));
    }
    let grid = field.grid();
    let vol = grid.vol();
    let [n0, n1, n2, n3] = grid.dims();
    let fiber = field.fiber();
    let mut out = GridField::zeros(grid, fiber);
    for t in 0..n0 {
        for x in 0..n1 {
            for y in 0..n2 {
                for z in 0..n3 {
                    for c in 0..fiber {
                        let mut acc = 0.0;
                        for yt in 0..n0 {
                            for yx in 0..n1 {
                                for yy in 0..n2 {
                                    for yz in 0..n3 {
                                        let k = kernel.value([yt, yx, yy, yz], 0);
                                        if k == 0.0 {
                                            continue;
                                        }
                                        let src = [
                                            (t + n0 - yt) % n0,
                                            (x + n1 - yx) % n1,
                                            (y + n2 - yy) % n2,
                                            (z + n3 - yz) % n3,
                                        ];
                                        acc += k * field.value(src, c);
                                    }
                                }
                            }
                        }
                        out.set([t, x, y, z], c, acc * vol);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Direct periodic convolution with reflection-paired accumulation: spatial
/// taps are grouped into `{+m, -m}` sign pairs summed innermost, which makes
/// the result bitwise equivariant under each spatial reflection when the
/// kernel samples are reflection symmetric.
pub fn convolve_direct_sym(kernel: &GridField, field: &GridField) -> Result<GridField> {
    if kernel.fiber() != 1 || kernel.grid() != field.grid() {
        return Err(Error::ShapeMismatch("kernel/field mismatch".into()));
    }
    let grid = field.grid();
    let vol = grid.vol();
    let [n0, n1, n2, n3] = grid.dims();
    let fiber = field.fiber();
    let mut out = GridField::zeros(grid, fiber);

    let branches = |n: usize, m: usize| -> Vec<usize> {
        if m == 0 || 2 * m == n {
            vec![m]
        } else {
            vec![m, n - m]
        }
    };

    for t in 0..n0 {
        for x in 0..n1 {
            for y in 0..n2 {
                for z in 0..n3 {
                    for c in 0..fiber {
                        let mut acc = 0.0;
                        for yt in 0..n0 {
                            for m1 in 0..=(n1 / 2) {
                                let b1 = branches(n1, m1);
                                for m2 in 0..=(n2 / 2) {
                                    let b2 = branches(n2, m2);
                                    for m3 in 0..=(n3 / 2) {
                                        let b3 = branches(n3, m3);
                                        // paired sums, innermost axis first
                                        let mut s1 = 0.0;
                                        for &y1 in &b1 {
                                            let mut s2 = 0.0;
                                            for &y2 in &b2 {
                                                let mut s3 = 0.0;
                                                for &y3 in &b3 {
                                                    let k =
                                                        kernel.value([yt, y1, y2, y3], 0);
                                                    if k != 0.0 {
                                                        let src = [
                                                            (t + n0 - yt) % n0,
                                                            (x + n1 - y1) % n1,
                                                            (y + n2 - y2) % n2,
                                                            (z + n3 - y3) % n3,
                                                        ];
                                                        s3 += k * field.value(src, c);
                                                    }
                                                }
                                                s2 += s3;
                                            }
                                            s1 += s2;
                                        }
                                        acc += s1;
                                    }
                                }
                            }
                        }
                        out.set([t, x, y, z], c, acc * vol);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Samples the parabolically rescaled mollifier `eta^rho` and normalizes it
/// to unit grid mass, so that mollifying a constant reproduces it exactly.
pub fn mollifier_field(grid: &ParabolicGrid, rho: f64) -> Result<GridField> {
    if rho <= 0.0 {
        return Err(Error::Config("mollification scale must be positive".into()));
    }
    if 2.0 * rho > grid.l_len || 2.0 * rho * rho > grid.t_len {
        return Err(Error::SupportViolation(format!(
            "mollifier at scale {rho} does not fit the box"
        )));
    }
    let profile = Profile::Bump;
    let mut field = GridField::from_fn(grid, 1, |idx, _| {
        let rep = grid.node_diff(idx, [0; 4]);
        rescaled_eval(&profile, rho, rep)
    });
    let mass: f64 = field.data().iter().sum::<f64>() * grid.vol();
    if mass <= 0.0 {
        return Err(Error::Config(format!(
            "mollifier at scale {rho} is unresolved on this grid"
        )));
    }
    field.scale(1.0 / mass);
    Ok(field)
}

/// Mollification `field * eta^rho` by periodic convolution.
pub fn mollify(field: &GridField, rho: f64, mode: ConvMode) -> Result<GridField> {
    let eta = mollifier_field(field.grid(), rho)?;
    match mode {
        ConvMode::Fft => convolve(&eta, field),
        ConvMode::DirectSym => convolve_direct_sym(&eta, field),
    }
}

/// Taylor subtraction at a node: removes the jet of parabolic degree below
/// `grade_cutoff` built with the construction stencils, evaluated around the
/// torus-minimal representative of `(y - x)`.
pub fn taylor_subtract(
    field: &GridField,
    x: [usize; 4],
    grade_cutoff: &GradedValue,
    _params: &HomParams,
) -> GridField {
    let grid = field.grid().clone();
    let mut out = field.clone();
    let base = grid.coords(x);
    for deg in 0u32.. {
        if GradedValue::from_int(deg as i64) >= *grade_cutoff {
            break;
        }
        for n in PolyExp::with_parabolic_degree(deg) {
            let taps = GridField::stencil_taps(&grid, n);
            let nf = n.factorial();
            let mut coeffs = vec![0.0; field.fiber()];
            for (c, v) in coeffs.iter_mut().enumerate() {
                *v = field.deriv_at(&taps, x, c) / nf;
            }
            let term = PolyField::monomial(base, n, coeffs);
            let sampled = term.sample(&grid);
            out.axpy(-1.0, &sampled);
        }
    }
    out
}
