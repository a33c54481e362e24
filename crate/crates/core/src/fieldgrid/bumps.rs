use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// 1D bump `exp(-1/(1-u^2))` on `(-1, 1)`.
pub fn bump1d(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

fn bump1d_integral() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        // composite Simpson on [-1, 1]
        let n = 4096;
        let h = 2.0 / n as f64;
        let mut acc = bump1d(-1.0) + bump1d(1.0);
        for i in 1..n {
            let u = -1.0 + i as f64 * h;
            acc += bump1d(u) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    })
}

/// Smooth descending step: 1 for `w <= 0`, 0 for `w >= 1`.
pub fn smooth_step_down(w: f64) -> f64 {
    fn f(v: f64) -> f64 {
        if v <= 0.0 {
            0.0
        } else {
            (-1.0 / v).exp()
        }
    }
    let (a, b) = (f(1.0 - w), f(w));
    if a + b == 0.0 {
        return if w <= 0.0 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// Even product bump with unit integral, supported in the parabolic unit
/// ball: `phi(t, x) = N b(2t) b(sqrt2 x1) b(sqrt2 x2) b(sqrt2 x3)`.
pub fn base_bump(z: [f64; 4]) -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    let n = *NORM.get_or_init(|| {
        let ib = bump1d_integral();
        // time factor integrates to ib/2, each spatial factor to ib/sqrt2
        1.0 / ((ib / 2.0) * (ib / 2.0_f64.sqrt()).powi(3))
    });
    let s2 = 2.0_f64.sqrt();
    n * bump1d(2.0 * z[0]) * bump1d(s2 * z[1]) * bump1d(s2 * z[2]) * bump1d(s2 * z[3])
}

/// Moment-killed linear combination of parabolically rescaled copies of the
/// base bump: even, unit integral, supported in `B_{1/6}`, and all moments
/// `x^m` of parabolic degree `0 < |m| <= r-1` vanish.
#[derive(Clone, Debug)]
pub struct MomentBump {
    /// `(weight, absolute scale)` pairs.
    pub parts: Vec<(f64, f64)>,
    pub r: u32,
}

impl MomentBump {
    /// Solves the scale-combination moment system. Odd-degree moments vanish
    /// by evenness; per even parabolic degree `q` one Vandermonde-type
    /// constraint `sum_j a_j s_j^q = 0` remains.
    pub fn new(r: u32) -> Result<Self> {
        let degrees: Vec<u32> = (2..r).filter(|q| q % 2 == 0).collect();
        let k = degrees.len();
        let scales: Vec<f64> = (0..=k).map(|j| (1.0 / 6.0) * 0.5_f64.powi(j as i32)).collect();
        let mut a = DMatrix::zeros(k + 1, k + 1);
        let mut rhs = DVector::zeros(k + 1);
        for j in 0..=k {
            a[(0, j)] = 1.0;
        }
        rhs[0] = 1.0;
        for (row, &q) in degrees.iter().enumerate() {
            for (j, &s) in scales.iter().enumerate() {
                a[(row + 1, j)] = s.powi(q as i32);
            }
        }
        let lu = a.lu();
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::SingularMomentSystem(format!("r = {r}")))?;
        let parts = sol.iter().copied().zip(scales).collect();
        Ok(MomentBump { parts, r })
    }

    /// Pointwise value (support inside the parabolic ball of radius 1/6).
    pub fn eval(&self, z: [f64; 4]) -> f64 {
        let mut acc = 0.0;
        for &(a, s) in &self.parts {
            let scaled = [z[0] / (s * s), z[1] / s, z[2] / s, z[3] / s];
            acc += a * base_bump(scaled) / s.powi(5);
        }
        acc
    }

    pub fn support_radius(&self) -> f64 {
        1.0 / 6.0
    }
}

/// Named smooth profiles used for test functions and mollifiers.
#[derive(Clone, Debug)]
pub enum Profile {
    /// The even unit-integral bump supported in the parabolic unit ball.
    Bump,
    /// A moment-killed bump supported in `B_{1/6}`.
    MomentKilled(MomentBump),
}

impl Profile {
    pub fn eval(&self, z: [f64; 4]) -> f64 {
        match self {
            Profile::Bump => base_bump(z),
            Profile::MomentKilled(m) => m.eval(z),
        }
    }

    /// Parabolic radius of the support.
    pub fn support_radius(&self) -> f64 {
        match self {
            Profile::Bump => 1.0,
            Profile::MomentKilled(m) => m.support_radius(),
        }
    }
}

/// Parabolic rescaling `f^s(z) = s^{-d} f(t/s^2, x/s)` of a profile value.
pub fn rescaled_eval(profile: &Profile, s: f64, z: [f64; 4]) -> f64 {
    profile.eval([z[0] / (s * s), z[1] / s, z[2] / s, z[3] / s]) / s.powi(5)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fine tensor quadrature of `x^m f(x)` over the support box of a scale-s
    /// parabolic bump.
    fn moment(f: &dyn Fn([f64; 4]) -> f64, m: [u32; 4], s: f64, n: usize) -> f64 {
        let bt = s * s / 2.0 + 1e-12;
        let bx = s / 2.0_f64.sqrt() + 1e-12;
        let (ht, hx) = (2.0 * bt / n as f64, 2.0 * bx / n as f64);
        let mut acc = 0.0;
        for i0 in 0..n {
            let t = -bt + (i0 as f64 + 0.5) * ht;
            for i1 in 0..n {
                let x1 = -bx + (i1 as f64 + 0.5) * hx;
                for i2 in 0..n {
                    let x2 = -bx + (i2 as f64 + 0.5) * hx;
                    for i3 in 0..n {
                        let x3 = -bx + (i3 as f64 + 0.5) * hx;
                        let v = f([t, x1, x2, x3]);
                        if v != 0.0 {
                            acc += v
                                * t.powi(m[0] as i32)
                                * x1.powi(m[1] as i32)
                                * x2.powi(m[2] as i32)
                                * x3.powi(m[3] as i32);
                        }
                    }
                }
            }
        }
        acc * ht * hx * hx * hx
    }

    #[test]
    fn base_bump_has_unit_integral() {
        let v = moment(&base_bump, [0; 4], 1.0, 48);
        assert!((v - 1.0).abs() < 1e-3, "integral {v}");
    }

    #[test]
    fn moment_bump_kills_low_moments() {
        let om = MomentBump::new(3).unwrap();
        let f = |z: [f64; 4]| om.eval(z);
        let mass = moment(&f, [0; 4], 1.0 / 6.0, 40);
        assert!((mass - 1.0).abs() < 1e-3, "mass {mass}");
        // parabolic degrees 1 and 2
        for m in [
            [0u32, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [1, 0, 0, 0],
            [0, 2, 0, 0],
            [0, 1, 1, 0],
            [0, 0, 2, 0],
            [0, 0, 0, 2],
        ] {
            let v = moment(&f, m, 1.0 / 6.0, 40);
            assert!(v.abs() < 1e-8, "moment {m:?} = {v}");
        }
    }

    #[test]
    fn moment_bump_is_even() {
        let om = MomentBump::new(3).unwrap();
        let z = [0.001, 0.02, -0.03, 0.01];
        for axis in 1..4 {
            let mut zr = z;
            zr[axis] = -zr[axis];
            assert_eq!(om.eval(z), om.eval(zr));
        }
    }

    #[test]
    fn smooth_step_profile() {
        assert_eq!(smooth_step_down(-0.5), 1.0);
        assert_eq!(smooth_step_down(0.0), 1.0);
        assert_eq!(smooth_step_down(1.0), 0.0);
        let mid = smooth_step_down(0.5);
        assert!(mid > 0.0 && mid < 1.0);
    }
}
