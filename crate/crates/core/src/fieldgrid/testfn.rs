use crate::error::{Error, Result};
use crate::fieldgrid::bumps::Profile;
use crate::fieldgrid::field::GridField;
use crate::fieldgrid::grid::ParabolicGrid;

/// A recentered, parabolically rescaled test function
/// `phi^lambda_x(y) = lambda^{-d} phi(R_{1/lambda}(x - y))`, `d = 5`.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub profile: Profile,
    pub lambda: f64,
    pub center: [f64; 4],
    /// Smoothness class `r` the profile is used at (informational).
    pub smoothness: u32,
}

impl TestFunction {
    pub fn new(profile: Profile, lambda: f64, center: [f64; 4]) -> Self {
        TestFunction { profile, lambda, center, smoothness: 3 }
    }

    /// Support must fit in the torus: `lambda * radius` at most half the box
    /// in space and its square at most half in time.
    pub fn check_support(&self, grid: &ParabolicGrid) -> Result<()> {
        let rad = self.lambda * self.profile.support_radius();
        if 2.0 * rad > grid.l_len || 2.0 * rad * rad > grid.t_len {
            return Err(Error::SupportViolation(format!(
                "test function at scale {} does not fit the box",
                self.lambda
            )));
        }
        Ok(())
    }

    pub fn eval_rep(&self, rep_x_minus_y: [f64; 4]) -> f64 {
        let l = self.lambda;
        let z = [
            rep_x_minus_y[0] / (l * l),
            rep_x_minus_y[1] / l,
            rep_x_minus_y[2] / l,
            rep_x_minus_y[3] / l,
        ];
        self.profile.eval(z) / l.powi(5)
    }

    /// Samples `phi^lambda_x` as a scalar grid field.
    pub fn sample(&self, grid: &ParabolicGrid) -> Result<GridField> {
        self.check_support(grid)?;
        Ok(GridField::from_fn(grid, 1, |idx, _| {
            let y = grid.coords(idx);
            let mut rep = [0.0; 4];
            grid.min_rep(
                [
                    self.center[0] - y[0],
                    self.center[1] - y[1],
                    self.center[2] - y[2],
                    self.center[3] - y[3],
                ],
                &mut rep,
            );
            self.eval_rep(rep)
        }))
    }
}

/// Riemann-sum pairing `sum_y f(y) phi^lambda_x(y) vol`, one value per fiber
/// component.
pub fn pair(field: &GridField, tf: &TestFunction) -> Result<Vec<f64>> {
    let w = tf.sample(field.grid())?;
    field.pair_with_weight(&w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_a_constant_recovers_it() {
        let grid = ParabolicGrid::desk(16).unwrap();
        let f = GridField::from_fn(&grid, 2, |_, c| 1.5 + c as f64);
        let tf = TestFunction::new(Profile::Bump, 1.0, [2.0, 2.0, 2.0, 2.0]);
        let p = pair(&f, &tf).unwrap();
        // the profile has unit integral; quadrature error at this resolution
        for (c, v) in p.iter().enumerate() {
            let expect = 1.5 + c as f64;
            assert!((v - expect).abs() < 1e-2 * expect, "{v} vs {expect}");
        }
    }

    #[test]
    fn linearity_of_pairing() {
        let grid = ParabolicGrid::new(8, 4, 8.0, 4.0).unwrap();
        let f = GridField::from_fn(&grid, 1, |idx, _| (idx[0] + 2 * idx[2]) as f64);
        let g = GridField::from_fn(&grid, 1, |idx, _| (idx[1] as f64).cos());
        let tf = TestFunction::new(Profile::Bump, 1.0, [4.0, 2.0, 2.0, 2.0]);
        let (a, b) = (2.5, -1.25);
        let mut combo = f.clone();
        combo.scale(a);
        combo.axpy(b, &g);
        let lhs = pair(&combo, &tf).unwrap()[0];
        let rhs = a * pair(&f, &tf).unwrap()[0] + b * pair(&g, &tf).unwrap()[0];
        assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn support_violation_detected() {
        let grid = ParabolicGrid::new(8, 4, 8.0, 4.0).unwrap();
        let tf = TestFunction::new(Profile::Bump, 3.0, [0.0; 4]);
        assert!(tf.sample(&grid).is_err());
    }
}
