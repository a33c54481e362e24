use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::fieldgrid::field::GridField;
use crate::fieldgrid::grid::ParabolicGrid;

/// Derives a stream seed for worker `k` from a base seed (SplitMix64 step).
pub fn derive_seed(base: u64, k: u64) -> u64 {
    let mut z = base.wrapping_add(k.wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Samples discrete vector white noise: iid centered Gaussians with variance
/// `1/(ht hx^3)` per component per cell, so grid pairings approximate
/// `xi(phi)` with variance `||phi||_{L2}^2` per component. Deterministic in
/// the seed.
pub fn sample_white_noise(grid: &ParabolicGrid, fiber: usize, seed: u64) -> GridField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = 1.0 / grid.vol().sqrt();
    let mut out = GridField::zeros(grid, fiber);
    for v in out.data_mut().iter_mut() {
        let z: f64 = StandardNormal.sample(&mut rng);
        *v = sigma * z;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldgrid::bumps::Profile;
    use crate::fieldgrid::testfn::{pair, TestFunction};

    #[test]
    fn deterministic_in_seed() {
        let grid = ParabolicGrid::new(8, 4, 8.0, 4.0).unwrap();
        let a = sample_white_noise(&grid, 3, 42);
        let b = sample_white_noise(&grid, 3, 42);
        assert_eq!(a.max_abs_diff(&b), 0.0);
        let c = sample_white_noise(&grid, 3, 43);
        assert!(a.max_abs_diff(&c) > 0.0);
    }

    #[test]
    fn component_means_are_centered() {
        let grid = ParabolicGrid::desk(8).unwrap();
        let f = sample_white_noise(&grid, 2, 7);
        let cells = grid.cells() as f64;
        let sigma = 1.0 / grid.vol().sqrt();
        for c in 0..2 {
            let mean: f64 = f
                .data()
                .iter()
                .skip(c)
                .step_by(2)
                .sum::<f64>()
                / cells;
            let se = sigma / cells.sqrt();
            assert!(mean.abs() < 5.0 * se, "component {c} mean {mean} vs se {se}");
        }
    }

    #[test]
    fn pairing_variance_matches_l2_norm() {
        // Var[xi(phi)] = ||phi||_{L2}^2 per component, within 5 SE
        let grid = ParabolicGrid::new(32, 8, 2.0, 4.0).unwrap();
        let tf = TestFunction::new(Profile::Bump, 0.9, [1.0, 2.0, 2.0, 2.0]);
        let w = tf.sample(&grid).unwrap();
        let l2sq: f64 = w.data().iter().map(|v| v * v).sum::<f64>() * grid.vol();
        let nsamples = 1200;
        let mut acc = 0.0;
        for s in 0..nsamples {
            let xi = sample_white_noise(&grid, 1, derive_seed(99, s));
            let p = pair(&xi, &tf).unwrap()[0];
            acc += p * p;
        }
        let var = acc / nsamples as f64;
        // chi-square relative SE is sqrt(2/n)
        let se = (2.0 / nsamples as f64).sqrt() * l2sq;
        assert!(
            (var - l2sq).abs() < 5.0 * se,
            "variance {var} vs {l2sq} (se {se})"
        );
    }
}
