use autodeconv_core::grid::{GridFunction, UniformGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn f1(g: UniformGrid) -> GridFunction {
    GridFunction::from_fn(g, |t| t * t - 2.0 * t + 2.0).unwrap()
}

/// Uniform noise on [−1,1] rescaled to unit sup norm.
#[allow(dead_code)] // not every integration test adds noise
pub fn sup_noise(g: UniformGrid, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..g.n_nodes())
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    let x = GridFunction::new(g, raw).unwrap();
    let s = x.sup_norm();
    x.scale(1.0 / s)
}
