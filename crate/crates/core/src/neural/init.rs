use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Matrix, NeuralError};

/// Seeded generator used everywhere randomness is needed. ChaCha8 gives the
/// same stream on every platform.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform Glorot initialization in `±sqrt(6 / (rows + cols))`.
pub fn glorot_init(rows: usize, cols: usize, seed: u64) -> Result<Matrix, NeuralError> {
    glorot_init_with(rows, cols, &mut seeded_rng(seed))
}

pub fn glorot_init_with<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Result<Matrix, NeuralError> {
    if rows == 0 || cols == 0 {
        return Err(NeuralError::Dimension(format!("glorot_init needs positive dims, got {}x{}", rows, cols)));
    }
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    let data = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    Matrix::from_vec(rows, cols, data)
}
