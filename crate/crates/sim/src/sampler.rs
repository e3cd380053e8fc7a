use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{SimError, SimResult};

/// Draws correlated normal estimates `theta + diag(se) chol(corr) z`.
#[derive(Clone, Debug)]
pub struct Sampler {
    chol_scaled: DMatrix<f64>,
}

impl Sampler {
    pub fn new(se: &[f64], corr: &[Vec<f64>]) -> SimResult<Self> {
        let m = se.len();
        if corr.len() != m || corr.iter().any(|r| r.len() != m) {
            return Err(SimError::Invalid(format!(
                "correlation matrix must be {m} x {m}"
            )));
        }
        for i in 0..m {
            if (corr[i][i] - 1.0).abs() > 1e-12 {
                return Err(SimError::Invalid("correlation diagonal must be 1".into()));
            }
            for j in 0..i {
                if (corr[i][j] - corr[j][i]).abs() > 1e-12 {
                    return Err(SimError::Invalid("correlation matrix must be symmetric".into()));
                }
            }
        }
        let c = DMatrix::from_fn(m, m, |i, j| corr[i][j]);
        let l = c.cholesky().ok_or(SimError::NotPositiveDefinite)?.unpack();
        let chol_scaled = DMatrix::from_diagonal(&DVector::from_column_slice(se)) * l;
        Ok(Self { chol_scaled })
    }

    pub fn dim(&self) -> usize {
        self.chol_scaled.nrows()
    }

    pub fn sample_into<R: rand::Rng>(&self, theta: &[f64], rng: &mut R, out: &mut [f64]) {
        let m = self.dim();
        let z = DVector::from_fn(m, |_, _| StandardNormal.sample(rng));
        let x = &self.chol_scaled * z;
        for j in 0..m {
            out[j] = theta[j] + x[j];
        }
    }

    pub fn sample<R: rand::Rng>(&self, theta: &[f64], rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.sample_into(theta, rng, &mut out);
        out
    }
}

/// Independent stream for replication `rep` under master seed `seed`.
pub fn replication_rng(seed: u64, rep: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}
