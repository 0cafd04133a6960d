//! Noise models and hypothesis tests for comparing behaviours.

mod hypothesis;
mod noise;
mod samples;

pub use hypothesis::{gaussian_separability, two_sample_ks, two_sample_t, TestReport, TwoSampleResult};
pub use noise::{distance_sigma, distance_sigma_with, perturb, NoiseMode, NoiseSpec};
pub use samples::{read_sample_column, read_sample_table, read_samples_file};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
}

pub fn norms(v: &[f64]) -> Norms {
    Norms {
        l1: v.iter().map(|x| x.abs()).sum(),
        l2: v.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norm_examples() {
        assert_eq!(norms(&[0.0; 8]), Norms { l1: 0.0, l2: 0.0 });
        let mut e = [0.0; 8];
        e[3] = 1.0;
        assert_eq!(norms(&e), Norms { l1: 1.0, l2: 1.0 });
        let p_b = [0.5, 0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.5];
        let p_u = [0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25];
        let v: Vec<f64> = p_b.iter().zip(&p_u).map(|(a, b)| a - b).collect();
        let n = norms(&v);
        assert_eq!(n.l1, 0.5);
        assert!((n.l2 - 0.125f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn l2_never_exceeds_l1(v in proptest::collection::vec(-1.0f64..=1.0, 0..40)) {
            let n = norms(&v);
            prop_assert!(n.l2 <= n.l1 + 1e-12);
        }
    }
}
