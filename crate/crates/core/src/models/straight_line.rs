use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use crate::data::{load_shared, Dataset};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::rng::{wrap, Rng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraightLineParams {
    pub m: f64,
    pub b: f64,
    pub sigma: f64,
}

/// Linear regression `y_i ~ N(m x_i + b, σ²)` with priors
/// `m, b ~ N(0, 1000²)` and `ln σ ~ U(-10, 10)`.
#[derive(Debug, Clone)]
pub struct StraightLine {
    data: Arc<Dataset>,
}

pub const PRIOR_SD: f64 = 1e3;

impl StraightLine {
    /// Two columns per row: `x y`.
    pub fn new(data: Arc<Dataset>) -> Result<Self> {
        if data.num_columns() != 2 {
            return Err(Error::InvalidArgument(format!(
                "straight line data needs 2 columns, found {}",
                data.num_columns()
            )));
        }
        Ok(StraightLine { data })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(load_shared(path)?)
    }

    pub fn x(&self) -> &[f64] {
        self.data.column(0)
    }

    pub fn y(&self) -> &[f64] {
        self.data.column(1)
    }

    /// Fifty points on `x ∈ [0, 10]` from the line `y = 2x - 3` with noise
    /// sd 1.5. The bundled `straight_line.txt` was written by this function
    /// with seed 2016.
    pub fn synthetic_dataset(seed: u64) -> Dataset {
        let mut rng = Rng::new(seed);
        let x: Vec<f64> = (0..50).map(|i| 10.0 * i as f64 / 49.0).collect();
        let y: Vec<f64> = x.iter().map(|&x| 2.0 * x - 3.0 + 1.5 * rng.randn()).collect();
        Dataset::from_columns(vec![x, y]).expect("equal lengths")
    }
}

/// `Σ_i [-½ ln(2πσ²) - (y_i - m x_i - b)² / (2σ²)]`.
pub fn straightline_log_likelihood(params: &StraightLineParams, x: &[f64], y: &[f64]) -> f64 {
    let var = params.sigma * params.sigma;
    let norm = -0.5 * (2.0 * PI * var).ln();
    x.iter()
        .zip(y)
        .map(|(&x, &y)| {
            let r = y - (params.m * x + params.b);
            norm - 0.5 * r * r / var
        })
        .sum()
}

impl Model for StraightLine {
    type Params = StraightLineParams;

    fn from_prior(&self, rng: &mut Rng) -> StraightLineParams {
        StraightLineParams {
            m: PRIOR_SD * rng.randn(),
            b: PRIOR_SD * rng.randn(),
            sigma: (-10.0 + 20.0 * rng.rand()).exp(),
        }
    }

    fn perturb(&self, params: &StraightLineParams, rng: &mut Rng) -> (StraightLineParams, f64) {
        let mut p = *params;
        let mut log_h = 0.0;
        match rng.rand_int(3) {
            0 => {
                log_h -= -0.5 * (p.m / PRIOR_SD).powi(2);
                p.m += PRIOR_SD * rng.randh();
                log_h += -0.5 * (p.m / PRIOR_SD).powi(2);
            }
            1 => {
                log_h -= -0.5 * (p.b / PRIOR_SD).powi(2);
                p.b += PRIOR_SD * rng.randh();
                log_h += -0.5 * (p.b / PRIOR_SD).powi(2);
            }
            _ => {
                // uniform prior on ln σ: step in log space and wrap
                let log_sigma = wrap(p.sigma.ln() + 20.0 * rng.randh(), -10.0, 10.0);
                p.sigma = log_sigma.exp();
            }
        }
        (p, log_h)
    }

    fn log_likelihood(&self, params: &StraightLineParams) -> f64 {
        straightline_log_likelihood(params, self.x(), self.y())
    }

    fn print(&self, params: &StraightLineParams) -> Vec<f64> {
        vec![params.m, params.b, params.sigma]
    }

    fn description(&self) -> String {
        "m, b, sigma".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::format_fields;

    fn model(x: Vec<f64>, y: Vec<f64>) -> StraightLine {
        StraightLine::new(Arc::new(Dataset::from_columns(vec![x, y]).unwrap())).unwrap()
    }

    #[test]
    fn single_point_likelihoods() {
        let p = StraightLineParams {
            m: 0.0,
            b: 0.0,
            sigma: 1.0,
        };
        let half_log_2pi = 0.5 * (2.0 * PI).ln();
        let l = model(vec![7.3], vec![0.0]).log_likelihood(&p);
        assert!((l + half_log_2pi).abs() < 1e-15);
        assert!((l + 0.9189385332046727).abs() < 1e-12);
        let l = model(vec![7.3], vec![2.0]).log_likelihood(&p);
        assert!((l - (-half_log_2pi - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn exact_fit_only_pays_normalisation() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|x| 1.5 * x - 2.0).collect();
        let p = StraightLineParams {
            m: 1.5,
            b: -2.0,
            sigma: 2.0,
        };
        let l = model(x, y).log_likelihood(&p);
        assert!((l - (-20.0 * 0.5 * (8.0 * PI).ln())).abs() < 1e-9);
    }

    #[test]
    fn matches_direct_evaluation() {
        let data = StraightLine::synthetic_dataset(5);
        let m = StraightLine::new(Arc::new(data.clone())).unwrap();
        let p = StraightLineParams {
            m: 1.9,
            b: -2.5,
            sigma: 1.3,
        };
        // product of normal densities, logged at the end
        let mut direct = 1.0f64;
        let mut log_direct = 0.0;
        for (x, y) in data.column(0).iter().zip(data.column(1)) {
            let mu = p.m * x + p.b;
            direct *= (-(y - mu).powi(2) / (2.0 * p.sigma * p.sigma)).exp()
                / (p.sigma * (2.0 * PI).sqrt());
            if direct < 1e-200 {
                log_direct += direct.ln();
                direct = 1.0;
            }
        }
        log_direct += direct.ln();
        assert!((m.log_likelihood(&p) - log_direct).abs() < 1e-10);
    }

    #[test]
    fn proposals_follow_prior_ratio() {
        let m = model(vec![0.0], vec![0.0]);
        let mut rng = Rng::new(3);
        let p = m.from_prior(&mut rng);
        for _ in 0..1000 {
            let (q, log_h) = m.perturb(&p, &mut rng);
            let changed = [q.m != p.m, q.b != p.b, q.sigma != p.sigma];
            assert!(changed.iter().filter(|&&c| c).count() <= 1);
            if q.m != p.m {
                let expected = -0.5 * (q.m / 1e3).powi(2) + 0.5 * (p.m / 1e3).powi(2);
                assert!((log_h - expected).abs() < 1e-9);
            } else if q.sigma != p.sigma {
                assert_eq!(log_h, 0.0);
                assert!(q.sigma.ln() >= -10.0 - 1e-12 && q.sigma.ln() < 10.0 + 1e-12);
            }
        }
    }

    #[test]
    fn prior_draws() {
        let m = model(vec![0.0], vec![0.0]);
        let mut rng = Rng::new(4);
        let draws: Vec<_> = (0..10_000).map(|_| m.from_prior(&mut rng)).collect();
        let ms: Vec<f64> = draws.iter().map(|p| p.m).collect();
        let mean = ms.iter().sum::<f64>() / ms.len() as f64;
        let sd = (ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / ms.len() as f64).sqrt();
        assert!(mean.abs() < 30.0, "{mean}");
        assert!((sd / 1e3 - 1.0).abs() < 0.03, "{sd}");
        let ls: Vec<f64> = draws.iter().map(|p| p.sigma.ln()).collect();
        let d = crate::testutil::ks_statistic(&ls, |x| ((x + 10.0) / 20.0).clamp(0.0, 1.0));
        assert!(crate::testutil::ks_p_value(d, ls.len()) > 0.01);
        // successive draws are independent
        let a: Vec<f64> = ms.iter().step_by(2).copied().collect();
        let b: Vec<f64> = ms.iter().skip(1).step_by(2).copied().collect();
        let corr = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64 / 1e6;
        assert!(corr.abs() < 0.05, "{corr}");
    }

    #[test]
    fn print_and_description() {
        let m = model(vec![0.0], vec![0.0]);
        let p = StraightLineParams {
            m: 1.0,
            b: 2.0,
            sigma: 3.0,
        };
        assert_eq!(format_fields(&m.print(&p)), "1 2 3");
        assert_eq!(m.description(), "m, b, sigma");
        assert_eq!(m.description().split(", ").count(), m.print(&p).len());
    }

    #[test]
    fn wrong_column_count_is_rejected() {
        let ds = Dataset::from_columns(vec![vec![1.0]]).unwrap();
        assert!(StraightLine::new(Arc::new(ds)).is_err());
    }
}
