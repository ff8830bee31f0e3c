//! Shared domain types.

use serde::Serialize;

use crate::error::{Error, Result};

/// How hopping patterns are drawn from the grid.
///
/// `Latin` places every repetition on a distinct frequency channel *and* a
/// distinct time slot. `Uniform` draws any n-subset of the grid cells with
/// equal probability; it is the selection rule used by the simulation recipe
/// this estimator mirrors. Latin is the protocol's own constraint and the
/// default elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    Latin,
    Uniform,
}

impl SampleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleMode::Latin => "latin",
            SampleMode::Uniform => "uniform",
        }
    }
}

impl std::fmt::Display for SampleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SampleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "latin" => Ok(SampleMode::Latin),
            "uniform" => Ok(SampleMode::Uniform),
            other => Err(Error::Precondition(format!(
                "unknown sample mode '{other}' (expected 'latin' or 'uniform')"
            ))),
        }
    }
}

/// One interference scenario: `d` persistent interferers, `n` packet
/// repetitions per frame, a failure-probability target and the receiver's
/// collision-resolution capability `ncmax`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioConfig {
    /// Number of interfering devices (>= 0).
    pub d: u64,
    /// Packet repetitions per frame (>= 1).
    pub n: u64,
    /// Target failure probability, in (0, 1).
    pub pf_target: f64,
    /// Maximum number of simultaneous interferers the receiver can resolve
    /// on one resource unit (>= 0).
    pub ncmax: u64,
}

impl ScenarioConfig {
    pub fn new(d: u64, n: u64, pf_target: f64, ncmax: u64) -> Result<Self> {
        let cfg = Self {
            d,
            n,
            pf_target,
            ncmax,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Precondition("n must be >= 1".into()));
        }
        if !(self.pf_target > 0.0 && self.pf_target < 1.0) {
            return Err(Error::Precondition(format!(
                "pf_target must lie in (0, 1), got {}",
                self.pf_target
            )));
        }
        Ok(())
    }
}

/// Which computation produced a dimensioning value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    NumericInversion,
    MonteCarlo,
    LinearApprox,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::NumericInversion => "numeric_inversion",
            Method::MonteCarlo => "monte_carlo",
            Method::LinearApprox => "linear_approx",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Empirical failure probability with its 95% Wilson confidence interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureEstimate {
    pub failures: u64,
    pub samples: u64,
    /// `failures / samples`.
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Master seed the estimate was produced from.
    pub seed: u64,
}

impl FailureEstimate {
    /// Wilson score interval at 95% confidence; exact 0/1 endpoints at the
    /// extremes, which is why Wilson is used instead of the Wald interval.
    pub fn from_counts(failures: u64, samples: u64, seed: u64) -> Self {
        assert!(samples >= 1, "samples must be >= 1");
        assert!(failures <= samples);
        let s = samples as f64;
        let p_hat = failures as f64 / s;
        // z for the two-sided 95% interval
        const Z: f64 = 1.959963984540054;
        let z2 = Z * Z;
        let denom = 1.0 + z2 / s;
        let center = (p_hat + z2 / (2.0 * s)) / denom;
        let half = Z * (p_hat * (1.0 - p_hat) / s + z2 / (4.0 * s * s)).sqrt() / denom;
        // the Wilson bound at an observed extreme is exactly that extreme
        let ci_low = if failures == 0 { 0.0 } else { (center - half).max(0.0) };
        let ci_high = if failures == samples {
            1.0
        } else {
            (center + half).min(1.0)
        };
        Self {
            failures,
            samples,
            p_hat,
            ci_low,
            ci_high,
            seed,
        }
    }
}

/// A dimensioning answer: repetition count, resource units, and provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensioningResult {
    pub n: u64,
    pub n_ru: u64,
    pub method: Method,
    /// Failure probability achieved at `n_ru`, when the method measures one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pf_achieved: Option<f64>,
    /// Candidate n_ru values skipped during a latin-mode search because no
    /// feasible factorization exists.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped_n_ru: Vec<u64>,
}

impl DimensioningResult {
    pub fn new(n: u64, n_ru: u64, method: Method, pf_achieved: Option<f64>) -> Self {
        debug_assert!(n_ru >= n);
        Self {
            n,
            n_ru,
            method,
            pf_achieved,
            skipped_n_ru: Vec::new(),
        }
    }
}
