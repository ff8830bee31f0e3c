//! Sweep engines producing the figure-style CSV data sets.

use std::fmt::Write as _;

use hopdim::{analytic, numerics, Method, SampleMode};

use crate::report::{fmt_prob, fmt_target};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethod {
    ClosedForm,
    Numeric,
    MonteCarlo,
}

impl SweepMethod {
    pub fn parse_list(s: &str) -> Result<Vec<SweepMethod>, CliError> {
        let mut methods = Vec::new();
        for part in s.split(',') {
            let m = match part.trim() {
                "closed_form" => SweepMethod::ClosedForm,
                "numeric" => SweepMethod::Numeric,
                "montecarlo" => SweepMethod::MonteCarlo,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown method '{other}' (expected closed_form, numeric, montecarlo)"
                    )))
                }
            };
            if !methods.contains(&m) {
                methods.push(m);
            }
        }
        if methods.is_empty() {
            return Err(CliError::Usage("empty method list".into()));
        }
        Ok(methods)
    }

    fn tag(self) -> &'static str {
        match self {
            SweepMethod::ClosedForm => Method::ClosedForm.as_str(),
            SweepMethod::Numeric => Method::NumericInversion.as_str(),
            SweepMethod::MonteCarlo => Method::MonteCarlo.as_str(),
        }
    }
}

pub struct Fig3Spec {
    pub d: u64,
    pub pf_target: f64,
    pub ncmax_list: Vec<u64>,
    pub n_lo: u64,
    pub n_hi: u64,
    pub methods: Vec<SweepMethod>,
    pub mode: SampleMode,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

struct Row {
    method: String,
    ncmax: u64,
    n: u64,
    n_ru: u64,
    mc: Option<(f64, f64, f64, u64, u64)>, // p_hat, ci_low, ci_high, samples, seed
}

/// Required resource units versus repetition count, per receiver
/// capability and method, with per-(method, ncmax) minima appended as
/// `<method>_min` rows.
pub fn sweep_fig3(spec: &Fig3Spec) -> Result<String, CliError> {
    if spec.n_lo < 1 || spec.n_hi < spec.n_lo {
        return Err(CliError::Usage(format!(
            "invalid repetition range {}..{}",
            spec.n_lo, spec.n_hi
        )));
    }
    let with_mc = spec.methods.contains(&SweepMethod::MonteCarlo);
    if with_mc && (spec.samples.is_none() || spec.seed.is_none()) {
        return Err(CliError::Usage(
            "the montecarlo method requires --samples and --seed".into(),
        ));
    }

    let mut rows: Vec<Row> = Vec::new();
    let mut minima: Vec<Row> = Vec::new();
    for &ncmax in &spec.ncmax_list {
        for &method in &spec.methods {
            let mut best: Option<(u64, u64)> = None;
            let mut emitted = false;
            for n in spec.n_lo..=spec.n_hi {
                let row = match method {
                    SweepMethod::ClosedForm => {
                        // explicit inversions exist only for ncmax 0 and 1
                        let n_ru = match ncmax {
                            0 => analytic::required_ru_no_resolution(n, spec.d, spec.pf_target)?,
                            1 => analytic::required_ru_single_resolution(n, spec.d, spec.pf_target)?,
                            _ => break,
                        };
                        Row { method: method.tag().into(), ncmax, n, n_ru, mc: None }
                    }
                    SweepMethod::Numeric => {
                        let n_ru =
                            numerics::invert_required_ru_numeric(n, spec.d, spec.pf_target, ncmax)?;
                        Row { method: method.tag().into(), ncmax, n, n_ru, mc: None }
                    }
                    SweepMethod::MonteCarlo => {
                        let (samples, seed) = (spec.samples.unwrap(), spec.seed.unwrap());
                        let result = hopdim::search_min_ru(
                            n,
                            spec.d,
                            spec.pf_target,
                            ncmax,
                            spec.mode,
                            samples,
                            seed,
                        )?;
                        // confirmation estimate at the returned size, for the
                        // interval columns
                        let scenario = hopdim::ScenarioConfig::new(spec.d, n, spec.pf_target, ncmax)?;
                        let job = hopdim::SimJob::new(
                            scenario,
                            hopdim::GridSpec::Auto { n_ru: result.n_ru },
                            spec.mode,
                            samples,
                            seed,
                        );
                        let est = hopdim::estimate_failure(&job)?;
                        Row {
                            method: method.tag().into(),
                            ncmax,
                            n,
                            n_ru: result.n_ru,
                            mc: Some((est.p_hat, est.ci_low, est.ci_high, samples, seed)),
                        }
                    }
                };
                if best.is_none_or(|(_, b)| row.n_ru < b) {
                    best = Some((n, row.n_ru));
                }
                rows.push(row);
                emitted = true;
            }
            if let (true, Some((n, n_ru))) = (emitted, best) {
                minima.push(Row {
                    method: format!("{}_min", method.tag()),
                    ncmax,
                    n,
                    n_ru,
                    mc: None,
                });
            }
        }
    }
    rows.extend(minima);

    let mut csv = String::new();
    if with_mc {
        csv.push_str("method,ncmax,n,d,pf_target,n_ru,p_hat,ci_low,ci_high,samples,seed\n");
    } else {
        csv.push_str("method,ncmax,n,d,pf_target,n_ru\n");
    }
    for row in rows {
        let _ = write!(
            csv,
            "{},{},{},{},{},{}",
            row.method,
            row.ncmax,
            row.n,
            spec.d,
            fmt_target(spec.pf_target),
            row.n_ru
        );
        if with_mc {
            match row.mc {
                Some((p_hat, ci_low, ci_high, samples, seed)) => {
                    let _ = write!(
                        csv,
                        ",{},{},{},{samples},{seed}",
                        fmt_prob(p_hat),
                        fmt_prob(ci_low),
                        fmt_prob(ci_high)
                    );
                }
                None => csv.push_str(",,,,,"),
            }
        }
        csv.push('\n');
    }
    Ok(csv)
}

pub struct Fig4Spec {
    pub d_list: Vec<u64>,
    pub pf_target: f64,
    pub ncmax_list: Vec<u64>,
}

/// Asymptotic (linear-in-d) minimum versus the reference minimum obtained
/// from the exact-in-d forms: the closed-form inversion at the optimal
/// repetition count for ncmax = 0, numeric inversion for ncmax = 1.
pub fn sweep_fig4(spec: &Fig4Spec) -> Result<String, CliError> {
    for &ncmax in &spec.ncmax_list {
        if ncmax > 1 {
            return Err(CliError::Usage(format!(
                "sweep-fig4 compares the closed-form minima, which exist only for ncmax 0 and 1 (got {ncmax})"
            )));
        }
    }
    let mut csv = String::from("d,ncmax,n_ru_min_asymptotic,n_ru_min_reference\n");
    for &d in &spec.d_list {
        for &ncmax in &spec.ncmax_list {
            let (asymptotic, reference) = match ncmax {
                0 => {
                    let asym = analytic::min_ru_no_resolution_linear(d, spec.pf_target)?;
                    // reference: closed-form inversion minimized over n
                    let n_hi = (2.0 * analytic::optimal_reps_no_resolution(spec.pf_target)?)
                        .ceil()
                        .max(30.0) as u64;
                    let reference = (1..=n_hi)
                        .map(|n| analytic::required_ru_no_resolution(n, d, spec.pf_target))
                        .collect::<Result<Vec<_>, _>>()?
                        .into_iter()
                        .min()
                        .expect("non-empty scan");
                    (asym, reference)
                }
                _ => {
                    let asym = analytic::min_ru_single_resolution(d, spec.pf_target)?;
                    let (_, reference) =
                        numerics::optimal_reps_numeric(d, spec.pf_target, ncmax)?;
                    (asym, reference)
                }
            };
            let _ = writeln!(csv, "{d},{ncmax},{asymptotic},{reference}");
        }
    }
    Ok(csv)
}
