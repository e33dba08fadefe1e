//! Shortest non-contractible loop from a set of seed loops.
//!
//! Each seed is shortened to its limit. Limits shorter than epsilon are
//! contractible (joining the base point to every sample gives the
//! contraction) and are discarded with a warning; the shortest remaining
//! certified limit is the answer. Non-contractibility of the seeds is the
//! caller's claim and is not checked.

use rayon::prelude::*;
use serde::Serialize;

use super::certify::{certify_geodesic, CertificationResult, CertifyParams};
use super::SweepError;
use crate::curve::PolyCurve;
use crate::shortening::{shorten_to_limit, ShorteningParams, ShorteningStatus, ShorteningTrace};
use crate::space::GeodesicSpace;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SystoleWarning {
    /// The seed converged to a loop shorter than epsilon.
    ContractibleSeed { seed: usize, length: f64 },
    /// The seed converged to a long loop that failed certification.
    UncertifiedLimit { seed: usize, max_defect: f64 },
}

#[derive(Debug, Clone)]
pub struct SeedOutcome<P> {
    pub trace: Option<ShorteningTrace>,
    pub limit: Option<PolyCurve<P>>,
    pub length: Option<f64>,
    pub certification: Option<CertificationResult>,
    pub contractible: bool,
    /// Error message when shortening failed outright.
    pub error: Option<String>,
}

impl<P> SeedOutcome<P> {
    pub fn converged(&self) -> bool {
        self.trace
            .as_ref()
            .is_some_and(|t| t.status == ShorteningStatus::Converged)
    }
}

#[derive(Debug, Clone)]
pub struct SystoleBest<P> {
    pub seed: usize,
    pub curve: PolyCurve<P>,
    pub length: f64,
    pub certification: CertificationResult,
}

#[derive(Debug, Clone)]
pub struct SystoleReport<P> {
    pub seeds: Vec<SeedOutcome<P>>,
    pub best: Option<SystoleBest<P>>,
    pub warnings: Vec<SystoleWarning>,
}

pub fn systole_search<S: GeodesicSpace + ?Sized>(
    space: &S,
    seeds: &[PolyCurve<S::Point>],
    params: &ShorteningParams,
    certify: &CertifyParams,
) -> Result<SystoleReport<S::Point>, SweepError> {
    let epsilon = space.epsilon();
    let outcomes = seeds
        .par_iter()
        .map(|seed| -> Result<SeedOutcome<S::Point>, SweepError> {
            let (limit, trace) = match shorten_to_limit(space, seed, params) {
                Ok(r) => r,
                Err(e) => {
                    return Ok(SeedOutcome {
                        trace: None,
                        limit: None,
                        length: None,
                        certification: None,
                        contractible: false,
                        error: Some(e.to_string()),
                    })
                }
            };
            let length = *trace.lengths.last().unwrap();
            let converged = trace.status == ShorteningStatus::Converged;
            let certification = if converged {
                Some(certify_geodesic(space, &limit, certify)?)
            } else {
                None
            };
            Ok(SeedOutcome {
                contractible: converged && length < epsilon,
                trace: Some(trace),
                limit: Some(limit),
                length: Some(length),
                certification,
                error: None,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    if !outcomes.iter().any(SeedOutcome::converged) {
        return Err(SweepError::NoneConverged { seeds: seeds.len() });
    }

    let mut warnings = Vec::new();
    let mut best: Option<SystoleBest<S::Point>> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if !o.converged() {
            continue;
        }
        let length = o.length.expect("converged seeds have a length");
        let cert = o
            .certification
            .as_ref()
            .expect("converged seeds are certified");
        if o.contractible {
            warnings.push(SystoleWarning::ContractibleSeed { seed: i, length });
            continue;
        }
        if !cert.passed {
            warnings.push(SystoleWarning::UncertifiedLimit {
                seed: i,
                max_defect: cert.max_defect,
            });
            continue;
        }
        if best.as_ref().is_none_or(|b| length < b.length) {
            best = Some(SystoleBest {
                seed: i,
                curve: o.limit.clone().expect("converged seeds have a limit"),
                length,
                certification: cert.clone(),
            });
        }
    }
    Ok(SystoleReport {
        seeds: outcomes,
        best,
        warnings,
    })
}
