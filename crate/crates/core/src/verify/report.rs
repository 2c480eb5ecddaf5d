use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::checks::{CheckConfig, CheckId, CheckResult};
use super::instance::InstanceSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckMeta {
    pub id: CheckId,
    pub statement: String,
    pub statement_hash: String,
}

impl From<CheckId> for CheckMeta {
    fn from(id: CheckId) -> Self {
        Self {
            id,
            statement: id.statement().to_string(),
            statement_hash: id.statement_hash(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub version: String,
    pub seed: u64,
    pub trials: u64,
    pub spec: InstanceSpec,
    pub config: CheckConfig,
    pub checks: Vec<CheckMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSummary {
    pub label: String,
    pub evaluated: u64,
    pub failures: u64,
    /// Smallest `margin / scale` seen, with its raw margin and trial.
    pub worst_relative: Option<f64>,
    pub worst_margin: Option<f64>,
    pub worst_trial: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSummary {
    pub label: String,
    pub count: u64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check_id: CheckId,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    /// Trials where the whole check could not run (e.g. singular `A`).
    pub skipped: u64,
    /// Individual links not evaluated (e.g. overflowing terms).
    pub skipped_links: u64,
    pub links: Vec<LinkSummary>,
    pub observations: Vec<ObservationSummary>,
}

impl CheckSummary {
    pub fn new(check_id: CheckId) -> Self {
        Self {
            check_id,
            trials: 0,
            passed: 0,
            failed: 0,
            skipped: 0,
            skipped_links: 0,
            links: Vec::new(),
            observations: Vec::new(),
        }
    }

    pub fn worst_relative(&self) -> Option<f64> {
        self.links
            .iter()
            .filter_map(|l| l.worst_relative)
            .reduce(f64::min)
    }

    pub fn record(&mut self, trial: u64, result: &CheckResult) {
        self.trials += 1;
        if result.passed {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.skipped_links += result.skipped.len() as u64;
        for link in &result.links {
            let idx = match self.links.iter().position(|l| l.label == link.label) {
                Some(i) => i,
                None => {
                    self.links.push(LinkSummary {
                        label: link.label.clone(),
                        evaluated: 0,
                        failures: 0,
                        worst_relative: None,
                        worst_margin: None,
                        worst_trial: None,
                    });
                    self.links.len() - 1
                }
            };
            let s = &mut self.links[idx];
            s.evaluated += 1;
            if !link.pass {
                s.failures += 1;
            }
            let rel = link.relative();
            if s.worst_relative.is_none_or(|w| rel < w) {
                s.worst_relative = Some(rel);
                s.worst_margin = Some(link.margin);
                s.worst_trial = Some(trial);
            }
        }
        for obs in &result.observations {
            match self.observations.iter_mut().find(|o| o.label == obs.label) {
                Some(o) => {
                    o.count += 1;
                    o.min = o.min.min(obs.value);
                    o.max = o.max.max(obs.value);
                }
                None => self.observations.push(ObservationSummary {
                    label: obs.label.clone(),
                    count: 1,
                    min: obs.value,
                    max: obs.value,
                }),
            }
        }
    }

    pub fn record_skip(&mut self) {
        self.trials += 1;
        self.skipped += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub check_id: CheckId,
    pub trial: u64,
    /// Seed that regenerates the failing instance.
    pub seed: u64,
    pub fingerprint: String,
    pub link: String,
    pub margin: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: ReportMeta,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<FailureRecord>,
}

impl Report {
    pub fn total_failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn summary(&self, id: CheckId) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Per-check totals keyed by id.
    pub fn counts(&self) -> BTreeMap<CheckId, (u64, u64, u64)> {
        self.checks
            .iter()
            .map(|c| (c.check_id, (c.passed, c.failed, c.skipped)))
            .collect()
    }
}
