//! Versioned JSON reports. Thresholds are written as `[numerator,
//! denominator]` pairs and no timing data is included, so reports for the
//! same input and configuration are byte-identical.

use serde::Serialize;

use crate::decision::{DecideConfig, Decision, Method, Verdict};
use crate::hypergraph::Hypergraph;
use crate::lattice::CosetOrder;
use crate::reachability::PartitionPipelineResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    pub min_codegree: Option<usize>,
}

impl InstanceSummary {
    pub fn of(h: &Hypergraph) -> Self {
        InstanceSummary {
            n: h.n(),
            k: h.k(),
            edges: h.edge_count(),
            min_codegree: h.min_codegree().ok(),
        }
    }
}

/// One method's outcome, or the error that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MethodOutcome {
    Decided(Box<Decision>),
    Failed { method: Method, verdict: Verdict, error: String },
}

impl MethodOutcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            MethodOutcome::Decided(d) => d.verdict,
            MethodOutcome::Failed { verdict, .. } => *verdict,
        }
    }

    pub fn method(&self) -> Method {
        match self {
            MethodOutcome::Decided(d) => d.method,
            MethodOutcome::Failed { method, .. } => *method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disagreement {
    pub method: Method,
    pub verdict: Verdict,
    pub oracle: Verdict,
    /// "algorithm yes, oracle no" below the validity floor.
    pub tolerated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionReport {
    pub schema: u32,
    pub instance: InstanceSummary,
    pub config: DecideConfig,
    pub verdict: Verdict,
    pub results: Vec<MethodOutcome>,
    pub agree: bool,
    pub disagreements: Vec<Disagreement>,
}

impl DecisionReport {
    /// Combines the outcomes of one or more methods. With several methods
    /// the verdict is the shared one, or `unknown` when they differ.
    pub fn new(h: &Hypergraph, config: &DecideConfig, results: Vec<MethodOutcome>) -> Self {
        let verdicts: Vec<Verdict> = results.iter().map(|r| r.verdict()).collect();
        let agree = verdicts.windows(2).all(|w| w[0] == w[1]);
        let verdict = if agree {
            verdicts.first().copied().unwrap_or(Verdict::Unknown)
        } else {
            Verdict::Unknown
        };
        let below_floor = h.n() < config.pipeline.validity_floor;
        let oracle = results
            .iter()
            .find(|r| r.method() == Method::Brute)
            .map(|r| r.verdict())
            .filter(|v| *v != Verdict::Unknown);
        let disagreements = match oracle {
            Some(o) => results
                .iter()
                .filter(|r| r.method() != Method::Brute && r.verdict() != o)
                .map(|r| Disagreement {
                    method: r.method(),
                    verdict: r.verdict(),
                    oracle: o,
                    tolerated: below_floor && r.verdict() == Verdict::Yes && o == Verdict::No,
                })
                .collect(),
            None => Vec::new(),
        };
        DecisionReport {
            schema: SCHEMA_VERSION,
            instance: InstanceSummary::of(h),
            config: config.clone(),
            verdict,
            results,
            agree,
            disagreements,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub instance: InstanceSummary,
    pub d: usize,
    pub d_prime: usize,
    pub full_pair: bool,
    pub coset_order: Option<CosetOrder>,
    pub pipeline: PartitionPipelineResult,
}

impl AnalysisReport {
    pub fn new(h: &Hypergraph, pipeline: PartitionPipelineResult) -> Self {
        let k = h.k();
        AnalysisReport {
            schema: SCHEMA_VERSION,
            instance: InstanceSummary::of(h),
            d: pipeline.p0.len(),
            d_prime: pipeline.p0_prime.len(),
            full_pair: pipeline.is_full_pair(k),
            coset_order: pipeline.lattice.coset_group_order(k).ok(),
            pipeline,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{decide_brute, decide_fast, decide_slow};
    use crate::generators::complete;
    use crate::reachability::{run_pipeline, PipelineConfig};

    #[test]
    fn decision_report_is_stable() {
        let h = complete(9, 3).unwrap();
        let cfg = DecideConfig::default();
        let results = vec![
            MethodOutcome::Decided(Box::new(decide_brute(&h, &cfg))),
            MethodOutcome::Decided(Box::new(decide_slow(&h, &cfg).unwrap())),
            MethodOutcome::Decided(Box::new(decide_fast(&h, &cfg).unwrap())),
        ];
        let a = to_json(&DecisionReport::new(&h, &cfg, results.clone()));
        let b = to_json(&DecisionReport::new(&h, &cfg, results));
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["verdict"], "yes");
        assert_eq!(v["agree"], true);
        assert_eq!(v["config"]["pipeline"]["gamma"], serde_json::json!([1, 20]));
    }

    #[test]
    fn analysis_report_fields() {
        let h = complete(9, 3).unwrap();
        let r = run_pipeline(&h, &PipelineConfig::default()).unwrap();
        let report = AnalysisReport::new(&h, r);
        assert_eq!(report.d_prime, 1);
        assert_eq!(report.coset_order, Some(CosetOrder::Finite(1)));
        let v: serde_json::Value = serde_json::from_str(&to_json(&report)).unwrap();
        assert!(v["pipeline"]["merge_trace"].is_array());
    }
}
