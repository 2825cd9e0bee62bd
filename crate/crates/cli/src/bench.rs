use std::time::Instant;

use clap::ValueEnum;
use hypermatch::decision::{DecideConfig, Method, Verdict};
use hypermatch::generators;
use hypermatch::Hypergraph;

use crate::{run_method, CliError};

pub const COLUMNS: [&str; 7] = ["instance", "n", "k", "method", "time", "nodes", "verdict"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Every construction family plus random instances, n <= 12.
    Default,
    /// A handful of 9-vertex instances.
    Quick,
}

fn instances(suite: Suite, seed: u64) -> Result<Vec<(String, Hypergraph)>, CliError> {
    let mut out = Vec::new();
    let sizes: &[usize] = match suite {
        Suite::Default => &[9, 12],
        Suite::Quick => &[9],
    };
    for &n in sizes {
        out.push((format!("complete({n},3)"), generators::complete(n, 3)?));
        out.push((format!("space({n},3,{})", n / 3 - 1), generators::space_barrier(n, 3, n / 3 - 1)?));
        // at n = 12 these sizes keep codegree >= n/3
        let (odd, even) = if n == 12 { (7, 5) } else { (n / 3 + 1, n / 3 + 1) };
        out.push((format!("parity-odd({n},3,{odd})"), generators::parity_barrier_odd(n, 3, odd)?));
        out.push((format!("parity-even({n},3,{even})"), generators::parity_barrier_even(n, 3, even)?));
        let reps = if suite == Suite::Default { 3 } else { 1 };
        for i in 0..reps {
            let s = seed.wrapping_add(i);
            out.push((
                format!("random({n},3,seed={s})"),
                generators::random_dense(n, 3, n.div_ceil(3), s)?,
            ));
        }
    }
    if suite == Suite::Default {
        out.push(("kkm(12)".into(), generators::kkm_construction(12)?));
    }
    Ok(out)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Unknown => "unknown",
    }
}

/// One row per instance and method; `time` is wall-clock seconds.
pub fn run(suite: Suite, methods: &[Method], cfg: &DecideConfig, seed: u64) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for (name, h) in instances(suite, seed)? {
        for &m in methods {
            let t = Instant::now();
            let outcome = run_method(&h, m, cfg);
            let secs = t.elapsed().as_secs_f64();
            let nodes = match &outcome {
                hypermatch::report::MethodOutcome::Decided(d) => d.nodes,
                hypermatch::report::MethodOutcome::Failed { .. } => 0,
            };
            w.write_record([
                name.clone(),
                h.n().to_string(),
                h.k().to_string(),
                m.to_string(),
                format!("{secs:.6}"),
                nodes.to_string(),
                verdict_str(outcome.verdict()).to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
