//! JSON report for `verify`.

use std::collections::BTreeMap;
use std::time::Instant;

use gztoda_core::verify::{Mode, Outcome, Residual, RunOpts, Status};
use serde::Serialize;

use crate::config::Config;
use crate::error::CliError;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Environment {
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
    pub mode: Mode,
    pub trials: usize,
    pub parallel: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Record {
    pub suite: String,
    pub anchor: String,
    pub n: usize,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Wall time of the whole (suite, N) batch this check belongs to.
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub environment: Environment,
    pub summary: Summary,
    pub checks: Vec<Record>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Records of one suite.
    pub fn suite(&self, name: &str) -> Vec<&Record> {
        self.checks.iter().filter(|r| r.suite == name).collect()
    }

    /// One line per (suite, N) batch, then failures with witnesses.
    pub fn human_summary(&self) -> String {
        let mut batches: Vec<((String, usize), Summary, f64)> = Vec::new();
        for r in &self.checks {
            let key = (r.suite.clone(), r.n);
            if batches.last().map(|b| b.0 != key).unwrap_or(true) {
                batches.push((key, Summary::default(), r.wall_time_ms));
            }
            let b = &mut batches.last_mut().expect("pushed").1;
            match r.outcome.status {
                Status::Pass => b.pass += 1,
                Status::Fail => b.fail += 1,
                Status::Skipped => b.skipped += 1,
            }
        }
        let mut out = String::new();
        for ((suite, n), s, ms) in &batches {
            let verdict = if s.fail == 0 { "ok" } else { "FAIL" };
            out.push_str(&format!(
                "{suite} N={n}: {verdict} ({} pass, {} fail, {} skipped, {:.2} s)\n",
                s.pass,
                s.fail,
                s.skipped,
                ms / 1000.0
            ));
        }
        for r in self.checks.iter().filter(|r| r.outcome.status == Status::Fail) {
            out.push_str(&format!(
                "  fail {} N={}: {} -- {}\n",
                r.suite,
                r.n,
                r.outcome.name,
                r.outcome.witness.as_deref().unwrap_or("")
            ));
        }
        out.push_str(&format!(
            "total: {} pass, {} fail, {} skipped\n",
            self.summary.pass, self.summary.fail, self.summary.skipped
        ));
        out
    }
}

/// Every failure gets a witness; numeric failures without one get the residual.
fn ensure_witness(mut o: Outcome) -> Outcome {
    if o.status == Status::Fail && o.witness.is_none() {
        o.witness = Some(match &o.residual {
            Residual::Float { value, tolerance } => format!("residual {value:e} exceeds tolerance {tolerance:e}"),
            Residual::Exact { summary: Some(s), .. } => s.clone(),
            _ => "check failed without a recorded residual".into(),
        });
    }
    o
}

/// Runs the selected suites in table order. Checks inside a suite run on
/// the worker pool; assembly is sequential.
pub fn run_verify(cfg: &Config) -> Result<Report, CliError> {
    cfg.validate()?;
    let suites = cfg.selected_suites()?;
    let opts = RunOpts { mode: cfg.mode, seed: cfg.seed, trials: cfg.trials };
    let mut checks = Vec::new();
    for s in suites {
        let (run, refused) = s.sizes_for(cfg.n_max);
        for n in run {
            let t = Instant::now();
            let outcomes = s.run(cfg, opts, n);
            let ms = t.elapsed().as_secs_f64() * 1000.0;
            for o in outcomes {
                checks.push(Record {
                    suite: s.name.into(),
                    anchor: s.anchors.into(),
                    n,
                    outcome: ensure_witness(o.with_param("N", n)),
                    wall_time_ms: ms,
                });
            }
        }
        for n in refused {
            let o = Outcome::new(format!("{} at N={n}", s.name), Status::Skipped, Residual::None)
                .with_param("N", n)
                .with_note(format!("beyond the supported range (max N={})", s.sizes.2));
            checks.push(Record { suite: s.name.into(), anchor: s.anchors.into(), n, outcome: o, wall_time_ms: 0.0 });
        }
    }
    let mut summary = Summary::default();
    for r in &checks {
        match r.outcome.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Skipped => summary.skipped += 1,
        }
    }
    Ok(Report { environment: environment(cfg), summary, checks })
}

pub fn environment(cfg: &Config) -> Environment {
    Environment {
        version: env!("CARGO_PKG_VERSION").into(),
        seed: cfg.seed,
        config_hash: cfg.hash(),
        mode: cfg.mode,
        trials: cfg.trials,
        parallel: cfg!(feature = "parallel"),
    }
}

/// Report JSON with wall times removed, for determinism comparisons.
pub fn without_timings(json: &str) -> Result<serde_json::Value, CliError> {
    let mut v: serde_json::Value = serde_json::from_str(json).map_err(|e| CliError::Internal(e.to_string()))?;
    if let Some(checks) = v.get_mut("checks").and_then(|c| c.as_array_mut()) {
        for c in checks {
            if let Some(m) = c.as_object_mut() {
                m.remove("wallTimeMs");
            }
        }
    }
    Ok(v)
}

/// Counts by status per suite, handy for tests.
pub fn tally(report: &Report) -> BTreeMap<String, (usize, usize, usize)> {
    let mut m: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for r in &report.checks {
        let e = m.entry(r.suite.clone()).or_default();
        match r.outcome.status {
            Status::Pass => e.0 += 1,
            Status::Fail => e.1 += 1,
            Status::Skipped => e.2 += 1,
        }
    }
    m
}
