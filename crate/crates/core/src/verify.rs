//! Identities, verdicts and per-check outcomes shared by all suites.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::sampler::{compare_maps, DEFAULT_HEIGHT};
use crate::exact::{DiffOp, ExactError, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Randomized,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Residual {
    /// Exact comparison; `zero` tells whether the difference vanished.
    Exact { zero: bool, summary: Option<String> },
    Float { value: f64, tolerance: f64 },
    None,
}

/// Verdict for one check.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub residual: Residual,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub randomized: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Outcome {
    pub fn new(name: impl Into<String>, status: Status, residual: Residual) -> Self {
        Outcome {
            name: name.into(),
            params: BTreeMap::new(),
            status,
            residual,
            exact: None,
            randomized: None,
            witness: None,
            note: None,
        }
    }

    pub fn numeric(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        let status = if value.is_finite() && value <= tolerance { Status::Pass } else { Status::Fail };
        Outcome::new(name, status, Residual::Float { value, tolerance })
    }

    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        let mut o = Outcome::new(name, Status::Fail, Residual::None);
        o.witness = Some(err.to_string());
        o
    }

    pub fn with_param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Claimed equality of two coefficient maps (operator or torus element
/// coefficients keyed by shift/exponent).
#[derive(Clone, Debug)]
pub struct Identity {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub var_names: Vec<String>,
    pub lhs: BTreeMap<String, RatFunc>,
    pub rhs: BTreeMap<String, RatFunc>,
}

fn op_map(op: &DiffOp) -> BTreeMap<String, RatFunc> {
    let names = op.vars().names();
    op.terms()
        .iter()
        .map(|(k, c)| {
            let key: Vec<String> = k.entries().map(|(v, n)| format!("{}:{}", names[v], n)).collect();
            (format!("[{}]", key.join(",")), c.clone())
        })
        .collect()
}

impl Identity {
    pub fn new(
        name: impl Into<String>,
        var_names: Vec<String>,
        lhs: BTreeMap<String, RatFunc>,
        rhs: BTreeMap<String, RatFunc>,
    ) -> Self {
        Identity { name: name.into(), params: BTreeMap::new(), var_names, lhs, rhs }
    }

    pub fn ops(name: impl Into<String>, lhs: &DiffOp, rhs: &DiffOp) -> Self {
        let names = lhs.vars().names().iter().map(|s| s.to_string()).collect();
        Identity::new(name, names, op_map(lhs), op_map(rhs))
    }

    /// `lhs = rhs` for scalar functions.
    pub fn scalars(name: impl Into<String>, var_names: Vec<String>, lhs: RatFunc, rhs: RatFunc) -> Self {
        let mut l = BTreeMap::new();
        l.insert(String::new(), lhs);
        let mut r = BTreeMap::new();
        r.insert(String::new(), rhs);
        Identity::new(name, var_names, l, r)
    }

    pub fn with_param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    /// First differing coefficient, rendered, or `None` when equal.
    pub fn exact_residual(&self) -> Option<String> {
        let zero = RatFunc::zero();
        let names: Vec<&str> = self.var_names.iter().map(|s| s.as_str()).collect();
        let mut keys: Vec<&String> = self.lhs.keys().chain(self.rhs.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut diffs = Vec::new();
        for k in keys {
            let a = self.lhs.get(k).unwrap_or(&zero);
            let b = self.rhs.get(k).unwrap_or(&zero);
            if a != b {
                let d = a.sub(b);
                let mut s = d.display_with(&names);
                if s.len() > 400 {
                    s.truncate(400);
                    s.push_str("...");
                }
                diffs.push(format!("{k}: {s}"));
                if diffs.len() >= 3 {
                    break;
                }
            }
        }
        if diffs.is_empty() {
            None
        } else {
            Some(diffs.join("; "))
        }
    }

    pub fn randomized(&self, trials: usize, seed: u64) -> Result<(bool, Option<String>), ExactError> {
        let out = compare_maps(&self.lhs, &self.rhs, self.var_names.len(), trials, seed, DEFAULT_HEIGHT)?;
        let witness = out.witness.map(|w| {
            let pt: Vec<String> =
                self.var_names.iter().zip(w.point.iter()).map(|(n, v)| format!("{n}={v}")).collect();
            format!("coefficient {} differs at {}", w.key, pt.join(", "))
        });
        Ok((out.equal, witness))
    }

    pub fn judge(&self, mode: Mode, seed: u64, trials: usize) -> Outcome {
        let mut out = Outcome::new(self.name.clone(), Status::Pass, Residual::None);
        out.params = self.params.clone();
        if mode != Mode::Randomized {
            let res = self.exact_residual();
            out.exact = Some(res.is_none());
            out.residual = Residual::Exact { zero: res.is_none(), summary: res.clone() };
            if let Some(r) = res {
                out.status = Status::Fail;
                out.witness = Some(r);
            }
        }
        if mode != Mode::Exact {
            match self.randomized(trials, seed) {
                Ok((eq, w)) => {
                    out.randomized = Some(eq);
                    if !eq {
                        out.status = Status::Fail;
                        if out.witness.is_none() {
                            out.witness = w;
                        }
                    }
                    if mode == Mode::Randomized {
                        out.residual = Residual::Exact { zero: eq, summary: None };
                    }
                }
                Err(e) => {
                    out.status = Status::Fail;
                    out.witness = Some(e.to_string());
                }
            }
            if let (Some(a), Some(b)) = (out.exact, out.randomized) {
                if a != b {
                    out.note = Some("randomized and exact verdicts disagree".into());
                }
            }
        }
        out
    }
}

/// Settings passed to every suite.
#[derive(Clone, Copy, Debug)]
pub struct RunOpts {
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
}

impl Default for RunOpts {
    fn default() -> Self {
        RunOpts { mode: Mode::Exact, seed: 0, trials: crate::exact::sampler::DEFAULT_TRIALS }
    }
}

/// Judges a batch of identities in parallel.
pub fn judge_all(ids: &[Identity], opts: RunOpts) -> Vec<Outcome> {
    crate::par::par_map(ids, |id| id.judge(opts.mode, opts.seed, opts.trials))
}
