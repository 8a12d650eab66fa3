//! Run configuration: a JSON file plus command-line overrides.

use std::path::Path;

use gztoda_core::toda::QuadratureConfig;
use gztoda_core::verify::Mode;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::suites;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct Config {
    /// Suite names; empty selects every suite.
    pub suites: Vec<String>,
    /// Upper end of each suite's size range. `None` keeps the suite defaults.
    pub n_max: Option<usize>,
    pub mode: Mode,
    pub seed: u64,
    /// Schwartz-Zippel trials per identity.
    pub trials: usize,
    /// Worker threads. Not part of the config hash.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    pub q_whittaker: QWhittakerParams,
    pub toda: TodaParams,
    pub eval: EvalParams,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            suites: Vec::new(),
            n_max: None,
            mode: Mode::Exact,
            seed: 0,
            trials: 10,
            jobs: None,
            q_whittaker: QWhittakerParams::default(),
            toda: TodaParams::default(),
            eval: EvalParams::default(),
        }
    }
}

/// Nonzero `c′` matrices checked next to `c′ = 0`, as integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct QWhittakerParams {
    pub c_prime2: Vec<Vec<i64>>,
    pub c_prime3: Vec<Vec<i64>>,
}

impl Default for QWhittakerParams {
    fn default() -> Self {
        QWhittakerParams {
            c_prime2: vec![vec![1, 1], vec![1, 2]],
            c_prime3: vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 0, 2]],
        }
    }
}

impl QWhittakerParams {
    pub fn for_size(&self, n: usize) -> Option<&Vec<Vec<i64>>> {
        match n {
            2 => Some(&self.c_prime2),
            3 => Some(&self.c_prime3),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct TodaParams {
    pub hbar: f64,
    pub gamma1: Vec<f64>,
    pub gamma2: Vec<f64>,
    pub gamma3: Vec<f64>,
    /// Points for the dual equation at N=2.
    pub dual_points: Vec<Vec<f64>>,
    pub dual_tolerance: f64,
    pub pairing_tolerance: f64,
}

impl Default for TodaParams {
    fn default() -> Self {
        TodaParams {
            hbar: 1.0,
            gamma1: vec![0.7],
            gamma2: vec![0.7, -0.3],
            gamma3: vec![0.7, -0.3, 0.2],
            dual_points: vec![vec![0.0, 0.0], vec![0.5, -1.0], vec![-1.0, 0.5]],
            dual_tolerance: 1e-5,
            pairing_tolerance: 1e-6,
        }
    }
}

impl TodaParams {
    pub fn gamma(&self, n: usize) -> Option<&Vec<f64>> {
        match n {
            1 => Some(&self.gamma1),
            2 => Some(&self.gamma2),
            3 => Some(&self.gamma3),
            _ => None,
        }
    }
}

/// The eigenfunction table written by `eval`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct EvalParams {
    pub gamma: Vec<f64>,
    /// Imaginary parts of the labels; empty means real labels.
    pub gamma_im: Vec<f64>,
    pub hbar: f64,
    pub min: f64,
    pub max: f64,
    /// Grid points per axis.
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams { gamma: vec![0.7, -0.3], gamma_im: Vec::new(), hbar: 1.0, min: -3.0, max: 3.0, points: 41, quadrature: None }
    }
}

/// Values given on the command line; `None` leaves the config untouched.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub n_max: Option<usize>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Config, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))
    }

    /// Flags win over file values.
    pub fn apply(mut self, o: &Overrides) -> Config {
        if !o.suites.is_empty() {
            self.suites = o.suites.clone();
        }
        if o.n_max.is_some() {
            self.n_max = o.n_max;
        }
        if let Some(m) = o.mode {
            self.mode = m;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if o.jobs.is_some() {
            self.jobs = o.jobs;
        }
        self
    }

    /// Expands "all" and comma lists; rejects unknown names.
    pub fn selected_suites(&self) -> Result<Vec<&'static suites::Suite>, CliError> {
        let mut names: Vec<String> = self
            .suites
            .iter()
            .flat_map(|s| s.split(',').map(|p| p.trim().to_string()))
            .filter(|s| !s.is_empty())
            .collect();
        if names.is_empty() || names.iter().any(|s| s == "all") {
            names = suites::SUITES.iter().map(|s| s.name.to_string()).collect();
        }
        let mut out: Vec<&'static suites::Suite> = Vec::new();
        for n in &names {
            let s = suites::find(n).ok_or_else(|| {
                CliError::Config(format!("unknown suite '{n}'; known suites: {}", suites::names().join(", ")))
            })?;
            if !out.iter().any(|x| x.name == s.name) {
                out.push(s);
            }
        }
        // table order keeps reports stable
        out.sort_by_key(|s| suites::SUITES.iter().position(|t| t.name == s.name));
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.selected_suites()?;
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.n_max == Some(0) {
            return Err(CliError::Config("n-max must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        if !(self.toda.hbar > 0.0) || !(self.eval.hbar > 0.0) {
            return Err(CliError::Config("hbar must be positive".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON, ignoring the thread count.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.jobs = None;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_and_jobs_do_not_change_the_hash() {
        let c = Config::from_json(r#"{"seed": 3, "mode": "randomized", "suites": ["casimir"]}"#).unwrap();
        let h = c.hash();
        let o = Overrides { seed: Some(9), jobs: Some(4), ..Default::default() };
        let c2 = c.clone().apply(&o);
        assert_eq!(c2.seed, 9);
        assert_eq!(c2.mode, Mode::Randomized);
        assert_ne!(c2.hash(), h);
        let c3 = c.clone().apply(&Overrides { jobs: Some(2), ..Default::default() });
        assert_eq!(c3.hash(), h);
    }

    #[test]
    fn unknown_fields_and_suites_are_rejected() {
        assert!(Config::from_json(r#"{"sweets": []}"#).is_err());
        let c = Config { suites: vec!["casimir,nope".into()], ..Default::default() };
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
    }
}
