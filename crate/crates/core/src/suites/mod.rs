//! Named verification suites. Each produces a [`SuiteReport`] with the
//! counterexamples it found.

pub mod battery;
mod checks;
pub mod fp1;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::field_linalg::Field;
use crate::kernels::CaseId;

pub use checks::{
    suite_carlson, suite_coproduct_invariance, suite_module_classes, suite_projectivity_detection,
    suite_structure_maps, suite_tensor_property,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Fp1,
    CoproductInvariance,
    TensorProperty,
    ProjectivityDetection,
    StructureMaps,
    ModuleClasses,
    Carlson,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Fp1,
        SuiteName::CoproductInvariance,
        SuiteName::TensorProperty,
        SuiteName::ProjectivityDetection,
        SuiteName::StructureMaps,
        SuiteName::ModuleClasses,
        SuiteName::Carlson,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Fp1 => "fp1",
            SuiteName::CoproductInvariance => "coproduct_invariance",
            SuiteName::TensorProperty => "tensor_property",
            SuiteName::ProjectivityDetection => "projectivity_detection",
            SuiteName::StructureMaps => "structure_maps",
            SuiteName::ModuleClasses => "module_classes",
            SuiteName::Carlson => "carlson",
        }
    }

    /// Cases each suite runs on by default. For `fp1` these are primes.
    pub fn default_cases(self) -> Vec<String> {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        match self {
            SuiteName::Fp1 => v(&["p=2", "p=3", "p=5"]),
            SuiteName::CoproductInvariance => v(&["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Heis3:p=3,r=1"]),
            SuiteName::TensorProperty | SuiteName::ProjectivityDetection => {
                v(&["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1"])
            }
            SuiteName::StructureMaps => v(&[
                "Ga:n=1,p=2,r=1",
                "Ga:n=1,p=2,r=2",
                "Ga:n=1,p=3,r=1",
                "Ga:n=1,p=3,r=2",
                "Heis3:p=3,r=1",
                "Heis3:p=2,r=1",
            ]),
            SuiteName::ModuleClasses => v(&["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Heis3:p=2,r=1"]),
            SuiteName::Carlson => v(&["Ga:n=1,p=2,r=1"]),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub case: String,
    pub seed: u64,
    pub trials: usize,
    pub pass: bool,
    pub counterexamples: Vec<serde_json::Value>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub(crate) fn new(suite: SuiteName, case: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            case: case.to_string(),
            seed,
            trials: 0,
            pass: true,
            counterexamples: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub(crate) fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> serde_json::Value) {
        self.trials += 1;
        if !ok {
            self.pass = false;
            self.counterexamples.push(counterexample());
        }
    }

    pub(crate) fn finish(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// JSON with sorted keys.
    pub fn to_json(&self) -> Result<String> {
        let v = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&v)?)
    }

    /// JSON with sorted keys and without the timing field, for
    /// reproducibility comparisons.
    pub fn canonical_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(m) = v.as_object_mut() {
            m.remove("elapsed_ms");
        }
        Ok(serde_json::to_string(&v)?)
    }
}

/// Parameters shared by the suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub seed: u64,
    /// Random trials for `fp1`.
    pub trials: usize,
    /// Largest dimension of a random triple.
    pub max_dim: usize,
    /// Degrees `e` of the fields F_{p^e} over which families are enumerated.
    pub field_degrees: Vec<u32>,
    /// Cohomological degrees for the Carlson suite.
    pub carlson_degrees: Vec<usize>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seed: 0x5eed,
            trials: 1000,
            max_dim: 12,
            field_degrees: vec![1, 2],
            carlson_degrees: vec![2],
        }
    }
}

/// Commuting-triple fuzzing at one prime; trial `i` uses `r = 1 + i % 2`.
pub fn suite_fp1(p: u32, max_dim: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let f = Field::new(p, 1)?;
    let mut report = SuiteReport::new(SuiteName::Fp1, &format!("p={p}"), seed);
    let outcomes: Vec<Result<(bool, serde_json::Value)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let r = 1 + (i % 2) as u32;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let t = fp1::random_triple(&f, r, max_dim, &mut rng)?;
            if let Err(e) = t.check(p, r) {
                return Ok((false, json!({"trial": i, "r": r, "error": e.to_string(), "triple": t.to_json()})));
            }
            let (a, b) = t.verdicts(p)?;
            Ok((a == b, json!({"trial": i, "r": r, "alpha_projective": a, "shifted_projective": b, "triple": t.to_json()})))
        })
        .collect();
    let mut projective = 0;
    for o in outcomes {
        let (ok, cx) = o?;
        if cx.get("alpha_projective") == Some(&json!(true)) {
            projective += 1;
        }
        report.record(ok, || cx);
    }
    report.notes.push(format!("{projective} of {trials} triples had projective α"));
    Ok(report.finish(start))
}

/// Runs a suite by name on one case string (a prime `p=..` for `fp1`).
pub fn run_suite(name: SuiteName, case: &str, params: &SuiteParams) -> Result<SuiteReport> {
    if name == SuiteName::Fp1 {
        let p = case
            .strip_prefix("p=")
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| Error::Invalid(format!("fp1 expects p=<prime>, got {case:?}")))?;
        return suite_fp1(p, params.max_dim, params.trials, params.seed);
    }
    let case: CaseId = case.parse()?;
    match name {
        SuiteName::Fp1 => unreachable!(),
        SuiteName::CoproductInvariance => suite_coproduct_invariance(&case, params),
        SuiteName::TensorProperty => suite_tensor_property(&case, params),
        SuiteName::ProjectivityDetection => suite_projectivity_detection(&case, params),
        SuiteName::StructureMaps => suite_structure_maps(&case, params),
        SuiteName::ModuleClasses => suite_module_classes(&case, params),
        SuiteName::Carlson => suite_carlson(&case, params),
    }
}
