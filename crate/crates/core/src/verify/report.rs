use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// How `observed` must relate to `bound` for a check to pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `observed <= bound + tolerance`.
    Le,
    /// `|observed - bound| <= tolerance`.
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The inequality or identity being tested, written out.
    pub anchor: String,
    pub relation: Relation,
    pub observed: f64,
    pub bound: f64,
    /// `bound - observed`.
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Reported for context; does not affect the verdict.
    pub informational: bool,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        relation: Relation,
        observed: f64,
        bound: f64,
        tolerance: f64,
    ) -> Self {
        let mut check = Check {
            name: name.into(),
            anchor: anchor.into(),
            relation,
            observed,
            bound,
            margin: bound - observed,
            tolerance,
            passed: false,
            informational: false,
            inputs_digest: String::new(),
            note: None,
        };
        if check.margin.is_finite() {
            check.passed = match relation {
                Relation::Le => check.margin >= -tolerance,
                Relation::Eq => check.margin.abs() <= tolerance,
            };
        } else {
            // keep reports free of NaN and infinities
            check.note = Some(format!("non-finite values: observed {observed}, bound {bound}"));
            check.observed = finite_or_max(observed);
            check.bound = finite_or_max(bound);
            check.margin = f64::MIN;
        }
        check
    }

    pub fn le(name: impl Into<String>, anchor: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        Check::new(name, anchor, Relation::Le, observed, bound, tolerance)
    }

    pub fn eq(name: impl Into<String>, anchor: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        Check::new(name, anchor, Relation::Eq, observed, bound, tolerance)
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_inputs<T: Serialize + ?Sized>(mut self, inputs: &T) -> Self {
        self.inputs_digest = digest(inputs);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }

    /// Keeps whichever of two samples of the same check has the smaller margin.
    pub fn worse(self, other: Check) -> Check {
        if other.margin < self.margin {
            other
        } else {
            self
        }
    }
}

fn finite_or_max(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else if x < 0.0 {
        f64::MIN
    } else {
        f64::MAX
    }
}

/// Hex SHA-256 of the JSON encoding.
pub fn digest<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable inputs");
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub target_arch: String,
    pub target_os: String,
    pub digest: String,
}

impl Environment {
    pub fn current() -> Self {
        let package = env!("CARGO_PKG_NAME").to_string();
        let version = env!("CARGO_PKG_VERSION").to_string();
        let target_arch = std::env::consts::ARCH.to_string();
        let target_os = std::env::consts::OS.to_string();
        let digest = digest(&[&package, &version, &target_arch, &target_os]);
        Environment { package, version, target_arch, target_os, digest }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub config_digest: String,
    pub environment: Environment,
    /// Seconds since the Unix epoch; absent unless requested, so that reruns
    /// are byte-identical.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<u64>,
    pub passed: bool,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new<C: Serialize>(suite: impl Into<String>, seed: u64, config: &C) -> Self {
        Report {
            suite: suite.into(),
            seed,
            config_digest: digest(config),
            environment: Environment::current(),
            generated_at: None,
            passed: true,
            notes: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        if !check.informational && !check.passed {
            self.passed = false;
        }
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn stamp(&mut self) {
        self.generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.informational && !c.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per check.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for c in &self.checks {
            w.serialize(CsvRow {
                suite: &self.suite,
                seed: self.seed,
                name: &c.name,
                anchor: &c.anchor,
                relation: c.relation,
                observed: c.observed,
                bound: c.bound,
                margin: c.margin,
                tolerance: c.tolerance,
                passed: c.passed,
                informational: c.informational,
                inputs_digest: &c.inputs_digest,
                note: c.note.as_deref().unwrap_or(""),
            })
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    seed: u64,
    name: &'a str,
    anchor: &'a str,
    relation: Relation,
    observed: f64,
    bound: f64,
    margin: f64,
    tolerance: f64,
    passed: bool,
    informational: bool,
    inputs_digest: &'a str,
    note: &'a str,
}

pub(crate) fn csv_error(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => crate::Error::Io(io),
        other => crate::Error::Parse(format!("csv: {other:?}")),
    }
}
