//! JSON run reports: a config echo, one entry per check, free-form data.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::stablevec::PRNG_NAME;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A value stated in the source material and reproduced here.
    Printed,
    /// Follows immediately from definitions.
    Elementary,
    /// Obtained by an exact computation in this crate.
    Computed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub basis: Basis,
    /// Stable identifier of the claim, e.g. `so7.charpoly`.
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Identifier of the report layout described in `docs/schema`.
pub const SCHEMA: &str = "theta-forge/report/v1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub config: Value,
    pub version: &'static str,
    pub prng: &'static str,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
    pub passed: bool,
    /// The only field allowed to differ between identical runs.
    pub wall_clock_ms: u64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl Report {
    pub fn new(command: &str, config: impl Serialize) -> Self {
        Self {
            schema: SCHEMA,
            command: command.into(),
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            version: env!("CARGO_PKG_VERSION"),
            prng: PRNG_NAME,
            checks: Vec::new(),
            data: BTreeMap::new(),
            passed: true,
            wall_clock_ms: 0,
            started: Some(Instant::now()),
        }
    }

    pub fn push(&mut self, check: Check) -> &mut Check {
        self.checks.push(check);
        self.checks.last_mut().expect("just pushed")
    }

    /// Pass iff `expected` and `actual` render the same.
    pub fn check_eq(
        &mut self,
        name: &str,
        expected: impl Display,
        actual: impl Display,
        basis: Basis,
        anchor: &str,
    ) -> &mut Check {
        let (e, a) = (expected.to_string(), actual.to_string());
        self.push(Check {
            name: name.into(),
            status: if e == a { Status::Pass } else { Status::Fail },
            expected: e,
            actual: a,
            basis,
            anchor: anchor.into(),
            note: None,
        })
    }

    /// A boolean check, expected to hold.
    pub fn check_true(&mut self, name: &str, ok: bool, basis: Basis, anchor: &str) -> &mut Check {
        self.check_eq(name, true, ok, basis, anchor)
    }

    /// A check that could not run; it does not affect `passed`.
    pub fn skip(&mut self, name: &str, why: impl Display, anchor: &str) {
        self.push(Check {
            name: name.into(),
            status: Status::Skip,
            expected: String::new(),
            actual: String::new(),
            basis: Basis::Elementary,
            anchor: anchor.into(),
            note: Some(why.to_string()),
        });
    }

    /// Record an error as a failing check.
    pub fn error(&mut self, name: &str, err: impl Display, anchor: &str) {
        self.push(Check {
            name: name.into(),
            status: Status::Fail,
            expected: "no error".into(),
            actual: err.to_string(),
            basis: Basis::Elementary,
            anchor: anchor.into(),
            note: None,
        });
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    /// Fix `passed` and the wall clock.
    pub fn finish(&mut self) {
        self.passed = self.checks.iter().all(|c| c.status != Status::Fail);
        if let Some(t) = self.started {
            self.wall_clock_ms = t.elapsed().as_millis() as u64;
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl Check {
    pub fn with_note(&mut self, note: impl Display) -> &mut Self {
        self.note = Some(note.to_string());
        self
    }
}
