//! Outcome of a windowed property check.

use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::series::identity::{IdentityReport, MAX_WITNESSES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Status {
    Pass,
    Fail,
    /// The property is only asserted under a hypothesis that did not hold.
    PreconditionUnmet,
    Error,
}

/// One disagreeing coefficient: where, on which inputs, and both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub exps: Vec<i64>,
    pub at: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub id: String,
    pub anchor: String,
    pub context: String,
    pub window: String,
    pub generators: Vec<String>,
    pub checked: usize,
    pub status: Status,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn new(id: &str, anchor: &str, context: impl Into<String>, window: impl Into<String>) -> Self {
        PropertyReport {
            id: id.into(),
            anchor: anchor.into(),
            context: context.into(),
            window: window.into(),
            generators: Vec::new(),
            checked: 0,
            status: Status::Pass,
            pass: true,
            witnesses: Vec::new(),
            note: None,
        }
    }

    /// Records one comparison.
    pub fn compare<T: PartialEq + fmt::Display>(&mut self, exps: &[i64], at: impl FnOnce() -> String, lhs: &T, rhs: &T) {
        self.checked += 1;
        if lhs != rhs {
            self.fail(exps, at(), lhs.to_string(), rhs.to_string());
        }
    }

    pub fn fail(&mut self, exps: &[i64], at: String, lhs: String, rhs: String) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.pass = false;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness { exps: exps.to_vec(), at, lhs, rhs });
        }
    }

    pub fn failed(&self) -> bool {
        !self.witnesses.is_empty() || self.status != Status::Pass
    }

    pub fn error(mut self, e: &Error) -> Self {
        self.status = Status::Error;
        self.pass = false;
        self.note = Some(e.to_string());
        self.witnesses.push(Witness { exps: Vec::new(), at: "error".into(), lhs: e.to_string(), rhs: String::new() });
        self
    }

    /// The hypothesis failed; `witness` is the evidence, kept so that
    /// `pass` stays equivalent to an empty witness list.
    pub fn precondition_unmet(mut self, why: impl Into<String>, witness: Witness) -> Self {
        self.status = Status::PreconditionUnmet;
        self.pass = false;
        self.note = Some(why.into());
        self.witnesses.push(witness);
        self
    }

    /// Folds a sub-check into this report.
    pub fn absorb(&mut self, other: &PropertyReport) {
        self.checked += other.checked;
        for w in &other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w.clone());
            }
        }
        if other.status != Status::Pass && (self.status == Status::Pass || other.status == Status::Error) {
            self.status = other.status;
            self.note = other.note.clone().or_else(|| self.note.clone());
        }
        self.pass = self.status == Status::Pass;
    }

    /// Wraps a formal-series identity report.
    pub fn from_identity(id: &str, anchor: &str, context: &str, r: &IdentityReport) -> Self {
        let mut rep = PropertyReport::new(id, anchor, context, r.window.describe());
        rep.checked = r.checked;
        for m in &r.mismatches {
            rep.fail(&m.exps, r.name.clone(), m.lhs.clone(), m.rhs.clone());
        }
        if let Some(e) = &r.error {
            rep = rep.error(&Error::Config(e.clone()));
        }
        rep
    }

    pub fn summary_line(&self) -> String {
        let verdict = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::PreconditionUnmet => "PRECONDITION-UNMET",
            Status::Error => "ERROR",
        };
        let mut s = format!("{verdict} {} [{}] checked={} window={}", self.id, self.context, self.checked, self.window);
        if let Some(n) = &self.note {
            s.push_str(&format!(" note={n}"));
        }
        s
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for w in &self.witnesses {
            writeln!(f, "  at {:?} {}: lhs={} rhs={}", w.exps, w.at, w.lhs, w.rhs)?;
        }
        Ok(())
    }
}
