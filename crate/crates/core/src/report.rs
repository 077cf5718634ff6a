//! Pass/fail records produced by the verification routines.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub reference: f64,
    /// `|measured − reference|`, or the signed excess for one-sided checks.
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|measured − reference| ≤ tolerance`.
    pub fn close(name: impl Into<String>, measured: f64, reference: f64, tolerance: f64) -> Self {
        let gap = (measured - reference).abs();
        Self {
            name: name.into(),
            measured,
            reference,
            gap,
            tolerance,
            pass: gap <= tolerance,
        }
    }

    /// `measured ≤ reference + tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, reference: f64, tolerance: f64) -> Self {
        let gap = measured - reference;
        Self {
            name: name.into(),
            measured,
            reference,
            gap,
            tolerance,
            pass: gap <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { checks, pass }
    }
}
