//! Check reports shared by every verification sweep.
//!
//! A check passes when it has no violations. Undetermined items (witness
//! searches that leave the finite window) and skipped items (truncated at the
//! ball boundary) are counted but never turn a check red.

use std::fmt;

use serde::Serialize;

/// Cap on the number of witnesses kept per check.
pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub violations: usize,
    pub witnesses: Vec<String>,
    pub undetermined: usize,
    pub skipped: usize,
    pub examined: usize,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness());
        }
    }

    /// Records one examined item; `ok == false` adds a violation.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.examined += 1;
        if !ok {
            self.fail(witness);
        }
    }

    pub fn merge(&mut self, other: Check) {
        self.violations += other.violations;
        self.undetermined += other.undetermined;
        self.skipped += other.skipped;
        self.examined += other.examined;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {} (examined {}", self.name, self.examined)?;
        if self.violations > 0 {
            write!(f, ", violations {}", self.violations)?;
        }
        if self.undetermined > 0 {
            write!(f, ", undetermined {}", self.undetermined)?;
        }
        if self.skipped > 0 {
            write!(f, ", skipped {}", self.skipped)?;
        }
        write!(f, ")")?;
        for w in &self.witnesses {
            write!(f, "\n    witness: {w}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {}", self.title)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
