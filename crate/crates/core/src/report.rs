//! Pass/fail reports with numeric witnesses — the universal output of
//! every validator in this crate.

use serde::{Deserialize, Serialize};

/// A single numeric witness: which indices, how far off.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub residual: f64,
    pub detail: String,
}

impl Witness {
    pub fn new(indices: Vec<usize>, residual: f64, detail: impl Into<String>) -> Self {
        Witness {
            indices,
            residual,
            detail: detail.into(),
        }
    }
}

/// Per-check result: pass flag, the tolerance used, and the witnesses
/// behind the verdict. `witnesses` holds violations; `notes` carries
/// finite-sample context that is informational rather than failing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    pub tolerance: f64,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, tolerance: f64) -> Self {
        VerificationReport {
            check: check.into(),
            pass: true,
            tolerance,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(&mut self, witness: Witness) {
        self.pass = false;
        self.witnesses.push(witness);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Largest witness residual, 0 if there are none.
    pub fn worst_residual(&self) -> f64 {
        self.witnesses
            .iter()
            .map(|w| w.residual)
            .fold(0.0, f64::max)
    }

    /// One-line summary suitable for streaming output.
    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        if self.witnesses.is_empty() {
            format!("{} {} (eps={:e})", verdict, self.check, self.tolerance)
        } else {
            format!(
                "{} {} (eps={:e}, {} witnesses, worst residual {:.6e})",
                verdict,
                self.check,
                self.tolerance,
                self.witnesses.len(),
                self.worst_residual()
            )
        }
    }
}
