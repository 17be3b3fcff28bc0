use std::collections::BTreeMap;

use serde::Serialize;

use crate::point::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    /// A failure is conclusive and fails the run.
    Strict,
    /// A failure may come from a sup search falling short; never fails the run.
    Evidence,
    /// Outcome recorded without a pass criterion.
    Report,
}

/// One sampled check. Margins are `rhs - lhs` in the inequality's own
/// units; identities use `-|lhs - rhs|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub domain: String,
    pub level: CheckLevel,
    pub samples: usize,
    pub passed: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub seed: u64,
    /// Points realizing `worst_margin`.
    pub witness: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn counts_against_run(&self) -> bool {
        self.level == CheckLevel::Strict && !self.passed
    }

    pub fn with_value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Running minimum of margins with its witness.
#[derive(Debug, Clone)]
pub(crate) struct Tracker {
    worst: f64,
    witness: Vec<Point>,
    samples: usize,
}

impl Tracker {
    pub(crate) fn new() -> Self {
        Self {
            worst: f64::INFINITY,
            witness: Vec::new(),
            samples: 0,
        }
    }

    pub(crate) fn observe(&mut self, margin: f64, witness: &[&[f64]]) {
        self.samples += 1;
        // NaN margins always become the witness
        if !(margin >= self.worst) {
            self.worst = margin;
            self.witness = witness.iter().map(|p| p.to_vec()).collect();
        }
    }

    pub(crate) fn samples(&self) -> usize {
        self.samples
    }

    pub(crate) fn finish(
        self,
        name: &str,
        domain: &str,
        level: CheckLevel,
        tolerance: f64,
        seed: u64,
    ) -> VerificationReport {
        let passed = level == CheckLevel::Report || self.worst >= -tolerance;
        VerificationReport {
            name: name.to_string(),
            domain: domain.to_string(),
            level,
            samples: self.samples,
            passed,
            worst_margin: self.worst,
            tolerance,
            seed,
            witness: self.witness,
            note: None,
            values: BTreeMap::new(),
        }
    }
}

/// A list of checks, serialized as TOML `[[check]]` records.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub check: Vec<VerificationReport>,
}

impl Report {
    pub fn new(check: Vec<VerificationReport>) -> Self {
        Self { check }
    }

    pub fn strict_passed(&self) -> bool {
        !self.check.iter().any(VerificationReport::counts_against_run)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("reports contain only serializable values")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracker_keeps_worst_witness() {
        let mut t = Tracker::new();
        t.observe(0.5, &[&[1.0]]);
        t.observe(-0.25, &[&[2.0], &[3.0]]);
        t.observe(0.0, &[&[4.0]]);
        let r = t.finish("demo", "ball2", CheckLevel::Strict, 1e-9, 7);
        assert_eq!(r.worst_margin, -0.25);
        assert_eq!(r.witness, vec![vec![2.0], vec![3.0]]);
        assert!(!r.passed && r.counts_against_run());
        let mut e = r.clone();
        e.level = CheckLevel::Evidence;
        assert!(!e.counts_against_run());
    }

    #[test]
    fn toml_layout() {
        let mut t = Tracker::new();
        t.observe(1.0, &[&[0.1, 0.2]]);
        let r = t
            .finish("alpha_le_2j", "ball2", CheckLevel::Evidence, 1e-9, 3)
            .with_value("estimate", 2.5);
        let s = Report::new(vec![r.clone(), r]).to_toml();
        assert_eq!(s.matches("[[check]]").count(), 2);
        assert!(s.contains("level = \"evidence\""));
        assert!(s.contains("estimate = 2.5"));
        let parsed: toml::Value = toml::from_str(&s).unwrap();
        assert_eq!(parsed["check"][0]["seed"].as_integer(), Some(3));
    }
}
