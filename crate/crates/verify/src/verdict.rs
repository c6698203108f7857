//! Measured values against bounds, and the verdict of one criterion.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// value ≤ bound
    AtMost,
    /// value < bound
    Below,
    /// value ≥ bound
    AtLeast,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
}

impl Measurement {
    pub fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Measurement { label: label.into(), value, bound, relation: Relation::AtMost }
    }

    pub fn below(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Measurement { label: label.into(), value, bound, relation: Relation::Below }
    }

    pub fn at_least(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Measurement { label: label.into(), value, bound, relation: Relation::AtLeast }
    }

    /// NaN never holds.
    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.value <= self.bound,
            Relation::Below => self.value < self.bound,
            Relation::AtLeast => self.value >= self.bound,
        }
    }

    /// How much of the allowance is used; above 1 means the bound is violated.
    pub fn load(&self) -> f64 {
        let load = match self.relation {
            Relation::AtMost | Relation::Below => self.value / self.bound,
            Relation::AtLeast => self.bound / self.value,
        };
        if load.is_nan() {
            f64::INFINITY
        } else {
            load
        }
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {:.3e} {} {:.3e}", self.label, self.value, self.relation.symbol(), self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    /// Set when the computation itself failed before measuring.
    pub error: Option<String>,
    /// True when the failure was a numerical breakdown rather than a miss.
    pub breakdown: bool,
}

impl Verdict {
    pub fn measured(id: u8, title: &str, measurements: Vec<Measurement>) -> Self {
        let passed = !measurements.is_empty() && measurements.iter().all(Measurement::holds);
        Verdict { id, title: title.into(), passed, measurements, error: None, breakdown: false }
    }

    pub fn errored(id: u8, title: &str, error: String, breakdown: bool) -> Self {
        Verdict { id, title: title.into(), passed: false, measurements: Vec::new(), error: Some(error), breakdown }
    }

    /// The measurement closest to (or furthest past) its bound.
    pub fn tightest(&self) -> Option<&Measurement> {
        self.measurements.iter().max_by(|a, b| a.load().total_cmp(&b.load()))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {tag} {}", self.id, self.title)?;
        if let Some(e) = &self.error {
            return write!(f, ": error: {e}");
        }
        let failing: Vec<String> = self.measurements.iter().filter(|m| !m.holds()).map(|m| m.to_string()).collect();
        if failing.is_empty() {
            if let Some(m) = self.tightest() {
                write!(f, " ({} checks; tightest {m})", self.measurements.len())?;
            }
        } else {
            write!(f, ": {} of {} checks miss: {}", failing.len(), self.measurements.len(), failing.join("; "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_and_nan() {
        assert!(Measurement::at_most("x", 1.0, 1.0).holds());
        assert!(!Measurement::below("x", 1.0, 1.0).holds());
        assert!(Measurement::at_least("x", 3.0, 3.0).holds());
        assert!(!Measurement::at_most("x", f64::NAN, 1.0).holds());
        assert!(!Measurement::at_least("x", f64::NAN, 1.0).holds());
        assert_eq!(Measurement::at_most("x", f64::NAN, 1.0).load(), f64::INFINITY);
    }

    #[test]
    fn verdict_summary() {
        let v = Verdict::measured(3, "demo", vec![Measurement::at_most("a", 0.5, 1.0), Measurement::at_least("b", 1.0, 2.0)]);
        assert!(!v.passed);
        let line = v.to_string();
        assert!(line.starts_with("criterion  3 FAIL demo") && line.contains("1 of 2 checks miss: b"), "{line}");
        assert!(!Verdict::measured(1, "empty", Vec::new()).passed);
        let ok = Verdict::measured(2, "fine", vec![Measurement::at_most("a", 0.5, 1.0), Measurement::at_most("c", 0.9, 1.0)]);
        assert!(ok.passed && ok.tightest().unwrap().label == "c");
    }
}
