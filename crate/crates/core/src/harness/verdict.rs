//! Verdicts: expected patterns against computed Koszul dimensions.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// Where an expectation comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Backed by certificates computed in this run.
    Certified,
    /// Taken from the fixture's declared profile.
    Declared,
    /// Forced by a theorem from data verified in this run.
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Pattern {
    Zero,
    Nonzero,
    Equals(u64),
    AtLeast(u64),
}

impl Pattern {
    pub fn matches(&self, dim: u64) -> bool {
        match *self {
            Pattern::Zero => dim == 0,
            Pattern::Nonzero => dim != 0,
            Pattern::Equals(v) => dim == v,
            Pattern::AtLeast(v) => dim >= v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub cell: String,
    pub pattern: Pattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub cell: String,
    pub dim: u64,
}

/// `K_{p,q}(label)`.
pub fn cell(p: usize, q: u32, label: &str) -> String {
    format!("K_{{{p},{q}}}({label})")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub fixture: String,
    pub bundle: String,
    pub expected: Vec<Expectation>,
    pub computed: Vec<Observation>,
    pub status: Status,
    pub basis: Basis,
    pub certificates: Vec<String>,
}

impl Verdict {
    /// Pass iff every expectation has a matching observation.
    pub fn judge(
        claim: &str,
        bundle: &str,
        expected: Vec<Expectation>,
        computed: Vec<Observation>,
        basis: Basis,
        certificates: Vec<String>,
    ) -> Verdict {
        let ok = expected.iter().all(|e| computed.iter().any(|o| o.cell == e.cell && e.pattern.matches(o.dim)));
        Verdict {
            claim: claim.to_string(),
            fixture: String::new(),
            bundle: bundle.to_string(),
            expected,
            computed,
            status: if ok { Status::Pass } else { Status::Fail },
            basis,
            certificates,
        }
    }

    pub fn inconclusive(claim: &str, bundle: &str, computed: Vec<Observation>, certificates: Vec<String>) -> Verdict {
        Verdict {
            claim: claim.to_string(),
            fixture: String::new(),
            bundle: bundle.to_string(),
            expected: Vec::new(),
            computed,
            status: Status::Inconclusive,
            basis: Basis::Declared,
            certificates,
        }
    }

    pub fn with_fixture(mut self, name: &str) -> Verdict {
        self.fixture = name.to_string();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn dim(&self, cell: &str) -> Option<u64> {
        self.computed.iter().find(|o| o.cell == cell).map(|o| o.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_requires_every_expectation() {
        let exp =
            vec![Expectation { cell: cell(2, 1, "K"), pattern: Pattern::Nonzero }, Expectation { cell: cell(3, 1, "K"), pattern: Pattern::Zero }];
        let good = vec![Observation { cell: cell(2, 1, "K"), dim: 2 }, Observation { cell: cell(3, 1, "K"), dim: 0 }];
        assert!(Verdict::judge("c", "K", exp.clone(), good, Basis::Declared, vec![]).passed());
        let missing = vec![Observation { cell: cell(2, 1, "K"), dim: 2 }];
        assert_eq!(Verdict::judge("c", "K", exp, missing, Basis::Declared, vec![]).status, Status::Fail);
    }

    #[test]
    fn json_shape() {
        let v =
            Verdict::judge("green", "K", vec![Expectation { cell: cell(1, 1, "K"), pattern: Pattern::Equals(3) }], vec![], Basis::Derived, vec![])
                .with_fixture("F3");
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["status"], "fail");
        assert_eq!(j["fixture"], "F3");
        assert_eq!(j["expected"][0]["pattern"]["kind"], "equals");
        assert_eq!(j["basis"], "derived");
    }
}
