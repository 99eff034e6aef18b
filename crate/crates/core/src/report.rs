//! Pass/fail bookkeeping shared by all verification suites.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub details: String,
}

impl Claim {
    pub fn check(id: &str, anchor: &str, ok: bool, details: impl Into<String>) -> Self {
        Claim {
            id: id.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            details: details.into(),
        }
    }

    /// Equality check whose details show both sides.
    pub fn expect_eq<T: PartialEq + fmt::Display>(id: &str, anchor: &str, got: T, want: T) -> Self {
        let ok = got == want;
        Self::check(id, anchor, ok, format!("got {got}, expected {want}"))
    }

    pub fn from_result<T>(id: &str, anchor: &str, r: crate::Result<T>, on_ok: impl FnOnce(T) -> Claim) -> Self {
        match r {
            Ok(v) => on_ok(v),
            Err(crate::Error::Inconclusive(msg)) => Claim {
                id: id.into(),
                anchor: anchor.into(),
                status: Status::Inconclusive,
                details: msg,
            },
            Err(e) => Self::check(id, anchor, false, e.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub claims: Vec<Claim>,
    pub timing_ms: u128,
    pub version: String,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.into(),
            claims: Vec::new(),
            timing_ms: 0,
            version: concat!("icosa-core ", env!("CARGO_PKG_VERSION")).into(),
        }
    }

    pub fn push(&mut self, c: Claim) {
        self.claims.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Claim>) {
        self.claims.extend(cs);
    }

    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(Claim::passed)
    }

    pub fn any_failed(&self) -> bool {
        self.claims.iter().any(|c| c.status == Status::Fail)
    }

    pub fn ids_unique(&self) -> bool {
        let mut seen = HashSet::new();
        self.claims.iter().all(|c| seen.insert(c.id.as_str()))
    }

    pub fn failures(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.passed()).collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} ({} ms)", self.suite, self.timing_ms)?;
        for c in &self.claims {
            writeln!(f, "  [{}] {}: {}", c.status, c.id, c.details)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_and_uniqueness() {
        let mut r = VerificationReport::new("t");
        r.push(Claim::expect_eq("a", "x", 1, 1));
        assert!(r.all_passed());
        r.push(Claim::expect_eq("a", "x", 1, 2));
        assert!(r.any_failed());
        assert!(!r.ids_unique());
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"status\":\"fail\""));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
