//! Machine-checkable verdict records produced by every verification run.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sturm,
    Hurwitz,
    Nseq,
    Multiplier,
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of a certification or verification run.
///
/// A failing certificate always carries a witness that reproduces the failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub subject: String,
    pub method: Method,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub millis: u64,
}

impl Certificate {
    pub fn pass(subject: impl Into<String>, method: Method, witness: Option<Value>) -> Self {
        Certificate {
            subject: subject.into(),
            method,
            verdict: Verdict::Pass,
            witness,
            millis: 0,
        }
    }

    pub fn fail(subject: impl Into<String>, method: Method, witness: Value) -> Self {
        Certificate {
            subject: subject.into(),
            method,
            verdict: Verdict::Fail,
            witness: Some(witness),
            millis: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Runs `f` and stamps the elapsed wall time on the certificate it returns.
pub fn timed<E>(f: impl FnOnce() -> Result<Certificate, E>) -> Result<Certificate, E> {
    let start = Instant::now();
    let mut cert = f()?;
    cert.millis = start.elapsed().as_millis() as u64;
    Ok(cert)
}

/// Pass/fail certificate for a grid check where `first_failure` is the smallest failing
/// instance, if any.
pub(crate) fn grid_certificate(
    subject: impl Into<String>,
    method: Method,
    checked: usize,
    first_failure: Option<Value>,
) -> Certificate {
    match first_failure {
        None => Certificate::pass(
            subject,
            method,
            Some(serde_json::json!({ "instances_checked": checked })),
        ),
        Some(w) => Certificate::fail(subject, method, w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let c = Certificate::fail("x", Method::Sturm, serde_json::json!({"k": "1"}));
        let s = c.to_json();
        assert_eq!(
            s,
            r#"{"subject":"x","method":"sturm","verdict":"fail","witness":{"k":"1"},"millis":0}"#
        );
        assert_eq!(Certificate::from_json(&s).unwrap(), c);
        let p = Certificate::pass("y", Method::Nseq, None);
        assert!(p.to_json().contains(r#""witness":null"#));
    }
}
