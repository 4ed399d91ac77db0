//! Claim records and verdicts shared by the comparison ledger.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Confirmed,
    Discrepant,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Discrepant => "discrepant",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Which overall sign of the computed side matched the claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    AsStated,
    Opposite,
}

/// Minimum number of sample points behind a definite verdict.
pub const MIN_SAMPLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub point: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    pub paper_value: f64,
    pub computed_value: f64,
    pub abs_diff: f64,
}

impl Sample {
    pub fn new(point: BTreeMap<String, f64>, paper_value: f64, computed_value: f64) -> Sample {
        Sample {
            point,
            component: None,
            paper_value,
            computed_value,
            abs_diff: (paper_value - computed_value).abs(),
        }
    }

    /// Point in chart coordinates `(r, theta_R, s)`.
    pub fn at_chart(p: &[f64; 3], paper_value: f64, computed_value: f64) -> Sample {
        let point = ["r", "theta_R", "s"]
            .iter()
            .zip(p)
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        Sample::new(point, paper_value, computed_value)
    }

    pub fn with_component(mut self, c: &str) -> Sample {
        self.component = Some(c.to_string());
        self
    }

    fn agrees(&self, sign: f64, tol: f64) -> bool {
        let (p, c) = (self.paper_value, sign * self.computed_value);
        (p - c).abs() <= tol * 1f64.max(p.abs()).max(c.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub id: String,
    pub paper_text: String,
    /// What the engine computed, in words or as an expression.
    pub computed_text: String,
    pub verdict: Verdict,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_convention: Option<SignConvention>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub samples: Vec<Sample>,
}

impl ClaimRecord {
    /// Judge a claim from its samples. Agreement means
    /// `|paper - computed| <= tol * max(1, |paper|, |computed|)` at every
    /// sample. When `allow_sign_flip` is set, agreement with the negated
    /// computed values also confirms and is recorded as the opposite
    /// convention. Fewer than [`MIN_SAMPLES`] samples is inconclusive.
    pub fn judge(
        id: &str,
        paper_text: &str,
        computed_text: &str,
        tolerance: f64,
        allow_sign_flip: bool,
        samples: Vec<Sample>,
    ) -> ClaimRecord {
        let mut rec = ClaimRecord {
            id: id.to_string(),
            paper_text: paper_text.to_string(),
            computed_text: computed_text.to_string(),
            verdict: Verdict::Inconclusive,
            tolerance,
            sign_convention: None,
            notes: Vec::new(),
            samples,
        };
        if rec.samples.len() < MIN_SAMPLES {
            rec.notes.push(format!("only {} sample point(s)", rec.samples.len()));
            return rec;
        }
        if rec
            .samples
            .iter()
            .any(|s| !s.computed_value.is_finite() || !s.paper_value.is_finite())
        {
            rec.notes.push("non-finite value at a sample point".to_string());
            return rec;
        }
        if rec.samples.iter().all(|s| s.agrees(1.0, tolerance)) {
            rec.verdict = Verdict::Confirmed;
            rec.sign_convention = Some(SignConvention::AsStated);
        } else if allow_sign_flip && rec.samples.iter().all(|s| s.agrees(-1.0, tolerance)) {
            rec.verdict = Verdict::Confirmed;
            rec.sign_convention = Some(SignConvention::Opposite);
        } else {
            rec.verdict = Verdict::Discrepant;
        }
        rec
    }

    /// A claim that could not be evaluated at all.
    pub fn failed(id: &str, paper_text: &str, tolerance: f64, reason: String) -> ClaimRecord {
        ClaimRecord {
            id: id.to_string(),
            paper_text: paper_text.to_string(),
            computed_text: String::new(),
            verdict: Verdict::Inconclusive,
            tolerance,
            sign_convention: None,
            notes: vec![reason],
            samples: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> ClaimRecord {
        self.notes.push(note.into());
        self
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.samples.iter().map(|s| s.abs_diff).fold(0.0, f64::max)
    }
}

/// Claim records ordered by id.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub claims: Vec<ClaimRecord>,
}

impl ComparisonReport {
    pub fn new(mut claims: Vec<ClaimRecord>) -> ComparisonReport {
        claims.sort_by_key(|c| claim_order(&c.id));
        ComparisonReport { claims }
    }

    pub fn get(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// Sort key: numeric equation number first, then the suffix.
fn claim_order(id: &str) -> (u32, String) {
    let body = id.strip_prefix("Eq.").unwrap_or(id);
    let digits: String = body.chars().take_while(char::is_ascii_digit).collect();
    (digits.parse().unwrap_or(u32::MAX), body[digits.len()..].to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(pairs: &[(f64, f64)]) -> Vec<Sample> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (p, c))| Sample::at_chart(&[i as f64, 0.0, 0.0], *p, *c))
            .collect()
    }

    #[test]
    fn verdicts() {
        let ok = ClaimRecord::judge("a", "", "", 1e-9, true, samples(&[(1.0, 1.0); 3]));
        assert_eq!(ok.verdict, Verdict::Confirmed);
        assert_eq!(ok.sign_convention, Some(SignConvention::AsStated));
        let flip = ClaimRecord::judge("a", "", "", 1e-9, true, samples(&[(1.0, -1.0); 3]));
        assert_eq!(flip.sign_convention, Some(SignConvention::Opposite));
        let strict = ClaimRecord::judge("a", "", "", 1e-9, false, samples(&[(1.0, -1.0); 3]));
        assert_eq!(strict.verdict, Verdict::Discrepant);
        let bad = ClaimRecord::judge("a", "", "", 1e-9, true, samples(&[(-3.0, 0.0); 3]));
        assert_eq!(bad.verdict, Verdict::Discrepant);
        assert_eq!(bad.max_abs_diff(), 3.0);
        let few = ClaimRecord::judge("a", "", "", 1e-9, true, samples(&[(0.0, 0.0); 2]));
        assert_eq!(few.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn ordering_is_numeric() {
        let mk = |id: &str| ClaimRecord::failed(id, "", 0.0, String::new());
        let r = ComparisonReport::new(vec![mk("Eq.45"), mk("Eq.10"), mk("Eq.40b"), mk("Eq.40a"), mk("Eq.9")]);
        let ids: Vec<_> = r.claims.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["Eq.9", "Eq.10", "Eq.40a", "Eq.40b", "Eq.45"]);
    }
}
