use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Frame,
    NotFrame,
    Inconclusive,
    /// The window lies outside every class with a known frame set.
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Frame => "frame",
            Verdict::NotFrame => "not-frame",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Unknown => "unknown",
        }
    }

    pub fn is_decided(&self) -> bool {
        matches!(self, Verdict::Frame | Verdict::NotFrame)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "frame" => Ok(Verdict::Frame),
            "not-frame" => Ok(Verdict::NotFrame),
            "inconclusive" => Ok(Verdict::Inconclusive),
            "unknown" => Ok(Verdict::Unknown),
            other => Err(format!("unknown verdict `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Criterion,
    FiniteSection,
    Zak,
    Predicted,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Criterion,
        Method::FiniteSection,
        Method::Zak,
        Method::Predicted,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Criterion => "criterion",
            Method::FiniteSection => "finite-section",
            Method::Zak => "zak",
            Method::Predicted => "predicted",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Numerical verdict with lower/upper bound estimates.
///
/// What the bounds measure depends on `method`: frame-operator eigenvalues for
/// finite sections, singular values for the criterion matrix, `|Zg|²` for Zak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameEstimate {
    pub verdict: Verdict,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub method: Method,
    pub detail: String,
    /// Lower estimates at each refinement level.
    pub trajectory: Vec<f64>,
}

impl FrameEstimate {
    pub fn inconclusive(method: Method, detail: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::Inconclusive,
            lower: None,
            upper: None,
            method,
            detail: detail.into(),
            trajectory: Vec::new(),
        }
    }
}

/// Judges a refinement trajectory of lower estimates against the matching upper estimate.
///
/// Frame: every level clears `rel_tol · upper` and the last level keeps at least half of
/// the previous one. NotFrame: the finest level is at or below tolerance, or the lower
/// estimate fell by 10× across each of the last two refinements.
pub fn judge_trajectory(lowers: &[f64], upper: f64, rel_tol: f64) -> Verdict {
    let Some(&last) = lowers.last() else {
        return Verdict::Inconclusive;
    };
    let floor = rel_tol * upper;
    if last <= floor {
        return Verdict::NotFrame;
    }
    let n = lowers.len();
    if n >= 3 && lowers[n - 2] >= 10.0 * lowers[n - 1] && lowers[n - 3] >= 10.0 * lowers[n - 2] {
        return Verdict::NotFrame;
    }
    let stable = n < 2 || lowers[n - 1] >= 0.5 * lowers[n - 2];
    if lowers.iter().all(|&l| l > floor) && stable {
        Verdict::Frame
    } else {
        Verdict::Inconclusive
    }
}
