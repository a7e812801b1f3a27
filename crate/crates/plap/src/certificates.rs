//! Deterministic certificate arithmetic: spectral thresholds on link
//! graphs turned into fixed-point and conformal-dimension statements. No
//! probability here, only the per-instance implications.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Method tag for eigenvalues computed by the dense symmetric solver at
/// p = 2; everything else is an iterative upper bound.
pub const METHOD_EXACT_P2: &str = "exact-p2";
pub const METHOD_ITERATIVE: &str = "iterative";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    FLp,
    KazhdanT,
    ConfdimBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rigor {
    #[serde(rename = "exact-p2")]
    ExactP2,
    #[serde(rename = "iterative-upper-bound")]
    IterativeUpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub link_id: String,
    pub lambda: f64,
    pub method: String,
}

impl Evidence {
    pub fn new(link_id: impl Into<String>, lambda: f64, method: &str) -> Self {
        Evidence {
            link_id: link_id.into(),
            lambda,
            method: method.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: Property,
    pub p: f64,
    pub epsilon: f64,
    pub lipschitz: f64,
    pub rigor: Rigor,
    pub evidence: Vec<Evidence>,
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateOutcome {
    Issued {
        certificate: Certificate,
        warnings: Vec<String>,
    },
    Refused {
        reason: String,
    },
}

impl CertificateOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertificateOutcome::Issued { certificate, .. } => Some(certificate),
            CertificateOutcome::Refused { .. } => None,
        }
    }
}

fn min_lambda(evidence: &[Evidence]) -> Result<f64> {
    if evidence.is_empty() {
        return Err(Error::Parameter("no eigenvalue evidence supplied".into()));
    }
    let mut min = f64::INFINITY;
    for e in evidence {
        if !e.lambda.is_finite() {
            return Err(Error::Parameter(format!(
                "non-finite eigenvalue for link '{}'",
                e.link_id
            )));
        }
        min = min.min(e.lambda);
    }
    Ok(min)
}

fn inherited_rigor(evidence: &[Evidence]) -> Rigor {
    if evidence.iter().all(|e| e.method == METHOD_EXACT_P2) {
        Rigor::ExactP2
    } else {
        Rigor::IterativeUpperBound
    }
}

/// Fixed-point certificate for actions with L-bi-Lipschitz p-geometry in
/// dimensions above the largest link: issued exactly when every link
/// eigenvalue clears 1 - epsilon, with L = (2 - 2*epsilon)^(1/(2p)).
pub fn flp_certificate(
    evidence: &[Evidence],
    p: f64,
    epsilon: f64,
    max_link_vertices: usize,
) -> Result<CertificateOutcome> {
    if !(p >= 2.0) {
        return Err(Error::Parameter(format!("exponent must be >= 2, got {p}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Parameter(format!(
            "threshold margin must lie in (0, 1/2), got {epsilon}"
        )));
    }
    let min = min_lambda(evidence)?;
    if min <= 1.0 - epsilon {
        return Ok(CertificateOutcome::Refused {
            reason: format!(
                "smallest link eigenvalue {min} does not exceed {}",
                1.0 - epsilon
            ),
        });
    }
    let mut parameters = BTreeMap::new();
    parameters.insert("m".to_string(), max_link_vertices as f64);
    parameters.insert("dimension".to_string(), (max_link_vertices + 1) as f64);
    let certificate = Certificate {
        property: Property::FLp,
        p,
        epsilon,
        lipschitz: (2.0 - 2.0 * epsilon).powf(1.0 / (2.0 * p)),
        rigor: inherited_rigor(evidence),
        evidence: evidence.to_vec(),
        parameters,
    };
    Ok(CertificateOutcome::Issued {
        certificate,
        warnings: Vec::new(),
    })
}

/// Property (T) certificate from the spectral gap criterion: every link
/// eigenvalue at p = 2 strictly above 1/2. Non-exact evidence does not
/// block issuance but downgrades rigor with a warning, since an iterative
/// value only bounds the true eigenvalue from above.
pub fn kazhdan_certificate(evidence: &[Evidence]) -> Result<CertificateOutcome> {
    let min = min_lambda(evidence)?;
    if min <= 0.5 {
        return Ok(CertificateOutcome::Refused {
            reason: format!("smallest link eigenvalue {min} does not exceed 1/2"),
        });
    }
    let rigor = inherited_rigor(evidence);
    let warnings = if rigor == Rigor::IterativeUpperBound {
        vec![
            "eigenvalue evidence is iterative, an upper bound only; the spectral criterion is \
             not rigorously verified"
                .to_string(),
        ]
    } else {
        Vec::new()
    };
    let certificate = Certificate {
        property: Property::KazhdanT,
        p: 2.0,
        epsilon: 0.5,
        lipschitz: 1.0,
        rigor,
        evidence: evidence.to_vec(),
        parameters: BTreeMap::new(),
    };
    Ok(CertificateOutcome::Issued {
        certificate,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlpRange {
    pub lower: f64,
    pub upper: f64,
    pub f_of_m: f64,
    pub c: f64,
}

/// Exponent interval [2, max(2, (1/C) (ln f / ln ln f)^(1/2))] over which
/// the fixed-point property is asserted; f must be at least 16 so the
/// iterated logarithm is safely positive.
pub fn flp_range(f_of_m: f64, c: f64) -> Result<FlpRange> {
    if !(f_of_m >= 16.0) {
        return Err(Error::Parameter(format!(
            "relator count must be at least 16, got {f_of_m}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::Parameter(format!(
            "constant must be positive, got {c}"
        )));
    }
    let raw = (f_of_m.ln() / f_of_m.ln().ln()).sqrt() / c;
    Ok(FlpRange {
        lower: 2.0,
        upper: raw.max(2.0),
        f_of_m,
        c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfdimReport {
    pub m: usize,
    pub d: f64,
    pub delta: f64,
    pub confdim_upper: f64,
    pub confdim_lower: Option<f64>,
    pub isoperimetric_coefficient: f64,
    pub isoperimetric_epsilon: f64,
}

/// Hyperbolicity constant, boundary conformal-dimension bounds, and the
/// linear isoperimetric coefficient at density d in (1/3, 1/2). A
/// certified exponent, when supplied, becomes the lower bound and must sit
/// under the upper bound.
pub fn hyperbolicity_and_confdim(
    m: usize,
    d: f64,
    certified_p: Option<f64>,
    isoperimetric_epsilon: Option<f64>,
) -> Result<ConfdimReport> {
    if m < 2 {
        return Err(Error::Parameter(format!(
            "need at least two generators, got {m}"
        )));
    }
    if !(d < 0.5) {
        return Err(Error::Degenerate(format!(
            "hyperbolicity constant diverges as density reaches 1/2, got {d}"
        )));
    }
    if !(d > 1.0 / 3.0) {
        return Err(Error::Parameter(format!(
            "density must exceed 1/3, got {d}"
        )));
    }
    let eps = isoperimetric_epsilon.unwrap_or(0.01);
    let delta = 5.0 / (1.0 - 2.0 * d);
    let confdim_upper = 30.0 / (1.0 - 2.0 * d) * ((2 * m - 1) as f64).ln();
    if let Some(p) = certified_p {
        if !(p >= 2.0 && p.is_finite()) {
            return Err(Error::Parameter(format!(
                "certified exponent must be a finite real >= 2, got {p}"
            )));
        }
        if p > confdim_upper {
            return Err(Error::Inadmissible(format!(
                "certified exponent {p} exceeds the dimension upper bound {confdim_upper}"
            )));
        }
    }
    Ok(ConfdimReport {
        m,
        d,
        delta,
        confdim_upper,
        confdim_lower: certified_p,
        isoperimetric_coefficient: 3.0 * (1.0 - 2.0 * d - eps),
        isoperimetric_epsilon: eps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferStatement {
    pub property: String,
    pub monotonicity: Monotonicity,
    pub holds_in_binomial: bool,
    pub m: usize,
    pub f_of_m: f64,
    /// Coupled inclusion probability f(m) (2m)^-3 linking the two
    /// parameterizations.
    pub coupled_rho: f64,
    pub regime: String,
}

/// Bookkeeping for moving a monotone property between the binomial and
/// fixed-count models at coupled parameters. Declining to declare a
/// monotonicity direction is a refusal, not a default.
pub fn monotone_transfer(
    property: &str,
    monotonicity: Option<Monotonicity>,
    holds_in_binomial: bool,
    m: usize,
    f_of_m: f64,
) -> Result<TransferStatement> {
    let monotonicity = monotonicity.ok_or_else(|| {
        Error::Inadmissible(format!(
            "property '{property}' has no declared monotonicity direction"
        ))
    })?;
    if m == 0 || !(f_of_m >= 0.0) {
        return Err(Error::Parameter("bad model parameters".into()));
    }
    let coupled_rho = f_of_m * (2.0 * m as f64).powi(-3);
    Ok(TransferStatement {
        property: property.to_string(),
        monotonicity,
        holds_in_binomial,
        m,
        f_of_m,
        coupled_rho,
        regime: "asymptotic".to_string(),
    })
}
