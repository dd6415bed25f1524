//! Validation reports: a pass/fail flag plus the first violated identity
//! with witness indices.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Name of the violated identity.
    pub identity: String,
    /// 1-based indices locating the violation (basis/coordinate indices).
    pub indices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Witness {
    pub fn new(identity: &str, indices: Vec<usize>) -> Self {
        Witness {
            identity: identity.to_string(),
            indices,
            detail: None,
        }
    }

    pub fn with_detail(identity: &str, indices: Vec<usize>, detail: String) -> Self {
        Witness {
            identity: identity.to_string(),
            indices,
            detail: Some(detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl ValidationReport {
    pub fn ok() -> Self {
        ValidationReport {
            valid: true,
            witness: None,
        }
    }

    pub fn fail(witness: Witness) -> Self {
        ValidationReport {
            valid: false,
            witness: Some(witness),
        }
    }
}
