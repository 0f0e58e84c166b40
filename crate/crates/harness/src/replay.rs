use opineq_core::catalog::{
    find_spec, run_trial, Fingerprint, InequalityResult, FINGERPRINT_FORMAT,
};

use crate::HarnessError;

/// Recomputes the trial named by `fingerprint`.
pub fn replay(fingerprint: &Fingerprint) -> Result<InequalityResult, HarnessError> {
    if fingerprint.format != FINGERPRINT_FORMAT {
        return Err(HarnessError::VersionMismatch {
            found: fingerprint.format.clone(),
            expected: FINGERPRINT_FORMAT.to_string(),
        });
    }
    find_spec(&fingerprint.spec)?;
    Ok(run_trial(fingerprint)?)
}
