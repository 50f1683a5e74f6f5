use std::sync::OnceLock;

/// Tolerances shared by every numerical routine in the workspace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericPolicy {
    /// Max-entry bound on `U^dagger U - I` for a matrix to count as unitary.
    pub unitarity_tol: f64,
    /// Singular values closer than this are treated as one cluster.
    pub cluster_tol: f64,
    /// Entries below this modulus are skipped when fixing vector phases.
    pub phase_tol: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy { unitarity_tol: 1e-10, cluster_tol: 1e-8, phase_tol: 1e-10 }
    }
}

static POLICY: OnceLock<NumericPolicy> = OnceLock::new();

/// The active policy. Defaults apply unless [`set_policy`] ran first.
pub fn policy() -> &'static NumericPolicy {
    POLICY.get_or_init(NumericPolicy::default)
}

/// Installs a policy. Returns `false` if one was already in effect.
pub fn set_policy(p: NumericPolicy) -> bool {
    POLICY.set(p).is_ok()
}
