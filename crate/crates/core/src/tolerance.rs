//! Numerical tolerances shared across the crate.
//!
//! | Constant | Use |
//! |----------|-----|
//! | [`RELATIVE`] | default relative comparison of exact double-precision quantities |
//! | [`ROOT_ACCEPT`] | acceptance of a root of a defining polynomial (scaled by its terms) |
//! | [`FIXED_POINT`] | residual of the boundary-law equation for an accepted solution |
//! | [`IDENTITY`] | closed-form identities between side series |
//! | [`PARAMETER_EQUAL`] | equality of law parameters in identifiability criteria |
//! | [`MARGINAL_GAP`] | smallest marginal difference treated as a witness of distinct measures |
//! | [`NEAR_COINCIDENT`] | laws too close for a marginal gap to be expected |

/// Default relative tolerance for quantities computed in closed form.
pub const RELATIVE: f64 = 1e-12;

/// A root is accepted when the polynomial value is below this times the sum of
/// the absolute values of its terms.
pub const ROOT_ACCEPT: f64 = 1e-12;

/// Maximum residual of the boundary-law equation for a verified solution.
pub const FIXED_POINT: f64 = 1e-8;

/// Tolerance of the `1 + l0 + r0` identity and of the generic solver's
/// residual on the normalized u-system.
pub const IDENTITY: f64 = 1e-10;

/// Denominators `u_-1 + u_1 - tau` smaller than this are rejected.
pub const DEGENERATE: f64 = 1e-14;

/// Two law parameters closer than this are considered equal.
pub const PARAMETER_EQUAL: f64 = 1e-10;

/// Marginal gaps above this count as evidence that two measures differ.
pub const MARGINAL_GAP: f64 = 1e-9;

/// Threshold parameters (tau_c) are matched within this distance.
pub const THRESHOLD: f64 = 1e-12;

/// Relative distance under which two laws are identified up to shift and scale.
pub const LAW_MATCH: f64 = 1e-7;

/// Largest relative truncation error the window sampler accepts.
pub const SAMPLER_TAIL: f64 = 1e-6;

/// Relative closeness test `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// Laws closer than this (relative, up to shift and scale) are treated as
/// near-coincident: their marginals may differ by less than [`MARGINAL_GAP`]
/// even when the measures are distinct.
pub const NEAR_COINCIDENT: f64 = 1e-3;
