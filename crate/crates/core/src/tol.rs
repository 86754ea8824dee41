//! Numerical thresholds shared across the engine.
//!
//! Everything here is sized for the small dense systems this engine works
//! with (total dimensions well under a hundred), where one singular value
//! decomposition loses at most a few ulps.

/// Amplitudes with modulus below this are dropped from sparse state maps.
/// Far below every test tolerance, so pruning never shows up in results.
pub const AMP_DROP: f64 = 1e-14;

/// Singular values at or below this are floating-point noise, not Schmidt
/// rank: terms under it are discarded from decompositions.
pub const RANK_EPS: f64 = 1e-10;

/// Two singular values closer than this are treated as degenerate when
/// ordering Schmidt terms deterministically.
pub const DEGENERACY_EPS: f64 = 1e-10;

/// Acceptable deviation from unit norm for states handed to the Schmidt
/// factorization.
pub const NORM_TOL: f64 = 1e-9;

/// Norm below which a state counts as zero and cannot be normalized.
pub const ZERO_NORM: f64 = 1e-15;

/// Entropy below this is treated as exactly zero (unentangled) by the
/// jump-instant solver.
pub const SIGMA_ZERO: f64 = 1e-12;

/// Band, in entropy units, within which a monotone entropy approach counts
/// as having reached its supremum (the plateau rule).
pub const PLATEAU_EPS: f64 = 1e-6;

/// Entropy variation treated as machine-flat when detecting schedules that
/// reach their cap exactly and stay there.
pub const FLAT_EPS: f64 = 1e-12;
