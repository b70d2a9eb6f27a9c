//! Tolerances used across construction and verification.
//!
//! Every threshold is named here rather than scattered through the code.
//! All quantities in this crate are algebraic numbers evaluated in f64, so
//! the tolerances split into two regimes: near machine precision for direct
//! constructions (roots, weights, expansions of degree <= 16), and looser
//! thresholds for O(N^2) accumulations over large codes.

/// Exactness residual allowed for any constructed quadrature rule.
pub const EXACTNESS_RESIDUAL: f64 = 1e-10;

/// Residual of the three-term recurrence at sampled points.
pub const RECURRENCE_RESIDUAL: f64 = 1e-11;

/// Orthogonality residual for pairs of basis polynomials.
pub const ORTHOGONALITY_RESIDUAL: f64 = 1e-11;

/// Sup-norm error of expand-then-resynthesize round trips.
pub const EXPAND_ROUNDTRIP: f64 = 1e-10;

/// Bisection terminates at this bracket width; Newton polishing follows.
pub const BISECTION_WIDTH: f64 = 1e-12;

/// |f(root)| <= ROOT_RESIDUAL_FACTOR * max|f| over the bracket.
pub const ROOT_RESIDUAL_FACTOR: f64 = 1e-14;

/// Two nodes closer than this are considered coincident.
pub const NODE_CLUSTER: f64 = 1e-9;

/// Unit-norm deviation allowed for code points and witnesses.
pub const UNIT_NORM: f64 = 1e-12;

/// Minimum pairwise distance between distinct code points.
pub const MIN_POINT_SEPARATION: f64 = 1e-9;

/// Absolute clustering tolerance for inner products against a code.
/// Distinct algebraic inner products in every catalog code differ by
/// more than 1e-2, so 1e-9 leaves seven orders of headroom.
pub const INNER_PRODUCT_CLUSTER: f64 = 1e-9;

/// Relative gap below which a bound counts as attained.
pub const ATTAINMENT_REL_GAP: f64 = 1e-9;

/// N*weight must sit within this of an integer for attainable rules.
pub const INTEGER_COUNT_DEVIATION: f64 = 1e-6;

/// Full-mode moment threshold, scaled by N^2.
pub const MOMENT_FULL_FACTOR: f64 = 1e-9;

/// Sampled-mode moment threshold, scaled by N.
pub const MOMENT_SAMPLED_FACTOR: f64 = 1e-6;

/// Level-set centroid deviation in facet checks.
pub const CENTROID_TOL: f64 = 1e-8;

/// Empirical search may not undercut a certified bound by more than
/// this times max(1, |bound|).
pub const SEARCH_UNDERCUT: f64 = 1e-8;

/// Relative slack for interpolant domination on the dense grid.
pub const DOMINATION_REL: f64 = 1e-9;

/// Riesz kernels are evaluated no closer to the singularity than this.
pub const SINGULARITY_CLAMP: f64 = 1e-12;
