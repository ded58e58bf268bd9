//! Ideals of truncated algebras, constraint systems on linear endomorphisms,
//! the case-splitting solver and falsification certificates.

mod certificate;
mod constraints;
mod ideal;
mod solver;

pub use certificate::{
    basis_labels, falsify_equation_ideal, falsify_smallest_closed, kernel_contains, linear_orbit_span, Certificate,
    ConstraintLine, IdealSummary, Method, Verdict, DEFAULT_DEPTH,
};
pub use constraints::{gen_constraints, generic_apply, generic_images, Constraint, ConstraintSystem, RHO};
pub use ideal::{closure_sampled, ideal_build, ideal_contains, sf_image, TruncatedIdeal};
pub use solver::{solve_cases, Branch, BranchNode, BranchStatus, Split};
