//! Verification layer: log-concavity of section volumes, mixed discriminants,
//! log-det convexity and the parallelogram counterexample.

mod concavity;
mod counterexample;
mod mixed;

pub use concavity::{
    check_triple, classify, logconcavity_scan, ConcavityReport, TripleResult, Verdict, ROUNDING_TOL, SIGMA_THRESHOLD,
};
pub use counterexample::{
    counterexample_curve, counterexample_value, counterexample_violation, dilated_halfplanes, dilated_intersection,
    parallelogram, parallelogram_halfplanes, CurvePoint, ViolationCertificate, PINNED_TRIPLE,
};
pub use mixed::{
    det_expansion_check, logdet_convexity_check, mixed_discriminant, weighted_logdet, ConvexityReport,
    MixedDiscriminantResult, CONVEXITY_BOX, MAX_ORDER, MAX_TUPLES,
};
