//! Numerics for hyper-Kähler 4-manifolds of type A∞ built from center
//! configurations `λ = (λ_n)` in `Im ℍ ≅ ℝ × ℂ`.

// `!(x > 0.0)` is deliberate throughout: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charts;
pub mod error;
pub mod isomorphism;
pub mod potential;
pub mod quadrature;
pub mod quotient;
pub mod roots;
pub mod series;
pub mod suites;
pub mod types;

pub use charts::{
    act, chart_forward, chart_inverse, f_base, f_chart, log_modulus, moduli_from_moment, representative_at,
    section_multiplier, section_through, split_center, split_centers, transition, wrap, CenterSplit, Chart, LogModulus,
    ManifoldPoint, Multiplier,
};
pub use error::{Error, Result};
pub use isomorphism::{
    apply_h, build_h, build_phi0, isom_exists, isom_exists_up_to_translation, FiberCertificate, IsomCertificate,
    IsomorphismData, OrderIso,
};
pub use potential::{
    f_lambda, flow_log_g, growth_exponent, growth_exponent_with, phi, radial_distance, volume_density, CertifiedValue,
    GrowthFit, GrowthOptions,
};
pub use quotient::{
    base_gap, class_of, compare, is_continuous, k_divisor, same_class, signed_count, CombinatorialSection, Comparison,
    Gap, IntegerDivisor, Position, QuotientClass,
};
pub use suites::{run_suite, Check, SuiteReport, SUITES};
pub use types::{
    check_representative, delta_set, fiber, validate, Configuration, DeclaredFiber, Family, Fiber, FiberKey, ImHPoint,
    OrderType, Slot, StabilityReport, TruncatedRepresentative, ValidityReport,
};
