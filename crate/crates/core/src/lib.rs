//! Exact positivity certificates and holomorphic factorizations for Hermitian
//! matrices of bihomogeneous polynomials.
//!
//! The central object is a [`BihermitianForm`], an `r×r` matrix of polynomials
//! `F(z, w̄)` on `C^n × C^n`. Its coefficient matrix is analysed with exact rational
//! arithmetic: an LDL* decomposition yields a [`SignatureCertificate`] for the inertia,
//! a difference-of-squares splitting, and, for positive semidefinite input, a
//! holomorphic factor `F(z, w̄) = A(w)*·A(z)`. Multiplying by powers of `⟨z,w⟩`
//! ([`find_minimal_d`]) makes strictly positive forms eventually factorable.

pub mod certify;
pub mod error;
pub mod factor;
pub mod hermform;
pub mod multiindex;
pub mod operator_link;
pub mod scalar;
pub mod serial;
pub mod sphere;
pub mod stabilize;
pub mod symbols;
pub mod verify;

pub use certify::{ldl_signature, ElementaryCongruence, GramDecomposition, SignatureCertificate};
pub use error::{Error, Result};
pub use factor::{
    difference_of_squares, holomorphic_factor, holomorphic_factor_certified, numeric_factor,
    strict_holomorphic_factor, strict_holomorphic_factor_certified, DifferenceOfSquares, NumericFactor, WeightedGramFactor,
};
pub use hermform::{
    parse_expression, parse_form, parse_holo_matrix, BihermitianForm, CoefficientBasis,
    HermitianMatrix, HoloPoly, HoloPolyMatrix, Parsed,
};
pub use multiindex::{MonomialBasis, MultiIndex};
pub use scalar::{GaussianRational, Rational};
pub use stabilize::{find_minimal_d, multiplier_power, multiplier_shift, stabilization_sweep, Mode, StabilizationReport};
pub use symbols::{certify_elliptic, complex_to_real, parse_symbol, real_to_complex, EllipticReport, EllipticVerdict, RealSymbol};
pub use verify::{verify_document, VerificationReport};
