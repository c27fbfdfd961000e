use alloc::string::String;
use core::fmt;

/// Errors reported by the core library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed polynomial text; `pos` is a byte offset into the input.
    Parse { pos: usize, msg: String },
    /// A rational coefficient had a zero denominator.
    ZeroDenominator,
    /// An exponent exceeded [`crate::MAX_EXPONENT`].
    ExponentTooLarge,
    /// The operation is undefined for the zero polynomial.
    ZeroPolynomial,
    /// `next_in_chain` was applied to a constant.
    ConstantPolynomial,
    /// The operation requires a nonzero constant term.
    MissingConstantTerm,
    /// Every point of a multipoint set is a root.
    DegenerateMultipoint,
    /// A bound formula overflowed `u64`.
    BoundOverflow,
    /// Dense expansion refused because the degree exceeds the cap.
    DegreeExceedsCap { degree: u64, cap: u64 },
    /// A caller violated a documented precondition.
    Contract(&'static str),
    /// An internal invariant failed; this is a bug.
    Invariant(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::ZeroDenominator => f.write_str("zero denominator"),
            Error::ExponentTooLarge => f.write_str("exponent exceeds 2^62 - 1"),
            Error::ZeroPolynomial => f.write_str("zero polynomial"),
            Error::ConstantPolynomial => f.write_str("polynomial is constant"),
            Error::MissingConstantTerm => f.write_str("polynomial has no constant term"),
            Error::DegenerateMultipoint => f.write_str("polynomial vanishes on every multipoint"),
            Error::BoundOverflow => f.write_str("bound computation overflowed"),
            Error::DegreeExceedsCap { degree, cap } => {
                write!(f, "degree {degree} exceeds dense cap {cap}")
            }
            Error::Contract(msg) => write!(f, "precondition violated: {msg}"),
            Error::Invariant(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
