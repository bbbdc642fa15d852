//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors produced by exact-arithmetic and search routines.
///
/// Arithmetic operators on matching fields never fail; everything that can
/// fail (field construction, division, solvers, searches) returns `Result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Characteristic two is excluded throughout.
    CharacteristicTwo,
    /// The requested characteristic is not prime.
    CompositeCharacteristic(u64),
    /// Extension degree must be at least one.
    InvalidExtensionDegree,
    /// Operands belong to different fields.
    MixedFields,
    /// Division by zero or inversion of zero.
    DivisionByZero,
    /// Operation requires a finite field.
    RequiresFiniteField,
    /// Operation is undefined for the zero polynomial or zero form.
    ZeroPolynomial,
    /// Input polynomial has the wrong degree.
    DegreeMismatch { expected: usize, found: usize },
    /// Transvectant index out of range.
    TransvectantOrder { order: usize, max: usize },
    /// gcd(f, f') = f: the polynomial is an inseparable (p-th power) part.
    Inseparable,
    /// Not enough evaluation points for interpolation and fallback disabled.
    InsufficientPoints { needed: usize, available: u128 },
    /// The two matrices span a line, not a pencil (or are zero).
    DegeneratePencil(String),
    /// The determinant of the pencil vanishes identically.
    IdenticallySingularPencil,
    /// Simultaneous diagonalization failed.
    Diagonalize(String),
    /// The determinantal quintic does not split; minimal splitting degree attached.
    NonSplit { splitting_degree: usize },
    /// All invariants vanish: the binary quintic is GIT-unstable.
    UnstableQuintic,
    /// A signed permutation that is not in the Weyl group was used.
    NotInWeylGroup,
    /// Singular Gram matrix where a nondegenerate one is required.
    SingularGram,
    /// Unknown class label in a lattice expression.
    UnknownLabel(String),
    /// Lattice expression could not be parsed.
    ExpressionParse(String),
    /// Invalid fibration case description.
    InvalidCase(String),
    /// Model generation exhausted its retry budget.
    RetryBudgetExhausted { attempts: u32 },
    /// The linear forms of the model are dependent at the requested point.
    DependentLinearForms,
    /// Estimated work exceeds the evaluation budget; pitch `force` to override.
    BudgetExceeded { estimate: u128, budget: u128 },
    /// Anything else worth reporting verbatim.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CharacteristicTwo => write!(f, "characteristic two unsupported"),
            Error::CompositeCharacteristic(p) => write!(f, "{p} is not prime"),
            Error::InvalidExtensionDegree => write!(f, "extension degree must be >= 1"),
            Error::MixedFields => write!(f, "operands belong to different fields"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::RequiresFiniteField => write!(f, "operation requires a finite field"),
            Error::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "expected degree {expected}, found {found}")
            }
            Error::TransvectantOrder { order, max } => {
                write!(f, "transvectant order {order} exceeds maximum {max}")
            }
            Error::Inseparable => write!(f, "inseparable polynomial (p-th power detected)"),
            Error::InsufficientPoints { needed, available } => write!(
                f,
                "interpolation needs {needed} points but the field has {available}"
            ),
            Error::DegeneratePencil(msg) => write!(f, "degenerate pencil: {msg}"),
            Error::IdenticallySingularPencil => {
                write!(f, "determinant of the pencil vanishes identically")
            }
            Error::Diagonalize(msg) => write!(f, "diagonalization failed: {msg}"),
            Error::NonSplit { splitting_degree } => write!(
                f,
                "determinantal quintic does not split; minimal splitting degree {splitting_degree}"
            ),
            Error::UnstableQuintic => {
                write!(f, "all invariants vanish: GIT-unstable binary quintic")
            }
            Error::NotInWeylGroup => write!(f, "signed permutation is not in the Weyl group"),
            Error::SingularGram => write!(f, "Gram matrix is singular"),
            Error::UnknownLabel(l) => write!(f, "unknown class label '{l}'"),
            Error::ExpressionParse(msg) => write!(f, "cannot parse expression: {msg}"),
            Error::InvalidCase(msg) => write!(f, "invalid case: {msg}"),
            Error::RetryBudgetExhausted { attempts } => {
                write!(f, "model generation failed after {attempts} attempts")
            }
            Error::DependentLinearForms => {
                write!(f, "linear forms are dependent at the requested point")
            }
            Error::BudgetExceeded { estimate, budget } => {
                write!(f, "estimated {estimate} evaluations exceed budget {budget}")
            }
            Error::Unsupported(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
