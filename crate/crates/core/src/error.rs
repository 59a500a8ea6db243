use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("unknown generator `{0}`")]
    UnknownGeneratorName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("differential of `{name}` must have homological degree {expected}, found a term of degree {found}")]
    DegreeMismatch {
        name: String,
        expected: i64,
        found: u32,
    },
    #[error("generator `{name}` must have positive weight")]
    ZeroWeight { name: String },
    #[error("cannot combine polynomials of different flavors")]
    MixedFlavors,
    #[error("generator name `{0}` collides with reserved matrix-entry names")]
    NameCollision(String),
    #[error("derivation image of `{name}` is not homogeneous of degree {expected}")]
    InhomogeneousDerivation { name: String, expected: i64 },
    #[error("element is not homogeneous in (homological degree, weight)")]
    Inhomogeneous,
    #[error("presentation is not weight-homogeneous: d({0}) changes weight")]
    NotHomogeneous(String),
    #[error("block (homdeg {homdeg}, weight {weight}) needs {size} basis elements, over the budget of {limit}")]
    ResourceExhausted {
        homdeg: u32,
        weight: u32,
        size: usize,
        limit: usize,
    },
    #[error("resolution property fails in block (homdeg {homdeg}, weight {weight})")]
    NotAResolution { homdeg: u32, weight: u32 },
    #[error("A-infinity components requested outside the computed bounds: {0}")]
    BoundsExceeded(String),
    #[error("representation point does not satisfy the defining relations")]
    InvalidRepresentation,
    #[error("cannot lift the cycle in block (homdeg {homdeg}, weight {weight}): input is not a cycle")]
    UnsolvableLift { homdeg: u32, weight: u32 },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = core::result::Result<T, Error>;

/// Size budget for enumerated bases and tensor blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of basis elements in a single block.
    pub max_block: usize,
}

impl Limits {
    pub const fn new(max_block: usize) -> Self {
        Limits { max_block }
    }

    pub(crate) fn check(&self, homdeg: u32, weight: u32, size: usize) -> Result<()> {
        if size > self.max_block {
            Err(Error::ResourceExhausted {
                homdeg,
                weight,
                size,
                limit: self.max_block,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::new(250_000)
    }
}
