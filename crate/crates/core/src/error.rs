use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bit-plane index {0} is outside 0..=7")]
    InvalidPlaneIndex(u8),
    #[error("bit-plane set must be non-empty and free of duplicates")]
    InvalidPlaneSet,
    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("pixel buffer holds {actual} values but {width}x{height} needs {expected}")]
    PixelCount {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error("block {block} out of range (image has {count} blocks)")]
    BlockOutOfRange { block: usize, count: usize },
    #[error("domain tag of {0} bytes exceeds the 16-byte limit")]
    TagTooLong(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("capacity constraint violated: v*m*N/u = {reference} but l*N - La*N/b^2 = {capacity}")]
    ConstraintViolation { reference: u64, capacity: u64 },
    #[error("divisibility requirement failed: {0}")]
    DivisibilityError(&'static str),
    #[error("La = {la} must lie in 1..={max}")]
    LaOutOfRange { la: usize, max: usize },
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("collage needs at least one donor and a block assignment covering the grid")]
    EmptyAssignment,
    #[error("assignment refers to donor {source_index} but only {donors} donors were supplied")]
    SourceOutOfRange { source_index: usize, donors: usize },
    #[error("images were analysed under different parameters")]
    ParamsMismatch,
    #[error("no candidate permutation is consistent with the observed blocks")]
    NoSurvivors,
    #[error("exhaustive search over {elements}! candidates is refused")]
    SearchTooLarge { elements: usize },
    #[error("permutation has {actual} elements, expected {expected}")]
    PermutationSizeMismatch { expected: usize, actual: usize },
    #[error("rectangle does not fit inside the image")]
    RectOutOfBounds,
}
