use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("window radius {0} is too small (minimum 3)")]
    WindowTooSmall(u32),
    #[error("unsupported lattice family: {0}")]
    UnsupportedFamily(String),
    #[error("graph is not planar: {0}")]
    NonPlanar(String),
    #[error("face with {0} vertices has no lattice-point centre")]
    UnsupportedFace(usize),
    #[error("region exceeds the usable window (radius {window})")]
    RegionOutsideWindow { window: u32 },
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("parameter {name} = {value} is outside [0,1)")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("parameters are not on the critical surface (kappa = {0:e})")]
    NotSelfDual(f64),
    #[error("self-dual completion {0} lies outside [0,1)")]
    OutOfSurface(f64),
    #[error("model does not match graph: {0}")]
    ModelMismatch(String),
    #[error("edge {0} has no probability class")]
    UnclassifiedEdge(usize),
    #[error("probability map has {got} entries but the graph has {expected} edges")]
    MissingProbability { expected: usize, got: usize },
    #[error("rectangle is square; an explicit crossing orientation is required")]
    AmbiguousOrientation,
    #[error("invalid colour sequence: {0}")]
    InvalidColourSequence(String),
    #[error("inner radius {inner} is below the minimum {min} for this colour sequence")]
    InnerRadiusTooSmall { inner: u32, min: u32 },
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
    #[error("too few usable points for a fit ({usable} < 3)")]
    TooFewPoints { usable: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
