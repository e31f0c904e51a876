use core::fmt;

/// Errors shared by all topology, expansion, routing and flow operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Parameters violate a documented precondition; the message names it.
    InvalidArgument(&'static str),
    /// Randomized construction exhausted its retry budget without producing
    /// a valid (connected, degree-correct) graph.
    Stalled,
    /// The operation requires a connected topology.
    Disconnected,
    /// No path exists between the requested switches.
    Unreachable { src: u32, dst: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Stalled => write!(f, "construction stalled: retry budget exhausted"),
            Error::Disconnected => write!(f, "topology is disconnected"),
            Error::Unreachable { src, dst } => {
                write!(f, "switch {dst} is unreachable from switch {src}")
            }
        }
    }
}

impl core::error::Error for Error {}
