//! IO companion to `jellynet-core`: the topology and expansion-log text
//! formats, CSV experiment reports, and the named experiment drivers behind
//! the `jellynet` binary.

pub mod experiments;
pub mod format;
pub mod report;
