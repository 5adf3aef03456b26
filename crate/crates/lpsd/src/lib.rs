//! File formats and the `lpsd` command-line tool on top of `lpsd-core`.

pub mod cli;
pub mod io;
