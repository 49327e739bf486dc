//! Library backing the `duality` command-line tool: problem-file parsing,
//! report rendering and the seeded verification suites.

pub mod problem;
pub mod runner;
pub mod suites;
pub mod syntax;
