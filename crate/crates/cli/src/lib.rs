//! Operational surface for the boxspace toolkit: the text space-file
//! format, deterministic instance generators, and JSON analysis reports.

pub mod gen;
pub mod report;
pub mod spacefile;

pub use gen::{gen_cycles, gen_margulis, gen_random_regular, gen_torus};
pub use spacefile::{ParseError, SpaceFile};
