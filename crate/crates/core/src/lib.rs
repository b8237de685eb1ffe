pub mod assemble;
pub mod cli;
pub mod coloring;
pub mod embedding;
pub mod error;
pub mod expander;
pub mod gadget;
pub mod goodness;
pub mod graph;
pub mod numeric;
pub mod params;
pub mod ramsey;
pub mod reduction;
pub mod report;
pub mod template;

pub use error::{Error, Result};
pub use graph::{Graph, Hypergraph};
pub use numeric::{NonNegInt, Universe};
pub use params::ParamSet;
pub use report::{PropertyReport, Status};
