//! Star colorings of sparse graphs through forest/independent-set
//! decompositions.
//!
//! The pipeline: exact maximum average degree ([`density`]), detection of
//! reducible configurations ([`config`]), a replay of the matching
//! discharging argument ([`discharge`]), reduce-and-extend partitions
//! ([`decompose`]) and their conversion into verified star colorings
//! ([`colorize`]). [`gen`] supplies instances and the small-graph extremal
//! search.

pub mod colorize;
pub mod config;
pub mod decompose;
pub mod density;
pub mod discharge;
mod flow;
pub mod gen;
pub mod graph;
pub mod io;
pub mod star;
pub mod threads;
pub mod traversal;

pub use colorize::{
    color_from_partition, star_color, star_color_via, ColoringCertificate, ColorizeError, Route, RouteChoice,
};
pub use config::{detect, detect_l2, detect_l3, detect_l5, validate_match, ConfigurationMatch, Family};
pub use decompose::{
    decompose, decompose_fi, decompose_fi1i2, decompose_fi1i2i3, decompose_with, extend_by_search, verify_partition,
    Class, DecomposeError, DecomposeOptions, Partition, PartitionVerdict, ReductionTrace, Scheme,
};
pub use density::{format_ratio, mad_below, mad_bruteforce, mad_exact, parse_ratio, DensityError, MadResult, Rational};
pub use discharge::{apply_rules, audit_discharging, charge_identity, AuditReport, ChargeLedger};
pub use gen::{
    extremal_search, generate, named, random_sparse, ExtremalRecord, GenError, Generated, GeneratorSpec, Method,
};
pub use graph::{Graph, GraphError, Vertex};
pub use io::{parse_graph, serialize_graph, Format, ParseError};
pub use star::{
    exact_star_chromatic, star_color_forest, verify_star, Coloring, StarChromatic, StarError, StarVerdict, Violation,
};
pub use traversal::girth;
