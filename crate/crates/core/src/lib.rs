pub mod biorthogonal;
pub mod echelon;
pub mod error;
pub mod io;
pub mod operator;
pub mod operator_builder;
pub mod random;
pub mod scalar;
pub mod space;
pub mod support_graph;
pub mod verification;
