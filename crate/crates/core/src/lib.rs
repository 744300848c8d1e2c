pub mod catalog;
pub mod config;
pub mod expr;
pub mod field;
pub mod freealg;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod par;
pub mod reductor;
pub mod registry;
pub mod report;
