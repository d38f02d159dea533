pub mod analytic;
pub mod catalog;
pub mod class_groups;
pub mod cm_field;
pub mod error;
pub mod forms;
pub mod ideals;
pub mod lattice;
pub mod matrix;
pub mod mp;
pub mod number_ring;
pub mod reflex;
pub mod serial;
