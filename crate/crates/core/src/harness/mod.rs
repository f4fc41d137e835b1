//! Instance generators, query orders, independent verification and
//! experiment execution.

pub mod calibration;
pub mod experiment;
pub mod instance;
pub mod order;
pub mod verify;
