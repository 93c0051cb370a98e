//! Exact finite-field toolkit for building and verifying access-optimal
//! conversions between MDS codes and locally repairable codes.

pub mod code;
pub mod field;
pub mod grs;
pub mod matrix;
pub mod pgl;
pub mod poly;
pub mod bounds;
pub mod convert;
pub mod sim;
