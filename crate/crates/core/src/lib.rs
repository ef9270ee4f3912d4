pub mod error;
pub mod exactalg;

pub use error::{Error, Result};
pub mod liealg;
pub mod grading;
pub mod stablevec;
pub mod nilorbit;
pub mod thetaconn;
pub mod hitchin;
pub mod conjlab;
pub mod report;
pub mod cli;
