//! Turns force/torque recordings of handheld-tool tasks into joint-level
//! requirements (torque, bandwidth, speed, compliance) for a 3-DOF robotic
//! finger, and sizes the actuator stack (motor, gear train, series-elastic
//! element) against them.
//!
//! Pipeline: [`wrench_io`] loads the recordings and task/grasp configuration,
//! [`optim`] distributes each measured wrench over the grasp contacts and maps
//! the contact forces through the finger model in [`model`] to joint torques,
//! [`bandwidth`] extracts the tracking bandwidth each torque trajectory needs,
//! [`actuator`] evaluates closed-form motor/gear/spring sizing rules, and
//! [`report`] compares the achieved design against a requirements profile.

pub mod actuator;
pub mod bandwidth;
pub mod error;
pub mod model;
pub mod optim;
pub mod report;
pub mod wrench_io;

pub use error::{IoError, ModelError, SolveError};
