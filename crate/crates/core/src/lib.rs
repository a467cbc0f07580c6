pub mod count;
pub mod ehrhart;
pub mod error;
pub mod fluctuation;
pub mod geometry;
pub mod json;
pub mod lp;
pub mod qde;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Point, Polytope, TrapezoidSpec};
pub use rational::Rational;
