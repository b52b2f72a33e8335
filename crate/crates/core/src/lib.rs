pub mod coframe;
pub mod error;
pub mod examples;
pub mod expr;
pub mod forms;
pub mod input;
pub mod invariants;
pub mod jet;
pub mod ode;
pub mod prolong4d;
pub mod report;
pub mod riemannian;
pub mod sampling;

pub use coframe::{Chart, Coframe, CoframeSpec, Frame, Stage};
pub use error::{Error, Result};
pub use forms::PForm;
pub use jet::{Elementary, Jet};
