//! Simulation, compilation and verification for Turning Machines on the
//! triangular grid.

pub mod compile;
pub mod explore;
pub mod grid;
pub mod io;
pub mod machine;
pub mod shapes;
pub mod sim;

pub use grid::{Direction, GridPoint};
pub use machine::{Classification, Configuration, MachineError, MoveStatus, TurningMachine};
