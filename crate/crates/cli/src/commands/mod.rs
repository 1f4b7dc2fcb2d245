pub mod construct;
pub mod flow;
pub mod iterate;
pub mod metric;
pub mod potential;
pub mod verify;
