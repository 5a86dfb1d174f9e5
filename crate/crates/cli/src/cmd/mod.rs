pub mod coupler;
pub mod jpm;
pub mod simulate;
pub mod sweep;
pub mod tables;
