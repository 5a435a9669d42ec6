pub mod analyze;
pub mod eval;
pub mod filter;
pub mod generate;
pub mod report;
pub mod train;
