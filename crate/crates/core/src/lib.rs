//! Heegner point existence and counting for quaternionic Shimura curves.

pub mod cli;
pub mod embedtables;
pub mod engine;
pub mod localdata;
pub mod padic_oracle;
pub mod quadarith;
pub mod signs;
