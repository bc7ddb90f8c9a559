pub mod centralizer;
pub mod cli;
pub mod coeffs;
pub mod counting;
pub mod engine;
pub mod oracle;
pub mod polyring;
pub mod root_system;
