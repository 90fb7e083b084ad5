pub mod bandfit;
pub mod error;
pub mod fock;
pub mod models;
pub mod qnum;
pub mod report;
pub mod symsector;
pub mod verify;

pub use error::{QuonError, Result};
