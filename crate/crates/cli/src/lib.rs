//! Front end of the `beldef` command: query evaluation across engines,
//! analysis dumps and oracle runs, each renderable as text or JSON.

pub mod analyze;
pub mod error;
pub mod oracle;
pub mod query;
