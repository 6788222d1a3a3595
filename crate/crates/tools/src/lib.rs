//! File IO, JSON formats, brute-force oracles and the command line for
//! [`phylotag`].

pub mod cli;
pub mod io;
pub mod json;
pub mod oracles;
pub mod report;

pub use io::{read_collection, InputError};
pub use json::{tag_to_json, TagDump};
pub use report::{order_dependence_report, report_to_json, report_to_text};
