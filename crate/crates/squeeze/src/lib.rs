//! Command-line front end for `squeeze-core`: grid evaluation, set
//! distances, plurisubharmonicity scans and construction certificates.

pub mod args;
pub mod commands;
pub mod grid;
pub mod output;
