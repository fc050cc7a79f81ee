//! Command-line front end: graph and triangle file formats, report rendering.

pub mod app;
pub mod error;
pub mod graph_file;
pub mod triangle_file;

pub use app::{run, Cli, Command, Output};
pub use error::CliError;
pub use graph_file::{parse_graph_file, render_graph_file};
pub use triangle_file::parse_triangle_file;
