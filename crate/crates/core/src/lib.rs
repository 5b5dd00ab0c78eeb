//! Ludeme game descriptions, a small general game engine over them, and
//! concept extraction from both the descriptions and simulated playouts.
//!
//! The pipeline is `ludeme` (text to tree), `compiler` (static concept scan
//! and lowering to a playable [`compiler::GameSpec`]), `engine` (states and
//! moves), `playout` (seeded trials and playout concepts) and `recommend`
//! (corpus distances).

pub mod board;
pub mod compiler;
pub mod concepts;
pub mod engine;
pub mod ludeme;
pub mod playout;
pub mod recommend;
pub mod union_find;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ludeme::ParseError),
    #[error(transparent)]
    Compile(#[from] compiler::CompileError),
    #[error(transparent)]
    Concept(#[from] concepts::ConceptError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses and statically scans a description.
pub fn scan_source(source: &str) -> Result<compiler::ScanReport, Error> {
    let tree = ludeme::parse_source(source)?;
    Ok(compiler::static_scan(&tree)?)
}

/// Parses and compiles a description into a playable game.
pub fn compile_source(source: &str) -> Result<compiler::GameSpec, Error> {
    let tree = ludeme::parse_source(source)?;
    Ok(compiler::compile(&tree)?)
}
