//! Deciding when a two-string tangle embeds in the unknot, the unlink or a
//! split link, with exact fraction arithmetic, planar diagrams, quandle
//! colorings and Jones polynomial checks.

pub mod bracket;
pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod expr;
pub mod fraction;
pub mod poly;
pub mod quandle;
pub mod smith;
