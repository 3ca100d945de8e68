//! Arthur-packet bookkeeping for theta lifts of symplectic and orthogonal groups.
//!
//! [`recipe`] turns a packet member into its lifts level by level, [`jacquet`] and
//! [`chains`] work on the representation side through standard modules, and [`dsl`]
//! reads and writes the text format used by the command line tool.

pub mod chains;
pub mod dsl;
pub mod enumerate;
pub mod fixtures;
pub mod half_int;
pub mod jacquet;
pub mod param;
pub mod recipe;
pub mod segment;

pub use half_int::HalfInt;
pub use param::{BlockData, CuspidalLine, GroupContext, JordanBlock, PacketMember, Sign};
