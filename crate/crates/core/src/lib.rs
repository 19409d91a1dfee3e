//! Static set membership in the bit-probe model.
//!
//! Sets of at most `n` elements from a universe `[m]` are stored in a short
//! bit string and queried with two or three probes. The crate provides the
//! graph substrates ([`graphs`]), the safe-orientation engine behind the
//! classical adaptive scheme ([`orientation`]), the dense-core and
//! two-forest machinery behind the quantum adaptive scheme ([`forests`]), a
//! probe-accounting memory ([`memory`]), the schemes themselves
//! ([`schemes`]) and a verification harness ([`harness`]).

pub mod forests;
pub mod graphs;
pub mod harness;
pub mod memory;
pub mod orientation;
pub mod schemes;
