//! Ext¹ between symmetric, exterior and divided power functors over `Z`,
//! computed from labyrinth presentations.

pub mod exactalg;
pub mod extengine;
pub mod labyrinth;
pub mod multiset;
pub mod powerfunctors;
pub mod registry;
pub mod selftest;
