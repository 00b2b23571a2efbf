//! Exact checks for invariant subgroup measures on finite groups and free
//! groups, and numeric modular-function checks on a small catalog of Lie
//! groups.

pub mod action;
pub mod error;
pub mod group;
pub mod lie;
pub mod measure;
pub mod orbit;
pub mod schreier;
pub mod subgroup;
pub mod word;

pub use action::GroupAction;
pub use error::{Error, Result};
pub use group::{Element, FiniteGroup};
pub use schreier::{CanonicalForm, DoublyRootedLabeledGraph, RootedLabeledGraph};
pub use subgroup::{CosetId, Subgroup, SubgroupLattice};
pub use word::{Letter, Word};
