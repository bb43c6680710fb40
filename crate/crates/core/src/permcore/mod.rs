//! Permutation groups stored as explicit element lists: generation,
//! centralizers, cosets, and orbit/stabilizer data on coset spaces.

mod coset;
mod group;
mod perm;

pub use coset::{coset_orbits, fixed_cosets, left_cosets, Coset, CosetOrbit};
pub use group::{centralizer, conjugating_element, PermGroup};
pub use perm::{format_tuple, parse_tuple, Perm, MAX_DEGREE};
