//! The group `G_k = Z[1/k] ⋊ Z^n`, characters of `Z^n` and the generating
//! set `Z_ρ`.

mod character;
mod element;
mod zrho;

pub use character::{
    equivalent_characters, CRho, Character, CharacterClass, CharacterKind, MAX_WEIGHT,
};
pub use element::{Group, GroupElement};
pub use zrho::{in_zrho, lattice_box, lattice_shells, zrho_length, ZrhoWord};

pub(crate) use element::{add, neg, scale, sub, unit};
