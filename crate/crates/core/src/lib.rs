//! Fibered Burnside rings of finite p-groups: exact arithmetic, Barker
//! idempotents, fibered biset calculus and the subfunctor lattice of the
//! fibered Burnside functor.

pub mod bitset;
pub mod groups;
pub mod scalars;
pub mod linalg;
pub mod fibring;
pub mod bisets;
pub mod setoracle;
pub mod functorlat;
