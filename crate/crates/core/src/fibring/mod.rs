//! The fibered Burnside ring `kB^A(G)` for `A = μ_{pⁿ}`: monomial pairs,
//! the ring product, species, and Barker's primitive idempotents.

mod pairs;
mod space;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::FiniteGroup;
use crate::scalars::{Field, Scalar, ScalarError};

pub use pairs::{pair_product, species_counts, MonomialPair, SpeciesIndex};
pub use space::{
    pair_space, select_character_sign, IdempotentFormula, PairSpace, CHARACTER_SIGN,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FibError {
    #[error("elements live over different groups ({0} and {1})")]
    GroupMismatch(String, String),
    #[error("species duality fails: {0}")]
    DualityFailure(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A `k`-linear combination of classes `[U,φ]_G`, keyed by canonical
/// representatives; zero coefficients are never stored.
#[derive(Clone)]
pub struct RingElement {
    group: Arc<FiniteGroup>,
    field: Arc<Field>,
    terms: BTreeMap<MonomialPair, Scalar>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.group.id() == other.group.id() && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bracket_notation())
    }
}

impl RingElement {
    pub fn zero(group: &Arc<FiniteGroup>, field: &Arc<Field>) -> Self {
        RingElement { group: group.clone(), field: field.clone(), terms: BTreeMap::new() }
    }

    /// `[U,φ]_G` for an arbitrary (not necessarily canonical) pair.
    pub fn basis(group: &Arc<FiniteGroup>, field: &Arc<Field>, pair: &MonomialPair) -> Self {
        let mut x = Self::zero(group, field);
        x.add_term(pair.canonical(group), field.one());
        x
    }

    /// `[G,1]_G`.
    pub fn unit(group: &Arc<FiniteGroup>, field: &Arc<Field>) -> Self {
        Self::basis(group, field, &MonomialPair::trivial_on_whole(group))
    }

    /// From integer multiplicities of canonical pairs.
    pub fn from_counts<'a, I>(group: &Arc<FiniteGroup>, field: &Arc<Field>, counts: I) -> Self
    where
        I: IntoIterator<Item = (&'a MonomialPair, i64)>,
    {
        let mut x = Self::zero(group, field);
        for (pair, c) in counts {
            x.add_term(pair.clone(), field.from_integer(c));
        }
        x
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialPair, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, pair: &MonomialPair) -> Scalar {
        self.terms.get(&pair.canonical(&self.group)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·[pair]`, where `pair` must already be canonical.
    pub fn add_term(&mut self, pair: MonomialPair, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let k = &self.field;
        match self.terms.entry(pair) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = k.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, other: &RingElement) -> Result<(), FibError> {
        if self.group.id() != other.group.id() {
            return Err(FibError::GroupMismatch(self.group.label().into(), other.group.label().into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, FibError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, FibError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElement {
        self.scale(&self.field.from_integer(-1))
    }

    pub fn scale(&self, c: &Scalar) -> RingElement {
        let mut out = Self::zero(&self.group, &self.field);
        if c.is_zero() {
            return out;
        }
        for (p, x) in &self.terms {
            out.terms.insert(p.clone(), self.field.mul(x, c));
        }
        out
    }

    /// The ring product, by bilinear extension of the double coset formula.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement, FibError> {
        self.check_same(other)?;
        let k = &self.field;
        let m = k.fiber_order() as u32;
        let mut out = Self::zero(&self.group, k);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let xy = k.mul(x, y);
                for (pair, c) in pair_product(&self.group, m, a, b) {
                    out.add_term(pair, k.mul(&xy, &k.from_integer(c)));
                }
            }
        }
        Ok(out)
    }

    /// `s_{H,h}(x)`.
    pub fn species_value(&self, idx: &SpeciesIndex) -> Scalar {
        let k = &self.field;
        let m = k.fiber_order() as u32;
        let mut acc = k.zero();
        for (pair, c) in &self.terms {
            let counts = species_counts(&self.group, m, idx, pair);
            if counts.iter().any(|&x| x != 0) {
                acc = k.add(&acc, &k.mul(c, &k.zeta_sum(&counts)));
            }
        }
        acc
    }

    /// Terms as `c[V,ν]_G` in bracket notation, with characters written by
    /// their values on the members of `V`.
    pub fn bracket_notation(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("({})·{}", c, p.bracket(&self.group)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
