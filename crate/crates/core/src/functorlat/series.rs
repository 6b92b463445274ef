use std::sync::Arc;

use serde::Serialize;

use crate::bisets::{iso, tw};
use crate::fibring::pair_space;
use crate::groups::characters;

use super::{full_functor, index_set, kernel_subfunctor, GroupUniverse, IndexSet, LatticeError, Subfunctor};

/// Groups of least order on which `F` is nonzero.
pub fn minimal_groups(f: &Subfunctor) -> Result<Vec<usize>, LatticeError> {
    let u = f.universe();
    let first = (0..u.len()).find(|&i| f.space(i).rank() > 0).ok_or(LatticeError::ZeroFunctor)?;
    let order = u.groups()[first].order();
    Ok((first..u.len()).filter(|&i| u.groups()[i].order() == order && f.space(i).rank() > 0).collect())
}

/// `K_i/K_{i+1}` at the minimal group `E` of `K_i`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub group: String,
    pub group_index: usize,
    pub elementary_rank: Option<u32>,
    pub quotient_dim: usize,
    /// `K_i(E) = K_{i+1}(E) + k·e^E_{E,1}`.
    pub generated_by_idempotent: bool,
    /// `Tw^φ` acts as the identity on the quotient for every `φ ∈ E*`.
    pub twists_trivial: bool,
    /// `c^λ` acts as the identity on the quotient for every `λ ∈ Aut(E)`.
    pub automorphisms_trivial: bool,
}

pub fn quotient_report(ki: &Subfunctor, kj: &Subfunctor) -> Result<QuotientReport, LatticeError> {
    let u = ki.universe();
    let k = u.field();
    let gi = minimal_groups(ki)?[0];
    let e = &u.groups()[gi];
    let sp = pair_space(e, u.modulus());
    let (top, bottom) = (ki.space(gi), kj.space(gi));
    let idem = sp.idempotent_of(&sp.canonical_species(e.whole(), 0), k);
    let mut with_e = bottom.clone();
    with_e.insert(&sp.to_vector(&idem));
    let generated_by_idempotent = with_e.rank() == top.rank() && top.contains_span(&with_e);
    let acts_trivially = |x: &crate::bisets::Biset| -> Result<bool, LatticeError> {
        for v in ki.basis(gi) {
            let d = x.act(&v)?.sub(&v).expect("same group");
            if !bottom.contains(&sp.to_vector(&d)) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut twists_trivial = true;
    for chi in characters(e, e.whole(), u.modulus() as u64) {
        twists_trivial &= acts_trivially(&tw(e, &chi, k)?)?;
    }
    let mut automorphisms_trivial = true;
    for lambda in e.automorphisms() {
        automorphisms_trivial &= acts_trivially(&iso(e, e, &lambda, k)?)?;
    }
    Ok(QuotientReport {
        group: e.label().into(),
        group_index: gi,
        elementary_rank: e.elementary_rank(),
        quotient_dim: top.rank() - bottom.rank(),
        generated_by_idempotent,
        twists_trivial,
        automorphisms_trivial,
    })
}

/// `kB^A = K₀ ⊃ K₁ ⊃ …` with `K_{i+1}` the kernel of `K_i` at its minimal group.
pub struct CompositionSeries {
    pub index: IndexSet,
    /// `K₀, K₁, …`, ending with the first term that vanishes on the universe.
    pub terms: Vec<Subfunctor>,
    /// Minimal groups of the nonzero terms (all groups of least order).
    pub minimal: Vec<Vec<usize>>,
    pub quotients: Vec<QuotientReport>,
}

impl CompositionSeries {
    pub fn is_strict(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].contains(&w[1]) && !w[1].same_as(&w[0]))
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.terms.iter().map(Subfunctor::dims).collect()
    }
}

/// Largest `r` with `p^r` at most the largest group order of the universe.
fn rank_bound(u: &GroupUniverse) -> u32 {
    let p = u.field().spec().p as usize;
    let top = u.groups().last().map_or(1, |g| g.order());
    let mut r = 0;
    while p.pow(r + 1) <= top {
        r += 1;
    }
    r
}

pub fn composition_series(u: &Arc<GroupUniverse>) -> Result<CompositionSeries, LatticeError> {
    let spec = u.field().spec();
    let index = index_set(spec.p, spec.q, rank_bound(u))?;
    if let Some(&r) = index.ranks.iter().find(|&&r| u.elementary(r).is_none()) {
        return Err(LatticeError::UniverseTooSmall(r));
    }
    let mut terms = vec![full_functor(u)];
    let mut minimal = Vec::new();
    let mut quotients = Vec::new();
    for _ in 0..=u.len() {
        let current = terms.last().unwrap();
        if current.is_zero() {
            break;
        }
        let mins = minimal_groups(current)?;
        let next = kernel_subfunctor(current, &u.groups()[mins[0]])?;
        quotients.push(quotient_report(current, &next)?);
        minimal.push(mins);
        terms.push(next);
    }
    Ok(CompositionSeries { index, terms, minimal, quotients })
}
