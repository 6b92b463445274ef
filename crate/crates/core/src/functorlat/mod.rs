//! Subfunctors of the fibered Burnside functor `kB^A` on a finite universe
//! of `p`-groups.

mod deflation;
mod index;
mod series;

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bisets::{act_pair, BisetError};
use crate::fibring::{pair_space, MonomialPair, RingElement};
use crate::groups::{catalogue, direct_product, preset_group, FiniteGroup, GroupError};
use crate::linalg::{nullspace_of_echelon, Echelon};
use crate::scalars::{Field, Scalar};

pub use deflation::{deflation_constants, elementary_deflation_constant, frattini_constant, DeflationRow};
pub use index::{index_set, IndexSet};
pub use series::{composition_series, minimal_groups, quotient_report, CompositionSeries, QuotientReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("group {0} is not in the universe")]
    GroupNotInUniverse(String),
    #[error("characteristic {q} is not 0 or a prime different from {p}")]
    BadCharacteristic { p: u64, q: u64 },
    #[error("universe lacks the elementary abelian group of rank {0}")]
    UniverseTooSmall(u32),
    #[error("the subfunctor is zero on the universe")]
    ZeroFunctor,
    #[error("bad universe: {0}")]
    BadUniverse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Biset(#[from] BisetError),
}

/// The transitive `(H,G)`-bisets and their integer action matrices
/// `kB^A(G) → kB^A(H)` in the pair bases.
pub struct HomSpace {
    pub pairs: Vec<MonomialPair>,
    /// `columns[x][j]`: image of the `j`-th basis pair of `G` under the `x`-th biset.
    columns: Vec<Vec<Vec<(u32, i64)>>>,
}

impl HomSpace {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Image of a coordinate vector under the `x`-th biset.
    pub fn apply(&self, field: &Field, x: usize, v: &[Scalar], target_dim: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); target_dim];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, n) in &self.columns[x][j] {
                let t = if n == 1 { c.clone() } else { field.mul(c, &field.from_integer(n)) };
                out[i as usize] = field.add(&out[i as usize], &t);
            }
        }
        out
    }
}

/// A finite set of `p`-groups together with the `Hom` spaces between them.
pub struct GroupUniverse {
    field: Arc<Field>,
    groups: Vec<Arc<FiniteGroup>>,
    homs: Vec<OnceLock<Arc<HomSpace>>>,
}

impl GroupUniverse {
    /// Groups are sorted by order (stable); the trivial group must be present
    /// and every group must be a `p`-group for the fiber prime.
    pub fn new(field: &Arc<Field>, groups: Vec<Arc<FiniteGroup>>) -> Result<Arc<Self>, LatticeError> {
        let p = field.spec().p;
        let mut groups = groups;
        groups.sort_by_key(|g| g.order());
        groups.dedup_by_key(|g| g.id());
        if groups.first().map(|g| g.order()) != Some(1) {
            return Err(LatticeError::BadUniverse("the trivial group is missing".into()));
        }
        if let Some(g) = groups.iter().find(|g| g.order() > 1 && g.prime() != Some(p)) {
            return Err(LatticeError::BadUniverse(format!("{} is not a {p}-group", g.label())));
        }
        let n = groups.len();
        Ok(Arc::new(GroupUniverse { field: field.clone(), groups, homs: (0..n * n).map(|_| OnceLock::new()).collect() }))
    }

    /// Every catalogued `p`-group of order at most `max_order`.
    pub fn up_to_order(field: &Arc<Field>, max_order: u64) -> Result<Arc<Self>, LatticeError> {
        let groups = catalogue(field.spec().p, max_order)?.iter().map(preset_group).collect::<Result<Vec<_>, _>>()?;
        Self::new(field, groups)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn groups(&self) -> &[Arc<FiniteGroup>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn modulus(&self) -> u32 {
        self.field.fiber_order() as u32
    }

    pub fn position(&self, g: &FiniteGroup) -> Result<usize, LatticeError> {
        self.groups.iter().position(|x| x.id() == g.id()).ok_or_else(|| LatticeError::GroupNotInUniverse(g.label().into()))
    }

    /// `dim kB^A(G)`.
    pub fn dim(&self, gi: usize) -> usize {
        pair_space(&self.groups[gi], self.modulus()).dim()
    }

    /// The elementary abelian group of rank `r`, if present.
    pub fn elementary(&self, r: u32) -> Option<usize> {
        self.groups.iter().position(|g| g.elementary_rank() == Some(r))
    }

    /// `Hom(G,H)`: transitive `(H,G)`-bisets with their action matrices (cached).
    pub fn hom(&self, gi: usize, hi: usize) -> Arc<HomSpace> {
        self.homs[gi * self.len() + hi]
            .get_or_init(|| {
                let (g, h) = (&self.groups[gi], &self.groups[hi]);
                let m = self.modulus();
                let dp = direct_product(h, g);
                let pairs = pair_space(&dp.group, m).pairs().to_vec();
                let src = pair_space(g, m);
                let dst = pair_space(h, m);
                let columns = pairs
                    .par_iter()
                    .map(|x| {
                        src.pairs()
                            .iter()
                            .map(|u| {
                                let mut col: Vec<(u32, i64)> = Vec::new();
                                for w in act_pair(&dp, x, u, m) {
                                    let i = dst.index_of_canonical(&w).expect("image pair in basis");
                                    match col.iter_mut().find(|e| e.0 == i) {
                                        Some(e) => e.1 += 1,
                                        None => col.push((i, 1)),
                                    }
                                }
                                col
                            })
                            .collect()
                    })
                    .collect();
                Arc::new(HomSpace { pairs, columns })
            })
            .clone()
    }
}

/// A family of subspaces `F(G) ≤ kB^A(G)`, one per universe group, in pair
/// coordinates and reduced row echelon form.
#[derive(Clone)]
pub struct Subfunctor {
    universe: Arc<GroupUniverse>,
    spaces: Vec<Echelon>,
}

/// A morphism action leaving a subfunctor.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureFailure {
    pub source: String,
    pub target: String,
    pub biset: String,
}

impl Subfunctor {
    pub fn universe(&self) -> &Arc<GroupUniverse> {
        &self.universe
    }

    pub fn space(&self, gi: usize) -> &Echelon {
        &self.spaces[gi]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Echelon::rank).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.iter().all(|e| e.rank() == 0)
    }

    /// Whether `other(G) ≤ self(G)` for every group.
    pub fn contains(&self, other: &Subfunctor) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.contains_span(b))
    }

    pub fn same_as(&self, other: &Subfunctor) -> bool {
        self.dims() == other.dims() && self.contains(other)
    }

    /// Basis of `F(G)` as ring elements.
    pub fn basis(&self, gi: usize) -> Vec<RingElement> {
        let sp = pair_space(&self.universe.groups[gi], self.universe.modulus());
        self.spaces[gi].rows().iter().map(|r| sp.from_vector(r, &self.universe.field)).collect()
    }

    /// Checks `X·F(G) ⊆ F(H)` for every transitive `(H,G)`-biset `X`.
    pub fn verify_closure(&self) -> Result<(), ClosureFailure> {
        let u = &self.universe;
        let n = u.len();
        let jobs: Vec<(usize, usize)> = (0..n).flat_map(|g| (0..n).map(move |h| (g, h))).collect();
        let failures: Vec<ClosureFailure> = jobs
            .par_iter()
            .filter_map(|&(gi, hi)| {
                if self.spaces[gi].rank() == 0 || self.spaces[hi].is_full() {
                    return None;
                }
                let hom = u.hom(gi, hi);
                let dh = u.dim(hi);
                (0..hom.len()).find_map(|x| {
                    let leaves = self.spaces[gi]
                        .rows()
                        .iter()
                        .any(|v| !self.spaces[hi].contains(&hom.apply(&u.field, x, v, dh)));
                    leaves.then(|| ClosureFailure {
                        source: u.groups[gi].label().into(),
                        target: u.groups[hi].label().into(),
                        biset: format!("{:?}", hom.pairs[x]),
                    })
                })
            })
            .collect();
        failures.into_iter().next().map_or(Ok(()), Err)
    }
}

/// `kB^A` itself.
pub fn full_functor(universe: &Arc<GroupUniverse>) -> Subfunctor {
    let spaces = (0..universe.len())
        .map(|gi| {
            let d = universe.dim(gi);
            let mut e = Echelon::new(universe.field.clone(), d);
            for j in 0..d {
                let mut v = vec![universe.field.zero(); d];
                v[j] = universe.field.one();
                e.insert(&v);
            }
            e
        })
        .collect();
    Subfunctor { universe: universe.clone(), spaces }
}

/// `H ↦ span{X·v : X ∈ Hom(G,H), v ∈ gens}`.
pub fn generated_by(universe: &Arc<GroupUniverse>, gi: usize, gens: &[Vec<Scalar>]) -> Subfunctor {
    let k = &universe.field;
    let spaces = (0..universe.len())
        .into_par_iter()
        .map(|hi| {
            let dh = universe.dim(hi);
            let mut e = Echelon::new(k.clone(), dh);
            let hom = universe.hom(gi, hi);
            'outer: for x in 0..hom.len() {
                for v in gens {
                    if e.is_full() {
                        break 'outer;
                    }
                    e.insert(&hom.apply(k, x, v, dh));
                }
            }
            e
        })
        .collect();
    Subfunctor { universe: universe.clone(), spaces }
}

/// The subfunctor generated by `v ∈ kB^A(G)`.
pub fn generated_subfunctor(universe: &Arc<GroupUniverse>, g: &FiniteGroup, v: &RingElement) -> Result<Subfunctor, LatticeError> {
    let gi = universe.position(g)?;
    let vec = pair_space(&universe.groups[gi], universe.modulus()).to_vector(v);
    Ok(generated_by(universe, gi, &[vec]))
}

/// `K(G) = {v ∈ F(G) : X·v = 0 for all X ∈ Hom(G,H)}`.
pub fn kernel_subfunctor(f: &Subfunctor, h: &FiniteGroup) -> Result<Subfunctor, LatticeError> {
    let u = &f.universe;
    let hi = u.position(h)?;
    let k = &u.field;
    let spaces = (0..u.len())
        .into_par_iter()
        .map(|gi| {
            let basis = f.spaces[gi].rows();
            let r = basis.len();
            let mut out = Echelon::new(k.clone(), u.dim(gi));
            if r == 0 {
                return out;
            }
            // linear conditions on the coordinates c of v = Σ c_i b_i
            let mut conditions = Echelon::new(k.clone(), r);
            let hom = u.hom(gi, hi);
            let dh = u.dim(hi);
            for x in 0..hom.len() {
                if conditions.is_full() {
                    break;
                }
                let images: Vec<Vec<Scalar>> = basis.iter().map(|b| hom.apply(k, x, b, dh)).collect();
                for i in 0..dh {
                    let row: Vec<Scalar> = images.iter().map(|w| w[i].clone()).collect();
                    if row.iter().any(|c| !c.is_zero()) {
                        conditions.insert(&row);
                    }
                }
            }
            for c in nullspace_of_echelon(k, &conditions) {
                let mut v = vec![k.zero(); u.dim(gi)];
                for (ci, b) in c.iter().zip(basis) {
                    if ci.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = k.add(x, &k.mul(ci, y));
                    }
                }
                out.insert(&v);
            }
            out
        })
        .collect();
    Ok(Subfunctor { universe: u.clone(), spaces })
}
