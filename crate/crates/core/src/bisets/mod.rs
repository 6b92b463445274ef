//! Fibered bisets: Goursat invariants, the star product, the Mackey product
//! formula and the action of bisets on fibered Burnside rings.

mod decompose;
mod ebar;
mod elementary;
mod idempotents;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::fibring::{FibError, MonomialPair, RingElement};
use crate::groups::{direct_product, DirectProduct, Elem, FiniteGroup, GroupError};
use crate::scalars::Field;

pub use decompose::{decompose_abelian, Factor, FactorKind};
pub use ebar::{ebar_basis, ebar_check, EbarElement, EbarReport};
pub use elementary::{
    def, delta_embed, identity, ind, inf, iso, quotient_group, res, subgroup_group, tw, SubgroupGroup,
};
pub use idempotents::{def_idem, ind_idem, inf_idem, iso_idem, res_idem, tw_idem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BisetError {
    #[error("groups do not match: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("star product character is not well defined at {0}")]
    IllDefinedCharacter(String),
    #[error("bad data: {0}")]
    BadData(String),
    #[error("group {0} is not abelian")]
    NotAbelian(String),
    #[error("fiber of order {0} is not splitting for {1}")]
    NotSplitting(u64, String),
    #[error(transparent)]
    Fib(#[from] FibError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A `k`-combination of transitive fibered `(G,H)`-bisets, stored as an
/// element of `kB^A(G×H)`.
#[derive(Clone)]
pub struct Biset {
    dp: Arc<DirectProduct>,
    elem: RingElement,
}

impl PartialEq for Biset {
    fn eq(&self, other: &Self) -> bool {
        self.elem == other.elem
    }
}

impl Eq for Biset {}

impl fmt::Debug for Biset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}): {:?}", self.dp.left.label(), self.dp.right.label(), self.elem)
    }
}

impl Biset {
    pub fn zero(left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>, field: &Arc<Field>) -> Self {
        let dp = direct_product(left, right);
        let elem = RingElement::zero(&dp.group, field);
        Biset { dp, elem }
    }

    /// Wraps an element of `kB^A(G×H)`.
    pub fn from_element(dp: Arc<DirectProduct>, elem: RingElement) -> Result<Self, BisetError> {
        if elem.group().id() != dp.group.id() {
            return Err(BisetError::GroupMismatch(elem.group().label().into(), dp.group.label().into()));
        }
        Ok(Biset { dp, elem })
    }

    /// `[(G×H)/(U,φ)]`.
    pub fn transitive(dp: &Arc<DirectProduct>, field: &Arc<Field>, pair: &MonomialPair) -> Self {
        Biset { dp: dp.clone(), elem: RingElement::basis(&dp.group, field, pair) }
    }

    pub fn dp(&self) -> &Arc<DirectProduct> {
        &self.dp
    }

    pub fn left(&self) -> &Arc<FiniteGroup> {
        &self.dp.left
    }

    pub fn right(&self) -> &Arc<FiniteGroup> {
        &self.dp.right
    }

    pub fn element(&self) -> &RingElement {
        &self.elem
    }

    pub fn field(&self) -> &Arc<Field> {
        self.elem.field()
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    pub fn add(&self, other: &Biset) -> Result<Biset, BisetError> {
        Ok(Biset { dp: self.dp.clone(), elem: self.elem.add(&other.elem)? })
    }

    pub fn sub(&self, other: &Biset) -> Result<Biset, BisetError> {
        Ok(Biset { dp: self.dp.clone(), elem: self.elem.sub(&other.elem)? })
    }

    pub fn scale(&self, c: &crate::scalars::Scalar) -> Biset {
        Biset { dp: self.dp.clone(), elem: self.elem.scale(c) }
    }

    /// `self ∘ other = self ⊗_{AH} other` for `self` a `(G,H)`- and `other`
    /// an `(H,K)`-biset.
    pub fn compose(&self, other: &Biset) -> Result<Biset, BisetError> {
        mackey_product(self, other)
    }

    /// The action `kB^A(H) → kB^A(G)` of this `(G,H)`-biset.
    pub fn act(&self, v: &RingElement) -> Result<RingElement, BisetError> {
        act(self, v)
    }
}

/// Goursat invariants `(P, K, η, L, Q)` of `U ≤ G×H`, with `φ|_{K×L} = φ₁ × φ₂⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoursatData {
    pub p: ElemSet,
    pub k: ElemSet,
    pub q: ElemSet,
    pub l: ElemSet,
    /// `η(hL) = gK`, keyed and valued by least coset elements.
    pub eta: Vec<(Elem, Elem)>,
    /// `φ₁(x) = φ(x,1)` on `K`, as `(x, value)`.
    pub phi1: Vec<(Elem, u32)>,
    /// `φ₂(y) = φ(1,y)⁻¹` on `L`, as `(y, value)`.
    pub phi2: Vec<(Elem, u32)>,
}

fn least_in_coset(group: &FiniteGroup, x: Elem, sub: &[Elem]) -> Elem {
    sub.iter().map(|&s| group.mul(x, s)).min().unwrap()
}

/// Goursat invariants of a transitive biset.
pub fn goursat(dp: &DirectProduct, pair: &MonomialPair, modulus: u32) -> GoursatData {
    let (g, h) = (&dp.left, &dp.right);
    let p = dp.p1(pair.mask());
    let k = dp.k1(pair.mask());
    let q = dp.p2(pair.mask());
    let l = dp.k2(pair.mask());
    let kv = k.to_vec();
    let lv = l.to_vec();
    let mut eta: Vec<(Elem, Elem)> = pair
        .members()
        .iter()
        .map(|&x| {
            let (a, b) = dp.split(x);
            (least_in_coset(h, b, &lv), least_in_coset(g, a, &kv))
        })
        .collect();
    eta.sort_unstable();
    eta.dedup();
    let phi1 = kv.iter().map(|&x| (x, pair.value(dp.pair(x, 0)))).collect();
    let phi2 = lv.iter().map(|&y| (y, (modulus - pair.value(dp.pair(0, y))) % modulus)).collect();
    GoursatData { p, k, q, l, eta, phi1, phi2 }
}

impl GoursatData {
    /// `U = {(g,h) ∈ P×Q : η(hL) = gK}`.
    pub fn reconstruct(&self, dp: &DirectProduct) -> ElemSet {
        let (g, h) = (&dp.left, &dp.right);
        let kv = self.k.to_vec();
        let lv = self.l.to_vec();
        let eta: HashMap<Elem, Elem> = self.eta.iter().copied().collect();
        let mut out = ElemSet::empty(dp.group.order());
        for a in self.p.iter() {
            let ak = least_in_coset(g, a as Elem, &kv);
            for b in self.q.iter() {
                if eta.get(&least_in_coset(h, b as Elem, &lv)) == Some(&ak) {
                    out.insert(dp.pair(a as Elem, b as Elem) as usize);
                }
            }
        }
        out
    }
}

/// `(U∗V, φ∗ψ)` for `U ≤ G×H` and `V ≤ H×K`, as a pair over `G×K`.
pub fn star_compose(
    dp1: &DirectProduct,
    u: &MonomialPair,
    dp2: &DirectProduct,
    v: &MonomialPair,
    dp3: &DirectProduct,
    modulus: u32,
) -> Result<MonomialPair, BisetError> {
    let mut by_mid: HashMap<Elem, Vec<(Elem, u32)>> = HashMap::new();
    for (&x, &a) in u.members().iter().zip(u.values()) {
        let (g, h) = dp1.split(x);
        by_mid.entry(h).or_default().push((g, a as u32));
    }
    let mut vals: Vec<Option<u32>> = vec![None; dp3.group.order()];
    for (&y, &b) in v.members().iter().zip(v.values()) {
        let (h, k) = dp2.split(y);
        let Some(list) = by_mid.get(&h) else { continue };
        for &(g, a) in list {
            let z = dp3.pair(g, k) as usize;
            let c = (a + b as u32) % modulus;
            match vals[z] {
                None => vals[z] = Some(c),
                Some(d) if d != c => {
                    return Err(BisetError::IllDefinedCharacter(format!("({g},{k})")));
                }
                _ => {}
            }
        }
    }
    let members: Vec<Elem> = (0..vals.len() as Elem).filter(|&z| vals[z as usize].is_some()).collect();
    Ok(MonomialPair::new(&dp3.group, &members, modulus, |z| vals[z as usize].unwrap()))
}

/// The Mackey product formula for transitive bisets: canonical pairs over
/// `G×K`, each with multiplicity one per admissible double coset.
pub fn mackey_pair(
    dp1: &DirectProduct,
    u: &MonomialPair,
    dp2: &DirectProduct,
    v: &MonomialPair,
    dp3: &DirectProduct,
    modulus: u32,
) -> Vec<MonomialPair> {
    let h = &dp1.right;
    let p2u = dp1.p2(u.mask());
    let k2u = dp1.k2(u.mask());
    let p1v = dp2.p1(v.mask());
    let mut out = Vec::new();
    for x in h.double_cosets(&p2u, &p1v) {
        let vx = v.conjugate(&dp2.group, dp2.pair(x, 0));
        let ok = k2u.iter().all(|y| {
            let y = y as Elem;
            let z = dp2.pair(y, 0);
            !vx.contains(z) || (u.value(dp1.pair(0, y)) + vx.value(z)) % modulus == 0
        });
        if !ok {
            continue;
        }
        let w = star_compose(dp1, u, dp2, &vx, dp3, modulus).expect("admissible double coset");
        out.push(w.canonical(&dp3.group));
    }
    out
}

/// `X ⊗_{AH} Y` for a `(G,H)`-biset `X` and an `(H,K)`-biset `Y`.
pub fn mackey_product(x: &Biset, y: &Biset) -> Result<Biset, BisetError> {
    if x.right().id() != y.left().id() {
        return Err(BisetError::GroupMismatch(x.right().label().into(), y.left().label().into()));
    }
    let k = x.field();
    let m = k.fiber_order() as u32;
    let dp3 = direct_product(x.left(), y.right());
    let mut out = RingElement::zero(&dp3.group, k);
    for (u, a) in x.elem.terms() {
        for (v, b) in y.elem.terms() {
            let ab = k.mul(a, b);
            for w in mackey_pair(&x.dp, u, &y.dp, v, &dp3, m) {
                out.add_term(w, ab.clone());
            }
        }
    }
    Ok(Biset { dp: dp3, elem: out })
}

/// The action of a transitive `(H,G)`-biset `[V,ψ]` on `[U,φ]_G`: canonical
/// pairs `[V∗ˣU, ψ∗ˣφ]_H` over the admissible `x ∈ p₂(V)\G/U`.
pub fn act_pair(dp: &DirectProduct, v: &MonomialPair, u: &MonomialPair, modulus: u32) -> Vec<MonomialPair> {
    let (hgrp, g) = (&dp.left, &dp.right);
    let p2v = dp.p2(v.mask());
    let k2v = dp.k2(v.mask());
    let mut out = Vec::new();
    for x in g.double_cosets(&p2v, u.mask()) {
        let xu = u.conjugate(g, x);
        let ok = k2v
            .iter()
            .all(|y| !xu.contains(y as Elem) || (v.value(dp.pair(0, y as Elem)) + xu.value(y as Elem)) % modulus == 0);
        if !ok {
            continue;
        }
        let mut vals: Vec<Option<u32>> = vec![None; hgrp.order()];
        for (&z, &b) in v.members().iter().zip(v.values()) {
            let (hh, gg) = dp.split(z);
            if !xu.contains(gg) {
                continue;
            }
            let c = (b as u32 + xu.value(gg)) % modulus;
            debug_assert!(vals[hh as usize].is_none_or(|d| d == c));
            vals[hh as usize] = Some(c);
        }
        let members: Vec<Elem> = (0..vals.len() as Elem).filter(|&z| vals[z as usize].is_some()).collect();
        out.push(MonomialPair::new(hgrp, &members, modulus, |z| vals[z as usize].unwrap()).canonical(hgrp));
    }
    out
}

/// `X · v` for an `(H,G)`-biset `X` and `v ∈ kB^A(G)`.
pub fn act(x: &Biset, v: &RingElement) -> Result<RingElement, BisetError> {
    if x.right().id() != v.group().id() {
        return Err(BisetError::GroupMismatch(x.right().label().into(), v.group().label().into()));
    }
    let k = x.field();
    let m = k.fiber_order() as u32;
    let mut out = RingElement::zero(x.left(), k);
    for (vp, a) in x.elem.terms() {
        for (up, b) in v.terms() {
            let ab = k.mul(a, b);
            for w in act_pair(&x.dp, vp, up, m) {
                out.add_term(w, ab.clone());
            }
        }
    }
    Ok(out)
}
