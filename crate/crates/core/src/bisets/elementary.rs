//! Elementary fibered bisets and the diagonal embedding `Δ`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::fibring::{MonomialPair, RingElement};
use crate::groups::{direct_product, Character, DirectProduct, Elem, FiniteGroup, QuotientData};
use crate::scalars::Field;

use super::{Biset, BisetError};

/// A subgroup `H ≤ G` as a group in its own right.
#[derive(Debug)]
pub struct SubgroupGroup {
    pub parent: Arc<FiniteGroup>,
    /// Lattice index of `H` in the parent.
    pub index: usize,
    pub group: Arc<FiniteGroup>,
    /// Element `i` of `group` ↦ element of the parent.
    pub embedding: Vec<Elem>,
}

impl SubgroupGroup {
    /// Element of `group` corresponding to a parent element of `H`.
    pub fn pull(&self, x: Elem) -> Option<Elem> {
        self.embedding.binary_search(&x).ok().map(|i| i as Elem)
    }
}

type SubCache = Mutex<HashMap<(usize, usize), Arc<SubgroupGroup>>>;
type QuoCache = Mutex<HashMap<(usize, usize), Arc<QuotientData>>>;

/// The (cached) subgroup with lattice index `s` of `g` as a group.
pub fn subgroup_group(g: &Arc<FiniteGroup>, s: usize) -> Arc<SubgroupGroup> {
    static CACHE: OnceLock<SubCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(x) = cache.lock().unwrap().get(&(g.id(), s)) {
        return x.clone();
    }
    let (group, embedding) = g.subgroup_as_group(s, &format!("{}<{}>", g.label(), s));
    let sg = Arc::new(SubgroupGroup { parent: g.clone(), index: s, group, embedding });
    cache.lock().unwrap().entry((g.id(), s)).or_insert(sg).clone()
}

/// The (cached) quotient of `g` by the normal subgroup with lattice index `n`.
pub fn quotient_group(g: &Arc<FiniteGroup>, n: usize) -> Result<Arc<QuotientData>, BisetError> {
    static CACHE: OnceLock<QuoCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(x) = cache.lock().unwrap().get(&(g.id(), n)) {
        return Ok(x.clone());
    }
    let q = Arc::new(g.quotient(n, &format!("{}/{}", g.label(), n))?);
    Ok(cache.lock().unwrap().entry((g.id(), n)).or_insert(q).clone())
}

fn graph_pair(dp: &DirectProduct, pts: impl Iterator<Item = (Elem, Elem)>, modulus: u32, value: impl Fn(Elem, Elem) -> u32) -> MonomialPair {
    let mut vals: HashMap<Elem, u32> = HashMap::new();
    for (a, b) in pts {
        vals.insert(dp.pair(a, b), value(a, b));
    }
    let members: Vec<Elem> = vals.keys().copied().collect();
    MonomialPair::new(&dp.group, &members, modulus, |z| vals[&z])
}

fn transitive_on(
    left: &Arc<FiniteGroup>,
    right: &Arc<FiniteGroup>,
    field: &Arc<Field>,
    pts: impl Iterator<Item = (Elem, Elem)>,
    value: impl Fn(Elem, Elem) -> u32,
) -> Biset {
    let dp = direct_product(left, right);
    let pair = graph_pair(&dp, pts, field.fiber_order() as u32, value);
    Biset::transitive(&dp, field, &pair)
}

/// `[(G×G)/(Δ(G),1)]`, the identity morphism.
pub fn identity(g: &Arc<FiniteGroup>, field: &Arc<Field>) -> Biset {
    transitive_on(g, g, field, (0..g.order() as Elem).map(|x| (x, x)), |_, _| 0)
}

/// `Ind_H^G`, a `(G,H)`-biset.
pub fn ind(sub: &SubgroupGroup, field: &Arc<Field>) -> Biset {
    let pts = sub.embedding.iter().enumerate().map(|(i, &x)| (x, i as Elem));
    transitive_on(&sub.parent, &sub.group, field, pts, |_, _| 0)
}

/// `Res^G_H`, an `(H,G)`-biset.
pub fn res(sub: &SubgroupGroup, field: &Arc<Field>) -> Biset {
    let pts = sub.embedding.iter().enumerate().map(|(i, &x)| (i as Elem, x));
    transitive_on(&sub.group, &sub.parent, field, pts, |_, _| 0)
}

/// `Inf_{G/N}^G`, a `(G, G/N)`-biset.
pub fn inf(q: &QuotientData, field: &Arc<Field>) -> Biset {
    let pts = (0..q.source.order() as Elem).map(|g| (g, q.projection[g as usize]));
    transitive_on(&q.source, &q.quotient, field, pts, |_, _| 0)
}

/// `Def^G_{G/N}`, a `(G/N, G)`-biset.
pub fn def(q: &QuotientData, field: &Arc<Field>) -> Biset {
    let pts = (0..q.source.order() as Elem).map(|g| (q.projection[g as usize], g));
    transitive_on(&q.quotient, &q.source, field, pts, |_, _| 0)
}

/// Transport of structure along an isomorphism `λ: G → G'`: the
/// `(G',G)`-biset with stabilizer `{(λ(g), g)}`, sending `e_{H,h}` to
/// `e_{λ(H),λ(h)}`.
pub fn iso(g: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, lambda: &[Elem], field: &Arc<Field>) -> Result<Biset, BisetError> {
    let n = g.order();
    let bijective = lambda.len() == n && target.order() == n && {
        let mut seen = vec![false; n];
        lambda.iter().all(|&y| (y as usize) < n && !std::mem::replace(&mut seen[y as usize], true))
    };
    let hom = bijective
        && (0..n as Elem).all(|a| {
            (0..n as Elem).all(|b| lambda[g.mul(a, b) as usize] == target.mul(lambda[a as usize], lambda[b as usize]))
        });
    if !hom {
        return Err(BisetError::Group(crate::groups::GroupError::NotAnIsomorphism));
    }
    let pts = (0..n as Elem).map(|x| (lambda[x as usize], x));
    Ok(transitive_on(target, g, field, pts, |_, _| 0))
}

/// `Tw_G^φ = [(G×G)/(Δ(G),Δ(φ))]` for `φ ∈ G*`.
pub fn tw(g: &Arc<FiniteGroup>, phi: &Character, field: &Arc<Field>) -> Result<Biset, BisetError> {
    if phi.subgroup() != g.whole() || phi.modulus() as u64 != field.fiber_order() {
        return Err(BisetError::BadData("twist needs a character of the whole group into the fiber".into()));
    }
    Ok(transitive_on(g, g, field, (0..g.order() as Elem).map(|x| (x, x)), |a, _| phi.raw(a)))
}

/// `Δ: kB^A(G) → kB^A(G×G)`, `[U,φ] ↦ [(G×G)/(Δ(U),Δ(φ))]`.
pub fn delta_embed(x: &RingElement) -> Biset {
    let g = x.group();
    let k = x.field();
    let dp = direct_product(g, g);
    let mut out = RingElement::zero(&dp.group, k);
    for (p, c) in x.terms() {
        let pts = p.members().iter().map(|&u| (u, u));
        let pair = graph_pair(&dp, pts, k.fiber_order() as u32, |a, _| p.value(a));
        out.add_term(pair.canonical(&dp.group), c.clone());
    }
    Biset::from_element(dp, out).expect("same product group")
}
