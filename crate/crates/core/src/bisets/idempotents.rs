//! Closed-form images of primitive idempotents under elementary bisets.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bitset::ElemSet;
use crate::fibring::{pair_space, RingElement, SpeciesIndex};
use crate::groups::{Character, Elem, FiniteGroup, QuotientData};
use crate::scalars::{Field, Scalar};

use super::elementary::{def, SubgroupGroup};
use super::BisetError;

fn modulus(field: &Field) -> u32 {
    field.fiber_order() as u32
}

fn idem(g: &Arc<FiniteGroup>, idx: &SpeciesIndex, field: &Arc<Field>) -> RingElement {
    pair_space(g, modulus(field)).idempotent_of(idx, field)
}

fn stabilizer(g: &Arc<FiniteGroup>, idx: &SpeciesIndex, field: &Field) -> u64 {
    let sp = pair_space(g, modulus(field));
    sp.species_stabilizer_order(sp.species_position(idx).expect("canonical species class") as usize)
}

fn species_from(g: &Arc<FiniteGroup>, members: &[Elem], h: Elem, field: &Field) -> SpeciesIndex {
    let mask = ElemSet::from_indices(g.order(), members.iter().map(|&x| x as usize));
    let s = g.subgroup_index(&mask).expect("species subgroup");
    pair_space(g, modulus(field)).canonical_species(s, h)
}

/// `Tw_G^φ e_{H,h} = ζ^{φ(h)} e_{H,h}`.
pub fn tw_idem(g: &Arc<FiniteGroup>, phi: &Character, idx: &SpeciesIndex, field: &Arc<Field>) -> RingElement {
    idem(g, idx, field).scale(field.zeta_power(phi.raw(idx.element()) as i64))
}

/// `Ind_K^G e^K_{H,h} = |N_G(H,h) : N_K(H,h)| e^G_{H,h}`.
pub fn ind_idem(sub: &SubgroupGroup, idx: &SpeciesIndex, field: &Arc<Field>) -> RingElement {
    let members: Vec<Elem> = idx.members().iter().map(|&x| sub.embedding[x as usize]).collect();
    let up = species_from(&sub.parent, &members, sub.embedding[idx.element() as usize], field);
    let ratio = stabilizer(&sub.parent, &up, field) / stabilizer(&sub.group, idx, field);
    idem(&sub.parent, &up, field).scale(&field.from_integer(ratio as i64))
}

/// `Res^G_K e^G_{H,h} = Σ e^K_{J,j}` over `K`-classes of `G`-conjugates of
/// `(H,h)` inside `K`.
pub fn res_idem(sub: &SubgroupGroup, idx: &SpeciesIndex, field: &Arc<Field>) -> RingElement {
    let g = &sub.parent;
    let mut classes = BTreeSet::new();
    for t in 0..g.order() as Elem {
        let conj: Option<Vec<Elem>> = idx.members().iter().map(|&x| sub.pull(g.conj(t, x))).collect();
        if let Some(mem) = conj {
            let h = sub.pull(g.conj(t, idx.element())).unwrap();
            classes.insert(species_from(&sub.group, &mem, h, field));
        }
    }
    let mut out = RingElement::zero(&sub.group, field);
    for c in &classes {
        out = out.add(&idem(&sub.group, c, field)).unwrap();
    }
    out
}

/// `Inf_{G/N}^G e^{G/N}_{H/N,hN} = Σ e^G_{K,k}` over classes with
/// `(KN/N, kN)` conjugate to `(H/N, hN)` in `G/N`.
pub fn inf_idem(q: &QuotientData, idx: &SpeciesIndex, field: &Arc<Field>) -> RingElement {
    let g = &q.source;
    let sp = pair_space(g, modulus(field));
    let spq = pair_space(&q.quotient, modulus(field));
    let mut out = RingElement::zero(g, field);
    for (i, c) in sp.species_set().iter().enumerate() {
        let img = q.image_subgroup(c.subgroup_index(g));
        if spq.canonical_species(img, q.projection[c.element() as usize]) == *idx {
            out = out.add(&sp.idempotent_unchecked(i, field)).unwrap();
        }
    }
    out
}

/// `c^λ e_{H,h} = e_{λ(H),λ(h)}`.
pub fn iso_idem(target: &Arc<FiniteGroup>, lambda: &[Elem], idx: &SpeciesIndex, field: &Arc<Field>) -> RingElement {
    let members: Vec<Elem> = idx.members().iter().map(|&x| lambda[x as usize]).collect();
    let img = species_from(target, &members, lambda[idx.element() as usize], field);
    idem(target, &img, field)
}

/// `Def^G_{G/N} e^G_{H,h} = m · e^{G/N}_{HN/N,hN}`: returns the constant `m`,
/// the target class and the generically computed image.
pub fn def_idem(q: &QuotientData, idx: &SpeciesIndex, field: &Arc<Field>) -> Result<(Scalar, SpeciesIndex, RingElement), BisetError> {
    let g = &q.source;
    let image = def(q, field).act(&idem(g, idx, field))?;
    let spq = pair_space(&q.quotient, modulus(field));
    let target = spq.canonical_species(q.image_subgroup(idx.subgroup_index(g)), q.projection[idx.element() as usize]);
    let pos = spq.species_position(&target).expect("canonical species class") as usize;
    let m = spq.species_value_at(pos, &image);
    Ok((m, target, image))
}
