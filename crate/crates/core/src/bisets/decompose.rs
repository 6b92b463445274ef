//! Factorization of transitive fibered bisets between abelian groups into
//! elementary bisets.

use std::sync::Arc;

use crate::fibring::MonomialPair;
use crate::groups::{characters, Character, DirectProduct, Elem};
use crate::scalars::Field;

use super::elementary::{def, ind, inf, iso, quotient_group, res, subgroup_group, tw};
use super::{Biset, BisetError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Ind,
    Tw,
    Inf,
    Iso,
    Def,
    Res,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub kind: FactorKind,
    pub biset: Biset,
}

/// `[(G×H)/(U,φ)] = Ind_P^G Tw_P^{φ̃₁} Inf_{P/K}^P c^η Def^Q_{Q/L} Tw_Q^{φ̃₂} Res^H_Q`
/// for abelian `G`, `H`. The extensions `(φ̃₁, φ̃₂)` are the first pair, in
/// the sorted character order of `P` and then `Q`, with
/// `φ̃₁(g) + φ̃₂(h) = φ(g,h)` on `U`.
pub fn decompose_abelian(dp: &Arc<DirectProduct>, pair: &MonomialPair, field: &Arc<Field>) -> Result<Vec<Factor>, BisetError> {
    let (g, h) = (&dp.left, &dp.right);
    for x in [g, h] {
        if !x.is_abelian() {
            return Err(BisetError::NotAbelian(x.label().into()));
        }
        if field.fiber_order() % x.exponent() != 0 {
            return Err(BisetError::NotSplitting(field.fiber_order(), x.label().into()));
        }
    }
    let m = field.fiber_order() as u32;
    let pi = g.subgroup_index(&dp.p1(pair.mask())).expect("projection is a subgroup");
    let qi = h.subgroup_index(&dp.p2(pair.mask())).expect("projection is a subgroup");
    let split: Vec<(Elem, Elem)> = pair.members().iter().map(|&z| dp.split(z)).collect();
    let chars_p = characters(g, pi, m as u64);
    let chars_q = characters(h, qi, m as u64);
    let (c1, c2) = chars_p
        .iter()
        .flat_map(|a| chars_q.iter().map(move |b| (a, b)))
        .find(|(a, b)| {
            split.iter().zip(pair.values()).all(|(&(x, y), &v)| (a.raw(x) + b.raw(y)) % m == v as u32)
        })
        .ok_or_else(|| BisetError::NotSplitting(m as u64, dp.group.label().into()))?;

    let sp = subgroup_group(g, pi);
    let sq = subgroup_group(h, qi);
    let pg = &sp.group;
    let qg = &sq.group;
    let pulled = |sub: &super::SubgroupGroup, mask: &crate::bitset::ElemSet| {
        let idx: Vec<Elem> = mask.iter().map(|x| sub.pull(x as Elem).unwrap()).collect();
        sub.group.generated_index(&idx)
    };
    let kq = quotient_group(pg, pulled(&sp, &dp.k1(pair.mask())))?;
    let lq = quotient_group(qg, pulled(&sq, &dp.k2(pair.mask())))?;
    let mut eta = vec![Elem::MAX; lq.quotient.order()];
    for &(x, y) in &split {
        let from = lq.projection[sq.pull(y).unwrap() as usize];
        eta[from as usize] = kq.projection[sp.pull(x).unwrap() as usize];
    }
    let port = |sub: &super::SubgroupGroup, c: &Character| {
        let vals: Vec<u16> = sub.embedding.iter().map(|&x| c.raw(x) as u16).collect();
        Character::from_values(&sub.group, sub.group.whole(), vals, m).expect("restricted character")
    };
    Ok(vec![
        Factor { kind: FactorKind::Ind, biset: ind(&sp, field) },
        Factor { kind: FactorKind::Tw, biset: tw(pg, &port(&sp, c1), field)? },
        Factor { kind: FactorKind::Inf, biset: inf(&kq, field) },
        Factor { kind: FactorKind::Iso, biset: iso(&lq.quotient, &kq.quotient, &eta, field)? },
        Factor { kind: FactorKind::Def, biset: def(&lq, field) },
        Factor { kind: FactorKind::Tw, biset: tw(qg, &port(&sq, c2), field)? },
        Factor { kind: FactorKind::Res, biset: res(&sq, field) },
    ])
}
