//! The quotient `Ē_G = E_G / I_G` for abelian `G` and its identification
//! with `k[G* ⋊ Aut(G)]`.

use std::sync::Arc;

use crate::fibring::{MonomialPair, RingElement};
use crate::groups::{characters, direct_product, Elem, FiniteGroup};
use crate::scalars::Field;

use super::{mackey_product, Biset, BisetError};

/// `[φ,λ]_G = Tw_G^φ ∘ c^λ`, the transitive `(G,G)`-biset with stabilizer
/// `{(λ(g), g)}` and character `(λ(g), g) ↦ φ(λ(g))`.
#[derive(Clone, Debug)]
pub struct EbarElement {
    /// `φ` as a value table over `G`.
    pub phi: Vec<u16>,
    /// `λ` as an image table.
    pub lambda: Vec<Elem>,
    pub pair: MonomialPair,
}

#[derive(Clone, Debug)]
pub struct EbarReport {
    pub dimension: usize,
    /// `|G*| · |Aut(G)|`.
    pub expected_dimension: usize,
    pub products_checked: usize,
    /// Products whose reduction differs from `(φ·(λ·φ'), λλ')` with `λ·φ' = φ'∘λ⁻¹`.
    pub mismatches: Vec<String>,
    /// Products whose reduction differs from the rule read with `λ·φ' = φ'∘λ`.
    pub composition_rule_mismatches: usize,
    /// `table[a][b]` = basis index of the reduced product `[a]·[b]`, if it is a single basis element.
    pub table: Vec<Vec<Option<usize>>>,
}

fn check_abelian(g: &FiniteGroup, field: &Field) -> Result<(), BisetError> {
    if !g.is_abelian() {
        return Err(BisetError::NotAbelian(g.label().into()));
    }
    if field.fiber_order() % g.exponent() != 0 {
        return Err(BisetError::NotSplitting(field.fiber_order(), g.label().into()));
    }
    Ok(())
}

fn ebar_pair(g: &Arc<FiniteGroup>, phi: &[u16], lambda: &[Elem], modulus: u32) -> MonomialPair {
    let dp = direct_product(g, g);
    let members: Vec<Elem> = (0..g.order() as Elem).map(|x| dp.pair(lambda[x as usize], x)).collect();
    MonomialPair::new(&dp.group, &members, modulus, |z| phi[dp.split(z).0 as usize] as u32)
}

/// The classes `[φ,λ]_G` for `φ ∈ G*`, `λ ∈ Aut(G)`: those transitive
/// `(G,G)`-bisets with `P = Q = G` and `K = L = 1`.
pub fn ebar_basis(g: &Arc<FiniteGroup>, field: &Arc<Field>) -> Result<Vec<EbarElement>, BisetError> {
    check_abelian(g, field)?;
    let m = field.fiber_order() as u32;
    let chars = characters(g, g.whole(), m as u64);
    let mut out = Vec::new();
    for lambda in g.automorphisms() {
        for chi in &chars {
            let phi = chi.dense().to_vec();
            let pair = ebar_pair(g, &phi, &lambda, m);
            out.push(EbarElement { phi, lambda: lambda.clone(), pair });
        }
    }
    Ok(out)
}

/// Terms of a `(G,G)`-biset surviving modulo `I_G`.
fn reduce(x: &Biset) -> RingElement {
    let dp = x.dp();
    let g = &dp.left;
    let mut out = RingElement::zero(&dp.group, x.field());
    for (p, c) in x.element().terms() {
        let full = dp.p1(p.mask()).len() == g.order() && dp.p2(p.mask()).len() == g.order();
        let faithful = dp.k1(p.mask()).len() == 1 && dp.k2(p.mask()).len() == 1;
        if full && faithful {
            out.add_term(p.clone(), c.clone());
        }
    }
    out
}

/// Multiplies every pair of basis elements of `Ē_G` through the Mackey
/// formula and compares the reduction with the semidirect product rule.
pub fn ebar_check(g: &Arc<FiniteGroup>, field: &Arc<Field>) -> Result<EbarReport, BisetError> {
    let basis = ebar_basis(g, field)?;
    let m = field.fiber_order() as u32;
    let n = g.order();
    let dp = direct_product(g, g);
    let bisets: Vec<Biset> = basis.iter().map(|b| Biset::transitive(&dp, field, &b.pair)).collect();
    let position = |p: &MonomialPair| basis.iter().position(|b| b.pair == *p);
    let mut mismatches = Vec::new();
    let mut composition_rule_mismatches = 0;
    let mut table = vec![vec![None; basis.len()]; basis.len()];
    for (i, a) in basis.iter().enumerate() {
        let mut inv = vec![0 as Elem; n];
        for x in 0..n as Elem {
            inv[a.lambda[x as usize] as usize] = x;
        }
        for (j, b) in basis.iter().enumerate() {
            let prod = reduce(&mackey_product(&bisets[i], &bisets[j])?);
            let lam: Vec<Elem> = (0..n).map(|x| a.lambda[b.lambda[x] as usize]).collect();
            let left: Vec<u16> = (0..n).map(|x| ((a.phi[x] as u32 + b.phi[inv[x] as usize] as u32) % m) as u16).collect();
            let right: Vec<u16> =
                (0..n).map(|x| ((a.phi[x] as u32 + b.phi[a.lambda[x] as usize] as u32) % m) as u16).collect();
            let want = RingElement::basis(&dp.group, field, &ebar_pair(g, &left, &lam, m));
            let alt = RingElement::basis(&dp.group, field, &ebar_pair(g, &right, &lam, m));
            if prod != want {
                mismatches.push(format!("[{i}]·[{j}] = {prod:?}, expected {want:?}"));
            }
            if prod != alt {
                composition_rule_mismatches += 1;
            }
            if prod.term_count() == 1 {
                let (p, c) = prod.terms().next().unwrap();
                if *c == field.one() {
                    table[i][j] = position(p);
                }
            }
        }
    }
    let expected_dimension = characters(g, g.whole(), m as u64).len() * g.automorphisms().len();
    Ok(EbarReport {
        dimension: basis.len(),
        expected_dimension,
        products_checked: basis.len() * basis.len(),
        mismatches,
        composition_rule_mismatches,
        table,
    })
}
