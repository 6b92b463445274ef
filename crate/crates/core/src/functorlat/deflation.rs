use std::sync::Arc;

use serde::Serialize;

use crate::bisets::{def_idem, quotient_group};
use crate::fibring::pair_space;
use crate::groups::{Elem, FiniteGroup};
use crate::scalars::{Field, Scalar};

use super::LatticeError;

/// The constant `m` in `Def^G_{G/N} e^G_{G,g} = m · e^{G/N}_{G/N,gN}`.
#[derive(Clone, Debug, Serialize)]
pub struct DeflationRow {
    /// Lattice index of `N`.
    pub normal: usize,
    pub normal_order: usize,
    #[serde(skip)]
    pub m: Scalar,
    pub m_text: String,
}

/// `m` for every normal subgroup `N`, extracted from the generic deflation.
pub fn deflation_constants(g: &Arc<FiniteGroup>, x: Elem, field: &Arc<Field>) -> Result<Vec<DeflationRow>, LatticeError> {
    let idx = pair_space(g, field.fiber_order() as u32).canonical_species(g.whole(), x);
    let mut out = Vec::new();
    for n in (0..g.subgroup_count()).filter(|&n| g.is_normal(n)) {
        let q = quotient_group(g, n)?;
        let (m, _, _) = def_idem(&q, &idx, field)?;
        out.push(DeflationRow { normal: n, normal_order: g.subgroup(n).order(), m_text: field.describe(&m), m });
    }
    Ok(out)
}

/// `(1−p^{r−1})/p` for `g = 1`, `1/p` for `1 ≠ g ∈ H`, `(1−p^{r−2})/p` for
/// `g ∉ H`, with `G` elementary abelian of rank `r` and `|H| = p`.
pub fn elementary_deflation_constant(field: &Field, r: u32, g_is_one: bool, g_in_h: bool) -> Option<Scalar> {
    let p = field.spec().p as i64;
    let num = match (g_is_one, g_in_h) {
        (true, _) => 1 - p.pow(r.checked_sub(1)?),
        (false, true) => 1,
        (false, false) => 1 - p.pow(r.checked_sub(2)?),
    };
    field.from_rational(num, p).ok()
}

/// `|O(G)| / |N_G(G,g)| · |G/Φ(G)|`.
pub fn frattini_constant(g: &Arc<FiniteGroup>, x: Elem, field: &Arc<Field>) -> Scalar {
    let sp = pair_space(g, field.fiber_order() as u32);
    let idx = sp.canonical_species(g.whole(), x);
    let stab = sp.species_stabilizer_order(sp.species_position(&idx).expect("canonical species") as usize);
    let o = sp.omega_members(g.whole()).len() as i64;
    let bar = (g.order() / g.subgroup(g.frattini()).order()) as i64;
    field.from_rational(o * bar, stab as i64).expect("p-power denominator")
}
