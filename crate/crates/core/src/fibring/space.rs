//! Per-group tables: the pair basis `𝓜_G(A)/G`, the species set
//! `𝓔_G(A)/G`, the species matrix and Barker's idempotents.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::groups::{characters, omega, preset_group, Elem, FiniteGroup, Preset};
use crate::scalars::{make_field, Field, Scalar};

use super::{species_counts, FibError, MonomialPair, RingElement, SpeciesIndex};

/// Sign of the character exponent in the kernel term of the monomial Möbius
/// function: the idempotent formula uses `ζ^{CHARACTER_SIGN · ν'(v)}`.
/// This is the convention for which species duality holds; see
/// [`select_character_sign`].
pub const CHARACTER_SIGN: i64 = -1;

/// `e = (1/denominator) · Σ (Σ_t counts[t] ζ^t) · [pair]`, with pairs given
/// by their basis index. Field independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentFormula {
    pub denominator: u64,
    pub terms: Vec<(u32, Vec<i64>)>,
}

struct SpeciesTable {
    classes: Vec<SpeciesIndex>,
    index: HashMap<SpeciesIndex, u32>,
    stabilizer: Vec<u64>,
    rows: Vec<OnceLock<Vec<Vec<i64>>>>,
    idempotents: Vec<OnceLock<IdempotentFormula>>,
}

/// Canonical bases attached to a group and a fiber `μ_m`.
pub struct PairSpace {
    group: Arc<FiniteGroup>,
    modulus: u32,
    pairs: Vec<MonomialPair>,
    pair_index: HashMap<MonomialPair, u32>,
    omegas: Vec<OnceLock<Vec<Elem>>>,
    species: OnceLock<SpeciesTable>,
}

fn registry() -> &'static Mutex<HashMap<(usize, u32), Arc<PairSpace>>> {
    static REG: OnceLock<Mutex<HashMap<(usize, u32), Arc<PairSpace>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The (cached) pair space of `group` for the fiber `μ_modulus`.
pub fn pair_space(group: &Arc<FiniteGroup>, modulus: u32) -> Arc<PairSpace> {
    let key = (group.id(), modulus);
    if let Some(s) = registry().lock().unwrap().get(&key) {
        return s.clone();
    }
    let space = Arc::new(PairSpace::build(group.clone(), modulus));
    registry().lock().unwrap().entry(key).or_insert(space).clone()
}

impl PairSpace {
    fn build(group: Arc<FiniteGroup>, modulus: u32) -> PairSpace {
        let mut set = BTreeSet::new();
        for s in 0..group.subgroup_count() {
            if group.subgroup_class_rep(s).0 != s {
                continue;
            }
            for chi in characters(&group, s, modulus as u64) {
                set.insert(MonomialPair::from_character(&group, &chi).canonical(&group));
            }
        }
        let pairs: Vec<MonomialPair> = set.into_iter().collect();
        let pair_index = pairs.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let omegas = (0..group.subgroup_count()).map(|_| OnceLock::new()).collect();
        PairSpace { group, modulus, pairs, pair_index, omegas, species: OnceLock::new() }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Canonical representatives of `𝓜_G(A)/G`, in increasing order.
    pub fn pairs(&self) -> &[MonomialPair] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// Basis index of a pair (canonicalized first).
    pub fn index_of(&self, pair: &MonomialPair) -> Option<u32> {
        self.pair_index.get(&pair.canonical(&self.group)).copied()
    }

    /// Basis index of a pair already in canonical form.
    pub fn index_of_canonical(&self, pair: &MonomialPair) -> Option<u32> {
        self.pair_index.get(pair).copied()
    }

    /// Members of `O(S)` for the subgroup with lattice index `s`.
    pub fn omega_members(&self, s: usize) -> &[Elem] {
        self.omegas[s].get_or_init(|| {
            let o = omega(&self.group, s, self.modulus as u64);
            self.group.subgroup(o).members().to_vec()
        })
    }

    fn species(&self) -> &SpeciesTable {
        self.species.get_or_init(|| {
            let g = &self.group;
            let mut set = BTreeSet::new();
            for s in 0..g.subgroup_count() {
                if g.subgroup_class_rep(s).0 != s {
                    continue;
                }
                let o = self.omega_members(s).to_vec();
                for &h in g.subgroup(s).members() {
                    set.insert(SpeciesIndex::new(g, g.subgroup(s).members(), h, &o).canonical(g, &o));
                }
            }
            let classes: Vec<SpeciesIndex> = set.into_iter().collect();
            let index = classes.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
            let stabilizer = classes
                .iter()
                .map(|c| {
                    let s = c.subgroup_index(g);
                    let omask = g.subgroup(omega(g, s, self.modulus as u64)).mask().clone();
                    g.normalizer_of_pair(s, c.element(), &omask).len() as u64
                })
                .collect();
            let n = classes.len();
            SpeciesTable {
                classes,
                index,
                stabilizer,
                rows: (0..n).map(|_| OnceLock::new()).collect(),
                idempotents: (0..n).map(|_| OnceLock::new()).collect(),
            }
        })
    }

    /// Canonical representatives of `𝓔_G(A)/G`, in increasing order.
    pub fn species_set(&self) -> &[SpeciesIndex] {
        &self.species().classes
    }

    /// Canonical class of `(H, h)` for the subgroup `H` given by lattice index.
    pub fn canonical_species(&self, h_sub: usize, h: Elem) -> SpeciesIndex {
        let o = self.omega_members(h_sub);
        SpeciesIndex::new(&self.group, self.group.subgroup(h_sub).members(), h, o).canonical(&self.group, o)
    }

    pub fn species_position(&self, idx: &SpeciesIndex) -> Option<u32> {
        self.species().index.get(idx).copied()
    }

    /// `|N_G(H,h)|` for the species class at position `i`.
    pub fn species_stabilizer_order(&self, i: usize) -> u64 {
        self.species().stabilizer[i]
    }

    /// Row `i` of the species matrix: `ζ`-multiplicities of `s_i([V,ν])` for
    /// every basis pair.
    pub fn species_row(&self, i: usize) -> &[Vec<i64>] {
        let t = self.species();
        t.rows[i].get_or_init(|| {
            self.pairs.iter().map(|v| species_counts(&self.group, self.modulus, &t.classes[i], v)).collect()
        })
    }

    /// The species matrix over `k`: rows are species classes, columns pairs.
    pub fn species_matrix(&self, field: &Field) -> Vec<Vec<Scalar>> {
        (0..self.species_set().len())
            .map(|i| self.species_row(i).iter().map(|c| field.zeta_sum(c)).collect())
            .collect()
    }

    /// Barker's formula for the species class at position `i`, with the
    /// given sign on character values in the kernel term.
    pub fn idempotent_formula_with_sign(&self, i: usize, sign: i64) -> IdempotentFormula {
        let g = &self.group;
        let m = self.modulus as i64;
        let sp = &self.species().classes[i];
        let hs = sp.subgroup_index(g);
        let o = self.omega_members(hs);
        let coset: Vec<Elem> = o.iter().map(|&x| g.mul(sp.element(), x)).collect();
        let mu = g.moebius_row(hs);
        let mut acc: HashMap<u32, Vec<i64>> = HashMap::new();
        for (v, &mv) in mu.iter().enumerate() {
            if mv == 0 {
                continue;
            }
            let vsub = g.subgroup(v);
            let inter: Vec<Elem> = coset.iter().copied().filter(|&x| vsub.contains(x)).collect();
            for chi in characters(g, v, self.modulus as u64) {
                let mut counts = vec![0i64; self.modulus as usize];
                for &x in &inter {
                    counts[(sign * chi.raw(x) as i64).rem_euclid(m) as usize] += mv;
                }
                if counts.iter().all(|&c| c == 0) {
                    continue;
                }
                let j = self.index_of(&MonomialPair::from_character(g, &chi)).expect("pair in basis");
                let slot = acc.entry(j).or_insert_with(|| vec![0; self.modulus as usize]);
                for (a, b) in slot.iter_mut().zip(&counts) {
                    *a += b;
                }
            }
        }
        let mut terms: Vec<(u32, Vec<i64>)> = acc.into_iter().filter(|(_, c)| c.iter().any(|&x| x != 0)).collect();
        terms.sort_unstable_by_key(|t| t.0);
        IdempotentFormula { denominator: self.species_stabilizer_order(i), terms }
    }

    /// Barker's formula in the frozen convention.
    pub fn idempotent_formula(&self, i: usize) -> &IdempotentFormula {
        self.species().idempotents[i].get_or_init(|| self.idempotent_formula_with_sign(i, CHARACTER_SIGN))
    }

    /// Evaluates a formula over `k`.
    pub fn formula_element(&self, f: &IdempotentFormula, field: &Arc<Field>) -> RingElement {
        let inv = field.inv(&field.from_integer(f.denominator as i64)).expect("p-power denominators are invertible");
        let mut x = RingElement::zero(&self.group, field);
        for (j, counts) in &f.terms {
            let c = field.mul(&field.zeta_sum(counts), &inv);
            x.add_term(self.pairs[*j as usize].clone(), c);
        }
        x
    }

    /// `s_i(x)` through the cached species row.
    pub fn species_value_at(&self, i: usize, x: &RingElement) -> Scalar {
        let k = x.field();
        let row = self.species_row(i);
        let mut acc = k.zero();
        for (p, c) in x.terms() {
            let j = self.index_of_canonical(p).expect("term in basis") as usize;
            if row[j].iter().any(|&t| t != 0) {
                acc = k.add(&acc, &k.mul(c, &k.zeta_sum(&row[j])));
            }
        }
        acc
    }

    fn check_dual(&self, i: usize, e: &RingElement) -> Result<(), FibError> {
        let k = e.field();
        for j in 0..self.species_set().len() {
            let want = if i == j { k.one() } else { k.zero() };
            let got = self.species_value_at(j, e);
            if got != want {
                return Err(FibError::DualityFailure(format!(
                    "s_{:?}(e_{:?}) = {} over {}",
                    self.species_set()[j],
                    self.species_set()[i],
                    got,
                    self.group.label()
                )));
            }
        }
        Ok(())
    }

    /// `e_{H,h}` for the species class at position `i`, checked against
    /// species duality.
    pub fn primitive_idempotent(&self, i: usize, field: &Arc<Field>) -> Result<RingElement, FibError> {
        let e = self.formula_element(self.idempotent_formula(i), field);
        self.check_dual(i, &e)?;
        Ok(e)
    }

    /// `e_{H,h}` without the duality check.
    pub fn idempotent_unchecked(&self, i: usize, field: &Arc<Field>) -> RingElement {
        self.formula_element(self.idempotent_formula(i), field)
    }

    pub fn idempotent_of(&self, idx: &SpeciesIndex, field: &Arc<Field>) -> RingElement {
        let i = self.species_position(idx).expect("canonical species class") as usize;
        self.idempotent_unchecked(i, field)
    }

    /// All species values of `x`, in species order.
    pub fn coordinates(&self, x: &RingElement) -> Vec<Scalar> {
        (0..self.species_set().len()).map(|i| self.species_value_at(i, x)).collect()
    }

    /// `Σ cᵢ eᵢ`.
    pub fn from_coordinates(&self, coords: &[Scalar], field: &Arc<Field>) -> RingElement {
        let mut x = RingElement::zero(&self.group, field);
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.idempotent_unchecked(i, field);
            x = x.add(&e.scale(c)).unwrap();
        }
        x
    }

    /// Basis element `[pairs[j]]`.
    pub fn basis_element(&self, j: usize, field: &Arc<Field>) -> RingElement {
        let mut x = RingElement::zero(&self.group, field);
        x.add_term(self.pairs[j].clone(), field.one());
        x
    }

    /// Coefficient vector of `x` in the pair basis.
    pub fn to_vector(&self, x: &RingElement) -> Vec<Scalar> {
        let k = x.field();
        let mut v = vec![k.zero(); self.dim()];
        for (p, c) in x.terms() {
            v[self.index_of_canonical(p).expect("term in basis") as usize] = c.clone();
        }
        v
    }

    pub fn from_vector(&self, v: &[Scalar], field: &Arc<Field>) -> RingElement {
        let mut x = RingElement::zero(&self.group, field);
        for (j, c) in v.iter().enumerate() {
            x.add_term(self.pairs[j].clone(), c.clone());
        }
        x
    }
}

fn duality_holds(space: &PairSpace, field: &Arc<Field>, sign: i64) -> bool {
    (0..space.species_set().len()).all(|i| {
        let e = space.formula_element(&space.idempotent_formula_with_sign(i, sign), field);
        space.check_dual(i, &e).is_ok()
    })
}

/// Determines the sign convention of the kernel term operationally: the
/// unique sign for which species duality holds on `C₃` and `C₄` with fibers
/// `μ₃` and `μ₄`, where the two conventions differ.
pub fn select_character_sign() -> Option<i64> {
    let witnesses = [(3u64, 1u32, Preset::Cyclic { p: 3, k: 1 }), (2, 2, Preset::Cyclic { p: 2, k: 2 })];
    let mut chosen = None;
    for sign in [-1i64, 1] {
        let ok = witnesses.iter().all(|(p, n, preset)| {
            let g = preset_group(preset).unwrap();
            let k = make_field(*p, *n, 0).unwrap();
            duality_holds(&pair_space(&g, k.fiber_order() as u32), &k, sign)
        });
        if ok {
            if chosen.is_some() {
                return None;
            }
            chosen = Some(sign);
        }
    }
    chosen
}
