//! Monomial pairs `(U,φ)`, species pairs `(H,h)`, and their canonical
//! conjugacy-class representatives.

use std::fmt;

use crate::bitset::ElemSet;
use crate::groups::{Character, Elem, FiniteGroup};

/// A pair `(U, φ)` with `U ≤ G` and `φ: U → ℤ/pⁿ`, stored by the sorted
/// members of `U` and the values of `φ` on them.
///
/// Ordering is by `(|U|, members, values)`; the canonical representative of
/// a `G`-class is its least conjugate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialPair {
    order: u32,
    members: Box<[Elem]>,
    values: Box<[u16]>,
    mask: ElemSet,
}

impl fmt::Debug for MonomialPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.members, self.values)
    }
}

impl MonomialPair {
    /// Builds a pair from a subgroup's members (any order) and a value
    /// function, reduced modulo `modulus`.
    pub fn new(group: &FiniteGroup, members: &[Elem], modulus: u32, value: impl Fn(Elem) -> u32) -> Self {
        let mut members = members.to_vec();
        members.sort_unstable();
        let values: Box<[u16]> = members.iter().map(|&x| (value(x) % modulus) as u16).collect();
        let mask = ElemSet::from_indices(group.order(), members.iter().map(|&x| x as usize));
        MonomialPair { order: members.len() as u32, members: members.into_boxed_slice(), values, mask }
    }

    pub fn from_character(group: &FiniteGroup, chi: &Character) -> Self {
        let mem = group.subgroup(chi.subgroup()).members();
        Self::new(group, mem, chi.modulus(), |x| chi.raw(x))
    }

    /// `(S, 1)`.
    pub fn trivial_on(group: &FiniteGroup, s: usize) -> Self {
        Self::new(group, group.subgroup(s).members(), 1, |_| 0)
    }

    /// `(G, 1)`.
    pub fn trivial_on_whole(group: &FiniteGroup) -> Self {
        let all: Vec<Elem> = (0..group.order() as Elem).collect();
        Self::new(group, &all, 1, |_| 0)
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    /// Values of `φ` aligned with [`members`](Self::members).
    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn mask(&self) -> &ElemSet {
        &self.mask
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.mask.contains(x as usize)
    }

    /// `φ(x)` for `x ∈ U`.
    pub fn value(&self, x: Elem) -> u32 {
        let i = self.members.binary_search(&x).expect("element of the pair's subgroup");
        self.values[i] as u32
    }

    /// `φ` as a table over the whole group, zero outside `U`.
    pub fn dense(&self, group_order: usize) -> Vec<u16> {
        let mut d = vec![0u16; group_order];
        for (&x, &v) in self.members.iter().zip(self.values.iter()) {
            d[x as usize] = v;
        }
        d
    }

    pub fn is_trivial_character(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Index of `U` in the subgroup lattice of `group`.
    pub fn subgroup_index(&self, group: &FiniteGroup) -> usize {
        group.subgroup_index(&self.mask).expect("pair subgroup is a subgroup")
    }

    pub fn character(&self, group: &FiniteGroup, modulus: u32) -> Character {
        Character::from_values(group, self.subgroup_index(group), self.dense(group.order()), modulus)
            .expect("pair character is a homomorphism")
    }

    /// `ᵍ(U,φ) = (gUg⁻¹, x ↦ φ(g⁻¹xg))`.
    pub fn conjugate(&self, group: &FiniteGroup, g: Elem) -> MonomialPair {
        let mut pairs: Vec<(Elem, u16)> =
            self.members.iter().zip(self.values.iter()).map(|(&x, &v)| (group.conj(g, x), v)).collect();
        pairs.sort_unstable();
        let mask = ElemSet::from_indices(group.order(), pairs.iter().map(|&(x, _)| x as usize));
        MonomialPair {
            order: self.order,
            members: pairs.iter().map(|&(x, _)| x).collect(),
            values: pairs.iter().map(|&(_, v)| v).collect(),
            mask,
        }
    }

    /// The least `G`-conjugate.
    pub fn canonical(&self, group: &FiniteGroup) -> MonomialPair {
        if group.is_abelian() {
            return self.clone();
        }
        (0..group.order() as Elem).map(|g| self.conjugate(group, g)).min().unwrap()
    }

    /// `[V,ν]` with `V` written by members and `ν` by values.
    pub fn bracket(&self, _group: &FiniteGroup) -> String {
        let mem: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
        let val: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        format!("[{{{}}},({})]", mem.join(","), val.join(","))
    }
}

/// A species pair `(H, h)` with `h` standing for the coset `h·O(H)`.
///
/// The canonical `G`-class representative is the least
/// `(|H|, members of H, least element of hO(H))` over all conjugates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpeciesIndex {
    order: u32,
    members: Box<[Elem]>,
    element: Elem,
    mask: ElemSet,
}

impl fmt::Debug for SpeciesIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {})", self.members, self.element)
    }
}

impl SpeciesIndex {
    /// `(H, h)` where `o_h` lists `O(H)`; `h` is replaced by the least element
    /// of `hO(H)`.
    pub fn new(group: &FiniteGroup, members: &[Elem], h: Elem, o_h: &[Elem]) -> Self {
        let mut members = members.to_vec();
        members.sort_unstable();
        let element = o_h.iter().map(|&o| group.mul(h, o)).min().unwrap_or(h);
        let mask = ElemSet::from_indices(group.order(), members.iter().map(|&x| x as usize));
        SpeciesIndex { order: members.len() as u32, members: members.into_boxed_slice(), element, mask }
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn element(&self) -> Elem {
        self.element
    }

    pub fn mask(&self) -> &ElemSet {
        &self.mask
    }

    pub fn subgroup_index(&self, group: &FiniteGroup) -> usize {
        group.subgroup_index(&self.mask).expect("species subgroup is a subgroup")
    }

    /// `(gHg⁻¹, ghg⁻¹)` with the element renormalized modulo `O(gHg⁻¹)`,
    /// where `o_h` lists `O(H)`.
    pub fn conjugate(&self, group: &FiniteGroup, g: Elem, o_h: &[Elem]) -> SpeciesIndex {
        let mem: Vec<Elem> = self.members.iter().map(|&x| group.conj(g, x)).collect();
        let o_conj: Vec<Elem> = o_h.iter().map(|&x| group.conj(g, x)).collect();
        SpeciesIndex::new(group, &mem, group.conj(g, self.element), &o_conj)
    }

    pub fn canonical(&self, group: &FiniteGroup, o_h: &[Elem]) -> SpeciesIndex {
        if group.is_abelian() {
            return SpeciesIndex::new(group, &self.members, self.element, o_h);
        }
        (0..group.order() as Elem).map(|g| self.conjugate(group, g, o_h)).min().unwrap()
    }
}

fn aggregate(mut pairs: Vec<MonomialPair>) -> Vec<(MonomialPair, i64)> {
    pairs.sort_unstable();
    let mut out: Vec<(MonomialPair, i64)> = Vec::new();
    for p in pairs {
        match out.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// `[U,φ]·[V,ψ] = Σ_{t ∈ U\G/V} [U ∩ ᵗV, φ·ᵗψ]`, as canonical pairs with
/// multiplicities.
pub fn pair_product(group: &FiniteGroup, modulus: u32, a: &MonomialPair, b: &MonomialPair) -> Vec<(MonomialPair, i64)> {
    let mut out = Vec::new();
    for t in group.double_cosets(a.mask(), b.mask()) {
        let tb = b.conjugate(group, t);
        let inter: Vec<Elem> = a.members().iter().copied().filter(|&x| tb.contains(x)).collect();
        let p = MonomialPair::new(group, &inter, modulus, |x| a.value(x) + tb.value(x));
        out.push(p.canonical(group));
    }
    aggregate(out)
}

/// `s_{H,h}([V,ν])` as multiplicities of each power of `ζ`:
/// `counts[t] = #{gV : g⁻¹Hg ≤ V, ν(g⁻¹hg) = t}`.
pub fn species_counts(group: &FiniteGroup, modulus: u32, idx: &SpeciesIndex, v: &MonomialPair) -> Vec<i64> {
    let mut counts = vec![0i64; modulus as usize];
    if v.order() % idx.order() != 0 {
        return counts;
    }
    let mut covered = ElemSet::empty(group.order());
    for g in 0..group.order() as Elem {
        if covered.contains(g as usize) {
            continue;
        }
        for &x in v.members() {
            covered.insert(group.mul(g, x) as usize);
        }
        let gi = group.inv(g);
        if idx.members().iter().all(|&x| v.contains(group.conj(gi, x))) {
            counts[v.value(group.conj(gi, idx.element())) as usize] += 1;
        }
    }
    counts
}
