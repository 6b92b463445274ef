//! Homomorphisms from subgroups into the additive cyclic group `ℤ/pⁿ`.

use std::fmt;

use crate::bitset::ElemSet;

use super::{Elem, FiniteGroup, GroupError};

/// A residue modulo `pⁿ`: the additive model of an element of `μ_{pⁿ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicValue {
    residue: u32,
    modulus: u32,
}

impl CyclicValue {
    pub fn new(residue: i64, modulus: u32) -> Self {
        CyclicValue { residue: residue.rem_euclid(modulus as i64) as u32, modulus }
    }

    pub fn residue(self) -> u32 {
        self.residue
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn add(self, other: CyclicValue) -> CyclicValue {
        debug_assert_eq!(self.modulus, other.modulus);
        CyclicValue::new(self.residue as i64 + other.residue as i64, self.modulus)
    }

    pub fn neg(self) -> CyclicValue {
        CyclicValue::new(-(self.residue as i64), self.modulus)
    }
}

/// A homomorphism `U → ℤ/pⁿ`, stored densely over the parent group (zero
/// outside `U`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Character {
    subgroup: usize,
    modulus: u32,
    values: Box<[u16]>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character(sub {}, mod {}, {:?})", self.subgroup, self.modulus, self.values)
    }
}

impl Character {
    /// Wraps and validates a value table over the parent group.
    pub fn from_values(
        group: &FiniteGroup,
        subgroup: usize,
        values: Vec<u16>,
        modulus: u32,
    ) -> Result<Character, GroupError> {
        if values.len() != group.order() {
            return Err(GroupError::BadParams("character table has wrong length".into()));
        }
        let chi = Character { subgroup, modulus, values: values.into_boxed_slice() };
        let mem = group.subgroup(subgroup).members();
        let ok = mem.iter().all(|&x| (chi.values[x as usize] as u32) < modulus)
            && mem.iter().all(|&a| {
                mem.iter().all(|&b| {
                    chi.raw(group.mul(a, b)) == (chi.raw(a) + chi.raw(b)) % modulus
                })
            });
        if !ok {
            return Err(GroupError::BadParams("values do not define a homomorphism".into()));
        }
        Ok(chi)
    }

    pub(crate) fn from_raw(subgroup: usize, modulus: u32, values: Box<[u16]>) -> Character {
        Character { subgroup, modulus, values }
    }

    pub fn subgroup(&self) -> usize {
        self.subgroup
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn value(&self, x: Elem) -> CyclicValue {
        CyclicValue { residue: self.values[x as usize] as u32, modulus: self.modulus }
    }

    #[inline]
    pub fn raw(&self, x: Elem) -> u32 {
        self.values[x as usize] as u32
    }

    pub fn dense(&self) -> &[u16] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Values on the sorted member list of the subgroup.
    pub fn key(&self, group: &FiniteGroup) -> Vec<u16> {
        group.subgroup(self.subgroup).members().iter().map(|&x| self.values[x as usize]).collect()
    }

    /// The conjugate character `ᵍφ` on `g·S·g⁻¹`, with `ᵍφ(x) = φ(g⁻¹·x·g)`.
    pub fn conjugate(&self, group: &FiniteGroup, g: Elem) -> Character {
        let mut values = vec![0u16; group.order()];
        for &x in group.subgroup(self.subgroup).members() {
            values[group.conj(g, x) as usize] = self.values[x as usize];
        }
        Character { subgroup: group.conj_subgroup(g, self.subgroup), modulus: self.modulus, values: values.into_boxed_slice() }
    }

    /// Kernel as an element set of the parent group.
    pub fn kernel(&self, group: &FiniteGroup) -> ElemSet {
        ElemSet::from_indices(
            group.order(),
            group.subgroup(self.subgroup).members().iter().filter(|&&x| self.values[x as usize] == 0).map(|&x| x as usize),
        )
    }
}

/// `O(S)`: the subgroup of `S` generated by commutators and `pⁿ`-th powers,
/// i.e. the intersection of the kernels of all homomorphisms `S → ℤ/pⁿ`.
pub fn omega(group: &FiniteGroup, s: usize, modulus: u64) -> usize {
    let mem = group.subgroup(s).members();
    let mut gens = Vec::new();
    for &a in mem {
        for &b in mem {
            let c = group.mul(group.mul(a, b), group.mul(group.inv(a), group.inv(b)));
            if c != 0 {
                gens.push(c);
            }
        }
        let pw = group.pow(a, modulus);
        if pw != 0 {
            gens.push(pw);
        }
    }
    gens.sort_unstable();
    gens.dedup();
    let o = group.generated_index(&gens);
    debug_assert!(mem.len() > 16 || o == omega_by_kernels(group, s, modulus));
    o
}

/// Reference computation of `O(S)` as the intersection of kernels, found by
/// brute force over value assignments on a generating set.
fn omega_by_kernels(group: &FiniteGroup, s: usize, modulus: u64) -> usize {
    let (sg, emb) = group.subgroup_as_group(s, "omega-check");
    let gens = sg.generating_set();
    let m = modulus as u32;
    let mut kernel = ElemSet::full(group.order());
    let mut assignment = vec![0u32; gens.len()];
    loop {
        if let Some(vals) = assign_hom(&sg, &gens, &assignment, m) {
            let ker = ElemSet::from_indices(
                group.order(),
                (0..sg.order()).filter(|&i| vals[i] == 0).map(|i| emb[i] as usize),
            );
            kernel = kernel.intersection(&ker);
        }
        let mut i = 0;
        while i < assignment.len() {
            assignment[i] += 1;
            if assignment[i] < m {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if i == assignment.len() {
            break;
        }
    }
    let kernel = kernel.intersection(group.subgroup(s).mask());
    group.subgroup_index(&kernel).unwrap()
}

/// Extends generator values to a homomorphism `sg → ℤ/m`, if consistent.
fn assign_hom(sg: &FiniteGroup, gens: &[Elem], vals: &[u32], m: u32) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; sg.order()];
    map[0] = 0;
    let mut queue = vec![0 as Elem];
    let mut i = 0;
    while i < queue.len() {
        let e = queue[i];
        i += 1;
        for (&s, &v) in gens.iter().zip(vals) {
            let x = sg.mul(e, s);
            let y = (map[e as usize] + v) % m;
            if map[x as usize] == u32::MAX {
                map[x as usize] = y;
                queue.push(x);
            } else if map[x as usize] != y {
                return None;
            }
        }
    }
    let n = sg.order() as Elem;
    (0..n)
        .all(|a| (0..n).all(|b| map[sg.mul(a, b) as usize] == (map[a as usize] + map[b as usize]) % m))
        .then_some(map)
}

/// Small abelian quotient `S/O(S)` given by coset indices.
struct AbelianQuotient {
    n: usize,
    table: Vec<usize>,
}

impl AbelianQuotient {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for &g in gens {
                let x = self.mul(e, g);
                if !seen[x] {
                    seen[x] = true;
                    queue.push(x);
                }
            }
        }
        seen
    }

    fn order_of(&self, x: usize) -> usize {
        let (mut y, mut k) = (x, 1);
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// A basis `x₁, …, x_k` with `Q = ⟨x₁⟩ ⊕ … ⊕ ⟨x_k⟩`. An element of maximal
    /// order generates a direct summand, and any subgroup maximal with
    /// trivial intersection with it is a complement.
    fn basis(&self) -> Vec<usize> {
        let mut basis = Vec::new();
        let mut current: Vec<usize> = (0..self.n).collect();
        while current.len() > 1 {
            let x = *current.iter().max_by_key(|&&y| (self.order_of(y), std::cmp::Reverse(y))).unwrap();
            let cyc = self.closure(&[x]);
            let mut comp_gens: Vec<usize> = Vec::new();
            let mut comp = self.closure(&comp_gens);
            for &y in &current {
                if comp[y] {
                    continue;
                }
                let mut trial = comp_gens.clone();
                trial.push(y);
                let span = self.closure(&trial);
                if (1..self.n).all(|z| !(span[z] && cyc[z])) {
                    comp_gens = trial;
                    comp = span;
                }
            }
            let next: Vec<usize> = (0..self.n).filter(|&z| comp[z]).collect();
            assert_eq!(next.len() * self.order_of(x), current.len(), "complement has the wrong size");
            basis.push(x);
            current = next;
        }
        basis
    }
}

/// All homomorphisms `S → ℤ/modulus`, sorted by their value lists on the
/// members of `S`. The count equals `[S : O(S)]`.
pub fn characters(group: &FiniteGroup, s: usize, modulus: u64) -> Vec<Character> {
    let mem = group.subgroup(s).members();
    let o = group.subgroup(omega(group, s, modulus)).members().to_vec();
    let mut coset = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for &u in mem {
        if coset[u as usize] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(u);
        for &x in &o {
            coset[group.mul(u, x) as usize] = c;
        }
    }
    let n = reps.len();
    let mut table = Vec::with_capacity(n * n);
    for &a in &reps {
        for &b in &reps {
            table.push(coset[group.mul(a, b) as usize]);
        }
    }
    let q = AbelianQuotient { n, table };
    let basis = q.basis();
    let orders: Vec<usize> = basis.iter().map(|&x| q.order_of(x)).collect();

    // coordinates of every quotient element in the basis
    let mut coords = vec![Vec::new(); n];
    let mut exps = vec![0usize; basis.len()];
    loop {
        let mut elem = 0;
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                elem = q.mul(elem, basis[i]);
            }
        }
        coords[elem] = exps.clone();
        if !increment(&mut exps, &orders) {
            break;
        }
    }

    let m = modulus as usize;
    let mut chars = Vec::with_capacity(n);
    let mut assign = vec![0usize; basis.len()];
    loop {
        let gen_vals: Vec<usize> = assign.iter().zip(&orders).map(|(&a, &ord)| a * (m / ord)).collect();
        let mut values = vec![0u16; group.order()];
        for &u in mem {
            let c = &coords[coset[u as usize]];
            let v: usize = c.iter().zip(&gen_vals).map(|(&e, &g)| e * g).sum::<usize>() % m;
            values[u as usize] = v as u16;
        }
        chars.push(Character::from_raw(s, modulus as u32, values.into_boxed_slice()));
        if !increment(&mut assign, &orders) {
            break;
        }
    }
    chars.sort_by_cached_key(|c| c.key(group));
    chars
}

fn increment(digits: &mut [usize], bounds: &[usize]) -> bool {
    for (d, &b) in digits.iter_mut().zip(bounds) {
        *d += 1;
        if *d < b {
            return true;
        }
        *d = 0;
    }
    false
}
