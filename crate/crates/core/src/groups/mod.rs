//! Finite p-groups given by Cayley tables.
//!
//! A [`FiniteGroup`] owns its multiplication table together with lazily built
//! caches (the subgroup lattice, subgroup conjugacy data, Möbius rows). Groups
//! are interned: building the same labelled table twice yields the same
//! `Arc`, so per-group caches elsewhere in the crate can be keyed by
//! [`FiniteGroup::id`].

mod characters;
mod presets;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::bitset::ElemSet;

pub use characters::{characters, omega, Character, CyclicValue};
pub use presets::{catalogue, preset_group, Preset};

/// Index of a group element. The identity is always `0`.
pub type Elem = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table does not define a group: {0}")]
    NotAGroup(String),
    #[error("group order {0} is not a prime power")]
    NotPPower(usize),
    #[error("declared prime {declared} does not match group order {order}")]
    PrimeMismatch { declared: u64, order: usize },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("bad preset parameters: {0}")]
    BadParams(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("first subgroup is not contained in the second")]
    NotASubgroupChain,
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("map is not a group isomorphism")]
    NotAnIsomorphism,
}

/// A subgroup, stored by its sorted member list and a membership mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<Elem>,
    mask: ElemSet,
    gens: Vec<Elem>,
}

impl Subgroup {
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn mask(&self) -> &ElemSet {
        &self.mask
    }

    /// A (not necessarily minimal) generating set.
    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.mask.contains(x as usize)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }
}

struct Lattice {
    subs: Vec<Subgroup>,
    index: HashMap<ElemSet, usize>,
    moebius: Vec<OnceLock<Vec<i64>>>,
    conj: OnceLock<Conjugacy>,
}

struct Conjugacy {
    /// Least-index subgroup in the conjugacy class of each subgroup.
    rep: Vec<usize>,
    /// `transporter[s] = t` with `t·S·t⁻¹ = rep(S)`.
    transporter: Vec<Elem>,
}

/// A finite group of prime-power order, stored as a full Cayley table.
pub struct FiniteGroup {
    id: usize,
    label: String,
    prime: Option<u64>,
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
    elem_order: Vec<u32>,
    abelian: bool,
    lattice: OnceLock<Lattice>,
    normalizers: OnceLock<Vec<OnceLock<ElemSet>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("prime", &self.prime)
            .finish()
    }
}

type InternKey = (String, Option<u64>, Vec<Elem>);

fn registry() -> &'static Mutex<HashMap<InternKey, Arc<FiniteGroup>>> {
    static REG: OnceLock<Mutex<HashMap<InternKey, Arc<FiniteGroup>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

static NEXT_ID: AtomicUsize = AtomicUsize::new(0);

/// Returns `Some(p)` when `n = p^k` for `k >= 1`, `None` for non prime powers
/// and for `n = 1`.
pub fn prime_of_power(n: usize) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p as u64)
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    ///
    /// `table[i][j]` is the index of `g_i · g_j`; index `0` must be the
    /// identity. `prime` is required only to attach a prime to the trivial
    /// group; for nontrivial groups it is inferred and, if given, checked.
    pub fn from_table(
        label: &str,
        table: &[Vec<usize>],
        prime: Option<u64>,
    ) -> Result<Arc<FiniteGroup>, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::NotAGroup(format!("entry {bad} out of range")));
            }
        }
        for i in 0..n {
            if table[0][i] != i || table[i][0] != i {
                return Err(GroupError::NotAGroup("index 0 is not a two-sided identity".into()));
            }
        }
        for (i, row) in table.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::NotAGroup(format!("row {i} repeats an entry")));
                }
            }
            if !(0..n).any(|j| row[j] == 0 && table[j][i] == 0) {
                return Err(GroupError::NotAGroup(format!("element {i} has no two-sided inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let inferred = prime_of_power(n);
        let prime = match (n, inferred, prime) {
            (1, _, hint) => hint,
            (_, None, _) => return Err(GroupError::NotPPower(n)),
            (_, Some(p), Some(h)) if p != h => {
                return Err(GroupError::PrimeMismatch { declared: h, order: n })
            }
            (_, Some(p), _) => Some(p),
        };
        let flat: Vec<Elem> = table.iter().flatten().map(|&x| x as Elem).collect();
        Ok(Self::from_flat_unchecked(label, flat, n, prime))
    }

    /// Builds a group from a table already known to satisfy the group axioms.
    pub(crate) fn from_flat_unchecked(
        label: &str,
        table: Vec<Elem>,
        order: usize,
        prime: Option<u64>,
    ) -> Arc<FiniteGroup> {
        let prime = prime.or_else(|| prime_of_power(order));
        let key = (label.to_string(), prime, table);
        let mut reg = registry().lock().unwrap();
        if let Some(g) = reg.get(&key) {
            return g.clone();
        }
        let table = key.2.clone();
        let mut inverse = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as Elem;
                    break;
                }
            }
        }
        let mut elem_order = vec![1u32; order];
        for (a, slot) in elem_order.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * order + a] as usize;
                k += 1;
            }
            *slot = k;
        }
        let abelian =
            (0..order).all(|a| (0..order).all(|b| table[a * order + b] == table[b * order + a]));
        let g = Arc::new(FiniteGroup {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            label: label.to_string(),
            prime,
            order,
            table,
            inverse,
            elem_order,
            abelian,
            lattice: OnceLock::new(),
            normalizers: OnceLock::new(),
        });
        reg.insert(key, g.clone());
        g
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Table rows as nested vectors (the JSON group format).
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a as Elem, b as Elem) as usize).collect())
            .collect()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    /// `g · x · g⁻¹`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        let k = k % self.elem_order[x as usize] as u64;
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn elem_order(&self, x: Elem) -> u32 {
        self.elem_order[x as usize]
    }

    pub fn exponent(&self) -> u64 {
        self.elem_order.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o as u64))
    }

    pub fn is_elementary_abelian(&self) -> bool {
        self.abelian
            && match self.prime {
                Some(p) => self.elem_order.iter().all(|&o| o == 1 || o as u64 == p),
                None => true,
            }
    }

    /// Rank `r` when the group is elementary abelian of order `p^r`.
    pub fn elementary_rank(&self) -> Option<u32> {
        if !self.is_elementary_abelian() {
            return None;
        }
        match self.prime {
            None => Some(0),
            Some(p) => {
                let mut r = 0;
                let mut n = 1usize;
                while n < self.order {
                    n *= p as usize;
                    r += 1;
                }
                Some(r)
            }
        }
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> ElemSet {
        let mut set = ElemSet::empty(self.order);
        set.insert(0);
        let mut queue = vec![0 as Elem];
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for &s in gens {
                let x = self.mul(e, s);
                if set.insert(x as usize) {
                    queue.push(x);
                }
            }
        }
        set
    }

    fn make_subgroup(&self, mask: ElemSet, gens: Vec<Elem>) -> Subgroup {
        Subgroup { members: mask.to_vec(), mask, gens }
    }

    /// Whether an element set is closed under products (hence a subgroup, as
    /// the group is finite) and contains the identity.
    pub fn is_closed(&self, set: &ElemSet) -> bool {
        set.contains(0)
            && set
                .iter()
                .all(|a| set.iter().all(|b| set.contains(self.mul(a as Elem, b as Elem) as usize)))
    }

    fn lattice(&self) -> &Lattice {
        self.lattice.get_or_init(|| self.build_lattice())
    }

    fn build_lattice(&self) -> Lattice {
        let trivial = self.make_subgroup(ElemSet::from_indices(self.order, [0]), vec![]);
        let mut subs = vec![trivial];
        let mut seen: HashMap<ElemSet, ()> = HashMap::new();
        seen.insert(subs[0].mask.clone(), ());
        let mut i = 0;
        while i < subs.len() {
            for g in 0..self.order as Elem {
                if subs[i].mask.contains(g as usize) {
                    continue;
                }
                let mut gens = subs[i].gens.clone();
                gens.push(g);
                let mask = self.closure(&gens);
                if seen.insert(mask.clone(), ()).is_none() {
                    subs.push(self.make_subgroup(mask, gens));
                }
            }
            i += 1;
        }
        subs.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        let index = subs.iter().enumerate().map(|(i, s)| (s.mask.clone(), i)).collect();
        let moebius = (0..subs.len()).map(|_| OnceLock::new()).collect();
        Lattice { subs, index, moebius, conj: OnceLock::new() }
    }

    /// All subgroups, sorted by (order, member list).
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.lattice().subs
    }

    pub fn subgroup(&self, idx: usize) -> &Subgroup {
        &self.lattice().subs[idx]
    }

    pub fn subgroup_count(&self) -> usize {
        self.lattice().subs.len()
    }

    pub fn subgroup_index(&self, mask: &ElemSet) -> Option<usize> {
        self.lattice().index.get(mask).copied()
    }

    /// Index of the subgroup generated by `gens`.
    pub fn generated_index(&self, gens: &[Elem]) -> usize {
        self.subgroup_index(&self.closure(gens)).expect("closure is a subgroup")
    }

    pub fn whole(&self) -> usize {
        self.subgroup_count() - 1
    }

    pub fn trivial(&self) -> usize {
        0
    }

    /// Index of `g·S·g⁻¹`.
    pub fn conj_subgroup(&self, g: Elem, s: usize) -> usize {
        if self.abelian {
            return s;
        }
        let mask =
            ElemSet::from_indices(self.order, self.subgroup(s).members.iter().map(|&x| self.conj(g, x) as usize));
        self.subgroup_index(&mask).expect("conjugate of a subgroup")
    }

    fn conjugacy(&self) -> &Conjugacy {
        self.lattice().conj.get_or_init(|| {
            let n = self.subgroup_count();
            let mut rep = vec![usize::MAX; n];
            let mut transporter = vec![0; n];
            for s in 0..n {
                if rep[s] != usize::MAX {
                    continue;
                }
                // s is the least index of its class since we scan upwards
                for g in 0..self.order as Elem {
                    let t = self.conj_subgroup(g, s);
                    if rep[t] == usize::MAX {
                        rep[t] = s;
                        // g·S·g⁻¹ = T, hence g⁻¹·T·g = S
                        transporter[t] = self.inv(g);
                    }
                }
            }
            Conjugacy { rep, transporter }
        })
    }

    /// Least-index subgroup conjugate to `s`, and an element `t` with
    /// `t·S·t⁻¹` equal to it.
    pub fn subgroup_class_rep(&self, s: usize) -> (usize, Elem) {
        let c = self.conjugacy();
        (c.rep[s], c.transporter[s])
    }

    pub fn normalizer(&self, s: usize) -> &ElemSet {
        let slots = self
            .normalizers
            .get_or_init(|| (0..self.subgroup_count()).map(|_| OnceLock::new()).collect());
        slots[s].get_or_init(|| {
            if self.abelian {
                return ElemSet::full(self.order);
            }
            ElemSet::from_indices(
                self.order,
                (0..self.order as Elem).filter(|&g| self.conj_subgroup(g, s) == s).map(|g| g as usize),
            )
        })
    }

    pub fn is_normal(&self, s: usize) -> bool {
        self.normalizer(s).len() == self.order
    }

    pub fn center(&self) -> usize {
        let mask = ElemSet::from_indices(
            self.order,
            (0..self.order as Elem)
                .filter(|&z| (0..self.order as Elem).all(|g| self.mul(z, g) == self.mul(g, z)))
                .map(|z| z as usize),
        );
        self.subgroup_index(&mask).unwrap()
    }

    /// Intersection of all maximal subgroups.
    pub fn frattini(&self) -> usize {
        let subs = self.subgroups();
        let top = self.whole();
        if top == 0 {
            return 0;
        }
        let mut mask = ElemSet::full(self.order);
        for (i, s) in subs.iter().enumerate() {
            if i == top {
                continue;
            }
            let maximal = !subs
                .iter()
                .enumerate()
                .any(|(j, t)| j != i && j != top && s.mask.is_subset(&t.mask));
            if maximal {
                mask = mask.intersection(&s.mask);
            }
        }
        self.subgroup_index(&mask).unwrap()
    }

    /// Möbius value `μ(V, H)` of the subgroup poset.
    pub fn moebius(&self, v: usize, h: usize) -> Result<i64, GroupError> {
        if !self.subgroup(v).is_subgroup_of(self.subgroup(h)) {
            return Err(GroupError::NotASubgroupChain);
        }
        Ok(self.moebius_row(h)[v])
    }

    /// `row[v] = μ(V, H)` for every subgroup `V` (zero off the interval).
    pub fn moebius_row(&self, h: usize) -> &[i64] {
        let lat = self.lattice();
        lat.moebius[h].get_or_init(|| {
            let hmask = &lat.subs[h].mask;
            let below: Vec<usize> =
                (0..=h).filter(|&i| lat.subs[i].mask.is_subset(hmask)).collect();
            let mut row = vec![0i64; lat.subs.len()];
            row[h] = 1;
            // indices are sorted by order, so scanning downwards visits every
            // W above V before V itself
            for (pos, &v) in below.iter().enumerate().rev() {
                if v == h {
                    continue;
                }
                let vmask = &lat.subs[v].mask;
                let sum: i64 = below[pos + 1..]
                    .iter()
                    .filter(|&&w| vmask.is_subset(&lat.subs[w].mask))
                    .map(|&w| row[w])
                    .sum();
                row[v] = -sum;
            }
            row
        })
    }

    /// Representatives (least elements) of the double cosets `U\G/V`.
    pub fn double_cosets(&self, u: &ElemSet, v: &ElemSet) -> Vec<Elem> {
        let mut covered = ElemSet::empty(self.order);
        let us: Vec<Elem> = u.to_vec();
        let vs: Vec<Elem> = v.to_vec();
        let mut reps = Vec::new();
        for g in 0..self.order as Elem {
            if covered.contains(g as usize) {
                continue;
            }
            reps.push(g);
            for &a in &us {
                let ag = self.mul(a, g);
                for &b in &vs {
                    covered.insert(self.mul(ag, b) as usize);
                }
            }
        }
        reps
    }

    /// Stabilizer of the pair `(H, h·O(H))` under conjugation, where `o_h` is
    /// the mask of `O(H)`.
    pub fn normalizer_of_pair(&self, h_sub: usize, h: Elem, o_h: &ElemSet) -> ElemSet {
        let norm = self.normalizer(h_sub);
        let hinv = self.inv(h);
        ElemSet::from_indices(
            self.order,
            norm.iter().filter(|&g| o_h.contains(self.mul(hinv, self.conj(g as Elem, h)) as usize)),
        )
    }

    /// The subgroup `S` viewed as a group in its own right, with the
    /// embedding `i ↦ members[i]`.
    pub fn subgroup_as_group(&self, s: usize, label: &str) -> (Arc<FiniteGroup>, Vec<Elem>) {
        let members = self.subgroup(s).members.clone();
        let pos: HashMap<Elem, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let n = members.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                table.push(pos[&self.mul(a, b)] as Elem);
            }
        }
        (FiniteGroup::from_flat_unchecked(label, table, n, self.prime), members)
    }

    /// The quotient `G/N`, with cosets ordered by least element.
    pub fn quotient(self: &Arc<Self>, n: usize, label: &str) -> Result<QuotientData, GroupError> {
        if !self.is_normal(n) {
            return Err(GroupError::NotNormal);
        }
        let nmem = self.subgroup(n).members.clone();
        let mut projection = vec![u32::MAX; self.order];
        let mut section = Vec::new();
        for g in 0..self.order as Elem {
            if projection[g as usize] != u32::MAX {
                continue;
            }
            let c = section.len() as Elem;
            section.push(g);
            for &x in &nmem {
                projection[self.mul(g, x) as usize] = c;
            }
        }
        let m = section.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &section {
            for &b in &section {
                table.push(projection[self.mul(a, b) as usize]);
            }
        }
        let quotient = FiniteGroup::from_flat_unchecked(label, table, m, self.prime);
        Ok(QuotientData {
            source: self.clone(),
            kernel: n,
            quotient,
            projection,
            section,
        })
    }

    /// A generating set chosen greedily by decreasing element order.
    pub fn generating_set(&self) -> Vec<Elem> {
        let mut elems: Vec<Elem> = (0..self.order as Elem).collect();
        elems.sort_by_key(|&x| (std::cmp::Reverse(self.elem_order(x)), x));
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for x in elems {
            if span.len() == self.order {
                break;
            }
            if !span.contains(x as usize) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Extends an assignment of images on `gens` to a homomorphism into
    /// `target`, if one exists.
    pub fn extend_hom(&self, gens: &[Elem], images: &[Elem], target: &FiniteGroup) -> Option<Vec<Elem>> {
        let mut map = vec![u32::MAX; self.order];
        map[0] = 0;
        let mut queue = vec![0 as Elem];
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for (&s, &t) in gens.iter().zip(images) {
                let x = self.mul(e, s);
                let y = target.mul(map[e as usize], t);
                if map[x as usize] == u32::MAX {
                    map[x as usize] = y;
                    queue.push(x);
                } else if map[x as usize] != y {
                    return None;
                }
            }
        }
        if map.contains(&u32::MAX) {
            return None;
        }
        let hom = (0..self.order as Elem).all(|a| {
            (0..self.order as Elem)
                .all(|b| map[self.mul(a, b) as usize] == target.mul(map[a as usize], map[b as usize]))
        });
        hom.then_some(map)
    }

    /// All automorphisms, each as the image table of the elements.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        let gens = self.generating_set();
        let mut out = Vec::new();
        let mut images = vec![0 as Elem; gens.len()];
        self.aut_search(&gens, 0, &mut images, &mut out);
        out.sort();
        out
    }

    fn aut_search(&self, gens: &[Elem], depth: usize, images: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if depth == gens.len() {
            if let Some(map) = self.extend_hom(gens, images, self) {
                let mut seen = ElemSet::empty(self.order);
                if map.iter().all(|&y| seen.insert(y as usize)) {
                    out.push(map);
                }
            }
            return;
        }
        let want = self.elem_order(gens[depth]);
        for y in 0..self.order as Elem {
            if self.elem_order(y) == want {
                images[depth] = y;
                self.aut_search(gens, depth + 1, images, out);
            }
        }
    }
}

/// The canonical projection `G → G/N` with a section of coset representatives.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub source: Arc<FiniteGroup>,
    /// Subgroup index of `N` in `source`.
    pub kernel: usize,
    pub quotient: Arc<FiniteGroup>,
    /// Element of `source` ↦ coset index.
    pub projection: Vec<Elem>,
    /// Coset index ↦ least representative.
    pub section: Vec<Elem>,
}

impl QuotientData {
    /// Image `S·N/N` of a subgroup of the source, as a subgroup index of the quotient.
    pub fn image_subgroup(&self, s: usize) -> usize {
        let mask = ElemSet::from_indices(
            self.quotient.order(),
            self.source.subgroup(s).members().iter().map(|&x| self.projection[x as usize] as usize),
        );
        self.quotient.subgroup_index(&mask).unwrap()
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage_subgroup(&self, s: usize) -> usize {
        let target = self.quotient.subgroup(s);
        let mask = ElemSet::from_indices(
            self.source.order(),
            (0..self.source.order()).filter(|&g| target.contains(self.projection[g])),
        );
        self.source.subgroup_index(&mask).unwrap()
    }
}

/// `G × H` with elements `(a, b) ↦ a·|H| + b`.
#[derive(Debug)]
pub struct DirectProduct {
    pub group: Arc<FiniteGroup>,
    pub left: Arc<FiniteGroup>,
    pub right: Arc<FiniteGroup>,
}

impl DirectProduct {
    #[inline]
    pub fn pair(&self, a: Elem, b: Elem) -> Elem {
        a * self.right.order() as Elem + b
    }

    #[inline]
    pub fn split(&self, x: Elem) -> (Elem, Elem) {
        let r = self.right.order() as Elem;
        (x / r, x % r)
    }

    /// First projection `p₁(U)`.
    pub fn p1(&self, u: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.left.order(), u.iter().map(|x| self.split(x as Elem).0 as usize))
    }

    /// Second projection `p₂(U)`.
    pub fn p2(&self, u: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.right.order(), u.iter().map(|x| self.split(x as Elem).1 as usize))
    }

    /// `k₁(U) = {g : (g,1) ∈ U}`.
    pub fn k1(&self, u: &ElemSet) -> ElemSet {
        ElemSet::from_indices(
            self.left.order(),
            (0..self.left.order() as Elem).filter(|&g| u.contains(self.pair(g, 0) as usize)).map(|g| g as usize),
        )
    }

    /// `k₂(U) = {h : (1,h) ∈ U}`.
    pub fn k2(&self, u: &ElemSet) -> ElemSet {
        ElemSet::from_indices(
            self.right.order(),
            (0..self.right.order() as Elem).filter(|&h| u.contains(self.pair(0, h) as usize)).map(|h| h as usize),
        )
    }

    /// `{(a, b) : a ∈ A, b ∈ B}`.
    pub fn product_set(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut out = ElemSet::empty(self.group.order());
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.pair(x as Elem, y as Elem) as usize);
            }
        }
        out
    }
}

fn products() -> &'static Mutex<HashMap<(usize, usize), Arc<DirectProduct>>> {
    static REG: OnceLock<Mutex<HashMap<(usize, usize), Arc<DirectProduct>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The (cached) direct product `G × H`.
pub fn direct_product(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>) -> Arc<DirectProduct> {
    if let Some(dp) = products().lock().unwrap().get(&(g.id(), h.id())) {
        return dp.clone();
    }
    let (m, n) = (g.order(), h.order());
    let order = m * n;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (a, b) = (x / n, x % n);
        for y in 0..order {
            let (c, d) = (y / n, y % n);
            table.push((g.mul(a as Elem, c as Elem) as usize * n + h.mul(b as Elem, d as Elem) as usize) as Elem);
        }
    }
    let prime = g.prime().or(h.prime());
    let group = FiniteGroup::from_flat_unchecked(&format!("{}x{}", g.label(), h.label()), table, order, prime);
    let dp = Arc::new(DirectProduct { group, left: g.clone(), right: h.clone() });
    products().lock().unwrap().entry((g.id(), h.id())).or_insert(dp).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_and_cyclic_tables() {
        let t = FiniteGroup::from_table("1", &[vec![0]], None).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.subgroup_count(), 1);
        let c4 = FiniteGroup::from_table("C4", &cyclic_table(4), None).unwrap();
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.prime(), Some(2));
    }

    #[test]
    fn rejects_non_p_power_and_non_groups() {
        // S3 as permutations of {0,1,2}
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let compose = |a: &[usize; 3], b: &[usize; 3]| [a[b[0]], a[b[1]], a[b[2]]];
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| perms.iter().map(|b| perms.iter().position(|c| *c == compose(a, b)).unwrap()).collect())
            .collect();
        assert_eq!(FiniteGroup::from_table("S3", &table, None).unwrap_err(), GroupError::NotPPower(6));
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(FiniteGroup::from_table("bad", &bad, None), Err(GroupError::NotAGroup(_))));
        let shifted = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(FiniteGroup::from_table("bad", &shifted, None), Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn moebius_small_cases() {
        let c2: Arc<FiniteGroup> = FiniteGroup::from_table("C2", &cyclic_table(2), None).unwrap();
        assert_eq!(c2.moebius(0, 0).unwrap(), 1);
        assert_eq!(c2.moebius(0, 1).unwrap(), -1);
        let e2 = preset_group(&Preset::ElementaryAbelian { p: 2, r: 2 }).unwrap();
        assert_eq!(e2.moebius(0, e2.whole()).unwrap(), 2);
        assert_eq!(e2.moebius(e2.whole(), 0), Err(GroupError::NotASubgroupChain));
    }

    #[test]
    fn quotient_and_section() {
        let d8 = preset_group(&Preset::Dihedral8).unwrap();
        let z = d8.center();
        let q = d8.quotient(z, "D8/Z").unwrap();
        assert_eq!(q.quotient.order() * d8.subgroup(z).order(), d8.order());
        for (c, &s) in q.section.iter().enumerate() {
            assert_eq!(q.projection[s as usize] as usize, c);
        }
        assert!(q.quotient.is_elementary_abelian());
        let non_normal = d8
            .subgroups()
            .iter()
            .position(|s| s.order() == 2 && !d8.is_normal(d8.subgroup_index(s.mask()).unwrap()))
            .unwrap();
        assert_eq!(d8.quotient(non_normal, "x").unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn double_cosets_and_automorphisms() {
        let c2 = preset_group(&Preset::Cyclic { p: 2, k: 1 }).unwrap();
        let triv = c2.subgroup(0).mask().clone();
        assert_eq!(c2.double_cosets(&triv, &triv).len(), 2);
        let e2 = preset_group(&Preset::ElementaryAbelian { p: 2, r: 2 }).unwrap();
        assert_eq!(e2.automorphisms().len(), 6);
        let c9 = preset_group(&Preset::Cyclic { p: 3, k: 2 }).unwrap();
        assert_eq!(c9.automorphisms().len(), 6);
        let d8 = preset_group(&Preset::Dihedral8).unwrap();
        assert_eq!(d8.automorphisms().len(), 8);
    }

    #[test]
    fn direct_product_projections() {
        let c2 = preset_group(&Preset::Cyclic { p: 2, k: 1 }).unwrap();
        let c4 = preset_group(&Preset::Cyclic { p: 2, k: 2 }).unwrap();
        let dp = direct_product(&c2, &c4);
        assert_eq!(dp.group.order(), 8);
        assert!(Arc::ptr_eq(&dp, &direct_product(&c2, &c4)));
        let all = ElemSet::full(8);
        assert_eq!(dp.p1(&all).len(), 2);
        assert_eq!(dp.k2(&all).len(), 4);
    }
}
