//! Brute-force realization of fibered sets and bisets as explicit
//! permutation actions, used as an independent check of the ring product
//! and the Mackey formula.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fibring::{pair_space, MonomialPair, RingElement};
use crate::groups::{catalogue, direct_product, preset_group, Elem, FiniteGroup};
use crate::scalars::{make_field, Field};

/// Largest carrier the oracle accepts.
pub const MAX_CARRIER: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the fiber action is not free")]
    NotFree,
    #[error("groups do not match: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("carrier of size {0} exceeds the oracle limit")]
    TooLarge(usize),
    #[error("negative or non-integral coefficient")]
    NotASet,
    #[error("setup failed: {0}")]
    Setup(String),
}

/// An `A`-fibered `G`-set on points `0..size`, with `A = ℤ/modulus` acting
/// through the permutation `a_action` of its generator and `g_action[g]`
/// giving the left action of `g`.
#[derive(Clone, Debug)]
pub struct FiberedSet {
    pub group: Arc<FiniteGroup>,
    pub modulus: u32,
    pub a_action: Vec<u32>,
    pub g_action: Vec<Vec<u32>>,
}

/// Multiset of canonical stabilizing pairs.
pub type Decomposition = BTreeMap<MonomialPair, u64>;

impl FiberedSet {
    pub fn size(&self) -> usize {
        self.a_action.len()
    }

    fn a_pow(&self, x: u32, k: u32) -> u32 {
        (0..k).fold(x, |y, _| self.a_action[y as usize])
    }

    /// Checks that `A` acts freely and commutes with `G`, and that `g ↦ g_action[g]`
    /// is a homomorphism.
    pub fn validate(&self) -> Result<(), OracleError> {
        for x in 0..self.size() as u32 {
            let mut y = self.a_action[x as usize];
            let mut k = 1;
            while y != x {
                y = self.a_action[y as usize];
                k += 1;
            }
            if k != self.modulus {
                return Err(OracleError::NotFree);
            }
        }
        let g = &self.group;
        let ok = (0..g.order()).all(|a| {
            (0..self.size()).all(|x| {
                self.g_action[a][self.a_action[x] as usize] == self.a_action[self.g_action[a][x] as usize]
            }) && (0..g.order()).all(|b| {
                let ab = g.mul(a as Elem, b as Elem) as usize;
                (0..self.size()).all(|x| self.g_action[ab][x] == self.g_action[a][self.g_action[b][x] as usize])
            })
        });
        if !ok {
            return Err(OracleError::GroupMismatch("action".into(), "homomorphism".into()));
        }
        Ok(())
    }
}

/// `A ×_U G` for a pair `(U,φ)`: points `(a, gU)` with `g·(a, tᵢU) = (a + φ(u), tⱼU)`
/// where `g tᵢ = tⱼ u`.
pub fn realize(group: &Arc<FiniteGroup>, pair: &MonomialPair, modulus: u32) -> Result<FiberedSet, OracleError> {
    let n = group.order();
    let size = modulus as usize * n / pair.order();
    if size > MAX_CARRIER {
        return Err(OracleError::TooLarge(size));
    }
    let mut coset = vec![u32::MAX; n];
    let mut reps: Vec<Elem> = Vec::new();
    for g in 0..n as Elem {
        if coset[g as usize] != u32::MAX {
            continue;
        }
        for &u in pair.members() {
            coset[group.mul(g, u) as usize] = reps.len() as u32;
        }
        reps.push(g);
    }
    let c = reps.len() as u32;
    let point = |a: u32, i: u32| a * c + i;
    let a_action = (0..modulus).flat_map(|a| (0..c).map(move |i| point((a + 1) % modulus, i))).collect();
    let mut g_action = vec![Vec::with_capacity(size); n];
    for (g, row) in g_action.iter_mut().enumerate() {
        for a in 0..modulus {
            for &t in &reps {
                let gt = group.mul(g as Elem, t);
                let j = coset[gt as usize];
                let u = group.mul(group.inv(reps[j as usize]), gt);
                row.push(point((a + pair.value(u)) % modulus, j));
            }
        }
    }
    Ok(FiberedSet { group: group.clone(), modulus, a_action, g_action })
}

/// Disjoint union.
pub fn disjoint_union(x: &FiberedSet, y: &FiberedSet) -> Result<FiberedSet, OracleError> {
    if x.group.id() != y.group.id() {
        return Err(OracleError::GroupMismatch(x.group.label().into(), y.group.label().into()));
    }
    let off = x.size() as u32;
    let a_action = x.a_action.iter().copied().chain(y.a_action.iter().map(|&p| p + off)).collect();
    let g_action = x
        .g_action
        .iter()
        .zip(&y.g_action)
        .map(|(gx, gy)| gx.iter().copied().chain(gy.iter().map(|&p| p + off)).collect())
        .collect();
    Ok(FiberedSet { group: x.group.clone(), modulus: x.modulus, a_action, g_action })
}

/// Realization of an element with non-negative integer coefficients.
pub fn realize_element(x: &RingElement) -> Result<FiberedSet, OracleError> {
    let k = x.field();
    let m = k.fiber_order() as u32;
    let mut out =
        FiberedSet { group: x.group().clone(), modulus: m, a_action: vec![], g_action: vec![vec![]; x.group().order()] };
    for (p, c) in x.terms() {
        let n = k.as_integer(c).and_then(|n| u64::try_from(n).ok()).ok_or(OracleError::NotASet)?;
        let piece = realize(x.group(), p, m)?;
        for _ in 0..n {
            out = disjoint_union(&out, &piece)?;
        }
    }
    Ok(out)
}

/// Stabilizing pairs of the transitive constituents.
pub fn orbit_decompose(x: &FiberedSet) -> Result<Decomposition, OracleError> {
    x.validate()?;
    let g = &x.group;
    let mut seen = vec![false; x.size()];
    let mut out = Decomposition::new();
    for start in 0..x.size() as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut fiber = vec![u32::MAX; x.size()];
        for k in 0..x.modulus {
            fiber[x.a_pow(start, k) as usize] = k;
        }
        let mut members = Vec::new();
        let mut vals = vec![0u32; g.order()];
        for e in 0..g.order() {
            let y = x.g_action[e][start as usize];
            if fiber[y as usize] != u32::MAX {
                members.push(e as Elem);
                vals[e] = fiber[y as usize];
            }
            for k in 0..x.modulus {
                seen[x.a_pow(y, k) as usize] = true;
            }
        }
        let pair = MonomialPair::new(g, &members, x.modulus, |e| vals[e as usize]).canonical(g);
        *out.entry(pair).or_insert(0) += 1;
    }
    Ok(out)
}

/// The element `Σ n·[U,φ]` of a decomposition.
pub fn to_element(group: &Arc<FiniteGroup>, field: &Arc<Field>, d: &Decomposition) -> RingElement {
    RingElement::from_counts(group, field, d.iter().map(|(p, &n)| (p, n as i64)))
}

/// `X·Y`: the `A`-orbits of `X × Y` under `a·(x,y) = (a·x, a⁻¹·y)`.
pub fn dot(x: &FiberedSet, y: &FiberedSet) -> Result<FiberedSet, OracleError> {
    if x.group.id() != y.group.id() {
        return Err(OracleError::GroupMismatch(x.group.label().into(), y.group.label().into()));
    }
    let size = x.size() * y.size() / y.modulus as usize;
    if size > MAX_CARRIER {
        return Err(OracleError::TooLarge(size));
    }
    // each orbit has a unique member (x', r) with r a fixed orbit representative of Y
    let mut rep = vec![(u32::MAX, 0u32); y.size()];
    let mut nreps = 0u32;
    for s in 0..y.size() as u32 {
        if rep[s as usize].0 != u32::MAX {
            continue;
        }
        for k in 0..y.modulus {
            rep[y.a_pow(s, k) as usize] = (nreps, k);
        }
        nreps += 1;
    }
    let point = |px: u32, j: u32| px * nreps + j;
    let normalize = |px: u32, py: u32| {
        // (px, a^k r) ~ (a^k px, r)
        let (j, k) = rep[py as usize];
        point(x.a_pow(px, k), j)
    };
    let mut a_action = vec![0u32; size];
    let mut g_action = vec![vec![0u32; size]; x.group.order()];
    let mut ry = vec![0u32; nreps as usize];
    for s in 0..y.size() as u32 {
        let (j, k) = rep[s as usize];
        if k == 0 {
            ry[j as usize] = s;
        }
    }
    for px in 0..x.size() as u32 {
        for j in 0..nreps {
            let p = point(px, j) as usize;
            a_action[p] = point(x.a_action[px as usize], j);
            for e in 0..x.group.order() {
                g_action[e][p] = normalize(x.g_action[e][px as usize], y.g_action[e][ry[j as usize] as usize]);
            }
        }
    }
    Ok(FiberedSet { group: x.group.clone(), modulus: x.modulus, a_action, g_action })
}

/// Result of the amalgamated product.
#[derive(Clone, Debug)]
pub struct TensorResult {
    pub set: FiberedSet,
    pub total_orbits: usize,
    pub discarded: usize,
}

/// `X ⊗_{AH} Y` for a fibered `(G,H)`-biset `X` and `(H,K)`-biset `Y`, both
/// encoded as left sets over the product groups with `(g,h)·x = g x h⁻¹`.
pub fn tensor(
    left: &Arc<FiniteGroup>,
    mid: &Arc<FiniteGroup>,
    right: &Arc<FiniteGroup>,
    x: &FiberedSet,
    y: &FiberedSet,
) -> Result<TensorResult, OracleError> {
    let dp1 = direct_product(left, mid);
    let dp2 = direct_product(mid, right);
    let dp3 = direct_product(left, right);
    if x.group.id() != dp1.group.id() {
        return Err(OracleError::GroupMismatch(x.group.label().into(), dp1.group.label().into()));
    }
    if y.group.id() != dp2.group.id() {
        return Err(OracleError::GroupMismatch(y.group.label().into(), dp2.group.label().into()));
    }
    let (nx, ny) = (x.size(), y.size());
    if nx * ny > MAX_CARRIER * 16 {
        return Err(OracleError::TooLarge(nx * ny));
    }
    let m = x.modulus;
    let a_inv: Vec<u32> = {
        let mut v = vec![0u32; nx];
        for (i, &j) in x.a_action.iter().enumerate() {
            v[j as usize] = i as u32;
        }
        v
    };
    let idx = |px: u32, py: u32| (px as usize) * ny + py as usize;
    // orbits of A×H via BFS on generators
    let mut orbit = vec![u32::MAX; nx * ny];
    let mut orbits: Vec<(u32, u32)> = Vec::new();
    let h_elems: Vec<Elem> = (0..mid.order() as Elem).collect();
    for px in 0..nx as u32 {
        for py in 0..ny as u32 {
            if orbit[idx(px, py)] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            orbits.push((px, py));
            let mut stack = vec![(px, py)];
            orbit[idx(px, py)] = id;
            while let Some((a, b)) = stack.pop() {
                let mut next = vec![(a_inv[a as usize], y.a_action[b as usize])];
                for &h in &h_elems {
                    let hx = dp1.pair(0, h) as usize;
                    let hy = dp2.pair(h, 0) as usize;
                    next.push((x.g_action[hx][a as usize], y.g_action[hy][b as usize]));
                }
                for (c, d) in next {
                    if orbit[idx(c, d)] == u32::MAX {
                        orbit[idx(c, d)] = id;
                        stack.push((c, d));
                    }
                }
            }
        }
    }
    let total = orbits.len();
    let a_on = |o: u32| {
        let (a, b) = orbits[o as usize];
        orbit[idx(x.a_action[a as usize], b)]
    };
    let free: Vec<bool> = (0..total as u32)
        .map(|o| {
            let mut z = a_on(o);
            let mut k = 1;
            while z != o {
                z = a_on(z);
                k += 1;
            }
            k == m
        })
        .collect();
    let mut new_index = vec![u32::MAX; total];
    let mut kept = 0u32;
    for o in 0..total {
        if free[o] {
            new_index[o] = kept;
            kept += 1;
        }
    }
    let mut a_action = vec![0u32; kept as usize];
    let mut g_action = vec![vec![0u32; kept as usize]; dp3.group.order()];
    for o in 0..total {
        if !free[o] {
            continue;
        }
        let p = new_index[o] as usize;
        a_action[p] = new_index[a_on(o as u32) as usize];
        let (a, b) = orbits[o];
        for e in 0..dp3.group.order() as Elem {
            let (g, k) = dp3.split(e);
            let gx = x.g_action[dp1.pair(g, 0) as usize][a as usize];
            let ky = y.g_action[dp2.pair(0, k) as usize][b as usize];
            g_action[e as usize][p] = new_index[orbit[idx(gx, ky)] as usize];
        }
    }
    let set = FiberedSet { group: dp3.group.clone(), modulus: m, a_action, g_action };
    Ok(TensorResult { set, total_orbits: total, discarded: total - kept as usize })
}

/// One failed comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub groups: Vec<String>,
    pub left: String,
    pub right: String,
    pub oracle: String,
    pub formula: String,
}

/// Outcome of the exhaustive differential suites.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub groups: Vec<String>,
    pub mackey_checked: usize,
    pub mackey_mismatches: Vec<Counterexample>,
    pub dot_checked: usize,
    pub dot_mismatches: Vec<Counterexample>,
    pub discarded_orbits: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mackey_mismatches.is_empty() && self.dot_mismatches.is_empty()
    }
}

/// Compares `tensor` with the Mackey formula for every ordered composable
/// pair of transitive bisets among the `p`-groups of order at most
/// `max_order`, and `dot` with the ring product for every pair of basis
/// elements of each group.
pub fn verify(p: u64, n: u32, max_order: u64) -> Result<VerifyReport, OracleError> {
    let field = make_field(p, n, 0).map_err(|e| OracleError::Setup(e.to_string()))?;
    let m = field.fiber_order() as u32;
    let presets = catalogue(p, max_order).map_err(|e| OracleError::Setup(e.to_string()))?;
    let groups: Vec<Arc<FiniteGroup>> =
        presets.iter().map(preset_group).collect::<Result<_, _>>().map_err(|e| OracleError::Setup(e.to_string()))?;

    let dot_results: Vec<(usize, Vec<Counterexample>)> = groups
        .par_iter()
        .map(|g| {
            let pairs = pair_space(g, m).pairs().to_vec();
            let sets: Vec<FiberedSet> = pairs.iter().map(|x| realize(g, x, m)).collect::<Result<_, _>>()?;
            let mut bad = Vec::new();
            for (a, sa) in pairs.iter().zip(&sets) {
                for (b, sb) in pairs.iter().zip(&sets) {
                    let oracle = to_element(g, &field, &orbit_decompose(&dot(sa, sb)?)?);
                    let formula = RingElement::basis(g, &field, a).mul(&RingElement::basis(g, &field, b)).expect("same group");
                    if oracle != formula {
                        bad.push(Counterexample {
                            groups: vec![g.label().into()],
                            left: format!("{a:?}"),
                            right: format!("{b:?}"),
                            oracle: oracle.bracket_notation(),
                            formula: formula.bracket_notation(),
                        });
                    }
                }
            }
            Ok((pairs.len() * pairs.len(), bad))
        })
        .collect::<Result<_, OracleError>>()?;

    let ng = groups.len();
    let triples: Vec<(usize, usize, usize)> =
        (0..ng).flat_map(|a| (0..ng).flat_map(move |b| (0..ng).map(move |c| (a, b, c)))).collect();
    let pair_lists: Vec<Vec<Vec<MonomialPair>>> = groups
        .iter()
        .map(|g| groups.iter().map(|h| pair_space(&direct_product(g, h).group, m).pairs().to_vec()).collect())
        .collect();
    let mackey_results: Vec<(usize, usize, Vec<Counterexample>)> = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let (g, h, k) = (&groups[a], &groups[b], &groups[c]);
            let (dp1, dp2, dp3) = (direct_product(g, h), direct_product(h, k), direct_product(g, k));
            let xs = &pair_lists[a][b];
            let ys = &pair_lists[b][c];
            let sy: Vec<FiberedSet> = ys.iter().map(|y| realize(&dp2.group, y, m)).collect::<Result<_, _>>()?;
            let mut bad = Vec::new();
            let mut discarded = 0;
            for x in xs {
                let sx = realize(&dp1.group, x, m)?;
                for (y, sy) in ys.iter().zip(&sy) {
                    let t = tensor(g, h, k, &sx, sy)?;
                    discarded += t.discarded;
                    let oracle = to_element(&dp3.group, &field, &orbit_decompose(&t.set)?);
                    let mut formula = RingElement::zero(&dp3.group, &field);
                    for w in crate::bisets::mackey_pair(&dp1, x, &dp2, y, &dp3, m) {
                        formula.add_term(w, field.one());
                    }
                    if oracle != formula {
                        bad.push(Counterexample {
                            groups: vec![g.label().into(), h.label().into(), k.label().into()],
                            left: format!("{x:?}"),
                            right: format!("{y:?}"),
                            oracle: oracle.bracket_notation(),
                            formula: formula.bracket_notation(),
                        });
                    }
                }
            }
            Ok((xs.len() * ys.len(), discarded, bad))
        })
        .collect::<Result<_, OracleError>>()?;

    Ok(VerifyReport {
        groups: groups.iter().map(|g| g.label().to_string()).collect(),
        mackey_checked: mackey_results.iter().map(|r| r.0).sum(),
        discarded_orbits: mackey_results.iter().map(|r| r.1).sum(),
        mackey_mismatches: mackey_results.into_iter().flat_map(|r| r.2).collect(),
        dot_checked: dot_results.iter().map(|r| r.0).sum(),
        dot_mismatches: dot_results.into_iter().flat_map(|r| r.1).collect(),
    })
}
