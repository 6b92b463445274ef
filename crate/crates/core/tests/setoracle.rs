use std::sync::Arc;

use fibered_burnside::bisets::{self as elementary, mackey_product, Biset};
use fibered_burnside::fibring::{pair_space, MonomialPair, RingElement};
use fibered_burnside::groups::{characters, direct_product, preset_group, FiniteGroup, Preset};
use fibered_burnside::scalars::{make_field, Field};
use fibered_burnside::setoracle::{
    disjoint_union, dot, orbit_decompose, realize, realize_element, tensor, to_element, Decomposition, FiberedSet,
    OracleError,
};
use proptest::prelude::*;

fn grp(s: &str) -> Arc<FiniteGroup> {
    preset_group(&s.parse::<Preset>().unwrap()).unwrap()
}

fn q2() -> Arc<Field> {
    make_field(2, 1, 0).unwrap()
}

fn order_le4() -> Vec<Arc<FiniteGroup>> {
    ["trivial", "cyclic:2,1", "cyclic:2,2", "elementary_abelian:2,2"].iter().map(|s| grp(s)).collect()
}

fn single(p: &MonomialPair) -> Decomposition {
    [(p.clone(), 1)].into_iter().collect()
}

fn a_orbits(x: &FiberedSet) -> usize {
    x.size() / x.modulus as usize
}

#[test]
fn realize_trivial_pair_over_trivial_group() {
    let g = grp("trivial");
    let x = realize(&g, &MonomialPair::trivial_on_whole(&g), 2).unwrap();
    assert_eq!(x.size(), 2);
    assert_eq!(a_orbits(&x), 1);
}

#[test]
fn realize_sign_character_on_c2() {
    let g = grp("cyclic:2,1");
    let chi = MonomialPair::new(&g, &[0, 1], 2, |x| x);
    let x = realize(&g, &chi, 2).unwrap();
    assert_eq!(x.size(), 2);
    assert_eq!(x.g_action[1], x.a_action);
}

#[test]
fn realize_free_orbit_on_c2() {
    let g = grp("cyclic:2,1");
    let x = realize(&g, &MonomialPair::trivial_on(&g, g.trivial()), 2).unwrap();
    assert_eq!(x.size(), 4);
    assert_eq!(a_orbits(&x), 2);
    // g moves every A-orbit to the other one
    for p in 0..4u32 {
        let q = x.g_action[1][p as usize];
        assert!(q != p && q != x.a_action[p as usize]);
    }
}

#[test]
fn realize_round_trips_for_all_small_groups() {
    for s in ["cyclic:2,2", "elementary_abelian:2,2", "dihedral8", "quaternion8", "cyclic:3,1", "elementary_abelian:3,2"] {
        let g = grp(s);
        let m = g.prime().unwrap() as u32;
        for p in pair_space(&g, m).pairs() {
            let x = realize(&g, p, m).unwrap();
            x.validate().unwrap();
            assert_eq!(orbit_decompose(&x).unwrap(), single(p), "{s} {p:?}");
        }
    }
}

#[test]
fn disjoint_union_is_additive() {
    let g = grp("dihedral8");
    let sp = pair_space(&g, 2);
    let (a, b) = (&sp.pairs()[3], &sp.pairs()[7]);
    let u = disjoint_union(&realize(&g, a, 2).unwrap(), &realize(&g, b, 2).unwrap()).unwrap();
    let want: Decomposition = [(a.clone(), 1), (b.clone(), 1)].into_iter().collect();
    assert_eq!(orbit_decompose(&u).unwrap(), want);
}

#[test]
fn non_free_fiber_is_rejected() {
    let g = grp("trivial");
    let x = FiberedSet { group: g, modulus: 2, a_action: vec![0, 1], g_action: vec![vec![0, 1]] };
    assert_eq!(orbit_decompose(&x), Err(OracleError::NotFree));
}

#[test]
fn dot_with_unit_is_identity() {
    let g = grp("cyclic:2,2");
    let unit = realize(&g, &MonomialPair::trivial_on_whole(&g), 2).unwrap();
    for p in pair_space(&g, 2).pairs() {
        let y = realize(&g, p, 2).unwrap();
        assert_eq!(orbit_decompose(&dot(&unit, &y).unwrap()).unwrap(), single(p));
    }
}

#[test]
fn dot_of_free_orbits_on_c2() {
    let g = grp("cyclic:2,1");
    let free = MonomialPair::trivial_on(&g, g.trivial());
    let x = realize(&g, &free, 2).unwrap();
    let d = orbit_decompose(&dot(&x, &x).unwrap()).unwrap();
    assert_eq!(d, [(free.canonical(&g), 2)].into_iter().collect());
}

#[test]
fn dot_matches_ring_product_on_small_groups() {
    let k = q2();
    for s in ["cyclic:2,1", "cyclic:2,2", "elementary_abelian:2,2", "dihedral8"] {
        let g = grp(s);
        let pairs = pair_space(&g, 2).pairs().to_vec();
        for a in &pairs {
            for b in &pairs {
                let set = dot(&realize(&g, a, 2).unwrap(), &realize(&g, b, 2).unwrap()).unwrap();
                let oracle = to_element(&g, &k, &orbit_decompose(&set).unwrap());
                let ring = RingElement::basis(&g, &k, a).mul(&RingElement::basis(&g, &k, b)).unwrap();
                assert_eq!(oracle, ring, "{s}: {a:?} * {b:?}");
            }
        }
    }
}

fn biset_set(b: &Biset) -> FiberedSet {
    realize_element(b.element()).unwrap()
}

#[test]
fn tensor_with_identity_is_identity() {
    let k = q2();
    let g = grp("cyclic:2,2");
    let h = grp("cyclic:2,1");
    let dp = direct_product(&g, &h);
    let id = biset_set(&elementary::identity(&g, &k));
    for p in pair_space(&dp.group, 2).pairs() {
        let x = realize(&dp.group, p, 2).unwrap();
        let t = tensor(&g, &g, &h, &id, &x).unwrap();
        assert_eq!(orbit_decompose(&t.set).unwrap(), single(p));
    }
}

#[test]
fn twist_squared_is_identity_on_c2() {
    let k = q2();
    let g = grp("cyclic:2,1");
    let chi = characters(&g, g.whole(), 2).into_iter().find(|c| !c.is_trivial()).unwrap();
    let tw = biset_set(&elementary::tw(&g, &chi, &k).unwrap());
    let t = tensor(&g, &g, &g, &tw, &tw).unwrap();
    let id = elementary::identity(&g, &k);
    assert_eq!(to_element(&id.dp().group, &k, &orbit_decompose(&t.set).unwrap()), *id.element());
}

#[test]
fn discarded_orbits_are_the_non_free_ones() {
    let k = q2();
    let g = grp("cyclic:2,1");
    let one = grp("trivial");
    // the middle C₂ acts on the fiber of X but trivially on Y: no free orbit survives
    let dp = direct_product(&g, &g);
    let u = MonomialPair::new(&dp.group, &[dp.pair(0, 0), dp.pair(0, 1)], 2, |z| dp.split(z).1);
    let dq = direct_product(&g, &one);
    let v = MonomialPair::trivial_on_whole(&dq.group);
    let t = tensor(&g, &g, &one, &realize(&dp.group, &u, 2).unwrap(), &realize(&dq.group, &v, 2).unwrap()).unwrap();
    assert!(t.total_orbits > 0);
    assert_eq!(t.discarded, t.total_orbits);
    assert!(mackey_product(&Biset::transitive(&dp, &k, &u), &Biset::transitive(&dq, &k, &v)).unwrap().is_zero());
}

/// Every transitive pair over `G×H`, as a biset.
fn transitive_bisets(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, k: &Arc<Field>) -> Vec<Biset> {
    let dp = direct_product(g, h);
    pair_space(&dp.group, k.fiber_order() as u32).pairs().iter().map(|p| Biset::transitive(&dp, k, p)).collect()
}

#[test]
fn tensor_matches_mackey_on_groups_of_order_two() {
    let k = q2();
    let gs: Vec<_> = order_le4().into_iter().take(2).collect();
    let mut checked = 0;
    for g in &gs {
        for h in &gs {
            for kk in &gs {
                let xs = transitive_bisets(g, h, &k);
                let ys = transitive_bisets(h, kk, &k);
                for x in &xs {
                    let sx = biset_set(x);
                    for y in &ys {
                        let t = tensor(g, h, kk, &sx, &biset_set(y)).unwrap();
                        assert_eq!(t.discarded + t.set.size(), t.total_orbits);
                        let oracle = to_element(&direct_product(g, kk).group, &k, &orbit_decompose(&t.set).unwrap());
                        assert_eq!(oracle, *mackey_product(x, y).unwrap().element());
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

fn random_element(pairs: &[MonomialPair], picks: &[(usize, u8)], g: &Arc<FiniteGroup>, k: &Arc<Field>) -> RingElement {
    let mut x = RingElement::zero(g, k);
    for &(i, c) in picks {
        x.add_term(pairs[i % pairs.len()].clone(), k.from_integer(c as i64 % 3 + 1));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_c4_sets_are_recovered(picks in proptest::collection::vec((0usize..64, 0u8..3), 3)) {
        let g = grp("cyclic:2,2");
        let k = q2();
        let pairs = pair_space(&g, 2).pairs().to_vec();
        let x = random_element(&pairs, &picks, &g, &k);
        let set = realize_element(&x).unwrap();
        prop_assert_eq!(to_element(&g, &k, &orbit_decompose(&set).unwrap()), x);
    }

    #[test]
    fn dot_is_associative(a in 0usize..64, b in 0usize..64, c in 0usize..64) {
        let g = grp("dihedral8");
        let p = pair_space(&g, 2).pairs().to_vec();
        let r = |i: usize| realize(&g, &p[i % p.len()], 2).unwrap();
        let left = dot(&dot(&r(a), &r(b)).unwrap(), &r(c)).unwrap();
        let right = dot(&r(a), &dot(&r(b), &r(c)).unwrap()).unwrap();
        prop_assert_eq!(orbit_decompose(&left).unwrap(), orbit_decompose(&right).unwrap());
    }

    #[test]
    fn tensor_is_associative(a in 0usize..400, b in 0usize..400, c in 0usize..400) {
        let k = q2();
        let g = grp("cyclic:2,1");
        let h = grp("cyclic:2,2");
        let one = grp("trivial");
        let xs = transitive_bisets(&g, &h, &k);
        let ys = transitive_bisets(&h, &g, &k);
        let zs = transitive_bisets(&g, &one, &k);
        let (x, y, z) = (biset_set(&xs[a % xs.len()]), biset_set(&ys[b % ys.len()]), biset_set(&zs[c % zs.len()]));
        let xy = tensor(&g, &h, &g, &x, &y).unwrap().set;
        let yz = tensor(&h, &g, &one, &y, &z).unwrap().set;
        let left = tensor(&g, &g, &one, &xy, &z).unwrap().set;
        let right = tensor(&g, &h, &one, &x, &yz).unwrap().set;
        prop_assert_eq!(orbit_decompose(&left).unwrap(), orbit_decompose(&right).unwrap());
    }
}

#[test]
fn exhaustive_verification_on_groups_of_order_four() {
    let r = fibered_burnside::setoracle::verify(2, 1, 4).unwrap();
    assert_eq!(r.groups.len(), 4);
    assert!(r.mackey_mismatches.is_empty(), "{:?}", &r.mackey_mismatches[..r.mackey_mismatches.len().min(3)]);
    assert!(r.dot_mismatches.is_empty());
    println!("{} tensor products, {} ring products", r.mackey_checked, r.dot_checked);
}
