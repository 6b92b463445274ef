use std::sync::Arc;

use fibered_burnside::bisets::{
    decompose_abelian, def, def_idem, delta_embed, ebar_basis, ebar_check, goursat, identity, ind, ind_idem, inf,
    inf_idem, iso, iso_idem, quotient_group, res, res_idem, star_compose, subgroup_group, tw, tw_idem,
    Biset, BisetError, FactorKind,
};
use fibered_burnside::fibring::{pair_space, MonomialPair, RingElement, SpeciesIndex};
use fibered_burnside::groups::{characters, direct_product, preset_group, Elem, FiniteGroup, Preset};
use fibered_burnside::scalars::{make_field, Field};
use proptest::prelude::*;

fn grp(s: &str) -> Arc<FiniteGroup> {
    preset_group(&s.parse::<Preset>().unwrap()).unwrap()
}

fn fld(p: u64, n: u32, q: u64) -> Arc<Field> {
    make_field(p, n, q).unwrap()
}

fn modulus(k: &Field) -> u32 {
    k.fiber_order() as u32
}

fn all_bisets(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, k: &Arc<Field>) -> Vec<Biset> {
    let dp = direct_product(g, h);
    pair_space(&dp.group, modulus(k)).pairs().iter().map(|p| Biset::transitive(&dp, k, p)).collect()
}

fn nontrivial_char(g: &Arc<FiniteGroup>, m: u32) -> fibered_burnside::groups::Character {
    characters(g, g.whole(), m as u64).into_iter().find(|c| !c.is_trivial()).unwrap()
}

fn idem(g: &Arc<FiniteGroup>, idx: &SpeciesIndex, k: &Arc<Field>) -> RingElement {
    pair_space(g, modulus(k)).idempotent_of(idx, k)
}

/// Same element read over another group with the same element encoding.
fn transport(x: &RingElement, to: &Arc<FiniteGroup>, m: u32) -> RingElement {
    let mut out = RingElement::zero(to, x.field());
    for (p, c) in x.terms() {
        let q = MonomialPair::new(to, p.members(), m, |z| p.value(z));
        out.add_term(q.canonical(to), c.clone());
    }
    out
}

#[test]
fn goursat_of_diagonal_and_full_by_trivial() {
    let k = fld(2, 2, 0);
    let g = grp("cyclic:2,2");
    let one = grp("trivial");
    let id = identity(&g, &k);
    let diag = id.element().terms().next().unwrap().0.clone();
    let gd = goursat(id.dp(), &diag, 4);
    assert_eq!((gd.p.len(), gd.q.len(), gd.k.len(), gd.l.len()), (4, 4, 1, 1));
    assert!(gd.eta.iter().all(|&(a, b)| a == b));
    let dp = direct_product(&g, &one);
    let full = MonomialPair::trivial_on_whole(&dp.group);
    let gf = goursat(&dp, &full, 4);
    assert_eq!((gf.p.len(), gf.k.len(), gf.q.len(), gf.l.len()), (4, 4, 1, 1));
}

#[test]
fn goursat_round_trips_on_c2_times_c4() {
    let g = grp("cyclic:2,1");
    let h = grp("cyclic:2,2");
    let dp = direct_product(&g, &h);
    for s in 0..dp.group.subgroup_count() {
        let pair = MonomialPair::trivial_on(&dp.group, s);
        let gd = goursat(&dp, &pair, 2);
        assert_eq!(&gd.reconstruct(&dp), pair.mask());
        // K ⊴ P, L ⊴ Q and η is a bijection between the quotients
        assert_eq!(gd.eta.len() * gd.k.len(), gd.p.len());
        assert_eq!(gd.eta.len() * gd.l.len(), gd.q.len());
        assert_eq!(gd.p.len() * gd.l.len(), pair.order());
    }
}

#[test]
fn goursat_characters_split_on_kernels() {
    let g = grp("elementary_abelian:2,2");
    let dp = direct_product(&g, &g);
    for p in pair_space(&dp.group, 2).pairs() {
        let gd = goursat(&dp, p, 2);
        for &(x, a) in &gd.phi1 {
            for &(y, b) in &gd.phi2 {
                // φ(x,y) = φ₁(x) − φ₂(y)
                assert_eq!(p.value(dp.pair(x, y)), (a + 2 - b) % 2);
            }
        }
    }
}

#[test]
fn star_with_diagonal_is_neutral() {
    let g = grp("cyclic:2,1");
    let h = grp("cyclic:2,2");
    let dp = direct_product(&g, &h);
    let dh = direct_product(&h, &h);
    let dgg = direct_product(&g, &g);
    let diag_h = MonomialPair::new(&dh.group, &(0..4).map(|x| dh.pair(x, x)).collect::<Vec<_>>(), 2, |_| 0);
    let diag_g = MonomialPair::new(&dgg.group, &(0..2).map(|x| dgg.pair(x, x)).collect::<Vec<_>>(), 2, |_| 0);
    for u in pair_space(&dp.group, 2).pairs() {
        assert_eq!(star_compose(&dp, u, &dh, &diag_h, &dp, 2).unwrap(), *u);
        assert_eq!(star_compose(&dgg, &diag_g, &dp, u, &dp, 2).unwrap(), *u);
    }
}

#[test]
fn star_of_full_by_trivial_factors() {
    let g = grp("cyclic:2,1");
    let h = grp("cyclic:2,2");
    let kk = grp("elementary_abelian:2,2");
    let (d1, d2, d3) = (direct_product(&g, &h), direct_product(&h, &kk), direct_product(&g, &kk));
    let u = MonomialPair::new(&d1.group, &[d1.pair(0, 0), d1.pair(1, 0)], 2, |z| d1.split(z).0);
    let v_members: Vec<Elem> = (0..4).map(|x| d2.pair(0, x)).collect();
    let v = MonomialPair::new(&d2.group, &v_members, 2, |z| d2.split(z).1 & 1);
    let w = star_compose(&d1, &u, &d2, &v, &d3, 2).unwrap();
    assert_eq!(w.order(), 8);
    for z in 0..8 {
        let (a, b) = d3.split(z);
        assert_eq!(w.value(z), (a + (b & 1)) % 2);
    }
}

#[test]
fn star_detects_ill_defined_character() {
    let one = grp("trivial");
    let c2 = grp("cyclic:2,1");
    let (d1, d2, d3) = (direct_product(&one, &c2), direct_product(&c2, &one), direct_product(&one, &one));
    let u = MonomialPair::new(&d1.group, &[0, 1], 2, |z| z);
    let v = MonomialPair::trivial_on_whole(&d2.group);
    assert!(matches!(star_compose(&d1, &u, &d2, &v, &d3, 2), Err(BisetError::IllDefinedCharacter(_))));
}

#[test]
fn identity_is_two_sided() {
    let k = fld(2, 2, 0);
    let g = grp("cyclic:2,1");
    let h = grp("cyclic:2,2");
    for x in all_bisets(&g, &h, &k) {
        assert_eq!(identity(&g, &k).compose(&x).unwrap(), x);
        assert_eq!(x.compose(&identity(&h, &k)).unwrap(), x);
    }
}

#[test]
fn twists_compose_additively() {
    let k = fld(2, 2, 0);
    for s in ["cyclic:2,2", "elementary_abelian:2,2"] {
        let g = grp(s);
        let chars = characters(&g, g.whole(), 4);
        for a in &chars {
            for b in &chars {
                let vals: Vec<u16> = (0..g.order()).map(|x| ((a.raw(x as Elem) + b.raw(x as Elem)) % 4) as u16).collect();
                let sum = fibered_burnside::groups::Character::from_values(&g, g.whole(), vals, 4).unwrap();
                let lhs = tw(&g, a, &k).unwrap().compose(&tw(&g, b, &k).unwrap()).unwrap();
                assert_eq!(lhs, tw(&g, &sum, &k).unwrap());
            }
        }
        let zero = chars.iter().find(|c| c.is_trivial()).unwrap();
        assert_eq!(tw(&g, zero, &k).unwrap(), identity(&g, &k));
    }
}

#[test]
fn identity_isomorphism_is_identity() {
    let k = fld(2, 1, 0);
    let g = grp("dihedral8");
    let id: Vec<Elem> = (0..8).collect();
    assert_eq!(iso(&g, &g, &id, &k).unwrap(), identity(&g, &k));
    let mut bad = id.clone();
    bad.swap(1, 4);
    assert!(iso(&g, &g, &bad, &k).is_err());
}

#[test]
fn restriction_after_induction_through_trivial_group() {
    let k = fld(2, 1, 0);
    let c2 = grp("cyclic:2,1");
    let sub = subgroup_group(&c2, c2.trivial());
    let x = res(&sub, &k).compose(&ind(&sub, &k)).unwrap();
    let unit = RingElement::unit(&x.dp().group, &k);
    assert_eq!(*x.element(), unit.scale(&k.from_integer(2)));
}

#[test]
fn deflation_after_inflation_is_identity() {
    let k = fld(2, 1, 0);
    for s in ["cyclic:2,2", "dihedral8", "quaternion8", "elementary_abelian:2,3"] {
        let g = grp(s);
        for n in 0..g.subgroup_count() {
            if !g.is_normal(n) {
                continue;
            }
            let q = quotient_group(&g, n).unwrap();
            let x = def(&q, &k).compose(&inf(&q, &k)).unwrap();
            assert_eq!(x, identity(&q.quotient, &k), "{s} / {n}");
        }
    }
}

#[test]
fn identity_acts_trivially() {
    let k = fld(2, 1, 3);
    let g = grp("dihedral8");
    for p in pair_space(&g, 2).pairs() {
        let v = RingElement::basis(&g, &k, p);
        assert_eq!(identity(&g, &k).act(&v).unwrap(), v);
    }
}

#[test]
fn delta_action_is_the_regular_module() {
    let k = fld(2, 1, 0);
    for s in ["cyclic:2,2", "dihedral8"] {
        let g = grp(s);
        let pairs = pair_space(&g, 2).pairs().to_vec();
        for a in &pairs {
            let x = RingElement::basis(&g, &k, a);
            let dx = delta_embed(&x);
            for b in &pairs {
                let y = RingElement::basis(&g, &k, b);
                assert_eq!(dx.act(&y).unwrap(), x.mul(&y).unwrap());
            }
        }
    }
}

#[test]
fn restriction_of_sign_character_to_trivial_group() {
    let k = fld(2, 1, 0);
    let c2 = grp("cyclic:2,1");
    let sub = subgroup_group(&c2, c2.trivial());
    let v = RingElement::basis(&c2, &k, &MonomialPair::new(&c2, &[0, 1], 2, |x| x));
    assert_eq!(res(&sub, &k).act(&v).unwrap(), RingElement::unit(&sub.group, &k));
}

#[test]
fn action_agrees_with_composition_into_trivial_group() {
    let k = fld(2, 1, 0);
    let one = grp("trivial");
    let g = grp("cyclic:2,2");
    let h = grp("elementary_abelian:2,2");
    let dg1 = direct_product(&g, &one);
    let dh1 = direct_product(&h, &one);
    for x in all_bisets(&h, &g, &k) {
        for p in pair_space(&g, 2).pairs() {
            let v = RingElement::basis(&g, &k, p);
            let as_biset = Biset::from_element(dg1.clone(), transport(&v, &dg1.group, 2)).unwrap();
            let composed = x.compose(&as_biset).unwrap();
            assert_eq!(transport(composed.element(), &dh1.group, 2), transport(&x.act(&v).unwrap(), &dh1.group, 2));
        }
    }
}

#[test]
fn delta_of_trivial_pair_on_c2() {
    let k = fld(2, 1, 0);
    let c2 = grp("cyclic:2,1");
    let x = delta_embed(&RingElement::basis(&c2, &k, &MonomialPair::trivial_on(&c2, c2.trivial())));
    let (p, c) = x.element().terms().next().unwrap();
    assert_eq!(x.element().term_count(), 1);
    assert_eq!((p.order(), c.clone()), (1, k.one()));
    assert_eq!(delta_embed(&RingElement::unit(&c2, &k)), identity(&c2, &k));
}

#[test]
fn frobenius_relation_on_center_quotients() {
    for (s, k) in [("cyclic:2,2", fld(2, 1, 0)), ("dihedral8", fld(2, 1, 0)), ("dihedral8", fld(2, 1, 3))] {
        let g = grp(s);
        let q = quotient_group(&g, g.center()).unwrap();
        let (d, i) = (def(&q, &k), inf(&q, &k));
        let xs = pair_space(&g, 2).pairs().to_vec();
        let ys = pair_space(&q.quotient, 2).pairs().to_vec();
        for a in &ys {
            let y = RingElement::basis(&q.quotient, &k, a);
            let iy = i.act(&y).unwrap();
            for b in &xs {
                let x = RingElement::basis(&g, &k, b);
                let lhs = y.mul(&d.act(&x).unwrap()).unwrap();
                let rhs = d.act(&iy.mul(&x).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{s}: {a:?} {b:?}");
            }
        }
    }
}

fn word_product(factors: &[fibered_burnside::bisets::Factor]) -> Biset {
    factors.iter().skip(1).fold(factors[0].biset.clone(), |acc, f| acc.compose(&f.biset).unwrap())
}

#[test]
fn decomposition_round_trips() {
    let cases = [
        ("elementary_abelian:2,1", "elementary_abelian:2,1", fld(2, 1, 0)),
        ("elementary_abelian:2,2", "elementary_abelian:2,2", fld(2, 1, 0)),
        ("elementary_abelian:2,2", "elementary_abelian:2,3", fld(2, 1, 0)),
        ("cyclic:2,1", "cyclic:2,2", fld(2, 2, 0)),
        ("cyclic:2,2", "elementary_abelian:2,2", fld(2, 2, 3)),
        ("cyclic:3,1", "elementary_abelian:3,2", fld(3, 1, 2)),
    ];
    for (a, b, k) in cases {
        let (g, h) = (grp(a), grp(b));
        let dp = direct_product(&g, &h);
        for p in pair_space(&dp.group, modulus(&k)).pairs() {
            let word = decompose_abelian(&dp, p, &k).unwrap();
            let kinds: Vec<FactorKind> = word.iter().map(|f| f.kind).collect();
            use FactorKind::*;
            assert_eq!(kinds, [Ind, Tw, Inf, Iso, Def, Tw, Res]);
            assert_eq!(word_product(&word), Biset::transitive(&dp, &k, p), "{a} x {b}: {p:?}");
        }
    }
}

#[test]
fn decomposition_of_identity_is_identity_like() {
    let k = fld(2, 1, 0);
    let g = grp("elementary_abelian:2,2");
    let id = identity(&g, &k);
    let diag = id.element().terms().next().unwrap().0.clone();
    let word = decompose_abelian(id.dp(), &diag, &k).unwrap();
    for f in &word {
        assert_eq!(f.biset.left().order(), 4);
        assert_eq!(f.biset.right().order(), 4);
    }
    assert_eq!(word_product(&word), id);
}

#[test]
fn decomposition_rejects_bad_inputs() {
    let k = fld(2, 1, 0);
    let d8 = grp("dihedral8");
    let dp = direct_product(&d8, &d8);
    let p = MonomialPair::trivial_on_whole(&dp.group);
    assert!(matches!(decompose_abelian(&dp, &p, &k), Err(BisetError::NotAbelian(_))));
    let c4 = grp("cyclic:2,2");
    let dp = direct_product(&c4, &c4);
    let p = MonomialPair::trivial_on_whole(&dp.group);
    assert!(matches!(decompose_abelian(&dp, &p, &k), Err(BisetError::NotSplitting(..))));
}

#[test]
fn closed_form_twist_on_c2() {
    let k = fld(2, 1, 0);
    let c2 = grp("cyclic:2,1");
    let chi = nontrivial_char(&c2, 2);
    let sp = pair_space(&c2, 2);
    let idx = sp.canonical_species(c2.whole(), 1);
    let e = idem(&c2, &idx, &k);
    assert_eq!(tw_idem(&c2, &chi, &idx, &k), e.neg());
    assert_eq!(tw(&c2, &chi, &k).unwrap().act(&e).unwrap(), e.neg());
}

#[test]
fn closed_form_restriction_and_induction_through_trivial_group() {
    let k = fld(2, 1, 0);
    let c2 = grp("cyclic:2,1");
    let sub = subgroup_group(&c2, c2.trivial());
    let one = &sub.group;
    let e1 = pair_space(one, 2).species_set()[0].clone();
    let ec2 = pair_space(&c2, 2).canonical_species(c2.trivial(), 0);
    assert_eq!(res_idem(&sub, &ec2, &k), idem(one, &e1, &k));
    assert_eq!(res(&sub, &k).act(&idem(&c2, &ec2, &k)).unwrap(), idem(one, &e1, &k));
    let up = ind_idem(&sub, &e1, &k);
    assert_eq!(up, idem(&c2, &ec2, &k).scale(&k.from_integer(2)));
    assert_eq!(ind(&sub, &k).act(&idem(one, &e1, &k)).unwrap(), up);
}

#[test]
fn closed_form_deflation_of_c2_vanishes() {
    let k = fld(2, 1, 0);
    let c2 = grp("cyclic:2,1");
    let q = quotient_group(&c2, c2.whole()).unwrap();
    let idx = pair_space(&c2, 2).canonical_species(c2.whole(), 0);
    let (m, _, image) = def_idem(&q, &idx, &k).unwrap();
    assert!(m.is_zero());
    assert!(image.is_zero());
}

fn test_groups() -> Vec<(&'static str, Arc<Field>)> {
    vec![
        ("cyclic:2,1", fld(2, 1, 0)),
        ("cyclic:2,2", fld(2, 2, 0)),
        ("elementary_abelian:2,2", fld(2, 1, 3)),
        ("dihedral8", fld(2, 1, 0)),
        ("quaternion8", fld(2, 1, 3)),
        ("elementary_abelian:2,3", fld(2, 1, 0)),
        ("cyclic:3,1", fld(3, 1, 0)),
        ("elementary_abelian:3,2", fld(3, 1, 2)),
    ]
}

#[test]
fn closed_forms_match_generic_action() {
    for (s, k) in test_groups() {
        let g = grp(s);
        let m = modulus(&k);
        let sp = pair_space(&g, m);
        let species = sp.species_set().to_vec();
        for idx in &species {
            let e = idem(&g, idx, &k);
            for chi in characters(&g, g.whole(), m as u64) {
                assert_eq!(tw_idem(&g, &chi, idx, &k), tw(&g, &chi, &k).unwrap().act(&e).unwrap(), "{s} tw");
            }
            for lambda in g.automorphisms() {
                assert_eq!(iso_idem(&g, &lambda, idx, &k), iso(&g, &g, &lambda, &k).unwrap().act(&e).unwrap(), "{s} iso");
            }
            for sidx in 0..g.subgroup_count() {
                let sub = subgroup_group(&g, sidx);
                assert_eq!(res_idem(&sub, idx, &k), res(&sub, &k).act(&e).unwrap(), "{s} res {sidx}");
                if g.is_normal(sidx) {
                    let q = quotient_group(&g, sidx).unwrap();
                    let (mult, target, image) = def_idem(&q, idx, &k).unwrap();
                    assert_eq!(image, idem(&q.quotient, &target, &k).scale(&mult), "{s} def {sidx}");
                }
            }
        }
        for sidx in 0..g.subgroup_count() {
            let sub = subgroup_group(&g, sidx);
            for idx in pair_space(&sub.group, m).species_set() {
                let e = idem(&sub.group, idx, &k);
                assert_eq!(ind_idem(&sub, idx, &k), ind(&sub, &k).act(&e).unwrap(), "{s} ind {sidx}");
            }
            if g.is_normal(sidx) {
                let q = quotient_group(&g, sidx).unwrap();
                for idx in pair_space(&q.quotient, m).species_set() {
                    let e = idem(&q.quotient, idx, &k);
                    assert_eq!(inf_idem(&q, idx, &k), inf(&q, &k).act(&e).unwrap(), "{s} inf {sidx}");
                }
            }
        }
    }
}

#[test]
fn ebar_dimensions_and_rule() {
    let c2 = ebar_check(&grp("cyclic:2,1"), &fld(2, 1, 0)).unwrap();
    assert_eq!((c2.dimension, c2.expected_dimension), (2, 2));
    assert!(c2.mismatches.is_empty());
    let c3 = ebar_check(&grp("cyclic:3,1"), &fld(3, 1, 0)).unwrap();
    assert_eq!((c3.dimension, c3.expected_dimension), (6, 6));
    assert!(c3.mismatches.is_empty(), "{:?}", c3.mismatches);
    assert_eq!(c3.composition_rule_mismatches, 0);
}

#[test]
fn ebar_c3_table_is_a_nonabelian_group_of_order_six() {
    let r = ebar_check(&grp("cyclic:3,1"), &fld(3, 1, 2)).unwrap();
    let n = r.table.len();
    let t: Vec<Vec<usize>> = r.table.iter().map(|row| row.iter().map(|x| x.unwrap()).collect()).collect();
    // closed, associative, with an identity, each row a permutation, not commutative
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                assert_eq!(t[t[a][b]][c], t[a][t[b][c]]);
            }
        }
        let mut row = t[a].clone();
        row.sort_unstable();
        assert_eq!(row, (0..n).collect::<Vec<_>>());
    }
    assert!((0..n).any(|e| (0..n).all(|x| t[e][x] == x && t[x][e] == x)));
    assert!((0..n).any(|a| (0..n).any(|b| t[a][b] != t[b][a])));
}

#[test]
fn ebar_on_klein_four_distinguishes_the_two_readings() {
    let g = grp("elementary_abelian:2,2");
    let r = ebar_check(&g, &fld(2, 1, 0)).unwrap();
    assert_eq!(r.dimension, 4 * 6);
    assert!(r.mismatches.is_empty());
    assert!(r.composition_rule_mismatches > 0);
}

#[test]
fn ebar_rejects_non_abelian_groups() {
    assert!(matches!(ebar_basis(&grp("dihedral8"), &fld(2, 2, 0)), Err(BisetError::NotAbelian(_))));
}

fn sample(v: &[Biset], i: usize) -> Biset {
    v[i % v.len()].clone()
}

fn random_element(g: &Arc<FiniteGroup>, k: &Arc<Field>, picks: &[(usize, i8)]) -> RingElement {
    let pairs = pair_space(g, modulus(k)).pairs().to_vec();
    let mut x = RingElement::zero(g, k);
    for &(i, c) in picks {
        x.add_term(pairs[i % pairs.len()].clone(), k.from_integer(c as i64));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in 0usize..1000, b in 0usize..1000, c in 0usize..1000) {
        let k = fld(2, 1, 0);
        let (c2, c4, e4) = (grp("cyclic:2,1"), grp("cyclic:2,2"), grp("elementary_abelian:2,2"));
        let x = sample(&all_bisets(&c2, &c4, &k), a);
        let y = sample(&all_bisets(&c4, &e4, &k), b);
        let z = sample(&all_bisets(&e4, &c2, &k), c);
        prop_assert_eq!(x.compose(&y).unwrap().compose(&z).unwrap(), x.compose(&y.compose(&z).unwrap()).unwrap());
    }

    #[test]
    fn delta_is_a_ring_homomorphism(
        xs in proptest::collection::vec((0usize..100, -3i8..4), 1..4),
        ys in proptest::collection::vec((0usize..100, -3i8..4), 1..4),
    ) {
        let k = fld(2, 2, 0);
        let g = grp("cyclic:2,2");
        let (x, y) = (random_element(&g, &k, &xs), random_element(&g, &k, &ys));
        prop_assert_eq!(delta_embed(&x.mul(&y).unwrap()), delta_embed(&x).compose(&delta_embed(&y)).unwrap());
    }

    #[test]
    fn action_is_compatible_with_composition(a in 0usize..1000, b in 0usize..1000, c in 0usize..100) {
        let k = fld(2, 1, 0);
        let (c2, c4, e4) = (grp("cyclic:2,1"), grp("cyclic:2,2"), grp("elementary_abelian:2,2"));
        let x = sample(&all_bisets(&c2, &c4, &k), a);
        let y = sample(&all_bisets(&c4, &e4, &k), b);
        let v = random_element(&e4, &k, &[(c, 1)]);
        prop_assert_eq!(x.compose(&y).unwrap().act(&v).unwrap(), x.act(&y.act(&v).unwrap()).unwrap());
    }
}
