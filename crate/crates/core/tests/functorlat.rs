use std::sync::{Arc, OnceLock};

use fibered_burnside::bisets::{def_idem, quotient_group, Biset};
use fibered_burnside::fibring::{pair_space, RingElement};
use fibered_burnside::functorlat::{
    composition_series, deflation_constants, elementary_deflation_constant, frattini_constant, full_functor,
    generated_subfunctor, index_set, kernel_subfunctor, minimal_groups, quotient_report, GroupUniverse, LatticeError,
};
use fibered_burnside::groups::{direct_product, preset_group, Elem, FiniteGroup, Preset};
use fibered_burnside::linalg::nullspace;
use fibered_burnside::scalars::{make_field, Field, Scalar};

fn grp(s: &str) -> Arc<FiniteGroup> {
    preset_group(&s.parse::<Preset>().unwrap()).unwrap()
}

fn universe(p: u64, q: u64, max: u64) -> Arc<GroupUniverse> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<((u64, u64, u64), Arc<GroupUniverse>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut c = cache.lock().unwrap();
    if let Some((_, u)) = c.iter().find(|(key, _)| *key == (p, q, max)) {
        return u.clone();
    }
    let u = GroupUniverse::up_to_order(&make_field(p, 1, q).unwrap(), max).unwrap();
    c.push(((p, q, max), u.clone()));
    u
}

fn idem_e1(u: &GroupUniverse, gi: usize) -> RingElement {
    let g = &u.groups()[gi];
    let sp = pair_space(g, u.modulus());
    sp.idempotent_of(&sp.canonical_species(g.whole(), 0), u.field())
}

fn names(u: &GroupUniverse, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| u.groups()[i].label().to_string()).collect()
}

#[test]
fn index_set_examples() {
    assert_eq!(index_set(2, 0, 5).unwrap().ranks, vec![0, 1]);
    assert_eq!(index_set(3, 2, 4).unwrap().ranks, vec![0, 1, 2, 3, 4]);
    let s = index_set(2, 3, 6).unwrap();
    assert_eq!(s.ranks, vec![0, 1, 3, 5]);
    assert_eq!(s.period, Some(2));
    assert_eq!(index_set(2, 4, 3), Err(LatticeError::BadCharacteristic { p: 2, q: 4 }));
}

#[test]
fn universe_requires_trivial_group_and_one_prime() {
    let k = make_field(2, 1, 0).unwrap();
    assert!(GroupUniverse::new(&k, vec![grp("cyclic:2,1")]).is_err());
    assert!(GroupUniverse::new(&k, vec![grp("trivial"), grp("cyclic:3,1")]).is_err());
    let u = universe(2, 0, 8);
    assert_eq!(u.len(), 9);
    assert!(matches!(u.position(&grp("cyclic:3,1")), Err(LatticeError::GroupNotInUniverse(_))));
}

#[test]
fn hom_matrices_match_generic_action() {
    let u = universe(2, 0, 8);
    let k = u.field().clone();
    for (gi, hi) in [(1usize, 3usize), (3, 1), (7, 2), (2, 7), (6, 3)] {
        let (g, h) = (&u.groups()[gi], &u.groups()[hi]);
        let hom = u.hom(gi, hi);
        let dp = direct_product(h, g);
        let (sg, sh) = (pair_space(g, 2), pair_space(h, 2));
        for x in (0..hom.len()).step_by(7) {
            let b = Biset::transitive(&dp, &k, &hom.pairs[x]);
            for j in 0..sg.dim() {
                let v = sg.basis_element(j, &k);
                let via_matrix = hom.apply(&k, x, &sg.to_vector(&v), sh.dim());
                assert_eq!(via_matrix, sh.to_vector(&b.act(&v).unwrap()));
            }
        }
    }
}

#[test]
fn generated_from_zero_and_from_trivial_unit() {
    let u = universe(2, 0, 8);
    let one = &u.groups()[0];
    let zero = generated_subfunctor(&u, one, &RingElement::zero(one, u.field())).unwrap();
    assert!(zero.is_zero());
    let all = generated_subfunctor(&u, one, &RingElement::unit(one, u.field())).unwrap();
    let dims: Vec<usize> = (0..u.len()).map(|i| u.dim(i)).collect();
    assert_eq!(all.dims(), dims);
    assert!(all.same_as(&full_functor(&u)));
}

#[test]
fn generated_by_c2_idempotent_in_characteristic_zero() {
    let u = universe(2, 0, 8);
    let f = generated_subfunctor(&u, &u.groups()[1], &idem_e1(&u, 1)).unwrap();
    assert_eq!(f.dims()[0], 0);
    assert_eq!(f.dims()[1], 1);
    f.verify_closure().unwrap();
}

/// Oracle: the kernel at `G` of all transitive `(1,G)`-bisets, by the generic action and a nullspace solve.
fn brute_kernel_to_trivial(g: &Arc<FiniteGroup>, k: &Arc<Field>) -> usize {
    let one = grp("trivial");
    let m = k.fiber_order() as u32;
    let dp = direct_product(&one, g);
    let sg = pair_space(g, m);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for x in pair_space(&dp.group, m).pairs() {
        let b = Biset::transitive(&dp, k, x);
        let images: Vec<Vec<Scalar>> =
            (0..sg.dim()).map(|j| pair_space(&one, m).to_vector(&b.act(&sg.basis_element(j, k)).unwrap())).collect();
        rows.push(images.iter().map(|w| w[0].clone()).collect());
    }
    nullspace(k, &rows, sg.dim()).len()
}

#[test]
fn kernel_at_trivial_group() {
    let u = universe(2, 0, 8);
    let k1 = kernel_subfunctor(&full_functor(&u), &u.groups()[0]).unwrap();
    assert_eq!(k1.dims()[0], 0);
    for gi in [1usize, 2, 3, 7] {
        assert_eq!(k1.dims()[gi], brute_kernel_to_trivial(&u.groups()[gi], u.field()), "{}", u.groups()[gi].label());
    }
    // only e_{C₂,1} survives: e_{C₂,g} deflates to a nonzero multiple of e_{1,1}
    assert_eq!(k1.dims()[1], 1);
    assert!(k1.space(1).contains(&pair_space(&u.groups()[1], 2).to_vector(&idem_e1(&u, 1))));
    k1.verify_closure().unwrap();
}

fn check_series(p: u64, q: u64, max: u64, expected_minimal: &[&str]) {
    let u = universe(p, q, max);
    let s = composition_series(&u).unwrap();
    let mins: Vec<Vec<String>> = s.minimal.iter().map(|m| names(&u, m)).collect();
    let want: Vec<Vec<String>> = expected_minimal.iter().map(|x| vec![x.to_string()]).collect();
    assert_eq!(mins, want);
    assert!(s.terms.last().unwrap().is_zero());
    assert!(s.is_strict());
    for (i, r) in s.quotients.iter().enumerate() {
        assert_eq!(r.quotient_dim, 1);
        assert!(r.generated_by_idempotent && r.twists_trivial && r.automorphisms_trivial);
        assert!(s.index.contains(r.elementary_rank.unwrap()));
        // K_i is generated by e_{E,1} at its minimal group
        let gen = generated_subfunctor(&u, &u.groups()[r.group_index], &idem_e1(&u, r.group_index)).unwrap();
        assert!(gen.same_as(&s.terms[i]), "K_{i}");
        // K_{i+1} is the unique maximal subfunctor: any element of K_i outside it generates K_i
        let basis = s.terms[i].basis(r.group_index);
        assert_eq!(basis.len(), 1);
    }
    for t in &s.terms {
        t.verify_closure().unwrap();
    }
}

#[test]
fn series_p2_characteristic_zero() {
    check_series(2, 0, 8, &["1", "C2"]);
}

#[test]
fn series_p2_characteristic_three_skips_rank_two() {
    check_series(2, 3, 8, &["1", "C2", "C2^3"]);
}

#[test]
fn series_p3_characteristic_two() {
    check_series(3, 2, 9, &["1", "C3", "C3^2"]);
}

#[test]
fn series_needs_required_elementary_groups() {
    let k = make_field(2, 1, 3).unwrap();
    let u = GroupUniverse::new(&k, vec![grp("trivial"), grp("cyclic:2,1"), grp("cyclic:2,3")]).unwrap();
    assert!(matches!(composition_series(&u), Err(LatticeError::UniverseTooSmall(3))));
}

#[test]
fn quotient_of_full_functor_at_trivial_group() {
    let u = universe(2, 0, 8);
    let k0 = full_functor(&u);
    let k1 = kernel_subfunctor(&k0, &u.groups()[0]).unwrap();
    let r = quotient_report(&k0, &k1).unwrap();
    assert_eq!((r.group.as_str(), r.quotient_dim), ("1", 1));
    assert!(matches!(minimal_groups(&kernel_subfunctor(&k1, &u.groups()[1]).unwrap()), Err(LatticeError::ZeroFunctor)));
}

#[test]
fn generated_subfunctors_form_a_chain() {
    for (p, q, max) in [(2, 0, 8), (2, 3, 8), (3, 2, 9)] {
        let u = universe(p, q, max);
        let s = composition_series(&u).unwrap();
        let gens: Vec<_> = s
            .index
            .ranks
            .iter()
            .map(|&r| {
                let gi = u.elementary(r).unwrap();
                generated_subfunctor(&u, &u.groups()[gi], &idem_e1(&u, gi)).unwrap()
            })
            .collect();
        for w in gens.windows(2) {
            assert!(w[0].contains(&w[1]) && !w[1].same_as(&w[0]));
        }
    }
}

#[test]
fn minimal_groups_of_idempotent_subfunctors_are_elementary_in_index() {
    for (p, q, max) in [(2, 0, 8), (2, 3, 8), (3, 2, 9)] {
        let u = universe(p, q, max);
        let index = composition_series(&u).unwrap().index;
        for gi in 0..u.len() {
            let g = &u.groups()[gi];
            let sp = pair_space(g, u.modulus());
            let species: Vec<usize> = if g.order() <= 4 || p == 3 {
                (0..sp.species_set().len()).collect()
            } else {
                (0..sp.species_set().len()).filter(|&i| sp.species_set()[i].order() == g.order()).collect()
            };
            for i in species {
                let f = generated_subfunctor(&u, g, &sp.idempotent_unchecked(i, u.field())).unwrap();
                let mins = minimal_groups(&f).unwrap();
                assert_eq!(mins.len(), 1);
                let r = u.groups()[mins[0]].elementary_rank().expect("elementary abelian minimal group");
                assert!(index.contains(r), "{} species {i}: rank {r}", g.label());
            }
        }
    }
}

fn elementary_cases() -> Vec<(u64, u32)> {
    vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]
}

#[test]
fn elementary_deflation_table() {
    for q in [0u64, 1] {
        for (p, r) in elementary_cases() {
            let q = if q == 0 { 0 } else if p == 2 { 3 } else { 2 };
            let k = make_field(p, 1, q).unwrap();
            let g = grp(&format!("elementary_abelian:{p},{r}"));
            for h in (0..g.subgroup_count()).filter(|&h| g.subgroup(h).order() == p as usize) {
                let q_data = quotient_group(&g, h).unwrap();
                for x in 0..g.order() as Elem {
                    let idx = pair_space(&g, p as u32).canonical_species(g.whole(), x);
                    let (m, _, _) = def_idem(&q_data, &idx, &k).unwrap();
                    let want = elementary_deflation_constant(&k, r, x == 0, g.subgroup(h).contains(x)).unwrap();
                    assert_eq!(m, want, "p={p} r={r} q={q} H={h} g={x}");
                }
            }
        }
    }
}

#[test]
fn elementary_deflation_values_by_hand() {
    let k = make_field(2, 1, 0).unwrap();
    // r = 2: g = 1 → −1/2, g ∈ H → 1/2, g ∉ H → 0
    assert_eq!(elementary_deflation_constant(&k, 2, true, true).unwrap(), k.from_rational(-1, 2).unwrap());
    assert_eq!(elementary_deflation_constant(&k, 2, false, true).unwrap(), k.from_rational(1, 2).unwrap());
    assert!(elementary_deflation_constant(&k, 2, false, false).unwrap().is_zero());
    assert!(elementary_deflation_constant(&k, 1, false, false).is_none());
    let f3 = make_field(2, 1, 3).unwrap();
    // (1 − 2)/2 = −1/2 = 1 in F₃
    assert_eq!(elementary_deflation_constant(&f3, 2, true, true).unwrap(), f3.one());
}

#[test]
fn frattini_deflation_matches_closed_form() {
    for q in [0u64, 3] {
        let k = make_field(2, 1, q).unwrap();
        for s in ["cyclic:2,2", "dihedral8", "quaternion8"] {
            let g = grp(s);
            let phi = g.frattini();
            let rows = deflation_constants(&g, 0, &k).unwrap();
            assert!(rows.iter().any(|r| r.normal == phi));
            let qd = quotient_group(&g, phi).unwrap();
            for x in 0..g.order() as Elem {
                let want = frattini_constant(&g, x, &k);
                let idx = pair_space(&g, 2).canonical_species(g.whole(), x);
                let (m, target, image) = def_idem(&qd, &idx, &k).unwrap();
                assert_eq!(m, want, "{s} g={x}");
                assert!(!m.is_zero());
                let e = pair_space(&qd.quotient, 2).idempotent_of(&target, &k);
                assert_eq!(image, e.scale(&m));
            }
        }
    }
}

#[test]
fn frattini_constant_by_hand() {
    // C₄ with A = μ₂: O = Φ = C₂, N_G(G,g) = G, so m = 2/4 · 2 = 1
    let k = make_field(2, 1, 0).unwrap();
    assert_eq!(frattini_constant(&grp("cyclic:2,2"), 0, &k), k.one());
}
