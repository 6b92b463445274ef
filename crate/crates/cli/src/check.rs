//! Self-verification suites behind `check`.

use std::sync::Arc;

use fibered_burnside::bisets::{
    decompose_abelian, def, def_idem, delta_embed, ebar_check, ind, ind_idem, inf, inf_idem, iso, iso_idem,
    quotient_group, res, res_idem, subgroup_group, tw, tw_idem, Biset,
};
use fibered_burnside::fibring::{pair_space, RingElement};
use fibered_burnside::functorlat::{
    composition_series, elementary_deflation_constant, frattini_constant, generated_subfunctor, index_set, GroupUniverse,
};
use fibered_burnside::groups::{characters, direct_product, preset_group, Elem, FiniteGroup, Preset};
use fibered_burnside::scalars::{make_field, Field};
use fibered_burnside::setoracle::verify;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

pub const SUITES: [&str; 10] =
    ["idempotents", "species", "oracle", "deflation", "frattini", "index", "series", "uniserial", "ebar", "structural"];

/// Trials per randomized identity.
pub const TRIALS: usize = 100;

pub struct Outcome {
    pub suite: &'static str,
    pub checked: usize,
    pub failure: Option<Value>,
}

type SuiteResult = Result<usize, Value>;

fn grp(s: &str) -> Arc<FiniteGroup> {
    preset_group(&s.parse::<Preset>().expect("preset")).expect("group")
}

fn fld(p: u64, n: u32, q: u64) -> Arc<Field> {
    make_field(p, n, q).expect("field")
}

fn q0(p: u64) -> u64 {
    if p == 2 {
        3
    } else {
        2
    }
}

fn fail(check: &str, detail: Value) -> Value {
    json!({ "check": check, "detail": detail })
}

fn internal(e: impl std::fmt::Display) -> Value {
    json!({ "check": "internal_error", "detail": e.to_string() })
}

pub fn run(names: &[&'static str], seed: u64) -> Vec<Outcome> {
    let mut out: Vec<Outcome> = names
        .par_iter()
        .map(|&suite| {
            let r = match suite {
                "idempotents" => idempotents(),
                "species" => species(seed),
                "oracle" => oracle(),
                "deflation" => deflation(),
                "frattini" => frattini(),
                "index" => index(),
                "series" => series(),
                "uniserial" => uniserial(),
                "ebar" => ebar(),
                "structural" => structural(seed),
                _ => unreachable!("unknown suite"),
            };
            match r {
                Ok(checked) => Outcome { suite, checked, failure: None },
                Err(v) => Outcome { suite, checked: 0, failure: Some(v) },
            }
        })
        .collect();
    out.sort_by_key(|o| SUITES.iter().position(|s| *s == o.suite));
    out
}

const IDEMPOTENT_GROUPS: [&str; 9] = [
    "trivial",
    "cyclic:2,1",
    "cyclic:2,2",
    "elementary_abelian:2,2",
    "dihedral8",
    "quaternion8",
    "cyclic:3,1",
    "cyclic:3,2",
    "elementary_abelian:3,2",
];

/// `e·e′ = δ·e`, `Σe = 1` and `s_j(e_i) = δ_ij`.
fn idempotents() -> SuiteResult {
    let mut checked = 0;
    for s in IDEMPOTENT_GROUPS {
        let g = grp(s);
        let p = g.prime().unwrap_or(2);
        for q in [0, q0(p)] {
            let k = fld(p, 1, q);
            let sp = pair_space(&g, p as u32);
            let n = sp.species_set().len();
            let es: Vec<RingElement> = (0..n).map(|i| sp.primitive_idempotent(i, &k)).collect::<Result<_, _>>().map_err(internal)?;
            let mut sum = RingElement::zero(&g, &k);
            for (i, e) in es.iter().enumerate() {
                sum = sum.add(e).map_err(internal)?;
                for (j, f) in es.iter().enumerate() {
                    let prod = e.mul(f).map_err(internal)?;
                    let want = if i == j { e.clone() } else { RingElement::zero(&g, &k) };
                    if prod != want {
                        return Err(fail("orthogonality", json!({ "group": s, "q": q, "i": i, "j": j })));
                    }
                    let sv = sp.species_value_at(j, e);
                    if sv != if i == j { k.one() } else { k.zero() } {
                        return Err(fail("species_duality", json!({ "group": s, "q": q, "i": i, "j": j, "value": sv.to_string() })));
                    }
                    checked += 2;
                }
            }
            if sum != RingElement::unit(&g, &k) {
                return Err(fail("completeness", json!({ "group": s, "q": q })));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn random_element(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>, k: &Arc<Field>) -> RingElement {
    let pairs = pair_space(g, k.fiber_order() as u32).pairs().to_vec();
    let mut x = RingElement::zero(g, k);
    for _ in 0..rng.gen_range(1..=3) {
        let p = pairs[rng.gen_range(0..pairs.len())].clone();
        x.add_term(p, k.from_integer(rng.gen_range(-2..=2)));
    }
    x
}

/// Species are ring homomorphisms on random elements.
fn species(seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
    let cases = [("cyclic:2,2", fld(2, 2, 0)), ("dihedral8", fld(2, 1, 3)), ("elementary_abelian:3,2", fld(3, 1, 0))];
    for t in 0..TRIALS {
        let (s, k) = &cases[t % cases.len()];
        let g = grp(s);
        let (x, y) = (random_element(&mut rng, &g, k), random_element(&mut rng, &g, k));
        let xy = x.mul(&y).map_err(internal)?;
        let sp = pair_space(&g, k.fiber_order() as u32);
        for i in 0..sp.species_set().len() {
            let lhs = sp.species_value_at(i, &xy);
            let rhs = k.mul(&sp.species_value_at(i, &x), &sp.species_value_at(i, &y));
            if lhs != rhs {
                return Err(fail("species_multiplicative", json!({ "group": s, "x": x.bracket_notation(), "y": y.bracket_notation(), "species": i })));
            }
        }
    }
    Ok(TRIALS)
}

fn oracle() -> SuiteResult {
    let r = verify(2, 1, 4).map_err(internal)?;
    if !r.passed() {
        return Err(fail("oracle", json!({ "mackey": r.mackey_mismatches, "dot": r.dot_mismatches })));
    }
    Ok(r.mackey_checked + r.dot_checked)
}

fn deflation() -> SuiteResult {
    let mut checked = 0;
    for p in [2u64, 3] {
        for r in 1..=3u32 {
            let g = grp(&format!("elementary_abelian:{p},{r}"));
            for q in [0, q0(p)] {
                let k = fld(p, 1, q);
                let sp = pair_space(&g, p as u32);
                for h in (0..g.subgroup_count()).filter(|&h| g.subgroup(h).order() == p as usize) {
                    let qd = quotient_group(&g, h).map_err(internal)?;
                    for x in 0..g.order() as Elem {
                        let (m, _, _) = def_idem(&qd, &sp.canonical_species(g.whole(), x), &k).map_err(internal)?;
                        let want = elementary_deflation_constant(&k, r, x == 0, g.subgroup(h).contains(x));
                        if want.as_ref() != Some(&m) {
                            return Err(fail(
                                "elementary_deflation",
                                json!({ "p": p, "r": r, "q": q, "H": h, "g": x, "generic": m.to_string() }),
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

fn frattini() -> SuiteResult {
    let mut checked = 0;
    for s in ["cyclic:2,2", "dihedral8", "quaternion8"] {
        let g = grp(s);
        for q in [0, 3] {
            let k = fld(2, 1, q);
            let qd = quotient_group(&g, g.frattini()).map_err(internal)?;
            for x in 0..g.order() as Elem {
                let idx = pair_space(&g, 2).canonical_species(g.whole(), x);
                let (m, target, image) = def_idem(&qd, &idx, &k).map_err(internal)?;
                let want = frattini_constant(&g, x, &k);
                let e = pair_space(&qd.quotient, 2).idempotent_of(&target, &k);
                if m != want || m.is_zero() || image != e.scale(&want) {
                    return Err(fail("frattini_deflation", json!({ "group": s, "q": q, "g": x, "generic": m.to_string(), "formula": want.to_string() })));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Index sets against the defining congruence.
fn index() -> SuiteResult {
    let mut checked = 0;
    for (p, q) in [(2u64, 0u64), (2, 3), (2, 5), (2, 7), (3, 2), (3, 5), (3, 7), (5, 2), (5, 3)] {
        let s = index_set(p, q, 8).map_err(internal)?;
        let want: Vec<u32> = (0..=8u32)
            .filter(|&r| r == 0 || if q == 0 { r == 1 } else { (1..r).fold(1u64, |a, _| a * p % q) == 1 % q })
            .collect();
        if s.ranks != want {
            return Err(fail("index_set", json!({ "p": p, "q": q, "got": s.ranks, "want": want })));
        }
        checked += 1;
    }
    Ok(checked)
}

fn universes() -> Vec<(u64, u64, u64, Vec<&'static str>)> {
    vec![(2, 0, 8, vec!["1", "C2"]), (2, 3, 8, vec!["1", "C2", "C2^3"]), (3, 2, 9, vec!["1", "C3", "C3^2"])]
}

fn series() -> SuiteResult {
    let mut checked = 0;
    for (p, q, max, want) in universes() {
        let u = GroupUniverse::up_to_order(&fld(p, 1, q), max).map_err(internal)?;
        let s = composition_series(&u).map_err(internal)?;
        let mins: Vec<&str> = s.minimal.iter().map(|m| u.groups()[m[0]].label()).collect();
        let ok = mins == want
            && s.minimal.iter().all(|m| m.len() == 1)
            && s.is_strict()
            && s.terms.last().is_some_and(|t| t.is_zero())
            && s.quotients.iter().all(|r| {
                r.quotient_dim == 1 && r.generated_by_idempotent && r.twists_trivial && r.automorphisms_trivial
            });
        if !ok {
            return Err(fail("composition_series", json!({ "p": p, "q": q, "minimal": mins, "dims": s.dims() })));
        }
        if p == 2 && q == 0 {
            for t in &s.terms {
                t.verify_closure().map_err(|c| fail("closure", json!({ "source": c.source, "target": c.target, "biset": c.biset })))?;
            }
        }
        checked += s.terms.len();
    }
    Ok(checked)
}

fn uniserial() -> SuiteResult {
    let mut checked = 0;
    for (p, q, max, _) in universes() {
        let u = GroupUniverse::up_to_order(&fld(p, 1, q), max).map_err(internal)?;
        let index = composition_series(&u).map_err(internal)?.index;
        let mut gens = Vec::new();
        for &r in &index.ranks {
            let gi = u.elementary(r).ok_or_else(|| internal(format!("missing rank {r}")))?;
            let e = &u.groups()[gi];
            let sp = pair_space(e, u.modulus());
            let idem = sp.idempotent_of(&sp.canonical_species(e.whole(), 0), u.field());
            gens.push(generated_subfunctor(&u, e, &idem).map_err(internal)?);
        }
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if !a.contains(b) && !b.contains(a) {
                    return Err(fail("uniserial", json!({ "p": p, "q": q, "ranks": index.ranks })));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn ebar() -> SuiteResult {
    let mut checked = 0;
    for (s, k, dim) in [("cyclic:2,1", fld(2, 1, 0), 2), ("cyclic:3,1", fld(3, 1, 0), 6), ("elementary_abelian:2,2", fld(2, 1, 0), 24)] {
        let r = ebar_check(&grp(s), &k).map_err(internal)?;
        if r.dimension != dim || r.expected_dimension != dim || !r.mismatches.is_empty() {
            return Err(fail("ebar", json!({ "group": s, "dimension": r.dimension, "mismatches": r.mismatches })));
        }
        checked += r.products_checked;
    }
    Ok(checked)
}

fn all_bisets(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, k: &Arc<Field>) -> (Arc<fibered_burnside::groups::DirectProduct>, usize) {
    let dp = direct_product(g, h);
    let n = pair_space(&dp.group, k.fiber_order() as u32).dim();
    (dp, n)
}

/// Seeded identities: `Δ` is a ring map, the Frobenius relation, the
/// factorization round trip and closed-form idempotent actions.
fn structural(seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0002);
    let mut checked = 0;

    let k4 = fld(2, 2, 0);
    let c4 = grp("cyclic:2,2");
    for _ in 0..TRIALS {
        let (x, y) = (random_element(&mut rng, &c4, &k4), random_element(&mut rng, &c4, &k4));
        let lhs = delta_embed(&x.mul(&y).map_err(internal)?);
        let rhs = delta_embed(&x).compose(&delta_embed(&y)).map_err(internal)?;
        if lhs != rhs {
            return Err(fail("delta_homomorphism", json!({ "x": x.bracket_notation(), "y": y.bracket_notation() })));
        }
        checked += 1;
    }

    let frob = [("cyclic:2,2", fld(2, 1, 0)), ("dihedral8", fld(2, 1, 0)), ("dihedral8", fld(2, 1, 3)), ("quaternion8", fld(2, 1, 0))];
    for t in 0..TRIALS {
        let (s, k) = &frob[t % frob.len()];
        let g = grp(s);
        let qd = quotient_group(&g, g.center()).map_err(internal)?;
        let (d, i) = (def(&qd, k), inf(&qd, k));
        let x = random_element(&mut rng, &g, k);
        let y = random_element(&mut rng, &qd.quotient, k);
        let lhs = y.mul(&d.act(&x).map_err(internal)?).map_err(internal)?;
        let rhs = d.act(&i.act(&y).map_err(internal)?.mul(&x).map_err(internal)?).map_err(internal)?;
        if lhs != rhs {
            return Err(fail("frobenius", json!({ "group": s, "x": x.bracket_notation(), "y": y.bracket_notation() })));
        }
        checked += 1;
    }

    let k2 = fld(2, 1, 0);
    for (a, b) in [("elementary_abelian:2,2", "elementary_abelian:2,2"), ("elementary_abelian:2,2", "elementary_abelian:2,3")] {
        let (dp, n) = all_bisets(&grp(a), &grp(b), &k2);
        let pairs = pair_space(&dp.group, 2).pairs().to_vec();
        for _ in 0..TRIALS {
            let p = &pairs[rng.gen_range(0..n)];
            let word = decompose_abelian(&dp, p, &k2).map_err(internal)?;
            let product = word.iter().skip(1).try_fold(word[0].biset.clone(), |acc, f| acc.compose(&f.biset)).map_err(internal)?;
            if product != Biset::transitive(&dp, &k2, p) {
                return Err(fail("decompose_round_trip", json!({ "left": a, "right": b, "pair": format!("{p:?}") })));
            }
            checked += 1;
        }
    }

    let groups = [
        ("cyclic:2,2", fld(2, 2, 0)),
        ("elementary_abelian:2,2", fld(2, 1, 3)),
        ("dihedral8", fld(2, 1, 0)),
        ("quaternion8", fld(2, 1, 3)),
        ("elementary_abelian:3,2", fld(3, 1, 2)),
    ];
    for op in ["tw", "iso", "res", "def", "ind", "inf"] {
        for _ in 0..TRIALS {
            let (s, k) = &groups[rng.gen_range(0..groups.len())];
            let g = grp(s);
            let m = k.fiber_order() as u32;
            let sp = pair_space(&g, m);
            let pick = |rng: &mut ChaCha8Rng, n: usize| rng.gen_range(0..n);
            let ok = match op {
                "tw" => {
                    let idx = &sp.species_set()[pick(&mut rng, sp.species_set().len())];
                    let chars = characters(&g, g.whole(), m as u64);
                    let chi = &chars[pick(&mut rng, chars.len())];
                    let e = sp.idempotent_of(idx, k);
                    tw_idem(&g, chi, idx, k) == tw(&g, chi, k).map_err(internal)?.act(&e).map_err(internal)?
                }
                "iso" => {
                    let idx = &sp.species_set()[pick(&mut rng, sp.species_set().len())];
                    let auts = g.automorphisms();
                    let lambda = &auts[pick(&mut rng, auts.len())];
                    let e = sp.idempotent_of(idx, k);
                    iso_idem(&g, lambda, idx, k) == iso(&g, &g, lambda, k).map_err(internal)?.act(&e).map_err(internal)?
                }
                "res" => {
                    let idx = &sp.species_set()[pick(&mut rng, sp.species_set().len())];
                    let sub = subgroup_group(&g, pick(&mut rng, g.subgroup_count()));
                    let e = sp.idempotent_of(idx, k);
                    res_idem(&sub, idx, k) == res(&sub, k).act(&e).map_err(internal)?
                }
                "def" => {
                    let idx = &sp.species_set()[pick(&mut rng, sp.species_set().len())];
                    let normals: Vec<usize> = (0..g.subgroup_count()).filter(|&n| g.is_normal(n)).collect();
                    let qd = quotient_group(&g, normals[pick(&mut rng, normals.len())]).map_err(internal)?;
                    let (mult, target, image) = def_idem(&qd, idx, k).map_err(internal)?;
                    let generic = def(&qd, k).act(&sp.idempotent_of(idx, k)).map_err(internal)?;
                    image == generic && image == pair_space(&qd.quotient, m).idempotent_of(&target, k).scale(&mult)
                }
                "ind" => {
                    let sub = subgroup_group(&g, pick(&mut rng, g.subgroup_count()));
                    let ssp = pair_space(&sub.group, m);
                    let idx = &ssp.species_set()[pick(&mut rng, ssp.species_set().len())];
                    ind_idem(&sub, idx, k) == ind(&sub, k).act(&ssp.idempotent_of(idx, k)).map_err(internal)?
                }
                _ => {
                    let normals: Vec<usize> = (0..g.subgroup_count()).filter(|&n| g.is_normal(n)).collect();
                    let qd = quotient_group(&g, normals[pick(&mut rng, normals.len())]).map_err(internal)?;
                    let qsp = pair_space(&qd.quotient, m);
                    let idx = &qsp.species_set()[pick(&mut rng, qsp.species_set().len())];
                    inf_idem(&qd, idx, k) == inf(&qd, k).act(&qsp.idempotent_of(idx, k)).map_err(internal)?
                }
            };
            if !ok {
                return Err(fail("closed_form_action", json!({ "op": op, "group": s })));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
