//! The `group`, `ring`, `biset`, `lattice` and `oracle` commands.

use std::sync::Arc;

use anyhow::{anyhow, bail};
use fibered_burnside::bisets::{decompose_abelian, ebar_check, mackey_product, Biset};
use fibered_burnside::fibring::{pair_space, MonomialPair, RingElement, SpeciesIndex};
use fibered_burnside::functorlat::{composition_series, deflation_constants, frattini_constant, index_set, GroupUniverse};
use fibered_burnside::groups::{direct_product, Elem, FiniteGroup};
use fibered_burnside::scalars::{make_field, Field};
use fibered_burnside::setoracle::verify;
use serde_json::{json, Value};

use crate::output::{Cell, Table};

/// Exit 1 carries a machine-readable counterexample; exit 2 is bad input.
pub enum CmdError {
    Input(anyhow::Error),
    Failed { tables: Vec<Table>, report: Value },
}

impl<E: Into<anyhow::Error>> From<E> for CmdError {
    fn from(e: E) -> Self {
        CmdError::Input(e.into())
    }
}

pub type CmdResult = Result<Vec<Table>, CmdError>;

pub fn pair_cell(g: &FiniteGroup, p: &MonomialPair) -> Cell {
    Cell::Pair { bracket: p.bracket(g), group: g.label().to_string() }
}

pub fn species_label(idx: &SpeciesIndex) -> String {
    let mem: Vec<String> = idx.members().iter().map(|x| x.to_string()).collect();
    format!("({{{}}},{})", mem.join(","), idx.element())
}

fn element_table(title: String, x: &RingElement) -> Table {
    let mut t = Table::new(title, &["pair", "coefficient"]);
    for (p, c) in x.terms() {
        t.push(vec![pair_cell(x.group(), p), c.to_string().into()]);
    }
    t
}

fn members(set: &[Elem]) -> String {
    let m: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", m.join(","))
}

pub fn group_describe(g: &Arc<FiniteGroup>) -> CmdResult {
    let mut t = Table::new(format!("group {}", g.label()), &["property", "value"]);
    let rank = g.elementary_rank().map_or("-".to_string(), |r| r.to_string());
    let rows: Vec<(&str, Cell)> = vec![
        ("label", g.label().into()),
        ("order", g.order().into()),
        ("prime", g.prime().map_or("-".to_string(), |p| p.to_string()).into()),
        ("abelian", g.is_abelian().into()),
        ("exponent", (g.exponent() as usize).into()),
        ("subgroups", g.subgroup_count().into()),
        ("center_order", g.subgroup(g.center()).order().into()),
        ("frattini_order", g.subgroup(g.frattini()).order().into()),
        ("elementary_rank", rank.into()),
        ("automorphisms", g.automorphisms().len().into()),
    ];
    for (k, v) in rows {
        t.push(vec![k.into(), v]);
    }
    Ok(vec![t])
}

pub fn group_subgroups(g: &Arc<FiniteGroup>) -> CmdResult {
    let mut t = Table::new(format!("subgroups of {}", g.label()), &["index", "order", "members", "normal", "class_rep"]);
    for s in 0..g.subgroup_count() {
        let sub = g.subgroup(s);
        t.push(vec![
            s.into(),
            sub.order().into(),
            members(sub.members()).into(),
            g.is_normal(s).into(),
            g.subgroup_class_rep(s).0.into(),
        ]);
    }
    Ok(vec![t])
}

pub fn ring_pairs(g: &Arc<FiniteGroup>, k: &Arc<Field>) -> CmdResult {
    let sp = pair_space(g, k.fiber_order() as u32);
    let mut t = Table::new(format!("pairs of {}", g.label()), &["index", "order", "trivial_character", "pair"]);
    for (i, p) in sp.pairs().iter().enumerate() {
        t.push(vec![i.into(), p.order().into(), p.is_trivial_character().into(), pair_cell(g, p)]);
    }
    Ok(vec![t])
}

fn pair_columns(g: &FiniteGroup, pairs: &[MonomialPair], first: &str) -> Vec<String> {
    std::iter::once(first.to_string()).chain(pairs.iter().map(|p| format!("{}_{}", p.bracket(g), g.label()))).collect()
}

pub fn ring_species(g: &Arc<FiniteGroup>, k: &Arc<Field>) -> CmdResult {
    let sp = pair_space(g, k.fiber_order() as u32);
    let mut t = Table::with_columns(format!("species table of {}", g.label()), pair_columns(g, sp.pairs(), "species"));
    let m = sp.species_matrix(k);
    for (i, idx) in sp.species_set().iter().enumerate() {
        let mut row: Vec<Cell> = vec![species_label(idx).into()];
        row.extend(m[i].iter().map(|c| Cell::from(c.to_string())));
        t.push(row);
    }
    Ok(vec![t])
}

pub fn ring_idempotents(g: &Arc<FiniteGroup>, k: &Arc<Field>) -> CmdResult {
    let sp = pair_space(g, k.fiber_order() as u32);
    let mut t = Table::with_columns(format!("primitive idempotents of {}", g.label()), pair_columns(g, sp.pairs(), "species"));
    for (i, idx) in sp.species_set().iter().enumerate() {
        let e = sp.primitive_idempotent(i, k)?;
        let mut row: Vec<Cell> = vec![species_label(idx).into()];
        row.extend(sp.to_vector(&e).iter().map(|c| Cell::from(c.to_string())));
        t.push(row);
    }
    Ok(vec![t])
}

pub fn ring_multiply(x: &RingElement, y: &RingElement) -> CmdResult {
    Ok(vec![element_table(format!("product in B({})", x.group().label()), &x.mul(y)?)])
}

pub fn biset_mackey(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    kk: &Arc<FiniteGroup>,
    k: &Arc<Field>,
    x: &MonomialPair,
    y: &MonomialPair,
) -> CmdResult {
    let bx = Biset::transitive(&direct_product(g, h), k, x);
    let by = Biset::transitive(&direct_product(h, kk), k, y);
    let z = mackey_product(&bx, &by)?;
    Ok(vec![element_table(format!("tensor product over {}", h.label()), z.element())])
}

pub fn biset_decompose(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, k: &Arc<Field>, p: &MonomialPair) -> CmdResult {
    let dp = direct_product(g, h);
    let word = decompose_abelian(&dp, p, k)?;
    let mut t = Table::new(format!("factorization over {}x{}", g.label(), h.label()), &["step", "kind", "left", "right", "element"]);
    for (i, f) in word.iter().enumerate() {
        t.push(vec![
            i.into(),
            format!("{:?}", f.kind).into(),
            f.biset.left().label().into(),
            f.biset.right().label().into(),
            f.biset.element().bracket_notation().into(),
        ]);
    }
    let product = word.iter().skip(1).try_fold(word[0].biset.clone(), |acc, f| acc.compose(&f.biset))?;
    let want = Biset::transitive(&dp, k, p);
    if product != want {
        let report = json!({
            "check": "decompose_round_trip",
            "pair": format!("{p:?}"),
            "product": product.element().bracket_notation(),
            "expected": want.element().bracket_notation(),
        });
        return Err(CmdError::Failed { tables: vec![t], report });
    }
    Ok(vec![t])
}

pub fn biset_act(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, k: &Arc<Field>, p: &MonomialPair, v: &RingElement) -> CmdResult {
    let b = Biset::transitive(&direct_product(g, h), k, p);
    Ok(vec![element_table(format!("image in B({})", g.label()), &b.act(v)?)])
}

pub fn biset_ebar(g: &Arc<FiniteGroup>, k: &Arc<Field>) -> CmdResult {
    let r = ebar_check(g, k)?;
    let mut t = Table::new(format!("Ebar of {}", g.label()), &["property", "value"]);
    t.push(vec!["dimension".into(), r.dimension.into()]);
    t.push(vec!["expected_dimension".into(), r.expected_dimension.into()]);
    t.push(vec!["products_checked".into(), r.products_checked.into()]);
    t.push(vec!["rule_mismatches".into(), r.mismatches.len().into()]);
    t.push(vec!["composition_reading_mismatches".into(), r.composition_rule_mismatches.into()]);
    if !r.mismatches.is_empty() || r.dimension != r.expected_dimension {
        let report = json!({ "check": "ebar_rule", "group": g.label(), "mismatches": r.mismatches });
        return Err(CmdError::Failed { tables: vec![t], report });
    }
    Ok(vec![t])
}

pub fn lattice_index(p: u64, q: u64, rmax: u32) -> CmdResult {
    let s = index_set(p, q, rmax)?;
    let mut t = Table::new(format!("index set p={p} q={q}"), &["rank"]);
    for r in s.ranks {
        t.push(vec![(r as usize).into()]);
    }
    Ok(vec![t])
}

pub fn lattice_series(p: u64, n: u32, q: u64, max_order: u64) -> CmdResult {
    let k = make_field(p, n, q)?;
    let u = GroupUniverse::up_to_order(&k, max_order)?;
    let s = composition_series(&u)?;
    let labels: Vec<String> = u.groups().iter().map(|g| g.label().to_string()).collect();
    let mut chain = Table::new(
        format!("composition series p={p} n={n} q={q} max_order={max_order}"),
        &["term", "minimal_groups", "elementary_rank", "quotient_dim", "generated_by_idempotent", "twists_trivial", "automorphisms_trivial"],
    );
    for (i, r) in s.quotients.iter().enumerate() {
        let mins: Vec<&str> = s.minimal[i].iter().map(|&j| labels[j].as_str()).collect();
        chain.push(vec![
            format!("K{i}").into(),
            mins.join(" ").into(),
            r.elementary_rank.map_or("-".into(), |x| x.to_string()).into(),
            r.quotient_dim.into(),
            r.generated_by_idempotent.into(),
            r.twists_trivial.into(),
            r.automorphisms_trivial.into(),
        ]);
    }
    let cols: Vec<String> = std::iter::once("term".to_string()).chain(labels.iter().cloned()).collect();
    let mut dims = Table::with_columns("dimensions", cols);
    for (i, d) in s.dims().iter().enumerate() {
        let mut row: Vec<Cell> = vec![format!("K{i}").into()];
        row.extend(d.iter().map(|&x| Cell::from(x)));
        dims.push(row);
    }
    let ok = s.is_strict()
        && s.terms.last().is_some_and(|t| t.is_zero())
        && s.quotients.iter().all(|r| r.quotient_dim == 1 && r.generated_by_idempotent);
    if !ok {
        let report = json!({ "check": "composition_series", "dims": s.dims() });
        return Err(CmdError::Failed { tables: vec![chain, dims], report });
    }
    Ok(vec![chain, dims])
}

pub fn lattice_deflation(g: &Arc<FiniteGroup>, k: &Arc<Field>, x: Elem) -> CmdResult {
    if x as usize >= g.order() {
        return Err(anyhow!("element {x} out of range").into());
    }
    let rows = deflation_constants(g, x, k)?;
    let mut t = Table::new(format!("Def of e_{{G,{x}}} over {}", g.label()), &["normal", "normal_order", "m"]);
    for r in &rows {
        t.push(vec![r.normal.into(), r.normal_order.into(), r.m_text.clone().into()]);
    }
    let phi = g.frattini();
    let want = frattini_constant(g, x, k);
    if let Some(r) = rows.iter().find(|r| r.normal == phi) {
        if r.m != want {
            let report = json!({ "check": "frattini_constant", "group": g.label(), "g": x, "generic": r.m_text, "formula": want.to_string() });
            return Err(CmdError::Failed { tables: vec![t], report });
        }
    }
    Ok(vec![t])
}

pub fn oracle_verify(p: u64, n: u32, max_order: u64) -> CmdResult {
    if max_order < 1 || !is_power_of(max_order, p) {
        bail_input(format!("--max-order {max_order} is not a power of {p}"))?;
    }
    let r = verify(p, n, max_order)?;
    let mut t = Table::new(format!("set-level oracle p={p} n={n} max_order={max_order}"), &["property", "value"]);
    t.push(vec!["groups".into(), r.groups.join(" ").into()]);
    t.push(vec!["mackey_checked".into(), r.mackey_checked.into()]);
    t.push(vec!["mackey_mismatches".into(), r.mackey_mismatches.len().into()]);
    t.push(vec!["dot_checked".into(), r.dot_checked.into()]);
    t.push(vec!["dot_mismatches".into(), r.dot_mismatches.len().into()]);
    t.push(vec!["discarded_orbits".into(), r.discarded_orbits.into()]);
    if !r.passed() {
        let report = json!({ "check": "oracle", "mackey": r.mackey_mismatches, "dot": r.dot_mismatches });
        return Err(CmdError::Failed { tables: vec![t], report });
    }
    Ok(vec![t])
}

pub fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

fn bail_input(msg: String) -> anyhow::Result<()> {
    bail!(msg)
}
