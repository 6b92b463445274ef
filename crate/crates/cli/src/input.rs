//! Parsing of groups, fields, pairs and elements from the command line.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use fibered_burnside::bitset::ElemSet;
use fibered_burnside::fibring::{MonomialPair, RingElement};
use fibered_burnside::groups::{preset_group, Elem, FiniteGroup, Preset};
use fibered_burnside::scalars::{make_field, Field};
use serde::Deserialize;

#[derive(Deserialize)]
struct GroupFile {
    label: String,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    prime: Option<u64>,
}

pub fn group_from_file(path: &Path) -> Result<Arc<FiniteGroup>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f: GroupFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(FiniteGroup::from_table(&f.label, &f.table, f.prime)?)
}

pub fn group_from_preset(s: &str) -> Result<Arc<FiniteGroup>> {
    let preset: Preset = s.parse()?;
    Ok(preset_group(&preset)?)
}

/// A preset `name:params`, or `@path` for a group file.
pub fn group_spec(s: &str) -> Result<Arc<FiniteGroup>> {
    match s.strip_prefix('@') {
        Some(path) => group_from_file(Path::new(path)),
        None => group_from_preset(s),
    }
}

pub fn one_group(preset: Option<&str>, file: Option<&Path>) -> Result<Arc<FiniteGroup>> {
    match (preset, file) {
        (Some(p), None) => group_from_preset(p),
        (None, Some(f)) => group_from_file(f),
        (None, None) => bail!("one of --preset or --group-file is required"),
        (Some(_), Some(_)) => bail!("--preset and --group-file are exclusive"),
    }
}

/// `p,n` as given to `--fiber`.
pub fn fiber(s: &str) -> Result<(u64, u32)> {
    let (p, n) = s.split_once(',').ok_or_else(|| anyhow!("--fiber expects `p,n`, got `{s}`"))?;
    Ok((p.trim().parse()?, n.trim().parse()?))
}

/// The field for `groups`, with `μ_{pⁿ}` defaulting to `n = 1` over the groups' prime.
pub fn field_for(groups: &[&Arc<FiniteGroup>], fiber_arg: Option<&str>, q: u64) -> Result<Arc<Field>> {
    let primes: Vec<u64> = groups.iter().filter(|g| g.order() > 1).filter_map(|g| g.prime()).collect();
    let (p, n) = match fiber_arg {
        Some(s) => fiber(s)?,
        None => (primes.first().copied().or_else(|| groups.first().and_then(|g| g.prime())).unwrap_or(2), 1),
    };
    if let Some(bad) = primes.iter().find(|&&r| r != p) {
        bail!("group prime {bad} differs from fiber prime {p}");
    }
    Ok(make_field(p, n, q)?)
}

#[derive(Deserialize)]
struct PairJson {
    members: Vec<Elem>,
    #[serde(default)]
    values: Option<Vec<u32>>,
}

#[derive(Deserialize)]
struct TermJson {
    members: Vec<Elem>,
    #[serde(default)]
    values: Option<Vec<u32>>,
    #[serde(default = "one")]
    coeff: i64,
}

fn one() -> i64 {
    1
}

fn checked_pair(g: &FiniteGroup, members: &[Elem], values: Option<&[u32]>, modulus: u32) -> Result<MonomialPair> {
    let n = g.order();
    if let Some(&x) = members.iter().find(|&&x| x as usize >= n) {
        bail!("element {x} out of range for {}", g.label());
    }
    let mask = ElemSet::from_indices(n, members.iter().map(|&x| x as usize));
    if mask.len() != members.len() || !g.is_closed(&mask) {
        bail!("members {members:?} do not form a subgroup of {}", g.label());
    }
    let vals: Vec<u32> = match values {
        Some(v) if v.len() == members.len() => v.iter().map(|x| x % modulus).collect(),
        Some(v) => bail!("{} values for {} members", v.len(), members.len()),
        None => vec![0; members.len()],
    };
    let value = |x: Elem| vals[members.iter().position(|&m| m == x).expect("member")];
    for &a in members {
        for &b in members {
            if (value(a) + value(b)) % modulus != value(g.mul(a, b)) {
                bail!("values are not a homomorphism into ℤ/{modulus}");
            }
        }
    }
    Ok(MonomialPair::new(g, members, modulus, value).canonical(g))
}

/// `{"members":[..],"values":[..]}`; missing values mean the trivial character.
pub fn pair(g: &FiniteGroup, json: &str, modulus: u32) -> Result<MonomialPair> {
    let p: PairJson = serde_json::from_str(json).context("pair JSON")?;
    checked_pair(g, &p.members, p.values.as_deref(), modulus)
}

/// A list of pairs with integer `coeff` (default 1).
pub fn element(g: &Arc<FiniteGroup>, field: &Arc<Field>, json: &str) -> Result<RingElement> {
    let terms: Vec<TermJson> = serde_json::from_str(json).context("element JSON")?;
    let m = field.fiber_order() as u32;
    let mut x = RingElement::zero(g, field);
    for t in terms {
        x.add_term(checked_pair(g, &t.members, t.values.as_deref(), m)?, field.from_integer(t.coeff));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_validation() {
        let c4 = group_from_preset("cyclic:2,2").unwrap();
        assert!(pair(&c4, r#"{"members":[0,2],"values":[0,1]}"#, 2).is_ok());
        assert!(pair(&c4, r#"{"members":[0,1]}"#, 2).is_err());
        assert!(pair(&c4, r#"{"members":[0,1,2,3],"values":[0,0,1,0]}"#, 2).is_err());
        assert!(pair(&c4, r#"{"members":[0,9]}"#, 2).is_err());
    }

    #[test]
    fn default_fiber_follows_the_group() {
        let c3 = group_from_preset("cyclic:3,1").unwrap();
        assert_eq!(field_for(&[&c3], None, 0).unwrap().fiber_order(), 3);
        assert!(field_for(&[&c3], Some("2,1"), 0).is_err());
    }
}
