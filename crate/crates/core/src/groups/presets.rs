//! Named groups used throughout: cyclic, elementary abelian, direct products,
//! `D₈`, `Q₈` and the extraspecial group of order `p³` and exponent `p`.

use std::str::FromStr;
use std::sync::Arc;

use super::{direct_product, Elem, FiniteGroup, GroupError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `C_{p^k}` with elements `g^i ↦ i`.
    Cyclic { p: u64, k: u32 },
    /// `(C_p)^r` with elements indexed by base-`p` digit vectors.
    ElementaryAbelian { p: u64, r: u32 },
    DirectProduct(Vec<Preset>),
    Dihedral8,
    Quaternion8,
    /// Upper unitriangular 3×3 matrices over `F_p`.
    Heisenberg { p: u64 },
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn parse_nums(s: &str, want: usize) -> Result<Vec<u64>, GroupError> {
    let nums: Result<Vec<u64>, _> = s.split(',').map(|t| t.trim().parse::<u64>()).collect();
    match nums {
        Ok(v) if v.len() == want => Ok(v),
        _ => Err(GroupError::BadParams(format!("expected {want} integer(s), got `{s}`"))),
    }
}

impl FromStr for Preset {
    type Err = GroupError;

    /// Parses `name[:params]`, e.g. `cyclic:2,3`, `elementary_abelian:3,2`,
    /// `dihedral8`, `heisenberg:3`, `direct_product:cyclic:2,1*cyclic:2,2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), p.trim()),
            None => (s.trim(), ""),
        };
        match name {
            "cyclic" => {
                let v = parse_nums(params, 2)?;
                Ok(Preset::Cyclic { p: v[0], k: v[1] as u32 })
            }
            "elementary_abelian" => {
                let v = parse_nums(params, 2)?;
                Ok(Preset::ElementaryAbelian { p: v[0], r: v[1] as u32 })
            }
            "trivial" => Ok(Preset::Cyclic { p: 2, k: 0 }),
            "dihedral8" => Ok(Preset::Dihedral8),
            "quaternion8" => Ok(Preset::Quaternion8),
            "heisenberg" => {
                let v = parse_nums(params, 1)?;
                Ok(Preset::Heisenberg { p: v[0] })
            }
            "direct_product" => {
                let factors: Result<Vec<Preset>, _> = params.split('*').map(str::parse).collect();
                let factors = factors?;
                if factors.len() < 2 {
                    return Err(GroupError::BadParams("direct_product needs at least two factors".into()));
                }
                Ok(Preset::DirectProduct(factors))
            }
            other => Err(GroupError::UnknownPreset(other.to_string())),
        }
    }
}

fn from_mul(label: &str, n: usize, p: u64, mul: impl Fn(usize, usize) -> usize) -> Arc<FiniteGroup> {
    let table: Vec<Elem> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| mul(a, b) as Elem).collect();
    FiniteGroup::from_flat_unchecked(label, table, n, Some(p))
}

/// Builds a preset group with its canonical element ordering.
pub fn preset_group(preset: &Preset) -> Result<Arc<FiniteGroup>, GroupError> {
    match *preset {
        Preset::Cyclic { p, k } => {
            if !is_prime(p) {
                return Err(GroupError::BadParams(format!("{p} is not prime")));
            }
            let n = p.checked_pow(k).filter(|&n| n <= 4096).ok_or_else(|| GroupError::BadParams("order too large".into()))? as usize;
            let label = if k == 0 { "1".to_string() } else { format!("C{n}") };
            Ok(from_mul(&label, n, p, |a, b| (a + b) % n))
        }
        Preset::ElementaryAbelian { p, r } => {
            if !is_prime(p) {
                return Err(GroupError::BadParams(format!("{p} is not prime")));
            }
            let n = p.checked_pow(r).filter(|&n| n <= 4096).ok_or_else(|| GroupError::BadParams("order too large".into()))? as usize;
            let p = p as usize;
            let label = match r {
                0 => "1".to_string(),
                1 => format!("C{p}"),
                _ => format!("C{p}^{r}"),
            };
            Ok(from_mul(&label, n, p as u64, |a, b| {
                let (mut x, mut y, mut out, mut place) = (a, b, 0, 1);
                for _ in 0..r {
                    out += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                out
            }))
        }
        Preset::Dihedral8 => {
            // r^i s^j ↦ i + 4j, with s r s = r⁻¹
            Ok(from_mul("D8", 8, 2, |a, b| {
                let (i, j) = (a % 4, a / 4);
                let (k, l) = (b % 4, b / 4);
                let rot = if j == 0 { (i + k) % 4 } else { (i + 4 - k) % 4 };
                rot + 4 * ((j + l) % 2)
            }))
        }
        Preset::Quaternion8 => {
            // ±1, ±i, ±j, ±k as (sign, unit) with unit ∈ {1,i,j,k}
            // element index = unit + 4·sign
            let unit_mul = |u: usize, v: usize| -> (usize, usize) {
                // returns (sign, unit) of u·v
                match (u, v) {
                    (0, x) | (x, 0) => (0, x),
                    (a, b) if a == b => (1, 0),
                    (1, 2) => (0, 3),
                    (2, 3) => (0, 1),
                    (3, 1) => (0, 2),
                    (2, 1) => (1, 3),
                    (3, 2) => (1, 1),
                    (1, 3) => (1, 2),
                    _ => unreachable!(),
                }
            };
            Ok(from_mul("Q8", 8, 2, |a, b| {
                let (s1, u1) = (a / 4, a % 4);
                let (s2, u2) = (b / 4, b % 4);
                let (s, u) = unit_mul(u1, u2);
                u + 4 * ((s1 + s2 + s) % 2)
            }))
        }
        Preset::Heisenberg { p } => {
            if !is_prime(p) || p == 2 {
                return Err(GroupError::BadParams("heisenberg needs an odd prime".into()));
            }
            let p = p as usize;
            // matrix [[1,a,c],[0,1,b],[0,0,1]] ↦ a + p·b + p²·c
            Ok(from_mul(&format!("He{}", p * p * p), p * p * p, p as u64, |x, y| {
                let (a1, b1, c1) = (x % p, (x / p) % p, x / (p * p));
                let (a2, b2, c2) = (y % p, (y / p) % p, y / (p * p));
                let a = (a1 + a2) % p;
                let b = (b1 + b2) % p;
                let c = (c1 + c2 + a1 * b2) % p;
                a + p * b + p * p * c
            }))
        }
        Preset::DirectProduct(ref factors) => {
            let mut groups = factors.iter().map(preset_group);
            let mut acc = groups.next().ok_or_else(|| GroupError::BadParams("empty product".into()))??;
            for g in groups {
                let g = g?;
                if acc.prime().is_some() && g.prime().is_some() && acc.prime() != g.prime() {
                    return Err(GroupError::BadParams("factors have different primes".into()));
                }
                acc = direct_product(&acc, &g).group.clone();
            }
            Ok(acc)
        }
    }
}

fn partitions(k: u32, largest: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    (1..=largest.min(k))
        .rev()
        .flat_map(|first| {
            partitions(k - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Every `p`-group of order at most `min(max_order, p³)` up to isomorphism,
/// by increasing order: the abelian groups by partition type, then `D₈`,
/// `Q₈` (`p = 2`) or the Heisenberg group (`p` odd) in order `p³`. The
/// order-`p³` exponent-`p²` non-abelian group for odd `p` is not included.
pub fn catalogue(p: u64, max_order: u64) -> Result<Vec<Preset>, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::BadParams(format!("{p} is not prime")));
    }
    let mut out = Vec::new();
    for k in 0..=3u32 {
        if p.pow(k) > max_order {
            break;
        }
        for parts in partitions(k, k) {
            out.push(match parts.as_slice() {
                [] => Preset::Cyclic { p, k: 0 },
                [e] => Preset::Cyclic { p, k: *e },
                _ if parts.iter().all(|&e| e == 1) => Preset::ElementaryAbelian { p, r: k },
                _ => Preset::DirectProduct(parts.iter().map(|&e| Preset::Cyclic { p, k: e }).collect()),
            });
        }
        if k == 3 {
            if p == 2 {
                out.extend([Preset::Dihedral8, Preset::Quaternion8]);
            } else {
                out.push(Preset::Heisenberg { p });
            }
        }
    }
    Ok(out)
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Preset::Cyclic { k: 0, .. } => write!(f, "trivial"),
            Preset::Cyclic { p, k } => write!(f, "cyclic:{p},{k}"),
            Preset::ElementaryAbelian { p, r } => write!(f, "elementary_abelian:{p},{r}"),
            Preset::Dihedral8 => write!(f, "dihedral8"),
            Preset::Quaternion8 => write!(f, "quaternion8"),
            Preset::Heisenberg { p } => write!(f, "heisenberg:{p}"),
            Preset::DirectProduct(fs) => {
                write!(f, "direct_product:")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}
