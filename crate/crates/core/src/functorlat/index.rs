use serde::Serialize;

use super::LatticeError;

/// `𝓘 = {0} ∪ {r ≥ 1 : p^{r−1} ≡ 1 (mod q)}`, truncated at `rmax`; for
/// `q = 0` only `r = 1` qualifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    pub p: u64,
    pub q: u64,
    pub rmax: u32,
    /// Multiplicative order of `p` modulo `q` (`None` for `q = 0`).
    pub period: Option<u64>,
    pub ranks: Vec<u32>,
}

impl IndexSet {
    pub fn contains(&self, r: u32) -> bool {
        self.ranks.contains(&r)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn index_set(p: u64, q: u64, rmax: u32) -> Result<IndexSet, LatticeError> {
    if q != 0 && (!is_prime(q) || q == p) {
        return Err(LatticeError::BadCharacteristic { p, q });
    }
    let (period, ranks) = if q == 0 {
        (None, [0, 1].into_iter().filter(|&r| r <= rmax).collect())
    } else {
        let s = (1..=q).find(|&s| (0..s).fold(1u64, |a, _| a * p % q) == 1).expect("p is a unit mod q");
        let ranks = (0..=rmax).filter(|&r| r == 0 || (r as u64 - 1) % s == 0).collect();
        (Some(s), ranks)
    };
    Ok(IndexSet { p, q, rmax, period, ranks })
}
