//! Exact arithmetic in a field `k` of characteristic `q ≠ p` containing a
//! primitive `pⁿ`-th root of unity: `ℚ(ζ_{pⁿ})` for `q = 0`, and
//! `F_{q^d}` with `d = ord_{pⁿ}(q)` otherwise.
//!
//! Elements are coefficient vectors reduced modulo a fixed monic defining
//! polynomial, so equality of [`Scalar`]s is structural equality.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::groups::CyclicValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("characteristic {q} is not allowed for p = {p}")]
    BadCharacteristic { p: u64, q: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator {0} is not invertible in the field")]
    BadDenominator(String),
    #[error("field F_{q}^{degree} is too large for this implementation")]
    FieldTooLarge { q: u64, degree: u32 },
}

/// An element of `k`, as coefficients of `1, x, …, x^{d−1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Box<[BigRational]>),
    Modular(Box<[u64]>),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(c) => c.iter().all(Zero::is_zero),
            Scalar::Modular(c) => c.iter().all(|&x| x == 0),
        }
    }

    /// Exact coefficient strings (`"3/2"` or residues).
    pub fn coefficient_strings(&self) -> Vec<String> {
        match self {
            Scalar::Rational(c) => c.iter().map(|r| r.to_string()).collect(),
            Scalar::Modular(c) => c.iter().map(|r| r.to_string()).collect(),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    /// Polynomial notation in `z` (the class of `x`); a bare constant when
    /// all higher coefficients vanish.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coefficient_strings();
        let zero: Vec<bool> = match self {
            Scalar::Rational(c) => c.iter().map(Zero::is_zero).collect(),
            Scalar::Modular(c) => c.iter().map(|&x| x == 0).collect(),
        };
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| !zero[*i])
            .map(|(i, c)| match i {
                0 => c.clone(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Parameters of the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
    /// Characteristic: `0` or a prime different from `p`.
    pub q: u64,
    pub degree: usize,
    /// Monic defining polynomial, constant term first, leading 1 last.
    pub modulus_poly: Vec<String>,
}

/// Arithmetic over a prime field `F_q`.
fn mod_inv(a: u64, q: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, q as i128);
    (g == 1).then(|| x.rem_euclid(q as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[derive(Clone, Debug)]
enum Base {
    Rational,
    Prime(u64),
}

/// The field `k` with a fixed primitive `pⁿ`-th root of unity `ζ`.
#[derive(Debug)]
pub struct Field {
    spec: FieldSpec,
    base: Base,
    /// Monic modulus without its leading coefficient.
    rat_mod: Vec<BigRational>,
    fin_mod: Vec<u64>,
    /// `zeta_pow[t] = ζ^t` for `t < pⁿ`.
    zeta_pow: Vec<Scalar>,
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn mult_order(a: u64, m: u64) -> u32 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Polynomial remainder over `F_q`; both inputs are coefficient vectors,
/// constant term first, and `m` is monic.
fn poly_rem_fq(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + q - (lead * c) % q) % q;
        }
        r.pop();
    }
    r
}

fn is_irreducible_fq(m: &[u64], q: u64) -> bool {
    let d = m.len() - 1;
    for deg in 1..=d / 2 {
        let count = q.pow(deg as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                f.push(c % q);
                c /= q;
            }
            f.push(1);
            if poly_rem_fq(m, &f, q).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Builds `k` for `A = μ_{pⁿ}` in characteristic `q`.
pub fn make_field(p: u64, n: u32, q: u64) -> Result<Arc<Field>, ScalarError> {
    if !is_prime(p) || n == 0 || q == p || (q != 0 && !is_prime(q)) {
        return Err(ScalarError::BadCharacteristic { p, q });
    }
    let order = p.pow(n);
    let field = if q == 0 {
        // p^n-th cyclotomic polynomial: Σ_{i<p} x^{i·p^{n−1}}
        let step = p.pow(n - 1) as usize;
        let degree = step * (p as usize - 1);
        let mut full = vec![BigRational::zero(); degree + 1];
        for i in 0..p as usize {
            full[i * step] = BigRational::one();
        }
        let spec = FieldSpec {
            p,
            n,
            q,
            degree,
            modulus_poly: full.iter().map(|c| c.to_string()).collect(),
        };
        full.pop();
        let mut f = Field { spec, base: Base::Rational, rat_mod: full, fin_mod: vec![], zeta_pow: vec![] };
        let x = if degree == 1 {
            // modulus x + 1: the class of x is −1
            f.from_integer(-1)
        } else {
            let mut c = vec![BigRational::zero(); degree];
            c[1] = BigRational::one();
            Scalar::Rational(c.into_boxed_slice())
        };
        f.fill_zeta_powers(x, order);
        f
    } else {
        let degree = mult_order(q, order) as usize;
        if (q as f64).powi(degree as i32) > 1.0e7 {
            return Err(ScalarError::FieldTooLarge { q, degree: degree as u32 });
        }
        let mut modulus = None;
        for code in 0..q.pow(degree as u32) {
            let mut m = Vec::with_capacity(degree + 1);
            let mut c = code;
            for _ in 0..degree {
                m.push(c % q);
                c /= q;
            }
            m.push(1);
            if is_irreducible_fq(&m, q) {
                modulus = Some(m);
                break;
            }
        }
        let full = modulus.expect("an irreducible polynomial of every degree exists");
        let spec = FieldSpec {
            p,
            n,
            q,
            degree,
            modulus_poly: full.iter().map(|c| c.to_string()).collect(),
        };
        let mut fin_mod = full;
        fin_mod.pop();
        let mut f = Field { spec, base: Base::Prime(q), rat_mod: vec![], fin_mod, zeta_pow: vec![] };
        // least element, in the order of Σ cᵢ qⁱ, of exact order pⁿ
        let size = q.pow(degree as u32);
        let mut zeta = None;
        for code in 1..size {
            let mut c = Vec::with_capacity(degree);
            let mut v = code;
            for _ in 0..degree {
                c.push(v % q);
                v /= q;
            }
            let x = Scalar::Modular(c.into_boxed_slice());
            let one = f.one();
            if f.pow(&x, order) == one && f.pow(&x, order / p) != one {
                zeta = Some(x);
                break;
            }
        }
        f.fill_zeta_powers(zeta.expect("μ_{pⁿ} embeds in F_{q^d}"), order);
        f
    };
    Ok(Arc::new(field))
}

impl Field {
    fn fill_zeta_powers(&mut self, zeta: Scalar, order: u64) {
        let mut pows = Vec::with_capacity(order as usize);
        let mut x = self.one();
        for _ in 0..order {
            pows.push(x.clone());
            x = self.mul(&x, &zeta);
        }
        self.zeta_pow = pows;
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.q
    }

    pub fn degree(&self) -> usize {
        self.spec.degree
    }

    /// `pⁿ`, the order of the fiber group.
    pub fn fiber_order(&self) -> u64 {
        self.zeta_pow.len() as u64
    }

    pub fn zeta(&self) -> &Scalar {
        &self.zeta_pow[1 % self.zeta_pow.len()]
    }

    pub fn zero(&self) -> Scalar {
        match self.base {
            Base::Rational => Scalar::Rational(vec![BigRational::zero(); self.spec.degree].into_boxed_slice()),
            Base::Prime(_) => Scalar::Modular(vec![0; self.spec.degree].into_boxed_slice()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    pub fn from_integer(&self, v: i64) -> Scalar {
        let mut s = self.zero();
        match (&mut s, &self.base) {
            (Scalar::Rational(c), _) => c[0] = BigRational::from_integer(BigInt::from(v)),
            (Scalar::Modular(c), Base::Prime(q)) => c[0] = v.rem_euclid(*q as i64) as u64,
            _ => unreachable!(),
        }
        s
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        let mut s = self.zero();
        match (&mut s, &self.base) {
            (Scalar::Rational(c), _) => c[0] = BigRational::from_integer(v.clone()),
            (Scalar::Modular(c), Base::Prime(q)) => {
                let r = v.mod_floor(&BigInt::from(*q));
                c[0] = r.try_into().unwrap();
            }
            _ => unreachable!(),
        }
        s
    }

    /// `num/den`; in characteristic `q` the reduced denominator must be prime to `q`.
    pub fn from_rational(&self, num: i64, den: i64) -> Result<Scalar, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        self.from_big_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big_rational(&self, r: &BigRational) -> Result<Scalar, ScalarError> {
        match self.base {
            Base::Rational => {
                let mut s = self.zero();
                if let Scalar::Rational(c) = &mut s {
                    c[0] = r.clone();
                }
                Ok(s)
            }
            Base::Prime(q) => {
                let qb = BigInt::from(q);
                let den: u64 = r.denom().mod_floor(&qb).try_into().unwrap();
                let inv = mod_inv(den, q).ok_or_else(|| ScalarError::BadDenominator(r.denom().to_string()))?;
                let num: u64 = r.numer().mod_floor(&qb).try_into().unwrap();
                Ok(self.from_integer(((num as u128 * inv as u128) % q as u128) as i64))
            }
        }
    }

    /// `ζ^t`.
    pub fn root_of_unity(&self, t: CyclicValue) -> Scalar {
        self.zeta_pow[t.residue() as usize % self.zeta_pow.len()].clone()
    }

    pub fn zeta_power(&self, t: i64) -> &Scalar {
        &self.zeta_pow[t.rem_euclid(self.zeta_pow.len() as i64) as usize]
    }

    /// `Σ_t counts[t]·ζ^t`, an element of `ℤ[ζ]`.
    pub fn zeta_sum(&self, counts: &[i64]) -> Scalar {
        let mut acc = self.zero();
        for (t, &c) in counts.iter().enumerate() {
            if c != 0 {
                let term = self.mul(&self.from_integer(c), &self.zeta_pow[t % self.zeta_pow.len()]);
                acc = self.add(&acc, &term);
            }
        }
        acc
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, &self.base) {
            (Scalar::Rational(x), Scalar::Rational(y), _) => {
                Scalar::Rational(x.iter().zip(y.iter()).map(|(u, v)| u + v).collect())
            }
            (Scalar::Modular(x), Scalar::Modular(y), Base::Prime(q)) => {
                Scalar::Modular(x.iter().zip(y.iter()).map(|(u, v)| (u + v) % q).collect())
            }
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (a, &self.base) {
            (Scalar::Rational(x), _) => Scalar::Rational(x.iter().map(|u| -u).collect()),
            (Scalar::Modular(x), Base::Prime(q)) => Scalar::Modular(x.iter().map(|u| (q - u) % q).collect()),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let d = self.spec.degree;
        match (a, b, &self.base) {
            (Scalar::Rational(x), Scalar::Rational(y), _) => {
                if d == 1 {
                    return Scalar::Rational(vec![&x[0] * &y[0]].into_boxed_slice());
                }
                let mut prod = vec![BigRational::zero(); 2 * d - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if !v.is_zero() {
                            prod[i + j] += u * v;
                        }
                    }
                }
                // x^d = −Σ m_i x^i
                for k in (d..prod.len()).rev() {
                    let lead = std::mem::replace(&mut prod[k], BigRational::zero());
                    if lead.is_zero() {
                        continue;
                    }
                    for (i, m) in self.rat_mod.iter().enumerate() {
                        if !m.is_zero() {
                            prod[k - d + i] -= &lead * m;
                        }
                    }
                }
                prod.truncate(d);
                Scalar::Rational(prod.into_boxed_slice())
            }
            (Scalar::Modular(x), Scalar::Modular(y), Base::Prime(q)) => {
                let q = *q as u128;
                let mut prod = vec![0u128; 2 * d - 1];
                for (i, &u) in x.iter().enumerate() {
                    for (j, &v) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + u as u128 * v as u128) % q;
                    }
                }
                for k in (d..prod.len()).rev() {
                    let lead = std::mem::replace(&mut prod[k], 0);
                    for (i, &m) in self.fin_mod.iter().enumerate() {
                        prod[k - d + i] = (prod[k - d + i] + q - (lead * m as u128) % q) % q;
                    }
                }
                Scalar::Modular(prod[..d].iter().map(|&c| c as u64).collect())
            }
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, by solving the linear system of
    /// multiplication-by-`a` on the power basis.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        if a.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let d = self.spec.degree;
        // columns: a·x^j
        let mut cols = Vec::with_capacity(d);
        let mut xj = self.one();
        let x = self.basis_x();
        for _ in 0..d {
            cols.push(self.mul(a, &xj));
            xj = self.mul(&xj, &x);
        }
        match &self.base {
            Base::Rational => {
                let mut m: Vec<Vec<BigRational>> = (0..d)
                    .map(|i| {
                        let mut row: Vec<BigRational> = cols
                            .iter()
                            .map(|c| match c {
                                Scalar::Rational(v) => v[i].clone(),
                                _ => unreachable!(),
                            })
                            .collect();
                        row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                        row
                    })
                    .collect();
                for col in 0..d {
                    let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(ScalarError::DivisionByZero)?;
                    m.swap(col, piv);
                    let inv = m[col][col].recip();
                    for v in m[col].iter_mut() {
                        *v = &*v * &inv;
                    }
                    for r in 0..d {
                        if r != col && !m[r][col].is_zero() {
                            let f = m[r][col].clone();
                            for c in 0..=d {
                                let t = &f * &m[col][c];
                                m[r][c] -= t;
                            }
                        }
                    }
                }
                Ok(Scalar::Rational(m.into_iter().map(|row| row[d].clone()).collect()))
            }
            Base::Prime(q) => {
                let q = *q;
                let mut m: Vec<Vec<u64>> = (0..d)
                    .map(|i| {
                        let mut row: Vec<u64> = cols
                            .iter()
                            .map(|c| match c {
                                Scalar::Modular(v) => v[i],
                                _ => unreachable!(),
                            })
                            .collect();
                        row.push(u64::from(i == 0));
                        row
                    })
                    .collect();
                for col in 0..d {
                    let piv = (col..d).find(|&r| m[r][col] != 0).ok_or(ScalarError::DivisionByZero)?;
                    m.swap(col, piv);
                    let inv = mod_inv(m[col][col], q).unwrap();
                    for v in m[col].iter_mut() {
                        *v = (*v as u128 * inv as u128 % q as u128) as u64;
                    }
                    for r in 0..d {
                        if r != col && m[r][col] != 0 {
                            let f = m[r][col];
                            for c in 0..=d {
                                let t = (f as u128 * m[col][c] as u128 % q as u128) as u64;
                                m[r][c] = (m[r][c] + q - t) % q;
                            }
                        }
                    }
                }
                Ok(Scalar::Modular(m.into_iter().map(|row| row[d]).collect()))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn basis_x(&self) -> Scalar {
        let d = self.spec.degree;
        if d == 1 {
            // x reduces to minus the constant term of the modulus
            return match &self.base {
                Base::Rational => Scalar::Rational(vec![-self.rat_mod[0].clone()].into_boxed_slice()),
                Base::Prime(q) => Scalar::Modular(vec![(q - self.fin_mod[0]) % q].into_boxed_slice()),
            };
        }
        let mut s = self.zero();
        match &mut s {
            Scalar::Rational(c) => c[1] = BigRational::one(),
            Scalar::Modular(c) => c[1] = 1,
        }
        s
    }

    /// Whether the scalar is a rational integer (constant with integral value).
    pub fn as_integer(&self, a: &Scalar) -> Option<BigInt> {
        match a {
            Scalar::Rational(c) => (c[1..].iter().all(Zero::is_zero) && c[0].is_integer()).then(|| c[0].to_integer()),
            Scalar::Modular(c) => c[1..].iter().all(|&x| x == 0).then(|| BigInt::from(c[0])),
        }
    }

    /// Absolute value of the constant coefficient, used for pivot-free
    /// diagnostics only.
    pub fn describe(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(c) if c.len() == 1 && c[0].is_negative() => format!("-{}", c[0].abs()),
            _ => a.to_string(),
        }
    }
}
