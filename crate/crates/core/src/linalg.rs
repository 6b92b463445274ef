//! Exact row reduction over the coefficient field.

use std::sync::Arc;

use crate::scalars::{Field, Scalar};

/// An incrementally built basis in reduced row echelon form.
///
/// Pivots are taken at the first nonzero column of each reduced row, and
/// every stored row is normalized to a leading `1` with zeros in the pivot
/// columns of all other rows, so the basis of a given span is unique.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Arc<Field>,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Arc<Field>, dim: usize) -> Self {
        Echelon { field, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Rows sorted by pivot column.
    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let k = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = k.sub(x, &k.mul(&c, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let k = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = k.inv(&r[p]).expect("nonzero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = k.mul(x, &inv);
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = k.sub(x, &k.mul(&c, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    /// Coordinates of `v` in the stored rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Whether every row of `other` lies in this span.
    pub fn contains_span(&self, other: &Echelon) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Intersection of two spans in the same ambient space.
    pub fn intersection(&self, other: &Echelon) -> Echelon {
        // solve Σ a_i r_i = Σ b_j s_j and map the a-part back
        let n = self.rank();
        let m = other.rank();
        let k = &self.field;
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|c| {
                let mut row: Vec<Scalar> = self.rows.iter().map(|r| r[c].clone()).collect();
                row.extend(other.rows.iter().map(|s| k.neg(&s[c])));
                row
            })
            .collect();
        let kernel = nullspace(k, &cols, n + m);
        let mut out = Echelon::new(self.field.clone(), self.dim);
        for z in kernel {
            let mut v = vec![k.zero(); self.dim];
            for (a, r) in z[..n].iter().zip(&self.rows) {
                if a.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(r) {
                    *x = k.add(x, &k.mul(a, y));
                }
            }
            out.insert(&v);
        }
        out
    }
}

/// Basis of `{x : A·x = 0}` for the given rows of `A`, each of length `ncols`.
pub fn nullspace(field: &Arc<Field>, rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(field.clone(), ncols);
    for r in rows {
        if ech.is_full() {
            break;
        }
        ech.insert(r);
    }
    nullspace_of_echelon(field, &ech)
}

/// Null space of the row space held by an [`Echelon`].
pub fn nullspace_of_echelon(field: &Arc<Field>, ech: &Echelon) -> Vec<Vec<Scalar>> {
    let ncols = ech.dim;
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                v[p] = field.neg(&row[f]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::make_field;

    fn ints(k: &Field, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| k.from_integer(x)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let k = make_field(2, 1, 0).unwrap();
        let rows = vec![ints(&k, &[1, 2, 3]), ints(&k, &[2, 4, 6]), ints(&k, &[0, 1, 1])];
        let ns = nullspace(&k, &rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot = r.iter().zip(&ns[0]).fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn reduced_form_is_unique() {
        let k = make_field(3, 1, 2).unwrap();
        let mut a = Echelon::new(k.clone(), 3);
        a.insert(&ints(&k, &[1, 1, 0]));
        a.insert(&ints(&k, &[0, 1, 1]));
        let mut b = Echelon::new(k.clone(), 3);
        b.insert(&ints(&k, &[1, 0, 1]));
        b.insert(&ints(&k, &[1, 1, 0]));
        assert_eq!(a.rows(), b.rows());
    }

    #[test]
    fn intersection_of_planes() {
        let k = make_field(2, 1, 0).unwrap();
        let mut a = Echelon::new(k.clone(), 3);
        a.insert(&ints(&k, &[1, 0, 0]));
        a.insert(&ints(&k, &[0, 1, 0]));
        let mut b = Echelon::new(k.clone(), 3);
        b.insert(&ints(&k, &[0, 1, 0]));
        b.insert(&ints(&k, &[0, 0, 1]));
        let c = a.intersection(&b);
        assert_eq!(c.rank(), 1);
        assert!(c.contains(&ints(&k, &[0, 5, 0])));
    }
}
