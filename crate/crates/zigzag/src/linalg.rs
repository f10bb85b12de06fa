//! Sparse exact linear algebra over a [`Field`].
//!
//! Vectors are sorted lists of `(index, coefficient)` pairs with no stored zeros.
//! The echelon structure pivots on the *largest* index of each row, which is what
//! the normal-form machinery needs: reducing a vector leaves a combination of
//! non-pivot (smaller) coordinates.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

pub type SparseVec = Vec<(usize, Scalar)>;

pub fn unit(i: usize, field: Field) -> SparseVec {
    vec![(i, field.one())]
}

pub fn scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, a)| (*i, a * c)).collect()
}

/// `x + c·y`.
pub fn add_scaled(x: &SparseVec, c: &Scalar, y: &SparseVec) -> SparseVec {
    if c.is_zero() || y.is_empty() {
        return x.clone();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let s = &x[i].1 + &(c * &y[j].1);
            if !s.is_zero() {
                out.push((x[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn add(x: &SparseVec, y: &SparseVec) -> SparseVec {
    match y.first() {
        None => x.clone(),
        Some((_, c)) => add_scaled(x, &c.field().one(), y),
    }
}

pub fn sub(x: &SparseVec, y: &SparseVec) -> SparseVec {
    match y.first() {
        None => x.clone(),
        Some((_, c)) => add_scaled(x, &c.field().from_i64(-1), y),
    }
}

pub fn coeff(v: &SparseVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|k| &v[k].1)
}

pub fn dot(x: &SparseVec, y: &SparseVec, field: Field) -> Scalar {
    let mut acc = field.zero();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = &acc + &(&x[i].1 * &y[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Builds a sparse vector from unsorted, possibly repeated entries.
pub fn collect(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in entries {
        if c.is_zero() {
            continue;
        }
        match acc.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
    acc.into_iter().collect()
}

/// Accumulator for building a sparse vector by repeated `c·v` additions.
pub struct Accumulator {
    map: BTreeMap<usize, Scalar>,
}

impl Default for Accumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator { map: BTreeMap::new() }
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.map.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, a) in v {
            self.add_term(*i, c * a);
        }
    }

    pub fn finish(self) -> SparseVec {
        self.map.into_iter().collect()
    }
}

/// Incremental row echelon form with pivot = largest index and pivot coefficient one.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    /// The canonical representative of `v` modulo the row space: no pivot coordinates remain.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v.clone();
        }
        let mut work: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((i, c)) = work.pop_last() {
            match self.rows.get(&i) {
                None => out.push((i, c)),
                Some(row) => {
                    for (j, a) in row.iter() {
                        if *j == i {
                            continue;
                        }
                        let t = -(&c * a);
                        match work.entry(*j) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(t);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                let s = e.get() + &t;
                                if s.is_zero() {
                                    e.remove();
                                } else {
                                    *e.get_mut() = s;
                                }
                            }
                        }
                    }
                }
            }
        }
        out.reverse();
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the row space; returns the new pivot if `v` was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let r = self.reduce(v);
        let (p, lead) = r.last()?.clone();
        let row = scale(&r, &lead.inv());
        self.rows.insert(p, row);
        Some(p)
    }

    /// Fully reduces the rows so that every pivot column is zero outside its own row.
    pub fn make_reduced(&mut self) {
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for (k, &p) in keys.iter().enumerate() {
            let prow = self.rows[&p].clone();
            for &q in &keys[k + 1..] {
                let row = &self.rows[&q];
                if let Some(c) = coeff(row, p) {
                    let c = -c;
                    let new = add_scaled(row, &c, &prow);
                    self.rows.insert(q, new);
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Basis of `{x : row·x = 0 for every row}` in `ncols` unknowns.
pub fn nullspace(rows: &[SparseVec], ncols: usize, field: Field) -> Vec<SparseVec> {
    let mut ech = Echelon::new(field);
    for r in rows {
        ech.insert(r);
    }
    ech.make_reduced();
    let mut basis = Vec::new();
    // column f -> list of (pivot p, coefficient of f in row p)
    let mut by_col: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (p, row) in ech.rows.iter() {
        for (j, c) in row {
            if j != p {
                by_col.entry(*j).or_default().push((*p, c.clone()));
            }
        }
    }
    for f in 0..ncols {
        if ech.is_pivot(f) {
            continue;
        }
        let mut v: Vec<(usize, Scalar)> = vec![(f, field.one())];
        if let Some(list) = by_col.get(&f) {
            for (p, c) in list {
                v.push((*p, -c));
            }
        }
        v.sort_by_key(|e| e.0);
        basis.push(v);
    }
    basis
}

/// Kernel of the linear map whose columns are given.
pub fn kernel_of_columns(columns: &[SparseVec], field: Field) -> Vec<SparseVec> {
    nullspace(&transpose(columns), columns.len(), field)
}

/// Rows of the matrix whose columns are given.
pub fn transpose(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            rows.entry(*i).or_default().push((j, c.clone()));
        }
    }
    rows.into_values().collect()
}

/// Solves `Σ_j rows[i][j] x_j = rhs[i]`; returns one solution (free variables zero) or `None`.
pub fn solve(rows: &[SparseVec], rhs: &[Scalar], field: Field) -> Option<SparseVec> {
    // Shift unknowns up by one; column 0 holds the right-hand side so it is never a pivot
    // unless the system is inconsistent.
    let mut ech = Echelon::new(field);
    for (r, b) in rows.iter().zip(rhs) {
        let mut v: SparseVec = Vec::with_capacity(r.len() + 1);
        if !b.is_zero() {
            v.push((0, -b));
        }
        v.extend(r.iter().map(|(j, c)| (j + 1, c.clone())));
        ech.insert(&v);
    }
    if ech.is_pivot(0) {
        return None;
    }
    ech.make_reduced();
    let mut sol = Vec::new();
    for (p, row) in ech.rows.iter() {
        // row: x_p + Σ c_j x_j - b = 0 with free x_j = 0, so x_p = b = -(coefficient at 0).
        if let Some(c) = coeff(row, 0) {
            sol.push((p - 1, -c));
        }
    }
    sol.sort_by_key(|e| e.0);
    Some(sol)
}

/// Rank of a family of vectors.
pub fn rank(vectors: &[SparseVec], field: Field) -> usize {
    let mut ech = Echelon::new(field);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Applies a linear map given by its columns (image of each basis vector).
pub fn apply(columns: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut acc = Accumulator::new();
    for (i, c) in v {
        acc.add_scaled(c, &columns[*i]);
    }
    acc.finish()
}

/// Inverse of a square map given by columns, if invertible.
pub fn invert(columns: &[SparseVec], field: Field) -> Option<Vec<SparseVec>> {
    let n = columns.len();
    // Row i of the matrix M (M e_j = columns[j]) as sparse vectors in j.
    let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            if *i >= n {
                return None;
            }
            rows[*i].push((j, c.clone()));
        }
    }
    let mut inverse_cols = Vec::with_capacity(n);
    // Solve M x = e_k for every k by one elimination on [M | I].
    let mut ech = Echelon::new(field);
    for (i, r) in rows.iter().enumerate() {
        // Identity block placed at low indices (0..n), unknowns at n..2n so pivots land on unknowns.
        let mut v: SparseVec = vec![(i, -field.one())];
        v.extend(r.iter().map(|(j, c)| (j + n, c.clone())));
        ech.insert(&v);
    }
    if ech.rank() < n || ech.pivots().any(|p| p < n) {
        return None;
    }
    ech.make_reduced();
    // row for pivot n+j: x_j + Σ_i c_i (−e_i part) ... x_j = Σ_i (−c_i) b_i
    let mut x_rows: Vec<SparseVec> = vec![Vec::new(); n];
    for (p, row) in ech.rows.iter() {
        let j = p - n;
        x_rows[j] = row.iter().filter(|(i, _)| *i < n).map(|(i, c)| (*i, -c)).collect();
    }
    // x = M^{-1} b, so (M^{-1})[j][k] = x_rows[j][k]; column k collects over j.
    let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
    for (j, r) in x_rows.iter().enumerate() {
        for (k, c) in r {
            cols[*k].push((j, c.clone()));
        }
    }
    for c in cols {
        inverse_cols.push(c);
    }
    Some(inverse_cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rationals.from_i64(n)
    }

    #[test]
    fn reduce_is_canonical() {
        let f = Field::Rationals;
        let mut e = Echelon::new(f);
        e.insert(&vec![(0, q(1)), (2, q(1))]);
        e.insert(&vec![(1, q(2)), (2, q(2))]);
        // pivot 2 from first row; second row reduces to (1,2),(0,-2) -> pivot 1
        assert_eq!(e.rank(), 2);
        let v = vec![(2, q(1))];
        assert_eq!(e.reduce(&v), vec![(0, q(-1))]);
        assert!(e.contains(&vec![(0, q(3)), (2, q(3))]));
    }

    #[test]
    fn nullspace_and_solve() {
        let f = Field::Rationals;
        let rows = vec![vec![(0, q(1)), (1, q(1)), (2, q(1))], vec![(1, q(1)), (2, q(-1))]];
        let ns = nullspace(&rows, 3, f);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0], f).is_zero());
        }
        let sol = solve(&rows, &[q(2), q(0)], f).unwrap();
        for (r, b) in rows.iter().zip([q(2), q(0)]) {
            assert_eq!(dot(r, &sol, f), b);
        }
        assert!(solve(&[vec![(0, q(1))], vec![(0, q(2))]], &[q(1), q(1)], f).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::Rationals;
        let cols = vec![vec![(0, q(2)), (1, q(1))], vec![(0, q(1)), (1, q(1))]];
        let inv = invert(&cols, f).unwrap();
        for k in 0..2 {
            let back = apply(&cols, &inv[k]);
            assert_eq!(back, unit(k, f));
        }
        assert!(invert(&[vec![(0, q(1))], vec![(0, q(1))]], f).is_none());
    }
}
