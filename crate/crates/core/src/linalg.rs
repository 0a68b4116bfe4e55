//! Exact linear algebra over a [`Field`].
//!
//! Small problems (subspaces of a truncated algebra) use dense reduced row
//! echelon forms. The large systems behind annihilator and witness solves use
//! [`SparseEchelon`], a semi-echelon basis of sparse rows reduced through a
//! dense accumulator.

use crate::error::{Error, Result};
use crate::field::Field;

/// Sparse vector as `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseRow<E> = Vec<(usize, E)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> ScalarMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        ScalarMatrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Usage(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r);
        }
        Ok(ScalarMatrix { field: field.clone(), rows: nrows, cols, data })
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, cols, rows).expect("ragged literal matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let k = &self.field;
        let mut out = Self::zeros(k, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    k.add_mul_assign(&mut out.data[idx], a, rhs.get(l, j));
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::Usage(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let k = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = k.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    k.add_mul_assign(&mut acc, a, b);
                }
                acc
            })
            .collect())
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let k = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !k.is_zero(self.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = k.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if k.is_zero(&factor) {
                    continue;
                }
                for j in c..self.cols {
                    let v = k.sub(self.get(i, j), &k.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let k = &self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![k.zero(); self.cols];
                v[free] = k.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = k.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }
}

/// Outcome of [`solve_affine`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution<E> {
    Solved { particular: Vec<E>, kernel: Vec<Vec<E>> },
    NoSolution,
}

/// Solves `A x = b` exactly. Free variables are set to zero in the particular
/// solution, so the answer is deterministic.
pub fn solve_affine<F: Field>(a: &ScalarMatrix<F>, b: &[F::Elem]) -> Result<AffineSolution<F::Elem>> {
    if b.len() != a.nrows() {
        return Err(Error::Usage(format!("right-hand side of length {} for {} rows", b.len(), a.nrows())));
    }
    let k = a.field();
    let n = a.ncols();
    let mut aug = ScalarMatrix::zeros(k, a.nrows(), n + 1);
    for i in 0..a.nrows() {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(AffineSolution::NoSolution);
    }
    let mut particular = vec![k.zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = aug.get(r, n).clone();
    }
    Ok(AffineSolution::Solved { particular, kernel: a.kernel() })
}

/// A linear subspace of `F^n`, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    /// RREF rows, sorted by pivot.
    basis: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let mut s = Self::zero(field, ambient);
        for i in 0..ambient {
            let mut v = vec![field.zero(); ambient];
            v[i] = field.one();
            s.basis.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn spanned_by<I>(field: &F, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<F::Elem>>,
    {
        let mut s = Self::zero(field, ambient);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_len(&self, v: &[F::Elem]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::Usage(format!("vector of length {} in a space of dimension {}", v.len(), self.ambient)));
        }
        Ok(())
    }

    /// Reduces `v` against the basis; the residual has zeros at every pivot.
    fn residual(&self, v: &mut [F::Elem]) {
        let k = &self.field;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if k.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for j in p..self.ambient {
                if !k.is_zero(&row[j]) {
                    v[j] = k.sub(&v[j], &k.mul(&c, &row[j]));
                }
            }
        }
    }

    /// Adds `v` to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> Result<bool> {
        self.check_len(&v)?;
        let k = self.field.clone();
        self.residual(&mut v);
        let Some(p) = v.iter().position(|a| !k.is_zero(a)) else {
            return Ok(false);
        };
        let inv = k.inv(&v[p]).expect("nonzero");
        for a in v.iter_mut().skip(p) {
            *a = k.mul(a, &inv);
        }
        for row in &mut self.basis {
            if k.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for j in p..self.ambient {
                if !k.is_zero(&v[j]) {
                    row[j] = k.sub(&row[j], &k.mul(&c, &v[j]));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, v);
        Ok(true)
    }

    pub fn contains(&self, v: &[F::Elem]) -> Result<bool> {
        self.check_len(v)?;
        let mut w = v.to_vec();
        self.residual(&mut w);
        Ok(w.iter().all(|a| self.field.is_zero(a)))
    }

    /// Membership with a certificate: coordinates of `v` in [`Self::basis`].
    pub fn coordinates(&self, v: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        // In RREF the coordinate on row i is the entry of v at pivot i.
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Usage(format!(
                "subspaces of dimensions {} and {} are not comparable",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same_ambient(other)?;
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(b.clone())?;
        }
        Ok(s)
    }

    /// Zassenhaus: row-reduce `[u | u]` and `[v | 0]`; rows whose left half
    /// vanishes span the intersection in their right half.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same_ambient(other)?;
        let k = &self.field;
        let n = self.ambient;
        let mut big = Subspace::zero(k, 2 * n);
        for u in &self.basis {
            let mut w = u.clone();
            w.extend(u.iter().cloned());
            big.insert(w)?;
        }
        for v in &other.basis {
            let mut w = v.clone();
            w.extend(std::iter::repeat(k.zero()).take(n));
            big.insert(w)?;
        }
        let vectors = big
            .basis
            .iter()
            .zip(&big.pivots)
            .filter(|(_, &p)| p >= n)
            .map(|(row, _)| row[n..].to_vec());
        Subspace::spanned_by(k, n, vectors)
    }

    /// Basis of the annihilator `{w : <w, s> = 0 for all s}`.
    pub fn equations(&self) -> Vec<Vec<F::Elem>> {
        let k = &self.field;
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut w = vec![k.zero(); self.ambient];
                w[free] = k.one();
                for (row, &p) in self.basis.iter().zip(&self.pivots) {
                    w[p] = k.neg(&row[free]);
                }
                w
            })
            .collect()
    }

    /// `{x : map(x) in target}` for `map: F^n -> F^m` with `target` in `F^m`.
    pub fn preimage(map: &ScalarMatrix<F>, target: &Self) -> Result<Self> {
        if map.nrows() != target.ambient {
            return Err(Error::Usage(format!(
                "map with {} rows into a space of dimension {}",
                map.nrows(),
                target.ambient
            )));
        }
        let k = map.field();
        let eqs = target.equations();
        let mut composed = ScalarMatrix::zeros(k, eqs.len(), map.ncols());
        for (r, w) in eqs.iter().enumerate() {
            for j in 0..map.ncols() {
                let mut acc = k.zero();
                for (i, wi) in w.iter().enumerate() {
                    if !k.is_zero(wi) {
                        k.add_mul_assign(&mut acc, wi, map.get(i, j));
                    }
                }
                composed.set(r, j, acc);
            }
        }
        Subspace::spanned_by(k, map.ncols(), composed.kernel())
    }

    pub fn image(map: &ScalarMatrix<F>, source: &Self) -> Result<Self> {
        let k = map.field();
        let mut out = Subspace::zero(k, map.nrows());
        for b in &source.basis {
            out.insert(map.apply(b)?)?;
        }
        Ok(out)
    }
}

/// Semi-echelon basis of sparse rows: every stored row has leading entry 1 at
/// its pivot column and no entries left of it.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F: Field> {
    field: F,
    ncols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(field: &F, ncols: usize) -> Self {
        SparseEchelon { field: field.clone(), ncols, pivot_row: vec![None; ncols], rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow<F::Elem>] {
        &self.rows
    }

    /// Reduces `v` until no pivot column carries a nonzero entry.
    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        let k = &self.field;
        let Some(start) = v.iter().map(|(c, _)| *c).min() else {
            return Vec::new();
        };
        let mut acc = vec![k.zero(); self.ncols];
        for (c, a) in v {
            acc[*c] = k.add(&acc[*c], a);
        }
        let mut out = Vec::new();
        for c in start..self.ncols {
            if k.is_zero(&acc[c]) {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => {
                    let coef = k.neg(&acc[c]);
                    for (j, val) in &self.rows[r] {
                        k.add_mul_assign(&mut acc[*j], &coef, val);
                    }
                }
                None => out.push((c, std::mem::replace(&mut acc[c], k.zero()))),
            }
        }
        out
    }

    /// Inserts `v`; returns the pivot column of the new row if `v` was
    /// independent of the rows so far.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> Option<usize> {
        let mut r = self.reduce(v);
        let (p, lead) = r.first()?.clone();
        let inv = self.field.inv(&lead).expect("nonzero");
        for (_, a) in r.iter_mut() {
            *a = self.field.mul(a, &inv);
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(r);
        Some(p)
    }

    pub fn has_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    /// Back substitution for a system whose rows read `sum_j a_j x_j + a_rhs = 0`
    /// with the constant stored in column `rhs`, and whose unknowns are the
    /// columns `< rhs`. Free unknowns are set to zero. `None` if some row has
    /// its pivot on the constant column (inconsistent system).
    pub fn solve_homogenized(&self, rhs: usize) -> Option<Vec<F::Elem>> {
        let k = &self.field;
        if self.has_pivot(rhs) {
            return None;
        }
        let mut x = vec![k.zero(); rhs];
        for c in (0..rhs).rev() {
            let Some(r) = self.pivot_row[c] else { continue };
            let mut acc = k.zero();
            for (j, a) in self.rows[r].iter().skip(1) {
                if *j < rhs {
                    k.add_mul_assign(&mut acc, a, &x[*j]);
                } else if *j == rhs {
                    acc = k.add(&acc, a);
                }
            }
            x[c] = k.neg(&acc);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;

    fn k() -> PrimeField {
        PrimeField::f13()
    }

    fn v(xs: &[i64]) -> Vec<u64> {
        xs.iter().map(|&x| k().from_i64(x)).collect()
    }

    #[test]
    fn solve_identity() {
        let a = ScalarMatrix::identity(&k(), 2);
        assert_eq!(
            solve_affine(&a, &v(&[1, 0])).unwrap(),
            AffineSolution::Solved { particular: v(&[1, 0]), kernel: vec![] }
        );
    }

    #[test]
    fn solve_inconsistent() {
        let a = ScalarMatrix::zeros(&k(), 1, 2);
        assert_eq!(solve_affine(&a, &v(&[1])).unwrap(), AffineSolution::NoSolution);
    }

    #[test]
    fn solve_rank_nullity() {
        let a = ScalarMatrix::from_i64(&k(), &[&[1, 1]]);
        match solve_affine(&a, &v(&[0])).unwrap() {
            AffineSolution::Solved { kernel, .. } => assert_eq!(kernel.len(), 1),
            AffineSolution::NoSolution => panic!("homogeneous system is solvable"),
        }
        assert!(solve_affine(&a, &v(&[0, 0])).is_err());
    }

    #[test]
    fn transversal_lines_meet_in_zero() {
        let a = Subspace::spanned_by(&k(), 2, [v(&[1, 0])]).unwrap();
        let b = Subspace::spanned_by(&k(), 2, [v(&[0, 1])]).unwrap();
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
    }

    #[test]
    fn plane_contains_diagonal() {
        let plane = Subspace::full(&k(), 2);
        let diag = Subspace::spanned_by(&k(), 2, [v(&[1, 1])]).unwrap();
        assert_eq!(plane.intersection(&diag).unwrap(), diag);
        assert_eq!(diag.coordinates(&v(&[3, 3])).unwrap(), Some(v(&[3])));
        assert_eq!(diag.coordinates(&v(&[3, 2])).unwrap(), None);
        assert!(diag.contains(&v(&[1])).is_err());
    }

    #[test]
    fn preimage_of_line_under_diagonal_map() {
        // a -> (a, a)
        let map = ScalarMatrix::from_i64(&k(), &[&[1], &[1]]);
        let line = Subspace::spanned_by(&k(), 2, [v(&[1, 0])]).unwrap();
        assert_eq!(Subspace::preimage(&map, &line).unwrap().dim(), 0);
        let diag = Subspace::spanned_by(&k(), 2, [v(&[1, 1])]).unwrap();
        assert_eq!(Subspace::preimage(&map, &diag).unwrap().dim(), 1);
    }

    #[test]
    fn sparse_echelon_back_substitution() {
        // x0 + x1 = 3, x1 = 1  as  x0 + x1 - 3 = 0, x1 - 1 = 0 (rhs column 2)
        let kk = k();
        let mut e = SparseEchelon::new(&kk, 3);
        e.insert(&[(0, 1), (1, 1), (2, kk.from_i64(-3))]);
        e.insert(&[(1, 1), (2, kk.from_i64(-1))]);
        assert_eq!(e.solve_homogenized(2), Some(v(&[2, 1])));
        e.insert(&[(0, 1), (1, 1)]);
        assert_eq!(e.solve_homogenized(2), None);
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(0i64..13, r * c)))
    }

    proptest! {
        #[test]
        fn rref_is_idempotent((r, c, data) in arb_matrix()) {
            let rows: Vec<Vec<u64>> = data.chunks(c).map(|ch| v(ch)).collect();
            let mut m = ScalarMatrix::from_rows(&k(), c, rows).unwrap();
            let p1 = m.rref();
            let snapshot = m.clone();
            let p2 = m.rref();
            prop_assert_eq!(p1, p2);
            prop_assert_eq!(m, snapshot);
            prop_assert!(r >= 1);
        }

        #[test]
        fn affine_solutions_back_substitute((r, c, data) in arb_matrix(), rhs in prop::collection::vec(0i64..13, 4)) {
            let rows: Vec<Vec<u64>> = data.chunks(c).map(|ch| v(ch)).collect();
            let a = ScalarMatrix::from_rows(&k(), c, rows).unwrap();
            let b = v(&rhs[..r]);
            if let AffineSolution::Solved { particular, kernel } = solve_affine(&a, &b).unwrap() {
                prop_assert_eq!(a.apply(&particular).unwrap(), b);
                for w in kernel {
                    prop_assert!(a.apply(&w).unwrap().iter().all(|x| *x == 0));
                }
            } else {
                // inconsistent: b is outside the column space
                let cols = (0..c).map(|j| a.column(j));
                let span = Subspace::spanned_by(&k(), r, cols).unwrap();
                prop_assert!(!span.contains(&b).unwrap());
            }
        }

        #[test]
        fn sparse_and_dense_agree_on_rank((r, c, data) in arb_matrix()) {
            let rows: Vec<Vec<u64>> = data.chunks(c).map(|ch| v(ch)).collect();
            let a = ScalarMatrix::from_rows(&k(), c, rows.clone()).unwrap();
            let mut e = SparseEchelon::new(&k(), c);
            for row in rows {
                let sparse: Vec<(usize, u64)> = row.into_iter().enumerate().filter(|(_, x)| *x != 0).collect();
                e.insert(&sparse);
            }
            prop_assert_eq!(e.rank(), a.rank());
            prop_assert!(r >= 1);
        }
    }
}
