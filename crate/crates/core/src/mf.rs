//! Matrix factorizations `(phi, psi)` with `phi*psi = psi*phi = f*I`, standing
//! for the maximal Cohen–Macaulay module `cok phi`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;
use crate::truncated::{RingSpec, RingSpecJson};

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix<F: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<F>>,
}

impl<F: Field> fmt::Debug for PolyMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<&Polynomial<F>>> = (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<F: Field> PolyMatrix<F> {
    pub fn zeros(spec: &RingSpec<F>, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![spec.zero(); rows * cols] }
    }

    /// `p * I_n`.
    pub fn scalar(spec: &RingSpec<F>, n: usize, p: &Polynomial<F>) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn identity(spec: &RingSpec<F>, n: usize) -> Self {
        Self::scalar(spec, n, &spec.one())
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial<F>>>) -> Result<Self> {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Usage("ragged polynomial matrix".into()));
            }
            entries.extend(r);
        }
        Ok(PolyMatrix { rows: nrows, cols, entries })
    }

    /// Parses a matrix of polynomial strings, e.g. `&[&["x", "y^2"], &["0", "-x"]]`.
    pub fn parse(spec: &RingSpec<F>, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| spec.poly(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn parse_strings(spec: &RingSpec<F>, rows: &[Vec<String>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| spec.poly(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<F>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Polynomial<F>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Largest total degree of an entry (0 for the zero matrix).
    pub fn max_degree(&self) -> u32 {
        self.entries.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = self.get(i, 0) * rhs.get(0, j);
                for l in 1..self.cols {
                    let a = self.get(i, l);
                    let b = rhs.get(l, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix { rows: self.rows, cols: rhs.cols, entries })
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(&Polynomial<F>, &Polynomial<F>) -> Polynomial<F>) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Usage("matrix shapes differ".into()));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| op(a, b)).collect();
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, p: &Polynomial<F>) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * p).collect() }
    }

    pub fn neg(&self) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| -e).collect() }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Usage("block shapes do not fit".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = match (i < a.rows, j < a.cols) {
                    (true, true) => a.get(i, j),
                    (true, false) => b.get(i, j - a.cols),
                    (false, true) => c.get(i - a.rows, j),
                    (false, false) => d.get(i - a.rows, j - a.cols),
                };
                entries.push(e.clone());
            }
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn block_diag(spec: &RingSpec<F>, a: &Self, b: &Self) -> Result<Self> {
        let zr = Self::zeros(spec, a.rows, b.cols);
        let zl = Self::zeros(spec, b.rows, a.cols);
        Self::blocks(a, &zr, &zl, b)
    }

    /// Adds `extra` trailing variables to every entry.
    pub fn extended(&self, extra: usize) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e.extended(extra)).collect() }
    }

    pub fn to_strings(&self, spec: &RingSpec<F>) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| spec.fmt_poly(self.get(i, j))).collect()).collect()
    }
}

/// A square matrix factorization of the ring equation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixFactorization<F: Field> {
    spec: RingSpec<F>,
    phi: PolyMatrix<F>,
    psi: PolyMatrix<F>,
    label: String,
}

/// First entry where `phi*psi` or `psi*phi` differs from `f*I` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub product: String,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} entry ({}, {}) is `{}`, expected `{}`",
            self.product, self.row, self.col, self.found, self.expected
        )
    }
}

impl<F: Field> MatrixFactorization<F> {
    /// Checks shapes only; see [`Self::validate`] for the defining identity.
    pub fn new(spec: &RingSpec<F>, phi: PolyMatrix<F>, psi: PolyMatrix<F>, label: impl Into<String>) -> Result<Self> {
        if !phi.is_square() || !psi.is_square() || phi.nrows() != psi.nrows() {
            return Err(Error::Usage(format!(
                "factorization needs two square matrices of equal size, got {}x{} and {}x{}",
                phi.nrows(),
                phi.ncols(),
                psi.nrows(),
                psi.ncols()
            )));
        }
        if phi.nrows() == 0 {
            return Err(Error::Usage("factorization of size 0".into()));
        }
        let nvars = spec.nvars();
        if phi.entries().iter().chain(psi.entries()).any(|p| p.nvars() != nvars) {
            return Err(Error::Usage("matrix entries use a different variable set".into()));
        }
        Ok(MatrixFactorization { spec: spec.clone(), phi, psi, label: label.into() })
    }

    /// Parses both matrices from strings; does not validate.
    pub fn parse(spec: &RingSpec<F>, phi: &[&[&str]], psi: &[&[&str]], label: &str) -> Result<Self> {
        Self::new(spec, PolyMatrix::parse(spec, phi)?, PolyMatrix::parse(spec, psi)?, label)
    }

    pub fn spec(&self) -> &RingSpec<F> {
        &self.spec
    }

    pub fn phi(&self) -> &PolyMatrix<F> {
        &self.phi
    }

    pub fn psi(&self) -> &PolyMatrix<F> {
        &self.psi
    }

    pub fn size(&self) -> usize {
        self.phi.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `Ok(None)` when `phi*psi = psi*phi = f*I` holds exactly.
    pub fn validate(&self) -> Result<Option<Violation>> {
        let target = PolyMatrix::scalar(&self.spec, self.size(), self.spec.equation());
        for (name, prod) in [("phi*psi", self.phi.mul(&self.psi)?), ("psi*phi", self.psi.mul(&self.phi)?)] {
            for i in 0..self.size() {
                for j in 0..self.size() {
                    if prod.get(i, j) != target.get(i, j) {
                        return Ok(Some(Violation {
                            product: name.to_string(),
                            row: i + 1,
                            col: j + 1,
                            expected: self.spec.fmt_poly(target.get(i, j)),
                            found: self.spec.fmt_poly(prod.get(i, j)),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.validate(), Ok(None))
    }

    /// `(psi, phi)`, presenting the syzygy of `cok phi`.
    pub fn swap(&self) -> Self {
        MatrixFactorization {
            spec: self.spec.clone(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            label: format!("syz({})", self.label),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::Usage("direct sum of factorizations over different rings".into()));
        }
        Ok(MatrixFactorization {
            spec: self.spec.clone(),
            phi: PolyMatrix::block_diag(&self.spec, &self.phi, &other.phi)?,
            psi: PolyMatrix::block_diag(&self.spec, &self.psi, &other.psi)?,
            label: format!("{} ⊕ {}", self.label, other.label),
        })
    }

    /// The factorization `Phi = Psi = [[z I, phi], [psi, -z I]]` of `f + z^2`
    /// over the ring with the new variable appended.
    pub fn knoerrer_double(&self, var: &str) -> Result<Self> {
        let spec = self.spec.with_square_added(var)?;
        let n = self.size();
        let z = spec.var(spec.nvars() - 1);
        let zi = PolyMatrix::scalar(&spec, n, &z);
        let phi = self.phi.extended(1);
        let psi = self.psi.extended(1);
        let big = PolyMatrix::blocks(&zi, &phi, &psi, &zi.neg())?;
        Ok(MatrixFactorization { spec, phi: big.clone(), psi: big, label: format!("double({})", self.label) })
    }

    pub fn to_json(&self) -> MfJson {
        MfJson {
            spec: self.spec.to_json(),
            n: self.size(),
            phi: self.phi.to_strings(&self.spec),
            psi: self.psi.to_strings(&self.spec),
            label: self.label.clone(),
        }
    }

    pub fn from_json(field: &F, js: &MfJson) -> Result<Self> {
        let spec = RingSpec::from_json(field, &js.spec)?;
        let phi = PolyMatrix::parse_strings(&spec, &js.phi)?;
        let psi = PolyMatrix::parse_strings(&spec, &js.psi)?;
        if phi.nrows() != js.n {
            return Err(Error::Usage(format!("declared size {} but phi has {} rows", js.n, phi.nrows())));
        }
        Self::new(&spec, phi, psi, js.label.clone())
    }
}

/// JSON form `{spec, n, phi, psi, label}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfJson {
    pub spec: RingSpecJson,
    pub n: usize,
    pub phi: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
    pub label: String,
}
