//! The hypersurface ring and its finite-dimensional truncations
//! `R_N = k[x_1..x_v] / ((f) + m^N)`.
//!
//! The relations `u*f mod m^N` are row-reduced over the monomials of degree
//! `< N`, pivoting on the largest monomial, so the surviving standard
//! monomials are the smallest ones in graded-lex order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig};
use crate::linalg::{ScalarMatrix, SparseRow};
use crate::poly::{Monomial, Polynomial};

/// A hypersurface `k[[vars]]/(f)` with `0 != f` in `m^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec<F: Field> {
    field: F,
    variables: Vec<String>,
    f: Polynomial<F>,
}

impl<F: Field> RingSpec<F> {
    pub fn new(field: &F, variables: Vec<String>, f: Polynomial<F>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::Spec("a ring needs at least one variable".into()));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::Spec(format!("variable `{v}` declared twice")));
            }
        }
        if f.nvars() != variables.len() {
            return Err(Error::Spec("equation uses a different number of variables".into()));
        }
        if f.is_zero() {
            return Err(Error::Spec("the equation must be nonzero".into()));
        }
        if f.ord().unwrap_or(0) < 2 {
            return Err(Error::Spec("the equation must lie in the square of the maximal ideal".into()));
        }
        Ok(RingSpec { field: field.clone(), variables, f })
    }

    /// `RingSpec::parse(&k, &["x", "y"], "x^2*y")`.
    pub fn parse(field: &F, variables: &[&str], f: &str) -> Result<Self> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let f = Polynomial::parse(field, &vars, f)?;
        Self::new(field, vars, f)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn equation(&self) -> &Polynomial<F> {
        &self.f
    }

    pub fn poly(&self, s: &str) -> Result<Polynomial<F>> {
        Polynomial::parse(&self.field, &self.variables, s)
    }

    pub fn fmt_poly(&self, p: &Polynomial<F>) -> String {
        p.fmt_with(&self.variables)
    }

    pub fn zero(&self) -> Polynomial<F> {
        Polynomial::zero(&self.field, self.nvars())
    }

    pub fn one(&self) -> Polynomial<F> {
        Polynomial::one(&self.field, self.nvars())
    }

    pub fn var(&self, i: usize) -> Polynomial<F> {
        Polynomial::var(&self.field, self.nvars(), i)
    }

    /// The ring `k[[vars, name]]/(f + name^2)`.
    pub fn with_square_added(&self, name: &str) -> Result<Self> {
        if self.variables.iter().any(|v| v == name) {
            return Err(Error::Usage(format!("variable `{name}` already exists")));
        }
        let mut vars = self.variables.clone();
        vars.push(name.to_string());
        let z = Polynomial::var(&self.field, vars.len(), vars.len() - 1);
        let f = &self.f.extended(1) + &(&z * &z);
        Self::new(&self.field, vars, f)
    }

    pub fn to_json(&self) -> RingSpecJson {
        RingSpecJson {
            variables: self.variables.clone(),
            f: self.fmt_poly(&self.f),
            field: self.field.config(),
        }
    }

    /// Rebuilds a ring from JSON over an already-constructed field, which
    /// must match the JSON's field description.
    pub fn from_json(field: &F, js: &RingSpecJson) -> Result<Self> {
        if field.config() != js.field {
            return Err(Error::Config(format!(
                "ring declared over {:?} but loaded over {:?}",
                js.field,
                field.config()
            )));
        }
        let vars: Vec<&str> = js.variables.iter().map(String::as_str).collect();
        Self::parse(field, &vars, &js.f)
    }
}

/// JSON form `{variables, f, field:{kind,p,i}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpecJson {
    pub variables: Vec<String>,
    pub f: String,
    pub field: FieldConfig,
}

/// `R_N` with an explicit monomial basis.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra<F: Field> {
    spec: RingSpec<F>,
    level: u32,
    /// All monomials of degree `< level`, ascending.
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Indices into `monomials` of the standard monomials, ascending.
    basis: Vec<usize>,
    /// Coordinates (over `basis`) of every monomial in `monomials`.
    reduction: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> TruncatedAlgebra<F> {
    pub fn build(spec: &RingSpec<F>, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Usage("truncation level must be at least 1".into()));
        }
        let k = spec.field().clone();
        let nvars = spec.nvars();
        let monomials = Monomial::below_degree(nvars, level);
        let count = monomials.len();
        let index: HashMap<Monomial, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

        // (f) + m^N is spanned modulo m^N by u*f with deg u + ord f < N.
        // Columns run from the largest monomial down so pivots land on the
        // largest monomial of each relation.
        let ord = spec.equation().ord().expect("nonzero equation");
        let multipliers: Vec<&Monomial> =
            monomials.iter().filter(|u| u.degree() + ord < level).collect();
        let mut rel = ScalarMatrix::zeros(&k, multipliers.len(), count);
        for (r, u) in multipliers.iter().enumerate() {
            for (m, c) in spec.equation().terms() {
                let um = u.mul(m);
                if let Some(&i) = index.get(&um) {
                    rel.set(r, count - 1 - i, c.clone());
                }
            }
        }
        let pivots = rel.rref();
        let mut standard = vec![true; count];
        for &pc in &pivots {
            standard[count - 1 - pc] = false;
        }
        let basis: Vec<usize> = (0..count).filter(|&i| standard[i]).collect();
        let mut basis_pos = vec![usize::MAX; count];
        for (pos, &i) in basis.iter().enumerate() {
            basis_pos[i] = pos;
        }

        let mut reduction: Vec<SparseRow<F::Elem>> = vec![Vec::new(); count];
        for &i in &basis {
            reduction[i] = vec![(basis_pos[i], k.one())];
        }
        for (r, &pc) in pivots.iter().enumerate() {
            let m = count - 1 - pc;
            // m + sum_{standard s} row[s] * s = 0
            let mut coords: SparseRow<F::Elem> = (0..count)
                .filter(|&j| j != pc && !k.is_zero(rel.get(r, j)))
                .map(|j| {
                    let s = count - 1 - j;
                    debug_assert!(standard[s], "RREF leaves only standard monomials off-pivot");
                    (basis_pos[s], k.neg(rel.get(r, j)))
                })
                .collect();
            coords.sort_by_key(|(c, _)| *c);
            reduction[m] = coords;
        }

        Ok(TruncatedAlgebra { spec: spec.clone(), level, monomials, index, basis, reduction })
    }

    pub fn spec(&self) -> &RingSpec<F> {
        &self.spec
    }

    pub fn field(&self) -> &F {
        self.spec.field()
    }

    /// The truncation order `N`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|&i| self.monomials[i].clone()).collect()
    }

    pub fn basis_monomial(&self, b: usize) -> &Monomial {
        &self.monomials[self.basis[b]]
    }

    pub fn zero_vector(&self) -> Vec<F::Elem> {
        vec![self.field().zero(); self.dim()]
    }

    /// Sparse coordinates of a monomial (empty when it vanishes in `R_N`).
    pub fn reduce_monomial(&self, m: &Monomial) -> &[(usize, F::Elem)] {
        if m.degree() >= self.level {
            return &[];
        }
        &self.reduction[self.index[m]]
    }

    pub fn reduce_sparse(&self, p: &Polynomial<F>) -> SparseRow<F::Elem> {
        let k = self.field();
        let mut acc = self.zero_vector();
        self.accumulate(&mut acc, p, None, &k.one());
        acc.into_iter().enumerate().filter(|(_, c)| !k.is_zero(c)).collect()
    }

    pub fn reduce(&self, p: &Polynomial<F>) -> Vec<F::Elem> {
        let mut acc = self.zero_vector();
        self.accumulate(&mut acc, p, None, &self.field().one());
        acc
    }

    /// `acc += scale * reduce(p * shift)`.
    pub fn accumulate(&self, acc: &mut [F::Elem], p: &Polynomial<F>, shift: Option<&Monomial>, scale: &F::Elem) {
        let k = self.field();
        for (m, c) in p.terms() {
            let shifted;
            let m = match shift {
                Some(s) => {
                    shifted = m.mul(s);
                    &shifted
                }
                None => m,
            };
            if m.degree() >= self.level {
                continue;
            }
            let cc = k.mul(c, scale);
            for (b, v) in &self.reduction[self.index[m]] {
                k.add_mul_assign(&mut acc[*b], &cc, v);
            }
        }
    }

    /// The polynomial `sum v_b * b` over the standard monomials.
    pub fn lift(&self, v: &[F::Elem]) -> Polynomial<F> {
        let k = self.field();
        Polynomial::from_terms(
            k,
            self.spec.nvars(),
            v.iter()
                .enumerate()
                .filter(|(_, c)| !k.is_zero(c))
                .map(|(b, c)| (self.basis_monomial(b).clone(), c.clone())),
        )
    }

    pub fn multiply(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.reduce(&(&self.lift(a) * &self.lift(b)))
    }

    /// Matrix of multiplication by `p` on the standard basis.
    pub fn multiplication_operator(&self, p: &Polynomial<F>) -> ScalarMatrix<F> {
        let k = self.field();
        let d = self.dim();
        let mut m = ScalarMatrix::zeros(k, d, d);
        for b in 0..d {
            let mut col = self.zero_vector();
            self.accumulate(&mut col, p, Some(self.basis_monomial(b)), &k.one());
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, b, v);
            }
        }
        m
    }

    /// Sparse columns of multiplication by `p`: entry `b` is `reduce(p * basis_b)`.
    pub fn multiplication_columns(&self, p: &Polynomial<F>) -> Vec<SparseRow<F::Elem>> {
        let k = self.field();
        (0..self.dim())
            .map(|b| {
                let mut col = self.zero_vector();
                self.accumulate(&mut col, p, Some(self.basis_monomial(b)), &k.one());
                col.into_iter().enumerate().filter(|(_, c)| !k.is_zero(c)).collect()
            })
            .collect()
    }

    /// The natural surjection `R_N -> R_lower` for a lower truncation of the same ring.
    pub fn projection_to(&self, lower: &TruncatedAlgebra<F>) -> Result<ScalarMatrix<F>> {
        if lower.spec != self.spec || lower.level > self.level {
            return Err(Error::Usage("projection needs the same ring at a lower level".into()));
        }
        let k = self.field();
        let mut m = ScalarMatrix::zeros(k, lower.dim(), self.dim());
        for b in 0..self.dim() {
            for (i, v) in lower.reduce_monomial(self.basis_monomial(b)) {
                m.set(*i, b, v.clone());
            }
        }
        Ok(m)
    }
}
