//! Normal forms modulo the ring equation in the polynomial ring.
//!
//! Remainders on division by `f` are canonical because `{f}` is a Gröbner
//! basis of `(f)`. Exact identities "modulo f" therefore reduce to linear
//! algebra on remainders, and the `f`-multiple is recovered by exact division.

use std::collections::{BTreeMap, HashMap};

use crate::field::Field;
use crate::linalg::SparseEchelon;
use crate::poly::{Monomial, Polynomial};
use crate::truncated::RingSpec;

#[derive(Clone, Debug)]
pub struct NormalForm<F: Field> {
    spec: RingSpec<F>,
    lead: Monomial,
}

impl<F: Field> NormalForm<F> {
    pub fn new(spec: &RingSpec<F>) -> Self {
        let lead = spec.equation().leading_term().expect("nonzero equation").0.clone();
        NormalForm { spec: spec.clone(), lead }
    }

    pub fn spec(&self) -> &RingSpec<F> {
        &self.spec
    }

    pub fn reduce(&self, p: &Polynomial<F>) -> Polynomial<F> {
        p.div_rem(self.spec.equation()).1
    }

    /// Monomials of degree `<= bound` not divisible by the leading monomial of `f`.
    pub fn standard_monomials(&self, bound: u32) -> Vec<Monomial> {
        Monomial::below_degree(self.spec.nvars(), bound + 1)
            .into_iter()
            .filter(|m| !self.lead.divides(m))
            .collect()
    }
}

/// A linear system whose unknowns are coefficients and whose equations say
/// that a linear combination of polynomials has zero normal form.
///
/// Each unknown carries the polynomial it multiplies, already in normal
/// form. Equations are indexed by `(slot, monomial)`, a slot being e.g. a
/// matrix entry.
pub struct NormalFormSystem<F: Field> {
    field: F,
    unknowns: usize,
    rows: BTreeMap<(usize, Monomial), Vec<(usize, F::Elem)>>,
}

impl<F: Field> NormalFormSystem<F> {
    pub fn new(field: &F, unknowns: usize) -> Self {
        NormalFormSystem { field: field.clone(), unknowns, rows: BTreeMap::new() }
    }

    /// Adds `unknown * nf` to the equations of `slot`.
    pub fn add_unknown_term(&mut self, slot: usize, unknown: usize, nf: &Polynomial<F>) {
        for (m, c) in nf.terms() {
            self.rows.entry((slot, m.clone())).or_default().push((unknown, c.clone()));
        }
    }

    /// Adds the constant `nf` to the equations of `slot`.
    pub fn add_constant(&mut self, slot: usize, nf: &Polynomial<F>) {
        let rhs = self.unknowns;
        for (m, c) in nf.terms() {
            self.rows.entry((slot, m.clone())).or_default().push((rhs, c.clone()));
        }
    }

    /// Solves `sum unknowns + constants = 0`. Free unknowns are zero.
    pub fn solve(self) -> Option<Vec<F::Elem>> {
        let k = self.field;
        let mut ech = SparseEchelon::new(&k, self.unknowns + 1);
        for (_, mut row) in self.rows {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Vec<(usize, F::Elem)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = k.add(lv, &v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !k.is_zero(v));
            ech.insert(&merged);
        }
        ech.solve_homogenized(self.unknowns)
    }
}

/// Memoized normal forms of `p * m` for polynomials reused across many monomials.
pub struct ProductCache<'a, F: Field> {
    nf: &'a NormalForm<F>,
    cache: HashMap<(usize, Monomial), Polynomial<F>>,
}

impl<'a, F: Field> ProductCache<'a, F> {
    pub fn new(nf: &'a NormalForm<F>) -> Self {
        ProductCache { nf, cache: HashMap::new() }
    }

    /// Normal form of `polys[key] * m`; `key` identifies the polynomial.
    pub fn get(&mut self, key: usize, p: &Polynomial<F>, m: &Monomial) -> &Polynomial<F> {
        let nf = self.nf;
        self.cache.entry((key, m.clone())).or_insert_with(|| nf.reduce(&p.mul_monomial(m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn standard_monomials_avoid_the_leading_term() {
        let s = RingSpec::parse(&PrimeField::f13(), &["x", "y", "z"], "x^2*y + z^2").unwrap();
        let nf = NormalForm::new(&s);
        let std = nf.standard_monomials(7);
        assert_eq!(std.len(), 120 - 35);
        assert!(nf.reduce(s.equation()).is_zero());
    }

    #[test]
    fn solves_a_cofactor_problem() {
        // find a, b with a*x + b*y = x*y + y^2 over k[x,y]/(x^2)
        let s = RingSpec::parse(&PrimeField::f13(), &["x", "y"], "x^2").unwrap();
        let nf = NormalForm::new(&s);
        let mons = nf.standard_monomials(1);
        let gens = [s.poly("x").unwrap(), s.poly("y").unwrap()];
        let mut sys = NormalFormSystem::new(s.field(), 2 * mons.len());
        for (g, gp) in gens.iter().enumerate() {
            for (i, m) in mons.iter().enumerate() {
                sys.add_unknown_term(0, g * mons.len() + i, &nf.reduce(&gp.mul_monomial(m)));
            }
        }
        sys.add_constant(0, &(-&s.poly("x*y + y^2").unwrap()));
        let sol = sys.solve().unwrap();
        let combo = gens.iter().enumerate().fold(s.zero(), |acc, (g, gp)| {
            mons.iter().enumerate().fold(acc, |acc, (i, m)| {
                &acc + &gp.mul_monomial(m).scale(&sol[g * mons.len() + i])
            })
        });
        assert_eq!(nf.reduce(&combo), s.poly("x*y + y^2").unwrap());
    }
}
