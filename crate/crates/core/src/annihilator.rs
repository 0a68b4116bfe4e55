//! Annihilators of `cok phi` for a matrix factorization `(phi, psi)`.
//!
//! `r` annihilates the stable endomorphisms exactly when
//! `phi*alpha + beta*psi = r*I` has a solution over the ring. Solving this
//! exactly with bounded-degree `alpha, beta` certifies membership; its
//! unsolvability in `R_N` certifies non-membership.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::{extract_generators, is_ideal_subspace, truncate_generators, truncate_ideal, IdealSpec};
use crate::linalg::{SparseEchelon, SparseRow, Subspace};
use crate::mf::{MatrixFactorization, PolyMatrix};
use crate::normal_form::{NormalForm, NormalFormSystem, ProductCache};
use crate::poly::Polynomial;
use crate::truncated::TruncatedAlgebra;

/// `phi*alpha + beta*psi - r*I = f*gamma`, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F: Field> {
    pub r: Polynomial<F>,
    pub alpha: PolyMatrix<F>,
    pub beta: PolyMatrix<F>,
    pub gamma: PolyMatrix<F>,
}

impl<F: Field> Witness<F> {
    /// Completes `(alpha, beta)` with the multiple of `f`, if there is one.
    pub fn from_parts(mf: &MatrixFactorization<F>, r: &Polynomial<F>, alpha: PolyMatrix<F>, beta: PolyMatrix<F>) -> Result<Option<Self>> {
        let spec = mf.spec();
        let n = mf.size();
        if alpha.nrows() != n || alpha.ncols() != n || beta.nrows() != n || beta.ncols() != n {
            return Err(Error::Usage(format!("witness matrices must be {n}x{n}")));
        }
        let rest = mf.phi().mul(&alpha)?.add(&beta.mul(mf.psi())?)?.sub(&PolyMatrix::scalar(spec, n, r))?;
        let mut gamma = PolyMatrix::zeros(spec, n, n);
        for i in 0..n {
            for j in 0..n {
                match rest.get(i, j).exact_div(spec.equation()) {
                    Some(q) => gamma.set(i, j, q),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(Witness { r: r.clone(), alpha, beta, gamma }))
    }

    pub fn verify(&self, mf: &MatrixFactorization<F>) -> bool {
        let spec = mf.spec();
        let n = mf.size();
        let lhs = mf
            .phi()
            .mul(&self.alpha)
            .and_then(|a| a.add(&self.beta.mul(mf.psi())?))
            .and_then(|a| a.sub(&PolyMatrix::scalar(spec, n, &self.r)));
        match (lhs, self.gamma.mul(&PolyMatrix::scalar(spec, n, spec.equation()))) {
            (Ok(l), Ok(g)) => l == g,
            _ => false,
        }
    }

    /// Largest entry degree of `alpha` and `beta`.
    pub fn degree(&self) -> u32 {
        self.alpha.max_degree().max(self.beta.max_degree())
    }

    pub fn to_json(&self, mf: &MatrixFactorization<F>) -> WitnessJson {
        let spec = mf.spec();
        WitnessJson {
            r: spec.fmt_poly(&self.r),
            alpha: self.alpha.to_strings(spec),
            beta: self.beta.to_strings(spec),
            gamma: self.gamma.to_strings(spec),
        }
    }

    pub fn from_json(mf: &MatrixFactorization<F>, js: &WitnessJson) -> Result<Self> {
        let spec = mf.spec();
        Ok(Witness {
            r: spec.poly(&js.r)?,
            alpha: PolyMatrix::parse_strings(spec, &js.alpha)?,
            beta: PolyMatrix::parse_strings(spec, &js.beta)?,
            gamma: PolyMatrix::parse_strings(spec, &js.gamma)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub r: String,
    pub alpha: Vec<Vec<String>>,
    pub beta: Vec<Vec<String>>,
    pub gamma: Vec<Vec<String>>,
}

/// `J_k = (row k of phi) + (column k of psi)` for every `k`; their
/// intersection contains the annihilator.
pub fn row_col_bound<F: Field>(mf: &MatrixFactorization<F>) -> Vec<IdealSpec<F>> {
    let n = mf.size();
    (0..n)
        .map(|k| {
            let mut g: Vec<Polynomial<F>> = (0..n).map(|j| mf.phi().get(k, j).clone()).collect();
            g.extend((0..n).map(|i| mf.psi().get(i, k).clone()));
            IdealSpec::new(mf.spec(), g, Some(format!("J_{}", k + 1))).expect("same ring")
        })
        .collect()
}

pub fn row_col_bound_at<F: Field>(mf: &MatrixFactorization<F>, alg: &TruncatedAlgebra<F>) -> Result<Subspace<F>> {
    let mut s = Subspace::full(alg.field(), alg.dim());
    for j in row_col_bound(mf) {
        s = s.intersection(&truncate_ideal(&j, alg)?)?;
    }
    Ok(s)
}

/// The image of `(alpha, beta) -> phi*alpha + beta*psi` in `(R_N)^(n x n)`,
/// held as a sparse echelon form. Coordinate `(i*n + j)*dim + b` is basis
/// monomial `b` of entry `(i, j)`.
pub struct TruncatedImage<'a, F: Field> {
    alg: &'a TruncatedAlgebra<F>,
    n: usize,
    echelon: SparseEchelon<F>,
}

impl<'a, F: Field> TruncatedImage<'a, F> {
    pub fn build(mf: &MatrixFactorization<F>, alg: &'a TruncatedAlgebra<F>) -> Result<Self> {
        if mf.spec() != alg.spec() {
            return Err(Error::Usage("factorization and truncation live over different rings".into()));
        }
        let n = mf.size();
        let d = alg.dim();
        let cols = |m: &PolyMatrix<F>| -> Vec<Vec<SparseRow<F::Elem>>> {
            m.entries().iter().map(|p| alg.multiplication_columns(p)).collect()
        };
        let phi = cols(mf.phi());
        let psi = cols(mf.psi());
        let slot = |i: usize, j: usize| (i * n + j) * d;
        let mut echelon = SparseEchelon::new(alg.field(), n * n * d);
        let mut v = Vec::new();
        // alpha = b*E_kj contributes phi_ik * b to entry (i, j)
        for k in 0..n {
            for j in 0..n {
                for b in 0..d {
                    v.clear();
                    for i in 0..n {
                        v.extend(phi[i * n + k][b].iter().map(|(c, a)| (slot(i, j) + c, a.clone())));
                    }
                    echelon.insert(&v);
                }
            }
        }
        // beta = b*E_ik contributes b * psi_kj to entry (i, j)
        for i in 0..n {
            for k in 0..n {
                for b in 0..d {
                    v.clear();
                    for j in 0..n {
                        v.extend(psi[k * n + j][b].iter().map(|(c, a)| (slot(i, j) + c, a.clone())));
                    }
                    echelon.insert(&v);
                }
            }
        }
        Ok(TruncatedImage { alg, n, echelon })
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// What is left of `r*I` after reduction by the image; zero iff solvable.
    fn residual(&self, r: &[F::Elem]) -> SparseRow<F::Elem> {
        let d = self.alg.dim();
        let k = self.alg.field();
        let mut v = Vec::new();
        for i in 0..self.n {
            for (b, c) in r.iter().enumerate() {
                if !k.is_zero(c) {
                    v.push(((i * self.n + i) * d + b, c.clone()));
                }
            }
        }
        self.echelon.reduce(&v)
    }

    pub fn contains_scalar(&self, r: &Polynomial<F>) -> bool {
        self.residual(&self.alg.reduce(r)).is_empty()
    }

    /// `{ r in R_N : r*I in image }`.
    pub fn scalar_preimage(&self) -> Result<Subspace<F>> {
        let d = self.alg.dim();
        let k = self.alg.field();
        let width = self.n * self.n * d;
        let mut kernel = SparseEchelon::new(k, width + d);
        let mut basis = Vec::new();
        let mut e = self.alg.zero_vector();
        for b in 0..d {
            e[b] = k.one();
            let mut row = self.residual(&e);
            e[b] = k.zero();
            row.push((width + b, k.one()));
            if let Some(p) = kernel.insert(&row) {
                if p >= width {
                    let stored = kernel.rows().last().expect("just inserted");
                    let mut v = self.alg.zero_vector();
                    for (c, a) in stored {
                        v[c - width] = a.clone();
                    }
                    basis.push(v);
                }
            }
        }
        Subspace::spanned_by(k, d, basis)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solvability {
    Solvable,
    Unsolvable,
}

/// Solvability of `phi*alpha + beta*psi = r*I` over `R_N`. Unsolvable
/// proves `r` is not in the annihilator; solvable is evidence only.
pub fn membership_truncated<F: Field>(mf: &MatrixFactorization<F>, r: &Polynomial<F>, alg: &TruncatedAlgebra<F>) -> Result<Solvability> {
    let image = TruncatedImage::build(mf, alg)?;
    Ok(if image.contains_scalar(r) { Solvability::Solvable } else { Solvability::Unsolvable })
}

/// The annihilator at level `N` with greedily extracted generators.
#[derive(Clone, Debug)]
pub struct TruncatedAnnihilator<F: Field> {
    pub level: u32,
    pub subspace: Subspace<F>,
    pub generators: Vec<Polynomial<F>>,
}

pub fn annihilator_truncated<F: Field>(mf: &MatrixFactorization<F>, alg: &TruncatedAlgebra<F>) -> Result<TruncatedAnnihilator<F>> {
    let subspace = TruncatedImage::build(mf, alg)?.scalar_preimage()?;
    if !is_ideal_subspace(&subspace, alg)? {
        return Err(Error::Spec(format!("annihilator of {} at level {} is not an ideal", mf.label(), alg.level())));
    }
    let generators = extract_generators(&subspace, alg)?;
    Ok(TruncatedAnnihilator { level: alg.level(), subspace, generators })
}

/// Exact search for a witness with `deg alpha, deg beta <= degree`.
///
/// Unknowns are the coefficients of `alpha` (row-major) then `beta`
/// (row-major) on monomials in normal form; the equations say the normal
/// form of each entry of `phi*alpha + beta*psi - r*I` vanishes.
pub fn witness_search<F: Field>(mf: &MatrixFactorization<F>, r: &Polynomial<F>, degree: u32) -> Result<Option<Witness<F>>> {
    let spec = mf.spec();
    let k = spec.field();
    let n = mf.size();
    let nf = NormalForm::new(spec);
    let mons = nf.standard_monomials(degree);
    let m = mons.len();
    let block = n * n * m;
    let mut sys = NormalFormSystem::new(k, 2 * block);
    let mut cache = ProductCache::new(&nf);
    for a in 0..n {
        for j in 0..n {
            for (mi, mon) in mons.iter().enumerate() {
                // alpha_aj feeds entry (i, j) through phi_ia
                let unknown = (a * n + j) * m + mi;
                for i in 0..n {
                    let p = mf.phi().get(i, a);
                    if !p.is_zero() {
                        sys.add_unknown_term(i * n + j, unknown, cache.get(i * n + a, p, mon));
                    }
                }
            }
        }
    }
    for i in 0..n {
        for a in 0..n {
            for (mi, mon) in mons.iter().enumerate() {
                // beta_ia feeds entry (i, j) through psi_aj
                let unknown = block + (i * n + a) * m + mi;
                for j in 0..n {
                    let p = mf.psi().get(a, j);
                    if !p.is_zero() {
                        sys.add_unknown_term(i * n + j, unknown, cache.get(n * n + a * n + j, p, mon));
                    }
                }
            }
        }
    }
    let minus_r = -&nf.reduce(r);
    for i in 0..n {
        sys.add_constant(i * n + i, &minus_r);
    }
    let Some(sol) = sys.solve() else { return Ok(None) };
    let matrix = |offset: usize| -> PolyMatrix<F> {
        let mut out = PolyMatrix::zeros(spec, n, n);
        for p in 0..n {
            for q in 0..n {
                let base = offset + (p * n + q) * m;
                let terms = mons.iter().enumerate().map(|(mi, mon)| (mon.clone(), sol[base + mi].clone()));
                out.set(p, q, Polynomial::from_terms(k, spec.nvars(), terms));
            }
        }
        out
    };
    let w = Witness::from_parts(mf, r, matrix(0), matrix(block))?;
    match w {
        Some(w) if w.verify(mf) => Ok(Some(w)),
        _ => Err(Error::Spec(format!("witness for {} failed exact verification", spec.fmt_poly(r)))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every generator of the level-`N` annihilator has an exact witness.
    CertifiedExact,
    /// Some but not all generators are witnessed.
    BoundedGap,
    /// No generator is witnessed.
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct AnnihilatorResult<F: Field> {
    pub label: String,
    pub level: u32,
    pub witness_degree: u32,
    pub lower: Vec<Witness<F>>,
    /// Generators with no witness within the degree bound.
    pub unwitnessed: Vec<Polynomial<F>>,
    pub upper: TruncatedAnnihilator<F>,
    /// `upper` lies inside the truncated row/column bound.
    pub within_row_col_bound: bool,
    pub status: Status,
}

impl<F: Field> AnnihilatorResult<F> {
    /// The certified lower bound as an ideal.
    pub fn lower_ideal(&self, mf: &MatrixFactorization<F>) -> IdealSpec<F> {
        let gens = self.lower.iter().map(|w| w.r.clone()).collect();
        IdealSpec::new(mf.spec(), gens, Some(format!("Ann({})", self.label))).expect("same ring")
    }

    pub fn upper_ideal(&self, mf: &MatrixFactorization<F>) -> IdealSpec<F> {
        IdealSpec::new(mf.spec(), self.upper.generators.clone(), None).expect("same ring")
    }

    pub fn to_json(&self, mf: &MatrixFactorization<F>) -> AnnihilatorJson {
        let spec = mf.spec();
        AnnihilatorJson {
            label: self.label.clone(),
            n_trunc: self.level,
            witness_degree: self.witness_degree,
            lower: self.lower.iter().map(|w| LowerJson { gen: spec.fmt_poly(&w.r), witness: w.to_json(mf) }).collect(),
            unwitnessed: self.unwitnessed.iter().map(|p| spec.fmt_poly(p)).collect(),
            upper: UpperJson { generators: self.upper_ideal(mf).generator_strings(), dim: self.upper.subspace.dim() },
            within_row_col_bound: self.within_row_col_bound,
            status: self.status,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerJson {
    pub gen: String,
    pub witness: WitnessJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperJson {
    pub generators: Vec<String>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilatorJson {
    pub label: String,
    #[serde(rename = "N")]
    pub n_trunc: u32,
    #[serde(rename = "D")]
    pub witness_degree: u32,
    pub lower: Vec<LowerJson>,
    pub unwitnessed: Vec<String>,
    pub upper: UpperJson,
    pub within_row_col_bound: bool,
    pub status: Status,
}

pub fn annihilate<F: Field>(mf: &MatrixFactorization<F>, level: u32, degree: u32) -> Result<AnnihilatorResult<F>> {
    let alg = TruncatedAlgebra::build(mf.spec(), level)?;
    annihilate_in(mf, &alg, degree)
}

pub fn annihilate_in<F: Field>(mf: &MatrixFactorization<F>, alg: &TruncatedAlgebra<F>, degree: u32) -> Result<AnnihilatorResult<F>> {
    let upper = annihilator_truncated(mf, alg)?;
    let mut lower = Vec::new();
    let mut unwitnessed = Vec::new();
    for g in &upper.generators {
        match witness_search(mf, g, degree)? {
            Some(w) => lower.push(w),
            None => unwitnessed.push(g.clone()),
        }
    }
    let lower_gens: Vec<Polynomial<F>> = lower.iter().map(|w| w.r.clone()).collect();
    let lower_span = truncate_generators(&lower_gens, alg)?;
    if !lower_span.is_subspace_of(&upper.subspace)? {
        return Err(Error::Spec(format!("certified generators of {} escape the truncated annihilator", mf.label())));
    }
    let status = if lower_span == upper.subspace {
        Status::CertifiedExact
    } else if !lower.is_empty() {
        Status::BoundedGap
    } else {
        Status::Undetermined
    };
    let within_row_col_bound = upper.subspace.is_subspace_of(&row_col_bound_at(mf, alg)?)?;
    Ok(AnnihilatorResult {
        label: mf.label().to_string(),
        level: alg.level(),
        witness_degree: degree,
        lower,
        unwitnessed,
        upper,
        within_row_col_bound,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Ring;
    use crate::field::PrimeField;

    fn k() -> PrimeField {
        PrimeField::f13()
    }

    #[test]
    fn row_col_examples() {
        let phi = Ring::AInf1.entry(&k(), "phi", Some(3)).unwrap().mf;
        let j = row_col_bound(&phi);
        assert_eq!(j.len(), 2);
        let alg = TruncatedAlgebra::build(phi.spec(), 8).unwrap();
        let expect = IdealSpec::parse(phi.spec(), &["x", "y^3"]).unwrap();
        for jk in &j {
            assert_eq!(truncate_ideal(jk, &alg).unwrap(), truncate_ideal(&expect, &alg).unwrap());
        }
        let psi = Ring::AInf2.entry(&k(), "psi+", Some(2)).unwrap().mf;
        let alg = TruncatedAlgebra::build(psi.spec(), 7).unwrap();
        let expect = IdealSpec::parse(psi.spec(), &["x", "y^2", "z"]).unwrap();
        assert_eq!(row_col_bound_at(&psi, &alg).unwrap(), truncate_ideal(&expect, &alg).unwrap());
    }

    #[test]
    fn truncated_membership_examples() {
        let phi = Ring::AInf1.entry(&k(), "phi", Some(1)).unwrap().mf;
        let alg = TruncatedAlgebra::build(phi.spec(), 6).unwrap();
        assert_eq!(membership_truncated(&phi, &phi.spec().poly("x").unwrap(), &alg).unwrap(), Solvability::Solvable);
        assert_eq!(membership_truncated(&phi, &phi.spec().zero(), &alg).unwrap(), Solvability::Solvable);
        let gamma = Ring::DInf1.entry(&k(), "gamma", Some(1)).unwrap().mf;
        let alg = TruncatedAlgebra::build(gamma.spec(), 6).unwrap();
        assert_eq!(membership_truncated(&gamma, &gamma.spec().poly("x").unwrap(), &alg).unwrap(), Solvability::Unsolvable);
    }

    #[test]
    fn annihilator_examples() {
        for n in 1..=3 {
            let phi = Ring::AInf1.entry(&k(), "phi", Some(n)).unwrap();
            let alg = TruncatedAlgebra::build(phi.mf.spec(), 10).unwrap();
            let ann = annihilator_truncated(&phi.mf, &alg).unwrap();
            assert_eq!(ann.subspace, truncate_ideal(&phi.expected_annihilator, &alg).unwrap());
        }
        let y = Ring::DInf1.entry(&k(), "y", None).unwrap();
        let alg = TruncatedAlgebra::build(y.mf.spec(), 10).unwrap();
        let ann = annihilator_truncated(&y.mf, &alg).unwrap();
        assert_eq!(IdealSpec::new(y.mf.spec(), ann.generators, None).unwrap().to_string(), "(y, x^2)");
        for slug in ["gamma", "delta"] {
            let e = Ring::DInf1.entry(&k(), slug, Some(2)).unwrap();
            let ann = annihilator_truncated(&e.mf, &alg).unwrap();
            assert_eq!(ann.subspace, truncate_ideal(&e.expected_annihilator, &alg).unwrap());
        }
    }

    #[test]
    fn witness_examples() {
        let phi = Ring::AInf1.entry(&k(), "phi", Some(2)).unwrap().mf;
        let w = witness_search(&phi, &phi.spec().poly("y^2").unwrap(), 1).unwrap().unwrap();
        assert!(w.verify(&phi));
        let delta = Ring::DInf2.entry(&k(), "delta+", Some(2)).unwrap().mf;
        let w = witness_search(&delta, &delta.spec().poly("z").unwrap(), 0).unwrap().unwrap();
        assert_eq!(w.degree(), 0);
        let gamma = Ring::DInf1.entry(&k(), "gamma", Some(1)).unwrap().mf;
        assert!(witness_search(&gamma, &gamma.spec().poly("x").unwrap(), 4).unwrap().is_none());
        let mut bad = w.clone();
        bad.r = delta.spec().poly("x").unwrap();
        assert!(!bad.verify(&delta));
    }

    #[test]
    fn annihilate_examples() {
        let phi = Ring::AInf1.entry(&k(), "phi", Some(2)).unwrap().mf;
        let r = annihilate(&phi, 10, 4).unwrap();
        assert_eq!(r.status, Status::CertifiedExact);
        assert_eq!(r.lower_ideal(&phi).to_string(), "(x, y^2)");
        assert!(r.within_row_col_bound);
        let beta = Ring::DInf2.entry(&k(), "beta-", None).unwrap().mf;
        let r = annihilate(&beta, 8, 2).unwrap();
        assert_eq!(r.status, Status::CertifiedExact);
        assert_eq!(r.lower_ideal(&beta).to_string(), "(x, z)");
        let gamma = Ring::DInf1.entry(&k(), "gamma", Some(1)).unwrap().mf;
        let r = annihilate(&gamma, 8, 1).unwrap();
        assert_eq!(r.upper_ideal(&gamma).to_string(), "(x^2, x*y, y^2)");
        let js = serde_json::to_value(r.to_json(&gamma)).unwrap();
        assert_eq!(js["N"], 8);
        let w = &r.lower[0];
        assert_eq!(&Witness::from_json(&gamma, &w.to_json(&gamma)).unwrap(), w);
    }
}
