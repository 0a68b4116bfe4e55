//! Ideals of the hypersurface ring, decided at a truncation level.
//!
//! Membership is split into two one-sided certificates: an exact cofactor
//! expression proves `p in I`, and `p` falling outside `I + m^N` proves
//! `p not in I` (ideals of a complete local ring are closed).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Subspace;
use crate::normal_form::{NormalForm, NormalFormSystem};
use crate::poly::{Monomial, Polynomial};
use crate::truncated::{RingSpec, RingSpecJson, TruncatedAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec<F: Field> {
    spec: RingSpec<F>,
    generators: Vec<Polynomial<F>>,
    name: Option<String>,
}

impl<F: Field> IdealSpec<F> {
    /// Zero generators are dropped; the empty list is the zero ideal.
    pub fn new(spec: &RingSpec<F>, generators: Vec<Polynomial<F>>, name: Option<String>) -> Result<Self> {
        if generators.iter().any(|g| g.nvars() != spec.nvars()) {
            return Err(Error::Usage("generator uses a different variable set".into()));
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealSpec { spec: spec.clone(), generators, name })
    }

    pub fn parse(spec: &RingSpec<F>, generators: &[&str]) -> Result<Self> {
        let gens = generators.iter().map(|g| spec.poly(g)).collect::<Result<Vec<_>>>()?;
        Self::new(spec, gens, None)
    }

    pub fn zero(spec: &RingSpec<F>) -> Self {
        IdealSpec { spec: spec.clone(), generators: Vec::new(), name: None }
    }

    pub fn unit(spec: &RingSpec<F>) -> Self {
        IdealSpec { spec: spec.clone(), generators: vec![spec.one()], name: None }
    }

    /// The maximal ideal `(x_1, .., x_v)`.
    pub fn maximal(spec: &RingSpec<F>) -> Self {
        IdealSpec { spec: spec.clone(), generators: (0..spec.nvars()).map(|i| spec.var(i)).collect(), name: Some("m".into()) }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn spec(&self) -> &RingSpec<F> {
        &self.spec
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Generators by ascending degree, then descending leading monomial
    /// (`x, z, x^2, x*y, y^3`).
    pub fn sorted_generators(&self) -> Vec<Polynomial<F>> {
        let mut g = self.generators.clone();
        g.sort_by(|a, b| {
            let la = a.leading_term().map(|t| t.0.clone());
            let lb = b.leading_term().map(|t| t.0.clone());
            a.degree().cmp(&b.degree()).then_with(|| lb.cmp(&la)).then_with(|| a.num_terms().cmp(&b.num_terms()))
        });
        g
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.sorted_generators().iter().map(|g| self.spec.fmt_poly(g)).collect()
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        check_same_ring(&self.spec, &other.spec)?;
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Self::new(&self.spec, g, None)
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson { spec: self.spec.to_json(), generators: self.generator_strings(), name: self.name.clone() }
    }

    pub fn from_json(field: &F, js: &IdealJson) -> Result<Self> {
        let spec = RingSpec::from_json(field, &js.spec)?;
        let gens = js.generators.iter().map(|g| spec.poly(g)).collect::<Result<Vec<_>>>()?;
        Self::new(&spec, gens, js.name.clone())
    }
}

impl<F: Field> fmt::Display for IdealSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "({})", self.generator_strings().join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub spec: RingSpecJson,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn check_same_ring<F: Field>(a: &RingSpec<F>, b: &RingSpec<F>) -> Result<()> {
    if a != b {
        return Err(Error::Usage("ideals live in different rings".into()));
    }
    Ok(())
}

/// `span{ reduce(g * b) }` over generators `g` and basis monomials `b`.
pub fn truncate_ideal<F: Field>(ideal: &IdealSpec<F>, alg: &TruncatedAlgebra<F>) -> Result<Subspace<F>> {
    check_same_ring(&ideal.spec, alg.spec())?;
    truncate_generators(ideal.generators(), alg)
}

pub(crate) fn truncate_generators<F: Field>(gens: &[Polynomial<F>], alg: &TruncatedAlgebra<F>) -> Result<Subspace<F>> {
    let k = alg.field();
    let mut s = Subspace::zero(k, alg.dim());
    for g in gens {
        for b in 0..alg.dim() {
            let mut v = alg.zero_vector();
            alg.accumulate(&mut v, g, Some(alg.basis_monomial(b)), &k.one());
            s.insert(v)?;
            if s.dim() == alg.dim() {
                return Ok(s);
            }
        }
    }
    Ok(s)
}

/// Whether a subspace of `R_N` is closed under multiplication by every variable.
pub fn is_ideal_subspace<F: Field>(s: &Subspace<F>, alg: &TruncatedAlgebra<F>) -> Result<bool> {
    for i in 0..alg.spec().nvars() {
        let op = alg.multiplication_operator(&alg.spec().var(i));
        for b in s.basis() {
            if !s.contains(&op.apply(b)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Greedy generators of an ideal subspace: walk the echelon basis (pivots on
/// the smallest monomials, so by ascending degree) and keep each vector not
/// yet in the ideal generated so far.
pub fn extract_generators<F: Field>(s: &Subspace<F>, alg: &TruncatedAlgebra<F>) -> Result<Vec<Polynomial<F>>> {
    let mut gens = Vec::new();
    let mut generated = Subspace::zero(alg.field(), alg.dim());
    for v in s.basis() {
        if generated.dim() == s.dim() {
            break;
        }
        if generated.contains(v)? {
            continue;
        }
        let g = alg.lift(v);
        generated = generated.sum(&truncate_generators(std::slice::from_ref(&g), alg)?)?;
        gens.push(g);
    }
    Ok(gens)
}

/// Outcome of [`member`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership<F: Field> {
    /// `p = sum cofactors[i] * generators[i] + multiple_of_f * f` exactly.
    YesCertified { cofactors: Vec<Polynomial<F>>, multiple_of_f: Polynomial<F> },
    /// `p` is not in `I + m^level`.
    NoCertified { level: u32 },
    Undetermined,
}

impl<F: Field> Membership<F> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::YesCertified { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Membership::NoCertified { .. })
    }
}

/// Searches cofactors of degree `<= degree_bound` with
/// `p = sum h_i g_i + h_0 f`, exactly in the polynomial ring.
pub fn cofactor_search<F: Field>(
    p: &Polynomial<F>,
    ideal: &IdealSpec<F>,
    degree_bound: u32,
) -> Option<(Vec<Polynomial<F>>, Polynomial<F>)> {
    let spec = ideal.spec();
    let nf = NormalForm::new(spec);
    let mons = nf.standard_monomials(degree_bound);
    let gens = ideal.generators();
    let mut sys = NormalFormSystem::new(spec.field(), gens.len() * mons.len());
    for (gi, g) in gens.iter().enumerate() {
        for (mi, m) in mons.iter().enumerate() {
            sys.add_unknown_term(0, gi * mons.len() + mi, &nf.reduce(&g.mul_monomial(m)));
        }
    }
    sys.add_constant(0, &(-&nf.reduce(p)));
    let sol = sys.solve()?;
    let k = spec.field();
    let cofactors: Vec<Polynomial<F>> = (0..gens.len())
        .map(|gi| {
            Polynomial::from_terms(
                k,
                spec.nvars(),
                mons.iter().enumerate().map(|(mi, m)| (m.clone(), sol[gi * mons.len() + mi].clone())),
            )
        })
        .collect();
    let combo = gens.iter().zip(&cofactors).fold(spec.zero(), |acc, (g, h)| &acc + &(g * h));
    let multiple = (p - &combo).exact_div(spec.equation())?;
    Some((cofactors, multiple))
}

pub fn member<F: Field>(p: &Polynomial<F>, ideal: &IdealSpec<F>, level: u32, degree_bound: u32) -> Result<Membership<F>> {
    if p.nvars() != ideal.spec().nvars() {
        return Err(Error::Usage("polynomial uses a different variable set".into()));
    }
    let alg = TruncatedAlgebra::build(ideal.spec(), level)?;
    if !truncate_ideal(ideal, &alg)?.contains(&alg.reduce(p))? {
        return Ok(Membership::NoCertified { level });
    }
    Ok(match cofactor_search(p, ideal, degree_bound) {
        Some((cofactors, multiple_of_f)) => Membership::YesCertified { cofactors, multiple_of_f },
        None => Membership::Undetermined,
    })
}

/// An ideal known at a truncation level, with generators when they could
/// be extracted and re-verified two levels higher.
#[derive(Clone, Debug)]
pub struct IdealAtLevel<F: Field> {
    pub level: u32,
    pub subspace: Subspace<F>,
    pub generators: Option<Vec<Polynomial<F>>>,
}

impl<F: Field> IdealAtLevel<F> {
    pub fn ideal(&self, spec: &RingSpec<F>) -> Option<IdealSpec<F>> {
        self.generators.as_ref().map(|g| IdealSpec::new(spec, g.clone(), None).expect("same ring"))
    }
}

pub fn sum_at<F: Field>(a: &IdealSpec<F>, b: &IdealSpec<F>, alg: &TruncatedAlgebra<F>) -> Result<Subspace<F>> {
    truncate_ideal(a, alg)?.sum(&truncate_ideal(b, alg)?)
}

pub fn intersect_at<F: Field>(a: &IdealSpec<F>, b: &IdealSpec<F>, alg: &TruncatedAlgebra<F>) -> Result<IdealAtLevel<F>> {
    intersect_all_at(&[a.clone(), b.clone()], alg)
}

/// Intersection of several ideals at level `N`, generators re-verified at `N + 2`.
pub fn intersect_all_at<F: Field>(ideals: &[IdealSpec<F>], alg: &TruncatedAlgebra<F>) -> Result<IdealAtLevel<F>> {
    let spec = alg.spec();
    let meet = |alg: &TruncatedAlgebra<F>| -> Result<Subspace<F>> {
        let mut s = Subspace::full(alg.field(), alg.dim());
        for i in ideals {
            s = s.intersection(&truncate_ideal(i, alg)?)?;
        }
        Ok(s)
    };
    let subspace = meet(alg)?;
    let gens = extract_generators(&subspace, alg)?;
    let higher = TruncatedAlgebra::build(spec, alg.level() + 2)?;
    let verified = truncate_generators(&gens, &higher)? == meet(&higher)?;
    Ok(IdealAtLevel { level: alg.level(), subspace, generators: verified.then_some(gens) })
}

/// Outcome of [`is_m_primary`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MPrimary {
    /// `m^(level-1)` lies in the ideal (Nakayama), so the colength is exact.
    MPrimary { colength: usize, certified_level: u32, colengths: Vec<usize> },
    /// Colength still strictly increasing over the final window.
    NotMPrimaryEvidence { colengths: Vec<usize> },
    Undetermined { colengths: Vec<usize> },
}

/// Number of consecutive levels with equal colength taken as stabilization.
pub const STABILIZATION_WINDOW: usize = 3;

/// Probes `dim R/I` through `colength(N) = dim R_N - dim trunc(I, N)` for
/// `N = 1..=max_level`.
pub fn is_m_primary<F: Field>(ideal: &IdealSpec<F>, max_level: u32) -> Result<MPrimary> {
    if max_level < STABILIZATION_WINDOW as u32 {
        return Err(Error::Usage(format!("m-primary probe needs at least {STABILIZATION_WINDOW} levels")));
    }
    let spec = ideal.spec();
    let mut colengths = Vec::new();
    for level in 1..=max_level {
        let alg = TruncatedAlgebra::build(spec, level)?;
        let trunc = truncate_ideal(ideal, &alg)?;
        colengths.push(alg.dim() - trunc.dim());
        let w = &colengths[colengths.len().saturating_sub(STABILIZATION_WINDOW)..];
        if w.len() == STABILIZATION_WINDOW && w.iter().all(|c| *c == w[0]) {
            // every monomial of degree level-1 must already lie in the ideal
            let top = Monomial::of_degree(spec.nvars(), level - 1);
            let mut certified = true;
            for m in &top {
                let mut v = alg.zero_vector();
                for (b, c) in alg.reduce_monomial(m) {
                    v[*b] = c.clone();
                }
                if !trunc.contains(&v)? {
                    certified = false;
                    break;
                }
            }
            if certified {
                return Ok(MPrimary::MPrimary { colength: w[0], certified_level: level, colengths });
            }
        }
    }
    let w = &colengths[colengths.len() - STABILIZATION_WINDOW..];
    if w.windows(2).all(|p| p[0] < p[1]) {
        Ok(MPrimary::NotMPrimaryEvidence { colengths })
    } else {
        Ok(MPrimary::Undetermined { colengths })
    }
}

/// `fixed + (base^(n + offset))`, a descending family indexed by `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricIdealFamily<F: Field> {
    spec: RingSpec<F>,
    fixed: Vec<Polynomial<F>>,
    base: Monomial,
    offset: u32,
    name: Option<String>,
}

impl<F: Field> ParametricIdealFamily<F> {
    pub fn new(spec: &RingSpec<F>, fixed: Vec<Polynomial<F>>, base: Monomial, offset: u32) -> Result<Self> {
        if base.nvars() != spec.nvars() || base.degree() == 0 {
            return Err(Error::Usage("tail base must be a nonconstant monomial of the ring".into()));
        }
        Ok(ParametricIdealFamily { spec: spec.clone(), fixed, base, offset, name: None })
    }

    /// `ParametricIdealFamily::parse(&spec, &["x"], "y", 0)` is `(x, y^n)`.
    pub fn parse(spec: &RingSpec<F>, fixed: &[&str], base: &str, offset: u32) -> Result<Self> {
        let fixed = fixed.iter().map(|g| spec.poly(g)).collect::<Result<Vec<_>>>()?;
        let base = spec
            .poly(base)?
            .as_monomial()
            .cloned()
            .ok_or_else(|| Error::Usage(format!("tail base `{base}` is not a monomial")))?;
        Self::new(spec, fixed, base, offset)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn spec(&self) -> &RingSpec<F> {
        &self.spec
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn tail(&self, n: u32) -> Monomial {
        Monomial::new(self.base.exponents().iter().map(|e| e * (n + self.offset)).collect())
    }

    /// The ideal of the fixed generators, the natural candidate for the
    /// intersection of the whole chain.
    pub fn fixed_ideal(&self) -> IdealSpec<F> {
        IdealSpec::new(&self.spec, self.fixed.clone(), None).expect("same ring")
    }

    pub fn instantiate(&self, n: u32) -> IdealSpec<F> {
        let mut g = self.fixed.clone();
        g.push(Polynomial::monomial(self.spec.field(), self.tail(n)));
        IdealSpec::new(&self.spec, g, None).expect("same ring")
    }

    /// First `n` whose tail generator vanishes in `R_level`; from there on
    /// every instance truncates to `trunc(fixed)`.
    pub fn stable_index(&self, level: u32) -> u32 {
        let d = self.base.degree();
        let mut n = 1;
        while d * (n + self.offset) < level {
            n += 1;
        }
        n
    }

    pub fn to_json(&self) -> ParametricJson {
        ParametricJson {
            spec: self.spec.to_json(),
            fixed: self.fixed.iter().map(|g| self.spec.fmt_poly(g)).collect(),
            tail: TailJson { monomial: self.base.fmt_with(self.spec.variables()), offset: self.offset },
            name: self.name.clone(),
        }
    }

    pub fn from_json(field: &F, js: &ParametricJson) -> Result<Self> {
        let spec = RingSpec::from_json(field, &js.spec)?;
        let fixed: Vec<&str> = js.fixed.iter().map(String::as_str).collect();
        let mut fam = Self::parse(&spec, &fixed, &js.tail.monomial, js.tail.offset)?;
        fam.name = js.name.clone();
        Ok(fam)
    }
}

impl<F: Field> fmt::Display for ParametricIdealFamily<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.fixed.iter().map(|g| self.spec.fmt_poly(g)).collect();
        let base = self.base.fmt_with(self.spec.variables());
        parts.push(match self.offset {
            0 => format!("{base}^n"),
            o => format!("{base}^(n+{o})"),
        });
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailJson {
    pub monomial: String,
    pub offset: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametricJson {
    pub spec: RingSpecJson,
    pub fixed: Vec<String>,
    pub tail: TailJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Outcome of [`limit_of_chain`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ChainLimit {
    VerifiedAtScale { n_max: u32, level: u32, stable_index: u32 },
    Refuted { index: u32, reason: String },
}

impl ChainLimit {
    pub fn is_verified(&self) -> bool {
        matches!(self, ChainLimit::VerifiedAtScale { .. })
    }
}

/// Checks that `candidate` is the intersection of the descending family:
/// (a) every candidate generator is a certified member of each instance
/// `n <= n_max`; (b) the truncated instances, carried out to the index where
/// the tail vanishes at `level`, intersect to `trunc(candidate)`; (c) the
/// instances descend at `level`.
pub fn limit_of_chain<F: Field>(
    family: &ParametricIdealFamily<F>,
    candidate: &IdealSpec<F>,
    n_max: u32,
    level: u32,
) -> Result<ChainLimit> {
    check_same_ring(family.spec(), candidate.spec())?;
    let alg = TruncatedAlgebra::build(family.spec(), level)?;
    let target = truncate_ideal(candidate, &alg)?;
    for n in 1..=n_max {
        let inst = family.instantiate(n);
        for g in candidate.generators() {
            let bound = family.tail(n).degree().max(g.degree().unwrap_or(0)) + 2;
            let m = member(g, &inst, level.max(bound + 1), bound)?;
            if !m.is_yes() {
                return Ok(ChainLimit::Refuted {
                    index: n,
                    reason: format!("{} is not a certified member of {}", candidate.spec().fmt_poly(g), inst),
                });
            }
        }
    }
    let last = n_max.max(family.stable_index(level));
    let mut meet = Subspace::full(alg.field(), alg.dim());
    let mut prev: Option<Subspace<F>> = None;
    for n in 1..=last {
        let t = truncate_ideal(&family.instantiate(n), &alg)?;
        if let Some(p) = &prev {
            if !t.is_subspace_of(p)? {
                return Ok(ChainLimit::Refuted { index: n, reason: format!("instance {n} is not inside instance {}", n - 1) });
            }
        }
        if !target.is_subspace_of(&t)? {
            return Ok(ChainLimit::Refuted {
                index: n,
                reason: format!("{candidate} is not inside {} at level {level}", family.instantiate(n)),
            });
        }
        meet = meet.intersection(&t)?;
        prev = Some(t);
    }
    if meet != target {
        return Ok(ChainLimit::Refuted {
            index: last,
            reason: format!("the intersection at level {level} is strictly larger than {candidate}"),
        });
    }
    Ok(ChainLimit::VerifiedAtScale { n_max, level, stable_index: family.stable_index(level) })
}
