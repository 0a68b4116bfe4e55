//! Indecomposable non-free MCM modules over the four countable-type
//! hypersurfaces `x^2`, `x^2 + z^2`, `x^2*y`, `x^2*y + z^2`, with their
//! expected annihilators and the explicit witness identities that certify
//! the lower bounds.
//!
//! Matrix entries are templates in which `{n}`, `{n+1}` and `{n-1}` stand for
//! the family parameter.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::{IdealSpec, ParametricIdealFamily};
use crate::mf::{MatrixFactorization, PolyMatrix};
use crate::truncated::RingSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    AInf1,
    AInf2,
    DInf1,
    DInf2,
}

impl Ring {
    pub const ALL: [Ring; 4] = [Ring::AInf1, Ring::AInf2, Ring::DInf1, Ring::DInf2];

    pub fn slug(self) -> &'static str {
        match self {
            Ring::AInf1 => "a-inf-1",
            Ring::AInf2 => "a-inf-2",
            Ring::DInf1 => "d-inf-1",
            Ring::DInf2 => "d-inf-2",
        }
    }

    pub fn family(self) -> &'static str {
        match self {
            Ring::AInf1 | Ring::AInf2 => "A-inf",
            Ring::DInf1 | Ring::DInf2 => "D-inf",
        }
    }

    pub fn dim(self) -> u32 {
        match self {
            Ring::AInf1 | Ring::DInf1 => 1,
            Ring::AInf2 | Ring::DInf2 => 2,
        }
    }

    pub fn equation(self) -> &'static str {
        match self {
            Ring::AInf1 => "x^2",
            Ring::AInf2 => "x^2 + z^2",
            Ring::DInf1 => "x^2*y",
            Ring::DInf2 => "x^2*y + z^2",
        }
    }

    pub fn variables(self) -> &'static [&'static str] {
        match self.dim() {
            1 => &["x", "y"],
            _ => &["x", "y", "z"],
        }
    }

    pub fn spec<F: Field>(self, field: &F) -> Result<RingSpec<F>> {
        RingSpec::parse(field, self.variables(), self.equation())
    }

    /// Entries of this ring need a square root of -1 in the field.
    pub fn needs_imaginary_unit(self) -> bool {
        self == Ring::AInf2
    }

    fn templates(self) -> &'static [Template] {
        match self {
            Ring::AInf1 => A_INF_1,
            Ring::AInf2 => A_INF_2,
            Ring::DInf1 => D_INF_1,
            Ring::DInf2 => D_INF_2,
        }
    }

    pub fn entry_slugs(self) -> Vec<&'static str> {
        self.templates().iter().map(|t| t.slug).collect()
    }

    /// Every catalog entry in catalog order, parametric ones for `1..=n_max`.
    pub fn entries<F: Field>(self, field: &F, n_max: u32) -> Result<Vec<CatalogEntry<F>>> {
        let mut out = Vec::new();
        for t in self.templates() {
            if t.parametric {
                for n in 1..=n_max {
                    out.push(CatalogEntry::build(self, t, field, Some(n))?);
                }
            } else {
                out.push(CatalogEntry::build(self, t, field, None)?);
            }
        }
        Ok(out)
    }

    pub fn entry<F: Field>(self, field: &F, slug: &str, n: Option<u32>) -> Result<CatalogEntry<F>> {
        let t = self
            .templates()
            .iter()
            .find(|t| t.slug == slug)
            .ok_or_else(|| Error::Usage(format!("unknown entry `{slug}` in {self} (known: {})", self.entry_slugs().join(", "))))?;
        match (t.parametric, n) {
            (true, None) => Err(Error::Usage(format!("entry `{self}/{slug}` needs a parameter, e.g. `{self}/{slug}?n=1`"))),
            (true, Some(0)) => Err(Error::Usage("the parameter n must be positive".into())),
            (false, Some(_)) => Err(Error::Usage(format!("entry `{self}/{slug}` takes no parameter"))),
            _ => CatalogEntry::build(self, t, field, n),
        }
    }

    /// Parametric members of the family with their annihilator chains.
    pub fn parametric_families<F: Field>(self, field: &F) -> Result<Vec<(String, ParametricIdealFamily<F>)>> {
        let spec = self.spec(field)?;
        let mut out = Vec::new();
        for t in self.templates().iter().filter(|t| t.parametric) {
            let (base, offset) = t.tail.expect("parametric templates carry a tail");
            let fam = ParametricIdealFamily::parse(&spec, t.ann, base, offset)?.named(format!("Ann({})", t.label.replace("{n}", "n")));
            out.push((t.slug.to_string(), fam));
        }
        Ok(out)
    }

    /// The member (possibly a direct sum) whose annihilator is the annihilator
    /// of the whole category.
    pub fn attaining_object<F: Field>(self, field: &F) -> Result<MatrixFactorization<F>> {
        let pick = |slug: &str| self.entry(field, slug, None).map(|e| e.mf);
        match self {
            Ring::AInf1 => pick("x"),
            Ring::AInf2 => pick("z-ix"),
            Ring::DInf1 => pick("x")?.direct_sum(&pick("y")?),
            Ring::DInf2 => pick("alpha-")?.direct_sum(&pick("beta-")?),
        }
    }

    /// Expected annihilator of the whole category of MCM modules.
    pub fn global_annihilator<F: Field>(self, field: &F) -> Result<IdealSpec<F>> {
        let gens: &[&str] = match self {
            Ring::AInf1 => &["x"],
            Ring::AInf2 => &["x", "z"],
            Ring::DInf1 => &["x^2", "x*y"],
            Ring::DInf2 => &["x^2", "x*y", "z"],
        };
        Ok(IdealSpec::parse(&self.spec(field)?, gens)?.named(format!("Ann(MCM {self})")))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ring::ALL
            .into_iter()
            .find(|r| r.slug() == s)
            .ok_or_else(|| Error::Usage(format!("unknown ring `{s}` (known: a-inf-1, a-inf-2, d-inf-1, d-inf-2)")))
    }
}

struct Template {
    slug: &'static str,
    label: &'static str,
    parametric: bool,
    phi: &'static [&'static [&'static str]],
    psi: &'static [&'static [&'static str]],
    /// Fixed generators of the expected annihilator.
    ann: &'static [&'static str],
    /// `(base, offset)`: the extra generator `base^(n + offset)`.
    tail: Option<(&'static str, u32)>,
    locally_free: bool,
}

const fn fixed(
    slug: &'static str,
    label: &'static str,
    phi: &'static [&'static [&'static str]],
    psi: &'static [&'static [&'static str]],
    ann: &'static [&'static str],
    locally_free: bool,
) -> Template {
    Template { slug, label, parametric: false, phi, psi, ann, tail: None, locally_free }
}

const fn family(
    slug: &'static str,
    label: &'static str,
    phi: &'static [&'static [&'static str]],
    psi: &'static [&'static [&'static str]],
    ann: &'static [&'static str],
    tail: (&'static str, u32),
) -> Template {
    Template { slug, label, parametric: true, phi, psi, ann, tail: Some(tail), locally_free: true }
}

const PHI_N: &[&[&str]] = &[&["x", "y^{n}"], &["0", "-x"]];

static A_INF_1: &[Template] = &[
    fixed("x", "R/xR", &[&["x"]], &[&["x"]], &["x"], false),
    family("phi", "cok phi_{n}", PHI_N, PHI_N, &["x"], ("y", 0)),
];

const PSI_PLUS: &[&[&str]] = &[&["z - i*x", "y^{n}"], &["0", "z + i*x"]];
const PSI_MINUS: &[&[&str]] = &[&["z + i*x", "-y^{n}"], &["0", "z - i*x"]];

static A_INF_2: &[Template] = &[
    fixed("z-ix", "R/(z-ix)R", &[&["z - i*x"]], &[&["z + i*x"]], &["x", "z"], false),
    fixed("z+ix", "R/(z+ix)R", &[&["z + i*x"]], &[&["z - i*x"]], &["x", "z"], false),
    family("psi+", "cok psi+_{n}", PSI_PLUS, PSI_MINUS, &["x", "z"], ("y", 0)),
    family("psi-", "cok psi-_{n}", PSI_MINUS, PSI_PLUS, &["x", "z"], ("y", 0)),
];

const ALPHA_N: &[&[&str]] = &[&["x*y", "y^{n}"], &["0", "-x"]];
const BETA_N: &[&[&str]] = &[&["x", "y^{n}"], &["0", "-x*y"]];
const GAMMA_N: &[&[&str]] = &[&["x", "y^{n}"], &["0", "-x"]];
const DELTA_N: &[&[&str]] = &[&["x*y", "y^{n+1}"], &["0", "-x*y"]];

static D_INF_1: &[Template] = &[
    fixed("x", "R/xR", &[&["x"]], &[&["x*y"]], &["x"], false),
    fixed("xy", "R/xyR", &[&["x*y"]], &[&["x"]], &["x"], false),
    fixed("y", "R/yR", &[&["y"]], &[&["x^2"]], &["x^2", "y"], true),
    fixed("x2", "R/x^2R", &[&["x^2"]], &[&["y"]], &["x^2", "y"], true),
    family("alpha", "cok alpha_{n}", ALPHA_N, BETA_N, &["x"], ("y", 0)),
    family("beta", "cok beta_{n}", BETA_N, ALPHA_N, &["x"], ("y", 0)),
    family("gamma", "cok gamma_{n}", GAMMA_N, DELTA_N, &["x^2", "x*y"], ("y", 1)),
    family("delta", "cok delta_{n}", DELTA_N, GAMMA_N, &["x^2", "x*y"], ("y", 1)),
];

const ALPHA_PLUS: &[&[&str]] = &[&["z", "y"], &["-x^2", "z"]];
const ALPHA_MINUS: &[&[&str]] = &[&["z", "-y"], &["x^2", "z"]];
const BETA_PLUS: &[&[&str]] = &[&["z", "x*y"], &["-x", "z"]];
const BETA_MINUS: &[&[&str]] = &[&["z", "-x*y"], &["x", "z"]];
const GAMMA_PLUS: &[&[&str]] = &[
    &["z", "0", "x*y", "0"],
    &["0", "z", "y^{n+1}", "-x"],
    &["-x", "0", "z", "0"],
    &["-y^{n+1}", "x*y", "0", "z"],
];
const GAMMA_MINUS: &[&[&str]] = &[
    &["z", "0", "-x*y", "0"],
    &["0", "z", "-y^{n+1}", "x"],
    &["x", "0", "z", "0"],
    &["y^{n+1}", "-x*y", "0", "z"],
];
const DELTA_PLUS: &[&[&str]] = &[
    &["z", "0", "x*y", "0"],
    &["0", "z", "y^{n+1}", "-x*y"],
    &["-x", "0", "z", "0"],
    &["-y^{n}", "x", "0", "z"],
];
const DELTA_MINUS: &[&[&str]] = &[
    &["z", "0", "-x*y", "0"],
    &["0", "z", "-y^{n+1}", "x*y"],
    &["x", "0", "z", "0"],
    &["y^{n}", "-x", "0", "z"],
];

static D_INF_2: &[Template] = &[
    fixed("alpha+", "cok alpha+", ALPHA_PLUS, ALPHA_MINUS, &["x^2", "y", "z"], true),
    fixed("alpha-", "cok alpha-", ALPHA_MINUS, ALPHA_PLUS, &["x^2", "y", "z"], true),
    fixed("beta+", "cok beta+", BETA_PLUS, BETA_MINUS, &["x", "z"], false),
    fixed("beta-", "cok beta-", BETA_MINUS, BETA_PLUS, &["x", "z"], false),
    family("gamma+", "cok gamma+_{n}", GAMMA_PLUS, GAMMA_MINUS, &["x", "z"], ("y", 1)),
    family("gamma-", "cok gamma-_{n}", GAMMA_MINUS, GAMMA_PLUS, &["x", "z"], ("y", 1)),
    family("delta+", "cok delta+_{n}", DELTA_PLUS, DELTA_MINUS, &["x^2", "x*y", "z"], ("y", 1)),
    family("delta-", "cok delta-_{n}", DELTA_MINUS, DELTA_PLUS, &["x^2", "x*y", "z"], ("y", 1)),
];

/// Substitutes the family parameter into a template string.
pub fn expand(s: &str, n: u32) -> String {
    s.replace("{n+1}", &(n + 1).to_string())
        .replace("{n-1}", &n.saturating_sub(1).to_string())
        .replace("{n}", &n.to_string())
}

fn expand_rows(rows: &[&[&str]], n: u32) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|e| expand(e, n)).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct CatalogEntry<F: Field> {
    pub ring: Ring,
    pub slug: &'static str,
    pub n: Option<u32>,
    pub mf: MatrixFactorization<F>,
    pub expected_annihilator: IdealSpec<F>,
    pub locally_free: bool,
}

impl<F: Field> CatalogEntry<F> {
    fn build(ring: Ring, t: &Template, field: &F, n: Option<u32>) -> Result<Self> {
        if ring.needs_imaginary_unit() && field.imaginary_unit().is_none() {
            return Err(Error::Config(format!(
                "{ring} entries need a square root of -1; field {} has none",
                field.config().flag()
            )));
        }
        let spec = ring.spec(field)?;
        let k = n.unwrap_or(1);
        let label = expand(t.label, k);
        let phi = PolyMatrix::parse_strings(&spec, &expand_rows(t.phi, k))?;
        let psi = PolyMatrix::parse_strings(&spec, &expand_rows(t.psi, k))?;
        let mf = MatrixFactorization::new(&spec, phi, psi, label.clone())?;
        let mut gens: Vec<String> = t.ann.iter().map(|g| g.to_string()).collect();
        if let Some((base, offset)) = t.tail {
            gens.push(format!("{base}^{}", k + offset));
        }
        let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
        let expected_annihilator = IdealSpec::parse(&spec, &gens)?.named(format!("Ann({label})"));
        Ok(CatalogEntry { ring, slug: t.slug, n, mf, expected_annihilator, locally_free: t.locally_free })
    }

    pub fn selector(&self) -> String {
        match self.n {
            Some(n) => format!("{}/{}?n={n}", self.ring, self.slug),
            None => format!("{}/{}", self.ring, self.slug),
        }
    }

    pub fn label(&self) -> &str {
        self.mf.label()
    }

    /// Default witness degree bound: `n + 2`, with `n = 1` for fixed entries.
    pub fn default_witness_degree(&self) -> u32 {
        self.n.unwrap_or(1) + 2
    }
}

/// `a-inf-1`, `d-inf-1/x`, `a-inf-1/phi?n=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selector {
    pub ring: Ring,
    pub slug: Option<String>,
    pub n: Option<u32>,
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (path, query) = match s.split_once('?') {
            Some((p, q)) => (p, Some(q)),
            None => (s, None),
        };
        let (ring, slug) = match path.split_once('/') {
            Some((r, e)) => (r.parse::<Ring>()?, Some(e.to_string())),
            None => (path.parse::<Ring>()?, None),
        };
        let n = match query {
            None => None,
            Some(q) => {
                let v = q
                    .strip_prefix("n=")
                    .ok_or_else(|| Error::Usage(format!("bad selector query `{q}` (expected n=<k>)")))?;
                Some(v.parse::<u32>().map_err(|_| Error::Usage(format!("bad parameter `{v}`")))?)
            }
        };
        if slug.is_none() && n.is_some() {
            return Err(Error::Usage(format!("selector `{s}` has a parameter but no entry")));
        }
        Ok(Selector { ring, slug, n })
    }
}

impl Selector {
    /// The selected entries; a bare ring selects every entry up to `n_max`,
    /// a parametric entry without `?n=` selects `1..=n_max`.
    pub fn resolve<F: Field>(&self, field: &F, n_max: u32) -> Result<Vec<CatalogEntry<F>>> {
        match (&self.slug, self.n) {
            (None, _) => self.ring.entries(field, n_max),
            (Some(slug), Some(n)) => Ok(vec![self.ring.entry(field, slug, Some(n))?]),
            (Some(slug), None) => {
                let t = self
                    .ring
                    .templates()
                    .iter()
                    .find(|t| t.slug == slug)
                    .ok_or_else(|| Error::Usage(format!("unknown entry `{slug}` in {}", self.ring)))?;
                if t.parametric {
                    (1..=n_max).map(|n| self.ring.entry(field, slug, Some(n))).collect()
                } else {
                    Ok(vec![self.ring.entry(field, slug, None)?])
                }
            }
        }
    }
}

/// An identity `phi*alpha + beta*psi = r*I` displayed for a catalog entry.
#[derive(Clone, Copy, Debug)]
pub struct KnownIdentity {
    pub ring: Ring,
    pub slug: &'static str,
    pub r: &'static str,
    pub alpha: &'static [&'static [&'static str]],
    pub beta: &'static [&'static [&'static str]],
}

macro_rules! identity {
    ($ring:ident, $slug:literal, $r:literal, $a:expr, $b:expr) => {
        KnownIdentity { ring: Ring::$ring, slug: $slug, r: $r, alpha: $a, beta: $b }
    };
}

pub static KNOWN_IDENTITIES: &[KnownIdentity] = &[
    identity!(AInf1, "phi", "x", &[&["0", "0"], &["0", "-1"]], &[&["1", "0"], &["0", "0"]]),
    identity!(AInf1, "phi", "y^{n}", &[&["0", "0"], &["1", "0"]], &[&["0", "0"], &["1", "0"]]),
    identity!(AInf2, "psi+", "z + i*x", &[&["0", "0"], &["0", "1"]], &[&["1", "0"], &["0", "0"]]),
    identity!(AInf2, "psi+", "z - i*x", &[&["1", "0"], &["0", "0"]], &[&["0", "0"], &["0", "1"]]),
    identity!(AInf2, "psi+", "y^{n}", &[&["0", "0"], &["1", "0"]], &[&["0", "0"], &["-1", "0"]]),
    identity!(DInf1, "alpha", "x", &[&["0", "0"], &["0", "-1"]], &[&["1", "0"], &["0", "0"]]),
    identity!(DInf1, "alpha", "y^{n}", &[&["0", "0"], &["1", "0"]], &[&["0", "0"], &["1", "0"]]),
    identity!(DInf1, "gamma", "x*y", &[&["0", "0"], &["0", "-y"]], &[&["1", "0"], &["0", "0"]]),
    identity!(DInf1, "gamma", "y^{n+1}", &[&["0", "0"], &["y", "0"]], &[&["0", "0"], &["1", "0"]]),
    identity!(DInf1, "gamma", "x^2", &[&["x", "0"], &["0", "-x"]], &[&["0", "-y^{n-1}"], &["0", "0"]]),
    identity!(DInf2, "alpha+", "x^2", &[&["0", "-1"], &["0", "0"]], &[&["0", "1"], &["0", "0"]]),
    identity!(DInf2, "alpha+", "y", &[&["0", "0"], &["1", "0"]], &[&["0", "0"], &["-1", "0"]]),
    identity!(DInf2, "alpha+", "z", &[&["1", "0"], &["0", "0"]], &[&["0", "0"], &["0", "1"]]),
    identity!(DInf2, "beta+", "x", &[&["0", "-1"], &["0", "0"]], &[&["0", "1"], &["0", "0"]]),
    identity!(DInf2, "beta+", "z", &[&["1", "0"], &["0", "0"]], &[&["0", "0"], &["0", "1"]]),
    identity!(
        DInf2,
        "gamma+",
        "x",
        &[&["0", "0", "-1", "0"], &["0", "0", "0", "0"], &["0", "0", "0", "0"], &["0", "-1", "0", "0"]],
        &[&["0", "0", "1", "0"], &["0", "0", "0", "0"], &["0", "0", "0", "0"], &["0", "1", "0", "0"]]
    ),
    identity!(
        DInf2,
        "gamma+",
        "y^{n+1}",
        &[&["0", "0", "0", "-1"], &["0", "0", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "0", "0"]],
        &[&["0", "0", "0", "1"], &["0", "0", "0", "0"], &["0", "-1", "0", "0"], &["0", "0", "0", "0"]]
    ),
    identity!(DInf2, "gamma+", "z", UPPER_IDENTITY_BLOCK, LOWER_IDENTITY_BLOCK),
    identity!(
        DInf2,
        "delta+",
        "x^2",
        &[&["0", "0", "-x", "0"], &["0", "0", "0", "x"], &["0", "0", "0", "0"], &["-y^{n-1}", "0", "0", "0"]],
        &[&["0", "0", "x", "0"], &["0", "0", "0", "-x"], &["0", "0", "0", "0"], &["y^{n-1}", "0", "0", "0"]]
    ),
    identity!(
        DInf2,
        "delta+",
        "x*y",
        &[&["0", "0", "0", "0"], &["0", "0", "0", "y"], &["1", "0", "0", "0"], &["0", "0", "0", "0"]],
        &[&["0", "0", "0", "0"], &["0", "0", "0", "-y"], &["-1", "0", "0", "0"], &["0", "0", "0", "0"]]
    ),
    identity!(
        DInf2,
        "delta+",
        "y^{n+1}",
        &[&["0", "0", "0", "-y"], &["0", "0", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "0", "0"]],
        &[&["0", "0", "0", "y"], &["0", "0", "0", "0"], &["0", "-1", "0", "0"], &["0", "0", "0", "0"]]
    ),
    identity!(DInf2, "delta+", "z", UPPER_IDENTITY_BLOCK, LOWER_IDENTITY_BLOCK),
];

const UPPER_IDENTITY_BLOCK: &[&[&str]] =
    &[&["1", "0", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "0", "0"], &["0", "0", "0", "0"]];
const LOWER_IDENTITY_BLOCK: &[&[&str]] =
    &[&["0", "0", "0", "0"], &["0", "0", "0", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]];

/// A known identity instantiated at a parameter value.
#[derive(Clone, Debug)]
pub struct InstantiatedIdentity<F: Field> {
    pub entry: CatalogEntry<F>,
    pub r: crate::poly::Polynomial<F>,
    pub alpha: PolyMatrix<F>,
    pub beta: PolyMatrix<F>,
}

impl KnownIdentity {
    pub fn is_parametric(&self) -> bool {
        self.ring.templates().iter().any(|t| t.slug == self.slug && t.parametric)
    }

    pub fn instantiate<F: Field>(&self, field: &F, n: u32) -> Result<InstantiatedIdentity<F>> {
        let entry = self.ring.entry(field, self.slug, self.is_parametric().then_some(n))?;
        let spec = entry.mf.spec().clone();
        Ok(InstantiatedIdentity {
            r: spec.poly(&expand(self.r, n))?,
            alpha: PolyMatrix::parse_strings(&spec, &expand_rows(self.alpha, n))?,
            beta: PolyMatrix::parse_strings(&spec, &expand_rows(self.beta, n))?,
            entry,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaussianRationals, PrimeField, Rationals};
    use crate::ideal::{is_m_primary, MPrimary};

    #[test]
    fn every_entry_is_a_factorization() {
        let k = PrimeField::f13();
        for ring in Ring::ALL {
            for e in ring.entries(&k, 5).unwrap() {
                assert!(e.mf.is_valid(), "{}", e.selector());
            }
        }
        for ring in [Ring::AInf1, Ring::DInf1, Ring::DInf2] {
            for e in ring.entries(&Rationals, 3).unwrap() {
                assert!(e.mf.is_valid(), "{}", e.selector());
            }
        }
        for e in Ring::AInf2.entries(&GaussianRationals, 3).unwrap() {
            assert!(e.mf.is_valid(), "{}", e.selector());
        }
    }

    #[test]
    fn rationals_refuse_the_i_entries() {
        assert!(matches!(Ring::AInf2.entries(&Rationals, 2), Err(Error::Config(_))));
        assert!(Ring::AInf2.spec(&Rationals).is_ok());
        assert!(Ring::AInf2.entries(&PrimeField::new(7, None).unwrap(), 1).is_err());
    }

    #[test]
    fn lookup_examples() {
        let k = PrimeField::f13();
        let e = Ring::AInf1.entry(&k, "x", None).unwrap();
        assert_eq!(e.mf.size(), 1);
        assert_eq!(e.expected_annihilator.to_string(), "(x)");
        let g = Ring::DInf1.entry(&k, "gamma", Some(2)).unwrap();
        assert_eq!(g.mf.phi().to_strings(g.mf.spec()), vec![vec!["x", "y^2"], vec!["0", "-x"]]);
        assert_eq!(g.mf.psi().to_strings(g.mf.spec())[0][1], "y^3");
        assert_eq!(g.expected_annihilator.to_string(), "(x^2, x*y, y^3)");
        let b = Ring::DInf2.entry(&k, "beta+", None).unwrap();
        assert_eq!(b.mf.phi().to_strings(b.mf.spec()), vec![vec!["z", "x*y"], vec!["-x", "z"]]);
        assert_eq!(b.expected_annihilator.generator_strings(), vec!["x", "z"]);
        assert!(Ring::DInf1.entry(&k, "gamma", None).is_err());
        assert!(Ring::DInf1.entry(&k, "x", Some(1)).is_err());
        assert!(Ring::DInf1.entry(&k, "omega", None).is_err());
    }

    #[test]
    fn selectors() {
        let s: Selector = "a-inf-1/phi?n=3".parse().unwrap();
        assert_eq!(s, Selector { ring: Ring::AInf1, slug: Some("phi".into()), n: Some(3) });
        let k = PrimeField::f13();
        assert_eq!(s.resolve(&k, 5).unwrap()[0].selector(), "a-inf-1/phi?n=3");
        assert_eq!("d-inf-2".parse::<Selector>().unwrap().resolve(&k, 2).unwrap().len(), 4 + 4 * 2);
        assert_eq!("d-inf-1/gamma".parse::<Selector>().unwrap().resolve(&k, 3).unwrap().len(), 3);
        assert!("e-inf-1".parse::<Selector>().is_err());
        assert!("a-inf-1?n=2".parse::<Selector>().is_err());
        assert!("a-inf-1/phi?m=2".parse::<Selector>().is_err());
    }

    #[test]
    fn locally_free_flag_matches_finite_colength() {
        let k = PrimeField::f13();
        for ring in Ring::ALL {
            for e in ring.entries(&k, 2).unwrap() {
                let primary = matches!(is_m_primary(&e.expected_annihilator, 10).unwrap(), MPrimary::MPrimary { .. });
                assert_eq!(primary, e.locally_free, "{}", e.selector());
            }
        }
    }

    #[test]
    fn known_identities_hold_exactly() {
        let k = PrimeField::f13();
        assert_eq!(KNOWN_IDENTITIES.len(), 22);
        for id in KNOWN_IDENTITIES {
            for n in 1..=5 {
                let w = id.instantiate(&k, n).unwrap();
                let lhs = w.entry.mf.phi().mul(&w.alpha).unwrap().add(&w.beta.mul(w.entry.mf.psi()).unwrap()).unwrap();
                let rhs = PolyMatrix::scalar(w.entry.mf.spec(), w.entry.mf.size(), &w.r);
                assert_eq!(lhs, rhs, "{} {} n={n}", id.slug, id.r);
            }
        }
    }

    #[test]
    fn attaining_objects_are_factorizations() {
        let k = PrimeField::f13();
        for ring in Ring::ALL {
            let m = ring.attaining_object(&k).unwrap();
            assert!(m.is_valid());
        }
        assert_eq!(Ring::DInf1.attaining_object(&k).unwrap().size(), 2);
        assert_eq!(Ring::DInf2.attaining_object(&k).unwrap().size(), 4);
    }
}
