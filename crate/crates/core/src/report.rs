//! Catalog-driven runs and their reports.
//!
//! Every report is assembled in catalog order, so JSON and text output are
//! byte-identical across runs with the same configuration, whatever order
//! the worker threads finish in.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alexandrov::{compactness_verdict, AnnFamily, Evidence, LimitCheck, Member, ParametricMember, Preorder, Verdict};
use crate::annihilator::{
    annihilate_in, annihilator_truncated, membership_truncated, witness_search, AnnihilatorJson, AnnihilatorResult, Solvability,
    Status, TruncatedImage, Witness,
};
use crate::catalog::{CatalogEntry, Ring, KNOWN_IDENTITIES};
use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig};
use crate::ideal::{member, truncate_ideal, IdealSpec, MPrimary};
use crate::linalg::Subspace;
use crate::mf::{MatrixFactorization, MfJson, Violation};
use crate::truncated::TruncatedAlgebra;

pub const SCHEMA_VERSION: u32 = 1;

/// Witness degree bound for objects that are not catalog entries.
pub const DEFAULT_FIXED_DEGREE: u32 = 3;

/// Largest parameter checked by the strictness probe.
pub const STRICTNESS_N_MAX: u32 = 3;
/// Largest witness degree tried by the strictness probe.
pub const STRICTNESS_DEGREE: u32 = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subfamily {
    #[default]
    All,
    /// Modules locally free on the punctured spectrum.
    Cm0,
}

impl std::fmt::Display for Subfamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Subfamily::All => "all",
            Subfamily::Cm0 => "cm0",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: FieldConfig,
    #[serde(rename = "N")]
    pub trunc: u32,
    /// `None`: `n + 2` per entry.
    #[serde(rename = "D")]
    pub witness_degree: Option<u32>,
    pub n_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { field: FieldConfig::default(), trunc: 10, witness_degree: None, n_max: 5 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trunc < 3 {
            return Err(Error::Config(format!("truncation level must be at least 3, got {}", self.trunc)));
        }
        if self.n_max < 1 {
            return Err(Error::Config("n-max must be at least 1".into()));
        }
        self.field.validate()
    }

    pub fn degree_for<F: Field>(&self, e: &CatalogEntry<F>) -> u32 {
        self.witness_degree.unwrap_or_else(|| e.default_witness_degree())
    }

    pub fn fixed_degree(&self) -> u32 {
        self.witness_degree.unwrap_or(DEFAULT_FIXED_DEGREE)
    }

    pub fn scale(&self) -> Scale {
        Scale {
            trunc: self.trunc,
            n_max: self.n_max,
            witness_degree: self.witness_degree.map_or_else(|| "n+2".to_string(), |d| d.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scale {
    #[serde(rename = "N")]
    pub trunc: u32,
    pub n_max: u32,
    #[serde(rename = "D")]
    pub witness_degree: String,
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={} n_max={} D={}", self.trunc, self.n_max, self.witness_degree)
    }
}

/// Both ideals contain each other's generators, certified by cofactors.
pub fn certified_equal<F: Field>(a: &IdealSpec<F>, b: &IdealSpec<F>, level: u32) -> Result<bool> {
    for (x, y) in [(a, b), (b, a)] {
        for g in x.generators() {
            if !member(g, y, level, g.degree().unwrap_or(0) + 2)?.is_yes() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub selector: String,
    pub label: String,
    pub size: usize,
    pub violation: Option<Violation>,
}

pub fn validate_entries<F: Field>(entries: &[CatalogEntry<F>]) -> Result<Vec<ValidationReport>> {
    entries
        .iter()
        .map(|e| {
            Ok(ValidationReport { selector: e.selector(), label: e.label().to_string(), size: e.mf.size(), violation: e.mf.validate()? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub selector: String,
    pub annihilator: AnnihilatorJson,
    pub expected: Option<Vec<String>>,
    /// The level-`N` annihilator is the truncation of the expected ideal.
    pub equal_at_level: Option<bool>,
    /// The certified generators and the expected ideal generate each other.
    pub equal_exactly: Option<bool>,
    pub pass: bool,
}

pub fn entry_report<F: Field>(
    selector: String,
    mf: &MatrixFactorization<F>,
    expected: Option<&IdealSpec<F>>,
    result: &AnnihilatorResult<F>,
    alg: &TruncatedAlgebra<F>,
) -> Result<EntryReport> {
    let sound = result.status == Status::CertifiedExact && result.within_row_col_bound;
    let (equal_at_level, equal_exactly) = match expected {
        Some(ex) => (
            Some(truncate_ideal(ex, alg)? == result.upper.subspace),
            Some(certified_equal(&result.lower_ideal(mf), ex, alg.level())?),
        ),
        None => (None, None),
    };
    Ok(EntryReport {
        selector,
        annihilator: result.to_json(mf),
        expected: expected.map(|e| e.generator_strings()),
        pass: sound && equal_at_level != Some(false) && equal_exactly != Some(false),
        equal_at_level,
        equal_exactly,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub selector: String,
    pub r: String,
    pub witness_degree: u32,
    pub verified: bool,
}

/// Checks every displayed identity for `n = 1..=n_max`, exactly.
pub fn check_known_identities<F: Field>(field: &F, rings: &[Ring], n_max: u32) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for id in KNOWN_IDENTITIES.iter().filter(|id| rings.contains(&id.ring)) {
        let range = if id.is_parametric() { 1..=n_max } else { 1..=1 };
        for n in range {
            let inst = id.instantiate(field, n)?;
            let mf = &inst.entry.mf;
            let w = Witness::from_parts(mf, &inst.r, inst.alpha.clone(), inst.beta.clone())?;
            out.push(IdentityReport {
                selector: inst.entry.selector(),
                r: mf.spec().fmt_poly(&inst.r),
                witness_degree: inst.alpha.max_degree().max(inst.beta.max_degree()),
                verified: w.is_some_and(|w| w.verify(mf)),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictnessReport {
    pub selector: String,
    pub r: String,
    /// Smallest level at which the truncated system is unsolvable.
    pub unsolvable_at: Option<u32>,
    pub level_bound: u32,
    /// No witness exists for any degree up to this bound.
    pub no_witness_up_to: Option<u32>,
    pub pass: bool,
}

/// `x` is outside the annihilator of `gamma_n`, `delta_n` and `delta+-_n`:
/// certified at some level `<= n + 4`, with no witness of degree `<= 6`.
pub fn check_strictness<F: Field>(field: &F, rings: &[Ring], n_max: u32) -> Result<Vec<StrictnessReport>> {
    let mut targets = Vec::new();
    for ring in rings {
        let slugs: &[&str] = match ring {
            Ring::DInf1 => &["gamma", "delta"],
            Ring::DInf2 => &["delta+", "delta-"],
            _ => &[],
        };
        for slug in slugs {
            for n in 1..=n_max.min(STRICTNESS_N_MAX) {
                targets.push(ring.entry(field, slug, Some(n))?);
            }
        }
    }
    targets
        .par_iter()
        .map(|e| {
            let n = e.n.expect("parametric");
            let x = e.mf.spec().poly("x")?;
            let level_bound = n + 4;
            let mut unsolvable_at = None;
            for level in 2..=level_bound {
                let alg = TruncatedAlgebra::build(e.mf.spec(), level)?;
                if membership_truncated(&e.mf, &x, &alg)? == Solvability::Unsolvable {
                    unsolvable_at = Some(level);
                    break;
                }
            }
            let mut no_witness_up_to = None;
            for d in 0..=STRICTNESS_DEGREE {
                if witness_search(&e.mf, &x, d)?.is_some() {
                    break;
                }
                no_witness_up_to = Some(d);
            }
            Ok(StrictnessReport {
                selector: e.selector(),
                r: "x".into(),
                pass: unsolvable_at.is_some() && no_witness_up_to == Some(STRICTNESS_DEGREE),
                unsolvable_at,
                level_bound,
                no_witness_up_to,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalJson {
    pub generators: Vec<String>,
    pub dim: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedFamily {
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub global_intersection: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub ring: String,
    pub subfamily: Subfamily,
    pub members: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub minimum: Option<String>,
    pub global_intersection: GlobalJson,
    pub limits: Vec<LimitCheck>,
    pub m_primary: MPrimary,
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub expected: Option<ExpectedFamily>,
    pub global_matches: Option<bool>,
    pub scale: Scale,
    pub pass: bool,
}

/// What the classification says the verdict of a family should be.
pub fn expected_family<F: Field>(ring: Ring, sub: Subfamily, field: &F) -> Result<Option<(Verdict, Option<String>, IdealSpec<F>)>> {
    Ok(match (ring, sub) {
        (_, Subfamily::All) => {
            Some((Verdict::Compact, Some(ring.attaining_object(field)?.label().to_string()), ring.global_annihilator(field)?))
        }
        (Ring::AInf1, Subfamily::Cm0) => Some((Verdict::NotCompactEvidence, None, IdealSpec::parse(&ring.spec(field)?, &["x"])?)),
        _ => None,
    })
}

/// Annihilators of all catalog entries of a ring at the configured scale.
pub fn run_ring<F: Field>(ring: Ring, field: &F, cfg: &RunConfig, alg: &TruncatedAlgebra<F>) -> Result<Vec<(CatalogEntry<F>, AnnihilatorResult<F>)>> {
    let entries = ring.entries(field, cfg.n_max)?;
    let results: Vec<AnnihilatorResult<F>> =
        entries.par_iter().map(|e| annihilate_in(&e.mf, alg, cfg.degree_for(e))).collect::<Result<_>>()?;
    Ok(entries.into_iter().zip(results).collect())
}

fn member_of<F: Field>(mf: &MatrixFactorization<F>, r: &AnnihilatorResult<F>) -> Member<F> {
    Member {
        label: mf.label().to_string(),
        subspace: r.upper.subspace.clone(),
        certified: (r.status == Status::CertifiedExact).then(|| r.lower_ideal(mf)),
    }
}

pub fn build_family<F: Field>(
    ring: Ring,
    sub: Subfamily,
    field: &F,
    cfg: &RunConfig,
    alg: &TruncatedAlgebra<F>,
    runs: &[(CatalogEntry<F>, AnnihilatorResult<F>)],
) -> Result<AnnFamily<F>> {
    let mut fam = AnnFamily::new(alg.clone(), cfg.n_max);
    for (e, r) in runs.iter().filter(|(e, _)| sub == Subfamily::All || e.locally_free) {
        fam.push(member_of(&e.mf, r))?;
    }
    if sub == Subfamily::All {
        let obj = ring.attaining_object(field)?;
        if !fam.members.iter().any(|m| m.label == obj.label()) {
            let r = annihilate_in(&obj, alg, cfg.fixed_degree())?;
            fam.push(member_of(&obj, &r))?;
        }
    }
    for (slug, family) in ring.parametric_families(field)? {
        let limit = Some(family.fixed_ideal());
        fam.push_parametric(ParametricMember { label: slug, family, limit })?;
    }
    Ok(fam)
}

pub fn family_report<F: Field>(ring: Ring, sub: Subfamily, field: &F, cfg: &RunConfig, fam: &AnnFamily<F>) -> Result<(FamilyReport, Preorder)> {
    let v = compactness_verdict(fam)?;
    let spec = &fam.spec;
    let global = v.global_ideal(spec);
    let expected = expected_family(ring, sub, field)?;
    let global_matches = match &expected {
        Some((_, _, g)) => Some(truncate_ideal(g, &fam.alg)? == v.global_subspace && certified_equal(&global, g, fam.level())?),
        None => None,
    };
    let pass = match &expected {
        Some((verdict, witness, _)) => {
            let witness_ok = match (witness, &v.evidence) {
                (Some(w), Evidence::Witness { label }) => w == label,
                (Some(_), _) => false,
                (None, _) => true,
            };
            v.verdict == *verdict && witness_ok && global_matches == Some(true) && v.global_verified
        }
        None => true,
    };
    let report = FamilyReport {
        ring: ring.slug().to_string(),
        subfamily: sub,
        members: fam.members.iter().map(|m| m.label.clone()).collect(),
        edges: v.preorder.edges(),
        minimum: v.minimum.clone(),
        global_intersection: GlobalJson {
            generators: global.generator_strings(),
            dim: v.global_subspace.dim(),
            verified: v.global_verified,
        },
        limits: v.limits.clone(),
        m_primary: v.m_primary.clone(),
        verdict: v.verdict,
        evidence: v.evidence.clone(),
        expected: expected.map(|(verdict, witness, g)| ExpectedFamily { verdict, witness, global_intersection: g.generator_strings() }),
        global_matches,
        scale: cfg.scale(),
        pass,
    };
    Ok((report, v.preorder))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl PropertyReport {
    fn from_checks(name: &str, checks: Vec<(String, bool)>) -> Self {
        let failures: Vec<String> = checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.clone()).collect();
        PropertyReport { name: name.into(), instances: checks.len(), pass: failures.is_empty(), failures }
    }
}

/// The structural laws of annihilators, checked on every computed entry.
pub fn property_suites<F: Field>(runs: &[(CatalogEntry<F>, AnnihilatorResult<F>)], alg: &TruncatedAlgebra<F>) -> Result<Vec<[(String, bool); 5]>> {
    let higher = TruncatedAlgebra::build(alg.spec(), alg.level() + 1)?;
    let projection = higher.projection_to(alg)?;
    runs.par_iter()
        .enumerate()
        .map(|(i, (e, r))| {
            let sel = e.selector();
            let swap = annihilator_truncated(&e.mf.swap(), alg)?.subspace == r.upper.subspace;
            let (a, ra) = &runs[(i + 1) % runs.len()];
            let sum = annihilator_truncated(&e.mf.direct_sum(&a.mf)?, alg)?.subspace
                == r.upper.subspace.intersection(&ra.upper.subspace)?;
            let up = annihilator_truncated(&e.mf, &higher)?.subspace;
            let monotone = Subspace::image(&projection, &up)?.is_subspace_of(&r.upper.subspace)?;
            let image = TruncatedImage::build(&e.mf, alg)?;
            let oracle = r.lower.iter().all(|w| image.contains_scalar(&w.r));
            Ok([
                (sel.clone(), swap),
                (format!("{sel} + {}", a.selector()), sum),
                (sel.clone(), monotone),
                (sel.clone(), r.within_row_col_bound),
                (sel, oracle),
            ])
        })
        .collect()
}

pub const PROPERTY_NAMES: [&str; 5] =
    ["syzygy invariance", "direct-sum law", "truncation monotonicity", "row/column bound", "witness/truncation agreement"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReport {
    pub ring: String,
    pub family: String,
    pub dim: u32,
    pub equation: String,
    pub validation: Vec<ValidationReport>,
    pub entries: Vec<EntryReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfig,
    pub scale: Scale,
    pub notes: Vec<String>,
    pub rings: Vec<RingReport>,
    pub identities: Vec<IdentityReport>,
    pub strictness: Vec<StrictnessReport>,
    pub families: Vec<FamilyReport>,
    pub properties: Vec<PropertyReport>,
    pub pass: bool,
    pub first_failure: Option<String>,
}

/// Families whose verdict is checked by a full reproduction run.
pub const CHECKED_FAMILIES: [(Ring, Subfamily); 5] = [
    (Ring::AInf1, Subfamily::All),
    (Ring::AInf1, Subfamily::Cm0),
    (Ring::AInf2, Subfamily::All),
    (Ring::DInf1, Subfamily::All),
    (Ring::DInf2, Subfamily::All),
];

pub fn reproduce<F: Field>(field: &F, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if field.imaginary_unit().is_none() {
        return Err(Error::Config(format!(
            "a full run includes {} and needs a square root of -1; field {} has none",
            Ring::AInf2,
            cfg.field.flag()
        )));
    }
    let mut notes = Vec::new();
    if cfg.n_max < 5 {
        notes.push(format!("reduced coverage: parametric entries checked for n <= {}", cfg.n_max));
    }
    let mut rings = Vec::new();
    let mut families = Vec::new();
    let mut checks: Vec<Vec<(String, bool)>> = vec![Vec::new(); PROPERTY_NAMES.len()];
    for ring in Ring::ALL {
        let spec = ring.spec(field)?;
        let alg = TruncatedAlgebra::build(&spec, cfg.trunc)?;
        let runs = run_ring(ring, field, cfg, &alg)?;
        let entries: Vec<CatalogEntry<F>> = runs.iter().map(|(e, _)| e.clone()).collect();
        let validation = validate_entries(&entries)?;
        let reports = runs
            .par_iter()
            .map(|(e, r)| entry_report(e.selector(), &e.mf, Some(&e.expected_annihilator), r, &alg))
            .collect::<Result<Vec<_>>>()?;
        rings.push(RingReport {
            ring: ring.slug().into(),
            family: ring.family().into(),
            dim: ring.dim(),
            equation: ring.equation().into(),
            validation,
            entries: reports,
        });
        for sub in [Subfamily::All, Subfamily::Cm0] {
            if CHECKED_FAMILIES.contains(&(ring, sub)) {
                let fam = build_family(ring, sub, field, cfg, &alg, &runs)?;
                families.push(family_report(ring, sub, field, cfg, &fam)?.0);
            }
        }
        for row in property_suites(&runs, &alg)? {
            for (k, c) in row.into_iter().enumerate() {
                checks[k].push(c);
            }
        }
    }
    let properties = PROPERTY_NAMES.iter().zip(checks).map(|(n, c)| PropertyReport::from_checks(n, c)).collect();
    let identities = check_known_identities(field, &Ring::ALL, cfg.n_max)?;
    let strictness = check_strictness(field, &Ring::ALL, cfg.n_max)?;
    let mut report = Report {
        schema: SCHEMA_VERSION,
        config: cfg.clone(),
        scale: cfg.scale(),
        notes,
        rings,
        identities,
        strictness,
        families,
        properties,
        pass: false,
        first_failure: None,
    };
    report.first_failure = first_failure(&report);
    report.pass = report.first_failure.is_none();
    Ok(report)
}

fn first_failure(r: &Report) -> Option<String> {
    for ring in &r.rings {
        if let Some(v) = ring.validation.iter().find(|v| v.violation.is_some()) {
            return Some(format!("{}: {}", v.selector, v.violation.as_ref().expect("checked")));
        }
        if let Some(e) = ring.entries.iter().find(|e| !e.pass) {
            return Some(format!(
                "{}: expected {}, computed {} ({}; equal at level: {}, certified equal: {})",
                e.selector,
                paren(e.expected.as_deref().unwrap_or_default()),
                paren(&e.annihilator.upper.generators),
                status_name(e.annihilator.status),
                yes_no(e.equal_at_level),
                yes_no(e.equal_exactly),
            ));
        }
    }
    if let Some(i) = r.identities.iter().find(|i| !i.verified) {
        return Some(format!("{}: identity for {} does not hold", i.selector, i.r));
    }
    if let Some(s) = r.strictness.iter().find(|s| !s.pass) {
        return Some(format!("{}: {} not excluded from the annihilator", s.selector, s.r));
    }
    if let Some(f) = r.families.iter().find(|f| !f.pass) {
        return Some(format!(
            "{} {}: verdict {} with global intersection {}, expected {}",
            f.ring,
            f.subfamily,
            verdict_name(f.verdict),
            paren(&f.global_intersection.generators),
            f.expected.as_ref().map_or("-".into(), |e| format!("{} {}", verdict_name(e.verdict), paren(&e.global_intersection))),
        ));
    }
    if let Some(p) = r.properties.iter().find(|p| !p.pass) {
        return Some(format!("{}: fails on {}", p.name, p.failures.join(", ")));
    }
    None
}

fn paren(gens: &[String]) -> String {
    if gens.is_empty() {
        "(0)".into()
    } else {
        format!("({})", gens.join(", "))
    }
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::CertifiedExact => "certified-exact",
        Status::BoundedGap => "bounded-gap",
        Status::Undetermined => "undetermined",
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Compact => "compact",
        Verdict::NotCompactEvidence => "not-compact-evidence",
        Verdict::Undetermined => "undetermined",
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn render_entry(e: &EntryReport) -> String {
    let mut s = format!(
        "{:<28} computed {:<24} {}",
        e.selector,
        paren(&e.annihilator.upper.generators),
        status_name(e.annihilator.status)
    );
    if let Some(ex) = &e.expected {
        let _ = write!(s, "  expected {}", paren(ex));
    }
    let _ = write!(s, "  {}", mark(e.pass));
    s
}

pub fn render_family(f: &FamilyReport) -> String {
    let mut s = format!("{} [{}] {}: {}", f.ring, f.subfamily, f.scale, verdict_name(f.verdict));
    match &f.evidence {
        Evidence::Witness { label } => {
            let _ = write!(s, ", witness {label}");
        }
        Evidence::DescendingChain { member, chain } => {
            let _ = write!(s, ", descending chain of {member}: {}", chain.join(" ⊋ "));
        }
        Evidence::Reason { text } => {
            let _ = write!(s, " ({text})");
        }
    }
    let _ = write!(
        s,
        "\n  global intersection {}{}, minimum {}, {} members",
        paren(&f.global_intersection.generators),
        if f.global_intersection.verified { " [verified]" } else { "" },
        f.minimum.as_deref().unwrap_or("none"),
        f.members.len()
    );
    let _ = write!(s, "\n  colength probe: {}", m_primary_text(&f.m_primary));
    if f.expected.is_some() {
        let _ = write!(s, "\n  {}", mark(f.pass));
    }
    s
}

fn m_primary_text(m: &MPrimary) -> String {
    match m {
        MPrimary::MPrimary { colength, certified_level, .. } => format!("m-primary, colength {colength} (certified at level {certified_level})"),
        MPrimary::NotMPrimaryEvidence { colengths } => format!("not m-primary, colengths {colengths:?}"),
        MPrimary::Undetermined { colengths } => format!("undetermined, colengths {colengths:?}"),
    }
}

pub fn render_report(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "schema {}  field {}  {}", r.schema, r.config.field.flag(), r.scale);
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    for ring in &r.rings {
        let violations = ring.validation.iter().filter(|v| v.violation.is_some()).count();
        let _ = writeln!(s, "\n== {} ({}, dimension {}, f = {})", ring.ring, ring.family, ring.dim, ring.equation);
        let _ = writeln!(s, "validate: {} factorizations, {} violations", ring.validation.len(), violations);
        for e in &ring.entries {
            let _ = writeln!(s, "{}", render_entry(e));
        }
    }
    let verified = r.identities.iter().filter(|i| i.verified).count();
    let _ = writeln!(s, "\n== witness identities: {verified}/{} verified", r.identities.len());
    let _ = writeln!(s, "\n== strictness");
    for t in &r.strictness {
        let _ = writeln!(
            s,
            "{:<28} {} unsolvable at N={}, no witness up to D={}  {}",
            t.selector,
            t.r,
            t.unsolvable_at.map_or("-".into(), |n| n.to_string()),
            t.no_witness_up_to.map_or("-".into(), |d| d.to_string()),
            mark(t.pass)
        );
    }
    let _ = writeln!(s, "\n== families");
    for f in &r.families {
        let _ = writeln!(s, "{}", render_family(f));
    }
    let _ = writeln!(s, "\n== properties");
    for p in &r.properties {
        let _ = writeln!(s, "{:<30} {:>4} instances  {}", p.name, p.instances, mark(p.pass));
    }
    let _ = writeln!(s, "\noverall: {}", if r.pass { "PASS" } else { "FAIL" });
    if let Some(f) = &r.first_failure {
        let _ = writeln!(s, "first failure: {f}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleReport {
    pub source: MfJson,
    pub double: MfJson,
    pub double_valid: bool,
    pub source_annihilator: AnnihilatorJson,
    pub double_annihilator: AnnihilatorJson,
    pub scale: Scale,
}

/// The doubled factorization next to both annihilators; no relation between
/// the two is asserted.
pub fn double_report<F: Field>(mf: &MatrixFactorization<F>, var: &str, degree: u32, cfg: &RunConfig) -> Result<DoubleReport> {
    let double = mf.knoerrer_double(var)?;
    let (a, b) = rayon::join(|| crate::annihilator::annihilate(mf, cfg.trunc, degree), || crate::annihilator::annihilate(&double, cfg.trunc, degree));
    Ok(DoubleReport {
        source: mf.to_json(),
        double_valid: double.is_valid(),
        double: double.to_json(),
        source_annihilator: a?.to_json(mf),
        double_annihilator: b?.to_json(&double),
        scale: cfg.scale(),
    })
}

pub fn render_double(d: &DoubleReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} over {} -> {} over {}", d.source.label, d.source.spec.f, d.double.label, d.double.spec.f);
    let _ = writeln!(s, "double is a factorization: {}", if d.double_valid { "yes" } else { "no" });
    for row in &d.double.phi {
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    let _ = writeln!(s, "Ann(source) {} {}", paren(&d.source_annihilator.upper.generators), status_name(d.source_annihilator.status));
    let _ = writeln!(s, "Ann(double) {} {}", paren(&d.double_annihilator.upper.generators), status_name(d.double_annihilator.status));
    let _ = writeln!(s, "scale {}", d.scale);
    s
}
