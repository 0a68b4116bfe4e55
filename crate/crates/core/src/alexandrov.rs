//! The preorder `X <= Y iff Ann(X) ⊆ Ann(Y)` on a family of modules, its
//! Alexandrov closed sets, and compactness through attainment of the global
//! annihilator by a single member.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::{
    extract_generators, intersect_all_at, is_m_primary, limit_of_chain, member, truncate_ideal, ChainLimit, IdealSpec, MPrimary,
    ParametricIdealFamily,
};
use crate::linalg::Subspace;
use crate::truncated::{RingSpec, TruncatedAlgebra};

/// Largest family for which closed sets are enumerated.
pub const MAX_DOWN_SET_MEMBERS: usize = 20;

#[derive(Clone, Debug)]
pub struct Member<F: Field> {
    pub label: String,
    /// The annihilator at the family's level.
    pub subspace: Subspace<F>,
    /// Generators whose truncation is `subspace`, each certified to lie in
    /// the annihilator; `None` when no such set is known.
    pub certified: Option<IdealSpec<F>>,
}

impl<F: Field> Member<F> {
    /// A member whose annihilator is known exactly as an ideal.
    pub fn from_ideal(label: impl Into<String>, ideal: IdealSpec<F>, alg: &TruncatedAlgebra<F>) -> Result<Self> {
        Ok(Member { label: label.into(), subspace: truncate_ideal(&ideal, alg)?, certified: Some(ideal) })
    }
}

#[derive(Clone, Debug)]
pub struct ParametricMember<F: Field> {
    pub label: String,
    pub family: ParametricIdealFamily<F>,
    pub limit: Option<IdealSpec<F>>,
}

#[derive(Clone, Debug)]
pub struct AnnFamily<F: Field> {
    pub spec: RingSpec<F>,
    pub alg: TruncatedAlgebra<F>,
    pub n_max: u32,
    pub members: Vec<Member<F>>,
    pub parametric: Vec<ParametricMember<F>>,
}

impl<F: Field> AnnFamily<F> {
    pub fn new(alg: TruncatedAlgebra<F>, n_max: u32) -> Self {
        AnnFamily { spec: alg.spec().clone(), alg, n_max, members: Vec::new(), parametric: Vec::new() }
    }

    pub fn level(&self) -> u32 {
        self.alg.level()
    }

    pub fn push(&mut self, m: Member<F>) -> Result<()> {
        if m.subspace.ambient_dim() != self.alg.dim() {
            return Err(Error::Usage(format!("member {} was computed at another level", m.label)));
        }
        if let Some(i) = &m.certified {
            if i.spec() != &self.spec {
                return Err(Error::Usage(format!("member {} lives over another ring", m.label)));
            }
        }
        self.members.push(m);
        Ok(())
    }

    pub fn push_parametric(&mut self, p: ParametricMember<F>) -> Result<()> {
        if p.family.spec() != &self.spec {
            return Err(Error::Usage(format!("parametric member {} lives over another ring", p.label)));
        }
        self.parametric.push(p);
        Ok(())
    }

    fn index_of(&self, label: &str) -> Result<usize> {
        self.members
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::Usage(format!("no member labelled `{label}`")))
    }
}

/// `leq[i][j]` iff member `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    pub labels: Vec<String>,
    pub leq: Vec<Vec<bool>>,
}

impl Preorder {
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, row) in self.leq.iter().enumerate() {
            for (j, le) in row.iter().enumerate() {
                if *le {
                    out.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.labels.len()).all(|i| self.leq[i][i])
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.labels.len();
        (0..n).all(|i| (0..n).all(|j| !self.leq[i][j] || (0..n).all(|k| !self.leq[j][k] || self.leq[i][k])))
    }

    /// Edges of the strict order between equivalence-class representatives
    /// that are not implied by transitivity.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let n = self.labels.len();
        let strict = |i: usize, j: usize| self.leq[i][j] && !self.leq[j][i];
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if strict(i, j) && !(0..n).any(|k| strict(i, k) && strict(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Graphviz rendering: solid arrows for covers, dashed for equivalences.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph preorder {\n  rankdir=BT;\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{}\"];\n", l.replace('"', "\\\"")));
        }
        for (i, j) in self.cover_edges() {
            s.push_str(&format!("  n{i} -> n{j};\n"));
        }
        let n = self.labels.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.leq[i][j] && self.leq[j][i] {
                    s.push_str(&format!("  n{i} -> n{j} [dir=both, style=dashed];\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_preorder<F: Field>(family: &AnnFamily<F>) -> Result<Preorder> {
    if family.members.is_empty() {
        return Err(Error::Usage("the family has no members".into()));
    }
    let n = family.members.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = i == j || family.members[i].subspace.is_subspace_of(&family.members[j].subspace)?;
        }
    }
    let p = Preorder { labels: family.members.iter().map(|m| m.label.clone()).collect(), leq };
    if !p.is_transitive() {
        return Err(Error::Spec("annihilator inclusion is not transitive".into()));
    }
    Ok(p)
}

/// Labels of all members `<= label`.
pub fn closure<F: Field>(family: &AnnFamily<F>, label: &str) -> Result<Vec<String>> {
    let j = family.index_of(label)?;
    let p = build_preorder(family)?;
    Ok((0..p.labels.len()).filter(|&i| p.leq[i][j]).map(|i| p.labels[i].clone()).collect())
}

/// Every closed (downward closed) set, as label lists, smallest first.
pub fn down_sets<F: Field>(family: &AnnFamily<F>) -> Result<Vec<Vec<String>>> {
    let n = family.members.len();
    if n > MAX_DOWN_SET_MEMBERS {
        return Err(Error::Usage(format!("closed sets are enumerated for at most {MAX_DOWN_SET_MEMBERS} members, got {n}")));
    }
    let p = build_preorder(family)?;
    let below: Vec<u32> = (0..n).map(|j| (0..n).filter(|&i| p.leq[i][j]).fold(0u32, |m, i| m | (1 << i))).collect();
    let mut sets: Vec<u32> = (0u32..(1u32 << n))
        .filter(|&s| (0..n).all(|j| s & (1 << j) == 0 || below[j] & !s == 0))
        .collect();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    Ok(sets.into_iter().map(|s| (0..n).filter(|&i| s & (1 << i) != 0).map(|i| p.labels[i].clone()).collect()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Compact,
    NotCompactEvidence,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// A member attaining the global annihilator, with certified generators.
    Witness { label: String },
    /// Strictly descending annihilators of one parametric member.
    DescendingChain { member: String, chain: Vec<String> },
    Reason { text: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub member: String,
    pub candidate: Option<String>,
    pub outcome: Option<ChainLimit>,
}

#[derive(Clone, Debug)]
pub struct AlexandrovVerdict<F: Field> {
    pub preorder: Preorder,
    /// First member whose annihilator is the global intersection at level `N`.
    pub minimum: Option<String>,
    pub global_subspace: Subspace<F>,
    pub global_generators: Vec<crate::poly::Polynomial<F>>,
    /// The generators were re-checked against the certified member ideals two
    /// levels higher.
    pub global_verified: bool,
    pub limits: Vec<LimitCheck>,
    pub m_primary: MPrimary,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl<F: Field> AlexandrovVerdict<F> {
    pub fn global_ideal(&self, spec: &RingSpec<F>) -> IdealSpec<F> {
        IdealSpec::new(spec, self.global_generators.clone(), None).expect("same ring")
    }
}

/// Degree allowance for cofactors when certifying `g ∈ I` between members.
fn cofactor_degree<F: Field>(g: &crate::poly::Polynomial<F>) -> u32 {
    g.degree().unwrap_or(0) + 2
}

fn certified_inside<F: Field>(ideal: &IdealSpec<F>, other: &IdealSpec<F>, level: u32) -> Result<bool> {
    for g in ideal.generators() {
        if !member(g, other, level, cofactor_degree(g))?.is_yes() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn compactness_verdict<F: Field>(family: &AnnFamily<F>) -> Result<AlexandrovVerdict<F>> {
    let preorder = build_preorder(family)?;
    let alg = &family.alg;
    let level = family.level();
    let mut global = Subspace::full(alg.field(), alg.dim());
    for m in &family.members {
        global = global.intersection(&m.subspace)?;
    }

    let mut limits = Vec::new();
    let mut limit_problem: Option<String> = None;
    let mut limit_ideals = Vec::new();
    for p in &family.parametric {
        let Some(c) = &p.limit else {
            limit_problem.get_or_insert(format!("parametric member {} has no limit candidate", p.label));
            limits.push(LimitCheck { member: p.label.clone(), candidate: None, outcome: None });
            continue;
        };
        let outcome = limit_of_chain(&p.family, c, family.n_max, level)?;
        if !outcome.is_verified() {
            limit_problem.get_or_insert(format!("limit {c} of {} is not verified", p.label));
        }
        global = global.intersection(&truncate_ideal(c, alg)?)?;
        limit_ideals.push(c.clone());
        limits.push(LimitCheck { member: p.label.clone(), candidate: Some(c.to_string()), outcome: Some(outcome) });
    }

    let global_generators = extract_generators(&global, alg)?;
    let certified: Option<Vec<IdealSpec<F>>> = family.members.iter().map(|m| m.certified.clone()).collect();
    let global_verified = match &certified {
        Some(ideals) => {
            let mut all = ideals.clone();
            all.extend(limit_ideals.iter().cloned());
            let at = intersect_all_at(&all, alg)?;
            let higher = TruncatedAlgebra::build(&family.spec, level + 2)?;
            at.subspace == global
                && crate::ideal::truncate_generators(&global_generators, &higher)? == intersect_all_at(&all, &higher)?.subspace
        }
        None => false,
    };
    let global_ideal = IdealSpec::new(&family.spec, global_generators.clone(), None)?;
    let m_primary = is_m_primary(&global_ideal, level.max(3))?;

    let minimum = family.members.iter().find(|m| m.subspace == global).map(|m| m.label.clone());

    let mut verdict = Verdict::Undetermined;
    let mut evidence = Evidence::Reason { text: "no member attains the global intersection and no descending chain was found".into() };
    if let Some(text) = limit_problem {
        evidence = Evidence::Reason { text };
    } else {
        let mut witness = None;
        'search: for m in family.members.iter().filter(|m| m.subspace == global) {
            let Some(ideal) = &m.certified else { continue };
            for other in family.members.iter().filter(|o| o.label != m.label) {
                match &other.certified {
                    Some(o) if certified_inside(ideal, o, level)? => {}
                    _ => continue 'search,
                }
            }
            for c in &limit_ideals {
                if !certified_inside(ideal, c, level)? {
                    continue 'search;
                }
            }
            witness = Some(m.label.clone());
            break;
        }
        if let Some(label) = witness {
            verdict = Verdict::Compact;
            evidence = Evidence::Witness { label };
        } else if minimum.is_none() {
            if let Some(chain) = descending_chain(family)? {
                verdict = Verdict::NotCompactEvidence;
                evidence = chain;
            }
        }
    }

    Ok(AlexandrovVerdict {
        preorder,
        minimum,
        global_subspace: global,
        global_generators,
        global_verified,
        limits,
        m_primary,
        verdict,
        evidence,
    })
}

/// The first parametric member whose instances `1..=max(n_max, 2)` strictly
/// descend at the family's level. A chain needs at least one step, so the
/// probe looks past `n_max = 1`.
fn descending_chain<F: Field>(family: &AnnFamily<F>) -> Result<Option<Evidence>> {
    'members: for p in &family.parametric {
        let mut prev: Option<Subspace<F>> = None;
        let mut chain = Vec::new();
        for n in 1..=family.n_max.max(2) {
            let inst = p.family.instantiate(n);
            let t = truncate_ideal(&inst, &family.alg)?;
            if let Some(q) = &prev {
                if !(t.is_subspace_of(q)? && t.dim() < q.dim()) {
                    continue 'members;
                }
            }
            chain.push(inst.to_string());
            prev = Some(t);
        }
        return Ok(Some(Evidence::DescendingChain { member: p.label.clone(), chain }));
    }
    Ok(None)
}
