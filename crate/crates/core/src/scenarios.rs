//! Pythagorean composita, square-root towers, closure exploration and the
//! realizability obstruction, assembled from the lower layers.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::QuadraticPresentation;
use crate::constructors::{demuskin_algebra, free_group_algebra, free_product, DemuskinForm};
use crate::error::{Error, Result};
use crate::gluing::{glue, GluingDatum, HypothesisReport};
use crate::koszul::{
    is_koszul_up_to_with, is_universally_koszul_up_to_with, Certificate, Limits, Verdict,
};
use crate::linalg::{FpMatrix, Prime};

/// Free pro-2 product of Demuškin groups and a free group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PythagoreanBaseSpec {
    demuskin: Vec<DemuskinForm>,
    free_rank: usize,
}

impl PythagoreanBaseSpec {
    pub fn new(demuskin: Vec<DemuskinForm>, free_rank: usize) -> Result<Self> {
        if let Some(f) = demuskin.iter().find(|f| f.prime() != Prime::TWO) {
            return Err(Error::InvalidForm(format!(
                "Pythagorean bases use p = 2, got a form over F_{}",
                f.prime()
            )));
        }
        Ok(PythagoreanBaseSpec { demuskin, free_rank })
    }

    pub fn demuskin(&self) -> &[DemuskinForm] {
        &self.demuskin
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn total_rank(&self) -> usize {
        self.demuskin.iter().map(DemuskinForm::rank).sum::<usize>() + self.free_rank
    }

    pub fn to_json(&self) -> PythagoreanBaseJson {
        PythagoreanBaseJson {
            demuskin: self.demuskin.iter().map(|f| f.to_json().form).collect(),
            free_rank: self.free_rank,
        }
    }

    pub fn from_json(json: &PythagoreanBaseJson) -> Result<Self> {
        let forms = json
            .demuskin
            .iter()
            .map(|rows| DemuskinForm::from_integers(Prime::TWO, rows))
            .collect::<Result<Vec<_>>>()?;
        Self::new(forms, json.free_rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PythagoreanBaseJson {
    #[serde(default)]
    pub demuskin: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub free_rank: usize,
}

/// Labels `h{k}_{i}` for the `k`-th Demuškin factor and `f{i}` for the free part.
pub fn pythagorean_base(spec: &PythagoreanBaseSpec) -> Result<QuadraticPresentation> {
    let mut acc = free_group_algebra(Prime::TWO, 0);
    let mut labels = Vec::new();
    for (k, form) in spec.demuskin.iter().enumerate() {
        acc = free_product(&acc, &demuskin_algebra(form))?;
        labels.extend((1..=form.rank()).map(|i| format!("h{}_{}", k + 1, i)));
    }
    acc = free_product(&acc, &free_group_algebra(Prime::TWO, spec.free_rank))?;
    labels.extend((1..=spec.free_rank).map(|i| format!("f{i}")));
    acc.relabeled(labels)
}

fn fresh_labels(taken: &HashSet<String>, stem: &str, count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut k = 1;
    while out.len() < count {
        let label = format!("{stem}{k}");
        if !taken.contains(&label) {
            out.push(label);
        }
        k += 1;
    }
    out
}

/// Glues `C ⊓ free(f1)` and `C ⊓ free(f2)` over `C` along the projections
/// killing the new generators. New generators are labelled with `tag`
/// followed by `a` (first leg) or `b` (second leg) and an index.
pub fn pythagorean_compositum_tagged(
    c: &QuadraticPresentation,
    f1: usize,
    f2: usize,
    tag: &str,
) -> Result<(QuadraticPresentation, HypothesisReport)> {
    let p = c.prime();
    if p != Prime::TWO {
        return Err(Error::InvalidArgument(format!("Pythagorean composita use p = 2, got p = {p}")));
    }
    let n0 = c.rank();
    let legs = [f1, f2].map(|f| free_product(c, &free_group_algebra(p, f)));
    let [a1, a2] = legs;
    let (a1, a2) = (a1?, a2?);
    let projection = |f: usize| {
        let mut m = FpMatrix::zeros(p, n0, n0 + f);
        for i in 0..n0 {
            m.set(i, i, 1);
        }
        m
    };
    let datum = GluingDatum::new(a1, a2, c.clone(), projection(f1), projection(f2))?;
    let glued = glue(&datum)?;
    if glued.presentation.rank() != n0 + f1 + f2 {
        return Err(Error::Invariant(format!(
            "compositum has rank {}, expected {}",
            glued.presentation.rank(),
            n0 + f1 + f2
        )));
    }
    let taken: HashSet<String> = c.generators().iter().cloned().collect();
    let mut labels = c.generators().to_vec();
    labels.extend(fresh_labels(&taken, &format!("{tag}a"), f1));
    labels.extend(fresh_labels(&taken, &format!("{tag}b"), f2));
    Ok((glued.presentation.relabeled(labels)?, glued.report))
}

pub fn pythagorean_compositum(
    c: &QuadraticPresentation,
    f1: usize,
    f2: usize,
) -> Result<(QuadraticPresentation, HypothesisReport)> {
    pythagorean_compositum_tagged(c, f1, f2, "")
}

/// Cutoffs used when certifying generated presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub koszul_degree: usize,
    pub uk_degree: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            koszul_degree: crate::koszul::DEFAULT_KOSZUL_DEGREE,
            uk_degree: crate::koszul::DEFAULT_UK_DEGREE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCertificates {
    pub koszul: Certificate,
    pub universally_koszul: Certificate,
}

impl StageCertificates {
    pub fn compute(a: &QuadraticPresentation, cfg: &CertifyConfig, limits: &Limits) -> Result<Self> {
        let (k, uk) = rayon::join(
            || is_koszul_up_to_with(a, cfg.koszul_degree, limits),
            || is_universally_koszul_up_to_with(a, cfg.uk_degree, limits),
        );
        Ok(StageCertificates {
            koszul: k?,
            universally_koszul: uk?,
        })
    }

    pub fn all_certified(&self) -> bool {
        self.koszul.verdict.is_positive() && self.universally_koszul.verdict.is_positive()
    }

    fn strip_timing(&mut self) {
        self.koszul.elapsed_ms = None;
        self.universally_koszul.elapsed_ms = None;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerStep {
    pub step: usize,
    pub free_rank_1: usize,
    pub free_rank_2: usize,
    pub rank: usize,
    pub digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<HypothesisReport>,
    pub certificates: StageCertificates,
    #[serde(skip)]
    pub presentation: Option<QuadraticPresentation>,
}

/// Stage 0 is the base; stage `j + 1` is the compositum of stage `j` with
/// `steps[j]`. The first failing hypothesis aborts with
/// [`Error::TowerAborted`].
pub fn square_root_tower(
    base: &PythagoreanBaseSpec,
    steps: &[(usize, usize)],
    cfg: &CertifyConfig,
    limits: &Limits,
) -> Result<Vec<TowerStep>> {
    if steps.is_empty() {
        return Err(Error::InvalidArgument("a tower needs at least one step".into()));
    }
    let mut current = pythagorean_base(base)?;
    let mut out = vec![TowerStep {
        step: 0,
        free_rank_1: 0,
        free_rank_2: 0,
        rank: current.rank(),
        digest: current.digest(),
        report: None,
        certificates: StageCertificates::compute(&current, cfg, limits)?,
        presentation: Some(current.clone()),
    }];
    for (j, &(f1, f2)) in steps.iter().enumerate() {
        let step = j + 1;
        let (next, report) = match pythagorean_compositum_tagged(&current, f1, f2, &format!("s{step}")) {
            Ok(r) => r,
            Err(Error::HypothesesFailed(report)) => return Err(Error::TowerAborted { step, report }),
            Err(e) => return Err(e),
        };
        out.push(TowerStep {
            step,
            free_rank_1: f1,
            free_rank_2: f2,
            rank: next.rank(),
            digest: next.digest(),
            report: Some(report),
            certificates: StageCertificates::compute(&next, cfg, limits)?,
            presentation: Some(next.clone()),
        });
        current = next;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreConfig {
    pub depth: usize,
    pub rank_cap: usize,
    /// Compositum steps `(f1, f2)` applied to every node.
    pub composita: Vec<(usize, usize)>,
    pub certify: CertifyConfig,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            depth: 1,
            rank_cap: 6,
            composita: vec![(1, 1)],
            certify: CertifyConfig {
                koszul_degree: 3,
                uk_degree: 3,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploredNode {
    pub provenance: String,
    pub depth: usize,
    pub rank: usize,
    pub digest: String,
    pub graded_commutative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificates: Option<StageCertificates>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pruned: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplorationReport {
    pub config: ExploreConfig,
    pub nodes: Vec<ExploredNode>,
    /// Provenance of every certified-class member that failed certification.
    pub violators: Vec<String>,
    pub notes: Vec<String>,
    /// SHA-256 over the report with timings removed.
    pub digest: String,
}

struct Pending {
    provenance: String,
    depth: usize,
    presentation: QuadraticPresentation,
}

/// Breadth-first closure of `bases` under free products and Pythagorean
/// composita, deduplicated by presentation digest.
pub fn elementary_class_explore(
    bases: &[(String, QuadraticPresentation)],
    cfg: &ExploreConfig,
    limits: &Limits,
) -> Result<ExplorationReport> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut nodes: Vec<ExploredNode> = Vec::new();
    let mut members: Vec<(String, QuadraticPresentation)> = Vec::new();
    let mut layer: Vec<Pending> = Vec::new();
    for (name, a) in bases {
        if seen.insert(a.digest()) {
            layer.push(Pending {
                provenance: name.clone(),
                depth: 0,
                presentation: a.clone(),
            });
        }
    }
    let mut duplicates = 0usize;
    let mut depth = 0;
    loop {
        let processed: Vec<(ExploredNode, bool)> = layer
            .par_iter()
            .map(|item| explore_node(item, cfg, limits))
            .collect::<Result<_>>()?;
        let mut frontier = Vec::new();
        for (item, (node, alive)) in layer.into_iter().zip(processed) {
            nodes.push(node);
            if alive {
                frontier.push((item.provenance, item.presentation));
            }
        }
        if depth == cfg.depth {
            break;
        }
        depth += 1;
        let mut next = Vec::new();
        let mut push = |provenance: String, a: QuadraticPresentation, next: &mut Vec<Pending>| {
            if a.rank() > cfg.rank_cap {
                return;
            }
            if seen.insert(a.digest()) {
                next.push(Pending {
                    provenance,
                    depth,
                    presentation: a,
                });
            } else {
                duplicates += 1;
            }
        };
        let old = members.clone();
        members.extend(frontier.iter().cloned());
        for (i, (pa, a)) in frontier.iter().enumerate() {
            for (pb, b) in old.iter().chain(frontier[..=i].iter()) {
                if a.rank() + b.rank() <= cfg.rank_cap {
                    push(format!("({pb} * {pa})"), free_product(b, a)?, &mut next);
                }
            }
            for &(f1, f2) in &cfg.composita {
                if a.rank() + f1 + f2 <= cfg.rank_cap {
                    let (g, _) = pythagorean_compositum(a, f1, f2)?;
                    push(format!("compositum({pa}; {f1}, {f2})"), g, &mut next);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    let violators = nodes
        .iter()
        .filter(|n| n.certificates.as_ref().is_some_and(|c| !c.all_certified()))
        .map(|n| n.provenance.clone())
        .collect();
    let mut notes = vec!["deduplication is by presentation digest; presentations isomorphic only after a change of basis may appear more than once".to_string()];
    if duplicates > 0 {
        notes.push(format!("{duplicates} generated presentations were already present"));
    }
    let mut report = ExplorationReport {
        config: cfg.clone(),
        nodes,
        violators,
        notes,
        digest: String::new(),
    };
    report.digest = report_digest(&report);
    Ok(report)
}

fn explore_node(item: &Pending, cfg: &ExploreConfig, limits: &Limits) -> Result<(ExploredNode, bool)> {
    let a = &item.presentation;
    let graded_commutative = a.is_graded_commutative();
    let mut node = ExploredNode {
        provenance: item.provenance.clone(),
        depth: item.depth,
        rank: a.rank(),
        digest: a.digest(),
        graded_commutative,
        certificates: None,
        pruned: None,
    };
    if !graded_commutative {
        let reason = match pythagorean_compositum(a, 1, 0) {
            Err(Error::HypothesesFailed(r)) => format!("hypotheses failed: {}", r.failure_summary()),
            _ => "not graded-commutative".to_string(),
        };
        node.pruned = Some(reason);
        return Ok((node, false));
    }
    let mut certs = StageCertificates::compute(a, &cfg.certify, limits)?;
    certs.strip_timing();
    node.certificates = Some(certs);
    Ok((node, true))
}

fn report_digest(report: &ExplorationReport) -> String {
    let mut copy = report.clone();
    copy.digest.clear();
    let bytes = serde_json::to_vec(&copy).expect("report serializes");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObstructionOutcome {
    Excluded { certificate: Box<Certificate> },
    ConsistentUpTo { degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub digest: String,
    #[serde(flatten)]
    pub outcome: ObstructionOutcome,
    pub class: String,
}

impl ObstructionVerdict {
    pub fn is_excluded(&self) -> bool {
        matches!(self.outcome, ObstructionOutcome::Excluded { .. })
    }
}

pub const REALIZABLE_CLASS: &str =
    "maximal pro-p Galois groups G_K of fields containing a primitive p-th root of unity, \
     whose mod-p cohomology is quadratic and (universally) Koszul";

/// `EXCLUDED` as soon as either the Koszul or the universal Koszul check refutes.
pub fn obstruction_check(a: &QuadraticPresentation, n: usize, limits: &Limits) -> Result<ObstructionVerdict> {
    let koszul = is_koszul_up_to_with(a, n, limits)?;
    let outcome = if koszul.verdict.is_refutation() {
        ObstructionOutcome::Excluded {
            certificate: Box::new(koszul),
        }
    } else {
        let uk = is_universally_koszul_up_to_with(a, n, limits)?;
        if uk.verdict.is_refutation() {
            ObstructionOutcome::Excluded {
                certificate: Box::new(uk),
            }
        } else {
            ObstructionOutcome::ConsistentUpTo { degree: n }
        }
    };
    Ok(ObstructionVerdict {
        digest: a.digest(),
        outcome,
        class: REALIZABLE_CLASS.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureSearch {
    pub seed: u64,
    pub attempts: usize,
    pub max_rank: usize,
    /// Only draw relation spaces containing the graded-commutativity tensors.
    pub commutative: bool,
    /// Target refutation bidegree.
    pub bidegree: (usize, usize),
}

impl Default for FixtureSearch {
    fn default() -> Self {
        FixtureSearch {
            seed: 0x5eed_2023,
            attempts: 2000,
            max_rank: 4,
            commutative: true,
            bidegree: (2, 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundFixture {
    pub attempt: usize,
    pub presentation: crate::algebra::PresentationJson,
    pub certificate: Certificate,
}

/// Draws random `p = 2` presentations until one has a cyclic quotient with
/// a nonzero entry at the target bidegree.
pub fn search_refutation_fixture(search: &FixtureSearch, limits: &Limits) -> Result<Option<FoundFixture>> {
    if search.max_rank < 1 {
        return Err(Error::InvalidArgument("max_rank must be at least 1".into()));
    }
    let degree = search.bidegree.0.max(search.bidegree.1).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let p = Prime::TWO;
    for attempt in 0..search.attempts {
        let n = rng.gen_range(1..=search.max_rank);
        let nn = n * n;
        let extra = rng.gen_range(0..=nn);
        let mut rows: Vec<Vec<u8>> = (0..extra)
            .map(|_| (0..nn).map(|_| rng.gen_range(0..2u8)).collect())
            .collect();
        if search.commutative {
            rows.extend(crate::algebra::commutativity_subspace(p, n).vectors());
        }
        let labels = (1..=n).map(|i| format!("x{i}")).collect();
        let a = QuadraticPresentation::new(p, labels, &rows)?;
        let cert = is_universally_koszul_up_to_with(&a, degree, limits)?;
        if let Verdict::Refuted { bidegree, .. } = &cert.verdict {
            if *bidegree == search.bidegree {
                return Ok(Some(FoundFixture {
                    attempt,
                    presentation: a.to_json(),
                    certificate: cert.without_timing(),
                }));
            }
        }
    }
    Ok(None)
}

/// Statistics helper for reports: distinct digests among tower stages.
pub fn distinct_digests(steps: &[TowerStep]) -> BTreeSet<String> {
    steps.iter().map(|s| s.digest.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::ground_field;

    fn hyperbolic() -> DemuskinForm {
        DemuskinForm::hyperbolic(Prime::TWO, 2).unwrap()
    }

    #[test]
    fn base_examples() {
        let one = PythagoreanBaseSpec::new(vec![hyperbolic()], 1).unwrap();
        let a = pythagorean_base(&one).unwrap();
        assert_eq!(a.hilbert_prefix(3).unwrap().coefficients, vec![1, 3, 1, 0]);
        assert_eq!(a.generators(), &["h1_1", "h1_2", "f1"]);
        let free = pythagorean_base(&PythagoreanBaseSpec::new(vec![], 3).unwrap()).unwrap();
        assert_eq!(free.relations(), free_group_algebra(Prime::TWO, 3).relations());
        let two = pythagorean_base(&PythagoreanBaseSpec::new(vec![hyperbolic(), hyperbolic()], 0).unwrap()).unwrap();
        assert_eq!(two.hilbert_prefix(3).unwrap().coefficients, vec![1, 4, 2, 0]);
        let odd = DemuskinForm::hyperbolic(Prime::new(3).unwrap(), 2).unwrap();
        assert!(PythagoreanBaseSpec::new(vec![odd], 0).is_err());
    }

    #[test]
    fn compositum_examples() {
        let base = pythagorean_base(&PythagoreanBaseSpec::new(vec![hyperbolic()], 1).unwrap()).unwrap();
        let (same, report) = pythagorean_compositum(&base, 0, 0).unwrap();
        assert!(report.all_passed());
        assert_eq!(same.digest(), base.digest());

        let (g, _) = pythagorean_compositum(&ground_field(Prime::TWO), 1, 2).unwrap();
        assert_eq!(g.relations(), free_group_algebra(Prime::TWO, 3).relations());

        let (g, report) = pythagorean_compositum(&base, 1, 2).unwrap();
        assert!(report.all_passed());
        assert_eq!(g.rank(), 6);
        assert!(g.is_graded_commutative());
        assert_eq!(g.generators(), &["h1_1", "h1_2", "f1", "a1", "b1", "b2"]);
        let expected = free_product(&base, &free_group_algebra(Prime::TWO, 3)).unwrap();
        assert_eq!(g.relations(), expected.relations());
    }

    #[test]
    fn tower_of_identical_stages() {
        let base = PythagoreanBaseSpec::new(vec![hyperbolic()], 0).unwrap();
        let cfg = CertifyConfig {
            koszul_degree: 3,
            uk_degree: 3,
        };
        let steps = square_root_tower(&base, &[(0, 0), (0, 0)], &cfg, &Limits::default()).unwrap();
        assert_eq!(steps.len(), 3);
        assert_eq!(distinct_digests(&steps).len(), 1);
        let steps = square_root_tower(&base, &[(1, 1)], &cfg, &Limits::default()).unwrap();
        assert_eq!(steps[1].rank, 4);
        assert!(steps.iter().all(|s| s.certificates.all_certified()));
        assert!(square_root_tower(&base, &[], &cfg, &Limits::default()).is_err());
    }

    #[test]
    fn exploration_prunes_noncommutative_bases() {
        let p = Prime::TWO;
        let bad = QuadraticPresentation::new::<Vec<u8>>(p, vec!["y".into(), "z".into()], &[]).unwrap();
        let bases = vec![("D".to_string(), demuskin_algebra(&hyperbolic())), ("bad".to_string(), bad)];
        let cfg = ExploreConfig {
            depth: 0,
            ..ExploreConfig::default()
        };
        let r = elementary_class_explore(&bases, &cfg, &Limits::default()).unwrap();
        assert_eq!(r.nodes.len(), 2);
        assert!(r.nodes[1].pruned.as_deref().unwrap().contains("graded-commutative"));
        assert!(r.violators.is_empty());
    }

    #[test]
    fn obstruction_on_consistent_algebras() {
        let v = obstruction_check(&free_group_algebra(Prime::TWO, 2), 4, &Limits::default()).unwrap();
        assert_eq!(v.outcome, ObstructionOutcome::ConsistentUpTo { degree: 4 });
        let v = obstruction_check(&ground_field(Prime::TWO), 6, &Limits::default()).unwrap();
        assert!(!v.is_excluded());
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("\"verdict\":\"CONSISTENT_UP_TO\""));
    }
}
