//! Command-line front end. Exit status: 0 success, 1 refuted or failed
//! verdict, 2 usage or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{PresentationJson, QuadraticPresentation};
use crate::constructors::{demuskin_algebra, free_group_algebra, free_product, DemuskinForm};
use crate::error::Error;
use crate::gluing::{glue, glue_forced, matrix_from_json, GluingDatum, GluingDatumJson, HypothesisReport, PresentationRef};
use crate::koszul::{
    hierarchy_audit, hilbert_certificate, is_koszul_up_to_with, is_universally_koszul_up_to_with,
    pbw_order_succeeds, pbw_search, AuditReport, Certificate, CertificateKind, Limits, Verdict,
    DEFAULT_KOSZUL_DEGREE, DEFAULT_PBW_BUDGET,
};
use crate::linalg::Prime;
use crate::scenarios::{
    elementary_class_explore, obstruction_check, pythagorean_base, pythagorean_compositum,
    search_refutation_fixture, square_root_tower, CertifyConfig, ExplorationReport, ExploreConfig,
    FixtureSearch, FoundFixture, ObstructionVerdict, PythagoreanBaseJson, PythagoreanBaseSpec,
    StageCertificates, TowerStep,
};

#[derive(Debug, Parser)]
#[command(name = "quadkoszul", version, about = "Quadratic cohomology presentations, gluing and Koszulity certificates")]
pub struct Cli {
    /// Worker threads for the parallel checkers.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Seed for every randomized step; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Omit wall-clock timings so that outputs are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a presentation from a constructor.
    Build {
        #[command(subcommand)]
        what: BuildKind,
    },
    /// Glue two presentations over a common base.
    Glue {
        datum: PathBuf,
        /// Build the pullback even when hypotheses fail.
        #[arg(long)]
        force: bool,
    },
    /// Run a checker and write its certificate.
    Check(CheckArgs),
    /// Run a scenario specification.
    Scenario { spec: PathBuf },
    /// Re-check a certificate against a presentation.
    Verify { certificate: PathBuf, presentation: PathBuf },
    /// Render any output file as text.
    Report { input: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BuildKind {
    /// Free pro-p group of the given rank.
    Free {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        rank: usize,
    },
    /// Demuškin algebra from a form given as JSON rows, or hyperbolic of even rank.
    Demuskin {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, conflicts_with = "hyperbolic")]
        form: Option<String>,
        #[arg(long)]
        hyperbolic: Option<usize>,
    },
    /// Free product of two presentation files.
    FreeProduct { left: PathBuf, right: PathBuf },
    /// Quadratic dual of a presentation file.
    Dual { input: PathBuf },
    /// Pythagorean base from a JSON spec (`demuskin` forms and `free_rank`).
    Pythagorean { spec: PathBuf },
    /// Compositum of a presentation with free ranks `f1`, `f2` (p = 2).
    Compositum {
        input: PathBuf,
        #[arg(long)]
        f1: usize,
        #[arg(long)]
        f2: usize,
    },
    /// Parse a presentation file and emit its canonical form.
    Normalize { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Koszul,
    Ukoszul,
    Pbw,
    Hilbert,
    All,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub presentation: PathBuf,
    #[arg(long, value_enum, default_value_t = CheckKind::Koszul)]
    pub kind: CheckKind,
    /// Truncation degree (at least 2).
    #[arg(long, default_value_t = DEFAULT_KOSZUL_DEGREE)]
    pub degree: usize,
    /// Generator orders to try in the PBW search.
    #[arg(long, default_value_t = DEFAULT_PBW_BUDGET)]
    pub budget: usize,
    /// Cap on projective classes enumerated by the universal check.
    #[arg(long)]
    pub class_cap: Option<usize>,
}

/// Failure that carries its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HypothesesFailed(_) | Error::TowerAborted { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlueOutput {
    pub seed: u64,
    pub forced: bool,
    pub presentation: PresentationJson,
    pub digest: String,
    pub report: HypothesisReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutput {
    pub seed: u64,
    pub certificates: Vec<Certificate>,
    pub audit: AuditReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioSpec {
    Pythagorean {
        base: PythagoreanBaseJson,
        f1: usize,
        f2: usize,
        #[serde(default)]
        certify: Option<CertifyConfig>,
    },
    Tower {
        base: PythagoreanBaseJson,
        steps: Vec<(usize, usize)>,
        #[serde(default)]
        certify: Option<CertifyConfig>,
    },
    Explore {
        bases: Vec<NamedBase>,
        #[serde(default)]
        config: Option<ExploreConfig>,
    },
    Obstruction {
        presentation: PresentationRef,
        #[serde(default = "default_degree")]
        degree: usize,
    },
    FixtureSearch {
        /// Overrides the global `--seed`.
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        attempts: Option<usize>,
        #[serde(default)]
        max_rank: Option<usize>,
        #[serde(default)]
        commutative: Option<bool>,
    },
}

fn default_degree() -> usize {
    DEFAULT_KOSZUL_DEGREE
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedBase {
    pub name: String,
    #[serde(flatten)]
    pub source: BaseSource,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSource {
    Presentation { presentation: PresentationRef },
    Spec(PythagoreanBaseJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioResult {
    Pythagorean {
        presentation: PresentationJson,
        digest: String,
        report: HypothesisReport,
        certificates: Box<StageCertificates>,
    },
    Tower {
        stages: Vec<TowerStep>,
    },
    Explore {
        report: ExplorationReport,
    },
    Obstruction {
        verdict: ObstructionVerdict,
    },
    FixtureSearch {
        search: FixtureSearch,
        found: Option<Box<FoundFixture>>,
    },
}

impl ScenarioResult {
    fn succeeded(&self) -> bool {
        match self {
            ScenarioResult::Pythagorean { certificates, .. } => certificates.all_certified(),
            ScenarioResult::Tower { stages } => stages.iter().all(|s| s.certificates.all_certified()),
            ScenarioResult::Explore { report } => report.violators.is_empty(),
            ScenarioResult::Obstruction { verdict } => !verdict.is_excluded(),
            ScenarioResult::FixtureSearch { found, .. } => found.is_some(),
        }
    }

    fn strip_timing(&mut self) {
        let strip = |c: &mut StageCertificates| {
            c.koszul.elapsed_ms = None;
            c.universally_koszul.elapsed_ms = None;
        };
        match self {
            ScenarioResult::Pythagorean { certificates, .. } => strip(certificates),
            ScenarioResult::Tower { stages } => stages.iter_mut().for_each(|s| strip(&mut s.certificates)),
            ScenarioResult::Obstruction { verdict } => {
                if let crate::scenarios::ObstructionOutcome::Excluded { certificate } = &mut verdict.outcome {
                    certificate.elapsed_ms = None;
                }
            }
            ScenarioResult::Explore { .. } | ScenarioResult::FixtureSearch { .. } => {}
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioOutput {
    pub seed: u64,
    pub spec: ScenarioSpec,
    pub result: ScenarioResult,
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid {what} in {}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> CliResult<QuadraticPresentation> {
    let json: PresentationJson = parse_json(path, "presentation")?;
    QuadraticPresentation::from_json(&json)
        .map_err(|e| Failure::usage(format!("invalid presentation in {}: {e}", path.display())))
}

fn resolve(reference: &PresentationRef, dir: &Path, field: &str) -> CliResult<QuadraticPresentation> {
    match reference {
        PresentationRef::Path(p) => load_presentation(&dir.join(p)).map_err(|f| Failure::usage(format!("{field}: {}", f.message))),
        PresentationRef::Inline(json) => {
            QuadraticPresentation::from_json(json).map_err(|e| Failure::usage(format!("{field}: {e}")))
        }
    }
}

fn parent_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

struct Context {
    seed: u64,
    no_timing: bool,
    output: Option<PathBuf>,
}

impl Context {
    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).map_err(|e| Failure::usage(format!("cannot write output: {e}")))
            }
        }
    }

    fn finish_cert(&self, mut c: Certificate) -> Certificate {
        c.seed = Some(self.seed);
        if self.no_timing {
            c.elapsed_ms = None;
        }
        c
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let ctx = Context {
        seed: cli.seed,
        no_timing: cli.no_timing,
        output: cli.output.clone(),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads as usize).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli.command, &ctx)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: &Command, ctx: &Context) -> CliResult<i32> {
    match command {
        Command::Build { what } => build(what, ctx),
        Command::Glue { datum, force } => glue_cmd(datum, *force, ctx),
        Command::Check(args) => check(args, ctx),
        Command::Scenario { spec } => scenario(spec, ctx),
        Command::Verify { certificate, presentation } => verify(certificate, presentation, ctx),
        Command::Report { input } => report(input, ctx),
    }
}

fn prime(p: u32) -> CliResult<Prime> {
    Prime::new(p).map_err(|e| Failure::usage(format!("--p: {e}")))
}

fn build(what: &BuildKind, ctx: &Context) -> CliResult<i32> {
    let a = match what {
        BuildKind::Free { p, rank } => free_group_algebra(prime(*p)?, *rank),
        BuildKind::Demuskin { p, form, hyperbolic } => {
            let p = prime(*p)?;
            let form = match (form, hyperbolic) {
                (Some(text), _) => {
                    let rows: Vec<Vec<i64>> = serde_json::from_str(text)
                        .map_err(|e| Failure::usage(format!("--form: expected JSON rows: {e}")))?;
                    DemuskinForm::from_integers(p, &rows)
                }
                (None, Some(n)) => DemuskinForm::hyperbolic(p, *n),
                (None, None) => return Err(Failure::usage("demuskin needs --form or --hyperbolic")),
            }
            .map_err(|e| Failure::usage(format!("--form: {e}")))?;
            demuskin_algebra(&form)
        }
        BuildKind::FreeProduct { left, right } => free_product(&load_presentation(left)?, &load_presentation(right)?)?,
        BuildKind::Dual { input } => load_presentation(input)?.quadratic_dual(),
        BuildKind::Pythagorean { spec } => {
            let json: PythagoreanBaseJson = parse_json(spec, "Pythagorean base spec")?;
            pythagorean_base(&PythagoreanBaseSpec::from_json(&json)?)?
        }
        BuildKind::Compositum { input, f1, f2 } => pythagorean_compositum(&load_presentation(input)?, *f1, *f2)?.0,
        BuildKind::Normalize { input } => load_presentation(input)?,
    };
    ctx.emit(&to_json(&a.to_json()))?;
    Ok(0)
}

fn load_datum(path: &Path) -> CliResult<GluingDatum> {
    let json: GluingDatumJson = parse_json(path, "gluing datum")?;
    let dir = parent_dir(path);
    let a1 = resolve(&json.a1, &dir, "a1")?;
    let a2 = resolve(&json.a2, &dir, "a2")?;
    let base = resolve(&json.base, &dir, "base")?;
    let p = base.prime();
    let res1 = matrix_from_json(p, &json.res1, a1.rank()).map_err(|e| Failure::usage(format!("res1: {e}")))?;
    let res2 = matrix_from_json(p, &json.res2, a2.rank()).map_err(|e| Failure::usage(format!("res2: {e}")))?;
    GluingDatum::new(a1, a2, base, res1, res2).map_err(|e| Failure::usage(format!("gluing datum: {e}")))
}

fn glue_cmd(datum: &Path, force: bool, ctx: &Context) -> CliResult<i32> {
    let d = load_datum(datum)?;
    let glued = if force {
        glue_forced(&d)?
    } else {
        match glue(&d) {
            Ok(g) => g,
            Err(Error::HypothesesFailed(report)) => {
                eprintln!("error: gluing hypotheses failed: {}", report.failure_summary());
                ctx.emit(&to_json(&*report))?;
                return Ok(1);
            }
            Err(e) => return Err(e.into()),
        }
    };
    let out = GlueOutput {
        seed: ctx.seed,
        forced: force,
        digest: glued.presentation.digest(),
        presentation: glued.presentation.to_json(),
        report: glued.report,
    };
    ctx.emit(&to_json(&out))?;
    Ok(0)
}

fn limits_for(class_cap: Option<usize>) -> Limits {
    let mut limits = Limits::default();
    if let Some(cap) = class_cap {
        limits.class_cap = cap;
    }
    limits
}

fn run_check(a: &QuadraticPresentation, kind: CertificateKind, degree: usize, budget: usize, seed: u64, limits: &Limits) -> CliResult<Certificate> {
    Ok(match kind {
        CertificateKind::Hilbert => hilbert_certificate(a, degree)?,
        CertificateKind::Koszul => is_koszul_up_to_with(a, degree, limits)?,
        CertificateKind::UniversallyKoszul => is_universally_koszul_up_to_with(a, degree, limits)?,
        CertificateKind::Pbw => pbw_search(a, budget, seed)?,
    })
}

fn check(args: &CheckArgs, ctx: &Context) -> CliResult<i32> {
    if args.degree < 2 {
        return Err(Failure::usage(format!("--degree must be at least 2, got {}", args.degree)));
    }
    if args.budget < 1 {
        return Err(Failure::usage("--budget must be at least 1"));
    }
    let a = load_presentation(&args.presentation)?;
    let limits = limits_for(args.class_cap);
    let kinds: &[CertificateKind] = match args.kind {
        CheckKind::Koszul => &[CertificateKind::Koszul],
        CheckKind::Ukoszul => &[CertificateKind::UniversallyKoszul],
        CheckKind::Pbw => &[CertificateKind::Pbw],
        CheckKind::Hilbert => &[CertificateKind::Hilbert],
        CheckKind::All => &[
            CertificateKind::Hilbert,
            CertificateKind::Koszul,
            CertificateKind::UniversallyKoszul,
            CertificateKind::Pbw,
        ],
    };
    let certs = kinds
        .iter()
        .map(|&k| run_check(&a, k, args.degree, args.budget, ctx.seed, &limits).map(|c| ctx.finish_cert(c)))
        .collect::<CliResult<Vec<_>>>()?;
    let positive = certs.iter().all(|c| c.verdict.is_positive());
    if let [only] = certs.as_slice() {
        ctx.emit(&to_json(only))?;
        return Ok(if positive { 0 } else { 1 });
    }
    let audit = hierarchy_audit(&certs)?;
    let ok = positive && audit.passed;
    ctx.emit(&to_json(&CheckOutput {
        seed: ctx.seed,
        certificates: certs,
        audit,
    }))?;
    Ok(if ok { 0 } else { 1 })
}

fn scenario(path: &Path, ctx: &Context) -> CliResult<i32> {
    let spec: ScenarioSpec = parse_json(path, "scenario spec")?;
    let dir = parent_dir(path);
    let limits = Limits::default();
    let base_of = |json: &PythagoreanBaseJson| -> CliResult<PythagoreanBaseSpec> {
        PythagoreanBaseSpec::from_json(json).map_err(|e| Failure::usage(format!("base: {e}")))
    };
    let mut result = match &spec {
        ScenarioSpec::Pythagorean { base, f1, f2, certify } => {
            let c = pythagorean_base(&base_of(base)?)?;
            let (g, report) = pythagorean_compositum(&c, *f1, *f2)?;
            let certificates = Box::new(StageCertificates::compute(&g, &certify.unwrap_or_default(), &limits)?);
            ScenarioResult::Pythagorean {
                digest: g.digest(),
                presentation: g.to_json(),
                report,
                certificates,
            }
        }
        ScenarioSpec::Tower { base, steps, certify } => {
            let stages = match square_root_tower(&base_of(base)?, steps, &certify.unwrap_or_default(), &limits) {
                Ok(s) => s,
                Err(Error::TowerAborted { step, report }) => {
                    eprintln!("error: tower aborted at step {step}: {}", report.failure_summary());
                    ctx.emit(&to_json(&*report))?;
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            ScenarioResult::Tower { stages }
        }
        ScenarioSpec::Explore { bases, config } => {
            let mut named = Vec::with_capacity(bases.len());
            for (i, b) in bases.iter().enumerate() {
                let a = match &b.source {
                    BaseSource::Presentation { presentation } => resolve(presentation, &dir, &format!("bases[{i}]"))?,
                    BaseSource::Spec(json) => pythagorean_base(&base_of(json)?)?,
                };
                named.push((b.name.clone(), a));
            }
            let report = elementary_class_explore(&named, &config.clone().unwrap_or_default(), &limits)?;
            ScenarioResult::Explore { report }
        }
        ScenarioSpec::Obstruction { presentation, degree } => {
            if *degree < 2 {
                return Err(Failure::usage("degree must be at least 2"));
            }
            let a = resolve(presentation, &dir, "presentation")?;
            ScenarioResult::Obstruction {
                verdict: obstruction_check(&a, *degree, &limits)?,
            }
        }
        ScenarioSpec::FixtureSearch {
            seed,
            attempts,
            max_rank,
            commutative,
        } => {
            let defaults = FixtureSearch::default();
            let search = FixtureSearch {
                seed: seed.unwrap_or(ctx.seed),
                attempts: attempts.unwrap_or(defaults.attempts),
                max_rank: max_rank.unwrap_or(defaults.max_rank),
                commutative: commutative.unwrap_or(defaults.commutative),
                bidegree: defaults.bidegree,
            };
            let found = search_refutation_fixture(&search, &limits)?.map(Box::new);
            ScenarioResult::FixtureSearch { search, found }
        }
    };
    if ctx.no_timing {
        result.strip_timing();
    }
    let ok = result.succeeded();
    ctx.emit(&to_json(&ScenarioOutput {
        seed: ctx.seed,
        spec,
        result,
    }))?;
    Ok(if ok { 0 } else { 1 })
}

fn verify(cert_path: &Path, pres_path: &Path, ctx: &Context) -> CliResult<i32> {
    let cert: Certificate = parse_json(cert_path, "certificate")?;
    let a = load_presentation(pres_path)?;
    cert.check_digest(&a)?;
    let reproduced = match &cert.verdict {
        Verdict::PbwWitness { order } => {
            let idx = order
                .iter()
                .map(|g| a.generator_index(g))
                .collect::<crate::Result<Vec<_>>>()?;
            idx.len() == a.rank() && pbw_order_succeeds(&a, &idx)
        }
        Verdict::Inconclusive { .. } => true,
        _ => {
            let degree = cert.cutoffs.d_max;
            let limits = limits_for(None);
            let again = run_check(&a, cert.kind, degree, 1, cert.seed.unwrap_or(ctx.seed), &limits)?;
            again.verdict == cert.verdict
        }
    };
    let line = format!(
        "{} certificate ({}) for {}: {}\n",
        cert.kind,
        cert.verdict,
        &cert.digest[..16],
        if reproduced { "verified" } else { "NOT reproduced" }
    );
    ctx.emit(&line)?;
    Ok(if reproduced { 0 } else { 1 })
}

fn render_certificate(c: &Certificate) -> String {
    let mut s = format!(
        "{} certificate (tool {}), p = {}, rank {}, digest {}\n  cutoffs: h <= {}, d <= {}\n  verdict: {}\n",
        c.kind,
        c.tool_version,
        c.p,
        c.rank,
        c.digest,
        c.cutoffs.h_max,
        c.cutoffs.d_max,
        c.verdict
    );
    if let Some(n) = c.classes_checked {
        s.push_str(&format!("  projective classes checked: {n}\n"));
    }
    if let Some(seed) = c.seed {
        s.push_str(&format!("  seed: {seed}\n"));
    }
    if let Some(ms) = c.elapsed_ms {
        s.push_str(&format!("  elapsed: {ms} ms\n"));
    }
    if let Some(b) = &c.betti {
        s.push_str("  Betti table");
        if let crate::koszul::ModuleDescriptor::Quotient { label, .. } = &b.module {
            s.push_str(&format!(" of A/A({label})"));
        }
        s.push_str(":\n");
        for line in b.render().lines() {
            s.push_str(&format!("    {line}\n"));
        }
    }
    s
}

fn render_presentation(a: &QuadraticPresentation) -> String {
    let hilbert = a
        .hilbert_prefix(4)
        .map(|h| format!("{:?}", h.coefficients))
        .unwrap_or_else(|e| e.to_string());
    format!(
        "presentation over F_{}: generators [{}], dim R = {}, digest {}\n  Hilbert prefix: {}\n  graded-commutative: {}\n",
        a.prime(),
        a.generators().join(", "),
        a.relations().dim(),
        a.digest(),
        hilbert,
        a.is_graded_commutative()
    )
}

fn render_hypotheses(r: &HypothesisReport) -> String {
    let mut s = String::from("hypotheses:\n");
    for (name, ok) in r.checks() {
        s.push_str(&format!("  [{}] {name}\n", if ok { "pass" } else { "FAIL" }));
    }
    s.push_str(&format!("  fiber product dimension: {}\n", r.fiber_product_dim));
    for n in &r.notes {
        s.push_str(&format!("  note: {n}\n"));
    }
    s
}

fn render_stage_certs(c: &StageCertificates) -> String {
    format!(
        "koszul: {}; universally koszul: {}",
        c.koszul.verdict,
        c.universally_koszul.verdict
    )
}

fn render_scenario(o: &ScenarioOutput) -> String {
    let mut s = format!("scenario (seed {})\n", o.seed);
    match &o.result {
        ScenarioResult::Pythagorean {
            digest,
            report,
            certificates,
            presentation,
        } => {
            s.push_str(&format!("  compositum rank {}, digest {digest}\n", presentation.generators.len()));
            s.push_str(&render_hypotheses(report));
            s.push_str(&format!("  {}\n", render_stage_certs(certificates)));
        }
        ScenarioResult::Tower { stages } => {
            for st in stages {
                s.push_str(&format!(
                    "  stage {} (+{}, +{}): rank {}, digest {}.., {}\n",
                    st.step,
                    st.free_rank_1,
                    st.free_rank_2,
                    st.rank,
                    &st.digest[..12],
                    render_stage_certs(&st.certificates)
                ));
            }
        }
        ScenarioResult::Explore { report } => {
            for n in &report.nodes {
                let status = match (&n.pruned, &n.certificates) {
                    (Some(reason), _) => format!("pruned ({reason})"),
                    (None, Some(c)) => render_stage_certs(c),
                    (None, None) => "unchecked".into(),
                };
                s.push_str(&format!("  [depth {}] {} rank {}: {status}\n", n.depth, n.provenance, n.rank));
            }
            s.push_str(&format!("  violators: {}\n", report.violators.len()));
            for n in &report.notes {
                s.push_str(&format!("  note: {n}\n"));
            }
            s.push_str(&format!("  report digest {}\n", report.digest));
        }
        ScenarioResult::Obstruction { verdict } => {
            match &verdict.outcome {
                crate::scenarios::ObstructionOutcome::Excluded { certificate } => {
                    s.push_str(&format!("  EXCLUDED from: {}\n", verdict.class));
                    s.push_str(&render_certificate(certificate));
                }
                crate::scenarios::ObstructionOutcome::ConsistentUpTo { degree } => {
                    s.push_str(&format!("  CONSISTENT_UP_TO({degree})\n"));
                }
            }
        }
        ScenarioResult::FixtureSearch { search, found } => match found {
            Some(f) => {
                s.push_str(&format!("  fixture found at attempt {} of {}\n", f.attempt, search.attempts));
                s.push_str(&render_certificate(&f.certificate));
            }
            None => s.push_str(&format!("  no fixture in {} attempts\n", search.attempts)),
        },
    }
    s
}

fn report(input: &Path, ctx: &Context) -> CliResult<i32> {
    let text = read_text(input)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid JSON in {}: {e}", input.display())))?;
    let rendered = if let Ok(c) = serde_json::from_value::<Certificate>(value.clone()) {
        render_certificate(&c)
    } else if let Ok(c) = serde_json::from_value::<CheckOutput>(value.clone()) {
        let mut s: String = c.certificates.iter().map(render_certificate).collect();
        s.push_str(&format!("hierarchy audit: {}\n", if c.audit.passed { "pass" } else { "FAIL" }));
        for conflict in &c.audit.conflicts {
            s.push_str(&format!("  conflict: {conflict}\n"));
        }
        for obs in &c.audit.observations {
            s.push_str(&format!("  observation: {obs}\n"));
        }
        s
    } else if let Ok(o) = serde_json::from_value::<ScenarioOutput>(value.clone()) {
        render_scenario(&o)
    } else if let Ok(g) = serde_json::from_value::<GlueOutput>(value.clone()) {
        let a = QuadraticPresentation::from_json(&g.presentation)?;
        format!("{}{}", render_presentation(&a), render_hypotheses(&g.report))
    } else if let Ok(r) = serde_json::from_value::<HypothesisReport>(value.clone()) {
        render_hypotheses(&r)
    } else if let Ok(p) = serde_json::from_value::<PresentationJson>(value) {
        render_presentation(&QuadraticPresentation::from_json(&p)?)
    } else {
        return Err(Failure::usage(format!("{} is not a recognised output file", input.display())));
    };
    ctx.emit(&rendered)?;
    Ok(0)
}
