//! Command-line front end. `run` returns the process exit code:
//! 0 pass/found, 1 fail/absent, 2 budget exhausted, 3 configuration error,
//! 4 inequality breach during `stepdown`.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::assemble::{assemble, Seeds};
use crate::coloring::{gen_base_coloring, verify_base_coloring, BaseColoring, SteppedColoring, VerifyConfig, VerifyMode};
use crate::embedding::{search_mono_embedding, SearchOutcome};
use crate::error::{Error, Result};
use crate::expander::{gen_random_regular, lambda2, verify_neighbor_expansion, ExpansionMode};
use crate::goodness::{gen_good_kgraph, gm_member, is_alpha_m_good, CheckMode};
use crate::graph::{Graph, Hypergraph};
use crate::numeric::check_delta_properties_with;
use crate::params::ParamSet;
use crate::ramsey::{named_target, ramsey_oracle, Certificate, CopySearch, RamseyOutcome};
use crate::reduction::{regression, step_down, ReductionState, StepOutcome};
use crate::report::{PropertyReport, Status};
use crate::template::{gen_template, verify_template, TemplateFamily};

pub const EXIT_CONFIG: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ramsey-stepup", version, about = "Stepping-up constructions and verifiers")]
pub struct Cli {
    /// Parameter profile: `paper`, `desk` or a parameter file.
    #[arg(long, global = true, default_value = "desk")]
    pub profile: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an object and write it with a provenance sidecar.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Search for embeddings or small Ramsey numbers.
    Search {
        #[command(subcommand)]
        what: SearchKind,
    },
    /// Run one induction step on a reduction state.
    Stepdown(StepdownArgs),
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Base 2-coloring of pairs of `[0, s)`.
    Coloring {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        seed: u64,
        /// Store the full bitmap, not only `(s, seed)`.
        #[arg(long)]
        bitmap: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A random d-regular graph or a G(n, p) graph.
    Graph {
        #[arg(long, conflicts_with = "gnp")]
        regular: bool,
        #[arg(long)]
        gnp: bool,
        #[arg(long = "M")]
        vertices: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The pruned random k-graph.
    Hypergraph {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        /// Goodness parameter; defaults to the profile's epsilon.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Template hypergraph of s-blocks.
    Template {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The full construction `H = H_R ∪ H_E`.
    Bundle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "bundle")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Args, Debug)]
pub struct Sampling {
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
}

impl Sampling {
    fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::domain("--seed is required for sampled runs"))
    }

    fn check_mode(&self) -> Result<CheckMode> {
        Ok(match self.mode {
            Mode::Exact => CheckMode::Exact,
            Mode::Sampled => CheckMode::Sampled { trials: self.trials, seed: self.seed()? },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ColoringMode {
    Exhaustive,
    Random,
    Ascent,
    Combined,
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// Properties of delta on `[0, max)`.
    Delta {
        #[arg(long, default_value_t = 4096)]
        max: u64,
        #[arg(long = "p3-max", default_value_t = 1024)]
        p3_max: u64,
    },
    /// Balance of a base coloring against weight functions.
    Coloring {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = ColoringMode::Combined)]
        mode: ColoringMode,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Spectral gap and neighbour expansion of a regular graph.
    Expander {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Degree, intersection and correlation audit of a template file.
    Template {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Membership in G_m.
    Gm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// (alpha, m)-goodness of a hypergraph.
    Goodness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// A fixed battery on small generated objects.
    All {
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum SearchKind {
    /// Monochromatic capped embedding into the stepped coloring.
    Embedding {
        #[arg(long = "H")]
        hypergraph: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Seed of the base coloring.
        #[arg(long)]
        seed: u64,
    },
    /// Exhaustive Ramsey number of a tiny target.
    Ramsey {
        /// `K<t>`, `P<t>`, `E<k>` or a hypergraph file.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long = "Nmax")]
        n_max: usize,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[arg(long)]
        cert_dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct StepdownArgs {
    #[arg(long, conflicts_with_all = ["state", "template", "coloring"])]
    regression: Option<RegressionCase>,
    #[arg(long, requires_all = ["template", "coloring"])]
    state: Option<PathBuf>,
    #[arg(long)]
    template: Option<PathBuf>,
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Where to write the next state.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegressionCase {
    Counterexample,
    Advanced,
}

/// Parses and runs; clap usage errors exit with 3, help and version with 0.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => Status::Exhausted.exit_code(),
        Error::Stage { source, .. } => exit_code_for(source),
        _ => EXIT_CONFIG,
    }
}

fn load_params(profile: &str, k: usize, m: u64) -> Result<ParamSet> {
    let p = match ParamSet::by_name(profile, k, m) {
        Some(p) => p,
        None => {
            let text = fs::read_to_string(profile)
                .map_err(|e| Error::domain(format!("profile {profile:?} is neither paper, desk nor a readable file: {e}")))?;
            let mut p = ParamSet::from_text(&text)?;
            p.k = k;
            p.m = m;
            p
        }
    };
    p.validate()?;
    Ok(p)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::domain(format!("{}: {e}", path.display())))
}

/// Prints to stdout; a closed pipe is not an error.
fn stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(cli: &Cli, report: &PropertyReport) {
    match cli.format {
        Format::Human => stdout(&report.to_string()),
        Format::Structured => stdout(&report.to_structured()),
    }
}

/// Writes `body` to `out` with a `.prov` sidecar, or prints it.
fn write_artifact(out: Option<&Path>, body: &str, provenance: &PropertyReport) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body)?;
            let mut side = path.as_os_str().to_owned();
            side.push(".prov");
            fs::write(PathBuf::from(side), provenance.to_structured())?;
        }
        None => stdout(body),
    }
    Ok(())
}

fn provenance(cli: &Cli, kind: &str, params: &ParamSet, seed: u64) -> PropertyReport {
    let mut p = PropertyReport::new(format!("gen-{kind}"));
    p.record("profile", &cli.profile).record("seed", seed);
    for line in params.to_text().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            p.record(format!("params.{k}"), v);
        }
    }
    p
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Gen { kind } => generate(cli, kind),
        Command::Verify { suite } => verify(cli, suite),
        Command::Search { what } => search(cli, what),
        Command::Stepdown(args) => stepdown(cli, args),
    }
}

fn generate(cli: &Cli, kind: &GenKind) -> Result<i32> {
    match kind {
        GenKind::Coloring { s, seed, bitmap, out } => {
            let params = load_params(&cli.profile, 3, 4)?;
            let c = gen_base_coloring(*s, *seed)?;
            let mut prov = provenance(cli, "coloring", &params, *seed);
            prov.record("s", s).record("red_pairs", c.red_count());
            write_artifact(out.as_deref(), &c.to_text(params.base_exponent_coeff, *bitmap), &prov)?;
        }
        GenKind::Graph { regular, gnp, vertices, d, n, p, seed, out } => {
            let params = load_params(&cli.profile, 3, 4)?;
            let mut prov = provenance(cli, "graph", &params, *seed);
            let g = match (regular, gnp) {
                (true, _) => {
                    let (m, d) = vertices.zip(*d).ok_or_else(|| Error::domain("--regular needs --M and --d"))?;
                    let g = gen_random_regular(m, d, *seed)?;
                    prov.record("kind", "regular").record("M", m).record("d", d);
                    prov.record("lambda2", format!("{:.6}", lambda2(&g)?));
                    g
                }
                (_, true) => {
                    let (n, p) = n.zip(*p).ok_or_else(|| Error::domain("--gnp needs --n and --p"))?;
                    prov.record("kind", "gnp").record("n", n).record("p", p);
                    Graph::gnp(n, p, *seed)?
                }
                _ => return Err(Error::domain("choose --regular or --gnp")),
            };
            prov.record("edges", g.edge_count());
            write_artifact(out.as_deref(), &g.to_text(), &prov)?;
        }
        GenKind::Hypergraph { k, n, m, alpha, seed, out } => {
            let params = load_params(&cli.profile, *k, *m)?;
            let alpha = alpha.unwrap_or(params.epsilon);
            let good = gen_good_kgraph(*n, *k, *m, alpha, &params, *seed)?;
            let mut prov = provenance(cli, "hypergraph", &params, *seed);
            prov.record("alpha", alpha)
                .record("C", good.c)
                .record("p", format!("{:e}", good.p))
                .record("resamples", good.resamples)
                .record("edges", good.hypergraph.edge_count())
                .record("max_degree", good.hypergraph.max_degree())
                .record("degree_bound", good.degree_bound);
            write_artifact(out.as_deref(), &good.hypergraph.to_text(), &prov)?;
        }
        GenKind::Template { n, s, eps, seed, out } => {
            let params = load_params(&cli.profile, 3, 4)?;
            let eps = eps.unwrap_or(params.epsilon);
            let t = gen_template(*n, *s, eps, &params, *seed)?;
            let mut prov = provenance(cli, "template", &params, *seed);
            prov.record("blocks", t.block_count()).record("attempts", t.log.len());
            write_artifact(out.as_deref(), &t.to_text(), &prov)?;
        }
        GenKind::Bundle { k, n, m, seed, out_dir } => {
            let params = load_params(&cli.profile, *k, *m)?;
            let b = assemble(*n, *k, *m, &params, Seeds::from_master(*seed))?;
            fs::create_dir_all(out_dir)?;
            let prov = provenance(cli, "bundle", &params, *seed);
            for (name, body) in [
                ("h.hg", b.h.to_text()),
                ("h_r.hg", b.h_r.to_text()),
                ("h_e.hg", b.h_e.to_text()),
                ("template.tmpl", b.template.to_text()),
                ("f.graph", b.f.to_text()),
            ] {
                write_artifact(Some(&out_dir.join(name)), &body, &prov)?;
            }
            fs::write(out_dir.join("audit.report"), b.audit.to_structured())?;
            emit(cli, &b.audit);
            return Ok(b.audit.status.exit_code());
        }
    }
    Ok(0)
}

fn verify(cli: &Cli, suite: &Suite) -> Result<i32> {
    let report = match suite {
        Suite::Delta { max, p3_max } => check_delta_properties_with(*max, *p3_max),
        Suite::Coloring { input, m, mode, trials, seed } => {
            let (c, _) = with_path(input, BaseColoring::from_text(&read(input)?))?;
            let mode = match mode {
                ColoringMode::Exhaustive => VerifyMode::Exhaustive,
                ColoringMode::Random => VerifyMode::Random { trials: *trials },
                ColoringMode::Ascent => VerifyMode::Ascent { starts: *trials },
                ColoringMode::Combined => VerifyMode::Combined { trials: *trials, starts: *trials / 4 + 1 },
            };
            let seed = match (&mode, seed) {
                (VerifyMode::Exhaustive, s) => s.unwrap_or(0),
                (_, Some(s)) => *s,
                _ => return Err(Error::domain("--seed is required for randomized coloring checks")),
            };
            verify_base_coloring(&c, *m, &VerifyConfig::new(mode, seed))
        }
        Suite::Expander { input, k, eps, sampling } => {
            let g = with_path(input, Graph::from_text(&read(input)?))?;
            let params = load_params(&cli.profile, *k, 4)?;
            let mode = match sampling.mode {
                Mode::Exact => ExpansionMode::Exact,
                Mode::Sampled => ExpansionMode::Sampled { trials: sampling.trials, seed: sampling.seed()? },
            };
            let mut rep = PropertyReport::new("expander");
            let lambda = lambda2(&g)?;
            let d = g.regular_degree().unwrap_or(0) as f64;
            let bound = 2.0 * (d - 1.0).max(0.0).sqrt() + 1.0;
            rep.record("lambda2", format!("{lambda:.6}")).record("lambda2.bound", format!("{bound:.6}"));
            if lambda > bound {
                rep.fail(format!("lambda2 = {lambda:.6} > {bound:.6}"));
            }
            rep.absorb("expansion", &verify_neighbor_expansion(&g, eps.unwrap_or(params.epsilon), *k, mode));
            rep
        }
        Suite::Template { input, trials, eps, seed } => {
            let t = with_path(input, TemplateFamily::from_text(&read(input)?))?;
            verify_template(&t, eps.unwrap_or(t.eps), *trials, *seed)
        }
        Suite::Gm { input, m, sampling } => {
            let g = with_path(input, Graph::from_text(&read(input)?))?;
            let params = load_params(&cli.profile, 3, *m)?;
            gm_member(&g, *m, &params, sampling.check_mode()?)
        }
        Suite::Goodness { input, alpha, m, sampling } => {
            let h = with_path(input, Hypergraph::from_text(&read(input)?))?;
            let params = load_params(&cli.profile, h.k(), *m)?;
            is_alpha_m_good(&h, *alpha, *m, &params, sampling.check_mode()?)
        }
        Suite::All { seed } => verify_all(cli, *seed)?,
    };
    emit(cli, &report);
    Ok(report.status.exit_code())
}

/// Small instances of every suite, merged in suite-name order.
fn verify_all(cli: &Cli, seed: u64) -> Result<PropertyReport> {
    let params = load_params(&cli.profile, 3, 3)?;
    let mut all = PropertyReport::new("all");
    all.record("seed", seed);
    let mut parts: Vec<(&str, PropertyReport)> = Vec::new();
    parts.push(("coloring", {
        let c = gen_base_coloring(12, seed)?;
        verify_base_coloring(&c, 3, &VerifyConfig::new(VerifyMode::Exhaustive, seed))
    }));
    parts.push(("delta", check_delta_properties_with(1024, 128)));
    parts.push(("expander", {
        let g = gen_random_regular(16, 6, seed)?;
        verify_neighbor_expansion(&g, 0.25, 2, ExpansionMode::Exact)
    }));
    parts.push(("gm", gm_member(&Graph::complete(6), 3, &params, CheckMode::Exact)));
    parts.push(("goodness", {
        is_alpha_m_good(&Hypergraph::complete(8, 3), 0.5, 2, &load_params(&cli.profile, 3, 2)?, CheckMode::Exact)
    }));
    parts.push(("template", {
        let mut tp = params.clone();
        tp.template_degree_cap = 5;
        let t = gen_template(400, 20, 0.25, &tp, seed)?;
        verify_template(&t, 0.25, 20, seed)
    }));
    parts.sort_by_key(|(name, _)| *name);
    for (name, rep) in &parts {
        all.absorb(name, rep);
    }
    Ok(all)
}

fn search(cli: &Cli, what: &SearchKind) -> Result<i32> {
    match what {
        SearchKind::Embedding { hypergraph, k, m, b, budget, seed } => {
            let h = with_path(hypergraph, Hypergraph::from_text(&read(hypergraph)?))?;
            let k = k.unwrap_or(h.k());
            let params = load_params(&cli.profile, k, *m)?;
            let sc = SteppedColoring::generate(params, *seed)?;
            let mut rep = PropertyReport::new("search-embedding");
            rep.record("k", k).record("m", m).record("b", b).record("budget", budget).record("seed", seed);
            let out = search_mono_embedding(&h, &sc, *b, *budget)?;
            let code = match &out {
                SearchOutcome::Found { embedding, color, nodes } => {
                    let values: Vec<String> = embedding.values().iter().map(|x| x.to_string()).collect();
                    rep.record("outcome", "found")
                        .record("color", color)
                        .record("nodes", nodes)
                        .record("embedding", values.join(","));
                    0
                }
                SearchOutcome::Absent { nodes } => {
                    rep.record("outcome", "absent").record("nodes", nodes);
                    rep.fail("no monochromatic embedding exists");
                    1
                }
                SearchOutcome::Exhausted { nodes } => {
                    rep.record("outcome", "budget-exhausted").record("nodes", nodes);
                    rep.status = Status::Exhausted;
                    2
                }
            };
            emit(cli, &rep);
            Ok(code)
        }
        SearchKind::Ramsey { target, q, n_max, budget, cert_dir } => {
            let h = match named_target(target) {
                Ok(h) => h,
                Err(_) => {
                    let path = Path::new(target);
                    with_path(path, Hypergraph::from_text(&read(path)?))?
                }
            };
            let mut rep = PropertyReport::new("search-ramsey");
            rep.record("target", target).record("q", q).record("n_max", n_max).record("budget", budget);
            let outcome = ramsey_oracle(&h, *q, *n_max, *budget, CopySearch::Backtrack)?;
            let mut certs = Vec::new();
            let code = match &outcome {
                RamseyOutcome::Value { n, witness, colorings_checked } => {
                    rep.record("outcome", "value").record("value", n).record("colorings_checked", colorings_checked);
                    certs.push(("lower.cert", Certificate::LowerBound { target: target.clone(), q: *q, coloring: witness.clone() }));
                    certs.push((
                        "upper.cert",
                        Certificate::Exhausted { target: target.clone(), k: h.k(), q: *q, n: *n, colorings: *colorings_checked },
                    ));
                    0
                }
                RamseyOutcome::LowerBound { witness } => {
                    rep.record("outcome", "lower-bound").record("exceeds", n_max);
                    rep.fail(format!("every size up to {n_max} has an avoiding coloring"));
                    certs.push(("lower.cert", Certificate::LowerBound { target: target.clone(), q: *q, coloring: witness.clone() }));
                    1
                }
                RamseyOutcome::Exhausted { reached, witness } => {
                    rep.record("outcome", "budget-exhausted").record("reached", reached);
                    rep.status = Status::Exhausted;
                    if let Some(w) = witness {
                        certs.push(("lower.cert", Certificate::LowerBound { target: target.clone(), q: *q, coloring: w.clone() }));
                    }
                    2
                }
            };
            for (name, cert) in &certs {
                let ok = cert.verify(&h, CopySearch::Enumerate);
                rep.record(format!("{name}.rechecked"), ok);
                if !ok {
                    rep.fail(format!("{name} failed the independent recheck"));
                }
            }
            if let Some(dir) = cert_dir {
                fs::create_dir_all(dir)?;
                for (name, cert) in &certs {
                    fs::write(dir.join(name), cert.to_text())?;
                }
            }
            emit(cli, &rep);
            Ok(if rep.status == Status::Fail && code == 0 { 1 } else { code })
        }
    }
}

fn stepdown(cli: &Cli, args: &StepdownArgs) -> Result<i32> {
    let (state, sc, template) = match (&args.regression, &args.state) {
        (Some(RegressionCase::Counterexample), _) => regression::counterexample_instance()?,
        (Some(RegressionCase::Advanced), _) => regression::advanced_instance()?,
        (None, Some(path)) => {
            let state = with_path(path, ReductionState::from_text(&read(path)?))?;
            let tpath = args.template.as_ref().expect("required by clap");
            let template = with_path(tpath, TemplateFamily::from_text(&read(tpath)?))?;
            let cpath = args.coloring.as_ref().expect("required by clap");
            let (base, _) = with_path(cpath, BaseColoring::from_text(&read(cpath)?))?;
            let sc = SteppedColoring::new(state.params.clone(), base)?;
            (state, sc, template)
        }
        (None, None) => return Err(Error::domain("give --regression or --state with --template and --coloring")),
    };
    let outcome = step_down(&state, &sc, &template)?;
    let next = match &outcome {
        StepOutcome::Advanced { next, .. } => Some(next),
        StepOutcome::Breach { next, .. } => next.as_ref(),
        StepOutcome::Counterexample { .. } => None,
    };
    if let (Some(next), Some(out)) = (next, &args.out) {
        fs::write(out, next.to_text())?;
    }
    let mut rep = outcome.report().clone();
    rep.record("exit", outcome.label());
    emit(cli, &rep);
    Ok(outcome.exit_code())
}
