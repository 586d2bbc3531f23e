//! The `fixcat` command line: argument parsing, dispatch and rendering.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::adamek;
use crate::cat::{Budget, EndofunctorSpec, FinMap, FinSet, FinSets, DEFAULT_HOM_CAP, DEFAULT_MAX_OBJECT, DEFAULT_STAGES};
use crate::error::Error;
use crate::fixpoint::{self, LocalityVerdict, Verdict};
use crate::io::{self, FormatTag, InputError, Schema};
use crate::lattice::{self, Direction, FiniteLattice};
use crate::rank::{self, HomTree, Mode, NoethRankReport, NoetherianVerdict, RankValue, RationalHigherCat};
use crate::sigma::{self, Bound, CompletenessReport, PresheafSpec, SegalReport, SigmaFragment, SigmaObject};
use crate::sweep::{self, LocalitySweep, PfpSweep};

const SCHEMA_HINT: &str = "input documents are described by the JSON schemas in schemas/ (format \"fixcat/1\")";

#[derive(Debug, Parser)]
#[command(name = "fixcat", version, about = "Fixed points, free algebras and higher-category skeletons on finite data")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Stage cap for chain constructions.
    #[arg(long, global = true, default_value_t = DEFAULT_STAGES, value_parser = positive)]
    pub budget: usize,
    /// Cap on enumerated hom-set sizes.
    #[arg(long, global = true, default_value_t = DEFAULT_HOM_CAP, value_parser = positive)]
    pub hom_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Include per-stage sizes and maps.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub budget: Budget,
    pub format: OutputFormat,
    pub trace: bool,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { budget: Budget::default(), format: OutputFormat::Text, trace: false, seed: 0 }
    }
}

impl From<&RunArgs> for RunConfig {
    fn from(a: &RunArgs) -> Self {
        RunConfig {
            budget: Budget { stages: a.budget, hom_cap: a.hom_cap, max_object: DEFAULT_MAX_OBJECT },
            format: a.format,
            trace: a.trace,
            seed: a.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Definition,
    Section,
    Lift,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Initial algebra by the colimit of 0 → F0 → F²0 → ….
    InitialAlgebra {
        #[arg(long)]
        functor: PathBuf,
    },
    /// Terminal coalgebra by the limit of 1 ← F1 ← F²1 ← ….
    TerminalCoalgebra {
        #[arg(long)]
        functor: PathBuf,
    },
    /// Free algebra on a set.
    FreeAlgebra {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        on: PathBuf,
    },
    /// Free algebra on a lax algebra by iterated propagation.
    FreeLax {
        #[arg(long)]
        lax: PathBuf,
    },
    /// Fixed-point reflection of a coalgebra.
    Reflect {
        #[arg(long)]
        coalgebra: PathBuf,
    },
    /// Fixed-point coreflection of an algebra.
    Coreflect {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Whether a coalgebra hom is inverted by the reflection.
    IsLocal {
        #[arg(long)]
        hom: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Definition)]
        method: Method,
    },
    /// Least fixed point by Kleene iteration.
    Lfp {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Greatest fixed point by Kleene iteration.
    Gfp {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Least dataflow solution of a control-flow graph.
    Dataflow {
        #[arg(long)]
        cfg: PathBuf,
        #[arg(long, value_enum, default_value_t = DirectionArg::Forward)]
        direction: DirectionArg,
        /// Solve with a worklist instead of round-robin sweeps.
        #[arg(long)]
        worklist: bool,
    },
    /// Hom sets, Segal and completeness checks on the Σ skeleton
    #[command(subcommand)]
    Sigma(SigmaCommand),
    /// Rank of a skeleton.
    Rank {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Whether every tower of parallel morphisms reaches a contractible hom.
    Noetherian {
        #[arg(long)]
        spec: PathBuf,
        /// Include the infinite tower when there is one.
        #[arg(long)]
        witness: bool,
    },
    /// Count or list hom skeletons.
    Skeletons {
        #[arg(long)]
        max_objects: usize,
        #[arg(long)]
        max_depth: usize,
        /// Only print the count.
        #[arg(long)]
        count: bool,
    },
    /// Exhaustive or sampled property sweeps
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Forward,
    Backward,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Forward => Direction::Forward,
            DirectionArg::Backward => Direction::Backward,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum SigmaCommand {
    /// Size of a hom-set of Σ.
    Hom {
        #[arg(long)]
        src: SigmaObject,
        #[arg(long)]
        tgt: SigmaObject,
        /// List the morphisms.
        #[arg(long)]
        list: bool,
    },
    /// Segal condition for a presheaf on a bounded fragment.
    SegalCheck {
        #[arg(long)]
        presheaf: PathBuf,
        #[arg(long, default_value = "2,2,2")]
        bound: Bound,
    },
    /// Completeness of a representable presheaf.
    CompleteCheck {
        #[arg(long)]
        obj: SigmaObject,
        #[arg(long)]
        bound: Option<Bound>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// The initial algebra has an invertible action and is initial among small algebras.
    Lambek {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long, default_value_t = 3)]
        probe: usize,
    },
    /// Propagation unit invertible exactly when the resolution is.
    Pfp {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_carrier: usize,
    },
    /// Section and lift criteria against the definition of locality.
    Llift {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_carrier: usize,
        /// Number of sampled homs; 0 checks all.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Noetherian exactly when the rank is small.
    NoethRank {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long, default_value_t = 2)]
        max_objects: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Pass,
    Fail,
    Inconclusive,
    NotStabilized,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Pass => 0,
            Status::Fail | Status::Inconclusive => 1,
            Status::NotStabilized => 3,
        }
    }

    fn verdict(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Every JSON document the tool writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: FormatTag,
    pub command: String,
    pub status: Status,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainShape {
    Colimit,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainBody {
    pub functor: String,
    pub shape: ChainShape,
    pub carrier: FinSet,
    /// Action `F X → X` or coaction `X → F X`.
    pub structure: FinMap,
    pub index: usize,
    pub horizon: usize,
    pub sizes: Vec<usize>,
    /// Unit, counit or insertion of generators, where there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leg: Option<FinMap>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<FinMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxRow {
    pub apex: usize,
    pub carrier: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeLaxBody {
    pub functor: String,
    pub carrier: FinSet,
    pub action: FinMap,
    pub unit: FinMap,
    pub index: usize,
    pub rows: Vec<LaxRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleeneBody {
    pub element: String,
    pub trace: Vec<String>,
    pub fixed_points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeFacts {
    pub name: String,
    pub input: String,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataflowBody {
    pub direction: Direction,
    pub worklist: bool,
    pub sweeps: usize,
    pub nodes: Vec<NodeFacts>,
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaHomBody {
    pub source: SigmaObject,
    pub target: SigmaObject,
    pub count: u64,
    /// Arrows ending and starting at each vertex, when the source ends in 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segal_terms: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalBody {
    pub bound: Bound,
    pub presheaf: PresheafSpec,
    pub functoriality_violations: usize,
    pub report: SegalReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessBody {
    pub object: SigmaObject,
    pub bound: Bound,
    pub report: CompletenessReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBody {
    pub rank: RankValue,
    pub inductively_contractible: bool,
    pub coinductively_contractible: bool,
    pub machine: RationalHigherCat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoetherianBody {
    pub verdict: NoetherianVerdict,
    pub machine: RationalHigherCat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonsBody {
    pub max_objects: usize,
    pub max_depth: usize,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trees: Vec<HomTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambekBody {
    pub functor: String,
    pub carrier: usize,
    pub index: usize,
    pub probe: usize,
    pub report: adamek::LambekReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfpBody {
    pub functor: String,
    pub max_carrier: usize,
    pub sweep: PfpSweep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LliftBody {
    pub functor: String,
    pub max_carrier: usize,
    pub corpus: usize,
    pub sweep: LocalitySweep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoethRankBody {
    pub checked: usize,
    pub disagreements: Vec<RationalHigherCat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<NoethRankReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthBody {
    pub stages: usize,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Chain(ChainBody),
    Growth(GrowthBody),
    FreeLax(FreeLaxBody),
    Locality { method: Method, verdict: LocalityVerdict<FinMap> },
    Kleene(KleeneBody),
    Dataflow(DataflowBody),
    SigmaHom(SigmaHomBody),
    Segal(SegalBody),
    Completeness(CompletenessBody),
    Rank(RankBody),
    Noetherian(NoetherianBody),
    Skeletons(SkeletonsBody),
    Lambek(LambekBody),
    Pfp(PfpBody),
    Llift(LliftBody),
    NoethRank(NoethRankBody),
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Unsupported(_) => 2,
            CliError::Core(e) => match e {
                Error::BudgetExceeded(_) | Error::NotStabilized { .. } => 3,
                Error::ResolutionNotInvertible(_) | Error::UnitNotInvertible(_) | Error::ComparisonNotIso(_) => 1,
                _ => 2,
            },
        }
    }
}

/// Exit code and the text written to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Outcome { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: format!("{rendered}{SCHEMA_HINT}\n") },
            };
        }
    };
    let cfg = RunConfig::from(&cli.run);
    match run(&cli.command, &cfg) {
        Ok(report) => match render(&report, &cfg) {
            Ok(stdout) => Outcome { code: report.status.exit_code(), stdout, stderr: String::new() },
            Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn load<D: DeserializeOwned, T>(path: &Path, schema: Schema, build: impl FnOnce(&D) -> crate::Result<T>) -> Result<T, CliError> {
    let doc: D = io::read_doc(path, schema)?;
    build(&doc).map_err(|e| match e {
        Error::BudgetExceeded(_) => CliError::Core(e),
        e => CliError::Input(InputError { path: path.display().to_string(), message: e.to_string(), schema }),
    })
}

fn load_functor(path: &Path) -> Result<EndofunctorSpec, CliError> {
    load(path, Schema::Functor, io::FunctorDoc::build)
}

fn report(command: &str, status: Status, body: Body) -> Report {
    Report { format: FormatTag, command: command.into(), status, body }
}

/// Turns a non-settling chain into a growth report; other errors pass through.
fn settle<T>(command: &str, r: crate::Result<T>, ok: impl FnOnce(T) -> Result<Report, CliError>) -> Result<Report, CliError> {
    match r {
        Ok(v) => ok(v),
        Err(Error::NotStabilized { stages, sizes }) => {
            Ok(report(command, Status::NotStabilized, Body::Growth(GrowthBody { stages, sizes })))
        }
        Err(e) => Err(e.into()),
    }
}

fn chain_body(
    functor: &str,
    shape: ChainShape,
    carrier: FinSet,
    structure: FinMap,
    chain: &crate::cat::Chain<FinSet, FinMap>,
    st: &crate::cat::Stabilized<FinSet, FinMap>,
    leg: Option<FinMap>,
    trace: bool,
) -> ChainBody {
    ChainBody {
        functor: functor.into(),
        shape,
        carrier,
        structure,
        index: st.index,
        horizon: st.horizon,
        sizes: adamek::stage_sizes(&FinSets, chain),
        leg,
        links: if trace { chain.links.clone() } else { Vec::new() },
    }
}

fn kleene_body(l: &FiniteLattice, t: &lattice::KleeneTrace, fixed: &[usize]) -> KleeneBody {
    KleeneBody {
        element: l.name(t.value).into(),
        trace: t.trace.iter().map(|&x| l.name(x).to_string()).collect(),
        fixed_points: fixed.iter().map(|&x| l.name(x).to_string()).collect(),
    }
}

fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    let budget = &cfg.budget;
    let cap = budget.hom_cap;
    match cmd {
        Command::InitialAlgebra { functor } => {
            let f = load_functor(functor)?;
            settle("initial-algebra", adamek::initial_algebra(&FinSets, &f, budget), |c| {
                let body = chain_body(&f.name, ChainShape::Colimit, c.algebra.carrier, c.algebra.action, &c.chain, &c.stabilized, None, cfg.trace);
                Ok(report("initial-algebra", Status::Ok, Body::Chain(body)))
            })
        }
        Command::TerminalCoalgebra { functor } => {
            let f = load_functor(functor)?;
            settle("terminal-coalgebra", adamek::terminal_coalgebra(&FinSets, &f, budget), |c| {
                let body =
                    chain_body(&f.name, ChainShape::Limit, c.coalgebra.carrier, c.coalgebra.coaction, &c.chain, &c.stabilized, None, cfg.trace);
                Ok(report("terminal-coalgebra", Status::Ok, Body::Chain(body)))
            })
        }
        Command::FreeAlgebra { functor, on } => {
            let f = load_functor(functor)?;
            let k = load(on, Schema::Set, |d: &io::SetDoc| Ok(d.set.build()))?;
            settle("free-algebra", adamek::free_algebra(&FinSets, &f, &k, budget), |c| {
                let body =
                    chain_body(&f.name, ChainShape::Colimit, c.algebra.carrier, c.algebra.action, &c.chain, &c.stabilized, c.unit, cfg.trace);
                Ok(report("free-algebra", Status::Ok, Body::Chain(body)))
            })
        }
        Command::FreeLax { lax } => {
            let (f, l) = load(lax, Schema::Lax, io::LaxDoc::build)?;
            settle("free-lax", adamek::adamek_lax(&FinSets, &f, &l, budget), |c| {
                let rows = c
                    .fixed
                    .chain
                    .stages
                    .iter()
                    .map(|s| LaxRow { apex: s.apex.len(), carrier: s.carrier.len() })
                    .collect();
                let body = FreeLaxBody {
                    functor: f.name.clone(),
                    carrier: c.algebra.carrier,
                    action: c.algebra.action,
                    unit: c.unit,
                    index: c.fixed.stabilized.index,
                    rows,
                };
                Ok(report("free-lax", Status::Ok, Body::FreeLax(body)))
            })
        }
        Command::Reflect { coalgebra } => {
            let (f, c) = load(coalgebra, Schema::Coalgebra, io::CoalgebraDoc::build)?;
            settle("reflect", fixpoint::reflect(&FinSets, &f, &c, budget), |r| {
                let body =
                    chain_body(&f.name, ChainShape::Colimit, r.fixed.carrier, r.fixed.iso, &r.chain, &r.stabilized, Some(r.unit), cfg.trace);
                Ok(report("reflect", Status::Ok, Body::Chain(body)))
            })
        }
        Command::Coreflect { algebra } => {
            let (f, a) = load(algebra, Schema::Algebra, io::AlgebraDoc::build)?;
            settle("coreflect", fixpoint::coreflect(&FinSets, &f, &a, budget), |r| {
                let body = chain_body(
                    &f.name,
                    ChainShape::Limit,
                    r.fixed.carrier,
                    r.fixed.inverse,
                    &r.chain,
                    &r.stabilized,
                    Some(r.counit),
                    cfg.trace,
                );
                Ok(report("coreflect", Status::Ok, Body::Chain(body)))
            })
        }
        Command::IsLocal { hom, method } => {
            let (f, p) = load(hom, Schema::Hom, io::HomDoc::build)?;
            let v = match method {
                Method::Definition => fixpoint::is_f_local(&FinSets, &f, &p, budget),
                Method::Section => fixpoint::local_via_section(&FinSets, &f, &p, budget),
                Method::Lift => fixpoint::local_via_lift(&FinSets, &f, &p, budget),
            };
            settle("is-local", v, |v| {
                let status = match v.verdict {
                    Verdict::Local => Status::Pass,
                    Verdict::NotLocal => Status::Fail,
                    Verdict::Inconclusive => Status::Inconclusive,
                };
                Ok(report("is-local", status, Body::Locality { method: *method, verdict: v }))
            })
        }
        Command::Lfp { lattice: lp, map } | Command::Gfp { lattice: lp, map } => {
            let least = matches!(cmd, Command::Lfp { .. });
            let l = Arc::new(load(lp, Schema::Lattice, io::LatticeDoc::build)?);
            let m = load(map, Schema::Map, |d: &io::MapDoc| d.map.build(&l))?;
            let t = if least { lattice::lfp(&m) } else { lattice::gfp(&m) };
            let body = kleene_body(&l, &t, &lattice::all_fixed_points(&m));
            Ok(report(if least { "lfp" } else { "gfp" }, Status::Ok, Body::Kleene(body)))
        }
        Command::Dataflow { cfg: path, direction, worklist } => {
            let g = load(path, Schema::Cfg, io::CfgDoc::build)?;
            let dir = Direction::from(*direction);
            let sol = if *worklist { lattice::dataflow_worklist(&g, dir) } else { lattice::dataflow_solve(&g, dir) }
                .map_err(|e| CliError::Input(InputError { path: path.display().to_string(), message: e.to_string(), schema: Schema::Cfg }))?;
            let name = |x: usize| g.lattice.name(x).to_string();
            let nodes = g
                .nodes
                .iter()
                .enumerate()
                .map(|(i, v)| NodeFacts { name: v.name.clone(), input: name(sol.input[i]), output: name(sol.output[i]) })
                .collect();
            let edges = g.edges.iter().map(|&(a, b)| (g.nodes[a].name.clone(), g.nodes[b].name.clone())).collect();
            let body = DataflowBody { direction: dir, worklist: *worklist, sweeps: sol.sweeps, nodes, edges };
            Ok(report("dataflow", Status::Ok, Body::Dataflow(body)))
        }
        Command::Sigma(s) => run_sigma(s, cfg),
        Command::Rank { spec } => {
            let s = load(spec, Schema::Skeleton, |d: &io::SkeletonDoc| Ok(d.skeleton.clone()))?;
            let m = s.machine();
            let body = RankBody {
                rank: s.rank(),
                inductively_contractible: m.contractible(Mode::Inductive),
                coinductively_contractible: m.contractible(Mode::Coinductive),
                machine: m,
            };
            Ok(report("rank", Status::Ok, Body::Rank(body)))
        }
        Command::Noetherian { spec, witness } => {
            let m = load(spec, Schema::Skeleton, |d: &io::SkeletonDoc| Ok(d.skeleton.machine()))?;
            let mut verdict = m.is_noetherian();
            if !witness {
                verdict.witness = None;
            }
            let status = Status::verdict(verdict.noetherian);
            Ok(report("noetherian", status, Body::Noetherian(NoetherianBody { verdict, machine: m })))
        }
        Command::Skeletons { max_objects, max_depth, count } => {
            let n = rank::skeleton_count(*max_objects, *max_depth);
            let n = u64::try_from(n).map_err(|_| Error::BudgetExceeded(format!("{n} skeletons")))?;
            let trees = if *count { Vec::new() } else { rank::enumerate_skeletons(*max_objects, *max_depth, cap)? };
            let body = SkeletonsBody { max_objects: *max_objects, max_depth: *max_depth, count: n, trees };
            Ok(report("skeletons", Status::Ok, Body::Skeletons(body)))
        }
        Command::Verify(v) => run_verify(v, cfg),
    }
}

fn run_sigma(cmd: &SigmaCommand, cfg: &RunConfig) -> Result<Report, CliError> {
    let cap = cfg.budget.hom_cap;
    match cmd {
        SigmaCommand::Hom { src, tgt, list } => {
            let count = sigma::hom_count(src, tgt);
            let count = u64::try_from(count).map_err(|_| Error::BudgetExceeded(format!("{count} morphisms")))?;
            let segal_terms = match src.entries().last() {
                Some(2) => {
                    let k = SigmaObject::new(src.entries()[..src.dim() - 1].to_vec())?;
                    Some(sigma::segal_terms(&k, tgt, cap)?)
                }
                _ => None,
            };
            let morphisms = if *list || cfg.trace {
                sigma::sigma_hom_enumerate(src, tgt, cap)?.iter().map(ToString::to_string).collect()
            } else {
                Vec::new()
            };
            let body = SigmaHomBody { source: src.clone(), target: tgt.clone(), count, segal_terms, morphisms };
            Ok(report("sigma-hom", Status::Ok, Body::SigmaHom(body)))
        }
        SigmaCommand::SegalCheck { presheaf, bound } => {
            let spec = load(presheaf, Schema::Presheaf, |d: &io::PresheafDoc| Ok(d.presheaf.clone()))?;
            let fragment = Arc::new(SigmaFragment::new(*bound, cap)?);
            let p = spec.build(fragment, cap).map_err(|e| {
                CliError::Input(InputError { path: presheaf.display().to_string(), message: e.to_string(), schema: Schema::Presheaf })
            })?;
            let violations = p.check_functoriality()?.len();
            let rep = sigma::segal_check(&p)?;
            let status = Status::verdict(violations == 0 && rep.passes());
            let body = SegalBody { bound: *bound, presheaf: spec, functoriality_violations: violations, report: rep };
            Ok(report("sigma-segal-check", status, Body::Segal(body)))
        }
        SigmaCommand::CompleteCheck { obj, bound } => {
            let bound = bound.unwrap_or_else(|| {
                let top = obj.entries().iter().copied().max().unwrap_or(0);
                Bound::new(obj.dim().max(2), top.max(2), 2)
            });
            if !bound.contains(obj) {
                return Err(CliError::Unsupported(format!("object {obj} lies outside the bound")));
            }
            let fragment = Arc::new(SigmaFragment::new(bound, cap)?);
            let rep = sigma::completeness_check_representable(fragment, obj)?;
            let status = Status::verdict(rep.passes());
            Ok(report("sigma-complete-check", status, Body::Completeness(CompletenessBody { object: obj.clone(), bound, report: rep })))
        }
    }
}

fn run_verify(cmd: &VerifyCommand, cfg: &RunConfig) -> Result<Report, CliError> {
    let budget = &cfg.budget;
    let cap = budget.hom_cap;
    match cmd {
        VerifyCommand::Lambek { functor, probe } => {
            let f = load_functor(functor)?;
            settle("verify-lambek", adamek::initial_algebra(&FinSets, &f, budget), |c| {
                let rep = adamek::lambek_verify(&f, &c.algebra, *probe, cap)?;
                let body = LambekBody {
                    functor: f.name.clone(),
                    carrier: c.algebra.carrier.len(),
                    index: c.stabilized.index,
                    probe: *probe,
                    report: rep,
                };
                Ok(report("verify-lambek", Status::verdict(body.report.passes()), Body::Lambek(body)))
            })
        }
        VerifyCommand::Pfp { functor, max_carrier } => {
            let f = load_functor(functor)?;
            let s = sweep::pfp_sweep(&f, *max_carrier, cap)?;
            let status = Status::verdict(s.passes());
            Ok(report("verify-pfp", status, Body::Pfp(PfpBody { functor: f.name.clone(), max_carrier: *max_carrier, sweep: s })))
        }
        VerifyCommand::Llift { functor, max_carrier, samples } => {
            let f = load_functor(functor)?;
            let corpus = sweep::coalgebra_hom_corpus(&f, *max_carrier, cap)?;
            let s = sweep::locality_sweep(&f, &corpus, *samples, cfg.seed, budget)?;
            let status = Status::verdict(s.passes());
            let body = LliftBody { functor: f.name.clone(), max_carrier: *max_carrier, corpus: corpus.len(), sweep: s };
            Ok(report("verify-llift", status, Body::Llift(body)))
        }
        VerifyCommand::NoethRank { spec: Some(spec), .. } => {
            let m = load(spec, Schema::Skeleton, |d: &io::SkeletonDoc| Ok(d.skeleton.machine()))?;
            let r = m.noeth_equiv_rank();
            let disagreements = if r.agrees { Vec::new() } else { vec![m] };
            let status = Status::verdict(r.agrees);
            Ok(report("verify-noeth-rank", status, Body::NoethRank(NoethRankBody { checked: 1, disagreements, report: Some(r) })))
        }
        VerifyCommand::NoethRank { spec: None, max_states, max_objects } => {
            let mut checked = 0;
            let mut disagreements = Vec::new();
            rank::for_each_machine(*max_states, *max_objects, |m| {
                checked += 1;
                let r = m.noeth_equiv_rank();
                let witness_ok = r.witness.as_ref().is_none_or(|w| m.check_witness(w, 2 * m.states().len() + 2));
                if !r.agrees || !witness_ok {
                    disagreements.push(m.clone());
                }
            });
            let status = Status::verdict(disagreements.is_empty());
            Ok(report("verify-noeth-rank", status, Body::NoethRank(NoethRankBody { checked, disagreements, report: None })))
        }
    }
}

pub fn render(r: &Report, cfg: &RunConfig) -> Result<String, String> {
    match cfg.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Text => Ok(text(r, cfg.trace)),
        OutputFormat::Dot => dot(r).ok_or_else(|| format!("--format dot is not available for {}", r.command)),
    }
}

fn text(r: &Report, trace: bool) -> String {
    let mut out = String::new();
    let w = &mut out;
    match &r.body {
        Body::Chain(c) => {
            let what = match c.shape {
                ChainShape::Colimit => "colimit",
                ChainShape::Limit => "limit",
            };
            let _ = writeln!(w, "{}: {} settled at stage {} (horizon {})", r.command, what, c.index, c.horizon);
            let _ = writeln!(w, "carrier ({}): {}", c.carrier.len(), c.carrier);
            let _ = writeln!(w, "structure: {}", c.structure);
            if let Some(leg) = &c.leg {
                let _ = writeln!(w, "leg: {leg}");
            }
            if trace {
                for (k, n) in c.sizes.iter().enumerate() {
                    let _ = writeln!(w, "stage {k}: size {n}");
                }
                for (k, m) in c.links.iter().enumerate() {
                    let _ = writeln!(w, "link {k}: {m}");
                }
            }
        }
        Body::Growth(g) => {
            let _ = writeln!(w, "{}: not stabilized within {} stages", r.command, g.stages);
            let _ = writeln!(w, "sizes: {:?}", g.sizes);
        }
        Body::FreeLax(f) => {
            let _ = writeln!(w, "free-lax: settled at stage {}", f.index);
            let _ = writeln!(w, "carrier ({}): {}", f.carrier.len(), f.carrier);
            let _ = writeln!(w, "action: {}", f.action);
            let _ = writeln!(w, "unit: {}", f.unit);
            if trace {
                for (k, row) in f.rows.iter().enumerate() {
                    let _ = writeln!(w, "stage {k}: apex {} carrier {}", row.apex, row.carrier);
                }
            }
        }
        Body::Locality { method, verdict } => {
            let _ = writeln!(w, "{:?} ({method:?})", verdict.verdict);
            if let Some(m) = &verdict.reflected {
                let _ = writeln!(w, "reflected: {m}");
            }
            if let Some(s) = &verdict.section {
                let _ = writeln!(w, "section: {s}");
            }
            if let Some(x) = &verdict.witness {
                let _ = writeln!(w, "witness: {x}");
            }
        }
        Body::Kleene(k) => {
            let _ = writeln!(w, "{}", k.element);
            if trace {
                let _ = writeln!(w, "trace: {}", k.trace.join(" → "));
                let _ = writeln!(w, "fixed points: {}", k.fixed_points.join(", "));
            }
        }
        Body::Dataflow(d) => {
            let width = d.nodes.iter().map(|n| n.name.chars().count()).max().unwrap_or(4).max(4);
            let _ = writeln!(w, "{:<width$}  in  →  out", "node");
            for n in &d.nodes {
                let _ = writeln!(w, "{:<width$}  {}  →  {}", n.name, n.input, n.output);
            }
            if trace {
                let _ = writeln!(w, "sweeps: {}", d.sweeps);
            }
        }
        Body::SigmaHom(h) => {
            let _ = writeln!(w, "|Hom({}, {})| = {}", h.source, h.target, h.count);
            if let Some(t) = &h.segal_terms {
                let terms: Vec<String> = t.iter().map(|(a, b)| format!("{a}·{b}")).collect();
                let _ = writeln!(w, "segal: {} = {}", terms.join(" + "), t.iter().map(|(a, b)| a * b).sum::<usize>());
            }
            for m in &h.morphisms {
                let _ = writeln!(w, "  {m}");
            }
        }
        Body::Segal(s) => {
            let _ = writeln!(w, "{} cases, {} failing", s.report.cases.len(), s.report.failures().count());
            if s.functoriality_violations > 0 {
                let _ = writeln!(w, "functoriality violations: {}", s.functoriality_violations);
            }
            for c in &s.report.cases {
                if trace || c.witness.is_some() {
                    let _ = writeln!(w, "  [{}; {}]: {} cells, fiber product {}", c.base, c.level, c.cells, c.fiber_product);
                }
                if let Some(x) = &c.witness {
                    let _ = writeln!(w, "    {x}");
                }
            }
        }
        Body::Completeness(c) => {
            let _ = writeln!(w, "{} bases checked, {} failures", c.report.checked.len(), c.report.failures.len());
            for f in &c.report.failures {
                let _ = writeln!(w, "  over {}: {} ⇄ {} via {} and {}", f.base, f.from, f.to, f.forward, f.backward);
            }
        }
        Body::Rank(b) => {
            let _ = writeln!(w, "{}", b.rank);
            if trace {
                let _ = writeln!(w, "contractible: inductive {}, coinductive {}", b.inductively_contractible, b.coinductively_contractible);
            }
        }
        Body::Noetherian(n) => {
            let _ = writeln!(w, "{}", if n.verdict.noetherian { "noetherian" } else { "not noetherian" });
            if let Some(t) = &n.verdict.witness {
                if !t.prefix.is_empty() {
                    let _ = writeln!(w, "prefix: {}", steps(&t.prefix));
                }
                let _ = writeln!(w, "cycle: {}", steps(&t.cycle));
            }
        }
        Body::Skeletons(s) => {
            let _ = writeln!(w, "{}", s.count);
            for t in &s.trees {
                let _ = writeln!(w, "{}", serde_json::to_string(t).unwrap_or_default());
            }
        }
        Body::Lambek(l) => {
            let _ = writeln!(w, "{}", pass_word(r.status));
            let _ = writeln!(
                w,
                "initial carrier {} at stage {}; {} algebras probed; action invertible: {}",
                l.carrier, l.index, l.report.probed, l.report.action_invertible
            );
            for (size, n) in &l.report.uniqueness_failures {
                let _ = writeln!(w, "  carrier {size}: {n} homomorphisms");
            }
        }
        Body::Pfp(p) => {
            let _ = writeln!(w, "{}", pass_word(r.status));
            let _ = writeln!(w, "{} lax algebras, {} with invertible resolution", p.sweep.checked, p.sweep.resolution_isos);
            for m in &p.sweep.mismatches {
                let _ = writeln!(w, "  {m}");
            }
        }
        Body::Llift(l) => {
            let s = &l.sweep;
            let _ = writeln!(w, "{}", pass_word(r.status));
            let _ = writeln!(
                w,
                "{} of {} homs checked (seed {}), {} skipped, {} local, {} lift-inconclusive",
                s.checked, l.corpus, s.seed, s.skipped, s.local, s.lift_inconclusive
            );
            let _ = writeln!(w, "section disagreements: {}", s.section_disagreements.len());
            let _ = writeln!(w, "lift contradictions: {}", s.lift_contradictions.len());
        }
        Body::NoethRank(n) => {
            let _ = writeln!(w, "{}", pass_word(r.status));
            let _ = writeln!(w, "{} machines, {} disagreements", n.checked, n.disagreements.len());
            if let Some(rep) = &n.report {
                let _ = writeln!(w, "noetherian {}, rank {}", rep.noetherian, rep.rank);
            }
        }
    }
    out
}

fn pass_word(s: Status) -> &'static str {
    match s {
        Status::Pass | Status::Ok => "pass",
        _ => "fail",
    }
}

fn steps(s: &[rank::TowerStep]) -> String {
    s.iter().map(|t| format!("q{}({},{})", t.state, t.pair.0, t.pair.1)).collect::<Vec<_>>().join(" ")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

struct Dot(String);

impl Dot {
    fn new() -> Self {
        Dot("digraph fixcat {\n".into())
    }
    fn node(&mut self, id: &str, label: &str) {
        let _ = writeln!(self.0, "  {id} [label=\"{}\"];", dot_escape(label));
    }
    fn edge(&mut self, a: &str, b: &str) {
        let _ = writeln!(self.0, "  {a} -> {b};");
    }
    fn finish(mut self) -> String {
        self.0.push_str("}\n");
        self.0
    }
}

fn size_chain(d: &mut Dot, sizes: &[usize], shape: ChainShape) {
    for (k, n) in sizes.iter().enumerate() {
        d.node(&format!("s{k}"), &format!("stage {k}: {n}"));
    }
    for k in 1..sizes.len() {
        match shape {
            ChainShape::Colimit => d.edge(&format!("s{}", k - 1), &format!("s{k}")),
            ChainShape::Limit => d.edge(&format!("s{k}"), &format!("s{}", k - 1)),
        }
    }
}

fn dot(r: &Report) -> Option<String> {
    let mut d = Dot::new();
    match &r.body {
        Body::Chain(c) => {
            size_chain(&mut d, &c.sizes, c.shape);
            d.node("fix", &format!("fixed point: {}", c.carrier.len()));
            match c.shape {
                ChainShape::Colimit => d.edge(&format!("s{}", c.index), "fix"),
                ChainShape::Limit => d.edge("fix", &format!("s{}", c.index)),
            }
        }
        Body::Growth(g) => size_chain(&mut d, &g.sizes, ChainShape::Colimit),
        Body::FreeLax(f) => {
            for (k, row) in f.rows.iter().enumerate() {
                d.node(&format!("e{k}"), &format!("E{k}: {}", row.apex));
                d.node(&format!("b{k}"), &format!("B{k}: {}", row.carrier));
            }
            for k in 0..f.rows.len() {
                d.edge(&format!("e{k}"), &format!("b{k}"));
                if k + 1 < f.rows.len() {
                    d.edge(&format!("e{k}"), &format!("e{}", k + 1));
                    d.edge(&format!("b{k}"), &format!("b{}", k + 1));
                }
            }
        }
        Body::Kleene(k) => {
            for (i, x) in k.trace.iter().enumerate() {
                d.node(&format!("x{i}"), x);
            }
            for i in 1..k.trace.len() {
                d.edge(&format!("x{}", i - 1), &format!("x{i}"));
            }
        }
        Body::Dataflow(df) => {
            for (i, n) in df.nodes.iter().enumerate() {
                d.node(&format!("n{i}"), &format!("{}: {} → {}", n.name, n.input, n.output));
            }
            let idx = |name: &str| df.nodes.iter().position(|n| n.name == name).unwrap_or(0);
            for (a, b) in &df.edges {
                d.edge(&format!("n{}", idx(a)), &format!("n{}", idx(b)));
            }
        }
        Body::Rank(b) => machine_dot(&mut d, &b.machine),
        Body::Noetherian(n) => machine_dot(&mut d, &n.machine),
        _ => return None,
    }
    Some(d.finish())
}

fn machine_dot(d: &mut Dot, m: &RationalHigherCat) {
    for (i, s) in m.states().iter().enumerate() {
        let label = if s.point { format!("q{i}: point") } else { format!("q{i}: {} objects", s.objects) };
        d.node(&format!("q{i}"), &label);
    }
    for (i, s) in m.states().iter().enumerate() {
        let mut targets: Vec<usize> = s.homs.iter().flatten().copied().collect();
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            d.edge(&format!("q{i}"), &format!("q{t}"));
        }
    }
}
