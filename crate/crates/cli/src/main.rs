//! `subcycle`: command-line front end.
//!
//! Every command prints `key value` lines. Exit status is 0 on success, 1 when
//! there is no cycle or cut or the instance is a no-instance, 2 on bad input.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use subcycle::adversary::{run_adversary, SolverClaim, Verdict};
use subcycle::corpus::{self, OracleKind, WfhParams};
use subcycle::cycle::{
    edge_cycle, exact_integer, ptas, two_approx, CycleResult, Epsilon, Mode, SolveStats,
};
use subcycle::graph::{enumerate_cycles, Multigraph, DEFAULT_CYCLE_CAP};
use subcycle::io::{
    parse_function, parse_graph, parse_wfh, write_function, write_graph, write_wfh, BuiltOracle,
    FunctionSpec, GraphFile,
};
use subcycle::oracle::EXHAUSTIVE_LIMIT;
use subcycle::oracle::{verify_submodular_monotone, CostValue, SetFunction, ViolationKind};
use subcycle::planar::{disconnects, min_cut};
use subcycle::wfh::{
    brute_force, fpt_solve, hedge_cycle_to_wfh, randomized_solve, wfh_to_hedge_cycle, HedgeAnswer,
    WfhInstance, WfhSolution,
};
use subcycle::{element_set, Error};

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "subcycle",
    version,
    about = "Cycles and cuts under submodular costs"
)]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, env = "SUBCYCLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads where a command can use them.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Also print wall-clock time (makes the output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Inputs {
    /// Graph file.
    graph: PathBuf,
    /// Function spec file.
    function: PathBuf,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Accuracy {
    /// Solve exactly (integer oracles only).
    #[arg(long)]
    exact: bool,
    /// Approximation parameter, a decimal or a ratio like `1/3`.
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// 2-approximate minimum vertex-cost cycle.
    ApproxCycle(Inputs),
    /// (1 + ε)-approximate minimum vertex-cost cycle.
    PtasCycle {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        epsilon: String,
    },
    /// Exact minimum vertex-cost cycle for integer oracles.
    ExactCycle(Inputs),
    /// Minimum edge-cost cycle in a multigraph.
    EdgeCycle {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        accuracy: Accuracy,
    },
    /// Minimum edge-cost cut of an embedded planar multigraph.
    PlanarCut {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        accuracy: Accuracy,
    },
    /// Query-complexity experiments on the lower-bound instance.
    #[command(subcommand)]
    Adversary(AdversaryCommand),
    /// Wide Family Hitting.
    #[command(subcommand)]
    Wfh(WfhCommand),
    /// Exhaustive monotonicity and submodularity check.
    VerifySubmodular {
        #[command(flatten)]
        inputs: Inputs,
        /// Whether the function is over the graph's vertices or its edges.
        #[arg(long, value_enum, default_value_t = Elements::Vertices)]
        elements: Elements,
    },
    /// List every simple cycle of a graph.
    Enumerate {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
        cap: usize,
    },
    /// Print a seeded instance file.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Elements {
    Vertices,
    Edges,
}

#[derive(Subcommand, Debug)]
enum AdversaryCommand {
    /// Run a solver against the recording adversary on G(k, p).
    Run {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: usize,
        /// `exact`, `ptas:<epsilon>` or `lazy` (one query, then stop).
        #[arg(long, default_value = "exact")]
        solver: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Algo {
    Fpt,
    Random,
    Brute,
}

#[derive(Subcommand, Debug)]
enum WfhCommand {
    /// Decide an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Fpt)]
        algo: Algo,
        /// Trials for `--algo random`; defaults to the success-amplifying count.
        #[arg(long)]
        reps: Option<u64>,
    },
    /// Write the equivalent hedge minimum cycle instance.
    Reduce {
        instance: PathBuf,
        #[arg(long)]
        graph_out: PathBuf,
        #[arg(long)]
        function_out: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Modular,
    Coverage,
    GraphicRank,
    PartitionMatroid,
}

impl From<Kind> for OracleKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Modular => OracleKind::Modular,
            Kind::Coverage => OracleKind::Coverage,
            Kind::GraphicRank => OracleKind::GraphicRank,
            Kind::PartitionMatroid => OracleKind::PartitionMatroid,
        }
    }
}

#[derive(Subcommand, Debug)]
enum CorpusCommand {
    /// Random simple graph with a cycle.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
    },
    /// Random integer function spec.
    Function {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        ground: usize,
    },
    /// Random k-wide hitting instance.
    Wfh {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        families: usize,
        #[arg(long)]
        max_family: usize,
        #[arg(long)]
        planted: bool,
    },
    /// Random connected embedded planar multigraph.
    Planar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        chords: usize,
    },
    /// The lower-bound graph G(k, p); `--function-out` gets its cost function.
    LowerBound {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: usize,
        /// Designated Hamiltonian cycle, as edge ids.
        #[arg(long, num_args = 1..)]
        cycle: Option<Vec<usize>>,
        #[arg(long)]
        function_out: Option<PathBuf>,
    },
}

/// Why a command did not finish with a yes.
enum Failure {
    /// Well-formed input with a negative answer; the report is still printed.
    Negative(Report),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// What a successful command prints.
enum Output {
    Report(Report),
    /// A generated instance file.
    Text(String),
}

type Outcome = std::result::Result<Output, Failure>;

struct Context {
    seed: u64,
    jobs: usize,
    timing: bool,
    report: Report,
}

impl Context {
    fn read(&mut self, path: &Path) -> std::result::Result<String, Failure> {
        let bytes =
            std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.report.put(
            "input-digest",
            format!("{} {}", path.display(), hex::encode(Sha256::digest(&bytes))),
        );
        String::from_utf8(bytes)
            .map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))
    }

    fn graph(&mut self, path: &Path) -> std::result::Result<GraphFile, Failure> {
        let text = self.read(path)?;
        parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn function(&mut self, path: &Path) -> std::result::Result<FunctionSpec, Failure> {
        let text = self.read(path)?;
        parse_function(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn wfh(&mut self, path: &Path) -> std::result::Result<WfhInstance, Failure> {
        let text = self.read(path)?;
        parse_wfh(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn load(
        &mut self,
        inputs: &Inputs,
        elements: Elements,
    ) -> std::result::Result<(GraphFile, BuiltOracle), Failure> {
        let file = self.graph(&inputs.graph)?;
        let spec = self.function(&inputs.function)?;
        let ground = match elements {
            Elements::Vertices => file.graph.vertex_count(),
            Elements::Edges => file.graph.edge_count(),
        };
        let oracle = spec.build(ground, &file.graph)?;
        self.report.put("oracle", spec.kind());
        Ok((file, oracle))
    }

    fn stats(&mut self, stats: &SolveStats) {
        self.report.put("queries", stats.queries);
        self.report.put("recursion-nodes", stats.recursion_nodes);
        self.report.put("memo-hits", stats.memo_hits);
        if self.timing {
            self.report.put(
                "wall-ms",
                format!("{:.3}", stats.elapsed.as_secs_f64() * 1e3),
            );
        }
    }

    fn cycle<V: CostValue>(&mut self, g: &Multigraph, res: &CycleResult<V>) {
        self.report.put("cost", res.cost);
        self.report
            .list("cycle", res.cycle.vertices().iter().copied());
        self.report
            .list("cycle-edges", res.cycle.edges().iter().copied());
        self.report
            .flag("verified", g.check_cycle(&res.cycle).is_ok());
        self.stats(&res.stats);
    }

    fn finish(self) -> Outcome {
        Ok(Output::Report(self.report))
    }

    fn negative(self) -> Outcome {
        Err(Failure::Negative(self.report))
    }
}

fn epsilon(text: &str) -> std::result::Result<Epsilon, Failure> {
    Ok(text.parse::<Epsilon>()?)
}

fn mode(ctx: &mut Context, accuracy: &Accuracy) -> std::result::Result<Mode, Failure> {
    match (&accuracy.epsilon, accuracy.exact) {
        (Some(e), false) => {
            let eps = epsilon(e)?;
            ctx.report.put("epsilon", eps);
            ctx.report.put("depth", eps.depth());
            Ok(Mode::Approximate(eps))
        }
        _ => {
            ctx.report.put("mode", "exact");
            Ok(Mode::Exact)
        }
    }
}

/// Runs `solve` on whichever value type the oracle has.
macro_rules! with_oracle {
    ($oracle:expr, |$f:ident| $body:expr) => {
        match $oracle {
            BuiltOracle::Integer(boxed) => {
                let $f = boxed.as_ref();
                $body
            }
            BuiltOracle::Real(boxed) => {
                let $f = boxed.as_ref();
                $body
            }
        }
    };
}

fn no_cycle(ctx: Context, e: Error) -> Outcome {
    match e {
        Error::NoCycle | Error::NoCycleReachable(_) => {
            let mut ctx = ctx;
            ctx.report.put("result", "no-cycle");
            ctx.negative()
        }
        e => Err(e.into()),
    }
}

#[derive(Clone, Copy)]
enum VertexSolver {
    Approx,
    Ptas(Epsilon),
    Exact,
}

fn vertex_cycle(mut ctx: Context, inputs: &Inputs, which: VertexSolver) -> Outcome {
    let (file, oracle) = ctx.load(inputs, Elements::Vertices)?;
    let g = &file.graph;
    if let VertexSolver::Ptas(eps) = which {
        ctx.report.put("epsilon", eps);
        ctx.report.put("depth", eps.depth());
    }
    let result = with_oracle!(oracle, |f| {
        let res = match which {
            VertexSolver::Approx => two_approx(g, &f).map(|(r, _)| r),
            VertexSolver::Ptas(eps) => ptas(g, &f, eps),
            VertexSolver::Exact => exact_integer(g, &f),
        };
        res.map(|r| ctx.cycle(g, &r))
    });
    match result {
        Ok(()) => ctx.finish(),
        Err(e) => no_cycle(ctx, e),
    }
}

fn edge_cycle_command(mut ctx: Context, inputs: &Inputs, accuracy: &Accuracy) -> Outcome {
    let mode = mode(&mut ctx, accuracy)?;
    let (file, oracle) = ctx.load(inputs, Elements::Edges)?;
    let g = &file.graph;
    let result = with_oracle!(oracle, |f| edge_cycle(g, &f, mode)
        .map(|r| ctx.cycle(g, &r)));
    match result {
        Ok(()) => ctx.finish(),
        Err(e) => no_cycle(ctx, e),
    }
}

fn planar_cut(mut ctx: Context, inputs: &Inputs, accuracy: &Accuracy) -> Outcome {
    let mode = mode(&mut ctx, accuracy)?;
    let (file, oracle) = ctx.load(inputs, Elements::Edges)?;
    let embedded = file.embedded()?;
    let result = with_oracle!(oracle, |f| min_cut(&embedded, &f, mode).map(|cut| {
        ctx.report.put("cost", cut.cost);
        ctx.report.list("cut-edges", cut.edges.iter().copied());
        ctx.report.flag("bridge", cut.bridge);
        ctx.report
            .flag("verified", disconnects(&file.graph, &cut.edges));
        ctx.stats(&cut.stats);
    }));
    match result {
        Ok(()) => ctx.finish(),
        Err(Error::NoCut) => {
            ctx.report.put("result", "no-cut");
            ctx.negative()
        }
        Err(e) => Err(e.into()),
    }
}

fn adversary(mut ctx: Context, k: usize, p: usize, solver: &str) -> Outcome {
    enum Solver {
        Exact,
        Ptas(Epsilon),
        Lazy,
    }
    let which = match solver {
        "exact" => Solver::Exact,
        "lazy" => Solver::Lazy,
        other => match other.strip_prefix("ptas:") {
            Some(e) => Solver::Ptas(epsilon(e)?),
            None => {
                return Err(Failure::Input(format!(
                    "unknown solver '{other}' (expected exact, ptas:<epsilon> or lazy)"
                )))
            }
        },
    };
    ctx.report.put("solver", solver);
    let t = run_adversary(
        |g, oracle| match which {
            Solver::Lazy => {
                let all = element_set(g.edge_count(), 0..g.edge_count());
                Ok(SolverClaim {
                    cost: Some(oracle.evaluate(&all)),
                    cycle_edges: None,
                })
            }
            Solver::Exact | Solver::Ptas(_) => {
                let mode = match which {
                    Solver::Ptas(eps) => Mode::Approximate(eps),
                    _ => Mode::Exact,
                };
                let res = edge_cycle(g, oracle, mode)?;
                Ok(SolverClaim {
                    cost: Some(res.cost),
                    cycle_edges: Some(res.cycle.edges().to_vec()),
                })
            }
        },
        k,
        p,
    )?;
    let r = &mut ctx.report;
    r.put("k", t.k);
    r.put("p", t.p);
    r.put("pk", t.hamiltonian_count);
    r.put("queries", t.query_count());
    r.put("cycles-queried", t.cycles_queried.len());
    match t.claim.cost {
        Some(c) => r.put("claimed-cost", c),
        None => r.put("claimed-cost", "none"),
    }
    if let Some(edges) = &t.claim.cycle_edges {
        r.list("claimed-cycle-edges", edges.iter().copied());
    }
    r.flag("claim-matches-f", t.claim_matches_f);
    if let Some(robust) = t.output_cycle_robust {
        r.flag("output-cycle-robust", robust);
    }
    match &t.verdict {
        Verdict::AllCyclesQueried => r.put("verdict", "all-cycles-queried"),
        Verdict::Fooled {
            certificate,
            fooled_optimum,
        } => {
            r.put("verdict", "fooled");
            r.list("certificate", certificate.iter().copied());
            r.put("fooled-optimum", fooled_optimum);
            r.flag("certificate-consistent", t.certificate_consistent());
        }
    }
    ctx.finish()
}

fn solution(r: &mut Report, inst: &WfhInstance, sol: &Option<WfhSolution>) {
    r.flag("answer", sol.is_some());
    if let Some(s) = sol {
        r.list("choices", s.choices.iter().copied());
        r.list("union", s.union.iter().copied());
        r.flag("verified", inst.is_solution(s));
    }
}

fn wfh_solve(mut ctx: Context, path: &Path, algo: Algo, reps: Option<u64>) -> Outcome {
    let inst = ctx.wfh(path)?;
    inst.validate_wide()?;
    let r = &mut ctx.report;
    r.put("k", inst.k());
    r.put("families", inst.family_count());
    r.put("max-family", inst.max_family_size());
    let sol = match algo {
        Algo::Brute => {
            r.put("algo", "brute");
            brute_force(&inst)?
        }
        Algo::Fpt => {
            r.put("algo", "fpt");
            let res = fpt_solve(&inst)?;
            r.put("candidates", res.candidates);
            r.put("nodes", res.nodes);
            res.solution
        }
        Algo::Random => {
            r.put("algo", "random");
            let res = randomized_solve(&inst, reps, ctx.seed, ctx.jobs)?;
            r.put("repetitions", res.repetitions);
            match res.success_trial {
                Some(t) => r.put("success-trial", t),
                None => r.put("success-trial", "none"),
            }
            res.solution
        }
    };
    solution(&mut ctx.report, &inst, &sol);
    if sol.is_some() {
        ctx.finish()
    } else {
        ctx.negative()
    }
}

fn wfh_reduce(mut ctx: Context, path: &Path, graph_out: &Path, function_out: &Path) -> Outcome {
    let inst = ctx.wfh(path)?;
    inst.validate_wide()?;
    let h = wfh_to_hedge_cycle(&inst)?;
    let graph = write_graph(&GraphFile {
        graph: h.graph.clone(),
        rotation: None,
    });
    let function = write_function(&FunctionSpec::Colors(
        h.colors.iter().copied().enumerate().collect(),
    ));
    for (out, text) in [(graph_out, graph), (function_out, function)] {
        std::fs::write(out, text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    }
    let answer = hedge_cycle_to_wfh(&h)?;
    let r = &mut ctx.report;
    r.put("vertices", h.graph.vertex_count());
    r.put("edges", h.graph.edge_count());
    r.put("colors", h.color_count());
    r.put("budget", h.budget);
    r.list("hubs", h.hubs.iter().copied());
    r.flag("round-trip-answer", answer.is_yes());
    if let HedgeAnswer::TwoPaths { bundle, .. } = answer {
        r.put("two-path-bundle", bundle);
    }
    ctx.finish()
}

fn verify(mut ctx: Context, inputs: &Inputs, elements: Elements) -> Outcome {
    let (_, oracle) = ctx.load(inputs, elements)?;
    let ground = oracle.ground_size();
    if ground > EXHAUSTIVE_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: ground,
            limit: EXHAUSTIVE_LIMIT,
        }
        .into());
    }
    let report = with_oracle!(oracle, |f| verify_submodular_monotone(&f))?;
    let r = &mut ctx.report;
    r.put("ground-size", report.ground_size);
    r.put("checks", report.checks);
    r.flag("passed", report.passed());
    if let Some(v) = &report.violation {
        r.put(
            "violation",
            match v.kind {
                ViolationKind::Monotonicity => "monotonicity",
                ViolationKind::Submodularity => "submodularity",
            },
        );
        r.list("violation-x", v.x.iter().copied());
        r.list("violation-y", v.y.iter().copied());
        r.put("violation-element", v.element);
        return ctx.negative();
    }
    ctx.finish()
}

fn enumerate(mut ctx: Context, path: &Path, cap: usize) -> Outcome {
    let file = ctx.graph(path)?;
    let cycles = enumerate_cycles(&file.graph, cap)?;
    ctx.report.put("cycles", cycles.len());
    for c in &cycles {
        ctx.report.list("cycle", c.vertices().iter().copied());
    }
    if cycles.is_empty() {
        ctx.negative()
    } else {
        ctx.finish()
    }
}

fn corpus_command(ctx: Context, command: &CorpusCommand) -> Outcome {
    let mut rng = corpus::rng(ctx.seed);
    let text = match command {
        CorpusCommand::Graph { n, density } => {
            if *n < 3 || !(0.0..=1.0).contains(density) || *density == 0.0 {
                return Err(Failure::Input("need n >= 3 and a density in (0, 1]".into()));
            }
            write_graph(&GraphFile {
                graph: corpus::random_graph(&mut rng, *n, *density),
                rotation: None,
            })
        }
        CorpusCommand::Function { kind, ground } => {
            write_function(&corpus::random_function(&mut rng, (*kind).into(), *ground))
        }
        CorpusCommand::Wfh {
            k,
            universe,
            families,
            max_family,
            planted,
        } => {
            if *universe == 0 {
                return Err(Failure::Input("universe must be nonempty".into()));
            }
            write_wfh(&corpus::random_wfh(
                &mut rng,
                WfhParams {
                    k: *k,
                    universe: *universe,
                    families: *families,
                    max_family: *max_family,
                    planted: *planted,
                },
            ))
        }
        CorpusCommand::Planar { n, chords } => {
            if *n == 0 {
                return Err(Failure::Input("need at least one vertex".into()));
            }
            let e = corpus::random_planar(&mut rng, *n, *chords);
            write_graph(&GraphFile {
                graph: e.graph().clone(),
                rotation: Some(e.edge_rotation()),
            })
        }
        CorpusCommand::LowerBound {
            k,
            p,
            cycle,
            function_out,
        } => {
            subcycle::adversary::LowerBoundGraph::new(*k, *p)?;
            let (file, spec) = corpus::lower_bound_instance(*k, *p, cycle.clone());
            spec.build(file.graph.edge_count(), &file.graph)?;
            if let Some(out) = function_out {
                std::fs::write(out, write_function(&spec))
                    .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            }
            write_graph(&file)
        }
    };
    Ok(Output::Text(text))
}

fn run(mut ctx: Context, command: &Command) -> Outcome {
    match command {
        Command::ApproxCycle(inputs) => vertex_cycle(ctx, inputs, VertexSolver::Approx),
        Command::PtasCycle { inputs, epsilon: e } => {
            let eps = epsilon(e)?;
            vertex_cycle(ctx, inputs, VertexSolver::Ptas(eps))
        }
        Command::ExactCycle(inputs) => vertex_cycle(ctx, inputs, VertexSolver::Exact),
        Command::EdgeCycle { inputs, accuracy } => edge_cycle_command(ctx, inputs, accuracy),
        Command::PlanarCut { inputs, accuracy } => planar_cut(ctx, inputs, accuracy),
        Command::Adversary(AdversaryCommand::Run { k, p, solver }) => {
            adversary(ctx, *k, *p, solver)
        }
        Command::Wfh(WfhCommand::Solve {
            instance,
            algo,
            reps,
        }) => wfh_solve(ctx, instance, *algo, *reps),
        Command::Wfh(WfhCommand::Reduce {
            instance,
            graph_out,
            function_out,
        }) => wfh_reduce(ctx, instance, graph_out, function_out),
        Command::VerifySubmodular { inputs, elements } => verify(ctx, inputs, *elements),
        Command::Enumerate { graph, cap } => enumerate(ctx, graph, *cap),
        Command::Corpus(c) => {
            ctx.report = Report::new();
            corpus_command(ctx, c)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut report = Report::new();
    report.put("command", argv.join(" "));
    report.put("seed", cli.seed);
    let ctx = Context {
        seed: cli.seed,
        jobs: cli.jobs,
        timing: cli.timing,
        report,
    };
    match run(ctx, &cli.command) {
        Ok(Output::Report(r)) => {
            print!("{r}");
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(r)) => {
            print!("{r}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
