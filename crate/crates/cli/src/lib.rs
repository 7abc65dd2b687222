//! The `leavitt` command-line tool.

pub mod report;

use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use leavitt::action::verify_axioms;
use leavitt::beta::{iso_agreement_check, verify_orthogonality, verify_semi_saturated, BetaAction};
use leavitt::graded::{self, Certificate, Decision};
use leavitt::lpa::format_degree;
use leavitt::skew::check_associativity;
use leavitt::{corpus, Alpha, Field, FunctionAlgebra, GradeMorphism, Graph, GraphDef, Lpa, SkewElement, SkewRing};

use report::{digest, Record, Report, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "leavitt", version, about = "Leavitt path algebras as partial skew group rings")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scalar field: `q` or `gf:p` for a prime p
    #[arg(long, global = true, default_value = "q")]
    field: String,

    /// Word-length bound B
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,

    /// Cylinder depth d
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    depth: Option<u64>,

    /// Number of random trials
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,

    /// Seed for all randomized checks
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a graph file and list any violations
    Validate { graph: String },
    /// List finite paths up to the given depth
    Paths { graph: String },
    /// Evaluate an expression over L_K(E), e.g. "a* b"
    Eval { expr: String, graph: String },
    /// Multiply two skew-ring elements, e.g. "(1[a]) d[a]"
    Mul { x: String, y: String, graph: String },
    /// Split an expression into homogeneous components
    Grade {
        expr: String,
        graph: String,
        /// Degrees of the edges, e.g. "a=1,b=0" or "a=1:0,b=0:1"
        #[arg(long)]
        morphism: Option<String>,
    },
    /// Verify the partial action axioms (P1)-(P3)
    Axioms { graph: String },
    /// Check associativity on random triples
    Assoc { graph: String },
    /// Decide graded properties and verify their certificates
    Check { property: Property, graph: String },
    /// Check an alternative realization against L_K(E)
    Iso { kind: IsoKind, graph: String },
    /// Verify the Laurent product table of a loop
    Laurent {
        graph: String,
        #[arg(long = "N", default_value_t = 5)]
        n: u32,
    },
    /// Compare the three graded properties with the loop criterion
    Crosscheck {
        /// Graph files; the built-in corpus when omitted
        graphs: Vec<String>,
        /// Number of seeded random graphs to add
        #[arg(long, default_value_t = 20)]
        random: usize,
        #[arg(long, hide = true)]
        tamper_certificates: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Strong,
    Clean,
    Unitreg,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IsoKind {
    Beta,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Outcome {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

type Run<T> = std::result::Result<T, InputError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = if cli.json { report.to_json() } else { report.to_text() };
            let code = match (&cli.command, report.passed()) {
                (_, true) => EXIT_PASS,
                (Command::Validate { .. }, false) => EXIT_INPUT,
                (_, false) => EXIT_FAIL,
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(InputError(m)) => Outcome::input_error(m),
    }
}

/// A graph file, or the name of a built-in graph when no such file exists.
fn load_graph(arg: &str) -> Run<(String, Graph)> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{arg}: {e}")))?;
        let g = Graph::from_json(&text).map_err(|e| InputError(format!("{arg}: {e}")))?;
        let name = path.file_stem().map_or(arg.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok((name, g));
    }
    match corpus::by_name(arg) {
        Some(g) => Ok((arg.to_string(), g)),
        None => Err(InputError(format!("{arg}: no such file or built-in graph"))),
    }
}

fn usize_opt(v: Option<u64>) -> Option<usize> {
    v.map(|v| v as usize)
}

impl Cli {
    fn field(&self) -> Run<Field> {
        Ok(self.field.parse::<Field>()?)
    }

    fn config(&self) -> RunConfig {
        RunConfig { field: self.field.clone(), seed: self.seed, ..Default::default() }
    }
}

fn alpha_ring(g: Graph, field: Field) -> SkewRing<Alpha> {
    SkewRing::new(Alpha::new(FunctionAlgebra::new(g, field)))
}

fn execute(cli: &Cli) -> Run<Report> {
    let field = cli.field()?;
    let mut config = cli.config();
    let bound = |default: usize| usize_opt(cli.bound).unwrap_or(default);
    let depth = |default: usize| usize_opt(cli.depth).unwrap_or(default);
    let trials = |default: usize| usize_opt(cli.trials).unwrap_or(default);
    match &cli.command {
        Command::Validate { graph } => validate(graph, config),
        Command::Paths { graph } => {
            let (name, g) = load_graph(graph)?;
            config.depth = Some(depth(2));
            let mut report = Report::new("paths", Some(name), config);
            report.output = g.paths_up_to(depth(2)).iter().map(|p| p.display(&g)).collect();
            Ok(report)
        }
        Command::Eval { expr, graph } => {
            let (name, g) = load_graph(graph)?;
            let lpa = Lpa::new(alpha_ring(g, field));
            let value = lpa.phi(&lpa.parse(expr)?)?;
            let mut report = Report::new("eval", Some(name), config);
            report.output.push(lpa.ring().display(&value));
            Ok(report)
        }
        Command::Mul { x, y, graph } => {
            let (name, g) = load_graph(graph)?;
            let ring = alpha_ring(g, field);
            let value = ring.multiply(&ring.parse(x)?, &ring.parse(y)?)?;
            let mut report = Report::new("mul", Some(name), config);
            report.output.push(ring.display(&value));
            Ok(report)
        }
        Command::Grade { expr, graph, morphism } => {
            let (name, g) = load_graph(graph)?;
            let m = match morphism {
                Some(text) => GradeMorphism::parse(text, &g)?,
                None => GradeMorphism::standard(&g),
            };
            config.morphism = morphism.clone();
            let lpa = Lpa::new(alpha_ring(g, field));
            let parts = lpa.grade_decompose(&lpa.parse(expr)?, &m)?;
            let mut report = Report::new("grade", Some(name), config);
            report.output = parts.iter().map(|(d, x)| format!("{}: {}", format_degree(d), lpa.ring().display(x))).collect();
            if report.output.is_empty() {
                report.output.push("0".into());
            }
            Ok(report)
        }
        Command::Axioms { graph } => {
            let (name, g) = load_graph(graph)?;
            let (b, d) = (bound(3), depth(3));
            config.bound = Some(b);
            config.depth = Some(d);
            let rep = verify_axioms(&Alpha::new(FunctionAlgebra::new(g, field)), b, d);
            let mut report = Report::new("axioms", Some(name), config);
            for (i, axiom) in [leavitt::action::Axiom::P1, leavitt::action::Axiom::P2, leavitt::action::Axiom::P3]
                .into_iter()
                .enumerate()
            {
                let bad: Vec<_> = rep.violations.iter().filter(|v| v.axiom == axiom).collect();
                let mut detail = format!("{} instances, {} violations", rep.checked[i], bad.len());
                if let Some(v) = bad.first() {
                    detail.push_str(&format!("; first: g = {}, h = {}: {}", v.g, v.h, v.detail));
                }
                report.push(Record::new(axiom.to_string(), bad.is_empty(), detail));
            }
            Ok(report)
        }
        Command::Assoc { graph } => {
            let (name, g) = load_graph(graph)?;
            let (t, d) = (trials(200), depth(3));
            config.trials = Some(t);
            config.depth = Some(d);
            let rep = check_associativity(&alpha_ring(g, field), t, d, cli.seed);
            let mut report = Report::new("assoc", Some(name), config);
            let mut detail = format!("{} trials, {} violations", rep.trials, rep.violations.len());
            if let Some(v) = rep.violations.first() {
                detail.push_str(&format!("; first: {v}"));
            }
            report.push(Record::new("(xy)z = x(yz)", rep.passed(), detail));
            Ok(report)
        }
        Command::Check { property, graph } => {
            let (name, g) = load_graph(graph)?;
            let b = bound(graded::TABLE_BOUND);
            config.bound = Some(b);
            let ring = alpha_ring(g, field);
            let decisions = match property {
                Property::Strong => vec![graded::decide_strongly_graded(&ring, b)?],
                Property::Clean => vec![graded::decide_graded_clean(&ring, b)?],
                Property::Unitreg => vec![graded::decide_graded_unit_regular(&ring, b)?],
                Property::All => graded::decide_all(&ring, b)?,
            };
            let mut report = Report::new(format!("check {}", property_name(*property)), Some(name), config);
            for d in &decisions {
                report.push(decision_record(&ring, d));
                report.output.extend(d.certificates.iter().map(|c| c.describe(&ring)));
            }
            if *property == Property::All {
                let is_loop = graded::is_loop(ring.graph());
                let record = Record { verdict: Some(is_loop), ..Record::new("is loop", true, "single vertex with a single loop") };
                report.push(record);
            }
            Ok(report)
        }
        Command::Iso { kind: IsoKind::Beta, graph } => {
            let (name, g) = load_graph(graph)?;
            let b = bound(3);
            config.bound = Some(b);
            let beta = BetaAction::new(FunctionAlgebra::new(g, field))?;
            let mut report = Report::new("iso beta", Some(name), config);
            for c in iso_agreement_check(&beta)? {
                report.push(Record::new(c.name, c.passed, c.detail));
            }
            let semi = verify_semi_saturated(&beta, b)?;
            let mut detail = format!("{} word pairs, {} checks, {} violations", semi.pairs, semi.checked, semi.violations.len());
            if let Some(v) = semi.violations.first() {
                detail.push_str(&format!("; first: t = {}, s = {} on {}: {}", v.t, v.s, v.input, v.detail));
            }
            report.push(Record::new("semi-saturation", semi.passed(), detail));
            let orth = verify_orthogonality(&beta)?;
            let mut detail = format!("{} edge pairs, {} violations", orth.pairs, orth.violations.len());
            if let Some(v) = orth.violations.first() {
                detail.push_str(&format!("; first: {v}"));
            }
            report.push(Record::new("orthogonality", orth.passed(), detail));
            Ok(report)
        }
        Command::Laurent { graph, n } => {
            let (name, g) = load_graph(graph)?;
            let n = i64::from(*n);
            config.n = Some(n);
            let ring = alpha_ring(g, field);
            let table = graded::laurent_check(&ring, n)?;
            let ok = table.iter().filter(|e| e.passed).count();
            let mut report = Report::new("laurent", Some(name), config);
            report.push(Record::new(
                "1[v] d[f^m] * 1[v] d[f^n] = 1[v] d[f^(m+n)]",
                ok == table.len(),
                format!("{ok}/{} products verified for |m|, |n| <= {n}", table.len()),
            ));
            for e in table.iter().filter(|e| !e.passed) {
                report.push(Record::new(format!("m = {}, n = {}", e.m, e.n), false, "product differs"));
            }
            Ok(report)
        }
        Command::Crosscheck { graphs, random, tamper_certificates } => {
            let b = bound(graded::TABLE_BOUND);
            config.bound = Some(b);
            let mut named: Vec<(String, Graph)> = if graphs.is_empty() {
                corpus::all()
            } else {
                graphs.iter().map(|g| load_graph(g)).collect::<Run<_>>()?
            };
            named.extend(corpus::random_corpus(cli.seed, *random, true));
            named.sort_by(|a, b| a.0.cmp(&b.0));
            let mut report = Report::new("crosscheck", None, config);
            for (name, g) in named {
                let ring = alpha_ring(g, field);
                let mut decisions = graded::decide_all(&ring, b)?;
                if *tamper_certificates {
                    decisions[0].certificates.insert(0, Certificate::InverseTable(vec![(ring.identity(), SkewElement::zero())]));
                }
                let row = graded::row_from_decisions(&name, &ring, &decisions);
                let certs = match &row.certificates {
                    Ok(n) => format!("{n} certificates verified"),
                    Err(e) => format!("certificate failure: {e}"),
                };
                let detail = format!(
                    "strong {}, clean {}, unit-regular {}, loop {}; {certs}",
                    row.strongly_graded, row.graded_clean, row.graded_unit_regular, row.is_loop
                );
                report.push(Record { verdict: Some(row.is_loop), ..Record::new(name, row.passed(), detail) });
            }
            Ok(report)
        }
    }
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::Strong => "strong",
        Property::Clean => "clean",
        Property::Unitreg => "unitreg",
        Property::All => "all",
    }
}

fn decision_record<A: leavitt::PartialAction>(ring: &SkewRing<A>, d: &Decision) -> Record {
    let dump: Vec<String> = d.certificates.iter().map(|c| c.describe(ring)).collect();
    let kinds: Vec<String> = d.certificates.iter().map(|c| format!("{} ({})", c.kind(), c.size())).collect();
    let (passed, detail) = match graded::verify_decision(ring, d) {
        Ok(()) => (true, format!("verified: {}", kinds.join(", "))),
        Err(e) => (false, format!("certificate failure: {e}")),
    };
    Record { verdict: Some(d.verdict), digest: Some(digest(&dump.join("\n"))), ..Record::new(d.property.to_string(), passed, detail) }
}

fn validate(arg: &str, config: RunConfig) -> Run<Report> {
    let text = std::fs::read_to_string(arg).map_err(|e| InputError(format!("{arg}: {e}")))?;
    let def: GraphDef = serde_json::from_str(&text).map_err(|e| InputError(format!("{arg}: malformed graph file: {e}")))?;
    let violations = def.validate();
    let mut report = Report::new("validate", Some(arg.to_string()), config);
    if violations.is_empty() {
        let g = Graph::new(&def)?;
        report.push(Record::new("graph", true, format!("{} vertices, {} edges", g.vertex_count(), g.edge_count())));
    }
    for v in violations {
        report.push(Record::new("violation", false, v.to_string()));
    }
    Ok(report)
}
