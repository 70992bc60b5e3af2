//! `prefrep`: repairs, preferred repairs and preferred consistent answers
//! for relational data under functional dependencies and a priority.
//!
//! Results go to stdout as JSON. Errors go to stderr as
//! `{"error": {"kind": ..., "message": ...}}` with exit status 1 for
//! invalid input, 2 when a budget is exhausted and 3 for a cyclic priority.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prefrep::graph::enumerate_repairs;
use prefrep::grepair::{enumerate_grepairs, is_grepair};
use prefrep::io::{
    read_fds, read_instance, read_priority, read_schema, write_fixture, write_relations, write_text,
};
use prefrep::lrepair::{clean, enumerate_lrepairs, is_lrepair};
use prefrep::postulates::{check_postulates, Family, Outcome, PostulateConfig};
use prefrep::query::cqa;
use prefrep::reductions::{
    reduce_3sat_gcheck, reduce_3sat_lcqa, reduce_qbf_gcqa, CnfFormula, Layout, Qbf2Formula, Reduction,
};
use prefrep::{Budget, ConflictGraph, Error, Instance, Mode, Priority, Query, TupleId, TupleSet};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "prefrep",
    version,
    about = "Prioritized repairs of inconsistent relational data"
)]
struct Cli {
    #[command(flatten)]
    data: DataArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Directory holding one `<Rel>.csv` per relation.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Schema file [default: DIR/schema.txt].
    #[arg(long, global = true)]
    schema: Option<PathBuf>,
    /// Functional dependency file [default: DIR/fds.txt].
    #[arg(long, global = true)]
    fds: Option<PathBuf>,
    /// Priority file with `Rel#i < Rel#j` and `prefer Rel max|min Attr` lines.
    #[arg(long, global = true)]
    priority: Option<PathBuf>,
    /// Maximum number of repairs an enumeration may produce [default: 20000].
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Seed for sampled priority extensions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum PreferredMode {
    L,
    G,
}

impl From<PreferredMode> for Mode {
    fn from(m: PreferredMode) -> Mode {
        match m {
            PreferredMode::L => Mode::Local,
            PreferredMode::G => Mode::Global,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AnswerMode {
    All,
    L,
    G,
}

impl From<AnswerMode> for Mode {
    fn from(m: AnswerMode) -> Mode {
        match m {
            AnswerMode::All => Mode::All,
            AnswerMode::L => Mode::Local,
            AnswerMode::G => Mode::Global,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    L,
    G,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    /// Three literal columns per clause.
    Compact,
    /// Positive literals before negative ones, so clause tuples never conflict.
    SignSeparated,
}

#[derive(Subcommand)]
enum Command {
    /// List every repair.
    Repairs,
    /// List the locally (l) or globally (g) preferred repairs.
    Preferred {
        #[arg(long, value_enum)]
        mode: PreferredMode,
    },
    /// Decide whether a set of tuples is a preferred repair.
    Check {
        #[arg(long, value_enum)]
        mode: PreferredMode,
        /// Comma-separated tuple ids, e.g. `Emp#0,Mgr#2`.
        #[arg(long, value_delimiter = ',')]
        repair: Vec<String>,
    },
    /// Decide whether a closed query holds in every repair of a family.
    Cqa {
        #[arg(long)]
        query: String,
        #[arg(long, value_enum, default_value = "all")]
        mode: AnswerMode,
    },
    /// Write the repair selected by a total priority.
    Clean {
        /// Output directory for the cleaned relations.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate an instance from a formula.
    Reduce {
        #[command(subcommand)]
        kind: ReduceKind,
    },
    /// Check non-emptiness, non-discrimination, monotonicity and
    /// categoricity of the preferred families on the given data.
    ///
    /// Monotonicity and categoricity range over extensions of the priority.
    /// These are all enumerated when fewer than `--exhaustive-below`
    /// conflicts are unoriented; otherwise `--samples` random extensions
    /// (seeded by `--seed`) are drawn, and the report says so.
    Postulates {
        #[arg(long, value_enum, default_value = "both")]
        family: FamilyArg,
        #[arg(long, default_value_t = 10)]
        exhaustive_below: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Print the conflict graph in DOT, with the priority as directed edges.
    Graph,
}

#[derive(Args)]
struct ReduceArgs {
    /// Formula file: DIMACS CNF, with `a ... 0` and `e ... 0` prefix lines for QBF.
    #[arg(long)]
    input: PathBuf,
    /// Directory to write the generated data into.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "sign-separated")]
    layout: LayoutArg,
}

#[derive(Subcommand)]
enum ReduceKind {
    /// CNF to an instance where `!R(b)` is certain over l-repairs iff unsatisfiable.
    #[command(name = "3sat-l")]
    Sat3Local {
        #[command(flatten)]
        args: ReduceArgs,
        /// Add the tuple `b'` below `b`, whose positive query `R(b')` has the same answer.
        #[arg(long)]
        with_b_prime: bool,
    },
    /// CNF to an instance and candidate that is a g-repair iff unsatisfiable.
    #[command(name = "3sat-g")]
    Sat3Global {
        #[command(flatten)]
        args: ReduceArgs,
    },
    /// Forall-exists QBF to an instance where `R(Y)` is certain over g-repairs iff true.
    #[command(name = "qbf-g")]
    QbfGlobal {
        #[command(flatten)]
        args: ReduceArgs,
    },
}

struct Loaded {
    inst: Instance,
    graph: ConflictGraph,
    priority: Priority,
}

impl DataArgs {
    /// Only the number of repairs is capped; instance size alone is not an error.
    fn budget(&self) -> Budget {
        Budget {
            max_vertices: usize::MAX,
            max_repairs: self.budget.unwrap_or(Budget::default().max_repairs),
        }
    }

    fn load(&self) -> prefrep::Result<Loaded> {
        let dir = self
            .data
            .as_deref()
            .ok_or_else(|| Error::Schema("--data is required for this command".into()))?;
        let file = |given: &Option<PathBuf>, name| given.clone().unwrap_or_else(|| dir.join(name));
        let schema = read_schema(&file(&self.schema, "schema.txt"))?;
        let fds = read_fds(&file(&self.fds, "fds.txt"), &schema)?;
        let inst = read_instance(&schema, dir)?;
        let graph = ConflictGraph::build(&inst, &fds);
        let priority = match &self.priority {
            Some(path) => read_priority(path)?.resolve(&inst, &graph, true)?,
            None => Priority::empty(inst.len()),
        };
        Ok(Loaded {
            inst,
            graph,
            priority,
        })
    }
}

fn ids(inst: &Instance, set: &TupleSet) -> Value {
    set.iter().map(|p| inst.id(p).to_string()).collect()
}

fn repair_list(inst: &Instance, repairs: &[TupleSet]) -> Value {
    repairs.iter().map(|r| ids(inst, r)).collect()
}

fn pair_list(inst: &Instance, pairs: &[(usize, usize)]) -> Value {
    pairs
        .iter()
        .map(|&(lo, hi)| json!([inst.id(lo).to_string(), inst.id(hi).to_string()]))
        .collect()
}

fn outcome_json(inst: &Instance, o: &Outcome) -> Value {
    json!({
        "postulate": o.postulate.code(),
        "name": o.postulate.name(),
        "family": o.family.to_string(),
        "holds": o.holds(),
        "exhaustive": o.exhaustive,
        "cases": o.cases,
        "witness": o.violation.as_ref().map(|v| json!({
            "priority": pair_list(inst, &v.priority),
            "repairs": repair_list(inst, &v.repairs),
        })),
    })
}

fn reduce(kind: &ReduceKind) -> prefrep::Result<Value> {
    let read = |path: &Path| {
        fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    let layout = |l: LayoutArg| match l {
        LayoutArg::Compact => Layout::Compact,
        LayoutArg::SignSeparated => Layout::SignSeparated,
    };
    let (red, args): (Reduction, &ReduceArgs) = match kind {
        ReduceKind::Sat3Local { args, with_b_prime } => {
            let phi = CnfFormula::parse_dimacs(&read(&args.input)?)?;
            (reduce_3sat_lcqa(&phi, layout(args.layout), *with_b_prime)?, args)
        }
        ReduceKind::Sat3Global { args } => {
            let phi = CnfFormula::parse_dimacs(&read(&args.input)?)?;
            (reduce_3sat_gcheck(&phi, layout(args.layout))?, args)
        }
        ReduceKind::QbfGlobal { args } => {
            let psi = Qbf2Formula::parse(&read(&args.input)?)?;
            (reduce_qbf_gcqa(&psi, layout(args.layout))?, args)
        }
    };
    let out = &args.out;
    write_fixture(out, &red.instance, &red.fds, &red.priority)?;
    let labels: String = red
        .labels
        .iter()
        .enumerate()
        .map(|(p, l)| format!("{} {l}\n", red.instance.id(p)))
        .collect();
    write_text(out, "labels.txt", &labels)?;
    let mut doc = json!({
        "out": out.display().to_string(),
        "tuples": red.instance.len(),
    });
    for (key, file, q) in [
        ("query", "query.txt", &red.query),
        ("alt_query", "alt_query.txt", &red.alt_query),
    ] {
        if let Some(q) = q {
            write_text(out, file, &format!("{q}\n"))?;
            doc[key] = json!(q.to_string());
        }
    }
    if let Some(c) = &red.candidate {
        let list = ids(&red.instance, c);
        let line: Vec<String> = c.iter().map(|p| red.instance.id(p).to_string()).collect();
        write_text(out, "candidate.txt", &format!("{}\n", line.join(",")))?;
        doc["candidate"] = list;
    }
    Ok(doc)
}

fn run(cli: &Cli) -> prefrep::Result<Value> {
    let budget = cli.data.budget();
    if let Command::Reduce { kind } = &cli.command {
        return reduce(kind);
    }
    let d = cli.data.load()?;
    Ok(match &cli.command {
        Command::Repairs => {
            let repairs = enumerate_repairs(&d.graph, &budget)?;
            json!({ "repairs": repair_list(&d.inst, &repairs) })
        }
        Command::Preferred { mode } => {
            let repairs = match Mode::from(*mode) {
                Mode::Local => enumerate_lrepairs(&d.graph, &d.priority, &budget)?,
                _ => enumerate_grepairs(&d.graph, &d.priority, &budget)?,
            };
            json!({ "mode": Mode::from(*mode).to_string(), "repairs": repair_list(&d.inst, &repairs) })
        }
        Command::Check { mode, repair } => {
            let parsed = repair
                .iter()
                .map(|s| s.trim().parse::<TupleId>())
                .collect::<prefrep::Result<Vec<_>>>()?;
            let cand = TupleSet::from_ids(&d.inst, &parsed)?;
            d.graph.require_repair(&cand)?;
            let preferred = match Mode::from(*mode) {
                Mode::Local => is_lrepair(&d.graph, &d.priority, &cand)?,
                _ => is_grepair(&d.graph, &d.priority, &cand, &budget)?,
            };
            json!({ "mode": Mode::from(*mode).to_string(), "preferred": preferred })
        }
        Command::Cqa { query, mode } => {
            let q = Query::parse(query, d.inst.schema())?;
            let answer = cqa(&d.inst, &d.graph, &d.priority, &q, (*mode).into(), &budget)?;
            json!({ "mode": Mode::from(*mode).to_string(), "answer": answer })
        }
        Command::Clean { out } => {
            let kept = clean(&d.graph, &d.priority)?;
            write_relations(out, &d.inst, &kept)?;
            json!({ "out": out.display().to_string(), "kept": ids(&d.inst, &kept) })
        }
        Command::Postulates {
            family,
            exhaustive_below,
            samples,
        } => {
            let config = PostulateConfig {
                exhaustive_below: *exhaustive_below,
                samples: *samples,
                seed: cli.data.seed,
            };
            let families = match family {
                FamilyArg::L => vec![Family::Local],
                FamilyArg::G => vec![Family::Global],
                FamilyArg::Both => vec![Family::Local, Family::Global],
            };
            let mut results = Vec::new();
            for f in families {
                for o in check_postulates(&d.graph, &d.priority, f, &config, &budget)? {
                    results.push(outcome_json(&d.inst, &o));
                }
            }
            let all = results.iter().all(|r| r["holds"] == json!(true));
            json!({ "holds": all, "results": results })
        }
        Command::Graph => return Ok(Value::String(d.graph.to_dot(&d.inst, Some(&d.priority)))),
        Command::Reduce { .. } => unreachable!("handled above"),
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InstanceTooLarge(_) => 2,
        Error::CyclicPriority => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match run(&cli) {
        Ok(Value::String(text)) => text,
        Ok(doc) => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
        Err(e) => {
            let doc = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{doc}");
            return ExitCode::from(exit_code(&e));
        }
    };
    // A closed pipe downstream (`| head`) is not an error of ours.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::SUCCESS
}
