//! Batch driver: load specs, run checks and constructions, print reports.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! spec or usage error. Undetermined counts are printed but never affect
//! the status.

pub mod catalog;
pub mod commands;
pub mod spec;

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use catalog::{catalog, Example, Step};
pub use commands::{Emit, Output, PairOrder};
pub use spec::{ActionSpec, GroupOrderSpec, PosetSpec, ScenarioSpec, SpecDocument, TreeSpec, SPEC_VERSION};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "ordtree", version, about = "Left-invariant orders on groups and oriented order trees")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel sweeps.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EmitArg {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairsArg {
    Greedy,
    Shortlex,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify the cone conditions of a group-order spec on a ball.
    CheckCones {
        /// Spec file, `-` for stdin, or `example:<name>`.
        spec: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Run the extended-poset and between-set checks on a poset spec.
    CheckPoset { spec: String },
    /// Build the order tree of a group order stage by stage.
    BuildTree {
        spec: String,
        #[arg(long, default_value_t = 6)]
        stages: usize,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, value_enum)]
        emit: Option<EmitArg>,
        #[arg(long, value_enum, default_value = "shortlex")]
        pairs: PairsArg,
    },
    /// Blow up a tree spec into a branchless manifold.
    Blowup {
        spec: String,
        #[arg(long, value_enum)]
        emit: Option<EmitArg>,
    },
    /// Read the order off the orbit of a scenario's base point.
    OrbitOrder {
        spec: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Check complete convexity of a subgroup and the quotient order.
    Quotient {
        spec: String,
        /// Subgroup predicate: inline JSON or `@file`.
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Build the tree, read the orbit order back and compare.
    Roundtrip {
        spec: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// The built-in example catalog.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, Subcommand)]
enum ExamplesAction {
    /// List the examples.
    List,
    /// Print the group-order spec of one example.
    Show { name: String },
    /// Run every step of one example.
    Run {
        name: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value_t = 6)]
        stages: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `args` (without the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("ordtree")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let text = e.render().to_string();
            return match e.kind() {
                DisplayHelp | DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Error::Spec(format!("--threads: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    match result {
        Ok(out) => render(&out, cli.json),
        Err(e) => {
            let code = match e {
                Error::Spec(_) | Error::UnknownElement(_) | Error::InvalidGroup(_) | Error::InvalidTree(_) => 2,
                _ => 1,
            };
            let stderr = if cli.json {
                format!("{}\n", json!({ "error": e.to_string(), "exit": code }))
            } else {
                format!("error: {e}\n")
            };
            Outcome { code, stdout: String::new(), stderr }
        }
    }
}

fn dispatch(cmd: &Command) -> crate::Result<Output> {
    use commands as c;
    match cmd {
        Command::CheckCones { spec, radius } => c::check_cones(&c::group_order(c::load(spec, "group-order")?)?, *radius),
        Command::CheckPoset { spec } => match c::load(spec, "poset")? {
            SpecDocument::Poset(s) => c::check_poset(&s),
            d => Err(Error::Spec(format!("expected a poset spec, got {}", d.kind()))),
        },
        Command::BuildTree { spec, stages, radius, emit, pairs } => {
            let order = match pairs {
                PairsArg::Greedy => PairOrder::Greedy,
                PairsArg::Shortlex => PairOrder::Shortlex,
            };
            c::build_tree(&c::group_order(c::load(spec, "group-order")?)?, *stages, *radius, order, emit.map(emit_of))
        }
        Command::Blowup { spec, emit } => match c::load(spec, "tree")? {
            SpecDocument::Tree(s) => c::blowup(&s, emit.map(emit_of)),
            d => Err(Error::Spec(format!("expected a tree spec, got {}", d.kind()))),
        },
        Command::OrbitOrder { spec, radius } => match c::load(spec, "scenario")? {
            SpecDocument::Scenario(s) => c::orbit_order(&s, *radius),
            d => Err(Error::Spec(format!("expected a scenario spec, got {}", d.kind()))),
        },
        Command::Quotient { spec, subgroup, radius } => {
            let s = c::group_order(c::load(spec, "group-order")?)?;
            c::quotient(&s, &c::parse_predicate(subgroup)?, *radius)
        }
        Command::Roundtrip { spec, radius } => c::roundtrip_cmd(&c::group_order(c::load(spec, "group-order")?)?, *radius),
        Command::Examples { action: ExamplesAction::List } => Ok(c::examples_list()),
        Command::Examples { action: ExamplesAction::Show { name } } => {
            let ex = catalog::find(name).ok_or_else(|| Error::Spec(format!("no example named `{name}`")))?;
            Ok(Output { artifact: Some(SpecDocument::GroupOrder(ex.spec).to_json() + "\n"), ..Output::default() })
        }
        Command::Examples { action: ExamplesAction::Run { name, radius, stages } } => {
            let ex = catalog::find(name).ok_or_else(|| Error::Spec(format!("no example named `{name}`")))?;
            c::examples_run(&ex, *radius, *stages)
        }
    }
}

fn emit_of(e: EmitArg) -> Emit {
    match e {
        EmitArg::Dot => Emit::Dot,
        EmitArg::Json => Emit::Json,
    }
}

/// Reports go to stdout, or to stderr when an artifact takes stdout.
fn render(out: &Output, as_json: bool) -> Outcome {
    let passed = out.passed();
    let body = if as_json {
        let v = json!({
            "passed": passed,
            "undetermined": out.undetermined(),
            "reports": out.reports,
            "data": out.data,
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("report serializes"))
    } else {
        let mut s: String = out.reports.iter().map(|r| r.to_string()).collect();
        if !out.reports.is_empty() {
            s.push_str(&format!("undetermined: {}\nresult: {}\n", out.undetermined(), if passed { "PASS" } else { "FAIL" }));
        }
        s
    };
    let code = if passed { 0 } else { 1 };
    match &out.artifact {
        Some(a) if !(as_json && out.reports.is_empty()) => Outcome { code, stdout: a.clone(), stderr: body },
        _ => Outcome { code, stdout: body, stderr: String::new() },
    }
}
