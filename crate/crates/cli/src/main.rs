//! `clocked` — command line front end for the clocked lambda calculus.
//!
//! Terms are given inline, via `--file`, or by zoo name. The input syntax is
//! the core grammar plus two conveniences: free variables naming parameterless
//! zoo entries (`I`, `Omega`, `S`, `delta`, `eta`, `Y0`..`Y4`) expand to their
//! definitions, and `name args @ extra-applications` calls a parameterized
//! zoo family and applies the result, e.g. `bohmY 2 @ x` or `yVec 0 1 @ f`.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use clocked_lambda::discriminate::{
    check_simple, discriminate, verdict_json, verdict_text, Simplicity, Verdict,
};
use clocked_lambda::reduce::{reduce_strategy, Strategy};
use clocked_lambda::term::{Mode, Term};
use clocked_lambda::tree::clocked_tree;
use clocked_lambda::zoo;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "clocked",
    about = "Reduce, approximate and discriminate terms of the clocked lambda calculus",
    after_help = "TERM INPUT:\n  \
        Inline grammar: \\x y. M for abstraction, juxtaposition for application,\n  \
        # / #^n for plain tau witnesses, <pos> for atomic ones, -- for comments.\n  \
        Free variables naming zoo entries (see `clocked zoo`) expand to their\n  \
        definitions. `name args @ term` calls a parameterized family and applies\n  \
        it: `bohmY 2 @ x` is the Bohm-sequence fpc Y2 applied to x.\n\n\
        EXIT CODES:\n  0 definite result, 2 usage or parse error, 3 inconclusive."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Plain,
    Atomic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Atomic => Mode::Atomic,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Calculus variant: plain tau counters or atomic position witnesses
    #[arg(long, value_enum, default_value = "plain", global = true)]
    mode: ModeArg,

    /// Approximation depth; repeat for several depths
    #[arg(long, global = true)]
    depth: Vec<usize>,

    /// Step budget per weak-head-normal-form search
    #[arg(long, default_value_t = 1000, global = true)]
    fuel: usize,

    /// Redex choice: leftmost-outermost (lo), rightmost-innermost (ri) or random
    #[arg(long, default_value = "leftmost-outermost", global = true)]
    strategy: String,

    /// RNG seed for the random strategy
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Read the term from a file instead of the command line
    #[arg(long, global = true)]
    file: Option<std::path::PathBuf>,
}

impl Common {
    fn depths(&self) -> Vec<usize> {
        if self.depth.is_empty() {
            vec![4, 6, 8]
        } else {
            self.depth.clone()
        }
    }

    fn strategy(&self) -> Result<Strategy, String> {
        let s: Strategy = self.strategy.parse()?;
        Ok(match (s, self.seed) {
            (Strategy::Random(_), Some(seed)) => Strategy::Random(seed),
            _ => s,
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a term under the clocked rules and print the trace
    Reduce {
        term: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print depth-bounded clocked Levy-Longo tree approximants
    Tree {
        term: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two terms and report beta-inconvertibility evidence
    Compare {
        term_a: Option<String>,
        term_b: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the simplicity condition used by the discrimination method
    Simple {
        term: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// List the named terms and families of the combinator zoo
    Zoo {
        #[command(flatten)]
        common: Common,
    },
}

fn usage_err(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

/// Resolve the term source (inline argument or --file) and parse it with zoo
/// expansion. Warns on stderr if the result still has free variables.
fn input_term(inline: Option<&str>, common: &Common, what: &str) -> Result<Term, ExitCode> {
    let src = match (&common.file, inline) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| usage_err(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(s)) => s.to_string(),
        (Some(_), Some(_)) => {
            return Err(usage_err(format!("give {what} either inline or via --file, not both")))
        }
        (None, None) => return Err(usage_err(format!("missing {what} (inline or --file)"))),
    };
    let t = zoo::parse_with_zoo(&src).map_err(usage_err)?;
    let fv = t.free_vars();
    if !fv.is_empty() {
        let mut names: Vec<&str> = fv.iter().map(String::as_str).collect();
        names.sort_unstable();
        eprintln!("note: free variables treated as constants: {}", names.join(", "));
    }
    Ok(t)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Reduce { term, common } => cmd_reduce(term.as_deref(), &common),
        Cmd::Tree { term, common } => cmd_tree(term.as_deref(), &common),
        Cmd::Compare { term_a, term_b, common } => {
            cmd_compare(term_a.as_deref(), term_b.as_deref(), &common)
        }
        Cmd::Simple { term, common } => cmd_simple(term.as_deref(), &common),
        Cmd::Zoo { common } => cmd_zoo(&common),
    }
}

fn cmd_reduce(inline: Option<&str>, common: &Common) -> ExitCode {
    let t = match input_term(inline, common, "a term") {
        Ok(t) => t,
        Err(code) => return code,
    };
    let strategy = match common.strategy() {
        Ok(s) => s,
        Err(e) => return usage_err(e),
    };
    let mode = common.mode.into();
    let trace = reduce_strategy(&t, mode, strategy, common.fuel);
    if common.json {
        let steps: Vec<_> = trace
            .steps
            .iter()
            .map(|s| {
                json!({
                    "rule": s.rule.to_string(),
                    "path": s.path.to_string(),
                    "term": s.contractum.to_string(),
                })
            })
            .collect();
        let doc = json!({
            "start": trace.start.to_string(),
            "steps": steps,
            "final": trace.final_term().to_string(),
        });
        println!("{doc:#}");
    } else {
        print!("{}", trace.render());
        println!("final: {}", trace.final_term());
    }
    ExitCode::from(EXIT_OK)
}

fn cmd_tree(inline: Option<&str>, common: &Common) -> ExitCode {
    let t = match input_term(inline, common, "a term") {
        Ok(t) => t,
        Err(code) => return code,
    };
    let mode = common.mode.into();
    let depths = common.depths();
    let mut uncertified = false;
    if common.json {
        let per_depth: Vec<_> = depths
            .iter()
            .map(|&d| {
                let tree = clocked_tree(&t, mode, d, common.fuel);
                uncertified |= tree.has_uncertified_bottom();
                json!({ "depth": d, "tree": tree.to_json() })
            })
            .collect();
        println!("{:#}", json!({ "term": t.to_string(), "approximants": per_depth }));
    } else {
        let mut out = String::new();
        for &d in &depths {
            let tree = clocked_tree(&t, mode, d, common.fuel);
            uncertified |= tree.has_uncertified_bottom();
            let _ = writeln!(out, "-- depth {d}");
            out.push_str(&tree.render_text());
        }
        if uncertified {
            let _ = writeln!(out, "note: ⊥? marks fuel exhaustion, not a certified bottom");
        }
        print!("{out}");
    }
    ExitCode::from(if uncertified { EXIT_INCONCLUSIVE } else { EXIT_OK })
}

fn cmd_compare(a: Option<&str>, b: Option<&str>, common: &Common) -> ExitCode {
    if common.file.is_some() {
        return usage_err("--file is not supported for compare; give both terms inline");
    }
    let (Some(a), Some(b)) = (a, b) else {
        return usage_err("compare needs two terms");
    };
    let (ta, tb) = match (zoo::parse_with_zoo(a), zoo::parse_with_zoo(b)) {
        (Ok(ta), Ok(tb)) => (ta, tb),
        (Err(e), _) | (_, Err(e)) => return usage_err(e),
    };
    let verdict = discriminate(&ta, &tb, common.mode.into(), &common.depths(), common.fuel);
    if common.json {
        println!("{:#}", verdict_json(&verdict));
    } else {
        print!("{}", verdict_text(&verdict));
    }
    match verdict {
        Verdict::NotConvertible(_) => ExitCode::from(EXIT_OK),
        Verdict::Inconclusive { .. } => ExitCode::from(EXIT_INCONCLUSIVE),
    }
}

fn cmd_simple(inline: Option<&str>, common: &Common) -> ExitCode {
    let t = match input_term(inline, common, "a term") {
        Ok(t) => t,
        Err(code) => return code,
    };
    let depth = common.depths().into_iter().max().unwrap_or(4);
    let report = check_simple(&t, depth, common.fuel);
    let (status, code) = match &report.status {
        Simplicity::Simple => ("simple", EXIT_OK),
        Simplicity::NotSimple { .. } => ("not-simple", EXIT_OK),
        Simplicity::Unknown(_) => ("unknown", EXIT_INCONCLUSIVE),
    };
    if common.json {
        let mut doc = json!({
            "term": t.to_string(),
            "status": status,
            "checkedDepth": report.checked_depth,
            "fuel": report.fuel,
        });
        match &report.status {
            Simplicity::NotSimple { path, redex } => {
                doc["witnessPath"] = json!(path.to_string());
                doc["witnessRedex"] = json!(redex.to_string());
            }
            Simplicity::Unknown(reason) => doc["reason"] = json!(reason),
            Simplicity::Simple => {}
        }
        println!("{doc:#}");
    } else {
        match &report.status {
            Simplicity::Simple => {
                println!("simple (checked to depth {})", report.checked_depth)
            }
            Simplicity::NotSimple { path, redex } => {
                println!("not simple: head redex {redex} @ {path} is neither linear nor call-by-value")
            }
            Simplicity::Unknown(reason) => println!("unknown: {reason}"),
        }
    }
    ExitCode::from(code)
}

fn cmd_zoo(common: &Common) -> ExitCode {
    if common.json {
        let entries: Vec<_> = zoo::entries()
            .iter()
            .map(|e| json!({ "name": e.name, "term": e.term.to_string(), "description": e.description }))
            .collect();
        let families: Vec<_> = zoo::FAMILIES
            .iter()
            .map(|(name, desc)| json!({ "name": name, "description": desc }))
            .collect();
        println!("{:#}", json!({ "entries": entries, "families": families }));
    } else {
        println!("named terms:");
        for e in zoo::entries() {
            println!("  {:<6} = {}", e.name, e.term);
            println!("  {:<6}   {}", "", e.description);
        }
        println!("parameterized families (use with @, e.g. `bohmY 2 @ x`):");
        for (name, desc) in zoo::FAMILIES {
            println!("  {desc}");
            let _ = name;
        }
    }
    ExitCode::from(EXIT_OK)
}
