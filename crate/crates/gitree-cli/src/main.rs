//! Command-line front door: parse a program in one of the three surface
//! languages, typecheck it, evaluate it denotationally (and, for the I/O
//! language, operationally), print an outcome summary and an optional
//! step trace.
//!
//! Exit codes: 0 success (including allowed errors), 1 parse or type
//! error, 2 runtime violation (disallowed error or stuck), 3 out of
//! fuel, 4 compare mismatch.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use gitree::engine::{run, Outcome, DEFAULT_FUEL};
use gitree::env::Env;
use gitree::interop::{denote_comb, typecheck_comb_deriv};
use gitree::lang_aff::{denote_aff, parse_aff_expr, typecheck_aff_deriv, EmbedPolicy};
use gitree::lang_io::{
    denote_io, op_run, parse_io_expr, typecheck_io, IfConvention, IoConfig, IoExpr, OpRunResult,
};
use gitree::reify::{
    combine_reifiers, io_reifier, store_reifier, GlobalReifier, GlobalState, IoState, LocalState,
};
use gitree::signature::{IoOps, StoreOps};
use gitree::tree::ErrorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Lang {
    Io,
    Aff,
    Comb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Denote,
    Operational,
    Compare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AllowKind {
    Runtime,
    Lin,
}

impl AllowKind {
    fn to_error_kind(self) -> ErrorKind {
        match self {
            AllowKind::Runtime => ErrorKind::RunTime,
            AllowKind::Lin => ErrorKind::Lin,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gitree", about = "Evaluate interaction-tree programs")]
struct Args {
    /// Source language of the program file.
    #[arg(long, value_enum)]
    lang: Lang,

    /// Evaluation mode; operational and compare are only valid for the
    /// I/O language.
    #[arg(long, value_enum, default_value_t = Mode::Denote)]
    mode: Mode,

    /// Step budget.
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,

    /// Initial input tape, comma-separated naturals.
    #[arg(long, value_delimiter = ',')]
    tape: Vec<u64>,

    /// Error kinds a run may legitimately end in (repeatable).
    #[arg(long = "allow", value_enum)]
    allow: Vec<AllowKind>,

    /// Print the step trace.
    #[arg(long)]
    trace: bool,

    /// Run the operational semantics with the if-branches flipped
    /// (a seeded mutant for exercising compare mode).
    #[arg(long, hide = true)]
    flip_if_mutant: bool,

    /// Program file.
    file: PathBuf,
}

/// Prints without panicking when stdout is a closed pipe.
fn say(line: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn say_raw(text: &str) {
    use std::io::Write;
    let _ = write!(std::io::stdout(), "{text}");
}

fn rig(tape: &[u64]) -> (GlobalReifier, GlobalState, StoreOps, IoOps) {
    let gr = combine_reifiers(vec![store_reifier(), io_reifier()]);
    let sigs = gr.signatures();
    let store = StoreOps::embedded_in(&sigs).expect("store family");
    let io = IoOps::embedded_in(&sigs).expect("io family");
    let mut st = gr.initial_state();
    st.locals[io.family] = LocalState::Io(IoState::new(tape.to_vec(), vec![]));
    (gr, st, store, io)
}

fn tape_csv(tape: &[u64]) -> String {
    tape.iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn value_display(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Value { tree, .. } => match tree.as_nat() {
            Some(n) => n.to_string(),
            None => "<fun>".to_string(),
        },
        _ => "-".to_string(),
    }
}

fn summarize(outcome: &Outcome, io_family: usize, store_family: usize) -> (String, u8) {
    let state = outcome.state();
    let tapes = state.io(io_family).cloned().unwrap_or_default();
    let heap_cells = state.heap(store_family).map_or(0, |h| h.len());
    let suffix = format!(
        "tape-in {} | tape-out {} | heap {} cells | steps {}",
        tape_csv(&tapes.input),
        tape_csv(&tapes.output),
        heap_cells,
        outcome.steps()
    );
    match outcome {
        Outcome::Value { .. } => (format!("OK {} | {}", value_display(outcome), suffix), 0),
        Outcome::Errored {
            kind, acceptable, ..
        } => {
            let tag = if *acceptable {
                "acceptable"
            } else {
                "violation"
            };
            let code = if *acceptable { 0 } else { 2 };
            (format!("ERR {kind} ({tag}) | {suffix}"), code)
        }
        Outcome::OutOfFuel { .. } => (format!("OUT-OF-FUEL | {suffix}"), 3),
        Outcome::Stuck { .. } => (format!("STUCK | {suffix}"), 2),
    }
}

fn denote_program(args: &Args, src: &str) -> Result<u8, String> {
    let (gr, st, store, io) = rig(&args.tape);
    let allowed: Vec<ErrorKind> = args.allow.iter().map(|a| a.to_error_kind()).collect();
    let tree = match args.lang {
        Lang::Io => {
            let expr = parse_io_expr(src).map_err(|e| e.to_string())?;
            typecheck_io(&[], &expr).ok_or("type error")?;
            denote_io(&expr, &Env::empty(), io)
        }
        Lang::Aff => {
            let expr = parse_aff_expr(src).map_err(|e| e.to_string())?;
            let deriv = typecheck_aff_deriv(&[], &expr, EmbedPolicy::Reject).ok_or("type error")?;
            denote_aff(&deriv, &Env::empty(), store)
        }
        Lang::Comb => {
            let expr = parse_aff_expr(src).map_err(|e| e.to_string())?;
            let deriv = typecheck_comb_deriv(&[], &expr).ok_or("type error")?;
            denote_comb(&deriv, &Env::empty(), store, io)
        }
    };
    let (outcome, trace) = run(&gr, tree, st, args.fuel, &allowed);
    if args.trace {
        say_raw(&trace.render());
    }
    let (line, code) = summarize(&outcome, io.family, store.family);
    say(line);
    Ok(code)
}

enum OpSummary {
    Value(u64, IoState),
    Fun(IoState),
    Stuck,
    OutOfFuel,
}

fn operational(args: &Args, src: &str) -> Result<(OpSummary, String, u8), String> {
    let expr = parse_io_expr(src).map_err(|e| e.to_string())?;
    typecheck_io(&[], &expr).ok_or("type error")?;
    let conv = if args.flip_if_mutant {
        IfConvention::NonzeroElse
    } else {
        IfConvention::NonzeroThen
    };
    let cfg = IoConfig {
        expr,
        tapes: IoState::new(args.tape.clone(), vec![]),
    };
    let result = op_run(cfg, args.fuel, conv);
    let (summary, line, code) = match result {
        OpRunResult::Terminal { config, steps } => match &config.expr {
            IoExpr::Lit(n) => {
                let line = format!(
                    "OK {} | tape-in {} | tape-out {} | steps {}",
                    n,
                    tape_csv(&config.tapes.input),
                    tape_csv(&config.tapes.output),
                    steps
                );
                (OpSummary::Value(*n, config.tapes.clone()), line, 0)
            }
            IoExpr::Rec { .. } => {
                let line = format!(
                    "OK <fun> | tape-in {} | tape-out {} | steps {}",
                    tape_csv(&config.tapes.input),
                    tape_csv(&config.tapes.output),
                    steps
                );
                (OpSummary::Fun(config.tapes.clone()), line, 0)
            }
            _ => (
                OpSummary::Stuck,
                format!("STUCK at {} | steps {}", config.expr, steps),
                2,
            ),
        },
        OpRunResult::OutOfFuel { steps, .. } => (
            OpSummary::OutOfFuel,
            format!("OUT-OF-FUEL | steps {steps}"),
            3,
        ),
    };
    Ok((summary, line, code))
}

fn compare(args: &Args, src: &str) -> Result<u8, String> {
    let (op_summary, op_line, op_code) = operational(args, src)?;
    say(format!("operational:  {op_line}"));

    let (gr, st, _, io) = rig(&args.tape);
    let expr = parse_io_expr(src).map_err(|e| e.to_string())?;
    let tree = denote_io(&expr, &Env::empty(), io);
    let allowed: Vec<ErrorKind> = args.allow.iter().map(|a| a.to_error_kind()).collect();
    let (outcome, _) = run(&gr, tree, st, args.fuel, &allowed);
    let (den_line, den_code) = summarize(&outcome, io.family, 0);
    say(format!("denotational: {den_line}"));

    if op_code == 3 || den_code == 3 {
        say("COMPARE OUT-OF-FUEL");
        return Ok(3);
    }
    let agree = match (&op_summary, &outcome) {
        (OpSummary::Value(n, tapes), Outcome::Value { tree, state, .. }) => {
            tree.as_nat() == Some(*n) && state.io(io.family) == Some(tapes)
        }
        (OpSummary::Fun(tapes), Outcome::Value { tree, state, .. }) => {
            tree.as_nat().is_none() && state.io(io.family) == Some(tapes)
        }
        _ => false,
    };
    if agree {
        say("COMPARE OK");
        Ok(0)
    } else {
        say("COMPARE MISMATCH");
        Ok(4)
    }
}

fn dispatch(args: &Args) -> Result<u8, String> {
    let src = std::fs::read_to_string(&args.file)
        .map_err(|e| format!("cannot read {}: {e}", args.file.display()))?;
    match args.mode {
        Mode::Denote => denote_program(args, &src),
        Mode::Operational => {
            if args.lang != Lang::Io {
                return Err("operational mode is only valid for --lang io".to_string());
            }
            let (_, line, code) = operational(args, &src)?;
            say(line);
            Ok(code)
        }
        Mode::Compare => {
            if args.lang != Lang::Io {
                return Err("compare mode is only valid for --lang io".to_string());
            }
            compare(args, &src)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match dispatch(&args) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
