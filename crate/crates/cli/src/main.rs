//! `fibburn`: command-line front end for the fibered Burnside engine.

mod check;
mod commands;
mod input;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{CmdError, CmdResult};
use output::{render, Cell, Format, Table};

#[derive(Parser)]
#[command(name = "fibburn", version, about = "Fibered Burnside rings and functors of p-groups")]
struct Cli {
    /// Output format for tables.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Bases, species and idempotents of the fibered Burnside ring.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Products, factorizations and actions of fibered bisets.
    #[command(subcommand)]
    Biset(BisetCmd),
    /// Index sets, deflation constants and composition series.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Set-level differential oracle.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Run self-verification suites.
    Check(CheckArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Preset `name:params`, e.g. `cyclic:2,3` or `dihedral8`.
    #[arg(long)]
    preset: Option<String>,
    /// JSON file `{"label":..,"table":[[..]],"prime":..}`.
    #[arg(long)]
    group_file: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    /// Fiber `μ_{pⁿ}` as `p,n`; defaults to the group's prime with n = 1.
    #[arg(long)]
    fiber: Option<String>,
    /// Characteristic of the coefficient field: 0 or a prime other than p.
    #[arg(long = "char", default_value_t = 0)]
    q: u64,
}

#[derive(Subcommand)]
enum GroupCmd {
    Describe(GroupArgs),
    Subgroups(GroupArgs),
}

#[derive(Subcommand)]
enum RingCmd {
    Pairs {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
    Species {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
    Idempotents {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Product of two elements given as JSON term lists.
    Multiply {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

#[derive(Subcommand)]
enum BisetCmd {
    /// `[G×H / X] ⊗ [H×K / Y]` by the Mackey formula.
    Mackey {
        #[arg(long)]
        left: String,
        #[arg(long)]
        mid: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        field: FieldArgs,
        /// Pair over `G×H`; element `(g,h)` is `g·|H| + h`.
        #[arg(long)]
        x: String,
        /// Pair over `H×K`.
        #[arg(long)]
        y: String,
    },
    /// Factor a transitive biset between abelian groups into elementary bisets.
    Decompose {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        pair: String,
    },
    /// Apply a transitive `(G,H)`-biset to an element of `B(H)`.
    Act {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        element: String,
    },
    /// The twisted automorphism algebra of an abelian group.
    Ebar {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Args)]
struct UniverseArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long = "char", default_value_t = 0)]
    q: u64,
    /// Largest group order of the universe; a power of p.
    #[arg(long)]
    max_order: u64,
}

#[derive(Subcommand)]
enum LatticeCmd {
    Index {
        #[arg(long)]
        p: u64,
        #[arg(long = "char", default_value_t = 0)]
        q: u64,
        #[arg(long, default_value_t = 6)]
        rmax: u32,
    },
    Series(UniverseArgs),
    /// Constants `m` of `Def^G_{G/N} e_{G,g}` for all normal `N`.
    Deflation {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        element: u32,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    Verify {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        max_order: u64,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// `all` or a suite name.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn one(g: &GroupArgs) -> anyhow::Result<std::sync::Arc<fibered_burnside::groups::FiniteGroup>> {
    input::one_group(g.preset.as_deref(), g.group_file.as_deref())
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Group(GroupCmd::Describe(g)) => commands::group_describe(&one(&g)?),
        Command::Group(GroupCmd::Subgroups(g)) => commands::group_subgroups(&one(&g)?),
        Command::Ring(r) => {
            let (group, field) = match &r {
                RingCmd::Pairs { group, field }
                | RingCmd::Species { group, field }
                | RingCmd::Idempotents { group, field }
                | RingCmd::Multiply { group, field, .. } => (group, field),
            };
            let g = one(group)?;
            let k = input::field_for(&[&g], field.fiber.as_deref(), field.q)?;
            match &r {
                RingCmd::Pairs { .. } => commands::ring_pairs(&g, &k),
                RingCmd::Species { .. } => commands::ring_species(&g, &k),
                RingCmd::Idempotents { .. } => commands::ring_idempotents(&g, &k),
                RingCmd::Multiply { x, y, .. } => {
                    commands::ring_multiply(&input::element(&g, &k, x)?, &input::element(&g, &k, y)?)
                }
            }
        }
        Command::Biset(BisetCmd::Mackey { left, mid, right, field, x, y }) => {
            let (g, h, kk) = (input::group_spec(&left)?, input::group_spec(&mid)?, input::group_spec(&right)?);
            let k = input::field_for(&[&g, &h, &kk], field.fiber.as_deref(), field.q)?;
            let m = k.fiber_order() as u32;
            let px = input::pair(&fibered_burnside::groups::direct_product(&g, &h).group, &x, m)?;
            let py = input::pair(&fibered_burnside::groups::direct_product(&h, &kk).group, &y, m)?;
            commands::biset_mackey(&g, &h, &kk, &k, &px, &py)
        }
        Command::Biset(BisetCmd::Decompose { left, right, field, pair }) => {
            let (g, h) = (input::group_spec(&left)?, input::group_spec(&right)?);
            let k = input::field_for(&[&g, &h], field.fiber.as_deref(), field.q)?;
            let p = input::pair(&fibered_burnside::groups::direct_product(&g, &h).group, &pair, k.fiber_order() as u32)?;
            commands::biset_decompose(&g, &h, &k, &p)
        }
        Command::Biset(BisetCmd::Act { left, right, field, pair, element }) => {
            let (g, h) = (input::group_spec(&left)?, input::group_spec(&right)?);
            let k = input::field_for(&[&g, &h], field.fiber.as_deref(), field.q)?;
            let p = input::pair(&fibered_burnside::groups::direct_product(&g, &h).group, &pair, k.fiber_order() as u32)?;
            commands::biset_act(&g, &h, &k, &p, &input::element(&h, &k, &element)?)
        }
        Command::Biset(BisetCmd::Ebar { group, field }) => {
            let g = one(&group)?;
            let k = input::field_for(&[&g], field.fiber.as_deref(), field.q)?;
            commands::biset_ebar(&g, &k)
        }
        Command::Lattice(LatticeCmd::Index { p, q, rmax }) => commands::lattice_index(p, q, rmax),
        Command::Lattice(LatticeCmd::Series(u)) => {
            if u.q == u.p || !commands::is_power_of(u.max_order, u.p) {
                return Err(anyhow::anyhow!("need q ≠ p and max_order a power of p").into());
            }
            commands::lattice_series(u.p, u.n, u.q, u.max_order)
        }
        Command::Lattice(LatticeCmd::Deflation { group, field, element }) => {
            let g = one(&group)?;
            let k = input::field_for(&[&g], field.fiber.as_deref(), field.q)?;
            commands::lattice_deflation(&g, &k, element)
        }
        Command::Oracle(OracleCmd::Verify { p, n, max_order }) => commands::oracle_verify(p, n, max_order),
        Command::Check(c) => run_check(&c),
    }
}

fn run_check(c: &CheckArgs) -> CmdResult {
    let names: Vec<&'static str> = if c.suite == "all" {
        check::SUITES.to_vec()
    } else {
        match check::SUITES.iter().find(|s| **s == c.suite) {
            Some(s) => vec![*s],
            None => return Err(anyhow::anyhow!("unknown suite `{}`; expected all or one of {:?}", c.suite, check::SUITES).into()),
        }
    };
    let outcomes = check::run(&names, c.seed);
    let mut t = Table::new(format!("check {} seed={}", c.suite, c.seed), &["suite", "checked", "status"]);
    for o in &outcomes {
        t.push(vec![o.suite.into(), o.checked.into(), Cell::from(if o.failure.is_some() { "FAIL" } else { "ok" })]);
    }
    match outcomes.iter().find(|o| o.failure.is_some()) {
        Some(o) => Err(CmdError::Failed { tables: vec![t], report: json!({ "suite": o.suite, "failure": o.failure }) }),
        None => Ok(vec![t]),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command) {
        Ok(tables) => {
            render(&tables, cli.format, &mut out).expect("stdout");
            ExitCode::SUCCESS
        }
        Err(CmdError::Failed { tables, report }) => {
            render(&tables, cli.format, &mut out).expect("stdout");
            writeln!(out, "{}", serde_json::to_string(&json!({ "counterexample": report })).expect("json")).expect("stdout");
            ExitCode::from(1)
        }
        Err(CmdError::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
