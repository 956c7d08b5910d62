//! Command-line front end. `run` returns the process exit code: 0 on success, 1 on a
//! domain error, 2 on a usage error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::asymptotics::{fit_constant, format_table1, normalized, plot_csv, singularity_data, table1};
use crate::compaction::uid_compact;
use crate::dfinite::{closed_form_oracle, seed, stream};
use crate::enumerate::{count_exhaustive, generate, GenFilter, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::operator::{build_l, build_m, coeff_recurrences_check, transformed_m_check};
use crate::recurrences::CountTable;
use crate::tree::parse_tree;
use crate::Family;

#[derive(Parser, Debug)]
#[command(name = "compacta", version, about = "Exact enumeration of compacted and relaxed binary trees")]
struct Cli {
    /// Worker threads for enumeration
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Relaxed,
    Compacted,
}

impl From<Kind> for Family {
    fn from(k: Kind) -> Family {
        match k {
            Kind::Relaxed => Family::Relaxed,
            Kind::Compacted => Family::Compacted,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpFamily {
    #[value(name = "L")]
    L,
    #[value(name = "M")]
    M,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compact an s-expression tree and print its uid table and dag
    Compact { file: PathBuf },
    /// Generate every dag of a given size
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_right_height: Option<usize>,
        #[arg(long, value_enum, default_value = "relaxed")]
        kind: Kind,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Count trees of size n from the recurrence tables
    Count {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        table: bool,
    },
    /// Stream counts of bounded right height
    Sequence {
        #[arg(long, value_enum)]
        family: Kind,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        upto: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Print the annihilating operator
    Operator {
        #[arg(long, value_enum)]
        family: OpFamily,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "plain")]
        latex: bool,
        #[arg(long)]
        plain: bool,
    },
    /// Singularity data, and optionally a fit of the constant
    Asymptotics {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        family: Kind,
        #[arg(long)]
        fit: bool,
        #[arg(long, default_value_t = 1000)]
        upto: usize,
        #[arg(long)]
        emit_plot: Option<PathBuf>,
    },
    /// Growth factors and exponents for k = 1..7
    Table1,
    /// Cross-check brute force, tables, recurrences and closed forms
    Selftest,
}

fn budget() -> Result<u64> {
    match std::env::var("COMPACTA_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| Error::Domain(format!("COMPACTA_BUDGET is not a number: '{v}'"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Domain(e.to_string())
}

/// Runs with process arguments (the first item is the program name).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut io::stdout())
}

pub fn run_with<I, T>(argv: I, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli.cmd, out)),
            Err(e) => Err(Error::Domain(e.to_string())),
        },
        None => dispatch(cli.cmd, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut (dyn Write + Send)) -> Result<i32> {
    match cmd {
        Command::Compact { file } => {
            let text = fs::read_to_string(&file).map_err(io_err)?;
            let (dag, table) = uid_compact(&parse_tree(&text)?);
            write!(out, "{}", table.to_csv()).map_err(io_err)?;
            writeln!(out, "{dag}").map_err(io_err)?;
        }
        Command::Enumerate { n, max_right_height, kind, count_only, emit } => {
            let f = GenFilter { n, max_right_height, kind: kind.into() };
            let budget = budget()?;
            if count_only {
                writeln!(out, "{}", count_exhaustive(&f, budget)?).map_err(io_err)?;
            } else if let Some(path) = emit {
                let mut file = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
                let mut count = 0u64;
                for dag in generate(&f, budget)? {
                    writeln!(file, "{dag}").map_err(io_err)?;
                    count += 1;
                }
                file.flush().map_err(io_err)?;
                writeln!(out, "{count}").map_err(io_err)?;
            } else {
                for dag in generate(&f, budget)? {
                    writeln!(out, "{dag}").map_err(io_err)?;
                }
            }
        }
        Command::Count { kind, n, table } => {
            let t = CountTable::build(kind.into(), n);
            if table {
                write!(out, "{}", t.to_csv()).map_err(io_err)?;
            } else {
                writeln!(out, "{}", t.count(n)?).map_err(io_err)?;
            }
        }
        Command::Sequence { family, k, upto, csv } => {
            let values = stream(&seed(k, family.into(), None)?, upto)?;
            if csv {
                writeln!(out, "n,value").map_err(io_err)?;
                for (n, v) in values.iter().enumerate() {
                    writeln!(out, "{n},{v}").map_err(io_err)?;
                }
            } else {
                let joined: Vec<String> = values.iter().map(ToString::to_string).collect();
                writeln!(out, "{}", joined.join(",")).map_err(io_err)?;
            }
        }
        Command::Operator { family, k, latex, plain: _ } => {
            let op = match family {
                OpFamily::L => build_l(k),
                OpFamily::M => build_m(k),
            };
            let text = if latex { op.to_latex() } else { op.to_string() };
            writeln!(out, "{text}").map_err(io_err)?;
        }
        Command::Asymptotics { k, family, fit, upto, emit_plot } => {
            let family: Family = family.into();
            let sd = singularity_data(k, family);
            writeln!(out, "k          {k}").map_err(io_err)?;
            writeln!(out, "family     {family}").map_err(io_err)?;
            writeln!(out, "rho        {:.12}", sd.rho).map_err(io_err)?;
            writeln!(out, "growth     {:.12}", sd.growth).map_err(io_err)?;
            writeln!(out, "delta1     {:.12}", sd.delta1).map_err(io_err)?;
            writeln!(out, "exponent   {:.12}", sd.exponent).map_err(io_err)?;
            let roots: Vec<String> = sd.indicial_roots.iter().map(|r| format!("{r:.6}")).collect();
            writeln!(out, "indicial   {}", roots.join(" ")).map_err(io_err)?;
            if fit {
                let f = fit_constant(k, family, upto)?;
                writeln!(out, "constant   {:.9}", f.estimate).map_err(io_err)?;
                for (n, u) in &f.ladder {
                    writeln!(out, "  u({n}) = {u:.12}").map_err(io_err)?;
                }
                if let Some(w) = &f.warning {
                    eprintln!("warning: {w}");
                }
            }
            if let Some(path) = emit_plot {
                let counts = stream(&seed(k, family, None)?, upto)?;
                let ns: Vec<usize> = (1..=upto).collect();
                let pts = normalized(&counts, &ns, sd.growth, sd.exponent);
                fs::write(path, plot_csv(&pts)).map_err(io_err)?;
            }
        }
        Command::Table1 => {
            let rows = table1();
            write!(out, "{}", format_table1(&rows)).map_err(io_err)?;
            if !rows.iter().all(|r| r.pass()) {
                return Ok(1);
            }
        }
        Command::Selftest => return selftest(out),
    }
    Ok(0)
}

fn selftest(out: &mut (dyn Write + Send)) -> Result<i32> {
    let mut failures = 0;
    let mut check = |out: &mut (dyn Write + Send), name: String, ok: bool| -> Result<()> {
        if !ok {
            failures += 1;
        }
        writeln!(out, "{} {name}", if ok { "ok  " } else { "FAIL" }).map_err(io_err)
    };
    let budget = budget()?;
    for family in [Family::Relaxed, Family::Compacted] {
        let t = CountTable::build(family, 6);
        for n in 0..=5 {
            let brute = count_exhaustive(&GenFilter { n, max_right_height: None, kind: family }, budget)?;
            check(out, format!("{family} n={n}: brute force = table"), t.count(n)? == brute.into())?;
        }
        for k in 0..=3 {
            let values = stream(&seed(k, family, None)?, 5)?;
            let brute_ok = (0..=5).all(|n| {
                let f = GenFilter { n, max_right_height: Some(k), kind: family };
                count_exhaustive(&f, budget).is_ok_and(|c| values[n] == c.into())
            });
            check(out, format!("{family} k={k}: stream = bounded brute force"), brute_ok)?;
            let closed = (0..=20).all(|n| match closed_form_oracle(k, family, n) {
                Ok(v) => stream(&seed(k, family, None).expect("seeded above"), 20)
                    .is_ok_and(|s| s[n] == v.clone().into()),
                Err(_) => true,
            });
            check(out, format!("{family} k={k}: stream = closed form where known"), closed)?;
        }
    }
    for k in 0..=10 {
        check(out, format!("operators k={k}: coefficient identities"), coeff_recurrences_check(k).is_ok())?;
        check(out, format!("operators k={k}: transformed m_(k,k-1)"), transformed_m_check(k))?;
    }
    check(out, "table1 reproduces".into(), table1().iter().all(|r| r.pass()))?;
    writeln!(out, "{}", if failures == 0 { "selftest passed".to_string() } else { format!("selftest: {failures} failures") })
        .map_err(io_err)?;
    Ok(i32::from(failures > 0))
}
