//! `shakecert` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shakecert::engine::{propagate, ExternalFact, FactStore, Query};
use shakecert::exec::Exec;
use shakecert::family::{family_table, per_term, Path};
use shakecert::front::{builtin_front, builtin_front_names, random_front, validate, FrontWord, OrientedFront};
use shakecert::gluing::{build_gluings, compare, Comparison};
use shakecert::legendrian::LegWitness;
use shakecert::shake::satellite_shake;
use shakecert::verdict::shake_slice_verdict;
use shakecert::{parse_expr, report, Error, KnotExpr, Registry};

#[derive(Parser)]
#[command(name = "shakecert", version, about = "Certified shake-genus and concordance bounds for knot expressions")]
struct Cli {
    /// Pattern registry (JSON); defaults to the shipped one.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Propagate bounds for an expression.
    Eval {
        expr: String,
        /// Framings to report the shake genus for (repeatable or comma separated).
        #[arg(long = "r", value_delimiter = ',', allow_hyphen_values = true)]
        r: Vec<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Print the derivation tree of a trace id.
        #[arg(long)]
        explain: Option<usize>,
        /// Report every subexpression.
        #[arg(long)]
        all: bool,
        /// Assert an expression is slice.
        #[arg(long)]
        slice: Vec<String>,
        /// Assert `EXPR@R`: EXPR is R-suitable.
        #[arg(long)]
        suitable: Vec<String>,
        /// Assert `EXPR@TB,ROT`: a Legendrian representative.
        #[arg(long)]
        legendrian: Vec<String>,
        /// Propagate with a shuffled rule order from this seed.
        #[arg(long)]
        shuffle: Option<u64>,
    },
    /// Invariants of the iterates P^i_r(base).
    Table {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        base: String,
        #[arg(long = "r", allow_negative_numbers = true)]
        r: i64,
        #[arg(long)]
        iters: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Skip the closed form.
        #[arg(long)]
        per_term: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Is the expression r-shake slice?
    Verdict {
        expr: String,
        #[arg(long = "r", allow_negative_numbers = true)]
        r: i64,
        /// Pattern Q with ribbon Q(U) whose satellite Q_r(EXPR) is slice.
        #[arg(long)]
        witness: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        explain: Option<usize>,
    },
    /// Compute tb and rot of Legendrian fronts.
    Oracle {
        /// Front file; see the fixture format.
        file: Option<PathBuf>,
        /// Shipped front by name.
        #[arg(long)]
        builtin: Option<String>,
        /// Generate this many random fronts instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the gluings of P_s(Q_r(K)) and (P_{s-r} * Q)_r(K).
    CompareGluings {
        /// Pattern name or `w=N`.
        p: String,
        /// Pattern name or `w=N`.
        q: String,
        #[arg(long = "r", allow_negative_numbers = true)]
        r: i64,
        #[arg(long = "s", allow_negative_numbers = true)]
        s: Option<i64>,
        #[arg(long)]
        verbose: bool,
    },
    /// Inspect the pattern registry.
    Registry {
        #[command(subcommand)]
        action: RegistryCmd,
    },
    /// Shake concordance certificate P_r(K) ~ K.
    Shake {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        knot: String,
        #[arg(long = "r", allow_negative_numbers = true)]
        r: i64,
    },
}

#[derive(Subcommand)]
enum RegistryCmd {
    List,
    /// Check a registry file (the active one if omitted).
    Validate { file: Option<PathBuf> },
}

enum Failure {
    Contradiction(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Contradiction(c) => Failure::Contradiction(format!("{c}\n{}", c.explanation)),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Out = Result<String, Failure>;

fn split_at_sign(s: &str) -> Result<(&str, &str), Failure> {
    s.rsplit_once('@')
        .ok_or_else(|| Failure::Usage(format!("expected EXPR@VALUE, got `{s}`")))
}

fn int(s: &str) -> Result<i64, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("expected an integer, got `{s}`")))
}

fn explain(st: &FactStore, id: usize) -> Out {
    st.trace
        .explain(id)
        .ok_or_else(|| Failure::Usage(format!("no trace node #{id}")))
}

fn winding(reg: &Registry, s: &str) -> Result<i64, Failure> {
    match s.strip_prefix("w=") {
        Some(n) => int(n),
        None => reg
            .get(s)
            .map(|p| p.w)
            .ok_or_else(|| Failure::Usage(format!("unknown pattern `{s}`"))),
    }
}

fn front_line(name: &str, f: &OrientedFront) -> String {
    let (tb, rot) = f.tb_rot();
    format!(
        "{name}: tb = {tb}, rot = {rot}, writhe = {}, right cusps = {}\n",
        f.writhe(),
        f.right_cusps()
    )
}

fn run(cli: Cli) -> Out {
    let reg = match &cli.registry {
        Some(p) => Registry::load(p)?,
        None => Registry::builtin(),
    };
    match cli.cmd {
        Cmd::Eval {
            expr,
            r,
            format,
            explain: ex,
            all,
            slice,
            suitable,
            legendrian,
            shuffle,
        } => {
            let e = parse_expr(&expr, &reg)?;
            let mut q = Query::at(r.clone());
            for s in &slice {
                q.externals.push(ExternalFact::Slice(parse_expr(s, &reg)?));
            }
            for s in &suitable {
                let (x, v) = split_at_sign(s)?;
                q.externals.push(ExternalFact::Suitable(parse_expr(x, &reg)?, int(v)?));
            }
            for s in &legendrian {
                let (x, v) = split_at_sign(s)?;
                let (tb, rot) = v
                    .split_once(',')
                    .ok_or_else(|| Failure::Usage(format!("expected TB,ROT, got `{v}`")))?;
                let w = LegWitness::new(int(tb)?, int(rot)?)?;
                q.externals.push(ExternalFact::Witness(parse_expr(x, &reg)?, w));
            }
            if let Some(seed) = shuffle {
                q.order = shakecert::Order::Shuffled(seed);
            }
            let st = propagate(&e, &reg, &q)?;
            if let Some(id) = ex {
                return explain(&st, id);
            }
            Ok(match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report::json(&st, &r)).expect("json")),
                _ => report::text(&st, &r, all),
            })
        }
        Cmd::Table {
            pattern,
            base,
            r,
            iters,
            format,
            per_term: force,
            sequential,
        } => {
            let base = parse_expr(&base, &reg)?;
            let exec = if sequential { Exec::Sequential } else { Exec::default() };
            let mut t = family_table(&reg, &pattern, &base, r, iters, exec)?;
            if force && t.path == Path::ClosedForm {
                t.rows = per_term(&reg, &pattern, &base, r, iters, exec)?;
                t.path = Path::PerTerm;
            }
            Ok(match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&t).expect("json")),
                Format::Csv => t.to_csv(),
                Format::Text => {
                    let mut s = format!("{pattern}^i_{r}({}), path: {:?}\n", t.base, t.path);
                    if let Some(d) = &t.diagnostic {
                        s.push_str(&format!("closed form unavailable: {d}\n"));
                    }
                    s + &t.to_csv()
                }
            })
        }
        Cmd::Verdict {
            expr,
            r,
            witness,
            format,
            explain: ex,
        } => {
            let e = parse_expr(&expr, &reg)?;
            let (v, st) = shake_slice_verdict(&e, r, &reg, witness.as_deref(), &[])?;
            if let Some(id) = ex {
                return explain(&st, id);
            }
            Ok(match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&v).expect("json")),
                _ => format!("{} at r = {r}: {v}\n", st.node(st.root()).expr),
            })
        }
        Cmd::Oracle {
            file,
            builtin,
            random,
            seed,
        } => {
            let mut out = String::new();
            if let Some(path) = file {
                let text = std::fs::read_to_string(&path).map_err(Error::from)?;
                let word: FrontWord = text.parse()?;
                out += &front_line(&path.display().to_string(), &validate(&word)?);
            }
            if let Some(name) = builtin {
                out += &front_line(&name, &builtin_front(&name)?);
            }
            if let Some(n) = random {
                for i in 0..n as u64 {
                    let f = random_front(seed.wrapping_add(i), 8);
                    let word: Vec<String> = f.word.events.iter().map(|e| e.to_string()).collect();
                    out += &front_line(&format!("random[{}] {}", seed.wrapping_add(i), word.join("; ")), &f);
                }
            }
            if out.is_empty() {
                for name in builtin_front_names() {
                    out += &front_line(name, &builtin_front(name)?);
                }
            }
            Ok(out)
        }
        Cmd::CompareGluings { p, q, r, s, verbose } => {
            let (wp, wq) = (winding(&reg, &p)?, winding(&reg, &q)?);
            let s = s.unwrap_or(r);
            let (a, b) = build_gluings(wp, wq, r, s);
            let mut out = String::new();
            if verbose {
                for (label, g) in [("iterated", &a), ("composed", &b)] {
                    out += &format!("{label}:\n");
                    for i in &g.interfaces {
                        out += &format!("  [{}] {} ~ {}\n", i.name, i.meridian.lhs, i.meridian.rhs);
                        out += &format!("  [{}] {} ~ {}\n", i.name, i.longitude.lhs, i.longitude.rhs);
                    }
                    out += &format!("  outer longitude {}\n", g.outer_longitude);
                }
            }
            out += &match compare(&a, &b) {
                Comparison::Equal => format!("equal (w(P) = {wp}, w(Q) = {wq}, r = {r}, s = {s})\n"),
                Comparison::Mismatch { interface, difference } => {
                    format!("mismatch at {interface}: {difference} (w(P) = {wp}, w(Q) = {wq}, r = {r}, s = {s})\n")
                }
            };
            Ok(out)
        }
        Cmd::Registry { action } => match action {
            RegistryCmd::List => Ok(reg
                .patterns()
                .map(|p| {
                    let opt = |v: Option<i64>| v.map_or("?".to_string(), |x| x.to_string());
                    format!(
                        "{}: w = {}, n = {}, g4 in [{}, {}], diagrams {:?}\n",
                        p.name,
                        p.w,
                        opt(p.n_geom),
                        opt(p.g4_lo),
                        opt(p.g4_hi),
                        p.leg_pairs
                    )
                })
                .collect()),
            RegistryCmd::Validate { file } => {
                let checked = match file {
                    Some(f) => Registry::load(&f)?,
                    None => reg,
                };
                Ok(format!("ok: {} patterns\n", checked.patterns().count()))
            }
        },
        Cmd::Shake { pattern, knot, r } => {
            let p = reg
                .get(&pattern)
                .ok_or_else(|| Failure::Usage(format!("unknown pattern `{pattern}`")))?;
            let k: KnotExpr = parse_expr(&knot, &reg)?;
            Ok(format!("{}\n", satellite_shake(p, &k, r)?.to_json()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Contradiction(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
