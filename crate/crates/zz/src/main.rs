use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use zigzag::twists::{Mode, Status};
use zigzag::typea::{dual_family, lambda_ds, nakayama_algebra, pi_ds, sign_fix_dual, zigzag_presentation, FamilyKind};
use zigzag::{Field, PresentedAlgebra};
use zz::checks::{self, Ctx, Level, Selection};
use zz::report::{Record, Report};

#[derive(Parser, Debug)]
#[command(name = "zz", version, about = "Exact checks for higher zigzag algebras")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Record wall-clock milliseconds (makes reports machine-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Lambda,
    Pi,
    Zigzag,
    LambdaDual,
    PiDual,
    Nakayama,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DualFamily {
    Lambda,
    Pi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Lifted,
    Direct,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Smoke,
    Desk,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a named algebra and report its dimensions and presentation.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Number of vertices for the Nakayama family.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Table of dim Z^d_s.
    Dims {
        #[arg(long, default_value_t = 4)]
        dmax: usize,
        #[arg(long, default_value_t = 5)]
        smax: usize,
    },
    /// Quadratic dual of a type-A family, its sign fix and projective dimensions.
    Dual {
        #[arg(long, value_enum)]
        family: DualFamily,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
    },
    /// PBW certification for an arrow order.
    Pbw {
        /// `two-ordering` or `lambda`.
        #[arg(long, default_value = "two-ordering")]
        preset: String,
        /// `alphabetical`, `direction-descending`, or arrow names separated by commas.
        #[arg(long, default_value = "alphabetical")]
        order: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        s: usize,
    },
    /// Frobenius form, symmetry and Gorenstein parameter of Z^d_s.
    Frobenius {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
    },
    /// Generators and relations of the group acting through spherical twists.
    Group {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
    },
    /// Verify group relations by twist complexes.
    Twists {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value = "lifted")]
        mode: ModeArg,
        #[arg(long)]
        relation: Option<usize>,
        /// Also check the longest word.
        #[arg(long)]
        longest: bool,
    },
    /// Shift-and-twist check for the longest word.
    Longest {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
    },
    /// McKay quiver and skew group algebra presentation.
    Mckay {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
        #[arg(long)]
        vbar: bool,
        #[arg(long, default_value_t = 3)]
        bound: u32,
        /// Print the .quiver and .alg texts instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Truncation and relation suites on the skew zigzag algebra.
    Equivariant {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
        #[arg(long)]
        s: usize,
    },
    /// Run every acceptance family.
    Suite {
        #[arg(long, value_enum, default_value = "desk")]
        level: LevelArg,
    },
}

enum Outcome {
    Report(Vec<Record>, Option<String>),
    Text(String),
}

fn field_from_env() -> Result<Field, String> {
    match std::env::var("ZZ_FIELD") {
        Ok(v) => Field::parse(&v).ok_or_else(|| format!("ZZ_FIELD must be Q or Fp:p, got {v:?}")),
        Err(_) => Ok(Field::Rationals),
    }
}

fn presented_record(name: String, p: &PresentedAlgebra, extra: serde_json::Value) -> Record {
    let mut data = json!({
        "vertices": p.quiver.num_vertices(),
        "arrows": p.quiver.num_arrows(),
        "relations": p.relations.len(),
        "dim": p.dim(),
        "complete": p.complete,
        "dims_by_degree": p.algebra.dims_by_degree().iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "alg": p.to_text(),
    });
    if let serde_json::Value::Object(m) = extra {
        for (k, v) in m {
            data[k] = v;
        }
    }
    Record::new(name, "plumbing", Status::from_bool(p.complete), data)
}

fn run(cli: &Cli, ctx: &Ctx) -> zigzag::Result<Outcome> {
    let f = ctx.field;
    Ok(match &cli.command {
        Command::Build { family, d, s, n } => {
            let (d, s, n) = (*d, *s, *n);
            let record = match family {
                Family::Lambda => presented_record(format!("build.lambda.d{d}s{s}"), &lambda_ds(d, s, f)?.presentation, json!({})),
                Family::Pi => presented_record(format!("build.pi.d{d}s{s}"), &pi_ds(d, s, f)?.presentation, json!({})),
                Family::Zigzag => presented_record(format!("build.zigzag.d{d}s{s}"), &zigzag_presentation(d, s, f)?.presentation, json!({})),
                Family::LambdaDual => presented_record(
                    format!("build.lambda-dual.d{d}s{s}"),
                    &dual_family(FamilyKind::Lambda, d, s, f)?.presentation,
                    json!({}),
                ),
                Family::PiDual => {
                    presented_record(format!("build.pi-dual.d{d}s{s}"), &dual_family(FamilyKind::Pi, d, s, f)?.presentation, json!({}))
                }
                Family::Nakayama => presented_record(format!("build.nakayama.n{n}"), &nakayama_algebra(n, None, f)?, json!({})),
            };
            Outcome::Report(vec![record], None)
        }
        Command::Dims { dmax, smax } => {
            let (records, text) = checks::dims(ctx, *dmax, *smax)?;
            Outcome::Report(records, Some(text))
        }
        Command::Dual { family, d, s } => {
            let kind = match family {
                DualFamily::Lambda => FamilyKind::Lambda,
                DualFamily::Pi => FamilyKind::Pi,
            };
            let sf = sign_fix_dual(kind, *d, *s, f)?;
            let extra = json!({
                "sign_fix_is_morphism": sf.morphism.is_ok(),
                "sign_fix_bijective": sf.bijective,
            });
            let label = match kind {
                FamilyKind::Lambda => "lambda",
                FamilyKind::Pi => "pi",
            };
            let mut r = presented_record(format!("dual.{label}.d{d}s{s}"), &sf.source.presentation, extra);
            r.status = Status::from_bool(sf.bijective || !sf.source.presentation.complete).label().to_string();
            let mut records = vec![r];
            records.extend(checks::projective_formulas(ctx, *d, *s)?.into_iter().filter(|r| r.name.ends_with(&format!("d{d}s{s}"))));
            Outcome::Report(records, None)
        }
        Command::Pbw { preset, order, d, s } => match preset.as_str() {
            "two-ordering" => Outcome::Report(vec![checks::pbw_two_ordering(ctx, order, None)?], None),
            "lambda" => {
                let order = if order == "alphabetical" { "direction-descending" } else { order.as_str() };
                Outcome::Report(vec![checks::pbw_lambda(ctx, *d, *s, order)?], None)
            }
            other => return Err(zigzag::Error::Invalid(format!("unknown preset {other}"))),
        },
        Command::Frobenius { d, s } => Outcome::Report(checks::frobenius(ctx, &[(*d, *s)])?, None),
        Command::Group { d, s } => Outcome::Report(vec![checks::group_dump(*d, *s)?], None),
        Command::Twists { d, s, mode, relation, longest } => {
            let mode = match mode {
                ModeArg::Lifted => Mode::Lifted,
                ModeArg::Direct => Mode::Direct,
            };
            let selection = relation.map_or(Selection::All, Selection::One);
            let mut records = vec![checks::group_relations(ctx, *d, *s, mode, selection)?];
            if *longest {
                records.extend(checks::longest(ctx, &[(*d, *s)])?);
            }
            Outcome::Report(records, None)
        }
        Command::Longest { d, s } => Outcome::Report(checks::longest(ctx, &[(*d, *s)])?, None),
        Command::Mckay { orders, vbar, bound, text } => {
            let (record, quiver, alg) = checks::mckay_texts(orders, *vbar, *bound)?;
            if *text {
                Outcome::Text(format!("{quiver}\n{alg}"))
            } else {
                Outcome::Report(vec![record], None)
            }
        }
        Command::Equivariant { orders, s } => {
            let d = orders.len();
            let mut records = checks::truncations(ctx, &[(d, orders.clone(), *s)])?;
            records.push(checks::equivariant(ctx, orders, *s)?);
            Outcome::Report(records, None)
        }
        Command::Suite { level } => {
            let level = match level {
                LevelArg::Smoke => Level::Smoke,
                LevelArg::Desk => Level::Desk,
            };
            Outcome::Report(checks::suite(ctx, level)?, None)
        }
    })
}

/// The invocation with global output flags removed, used for the input digest.
fn canonical_args() -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for a in std::env::args().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a == "--timings" {
            continue;
        }
        out.push(a);
    }
    out.join(" ")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Dims { .. } => "dims",
        Command::Dual { .. } => "dual",
        Command::Pbw { .. } => "pbw",
        Command::Frobenius { .. } => "frobenius",
        Command::Group { .. } => "group",
        Command::Twists { .. } => "twists",
        Command::Longest { .. } => "longest",
        Command::Mckay { .. } => "mckay",
        Command::Equivariant { .. } => "equivariant",
        Command::Suite { .. } => "suite",
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match field_from_env() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("zz: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx { field, seed: cli.seed, timings: cli.timings };
    let outcome = match run(&cli, &ctx) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("zz: {e}");
            return ExitCode::from(2);
        }
    };
    match outcome {
        Outcome::Text(text) => {
            if let Err(e) = emit(&cli, &text) {
                eprintln!("zz: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Outcome::Report(records, table) => {
            let report = Report::new(command_name(&cli.command), &canonical_args(), &field.to_string(), cli.seed, records);
            if let Some(t) = table {
                eprint!("{t}");
            }
            eprint!("{}", report.summary());
            if let Err(e) = emit(&cli, &report.to_json()) {
                eprintln!("zz: {e}");
                return ExitCode::from(2);
            }
            if report.any_failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
