//! Command-line front end. Every subcommand parses its input, calls the
//! library and prints text or JSON.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bracket::{jones, linking_number};
use crate::catalog::{
    bundled_catalog, classify, find, hints_for, load_catalog, reproduce_tables, CatalogEntry,
    SCHEMA_VERSION,
};
use crate::diagram::{parse_diagram, AnyDiagram, LinkDiagram, TangleDiagram};
use crate::expr::{evaluate, parse_expr, TangleExpr};
use crate::fraction::Fraction;
use crate::poly::Gaussian;
use crate::quandle::{
    c_coloring_count, color_solve_dihedral, color_solve_dihedral_link, coloring_fraction,
    determinant, monochromatic_report, nontrivial_c_colorings, parse_table, FiniteTable, Quandle,
};

#[derive(Parser, Debug)]
#[command(
    name = "tangle",
    version,
    about = "Unknotting, unlinking and splitting closures of 2-string tangles"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Catalog directory with a manifest.toml; the bundled catalog by default.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rational tangle arithmetic.
    Frac {
        #[command(subcommand)]
        op: FracOp,
    },
    /// Unknottable / unlinkable / splittable verdict of a tangle expression.
    Verdict { expression: String },
    /// Dihedral or finite-quandle colorings.
    Color {
        input: String,
        /// Dihedral modulus; 0 means the integer colorings.
        #[arg(long)]
        modulus: Option<u64>,
        /// `z2t` or a quandle table file.
        #[arg(long, conflicts_with = "modulus")]
        quandle: Option<String>,
    },
    /// Coloring fraction of a tangle.
    FractionInvariant { input: String },
    /// Jones polynomial.
    Jones {
        #[command(flatten)]
        closure: ClosureArgs,
        /// Evaluate at this value of t, e.g. `-1` or `2+i`.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Determinant.
    Det {
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// Linking number of a 2-component link.
    Linking {
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// Classify a catalog entry or any tangle.
    Classify {
        input: String,
        /// Treat an ad hoc tangle as essential.
        #[arg(long)]
        essential: bool,
    },
    /// Classify the whole catalog and compare with the reference sets.
    Reproduce {
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FracOp {
    Normalize {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    Rotate {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    Mirror {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    Add {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Continued fraction terms.
    Cf {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// 2-bridge link of the numerator (or denominator) closure.
    TwoBridge {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        denominator: bool,
    },
}

#[derive(Args, Debug)]
struct ClosureArgs {
    /// `@name`, a diagram file or a tangle expression.
    input: String,
    /// How a tangle is closed.
    #[arg(long, value_enum, default_value_t = Closure::Numerator)]
    closure: Closure,
    /// Rational tangle added before closing.
    #[arg(long, allow_hyphen_values = true)]
    plus: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Closure {
    Numerator,
    Denominator,
}

/// A usage-level failure: bad input, unreadable file, unknown entry.
#[derive(Debug)]
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Output {
            text: text.into(),
            json,
            code: 0,
        }
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let body = match cli.format {
                Format::Text => o.text,
                Format::Json => {
                    let doc = json!({ "schema": SCHEMA_VERSION, "command": command_name(&cli.command), "result": o.json });
                    serde_json::to_string_pretty(&doc).expect("json") + "\n"
                }
            };
            let _ = write!(out, "{body}");
            o.code
        }
        Err(Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Frac { .. } => "frac",
        Command::Verdict { .. } => "verdict",
        Command::Color { .. } => "color",
        Command::FractionInvariant { .. } => "fraction-invariant",
        Command::Jones { .. } => "jones",
        Command::Det { .. } => "det",
        Command::Linking { .. } => "linking",
        Command::Classify { .. } => "classify",
        Command::Reproduce { .. } => "reproduce",
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn catalog(cli: &Cli) -> Result<Vec<CatalogEntry>, Usage> {
    Ok(match &cli.catalog {
        Some(dir) => load_catalog(dir)?,
        None => bundled_catalog()?,
    })
}

fn frac(s: &str) -> Result<Fraction, Usage> {
    s.parse::<Fraction>()
        .map_err(|e| Usage(format!("{s}: {e}")))
}

enum Input {
    Entry(CatalogEntry),
    Diagram(AnyDiagram),
    Expression(TangleExpr, TangleDiagram),
}

fn read_input(cli: &Cli, s: &str) -> Result<Input, Usage> {
    if let Some(name) = s.strip_prefix('@') {
        if !name.contains(|c: char| "+*()".contains(c)) {
            let cat = catalog(cli)?;
            return Ok(Input::Entry(find(&cat, name)?.clone()));
        }
    }
    let path = Path::new(s);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{s}: {e}")))?;
        return Ok(Input::Diagram(
            parse_diagram(&text).map_err(|e| Usage(format!("{s}: {e}")))?,
        ));
    }
    let expr = parse_expr(s).map_err(|e| Usage(format!("{s}: {e}")))?;
    let cat = if expr.references().is_empty() {
        Vec::new()
    } else {
        catalog(cli)?
    };
    let resolve = |name: &str| find(&cat, name).ok().map(|e| e.diagram.clone());
    let d = TangleDiagram::from_expression(&expr, &resolve)?;
    d.validate()?;
    Ok(Input::Expression(expr, d))
}

fn tangle_input(cli: &Cli, s: &str) -> Result<TangleDiagram, Usage> {
    match read_input(cli, s)? {
        Input::Entry(e) => Ok(e.diagram),
        Input::Diagram(d) => Ok(d.into_tangle()?),
        Input::Expression(_, d) => Ok(d),
    }
}

fn link_input(cli: &Cli, args: &ClosureArgs) -> Result<LinkDiagram, Usage> {
    let tangle = match read_input(cli, &args.input)? {
        Input::Diagram(AnyDiagram::Link(l)) => {
            if args.plus.is_some() {
                return Err(Usage("--plus needs a tangle".into()));
            }
            return Ok(l);
        }
        Input::Diagram(d) => d.into_tangle()?,
        Input::Entry(e) => e.diagram,
        Input::Expression(_, d) => d,
    };
    let tangle = match &args.plus {
        Some(f) => tangle.plus(&frac(f)?),
        None => tangle,
    };
    Ok(match args.closure {
        Closure::Numerator => tangle.close_numerator(),
        Closure::Denominator => tangle.close_denominator(),
    })
}

fn dispatch(cli: &Cli) -> Result<Output, Usage> {
    match &cli.command {
        Command::Frac { op } => frac_command(op),
        Command::Verdict { expression } => {
            let expr = parse_expr(expression)?;
            let cat = if expr.references().is_empty() {
                Vec::new()
            } else {
                catalog(cli)?
            };
            let hints = hints_for(&expr, &cat)?;
            let v = evaluate(&expr, &hints)?;
            Ok(Output::ok(v.to_string(), to_json(&v)))
        }
        Command::Color {
            input,
            modulus,
            quandle,
        } => color_command(cli, input, *modulus, quandle.as_deref()),
        Command::FractionInvariant { input } => {
            let d = tangle_input(cli, input)?;
            let f = coloring_fraction(&d);
            Ok(Output::ok(format!("{f}\n"), to_json(&f)))
        }
        Command::Jones { closure, at } => {
            let l = link_input(cli, closure)?;
            let v = jones(&l, &vec![false; l.component_count()])?;
            match at {
                None => Ok(Output::ok(format!("{v}\n"), to_json(&v))),
                Some(z) => {
                    let z: Gaussian = z.parse().map_err(|e| Usage(format!("{z}: {e}")))?;
                    let value = v.eval_t(&z)?;
                    Ok(Output::ok(
                        format!("{value}\n"),
                        json!({ "polynomial": to_json(&v), "at": z.to_string(), "value": value.to_string() }),
                    ))
                }
            }
        }
        Command::Det { closure } => {
            let l = link_input(cli, closure)?;
            let d = determinant(&l);
            Ok(Output::ok(
                format!("{d}\n"),
                json!({ "determinant": d.to_string() }),
            ))
        }
        Command::Linking { closure } => {
            let l = link_input(cli, closure)?;
            let lk = linking_number(&l, &[false, false])?;
            Ok(Output::ok(
                format!("{lk}\n"),
                json!({ "linking_number": lk }),
            ))
        }
        Command::Classify { input, essential } => {
            let cat = catalog(cli)?;
            let entry = match read_input(cli, input)? {
                Input::Entry(e) => e,
                Input::Diagram(d) => {
                    CatalogEntry::from_diagram(input, d.into_tangle()?, None, *essential)
                }
                Input::Expression(e, d) => {
                    CatalogEntry::from_diagram(input, d, Some(e), *essential)
                }
            };
            let v = classify(&entry, &cat);
            Ok(Output::ok(
                format!("{}\n{v}", entry.name),
                json!({ "name": entry.name, "verdict": to_json(&v) }),
            ))
        }
        Command::Reproduce { out, verbose } => {
            let cat = catalog(cli)?;
            let report = reproduce_tables(&cat);
            let json = to_json(&report);
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&json).expect("json") + "\n";
                std::fs::write(path, text)
                    .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            }
            Ok(Output {
                text: report.to_text(*verbose),
                json,
                code: if report.matches { 0 } else { 1 },
            })
        }
    }
}

fn frac_command(op: &FracOp) -> Result<Output, Usage> {
    let one = |f: Fraction| Output::ok(format!("{f}\n"), json!({ "fraction": f.to_string() }));
    Ok(match op {
        FracOp::Normalize { x } => one(frac(x)?),
        FracOp::Rotate { x } => one(frac(x)?.rotate()),
        FracOp::Mirror { x } => one(frac(x)?.mirror()),
        FracOp::Add { x, y } => {
            let (a, b) = (frac(x)?, frac(y)?);
            let sum = a
                .checked_add(&b)
                .ok_or_else(|| Usage(format!("[{a}] + [{b}] is not a rational tangle")))?;
            one(sum)
        }
        FracOp::Cf { x } => {
            let terms = frac(x)?.continued_fraction()?;
            let text: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
            Output::ok(format!("{}\n", text.join(" ")), json!({ "terms": text }))
        }
        FracOp::TwoBridge { x, denominator } => {
            let f = frac(x)?;
            let b = if *denominator {
                f.denominator_two_bridge()
            } else {
                f.numerator_two_bridge()
            };
            let kind = match b.components() {
                _ if b.is_unknot() => " (unknot)",
                _ if b.is_unlink() => " (2-component unlink)",
                1 => " (knot)",
                _ => " (2-component link)",
            };
            Output::ok(format!("b({}, {}){kind}\n", b.alpha, b.beta), to_json(&b))
        }
    })
}

fn quandle_table(spec: &str) -> Result<FiniteTable, Usage> {
    if spec == "z2t" {
        return Ok(Quandle::z2t().table()?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Usage(format!("{spec}: {e}")))?;
    Ok(parse_table(&text)?)
}

fn color_command(
    cli: &Cli,
    input: &str,
    modulus: Option<u64>,
    quandle: Option<&str>,
) -> Result<Output, Usage> {
    let any = match read_input(cli, input)? {
        Input::Entry(e) => AnyDiagram::Tangle(e.diagram),
        Input::Diagram(d) => d,
        Input::Expression(_, d) => AnyDiagram::Tangle(d),
    };
    if let Some(spec) = quandle {
        let q = quandle_table(spec)?;
        let AnyDiagram::Tangle(d) = any else {
            return Err(Usage(
                "finite quandle colorings are computed for tangles".into(),
            ));
        };
        let mut text = String::new();
        let mut rows = Vec::new();
        for mask in d.orientations() {
            let found = nontrivial_c_colorings(&d, &mask, &q);
            let label: String = mask.iter().map(|&r| if r { 'r' } else { '+' }).collect();
            text.push_str(&format!(
                "orientation {label}: {} nontrivial c-colorings\n",
                found.len()
            ));
            if let Some(first) = found.first() {
                text.push_str(&format!("  e.g. {first:?}\n"));
            }
            rows.push(json!({ "orientation": label, "count": found.len(), "colorings": found }));
        }
        return Ok(Output::ok(
            text,
            json!({ "quandle": spec, "orientations": rows }),
        ));
    }
    match (any, modulus) {
        (AnyDiagram::Tangle(d), None) => {
            let r = monochromatic_report(&d);
            let text = format!(
                "c-trivial for all moduli: {}\noffending moduli: {}\nR_0-monochromatic: {}\ncoloring fraction: {}\n",
                r.c_trivial_for_all_n,
                r.offending_moduli,
                r.r0_monochromatic,
                coloring_fraction(&d)
            );
            Ok(Output::ok(text, to_json(&r)))
        }
        (AnyDiagram::Tangle(d), Some(n)) => {
            let lat = color_solve_dihedral(&d, n);
            let count = lat
                .count()
                .map_or("infinite".to_string(), |c| c.to_string());
            let c = c_coloring_count(&d, n);
            let text = format!(
                "R_{n} colorings: {count}\nc-colorings: {c}\nfree rank: {}\n",
                lat.free_rank()
            );
            Ok(Output::ok(
                text,
                json!({ "modulus": n, "colorings": count, "c_colorings": c.to_string(), "free_rank": lat.free_rank() }),
            ))
        }
        (AnyDiagram::Link(l), n) => {
            let n = n.unwrap_or(0);
            let lat = color_solve_dihedral_link(&l, n);
            let count = lat
                .count()
                .map_or("infinite".to_string(), |c| c.to_string());
            let text = format!("R_{n} colorings: {count}\nfree rank: {}\n", lat.free_rank());
            Ok(Output::ok(
                text,
                json!({ "modulus": n, "colorings": count, "free_rank": lat.free_rank() }),
            ))
        }
    }
}
