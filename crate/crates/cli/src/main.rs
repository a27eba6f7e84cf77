use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use planes_core::klein::{genus_context_if_applicable, klein_record};
use planes_core::lattice::enumerate_planes;
use planes_core::qform::class_group;
use planes_core::repnum::{count_record, rs3_coeffs};
use planes_core::verify::{run_all, run_check, Bounds, Check, CheckReport};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "planes", version, about = "Planes in Z^4, their counts, forms and local identities")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report to FILE instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    out: Option<String>,

    /// Largest discriminant accepted by any command.
    #[arg(long, env = "PLANES_MAX_DISC", default_value_t = 500, global = true)]
    max_disc: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// r24(d) by formula and by enumeration.
    Count {
        #[arg(long)]
        disc: u64,
    },
    /// All planes with Gram determinant `disc`.
    Enumerate {
        #[arg(long)]
        disc: u64,
    },
    /// Klein pairs and CM points of every plane of discriminant `-4·disc`.
    Klein {
        #[arg(long)]
        disc: u64,
    },
    /// Class group of a negative discriminant, e.g. `--disc -56`.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Coefficients and value of the series Σ r24(d) d^{-w} over d ≡ 3 (mod 4).
    Series {
        #[arg(long)]
        dmax: u64,
        #[arg(long)]
        w: f64,
    },
    /// Run a verification suite.
    Verify {
        /// `all` or one check name.
        suite: String,
        #[arg(long)]
        fmax: Option<u64>,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        prime_cutoff: Option<u64>,
        #[arg(long)]
        dmax: Option<u64>,
        #[arg(long)]
        w: Option<f64>,
    },
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

struct Report {
    json: Value,
    table: Option<Table>,
    text: String,
    ok: bool,
}

enum Failure {
    Usage(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_disc(disc: u64, max: u64) -> Result<(), Failure> {
    if disc == 0 {
        return Err(usage("--disc must be positive"));
    }
    if disc > max {
        return Err(usage(format!("--disc {disc} exceeds the maximum {max} (raise with --max-disc or PLANES_MAX_DISC)")));
    }
    Ok(())
}

fn count(disc: u64) -> Result<Report, Failure> {
    let rec = count_record(disc).map_err(|e| usage(e.to_string()))?;
    Ok(Report {
        json: serde_json::to_value(rec).unwrap(),
        table: Some(Table {
            header: vec!["d", "r24_formula", "r24_oracle", "agree"],
            rows: vec![vec![rec.d.to_string(), rec.r24_formula.to_string(), rec.r24_oracle.to_string(), rec.agree.to_string()]],
        }),
        text: format!("d = {}: formula {}, enumeration {}, agree {}", rec.d, rec.r24_formula, rec.r24_oracle, rec.agree),
        ok: rec.agree,
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn enumerate(disc: u64) -> Report {
    let records: Vec<_> = enumerate_planes(disc).iter().map(|p| p.to_record()).collect();
    let rows = records
        .iter()
        .map(|r| vec![join(&r.plucker), join(&r.basis[0]), join(&r.basis[1]), r.disc.to_string()])
        .collect();
    let text = records
        .iter()
        .map(|r| format!("{:?}  basis {:?} {:?}", r.plucker, r.basis[0], r.basis[1]))
        .collect::<Vec<_>>()
        .join("\n");
    Report {
        json: json!({ "n": disc, "count": records.len(), "planes": records }),
        table: Some(Table { header: vec!["plucker", "u", "v", "disc"], rows }),
        text: format!("{} planes with n = {disc}\n{text}", records.len()),
        ok: true,
    }
}

fn klein(disc: u64) -> Result<Report, Failure> {
    let ctx = genus_context_if_applicable(disc).map_err(|e| usage(e.to_string()))?;
    let records = enumerate_planes(disc)
        .iter()
        .map(|p| klein_record(p, ctx.as_ref()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(e.to_string()))?;
    let fmt_opt = |r: Option<bool>| r.map_or(String::new(), |b| b.to_string());
    let rows = records
        .iter()
        .map(|r| {
            let mut row = vec![join(&r.plucker), join(&r.klein[0]), join(&r.klein[1])];
            row.extend(r.cm.iter().map(|f| join(f)));
            row.push(fmt_opt(r.realizable));
            row
        })
        .collect();
    let text = records
        .iter()
        .map(|r| format!("{:?}  a1 {:?} a2 {:?}  cm {:?}", r.plucker, r.klein[0], r.klein[1], r.cm))
        .collect::<Vec<_>>()
        .join("\n");
    let ok = records.iter().all(|r| r.realizable != Some(false));
    Ok(Report {
        json: json!({ "n": disc, "count": records.len(), "planes": records }),
        table: Some(Table { header: vec!["plucker", "a1", "a2", "z1", "z2", "z3", "z4", "realizable"], rows }),
        text: format!("{} planes with n = {disc}\n{text}", records.len()),
        ok,
    })
}

fn classgroup(disc: i64, max: u64) -> Result<Report, Failure> {
    if disc.unsigned_abs() > 4 * max {
        return Err(usage(format!("|--disc| must be at most {}", 4 * max)));
    }
    let g = class_group(disc).map_err(|e| usage(e.to_string()))?;
    let rec = g.to_record();
    let genus_of = |i: usize| rec.genera.iter().position(|gen| gen.contains(&i)).unwrap();
    let rows = rec
        .forms
        .iter()
        .enumerate()
        .map(|(i, f)| vec![i.to_string(), f[0].to_string(), f[1].to_string(), f[2].to_string(), genus_of(i).to_string()])
        .collect();
    let text = format!(
        "Cl({disc}): order {}, {} genera\n{}",
        rec.forms.len(),
        rec.genera.len(),
        rec.forms.iter().map(|f| format!("({}, {}, {})", f[0], f[1], f[2])).collect::<Vec<_>>().join("\n")
    );
    Ok(Report {
        json: serde_json::to_value(&rec).unwrap(),
        table: Some(Table { header: vec!["index", "a", "b", "c", "genus"], rows }),
        text,
        ok: true,
    })
}

fn series(dmax: u64, w: f64) -> Result<Report, Failure> {
    if !(w > 1.0) {
        return Err(usage("--w must exceed 1"));
    }
    let c = rs3_coeffs(dmax);
    let value = c.eval(w);
    let coeffs: Vec<Value> = c.iter().map(|(d, a)| json!({ "d": d, "r24": a.to_string() })).collect();
    let rows = c.iter().map(|(d, a)| vec![d.to_string(), a.to_string()]).collect();
    Ok(Report {
        json: json!({ "dmax": dmax, "w": w, "value": value, "coeffs": coeffs }),
        table: Some(Table { header: vec!["d", "r24"], rows }),
        text: format!(
            "sum over d <= {dmax}, d = 3 mod 4, of r24(d) d^-{w} = {value}\n{}",
            c.iter().map(|(d, a)| format!("{d}: {a}")).collect::<Vec<_>>().join("\n")
        ),
        ok: true,
    })
}

fn verify(suite: &str, bounds: Bounds) -> Result<Report, Failure> {
    let reports: Vec<CheckReport> = if suite == "all" {
        run_all(&bounds)
    } else {
        let check: Check = suite.parse().map_err(|_| {
            let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
            usage(format!("unknown suite {suite:?}; expected all or one of: {}", names.join(", ")))
        })?;
        vec![run_check(check, &bounds)]
    };
    let ok = reports.iter().all(CheckReport::passed);
    let status = |r: &CheckReport| if r.passed() { "pass" } else { "fail" };
    let rows = reports.iter().map(|r| vec![r.check.clone(), status(r).to_string()]).collect();
    let text = reports
        .iter()
        .map(|r| format!("[{}] {}", status(r).to_uppercase(), r.check))
        .collect::<Vec<_>>()
        .join("\n");
    let json = if suite == "all" {
        json!({ "passed": ok, "reports": reports })
    } else {
        serde_json::to_value(&reports[0]).unwrap()
    };
    Ok(Report { json, table: Some(Table { header: vec!["check", "status"], rows }), text, ok })
}

fn render(report: &Report, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&report.json).unwrap() + "\n"),
        Format::Text => Ok(report.text.clone() + "\n"),
        Format::Csv => {
            let table = report.table.as_ref().ok_or_else(|| usage("csv output is not available for this command"))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).unwrap();
            for row in &table.rows {
                w.write_record(row).unwrap();
            }
            Ok(String::from_utf8(w.into_inner().unwrap()).unwrap())
        }
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let max = cli.max_disc;
    match cli.command {
        Command::Count { disc } => {
            check_disc(disc, max)?;
            count(disc)
        }
        Command::Enumerate { disc } => {
            check_disc(disc, max)?;
            Ok(enumerate(disc))
        }
        Command::Klein { disc } => {
            check_disc(disc, max)?;
            klein(disc)
        }
        Command::Classgroup { disc } => classgroup(disc, max),
        Command::Series { dmax, w } => {
            check_disc(dmax, max)?;
            series(dmax, w)
        }
        Command::Verify { suite, fmax, order, prime_cutoff, dmax, w } => {
            let mut b = Bounds::default().capped(max);
            if let Some(v) = fmax {
                b.fmax = v;
            }
            if let Some(v) = order {
                b.series_order = v;
            }
            if let Some(v) = prime_cutoff {
                b.prime_cutoff = v;
            }
            if let Some(v) = dmax {
                b.dmax = v;
            }
            if let Some(v) = w {
                b.w = v;
            }
            if [b.fmax, u64::from(b.series_order), b.prime_cutoff, b.dmax].contains(&0) {
                return Err(usage("bounds must be positive"));
            }
            verify(&suite, b)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
            eprintln!("valid subcommands: {}", names.join(", "));
            return ExitCode::from(2);
        }
    };
    let (format, out) = (cli.format, cli.out.clone());
    let result = run(cli).and_then(|r| render(&r, format).map(|s| (r.ok, s)));
    match result {
        Ok((ok, text)) => {
            let written = match &out {
                Some(path) => fs::write(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
