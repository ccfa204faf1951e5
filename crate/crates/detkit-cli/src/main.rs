//! Command line front end: evaluation, identity verification, Pol
//! extraction, recurrence guessing, box scanning, and factoring, all with
//! machine-readable output.
//!
//! Output is a JSON envelope {"schema":1,"subcommand":...,"status":...}
//! by default, a table with --csv, indented JSON with --pretty. Exit
//! codes: 0 pass, 2 conjecture-falsified, 1 fail or error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num::BigInt;
use serde_json::{json, Map, Value};

use detkit::closedforms::{
    eval_rhs, identity_spec, ms1_recurrence_check, pol_extract, IdentityId, RhsValue, XArg,
};
use detkit::detengine::{det_any, DetValue};
use detkit::exact::parse_rat;
use detkit::families::{build_family, parse_family_spec};
use detkit::guess::{cofactor_table, fit_recurrence, parse_support, DataTable};
use detkit::scan::{factor_integer, parse_scan_config, reports_csv, reports_jsonl, run_scan};
use detkit::verify::{check_identity, Report};
use detkit::FamilySpec;

#[derive(Parser)]
#[command(
    name = "detkit",
    version,
    about = "Exact determinant family evaluation, verification, and search"
)]
struct Cli {
    /// Worker threads for scan and batch verify (default: DETKIT_JOBS,
    /// then the logical core count)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Indented JSON output
    #[arg(long, global = true)]
    pretty: bool,

    /// Tabular CSV output instead of JSON
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a determinant: a family in text form (D[1,1,1,-1]) or an
    /// identity name (DiFrancesco, CK1, det22a, ...) checked against its
    /// closed form
    Eval {
        /// Family spec or identity id
        spec: String,
        /// Matrix dimension
        n: usize,
        /// Fix the shift parameter x of a parametric identity (rational,
        /// e.g. 7/2)
        #[arg(long, allow_hyphen_values = true, value_name = "RAT")]
        x: Option<String>,
    },

    /// Verify identities on their grids: a comma list of ids, a prefix
    /// group (det22), or all / all-proved / all-conjectures
    Verify {
        /// Identity selection
        ids: String,
        /// Override the per-identity default maximum dimension
        #[arg(long = "n-max", value_name = "N")]
        n_max: Option<usize>,
    },

    /// Extract the polynomial factors Pol_n of the F[3,0,x+3,x+3]
    /// determinants and check their four-term recurrence
    Pol {
        /// Largest n to extract
        #[arg(long = "n-max", default_value_t = 7, value_name = "N")]
        n_max: usize,
    },

    /// Fit polynomial-coefficient recurrences to a data table
    Guess {
        /// CSV data file with n,value or n,j,value rows
        datafile: Option<PathBuf>,
        /// Built-in table: difran-c (Di Francesco cofactors c_{n,j})
        #[arg(long, value_name = "NAME", conflicts_with = "datafile")]
        builtin: Option<String>,
        /// Shift support, e.g. "Sj2,Sn,Sj,1" or "2,1,0"
        #[arg(long, value_name = "SUPPORT")]
        support: String,
        /// Total degree of the coefficient polynomials
        #[arg(long, value_name = "D")]
        degree: usize,
        /// Data depth for built-in tables
        #[arg(long = "n-max", default_value_t = 20, value_name = "N")]
        n_max: usize,
    },

    /// Run a parameter box scan from a config file (JSON lines output,
    /// --csv for the summary table)
    Scan {
        /// Config file: family, range alpha/beta/gamma/delta, n_max,
        /// slope, shift_max
        configfile: PathBuf,
    },

    /// Factor a nonzero integer exactly
    Factor {
        /// Decimal integer (negatives allowed)
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    ConjectureFalsified,
    Fail,
    Error,
}

impl Status {
    fn text(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::ConjectureFalsified => "conjecture-falsified",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }

    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::ConjectureFalsified => 2,
            Status::Fail | Status::Error => 1,
        }
    }

    fn exit(self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

/// What a subcommand hands back: a status, the JSON payload fields, and
/// an optional preformatted body that replaces the envelope (scan's JSON
/// lines and every CSV table).
struct Outcome {
    status: Status,
    payload: Map<String, Value>,
    raw: Option<String>,
}

impl Outcome {
    fn new(status: Status, payload: Map<String, Value>) -> Self {
        Outcome {
            status,
            payload,
            raw: None,
        }
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // clap would exit 2 here, which this tool reserves for
            // falsified conjectures
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let jobs = cli
        .jobs
        .or_else(|| {
            std::env::var("DETKIT_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .filter(|&j| j > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        });
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot build worker pool: {e}");
            return ExitCode::from(1);
        }
    };

    let name = subcommand_name(&cli.cmd);
    let outcome = pool.install(|| run(&cli.cmd, cli.csv));
    let outcome = match outcome {
        Ok(o) => o,
        Err(msg) => Outcome::new(Status::Error, obj(vec![("error", json!(msg))])),
    };

    if let Some(raw) = &outcome.raw {
        print!("{raw}");
        return outcome.status.exit();
    }
    let mut envelope = Map::new();
    envelope.insert("schema".into(), json!(1));
    envelope.insert("subcommand".into(), json!(name));
    envelope.insert("status".into(), json!(outcome.status.text()));
    envelope.extend(outcome.payload);
    let body = if cli.pretty {
        serde_json::to_string_pretty(&Value::Object(envelope))
    } else {
        serde_json::to_string(&Value::Object(envelope))
    }
    .expect("serialization cannot fail");
    println!("{body}");
    outcome.status.exit()
}

fn subcommand_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Eval { .. } => "eval",
        Cmd::Verify { .. } => "verify",
        Cmd::Pol { .. } => "pol",
        Cmd::Guess { .. } => "guess",
        Cmd::Scan { .. } => "scan",
        Cmd::Factor { .. } => "factor",
    }
}

fn run(cmd: &Cmd, csv: bool) -> Result<Outcome, String> {
    match cmd {
        Cmd::Eval { spec, n, x } => cmd_eval(spec, *n, x.as_deref(), csv),
        Cmd::Verify { ids, n_max } => cmd_verify(ids, *n_max, csv),
        Cmd::Pol { n_max } => cmd_pol(*n_max, csv),
        Cmd::Guess {
            datafile,
            builtin,
            support,
            degree,
            n_max,
        } => cmd_guess(
            datafile.as_deref(),
            builtin.as_deref(),
            support,
            *degree,
            *n_max,
            csv,
        ),
        Cmd::Scan { configfile } => cmd_scan(configfile, csv),
        Cmd::Factor { value } => cmd_factor(value, csv),
    }
}

// ------------------------------------------------------------------ eval

fn values_equal(det: &DetValue, rhs: &RhsValue) -> bool {
    match (det, rhs) {
        (DetValue::Num(a), RhsValue::Num(b)) => a == b,
        (DetValue::PolyX(a), RhsValue::PolyX(b)) => a == b,
        (DetValue::Multi(a), RhsValue::Multi(b)) => a == b,
        _ => false,
    }
}

fn cmd_eval(spec_text: &str, n: usize, x: Option<&str>, csv: bool) -> Result<Outcome, String> {
    if n == 0 {
        return Err("n must be at least 1".into());
    }
    let x_rat = x.map(parse_rat).transpose()?;

    // identity name first, then the family text form
    if let Ok(id) = IdentityId::parse(spec_text) {
        let Some(spec) = identity_spec(&id) else {
            return Err(format!(
                "{} is not a standalone determinant identity; use `verify {}`",
                id.to_text(),
                id.to_text()
            ));
        };
        let (spec, xarg) = match (&x_rat, id.is_parametric()) {
            (Some(v), true) => (spec.with_x(v.clone()), Some(XArg::Num(v.clone()))),
            (Some(_), false) => {
                return Err(format!("{} takes no x parameter", id.to_text()))
            }
            (None, true) => (spec, Some(XArg::Symbolic)),
            (None, false) => (spec, None),
        };
        let det = det_any(&build_family(&spec, n));
        let rhs = eval_rhs(&id, n, xarg.as_ref())?;
        let equal = values_equal(&det, &rhs);
        let status = if equal {
            Status::Pass
        } else if id.is_conjecture() {
            Status::ConjectureFalsified
        } else {
            Status::Fail
        };
        let mut payload = obj(vec![
            ("spec", json!(id.to_text())),
            ("n", json!(n)),
            ("det", json!(det.to_text())),
            ("rhs", json!(rhs.to_text())),
            ("equal", json!(equal)),
        ]);
        if let Some(v) = &x_rat {
            payload.insert("x".into(), json!(v.to_string()));
        }
        let mut out = Outcome::new(status, payload);
        if csv {
            out.raw = Some(format!(
                "spec,n,det,rhs,equal\n{},{n},\"{}\",\"{}\",{equal}\n",
                id.to_text(),
                det.to_text(),
                rhs.to_text()
            ));
        }
        return Ok(out);
    }

    let spec = parse_family_spec(spec_text)?;
    let spec = match x_rat.as_ref() {
        Some(v) => {
            if spec.x_mode == detkit::families::XMode::None {
                return Err("this family has no x parameter to set".into());
            }
            spec.with_x(v.clone())
        }
        None => spec,
    };
    let det = det_any(&build_family(&spec, n));
    let mut payload = obj(vec![
        ("spec", json!(spec.to_text())),
        ("n", json!(n)),
        ("det", json!(det.to_text())),
    ]);
    if let Some(v) = &x_rat {
        payload.insert("x".into(), json!(v.to_string()));
    }
    let mut out = Outcome::new(Status::Pass, payload);
    if csv {
        out.raw = Some(format!(
            "spec,n,det\n{},{n},\"{}\"\n",
            spec.to_text(),
            det.to_text()
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- verify

fn select_ids(selector: &str) -> Result<Vec<IdentityId>, String> {
    let all = IdentityId::all();
    match selector {
        "all" => return Ok(all),
        "all-proved" => return Ok(all.into_iter().filter(|i| !i.is_conjecture()).collect()),
        "all-conjectures" => {
            return Ok(all.into_iter().filter(|i| i.is_conjecture()).collect())
        }
        _ => {}
    }
    let mut picked = Vec::new();
    for token in selector.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if let Ok(id) = IdentityId::parse(token) {
            picked.push(id);
            continue;
        }
        // prefix group, e.g. det22 or det33x
        let group: Vec<IdentityId> = all
            .iter()
            .filter(|i| i.to_text().starts_with(token))
            .cloned()
            .collect();
        if group.is_empty() {
            return Err(format!("unknown identity {token:?}"));
        }
        picked.extend(group);
    }
    if picked.is_empty() {
        return Err("empty identity selection".into());
    }
    Ok(picked)
}

fn report_value(rep: &Report) -> Value {
    let failures: Vec<Value> = rep
        .failures()
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "detail": c.detail.clone().unwrap_or_default(),
            })
        })
        .collect();
    json!({
        "id": rep.name,
        "conjecture": rep.conjecture,
        "checks": rep.checks.len(),
        "failures": failures,
    })
}

fn cmd_verify(selector: &str, n_max: Option<usize>, csv: bool) -> Result<Outcome, String> {
    if let Some(nm) = n_max {
        if nm < 1 {
            return Err("n-max must be at least 1".into());
        }
    }
    let ids = select_ids(selector)?;
    use rayon::prelude::*;
    let reports: Vec<Report> = ids.par_iter().map(|id| check_identity(id, n_max)).collect();

    let mut proved_failed = false;
    let mut conjecture_failed = false;
    for rep in &reports {
        if !rep.all_pass() {
            if rep.conjecture {
                conjecture_failed = true;
            } else {
                proved_failed = true;
            }
        }
    }
    let status = if proved_failed {
        Status::Fail
    } else if conjecture_failed {
        Status::ConjectureFalsified
    } else {
        Status::Pass
    };
    let total_checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    let payload = obj(vec![
        ("identities", json!(reports.len())),
        ("total_checks", json!(total_checks)),
        (
            "reports",
            Value::Array(reports.iter().map(report_value).collect()),
        ),
    ]);
    let mut out = Outcome::new(status, payload);
    if csv {
        let mut t = String::from("id,conjecture,checks,failures\n");
        for r in &reports {
            t.push_str(&format!(
                "{},{},{},{}\n",
                r.name,
                r.conjecture,
                r.checks.len(),
                r.failures().len()
            ));
        }
        out.raw = Some(t);
    }
    Ok(out)
}

// ------------------------------------------------------------------- pol

fn cmd_pol(n_max: usize, csv: bool) -> Result<Outcome, String> {
    if n_max < 1 {
        return Err("n-max must be at least 1".into());
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let rec = pol_extract(n)?;
        rows.push(json!({
            "n": n,
            "prefactor_scalar": rec.prefactor_scalar.to_string(),
            "prefactor": rec.prefactor_poly.to_text("x"),
            "pol": rec.pol.to_text("x"),
            "degree": rec.pol.degree(),
        }));
    }
    let recurrence = if n_max >= 4 {
        let r = ms1_recurrence_check(n_max)?;
        json!({
            "instances_checked": r.instances_checked,
            "all_zero_residuals": r.first_failure.is_none(),
        })
    } else {
        Value::Null
    };
    let failed = recurrence
        .as_object()
        .is_some_and(|o| o["all_zero_residuals"] == json!(false));
    let payload = obj(vec![
        ("pols", Value::Array(rows.clone())),
        ("recurrence", recurrence),
    ]);
    let mut out = Outcome::new(
        if failed {
            Status::ConjectureFalsified
        } else {
            Status::Pass
        },
        payload,
    );
    if csv {
        let mut t = String::from("n,degree,pol\n");
        for r in &rows {
            t.push_str(&format!(
                "{},{},\"{}\"\n",
                r["n"],
                r["degree"],
                r["pol"].as_str().unwrap()
            ));
        }
        out.raw = Some(t);
    }
    Ok(out)
}

// ----------------------------------------------------------------- guess

fn cmd_guess(
    datafile: Option<&std::path::Path>,
    builtin: Option<&str>,
    support_text: &str,
    degree: usize,
    n_max: usize,
    csv: bool,
) -> Result<Outcome, String> {
    let data = match (datafile, builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            DataTable::from_csv(&text)?
        }
        (None, Some("difran-c")) => cofactor_table(&FamilySpec::difrancesco(), n_max)?,
        (None, Some(other)) => return Err(format!("unknown builtin {other:?}")),
        (None, None) => return Err("need a data file or --builtin".into()),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let support = parse_support(support_text)?;
    let fit = fit_recurrence(&data, &support, degree)?;
    let basis: Vec<Value> = fit
        .basis
        .iter()
        .map(|r| serde_json::from_str(&r.to_json()).expect("recurrence json is valid"))
        .collect();
    let payload = obj(vec![
        ("support", json!(support.to_text())),
        ("degree", json!(degree)),
        ("points", json!(fit.window_points + fit.held_out_points)),
        ("unknowns", json!(fit.unknowns)),
        ("window_points", json!(fit.window_points)),
        ("held_out_points", json!(fit.held_out_points)),
        ("dropped_spurious", json!(fit.dropped_spurious)),
        ("basis", Value::Array(basis)),
        ("tag", json!(fit.tag)),
    ]);
    let mut out = Outcome::new(Status::Pass, payload);
    if csv {
        let mut t = String::from("index,recurrence\n");
        for (i, r) in fit.basis.iter().enumerate() {
            t.push_str(&format!("{i},\"{}\"\n", r.to_json().replace('"', "\"\"")));
        }
        out.raw = Some(t);
    }
    Ok(out)
}

// ------------------------------------------------------------------ scan

fn cmd_scan(configfile: &std::path::Path, csv: bool) -> Result<Outcome, String> {
    let text = std::fs::read_to_string(configfile)
        .map_err(|e| format!("cannot read {}: {e}", configfile.display()))?;
    let cfg = parse_scan_config(&text)?;
    let reports = run_scan(&cfg)?;
    let body = if csv {
        reports_csv(&reports)
    } else {
        reports_jsonl(&reports)
    };
    Ok(Outcome {
        status: Status::Pass,
        payload: Map::new(),
        raw: Some(body),
    })
}

// ---------------------------------------------------------------- factor

fn cmd_factor(value: &str, csv: bool) -> Result<Outcome, String> {
    let v = BigInt::from_str(value.trim()).map_err(|e| format!("bad integer: {e}"))?;
    let f = factor_integer(&v)?;
    let factors: Vec<Value> = f
        .factors
        .iter()
        .map(|e| {
            json!({
                "p": e.prime.to_string(),
                "e": e.exp,
                "certified": e.certified,
            })
        })
        .collect();
    let payload = obj(vec![
        ("value", json!(v.to_string())),
        ("sign", json!(f.sign)),
        ("factors", Value::Array(factors)),
        (
            "unfactored",
            f.unfactored
                .as_ref()
                .map(|u| json!(u.to_string()))
                .unwrap_or(Value::Null),
        ),
        ("text", json!(f.to_text())),
    ]);
    let mut out = Outcome::new(Status::Pass, payload);
    if csv {
        let mut t = String::from("prime,exponent,certified\n");
        for e in &f.factors {
            t.push_str(&format!("{},{},{}\n", e.prime, e.exp, e.certified));
        }
        out.raw = Some(t);
    }
    Ok(out)
}

// A compile-time check that the clap definition stays coherent.
#[test]
fn cli_definition_is_valid() {
    use clap::CommandFactory;
    Cli::command().debug_assert();
}

#[test]
fn exit_code_policy() {
    assert_eq!(Status::Pass.code(), 0);
    assert_eq!(Status::ConjectureFalsified.code(), 2);
    assert_eq!(Status::Fail.code(), 1);
    assert_eq!(Status::Error.code(), 1);
}
