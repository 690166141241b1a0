//! The `polarium` command line: `check`, `replay` and `info`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::forms::CanonicalSpaceSpec;
use crate::props::{self, CheckOptions, Property, PropertyReport, Verdict};
use crate::space::{self, BuildOptions, PolarSpace};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BOUND: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;
pub const EXIT_EXPECTATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "polarium", version, about = "Build finite polar spaces and check their characterizing properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the property suite on one or more spaces
    Check {
        #[arg(required = true)]
        specs: Vec<String>,
        /// Expected verdicts: {"<space>": {"<property>": "holds"|"fails"|"skipped"}}
        #[arg(long)]
        expect: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        workers: Option<u64>,
        #[arg(long, default_value_t = space::DEFAULT_POINT_BOUND as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_points: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of A,B_triads,B_prime,C,D,regular_pairs,symplectic
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
        /// Record wall-clock time per property (makes output run-dependent)
        #[arg(long)]
        timings: bool,
    },
    /// Re-validate a failure witness from a report file
    Replay {
        report: PathBuf,
        /// `<space>/<property>`, or just `<property>` for single-space reports
        witness_id: String,
        #[arg(long, default_value_t = space::DEFAULT_POINT_BOUND as u64)]
        max_points: u64,
    },
    /// Print point, line and rank counts of a space
    Info {
        spec: String,
        #[arg(long, default_value_t = space::DEFAULT_POINT_BOUND as u64)]
        max_points: u64,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::PointBound { .. } | Error::EnumerationBound { .. } | Error::FieldBound { .. } => EXIT_BOUND,
        Error::Parse { .. } | Error::Inadmissible(_) | Error::NotPrime(_) => EXIT_USAGE,
        _ => EXIT_ASSERTION,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure { code: exit_code(&err), message: err.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Run the CLI with explicit arguments and output streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    let result = match cli.command {
        Command::Check { specs, expect, out: out_path, format, workers, max_points, seed, props, timings } => {
            let cfg = RunConfig {
                specs,
                props,
                expect,
                out: out_path,
                table: format == Format::Table,
                workers: workers.map(|w| w as usize),
                build: BuildOptions { max_points: max_points as usize, ..BuildOptions::default() },
                check: CheckOptions { seed, timings, ..CheckOptions::default() },
            };
            cmd_check(&cfg, out, err)
        }
        Command::Replay { report, witness_id, max_points } => {
            let opts = BuildOptions { max_points: max_points as usize, ..BuildOptions::default() };
            cmd_replay(&report, &witness_id, &opts, out)
        }
        Command::Info { spec, max_points } => {
            let opts = BuildOptions { max_points: max_points as usize, ..BuildOptions::default() };
            cmd_info(&spec, &opts, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub struct RunConfig {
    pub specs: Vec<String>,
    pub props: Vec<String>,
    pub expect: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub table: bool,
    pub workers: Option<usize>,
    pub build: BuildOptions,
    pub check: CheckOptions,
}

fn build(spec: &str, opts: &BuildOptions) -> Result<PolarSpace, Failure> {
    let parsed: CanonicalSpaceSpec = spec.parse()?;
    Ok(space::build_space(&parsed, opts)?)
}

fn cmd_check(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let props: Vec<Property> = if cfg.props.is_empty() {
        Property::ALL.to_vec()
    } else {
        cfg.props.iter().map(|p| p.parse().map_err(|_| usage(format!("unknown property {p:?}")))).collect::<Result<_, _>>()?
    };
    let expected = match &cfg.expect {
        Some(path) => Some(read_expectations(path)?),
        None => None,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| usage(e.to_string()))?;
    let mut reports = Vec::new();
    for spec in &cfg.specs {
        let space = build(spec, &cfg.build)?;
        let report = pool.install(|| props::run_report(&space, &props, cfg.check))?;
        reports.push((space, report));
    }
    let json = Value::Array(reports.iter().map(|(s, r)| report_to_json(s, r)).collect());
    let text = if cfg.table { render_table(&reports) } else { serde_json::to_string_pretty(&json).expect("json") + "\n" };
    match &cfg.out {
        Some(path) => {
            fs::write(path, serde_json::to_string_pretty(&json).expect("json") + "\n")
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            if cfg.table {
                out.write_all(text.as_bytes()).ok();
            }
        }
        None => {
            out.write_all(text.as_bytes()).ok();
        }
    }
    let mut code = 0;
    for (_, r) in &reports {
        for e in r.violations() {
            let _ = writeln!(err, "equivalence {} violated on {}: {}", e.name, r.space, e.detail);
            code = EXIT_ASSERTION;
        }
    }
    if code == 0 {
        if let Some(expected) = expected {
            let diffs = compare(&reports, &expected);
            for d in &diffs {
                let _ = writeln!(err, "{d}");
            }
            if !diffs.is_empty() {
                code = EXIT_EXPECTATION;
            }
        }
    }
    Ok(code)
}

type Expectations = BTreeMap<String, BTreeMap<String, String>>;

fn read_expectations(path: &PathBuf) -> Result<Expectations, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let raw: Expectations =
        serde_json::from_str(&text).map_err(|e| usage(format!("bad expectation file {}: {e}", path.display())))?;
    // normalize space keys so "Q⁻(5, 2)" and "Q-(5,2)" agree
    raw.into_iter()
        .map(|(k, v)| {
            let key = k.parse::<CanonicalSpaceSpec>().map(|s| s.to_string()).map_err(|e| usage(e.to_string()))?;
            Ok((key, v))
        })
        .collect()
}

fn compare(reports: &[(PolarSpace, PropertyReport)], expected: &Expectations) -> Vec<String> {
    let mut diffs = Vec::new();
    for (_, r) in reports {
        let Some(exp) = expected.get(&r.space) else { continue };
        for (prop, want) in exp {
            let got = prop
                .parse::<Property>()
                .ok()
                .and_then(|p| r.verdict(p))
                .map_or("missing", |v| v.name());
            if got != want {
                diffs.push(format!("{} {}: expected {}, got {}", r.space, prop, want, got));
            }
        }
    }
    diffs
}

pub fn report_to_json(space: &PolarSpace, r: &PropertyReport) -> Value {
    let mut props = Map::new();
    for (p, res) in &r.properties {
        let mut entry = Map::new();
        entry.insert("verdict".into(), json!(res.verdict.name()));
        entry.insert("checked_count".into(), json!(res.checked_count));
        entry.insert("millis".into(), json!(res.millis));
        if let Verdict::Skipped(reason) = &res.verdict {
            entry.insert("reason".into(), json!(reason));
        }
        if let Some(w) = &res.witness {
            entry.insert("witness".into(), props::witness_to_json(space, w));
        }
        props.insert(p.key().into(), Value::Object(entry));
    }
    let equivalences: Vec<Value> =
        r.equivalences.iter().map(|e| json!({"name": e.name, "holds": e.holds, "detail": e.detail})).collect();
    json!({
        "space": r.space,
        "points": r.points,
        "lines": r.lines,
        "rank": r.rank,
        "properties": props,
        "equivalences": equivalences,
    })
}

fn render_table(reports: &[(PolarSpace, PropertyReport)]) -> String {
    let mut s = format!("{:<14} {:>6} {:>6} {:>4}", "space", "points", "lines", "rank");
    for p in Property::ALL {
        s += &format!(" {:>13}", p.key());
    }
    s.push('\n');
    for (_, r) in reports {
        s += &format!("{:<14} {:>6} {:>6} {:>4}", r.space, r.points, r.lines, r.rank);
        for p in Property::ALL {
            s += &format!(" {:>13}", r.verdict(p).map_or("-", |v| v.name()));
        }
        s.push('\n');
        for e in r.violations() {
            s += &format!("  violated: {} ({})\n", e.name, e.detail);
        }
    }
    s
}

fn cmd_replay(path: &PathBuf, id: &str, opts: &BuildOptions, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| usage(format!("bad report {}: {e}", path.display())))?;
    let reports: Vec<Value> = match doc {
        Value::Array(a) => a,
        v @ Value::Object(_) => vec![v],
        _ => return Err(usage("report must be a JSON object or array")),
    };
    let (space_name, prop) = match id.rsplit_once('/') {
        Some((s, p)) => (Some(s.parse::<CanonicalSpaceSpec>()?.to_string()), p),
        None => (None, id),
    };
    let report = match &space_name {
        Some(name) => reports.iter().find(|r| r.get("space").and_then(Value::as_str) == Some(name.as_str())),
        None if reports.len() == 1 => reports.first(),
        None => return Err(usage("report has several spaces; use <space>/<property>")),
    }
    .ok_or_else(|| usage(format!("no report for {id}")))?;
    let space_str = report.get("space").and_then(Value::as_str).ok_or_else(|| usage("report entry has no space"))?;
    let entry = report
        .get("properties")
        .and_then(|p| p.get(prop))
        .ok_or_else(|| usage(format!("no property {prop:?} in the report for {space_str}")))?;
    let verdict = entry.get("verdict").and_then(Value::as_str).unwrap_or("");
    let witness = match (verdict, entry.get("witness")) {
        ("fails", Some(w)) => w,
        _ => return Err(usage(format!("nothing to replay: {space_str}/{prop} is {verdict:?}"))),
    };
    let space = build(space_str, opts)?;
    let parsed = props::witness_from_json(&space, witness).map_err(|e| Failure { code: EXIT_ASSERTION, message: e.to_string() })?;
    match props::validate_witness(&space, &parsed) {
        Ok(()) => {
            let _ = writeln!(out, "{space_str}/{prop}: witness valid");
            Ok(0)
        }
        Err(e) => Err(Failure { code: EXIT_ASSERTION, message: format!("stale witness for {space_str}/{prop}: {e}") }),
    }
}

fn cmd_info(spec: &str, opts: &BuildOptions, out: &mut dyn Write) -> Result<i32, Failure> {
    let space = build(spec, opts)?;
    let (s, t) = space.order().map_or((Value::Null, Value::Null), |(s, t)| (json!(s), json!(t)));
    let info = json!({
        "space": space.name(),
        "points": space.num_points(),
        "lines": space.num_lines(),
        "rank": space.rank(),
        "order": [s, t],
        "form_backed": space.form().is_some(),
    });
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&info).expect("json"));
    Ok(0)
}
