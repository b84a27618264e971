use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use voting_power::divisor::{self, DisagreementReport};
use voting_power::fixedpoint::{self, AbFamily, FamilySpec, IterationTrace, Outcome};
use voting_power::indices::{self, DEFAULT_ENUM_CAP};
use voting_power::rational::{format_list, format_tuple, int, parse_rational, parse_rational_list};
use voting_power::verify::{self, Suite, VerifyBounds};
use voting_power::{
    format_rational, normalize, Engine, EngineConfig, Error, IndexKind, IndexVector, QuotaMode,
    Rational, VotingSystem,
};

mod output;

use output::{Format, Table};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "voting-power",
    version,
    about = "Exact Banzhaf and Shapley-Shubik power analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Largest player count for subset enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    max_players: usize,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Power indices of a weighted voting system.
    Index(IndexArgs),
    /// Divisor voting system of n.
    Divisor(DivisorArgs),
    /// Abundant-number scan, one row per n.
    Scan(ScanArgs),
    /// Iterate the index map from a starting weight vector.
    Fixedpoint(FixedpointArgs),
    /// Two-class fixed-point families.
    Family(FamilyArgs),
    /// Rerun the published checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Banzhaf,
    Ss,
    Both,
}

impl KindArg {
    fn kinds(self) -> Vec<IndexKind> {
        match self {
            KindArg::Banzhaf => vec![IndexKind::Banzhaf],
            KindArg::Ss => vec![IndexKind::ShapleyShubik],
            KindArg::Both => vec![IndexKind::Banzhaf, IndexKind::ShapleyShubik],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SingleKind {
    Banzhaf,
    Ss,
}

impl From<SingleKind> for IndexKind {
    fn from(k: SingleKind) -> Self {
        match k {
            SingleKind::Banzhaf => IndexKind::Banzhaf,
            SingleKind::Ss => IndexKind::ShapleyShubik,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ge,
    Gt,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Enum,
    Dp,
    Auto,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Enum => Engine::Enumeration,
            EngineArg::Dp => Engine::Dp,
            EngineArg::Auto => Engine::Auto,
        }
    }
}

#[derive(Args)]
struct IndexArgs {
    /// Comma-separated weights, integers or p/q.
    #[arg(
        long,
        required_unless_present = "from_json",
        allow_hyphen_values = true
    )]
    weights: Option<String>,
    #[arg(
        long,
        required_unless_present = "from_json",
        allow_hyphen_values = true
    )]
    quota: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Ge)]
    mode: ModeArg,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    /// Divide the weights by their total.
    #[arg(long)]
    normalize: bool,
    /// Re-run the analysis stored in a JSON file written by `index --format json` (`-` for stdin).
    #[arg(long, conflicts_with_all = ["weights", "quota", "normalize"])]
    from_json: Option<String>,
}

#[derive(Args)]
struct DivisorArgs {
    n: u64,
    /// Compare with the closed-form predictions.
    #[arg(long)]
    formulas: bool,
    /// Report where the two indices differ.
    #[arg(long)]
    prop21: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 1000)]
    limit: u64,
    /// Keep n with sigma(n) - 2n in 0..=max-excess.
    #[arg(long, default_value_t = 5)]
    max_excess: i64,
    /// Instead list n <= limit with sigma(n) = 2n + 1.
    #[arg(long)]
    quasiperfect: bool,
}

#[derive(Args)]
struct FixedpointArgs {
    #[arg(
        long,
        required_unless_present = "from_json",
        allow_hyphen_values = true
    )]
    weights: Option<String>,
    #[arg(long, value_enum, default_value_t = SingleKind::Ss)]
    kind: SingleKind,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    #[arg(long)]
    normalize: bool,
    /// Re-run from the first state of a trace written by `fixedpoint --format json`.
    #[arg(long, conflicts_with_all = ["weights", "normalize"])]
    from_json: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Ab,
    Aab,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// m = 2k - 1
    Odd,
    /// m = 2k
    Even,
}

impl From<FamilyArg> for AbFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Odd => AbFamily::OddM,
            FamilyArg::Even => AbFamily::EvenM,
        }
    }
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    shape: ShapeArg,
    #[arg(long)]
    k: Option<i64>,
    /// Number of type-B players.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "C", alias = "c")]
    offset: Option<i64>,
    /// Weight of a type-B player, for an explicit point.
    #[arg(long)]
    b: Option<String>,
    /// Which (a, b, ..., b) family `--k/--C` select.
    #[arg(long, value_enum, default_value_t = FamilyArg::Odd)]
    family: FamilyArg,
    /// List every b giving a Shapley-Shubik fixed point for `--m`.
    #[arg(long)]
    solve: bool,
    /// Also test the point against the Banzhaf map.
    #[arg(long)]
    banzhaf_check: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// prop21, prop22census, prop24, conj23, tables32, sec33, perfect, casecheck,
    /// erratum, families, engines, perf or all.
    suite: String,
    #[arg(long)]
    max_n: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    census_limit: Option<u64>,
    #[arg(long)]
    max_k: Option<i64>,
}

/// What a command produced: text to print and whether its checks held.
struct Rendered {
    text: String,
    ok: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = EngineConfig {
        enum_cap: cli.max_players,
        workers: cli.workers,
    };
    let result = match &cli.command {
        Command::Index(a) => cmd_index(a, cli.format, &cfg),
        Command::Divisor(a) => cmd_divisor(a, cli.format, &cfg),
        Command::Scan(a) => cmd_scan(a, cli.format, &cfg),
        Command::Fixedpoint(a) => cmd_fixedpoint(a, cli.format, &cfg),
        Command::Family(a) => cmd_family(a, cli.format, &cfg),
        Command::Verify(a) => cmd_verify(a, cli.format, &cfg),
    };
    match result {
        Ok(r) => {
            let mut out = io::stdout().lock();
            let _ = out.write_all(r.text.as_bytes());
            if !r.text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateSystem(_) => EXIT_DEGENERATE,
        Error::ClosedFormMismatch(_) | Error::WorkerPool(_) => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

fn read_source(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    let read = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn parse_json(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("json: {e}")))
}

fn to_json(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn vector_json(values: &[Rational]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|v| Value::String(format_rational(v)))
            .collect(),
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// ---------------------------------------------------------------- index

fn cmd_index(a: &IndexArgs, format: Format, cfg: &EngineConfig) -> Result<Rendered, Error> {
    let (system, stored_kinds) = match &a.from_json {
        Some(path) => system_from_json(&read_source(path)?)?,
        None => {
            let mut weights = parse_rational_list(a.weights.as_deref().unwrap_or_default())?;
            if a.normalize {
                weights = normalize(&weights)?;
            }
            let quota = parse_rational(a.quota.as_deref().unwrap_or_default())?;
            let mode = match a.mode {
                ModeArg::Ge => QuotaMode::MeetsOrExceeds,
                ModeArg::Gt => QuotaMode::StrictlyExceeds,
            };
            (VotingSystem::new(quota, mode, weights)?, None)
        }
    };
    let kinds = match (a.kind, stored_kinds) {
        (Some(k), _) => k.kinds(),
        (None, Some(stored)) => stored,
        (None, None) => KindArg::Both.kinds(),
    };
    let engine = Engine::from(a.engine);
    let vectors = kinds
        .iter()
        .map(|&k| indices::index(&system, k, engine, cfg))
        .collect::<Result<Vec<IndexVector>, Error>>()?;
    Ok(Rendered::ok(render_index(&system, &vectors, format)))
}

fn system_from_json(text: &str) -> Result<(VotingSystem, Option<Vec<IndexKind>>), Error> {
    let value = parse_json(text)?;
    let stored = value
        .get("system")
        .cloned()
        .ok_or_else(|| Error::InvalidInput("json has no \"system\" field".into()))?;
    let parsed: VotingSystem = serde_json::from_value(stored)
        .map_err(|e| Error::InvalidInput(format!("system json: {e}")))?;
    // Re-validate: deserialization bypasses the constructor.
    let system = VotingSystem::new(
        parsed.quota().clone(),
        parsed.mode(),
        parsed.weights().to_vec(),
    )?;
    let kinds: Vec<IndexKind> = [IndexKind::Banzhaf, IndexKind::ShapleyShubik]
        .into_iter()
        .filter(|k| value.get(k.as_str()).is_some())
        .collect();
    Ok((system, (!kinds.is_empty()).then_some(kinds)))
}

fn render_index(system: &VotingSystem, vectors: &[IndexVector], format: Format) -> String {
    match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert(
                "system".into(),
                serde_json::to_value(system).expect("systems serialize"),
            );
            for v in vectors {
                obj.insert(v.kind.as_str().into(), vector_json(&v.values));
            }
            to_json(&Value::Object(obj))
        }
        Format::Csv | Format::Table => {
            let mut header = vec!["player".to_string(), "weight".to_string()];
            header.extend(vectors.iter().map(|v| v.kind.as_str().to_string()));
            let mut t = Table::new(header);
            for (i, w) in system.weights().iter().enumerate() {
                let mut row = vec![(i + 1).to_string(), format_rational(w)];
                row.extend(vectors.iter().map(|v| format_rational(&v.values[i])));
                t.push(row);
            }
            if format == Format::Csv {
                t.to_csv()
            } else {
                format!("{system}\n{}", t.to_text())
            }
        }
    }
}

// ---------------------------------------------------------------- divisor

fn cmd_divisor(a: &DivisorArgs, format: Format, cfg: &EngineConfig) -> Result<Rendered, Error> {
    if a.n < 2 {
        return Err(Error::InvalidInput(format!(
            "n must be at least 2, got {}",
            a.n
        )));
    }
    let ds = divisor::divisor_system(a.n)?;
    let report = divisor::disagreement_report(a.n, cfg)?;
    let class = abundance_label(report.abundance_excess);
    // Disagreement is only claimed for sigma(n) - 2n in 0..=5.
    let claim_applies = (0..=5).contains(&report.abundance_excess);
    let ok = !(a.prop21 && claim_applies && report.witnesses.is_empty());
    let text = match format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            let obj = v.as_object_mut().expect("reports are objects");
            obj.insert("class".into(), json!(class));
            obj.insert("quota".into(), json!(format_rational(ds.system.quota())));
            if !a.formulas {
                obj.remove("formula_checks");
            }
            if a.prop21 {
                obj.insert("witness_divisors".into(), json!(report.witness_divisors()));
            } else {
                obj.remove("witnesses");
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            divisor::write_scan_csv(std::slice::from_ref(&report), &mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        Format::Table => render_divisor_table(&ds.system, &report, &class, a),
    };
    Ok(Rendered { text, ok })
}

fn abundance_label(k: i64) -> String {
    match k {
        0 => "perfect".into(),
        k if k > 0 => format!("abundant (sigma - 2n = {k})"),
        k => format!("deficient (sigma - 2n = {k})"),
    }
}

fn render_divisor_table(
    system: &VotingSystem,
    r: &DisagreementReport,
    class: &str,
    a: &DivisorArgs,
) -> String {
    let mut out = format!("n = {}  sigma = {}  {}\n{}\n", r.n, r.sigma, class, system);
    let mut t = Table::new(["divisor", "banzhaf", "shapley_shubik"]);
    for (i, d) in r.divisors.iter().enumerate() {
        t.push([
            d.to_string(),
            format_rational(&r.banzhaf.values[i]),
            format_rational(&r.shapley_shubik.values[i]),
        ]);
    }
    out.push_str(&t.to_text());
    if a.formulas {
        if r.formula_checks.is_empty() {
            out.push_str(&format!(
                "no closed form for sigma - 2n = {}\n",
                r.abundance_excess
            ));
        } else {
            let mut f = Table::new(["index", "divisor", "predicted", "engine", "status"]);
            for c in &r.formula_checks {
                let label = if c.kind == IndexKind::Banzhaf {
                    "B"
                } else {
                    "SS"
                };
                f.push([
                    format!("{label}({})", c.divisor),
                    c.divisor.to_string(),
                    format_rational(&c.predicted),
                    format_rational(&c.computed),
                    if c.matches { "agrees" } else { "differs" }.to_string(),
                ]);
            }
            out.push_str("closed-form predictions:\n");
            out.push_str(&f.to_text());
        }
    }
    if a.prop21 {
        let w = r.witness_divisors();
        if w.is_empty() {
            out.push_str("indices agree on every divisor\n");
        } else {
            let list: Vec<String> = w.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("indices differ at divisors {}\n", list.join(", ")));
        }
    }
    out
}

// ---------------------------------------------------------------- scan

fn cmd_scan(a: &ScanArgs, format: Format, cfg: &EngineConfig) -> Result<Rendered, Error> {
    if a.quasiperfect {
        let found = divisor::quasiperfect_search(a.limit);
        let text = match format {
            Format::Json => to_json(&json!({ "limit": a.limit, "quasiperfect": found })),
            _ => {
                let mut t = Table::new(["n"]);
                found.iter().for_each(|n| t.push([n.to_string()]));
                if format == Format::Csv {
                    t.to_csv()
                } else if found.is_empty() {
                    format!("no n <= {} has sigma(n) = 2n + 1\n", a.limit)
                } else {
                    t.to_text()
                }
            }
        };
        return Ok(Rendered::ok(text));
    }
    let reports = divisor::disagreement_sweep(a.limit, a.max_excess, cfg)?;
    let text = match format {
        Format::Json => to_json(&serde_json::to_value(&reports).expect("reports serialize")),
        Format::Csv => {
            let mut buf = Vec::new();
            divisor::write_scan_csv(&reports, &mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        Format::Table => {
            let mut t = Table::new(["n", "d", "sigma", "k", "differ at", "closed forms"]);
            for r in &reports {
                let w: Vec<String> = r.witness_divisors().iter().map(|d| d.to_string()).collect();
                t.push([
                    r.n.to_string(),
                    r.divisors.len().to_string(),
                    r.sigma.to_string(),
                    r.abundance_excess.to_string(),
                    w.join(" "),
                    match r.formula_match() {
                        Some(true) => "agree",
                        Some(false) => "differ",
                        None => "-",
                    }
                    .to_string(),
                ]);
            }
            t.to_text()
        }
    };
    Ok(Rendered::ok(text))
}

// ---------------------------------------------------------------- fixedpoint

fn cmd_fixedpoint(
    a: &FixedpointArgs,
    format: Format,
    cfg: &EngineConfig,
) -> Result<Rendered, Error> {
    let (start, kind) = match &a.from_json {
        Some(path) => {
            let trace = IterationTrace::from_json(&read_source(path)?)?;
            let first = trace
                .states
                .first()
                .cloned()
                .ok_or_else(|| Error::InvalidInput("trace has no states".into()))?;
            (first, trace.kind)
        }
        None => {
            let weights = parse_rational_list(a.weights.as_deref().unwrap_or_default())?;
            // An all-zero vector is bad input, not a degenerate system.
            if weights.iter().all(|w| *w == Rational::default()) {
                return Err(Error::InvalidInput("weights are all zero".into()));
            }
            let weights = if a.normalize {
                normalize(&weights)?
            } else {
                weights
            };
            (weights, a.kind.into())
        }
    };
    let trace = fixedpoint::iterate(&start, kind, a.max_iters, cfg)?;
    let text = match format {
        Format::Json => trace.to_json(),
        Format::Csv => {
            let players = start.len();
            let mut header = vec!["step".to_string()];
            header.extend((1..=players).map(|i| format!("w{i}")));
            let mut t = Table::new(header);
            for (step, s) in trace.states.iter().enumerate() {
                let mut row = vec![step.to_string()];
                row.extend(s.iter().map(format_rational));
                t.push(row);
            }
            t.to_csv()
        }
        Format::Table => {
            let mut out = format!("{} map\n", kind.as_str());
            for (step, s) in trace.states.iter().enumerate() {
                out.push_str(&format!("{step:>4}  {}\n", format_tuple(s)));
            }
            out.push_str(&match trace.outcome {
                Outcome::FixedPoint { state } => format!("fixed point at step {state}\n"),
                Outcome::Cycle { entry, length } => {
                    format!("cycle of length {length} entered at step {entry}\n")
                }
                Outcome::MaxIterationsReached => {
                    format!("no repeat within {} iterations\n", a.max_iters)
                }
            });
            out
        }
    };
    Ok(Rendered::ok(text))
}

// ---------------------------------------------------------------- family

fn cmd_family(a: &FamilyArgs, format: Format, cfg: &EngineConfig) -> Result<Rendered, Error> {
    if a.solve {
        let m =
            a.m.ok_or_else(|| Error::InvalidInput("--solve needs --m".into()))?;
        let solutions = match a.shape {
            ShapeArg::Ab => fixedpoint::ab_fixed_solutions(m)?,
            ShapeArg::Aab => fixedpoint::aab_fixed_solutions(m, cfg)?,
        };
        let text = match format {
            Format::Json => to_json(&json!({
                "shape": shape_name(a.shape),
                "m": m,
                "solutions": vector_json(&solutions),
            })),
            Format::Csv => {
                let mut t = Table::new(["b", "a"]);
                for b in &solutions {
                    t.push([
                        format_rational(b),
                        format_rational(&type_a_weight(a.shape, m, b)),
                    ]);
                }
                t.to_csv()
            }
            Format::Table => format!(
                "{} fixed points with m = {m}: {{{}}}\n",
                shape_name(a.shape),
                format_list(&solutions, ", ")
            ),
        };
        return Ok(Rendered::ok(text));
    }

    let point = match (a.shape, &a.b) {
        (ShapeArg::Ab, None) => {
            let k = a.k.ok_or_else(|| {
                Error::InvalidInput("need --k and --C, --b with --m, or --solve".into())
            })?;
            let offset = a
                .offset
                .ok_or_else(|| Error::InvalidInput("need --C".into()))?;
            fixedpoint::ab_family_point(a.family.into(), k, offset)?
        }
        (ShapeArg::Ab, Some(b)) => ab_point(required_m(a)?, parse_rational(b)?)?,
        (ShapeArg::Aab, Some(b)) => fixedpoint::aab_point(required_m(a)?, parse_rational(b)?),
        (ShapeArg::Aab, None) => {
            return Err(Error::InvalidInput(
                "aab needs --m with --b or --solve".into(),
            ))
        }
    };

    let engine_ok = positive(&point.a) && positive(&point.b);
    let ss_fixed = if engine_ok {
        Some(fixedpoint::is_fixed_point(
            &point.weights(),
            IndexKind::ShapleyShubik,
            cfg,
        )?)
    } else {
        None
    };
    let closed_form = if point.valid {
        Some(match point.shape {
            fixedpoint::Shape::Ab => fixedpoint::ab_ss_power_of_a(point.m, &point.b)?,
            fixedpoint::Shape::Aab => fixedpoint::aab_ss_power_of_a(point.m, &point.b)?,
        })
    } else {
        None
    };
    let banzhaf = if a.banzhaf_check && engine_ok {
        Some(banzhaf_status(a, &point, cfg)?)
    } else {
        None
    };
    if a.banzhaf_check && banzhaf.is_none() {
        return Err(Error::InvalidInput(
            "the point has a non-positive weight".into(),
        ));
    }
    // A valid point the engine rejects is a failed check, as is a requested
    // Banzhaf check that does not hold.
    let ok = !(point.valid && ss_fixed == Some(false)) && banzhaf.as_ref().is_none_or(|b| b.fixed);

    let text = match format {
        Format::Json => {
            let mut v = json!({
                "point": point,
                "weights": vector_json(&point.weights()),
                "ss_power_of_a": closed_form.as_ref().map(format_rational),
                "ss_fixed": ss_fixed,
            });
            if let Some(b) = &banzhaf {
                v["banzhaf_index_of_b"] = json!(format_rational(&b.engine));
                v["banzhaf_fixed"] = json!(b.fixed);
                if let Some(c) = &b.closed_form {
                    v["banzhaf_closed_form"] = json!(format_rational(c));
                }
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut t = Table::new(["shape", "m", "a", "b", "valid", "ss_fixed", "banzhaf_fixed"]);
            t.push([
                shape_name(shape_arg(&point)).to_string(),
                point.m.to_string(),
                format_rational(&point.a),
                format_rational(&point.b),
                point.valid.to_string(),
                ss_fixed.map(|f| f.to_string()).unwrap_or_default(),
                banzhaf
                    .as_ref()
                    .map(|b| b.fixed.to_string())
                    .unwrap_or_default(),
            ]);
            t.to_csv()
        }
        Format::Table => {
            let type_a = if point.shape == fixedpoint::Shape::Ab {
                ""
            } else {
                "2 x "
            };
            let mut out = format!(
                "point ({type_a}{}, {} x {}), {} players\n",
                format_rational(&point.a),
                format_rational(&point.b),
                point.m,
                point.players()
            );
            match &point.reason {
                Some(reason) => out.push_str(&format!("invalid: {reason}\n")),
                None => out.push_str("valid\n"),
            }
            if let Some(c) = &closed_form {
                out.push_str(&format!(
                    "closed-form ss power of a: {}\n",
                    format_rational(c)
                ));
            }
            if let Some(f) = ss_fixed {
                out.push_str(&format!("ss-fixed: {}\n", yes_no(f)));
            }
            if let Some(b) = &banzhaf {
                if let Some(c) = &b.closed_form {
                    out.push_str(&format!(
                        "closed-form banzhaf index of b: {}\n",
                        format_rational(c)
                    ));
                }
                out.push_str(&format!(
                    "banzhaf index of b: {}\nbanzhaf-fixed: {}\n",
                    format_rational(&b.engine),
                    yes_no(b.fixed)
                ));
            }
            out
        }
    };
    Ok(Rendered { text, ok })
}

struct BanzhafStatus {
    closed_form: Option<Rational>,
    engine: Rational,
    fixed: bool,
}

fn banzhaf_status(
    a: &FamilyArgs,
    point: &FamilySpec,
    cfg: &EngineConfig,
) -> Result<BanzhafStatus, Error> {
    if point.shape == fixedpoint::Shape::Ab && a.b.is_none() {
        let k = a.k.unwrap_or_default();
        let offset = a.offset.unwrap_or_default();
        let c = fixedpoint::family_banzhaf_check(a.family.into(), k, offset, cfg)?;
        return Ok(BanzhafStatus {
            fixed: c.engine_confirms(),
            closed_form: Some(c.closed_form),
            engine: c.engine,
        });
    }
    let image = fixedpoint::apply_index_map(&point.weights(), IndexKind::Banzhaf, cfg)?;
    let engine = image.last().cloned().expect("points have type-B players");
    Ok(BanzhafStatus {
        fixed: image == point.weights(),
        closed_form: None,
        engine,
    })
}

fn required_m(a: &FamilyArgs) -> Result<usize, Error> {
    a.m.ok_or_else(|| Error::InvalidInput("--b needs --m".into()))
}

/// `(1 - m b, b x m)`; validity as for the closed form.
fn ab_point(m: usize, b: Rational) -> Result<FamilySpec, Error> {
    let a = type_a_weight(ShapeArg::Ab, m, &b);
    let reason = match fixedpoint::ab_ss_power_of_a(m, &b) {
        Err(e) => Some(e.to_string()),
        Ok(_) if !positive(&a) => Some("a must be positive".into()),
        Ok(_) => None,
    };
    Ok(FamilySpec {
        shape: fixedpoint::Shape::Ab,
        m,
        k: 0,
        offset: 0,
        b,
        a,
        valid: reason.is_none(),
        reason,
    })
}

fn type_a_weight(shape: ShapeArg, m: usize, b: &Rational) -> Rational {
    let rest = int(1) - int(m as i64) * b;
    match shape {
        ShapeArg::Ab => rest,
        ShapeArg::Aab => rest / int(2),
    }
}

fn shape_name(shape: ShapeArg) -> &'static str {
    match shape {
        ShapeArg::Ab => "ab",
        ShapeArg::Aab => "aab",
    }
}

fn positive(r: &Rational) -> bool {
    *r > Rational::default()
}

fn shape_arg(point: &FamilySpec) -> ShapeArg {
    match point.shape {
        fixedpoint::Shape::Ab => ShapeArg::Ab,
        fixedpoint::Shape::Aab => ShapeArg::Aab,
    }
}

// ---------------------------------------------------------------- verify

fn cmd_verify(a: &VerifyArgs, format: Format, cfg: &EngineConfig) -> Result<Rendered, Error> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let mut bounds = VerifyBounds::default();
    if let Some(v) = a.max_n {
        bounds.max_n = v;
    }
    if let Some(v) = a.n {
        bounds.n = v;
    }
    if let Some(v) = a.p {
        bounds.p = v;
    }
    if let Some(v) = a.m {
        bounds.m = v;
    }
    if let Some(v) = a.census_limit {
        bounds.census_limit = v;
    }
    if let Some(v) = a.max_k {
        bounds.family_max_k = v;
        bounds.joint_max_k = v;
    }
    let report = verify::run(&suites, &bounds, cfg)?;
    let status = |c: &verify::Check| match (c.finding, c.passed) {
        (false, true) => "PASS",
        (false, false) => "FAIL",
        (true, true) => "FINDING (holds)",
        (true, false) => "FINDING (contradicted)",
    };
    let text = match format {
        Format::Json => to_json(&serde_json::to_value(&report).expect("reports serialize")),
        Format::Csv => {
            let mut t = Table::new(["suite", "check", "status", "detail"]);
            for c in &report.checks {
                t.push([
                    c.suite.name().to_string(),
                    c.name.clone(),
                    status(c).to_string(),
                    c.detail.clone(),
                ]);
            }
            t.to_csv()
        }
        Format::Table => {
            let mut out = String::new();
            for suite in &suites {
                out.push_str(&format!("== {suite}: {}\n", suite.claim()));
                for c in report.checks.iter().filter(|c| c.suite == *suite) {
                    out.push_str(&format!("{:<22} {}: {}\n", status(c), c.name, c.detail));
                }
            }
            let failures = report.failures().count();
            let findings = report.checks.iter().filter(|c| c.finding).count();
            out.push_str(&format!(
                "{} checks, {failures} failed, {findings} findings\n",
                report.checks.len()
            ));
            out
        }
    };
    Ok(Rendered {
        text,
        ok: report.passed(),
    })
}
