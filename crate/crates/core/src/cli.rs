//! The `fermat-ws` command line.
//!
//! Exit codes: 0 success, 1 configuration error, 2 bad place selector,
//! 3 mathematical mismatch. Output goes to `--output` or stdout; notes and
//! diagnostics go to stderr.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::curve::{
    canonical_place, enumerate_places, make_curve, orbit, rational_place_census, sampled_places,
    standard_generators, CurveCtx, CurveError, Place, MAX_TOWER_DEGREE,
};
use crate::oracle::{default_precision, gap_set_oracle, local_expansions, transport_word, OracleError};
use crate::report::{self, ReportError, SCHEMA_VERSION};
use crate::theorems::counting::Identity;
use crate::theorems::gaps::{half_applies, third_applies};
use crate::theorems::{
    case_label, classify, gaps_o, survey_each, POrder, PlaceRecord, TheoremError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SELECTOR: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fermat-ws",
    version,
    about = "Weierstrass gap sequences on the Fermat curves X^m + Y^m + 1 = 0 over F_{q^2}"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the places of O and the affine places of degree <= d-max.
    Places(RunConfig),
    /// Gap set at one place.
    Gaps(GapsArgs),
    /// Census, O-orbit, theorem/oracle and counting checks for one curve.
    Verify(RunConfig),
    /// Group places by gap set and list the Weierstrass places.
    Classify(RunConfig),
    /// Oracle and closed form at every selected place.
    Survey(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// q = p^e.
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    /// Curve exponent, a divisor of q + 1.
    #[arg(long)]
    pub m: u64,
    /// Largest place degree considered.
    #[arg(long, default_value_t = 1)]
    pub d_max: u32,
    /// Series precision for the oracle (default 2g + 2).
    #[arg(long)]
    pub precision: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Use the places of O plus this many seeded random affine places per
    /// degree instead of all of them.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, env = "FERMAT_WS_THREADS")]
    pub threads: Option<usize>,
    /// Adds this to the stride of the non-O closed forms. Test hook.
    #[arg(long, hide = true, default_value_t = 0)]
    pub corrupt_stride: u64,
}

#[derive(Debug, Clone, Args)]
pub struct GapsArgs {
    #[command(flatten)]
    pub config: RunConfig,
    /// A position in the `places` listing for the same --d-max, --sample
    /// and --seed, or one of axis_x:i, axis_y:i, infinity:i,
    /// affine:c0,c1,...:c0,c1,... (coordinates over F_p).
    #[arg(long)]
    pub place: String,
    /// Also run the series oracle and compare.
    #[arg(long)]
    pub verify: bool,
    /// Include the local expansions of the holomorphic differentials.
    #[arg(long)]
    pub debug: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid place selector: {0}")]
    Selector(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Selector(_) => EXIT_SELECTOR,
            CliError::Compute(_) => EXIT_MISMATCH,
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Compute(e.to_string())
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

// oracle failures caused by a user-chosen precision are configuration errors
fn oracle_err(cfg: &RunConfig, e: OracleError) -> CliError {
    match e {
        OracleError::InsufficientPrecision { .. } if cfg.precision.is_some() => config_err(e),
        e => CliError::Compute(e.to_string()),
    }
}

fn theorem_err(cfg: &RunConfig, e: TheoremError) -> CliError {
    match e {
        TheoremError::Oracle(o) => oracle_err(cfg, o),
        e => CliError::Compute(e.to_string()),
    }
}

/// A finished command: the report and the exit code it asks for.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
    /// Lines for stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            code: EXIT_OK,
            notes: Vec::new(),
        }
    }
}

fn build_curve(cfg: &RunConfig) -> Result<CurveCtx, CliError> {
    if cfg.d_max > MAX_TOWER_DEGREE {
        return Err(CliError::Config(format!(
            "--d-max {} above {}",
            cfg.d_max, MAX_TOWER_DEGREE
        )));
    }
    if cfg.threads == Some(0) {
        return Err(CliError::Config("--threads must be positive".into()));
    }
    if cfg.precision == Some(0) {
        return Err(CliError::Config("--precision must be positive".into()));
    }
    make_curve(cfg.p, cfg.e, cfg.m).map_err(config_err)
}

/// The place list every command works on.
pub fn place_list(ctx: &CurveCtx, cfg: &RunConfig) -> Result<Vec<Place>, CurveError> {
    match cfg.sample {
        Some(k) => sampled_places(ctx, cfg.d_max, k, cfg.seed),
        None => enumerate_places(ctx, cfg.d_max),
    }
}

fn places_for(ctx: &CurveCtx, cfg: &RunConfig) -> Result<Vec<Place>, CliError> {
    place_list(ctx, cfg).map_err(config_err)
}

/// Resolves a `--place` selector.
pub fn resolve_place(ctx: &CurveCtx, cfg: &RunConfig, sel: &str) -> Result<Place, CliError> {
    let bad = |msg: String| CliError::Selector(format!("{sel}: {msg}"));
    if let Ok(n) = sel.parse::<usize>() {
        let places = places_for(ctx, cfg)?;
        return places
            .get(n)
            .copied()
            .ok_or_else(|| bad(format!("only {} places are listed", places.len())));
    }
    let (kind, rest) = sel
        .split_once(':')
        .ok_or_else(|| bad("expected N or kind:...".into()))?;
    let index = || -> Result<usize, CliError> {
        let i: usize = rest.parse().map_err(|_| bad("bad index".into()))?;
        if i == 0 || i as u64 > ctx.m() {
            return Err(bad(format!("index must lie in 1..={}", ctx.m())));
        }
        Ok(i)
    };
    match kind {
        "axis_x" => Ok(Place::AxisX(index()?)),
        "axis_y" => Ok(Place::AxisY(index()?)),
        "infinity" => Ok(Place::Infinity(index()?)),
        "affine" => {
            let (ca, cb) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected affine:a-coords:b-coords".into()))?;
            let parse = |s: &str| -> Result<Vec<u64>, CliError> {
                s.split(',')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| bad(format!("bad coordinate {t:?}"))))
                    .collect()
            };
            let (va, vb) = (parse(ca)?, parse(cb)?);
            let per_layer = 2 * ctx.exponent() as usize;
            if va.len() != vb.len() || va.is_empty() || va.len() % per_layer != 0 {
                return Err(bad(format!(
                    "both coordinate lists need the same length, a multiple of {per_layer}"
                )));
            }
            let d = (va.len() / per_layer) as u32;
            if d > MAX_TOWER_DEGREE {
                return Err(bad(format!("degree {d} above {MAX_TOWER_DEGREE}")));
            }
            let f = ctx.tower(d).map_err(|e| bad(e.to_string()))?;
            let a = f.from_coords(&va).map_err(|e| bad(e.to_string()))?;
            let b = f.from_coords(&vb).map_err(|e| bad(e.to_string()))?;
            let place = ctx.affine_place(a, b).map_err(|e| bad(e.to_string()))?;
            canonical_place(ctx, &place).map_err(|e| bad(e.to_string()))
        }
        _ => Err(bad(format!("unknown kind {kind:?}"))),
    }
}

fn envelope(ctx: &CurveCtx, command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("curve".into(), report::curve_json(ctx));
    m
}

fn render(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn cmd_places(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = build_curve(cfg)?;
    let places = places_for(&ctx, cfg)?;
    if cfg.format == Format::Csv {
        return Ok(Outcome::ok(report::places_csv(&ctx, &places)?));
    }
    let list = places
        .iter()
        .enumerate()
        .map(|(id, p)| {
            let mut v = report::place_json(&ctx, p)?;
            v["id"] = json!(id);
            Ok(v)
        })
        .collect::<Result<Vec<_>, CurveError>>()
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let mut env = envelope(&ctx, "places");
    env.insert("count".into(), json!(list.len()));
    env.insert("places".into(), Value::Array(list));
    Ok(Outcome::ok(render(Value::Object(env))))
}

pub fn cmd_gaps(args: &GapsArgs) -> Result<Outcome, CliError> {
    let cfg = &args.config;
    let ctx = build_curve(cfg)?;
    let place = resolve_place(&ctx, cfg, &args.place)?;
    let mut notes = Vec::new();
    let cf = crate::theorems::gaps::closed_form_gaps_with(&ctx, &place, cfg.corrupt_stride)
        .map_err(|e| theorem_err(cfg, e))?;
    let p_order = match &cf {
        Some(c) => c.p_order,
        None => crate::theorems::gaps::place_p_order(&ctx, &place).map_err(|e| theorem_err(cfg, e))?,
    };
    let oracle = if args.verify || cf.is_none() {
        Some(gap_set_oracle(&ctx, &place, cfg.precision).map_err(|e| oracle_err(cfg, e))?)
    } else {
        None
    };
    let (main, source) = match (&cf, &oracle) {
        (Some(c), _) => (c.gaps.clone(), "closed_form"),
        (None, Some(o)) => {
            notes.push("no closed form applies here; gaps come from the series oracle".to_string());
            (o.clone(), "oracle")
        }
        (None, None) => unreachable!("the oracle runs whenever no closed form applies"),
    };
    let mut env = envelope(&ctx, "gaps");
    env.insert("place".into(), report::place_json(&ctx, &place).map_err(|e| CliError::Compute(e.to_string()))?);
    let summary = report::gapset_json(&main);
    for (k, v) in summary.as_object().expect("gap set encodes as an object") {
        env.insert(k.clone(), v.clone());
    }
    env.insert("source".into(), json!(source));
    env.insert("branch".into(), json!(cf.as_ref().map(|c| c.branch)));
    env.insert("p_order".into(), report::p_order_json(p_order));
    env.insert(
        "case".into(),
        json!(p_order.and_then(|o| case_label(ctx.m(), o))),
    );
    if let Some(note) = notes.first() {
        env.insert("note".into(), json!(note));
    }
    let mut code = EXIT_OK;
    if args.verify {
        let o = oracle.as_ref().expect("oracle ran");
        env.insert("oracle".into(), report::gapset_json(o));
        let verdict = match &cf {
            Some(c) if c.gaps == *o => "match",
            Some(_) => {
                code = EXIT_MISMATCH;
                notes.push(format!("mismatch at {place}"));
                "mismatch"
            }
            None => "no_closed_form",
        };
        env.insert("verdict".into(), json!(verdict));
    }
    if args.debug {
        let word = transport_word(&place);
        let n = cfg.precision.unwrap_or_else(|| default_precision(&ctx));
        let (f, family) = local_expansions(&ctx, &place, &word, n).map_err(|e| oracle_err(cfg, e))?;
        env.insert(
            "debug".into(),
            json!({
                "precision": n,
                "transport": word.to_string(),
                "layer_modulus": f.modulus(),
                "series": report::series_json(&f, &family),
            }),
        );
    }
    let body = if cfg.format == Format::Csv {
        let record = PlaceRecord {
            place,
            oracle: oracle.clone().unwrap_or_else(|| main.clone()),
            closed_form: cf.as_ref().map(|c| c.gaps.clone()),
            branch: cf.as_ref().map(|c| c.branch),
            p_order,
        };
        report::survey_csv(&ctx, &[(0, record)])?
    } else {
        render(Value::Object(env))
    };
    Ok(Outcome { body, code, notes })
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
    first_failure: Option<String>,
}

impl Check {
    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "first_failure": self.first_failure,
        })
    }
}

fn census_check(ctx: &CurveCtx) -> Check {
    let q = ctx.q();
    let expected = q * q + 1 + 2 * q * ctx.genus();
    match rational_place_census(ctx) {
        Ok(n) => Check {
            name: "census",
            passed: n == expected,
            detail: format!("{n} rational places, q^2 + 1 + 2qg = {expected}"),
            first_failure: None,
        },
        Err(e) => Check {
            name: "census",
            passed: false,
            detail: e.to_string(),
            first_failure: None,
        },
    }
}

fn orbit_check(ctx: &CurveCtx, cfg: &RunConfig) -> Check {
    let run = || -> Result<(bool, String, Option<String>), String> {
        let o: HashSet<Place> = ctx.o_places().into_iter().collect();
        let found = orbit(ctx, &Place::AxisX(1), &standard_generators()).map_err(|e| e.to_string())?;
        let same = found.len() == o.len() && found.iter().all(|p| o.contains(p));
        let mut detail = format!("orbit of axis_x:1 has {} places, |O| = {}", found.len(), o.len());
        if ctx.m() < 3 {
            return Ok((same, detail, None));
        }
        let expected = gaps_o(ctx).map_err(|e| e.to_string())?;
        let mut places = ctx.o_places();
        places.sort_by_key(|p| (p.kind(), p.index()));
        for p in &places {
            let g = gap_set_oracle(ctx, p, cfg.precision).map_err(|e| e.to_string())?;
            if g != expected {
                return Ok((false, detail, Some(format!("{p}: oracle {:?}", g.gaps()))));
            }
        }
        let _ = write!(detail, "; oracle gaps {:?} at all of O", expected.gaps());
        Ok((same, detail, None))
    };
    match run() {
        Ok((passed, detail, first_failure)) => Check {
            name: "o_orbit",
            passed: passed && first_failure.is_none(),
            detail,
            first_failure,
        },
        Err(e) => Check {
            name: "o_orbit",
            passed: false,
            detail: e,
            first_failure: None,
        },
    }
}

fn counting_check(ctx: &CurveCtx) -> Check {
    let mut ids = vec![Identity::FloorSum { n: 2 * ctx.genus() }];
    if half_applies(ctx) {
        ids.push(Identity::HalfIndexSet { q: ctx.q() });
    }
    if third_applies(ctx) {
        let m = ctx.m();
        for stride in [ctx.q(), ctx.q() + 1] {
            for order in (1..=m).map(POrder::Finite).chain([POrder::Infinite]) {
                ids.push(Identity::ThirdGapCount { m, stride, order });
            }
        }
    }
    let failed = ids.iter().find(|id| !matches!(id.holds(), Ok(true)));
    Check {
        name: "counting",
        passed: failed.is_none(),
        detail: format!("{} identities", ids.len()),
        first_failure: failed.map(|id| format!("{id:?}")),
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = build_curve(cfg)?;
    let places = places_for(&ctx, cfg)?;
    let mut checks = Vec::new();
    if ctx.base().order() <= crate::curve::ENUMERATION_LIMIT {
        checks.push(census_check(&ctx));
    }
    checks.push(orbit_check(&ctx, cfg));

    let results = survey_each(&ctx, &places, cfg.precision, cfg.corrupt_stride);
    let mut compared = 0usize;
    let mut first_mismatch = None;
    let mut first_error = None;
    let mut wrong_size = None;
    let mut ordered_branch = 0usize;
    let mut degrees = std::collections::BTreeMap::new();
    for (p, r) in places.iter().zip(&results) {
        match r {
            Ok(rec) => {
                *degrees.entry(p.degree()).or_insert(0usize) += 1;
                if rec.oracle.len() as u64 != ctx.genus() && wrong_size.is_none() {
                    wrong_size = Some(format!("{p}: {} gaps", rec.oracle.len()));
                }
                if rec.branch == Some(crate::theorems::Branch::ThirdOrdered) {
                    ordered_branch += 1;
                }
                match rec.matches() {
                    Some(true) => compared += 1,
                    Some(false) => {
                        compared += 1;
                        if first_mismatch.is_none() {
                            first_mismatch = Some(format!(
                                "{p}: closed form {:?}, oracle {:?}",
                                rec.closed_form.as_ref().map(|g| g.gaps().to_vec()).unwrap_or_default(),
                                rec.oracle.gaps()
                            ));
                        }
                    }
                    None => {}
                }
            }
            Err(e) => {
                if first_error.is_none() {
                    first_error = Some(format!("{p}: {e}"));
                }
            }
        }
    }
    let failure = first_mismatch.clone().or(first_error.clone());
    checks.push(Check {
        name: "theorem_oracle",
        passed: failure.is_none(),
        detail: format!(
            "{compared} of {} places compared against a closed form, by degree {:?}",
            places.len(),
            degrees
        ),
        first_failure: failure,
    });
    checks.push(Check {
        name: "gap_count",
        passed: wrong_size.is_none() && first_error.is_none(),
        detail: format!("every gap set has g = {} elements", ctx.genus()),
        first_failure: wrong_size,
    });
    checks.push(counting_check(&ctx));

    let passed = checks.iter().all(|c| c.passed);
    let mut notes: Vec<String> = checks
        .iter()
        .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
        .collect();
    for c in checks.iter().filter(|c| !c.passed) {
        if let Some(f) = &c.first_failure {
            notes.push(format!("first failure in {}: {f}", c.name));
        }
    }
    let mut env = envelope(&ctx, "verify");
    env.insert("places_checked".into(), json!(places.len()));
    if third_applies(&ctx) {
        env.insert("ordered_p_order_places".into(), json!(ordered_branch));
    }
    env.insert("checks".into(), Value::Array(checks.iter().map(Check::json).collect()));
    env.insert("passed".into(), json!(passed));
    let body = if cfg.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut rows = vec![["check".to_string(), "passed".into(), "detail".into(), "first_failure".into()]];
        rows.extend(checks.iter().map(|c| {
            [
                c.name.to_string(),
                c.passed.to_string(),
                c.detail.clone(),
                c.first_failure.clone().unwrap_or_default(),
            ]
        }));
        for r in rows {
            w.write_record(&r).map_err(ReportError::from)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?)
            .expect("csv output is utf-8")
    } else {
        render(Value::Object(env))
    };
    Ok(Outcome {
        body,
        code: if passed { EXIT_OK } else { EXIT_MISMATCH },
        notes,
    })
}

fn surveyed(ctx: &CurveCtx, cfg: &RunConfig) -> Result<Vec<PlaceRecord>, CliError> {
    let places = places_for(ctx, cfg)?;
    places
        .iter()
        .zip(survey_each(ctx, &places, cfg.precision, cfg.corrupt_stride))
        .map(|(p, r)| {
            r.map_err(|e| match theorem_err(cfg, e) {
                CliError::Compute(s) => CliError::Compute(format!("{p}: {s}")),
                e => e,
            })
        })
        .collect()
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = build_curve(cfg)?;
    let records = surveyed(&ctx, cfg)?;
    let cls = classify(&records);
    let mut notes = Vec::new();
    if !cls.generic_is_majority {
        notes.push("the most frequent gap set is not a majority; \"generic\" is only a plurality".into());
    }
    let body = if cfg.format == Format::Csv {
        report::classification_csv(&cls)?
    } else {
        render(report::classification_json(&ctx, &records, &cls)?)
    };
    Ok(Outcome {
        body,
        code: EXIT_OK,
        notes,
    })
}

pub fn cmd_survey(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = build_curve(cfg)?;
    let records = surveyed(&ctx, cfg)?;
    let mismatch = records.iter().position(|r| r.matches() == Some(false));
    let rows: Vec<(usize, PlaceRecord)> = records.into_iter().enumerate().collect();
    let body = if cfg.format == Format::Csv {
        report::survey_csv(&ctx, &rows)?
    } else {
        let list = rows
            .iter()
            .map(|(k, r)| report::record_json(&ctx, *k, r))
            .collect::<Result<Vec<_>, _>>()?;
        let mut env = envelope(&ctx, "survey");
        env.insert("count".into(), json!(list.len()));
        env.insert("records".into(), Value::Array(list));
        render(Value::Object(env))
    };
    let mut notes = Vec::new();
    if let Some(k) = mismatch {
        notes.push(format!("first mismatch at place {k}: {}", rows[k].1.place));
    }
    Ok(Outcome {
        body,
        code: if mismatch.is_some() { EXIT_MISMATCH } else { EXIT_OK },
        notes,
    })
}

/// Runs a parsed command inside a pool of the requested size.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = match &cli.command {
        Command::Places(c) | Command::Verify(c) | Command::Classify(c) | Command::Survey(c) => c,
        Command::Gaps(g) => &g.config,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(config_err)?;
    pool.install(|| match &cli.command {
        Command::Places(c) => cmd_places(c),
        Command::Gaps(g) => cmd_gaps(g),
        Command::Verify(c) => cmd_verify(c),
        Command::Classify(c) => cmd_classify(c),
        Command::Survey(c) => cmd_survey(c),
    })
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let output = match &cli.command {
        Command::Places(c) | Command::Verify(c) | Command::Classify(c) | Command::Survey(c) => {
            c.output.clone()
        }
        Command::Gaps(g) => g.config.output.clone(),
    };
    match run(&cli) {
        Ok(out) => {
            for n in &out.notes {
                eprintln!("{n}");
            }
            let written = match &output {
                Some(path) => std::fs::write(path, &out.body),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(out.body.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {}", CliError::Io(e));
                return EXIT_CONFIG;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::{closed_form_gaps, survey_place};

    fn cfg(p: u64, e: u32, m: u64) -> RunConfig {
        RunConfig {
            p,
            e,
            m,
            d_max: 1,
            precision: None,
            output: None,
            format: Format::Json,
            sample: None,
            seed: 0,
            threads: None,
            corrupt_stride: 0,
        }
    }

    #[test]
    fn selectors() {
        let c = cfg(7, 1, 4);
        let ctx = build_curve(&c).unwrap();
        assert_eq!(resolve_place(&ctx, &c, "axis_y:3").unwrap(), Place::AxisY(3));
        assert_eq!(resolve_place(&ctx, &c, "0").unwrap(), Place::AxisX(1));
        for bad in ["axis_x:0", "axis_x:5", "92", "foo:1", "affine:1,0:1,0", "affine:1:2", "7"] {
            let r = resolve_place(&ctx, &c, bad);
            if bad == "7" {
                assert!(r.is_ok());
                continue;
            }
            assert_eq!(r.unwrap_err().exit_code(), EXIT_SELECTOR, "{bad}");
        }
        let p = resolve_place(&ctx, &c, "12").unwrap();
        let Place::Affine { a, b, .. } = p else { panic!() };
        let f = ctx.base();
        let sel = |x: Vec<u64>| x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let text = format!("affine:{}:{}", sel(f.coords(a)), sel(f.coords(b)));
        assert_eq!(resolve_place(&ctx, &c, &text).unwrap(), p);
    }

    #[test]
    fn config_errors() {
        assert_eq!(build_curve(&cfg(7, 1, 3)).unwrap_err().exit_code(), EXIT_CONFIG);
        let mut c = cfg(7, 1, 4);
        c.threads = Some(0);
        assert_eq!(build_curve(&c).unwrap_err().exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn closed_form_used_for_o() {
        let c = cfg(7, 1, 4);
        let ctx = build_curve(&c).unwrap();
        let cf = closed_form_gaps(&ctx, &Place::AxisX(1)).unwrap().unwrap();
        assert_eq!(cf.gaps.gaps(), &[1, 2, 5]);
        let out = cmd_gaps(&GapsArgs {
            config: c,
            place: "axis_x:1".into(),
            verify: true,
            debug: false,
        })
        .unwrap();
        let v: Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["gaps"], json!([1, 2, 5]));
        assert_eq!(v["verdict"], "match");
        assert_eq!(out.code, EXIT_OK);
    }

    #[test]
    fn one_place_survey() {
        let c = cfg(7, 1, 4);
        let ctx = build_curve(&c).unwrap();
        let r = survey_place(&ctx, &Place::AxisY(2), None, 0).unwrap();
        assert_eq!(r.matches(), Some(true));
    }
}
