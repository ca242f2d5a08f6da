use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use dstbc::bounds::{
    block_rate_check, cpi_rate_bound, dostbc_rate_bound, generalized_design_rate_bound, partition, BlockVerdict,
    BoundsError, BoundsReport, CodeFamily, RateReport,
};
use dstbc::code::RateString;
use dstbc::oracle::{exists_code, max_rate, SearchOptions, SearchOutcome, SearchSpace, Structure};
use dstbc::presets::{search_presets, sim_preset, SIM_PRESETS};
use dstbc::sim::{plot_script, run_ber, to_csv, BerPoint, Modulation, Scheme, SimConfig};
use dstbc::verify::{check_definition1, check_definition2, check_theorem1, NumericOptions, VerificationReport};
use dstbc::{construct, parse_code, serialize_code, DistributedCode, Rate};

use crate::args::*;
use crate::config::Config;
use crate::error::{CliError, Outcome};

pub struct Ctx {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub quiet: bool,
}

impl Ctx {
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            return Err(CliError::Usage(format!("format {f:?} is not available for this command")));
        }
        Ok(f)
    }

    /// Primary output: the `--out` file or stdout.
    fn emit(&self, content: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => write_file(p, content),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }

    fn info(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::io(path, e))
}

/// `dir/stem.json` -> `dir/stem<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn rate_str(r: Rate) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn read_code(path: &Path) -> Result<DistributedCode, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_code(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn numeric_options(ctx: &Ctx, draws: usize, tol: f64) -> Result<NumericOptions, CliError> {
    if draws == 0 {
        return Err(CliError::Usage("--draws must be positive".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive and finite, got {tol}")));
    }
    Ok(NumericOptions {
        draws,
        tol,
        seed: ctx.seed.unwrap_or(NumericOptions::default().seed),
    })
}

pub fn verify(ctx: &Ctx, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let code = read_code(&args.code)?;
    let opts = numeric_options(ctx, args.draws, args.tol)?;
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json])?;

    let mut checks: Vec<(&str, VerificationReport)> = Vec::new();
    if args.family != FamilyArg::Cpi {
        checks.push(("theorem1", check_theorem1(&code)));
        checks.push(("definition1", check_definition1(&code, &opts).expect("options validated")));
    }
    if args.family != FamilyArg::Dostbc {
        checks.push(("definition2", check_definition2(&code, &opts).expect("options validated")));
    }
    let passed = |name: &str| checks.iter().any(|(n, r)| *n == name && r.passed());
    let dostbc = passed("theorem1") && passed("definition1");
    let cpi = passed("definition2");
    let mut member_of = Vec::new();
    if dostbc {
        member_of.push("dostbc");
    }
    if cpi {
        member_of.push("dostbc_cpi");
    }
    let ok = match args.family {
        FamilyArg::Auto => dostbc || cpi,
        FamilyArg::Dostbc => dostbc,
        FamilyArg::Cpi => cpi,
    };

    let content = match format {
        Format::Json => pretty(&json!({
            "file": args.code.display().to_string(),
            "config": {"family": format!("{:?}", args.family).to_lowercase(), "draws": opts.draws, "tol": opts.tol, "seed": opts.seed},
            "n": code.n_symbols(), "k": code.n_relays(), "t": code.n_slots(),
            "rate": RateString(code.rate()),
            "checks": checks.iter().map(|(n, r)| (n.to_string(), serde_json::to_value(r).expect("report serializes"))).collect::<serde_json::Map<_, _>>(),
            "member_of": member_of,
            "verdict": if ok { "pass" } else { "fail" },
        })),
        _ => {
            let mut s = format!(
                "{}: N={} K={} T={} rate {}\n",
                args.code.display(),
                code.n_symbols(),
                code.n_relays(),
                code.n_slots(),
                rate_str(code.rate())
            );
            for (name, r) in &checks {
                let _ = writeln!(s, "\n== {name} ==\n{r}");
            }
            let members = if member_of.is_empty() { "none".to_string() } else { member_of.join(", ") };
            let _ = writeln!(s, "\nmember of: {members}\nverdict: {}", if ok { "pass" } else { "fail" });
            s
        }
    };
    ctx.emit(&content)?;
    Ok(Outcome::from_bool(ok))
}

pub fn bounds(ctx: &Ctx, args: &BoundsArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json])?;
    let code = args.code.as_deref().map(read_code).transpose()?;
    let n = args.n.or(code.as_ref().map(DistributedCode::n_symbols)).expect("clap requires N");
    let k = args.k.or(code.as_ref().map(DistributedCode::n_relays)).expect("clap requires K");
    if n == 0 || k == 0 {
        return Err(CliError::Usage("N and K must be positive".into()));
    }
    let (d, c, g) = (dostbc_rate_bound(n, k), cpi_rate_bound(k), generalized_design_rate_bound(k));
    let reports: Vec<RateReport> = code
        .iter()
        .flat_map(|code| [RateReport::new(code, CodeFamily::NoCsi), RateReport::new(code, CodeFamily::Cpi)])
        .collect();
    let content = match format {
        Format::Json => pretty(&json!({
            "n": n, "k": k,
            "dostbc_bound": RateString(d),
            "cpi_bound": RateString(c),
            "generalized_design_bound": RateString(g),
            "code": reports,
        })),
        _ => {
            let mut s = format!(
                "N={n} K={k}\nno-CSI bound: {}\nCPI bound: {}\ngeneralized design bound: {}\n",
                rate_str(d),
                rate_str(c),
                rate_str(g)
            );
            for r in &reports {
                let _ = writeln!(
                    s,
                    "code rate {} vs {:?} bound {}{}",
                    rate_str(r.rate.0),
                    r.bound_source,
                    rate_str(r.bound.0),
                    if r.achieves_bound { " (achieved)" } else { "" }
                );
            }
            s
        }
    };
    ctx.emit(&content)?;
    Ok(Outcome::Pass)
}

const SEARCH_KEYS: &[&str] = &["structure", "n", "k", "t", "t_max", "canonical", "budget", "draws", "tol", "seed", "preset"];

fn bound_for(structure: Structure, n: usize, k: usize) -> Rate {
    match structure {
        Structure::RowMonomialCpi => cpi_rate_bound(k),
        Structure::ColumnMonomialDostbc => dostbc_rate_bound(n, k),
    }
}

fn outcome_json(o: &SearchOutcome) -> (Value, bool) {
    let mut v = o.to_json();
    let bound = bound_for(o.space.structure, o.space.n, o.space.k);
    let within = o.witness.as_ref().is_none_or(|w| w.rate() <= bound);
    v["bound"] = json!(RateString(bound));
    v["within_bound"] = json!(within);
    (v, within)
}

fn outcome_text(o: &SearchOutcome) -> String {
    let bound = bound_for(o.space.structure, o.space.n, o.space.k);
    let mut s = format!(
        "space: {}\nraw candidates: {}\nenumerated: {}\nverdict: {}\nbound: {}\n",
        o.space,
        o.raw_count,
        o.enumerated,
        if o.exists() { "exists" } else { "none" },
        rate_str(bound)
    );
    if let Some(w) = &o.witness {
        let _ = write!(s, "witness (rate {}):\n{}", rate_str(w.rate()), serialize_code(w));
    }
    s
}

fn write_witness(ctx: &Ctx, suffix: &str, o: &SearchOutcome) -> Result<(), CliError> {
    if let (Some(out), Some(w)) = (&ctx.out, &o.witness) {
        write_file(&sibling(out, suffix), &serialize_code(w))?;
    }
    Ok(())
}

pub fn search(ctx: &Ctx, args: &SearchArgs) -> Result<Outcome, CliError> {
    if args.list_presets {
        let mut s = String::new();
        for (name, space) in search_presets() {
            let _ = writeln!(s, "{name}\t{space}\t{} raw", space.raw_count().unwrap_or(0));
        }
        ctx.emit(&s)?;
        return Ok(Outcome::Pass);
    }
    let format = ctx.format(Format::Json, &[Format::Text, Format::Json])?;
    let mut cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    }
    .resolve(SEARCH_KEYS)?;
    for (key, v) in [("n", args.n), ("k", args.k), ("t", args.t), ("t_max", args.t_max)] {
        if let Some(v) = v {
            cfg.set(key, v);
        }
    }
    if let Some(s) = args.structure {
        cfg.set("structure", if s == StructureArg::Cpi { "cpi" } else { "dostbc" });
    }
    if args.canonical {
        cfg.set("canonical", true);
    }
    if let Some(b) = args.budget {
        cfg.set("budget", b);
    }
    if let Some(p) = &args.preset {
        cfg.set("preset", p);
    }
    if let Some(s) = ctx.seed {
        cfg.set("seed", s);
    }
    let numeric = numeric_options(
        ctx,
        cfg.parsed("draws")?.unwrap_or(NumericOptions::default().draws),
        cfg.parsed("tol")?.unwrap_or(NumericOptions::default().tol),
    )?;
    let opts = SearchOptions {
        budget: cfg.parsed("budget")?.unwrap_or(dstbc::oracle::DEFAULT_BUDGET),
        numeric: NumericOptions {
            seed: cfg.parsed("seed")?.unwrap_or(numeric.seed),
            ..numeric
        },
        progress: args.progress && !ctx.quiet,
    };
    let canonical = cfg.flag("canonical")?;
    let config_json = json!({
        "budget": opts.budget.to_string(), "draws": opts.numeric.draws, "tol": opts.numeric.tol,
        "seed": opts.numeric.seed, "canonical": canonical,
    });

    if args.all_presets {
        let mut results = Vec::new();
        let mut text = String::new();
        let mut all_within = true;
        for (name, space) in search_presets() {
            let o = exists_code(space.canonical(canonical), &opts).map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
            let (mut v, within) = outcome_json(&o);
            all_within &= within;
            v["preset"] = json!(name);
            results.push(v);
            let _ = writeln!(text, "[{name}]\n{}", outcome_text(&o));
            write_witness(ctx, &format!(".{name}.code"), &o)?;
        }
        let content = match format {
            Format::Json => pretty(&json!({"config": config_json, "results": results, "all_within_bounds": all_within})),
            _ => format!("{text}all witnesses within bounds: {all_within}\n"),
        };
        ctx.emit(&content)?;
        return Ok(Outcome::from_bool(all_within));
    }

    let (n, k, structure, t) = match cfg.get("preset") {
        Some(name) => {
            let (_, space) = search_presets()
                .into_iter()
                .find(|(p, _)| *p == name)
                .ok_or_else(|| CliError::Usage(format!("unknown search preset `{name}` (see --list-presets)")))?;
            (space.n, space.k, space.structure, Some(space.t))
        }
        None => {
            let need = |key: &str| -> Result<usize, CliError> {
                cfg.parsed::<usize>(key)?
                    .ok_or_else(|| CliError::Usage(format!("missing `{key}` (flag --{key} or config key)")))
            };
            let structure = match cfg.get("structure").unwrap_or("cpi") {
                "cpi" | "row_monomial_cpi" => Structure::RowMonomialCpi,
                "dostbc" | "column_monomial_dostbc" => Structure::ColumnMonomialDostbc,
                other => return Err(CliError::Usage(format!("unknown structure `{other}` (cpi or dostbc)"))),
            };
            (need("n")?, need("k")?, structure, cfg.parsed::<usize>("t")?)
        }
    };

    if let (None, Some(t_max)) = (t, cfg.parsed::<usize>("t_max")?) {
        let m = max_rate(n, k, t_max, structure, canonical, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut within = true;
        for o in &m.per_t {
            within &= outcome_json(o).1;
        }
        if let Some(o) = m.per_t.last() {
            write_witness(ctx, ".witness.code", o)?;
        }
        let content = match format {
            Format::Json => {
                let mut v = m.to_json();
                v["config"] = config_json;
                v["within_bound"] = json!(within);
                pretty(&v)
            }
            _ => {
                let mut s = String::new();
                for o in &m.per_t {
                    let _ = writeln!(s, "{}", outcome_text(o));
                }
                match (m.minimal_t(), m.best_rate()) {
                    (Some(t), Some(r)) => {
                        let _ = writeln!(s, "minimal T: {t}\nbest rate: {}", rate_str(r));
                    }
                    _ => {
                        let _ = writeln!(s, "none <= T_max={t_max}");
                    }
                }
                s
            }
        };
        ctx.emit(&content)?;
        if !within {
            ctx.info("error: a witness exceeds its rate bound");
        }
        return Ok(Outcome::from_bool(within && m.minimal_t().is_some()));
    }

    let t = t.ok_or_else(|| CliError::Usage("missing `t` or `t_max`".into()))?;
    let space = SearchSpace::new(n, k, t, structure).canonical(canonical);
    let o = exists_code(space, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
    let (mut v, within) = outcome_json(&o);
    write_witness(ctx, ".witness.code", &o)?;
    let content = match format {
        Format::Json => {
            v["config"] = config_json;
            pretty(&v)
        }
        _ => outcome_text(&o),
    };
    ctx.emit(&content)?;
    if !within {
        ctx.info("error: the witness exceeds its rate bound");
    }
    Ok(Outcome::from_bool(within && o.exists()))
}

pub fn build_family(family: ConstructFamily, n: Option<usize>, k: Option<usize>) -> Result<DistributedCode, CliError> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this family")));
    let usage = |e: construct::ConstructError| CliError::Usage(e.to_string());
    match family {
        ConstructFamily::Alamouti => Ok(construct::alamouti()),
        ConstructFamily::RateHalving => {
            let k = need(k, "k")?;
            let n = n.unwrap_or(match k {
                0..=2 => 2,
                3 | 4 => 4,
                _ => 8,
            });
            construct::rate_halving(n, k).map_err(usage)
        }
        ConstructFamily::Repetition => construct::repetition(need(k, "k")?).map_err(usage),
        ConstructFamily::PairwiseAlamouti => construct::pairwise_alamouti(need(n, "n")?, need(k, "k")?).map_err(usage),
    }
}

pub fn construct_cmd(ctx: &Ctx, args: &ConstructArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json])?;
    let code = build_family(args.family, args.n, args.k)?;
    let text = serialize_code(&code);
    let content = match format {
        Format::Json => pretty(&json!({
            "family": format!("{:?}", args.family),
            "n": code.n_symbols(), "k": code.n_relays(), "t": code.n_slots(),
            "rate": RateString(code.rate()),
            "code": text,
        })),
        _ => text,
    };
    ctx.emit(&content)?;
    Ok(Outcome::Pass)
}

pub fn partition_cmd(ctx: &Ctx, args: &PartitionArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(Format::Json, &[Format::Text, Format::Json])?;
    let code = read_code(&args.code)?;
    let opts = numeric_options(ctx, args.draws, args.tol)?;
    let pr = match partition(&code) {
        Ok(pr) => pr,
        Err(e @ BoundsError::CorrelatedNoise { .. }) => {
            ctx.emit(&match format {
                Format::Json => pretty(&json!({"error": e.to_string(), "verdict": "fail"})),
                _ => format!("{e}\nverdict: fail\n"),
            })?;
            return Ok(Outcome::Fail);
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let (verdicts, error) = match block_rate_check(&pr, &opts) {
        Ok(v) => (v, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let ok = error.is_none()
        && verdicts
            .iter()
            .all(|v| !matches!(v.verdict, BlockVerdict::ViolatesHalf | BlockVerdict::ViolatesOne));
    let report = BoundsReport::new(&code, &pr, verdicts);
    let content = match format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            if let Some(e) = &error {
                v["error"] = json!(e);
            }
            v["verdict"] = json!(if ok { "pass" } else { "fail" });
            pretty(&v)
        }
        _ => {
            let mut s = format!("rate {} (bound {})\n", rate_str(report.rate.0), rate_str(report.bound.0));
            for (i, p) in report.partition.iter().enumerate() {
                let _ = write!(s, "block {}: slots {:?}, relays {:?}, N_w={}", i + 1, p.columns, p.relays, p.n_w);
                match report.verdicts.get(i) {
                    Some(v) => {
                        let _ = writeln!(s, ", rate {} -> {:?}", rate_str(v.rate.0), v.verdict);
                    }
                    None => s.push('\n'),
                }
            }
            if let Some(e) = &error {
                let _ = writeln!(s, "{e}");
            }
            let _ = writeln!(s, "verdict: {}", if ok { "pass" } else { "fail" });
            s
        }
    };
    ctx.emit(&content)?;
    Ok(Outcome::from_bool(ok))
}

const SIM_KEYS: &[&str] = &[
    "preset",
    "scheme",
    "label",
    "code",
    "family",
    "n",
    "k",
    "constellation",
    "snr_db",
    "min_trials",
    "min_bit_errors",
    "max_trials",
    "seed",
    "noiseless",
];

struct ResolvedSim {
    preset: Option<String>,
    description: Option<String>,
    notes: Vec<String>,
    warnings: Vec<String>,
    runs: Vec<SimConfig>,
}

impl ResolvedSim {
    fn to_json(&self) -> Value {
        json!({
            "preset": self.preset,
            "description": self.description,
            "notes": self.notes,
            "warnings": self.warnings,
            "runs": self.runs.iter().map(|r| json!({
                "label": r.label(),
                "scheme": r.scheme,
                "constellation": r.modulation,
                "n": r.code.n_symbols(), "k": r.code.n_relays(), "t": r.code.n_slots(),
                "rate": RateString(r.code.rate()),
                "bits_per_channel_use": r.bits_per_channel_use(),
                "snr_db": r.snr_db_points,
                "min_trials": r.min_trials,
                "min_bit_errors": r.min_bit_errors,
                "max_trials": r.max_trials,
                "seed": r.seed,
                "noiseless": r.noiseless,
                "code": serialize_code(&r.code),
            })).collect::<Vec<_>>(),
        })
    }
}

fn resolve_sim(ctx: &Ctx, args: &SimulateArgs) -> Result<ResolvedSim, CliError> {
    let base_dir = args.config.as_deref().and_then(Path::parent).map(Path::to_path_buf);
    let mut cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    }
    .resolve(SIM_KEYS)?;
    if let Some(p) = &args.preset {
        cfg.set("preset", p);
    }
    if let Some(s) = &args.snr_db {
        cfg.set("snr_db", s);
    }
    for (key, v) in [
        ("min_trials", args.min_trials),
        ("min_bit_errors", args.min_bit_errors),
        ("max_trials", args.max_trials),
        ("seed", ctx.seed),
    ] {
        if let Some(v) = v {
            cfg.set(key, v);
        }
    }
    if args.noiseless {
        cfg.set("noiseless", true);
    }
    let seed = cfg.parsed::<u64>("seed")?.unwrap_or(0);

    let mut resolved = match cfg.get("preset") {
        Some(name) => {
            if let Some(key) = ["scheme", "code", "family", "n", "k", "constellation", "label"]
                .into_iter()
                .find(|k| cfg.get(k).is_some())
            {
                return Err(CliError::Usage(format!("config key `{key}` cannot be combined with a preset")));
            }
            let p = sim_preset(name, seed).ok_or_else(|| {
                CliError::Usage(format!("unknown preset `{name}` (known: {})", SIM_PRESETS.join(", ")))
            })?;
            ResolvedSim {
                preset: Some(p.name.to_string()),
                description: Some(p.description.to_string()),
                notes: p.notes,
                warnings: Vec::new(),
                runs: p.runs,
            }
        }
        None => {
            let scheme: Scheme = cfg
                .parsed("scheme")?
                .ok_or_else(|| CliError::Usage("missing `scheme` (or use a preset)".into()))?;
            let code = match (cfg.get("code"), cfg.get("family")) {
                (Some(path), None) => {
                    let p = Path::new(path);
                    let p = match (&base_dir, p.is_relative()) {
                        (Some(dir), true) => dir.join(p),
                        _ => p.to_path_buf(),
                    };
                    read_code(&p)?
                }
                (None, Some(fam)) => {
                    let family = <ConstructFamily as clap::ValueEnum>::from_str(fam, true)
                        .map_err(|_| CliError::Usage(format!("unknown family `{fam}`")))?;
                    build_family(family, cfg.parsed("n")?, cfg.parsed("k")?)?
                }
                _ => return Err(CliError::Usage("give exactly one of `code` or `family`".into())),
            };
            let modulation: Modulation = cfg.parsed("constellation")?.unwrap_or(Modulation::Qpsk);
            let mut run = SimConfig::new(scheme, code, modulation, Vec::new());
            run.label = cfg.get("label").map(str::to_string);
            ResolvedSim {
                preset: None,
                description: None,
                notes: Vec::new(),
                warnings: Vec::new(),
                runs: vec![run],
            }
        }
    };

    let snr = cfg.list::<f64>("snr_db")?;
    let noiseless = cfg.flag("noiseless")?;
    for run in &mut resolved.runs {
        if let Some(s) = &snr {
            run.snr_db_points = s.clone();
        }
        if let Some(v) = cfg.parsed("min_trials")? {
            run.min_trials = v;
        }
        if let Some(v) = cfg.parsed("min_bit_errors")? {
            run.min_bit_errors = v;
        }
        if let Some(v) = cfg.parsed("max_trials")? {
            run.max_trials = v;
        }
        run.seed = seed;
        run.noiseless = noiseless;
        run.validate().map_err(|e| CliError::Usage(format!("{}: {e}", run.label())))?;
    }
    let effs: Vec<f64> = resolved.runs.iter().map(SimConfig::bits_per_channel_use).collect();
    if effs.iter().any(|e| (e - effs[0]).abs() > 1e-12) {
        resolved.warnings.push(format!(
            "runs differ in spectral efficiency ({}); each is plotted at its own rate",
            resolved
                .runs
                .iter()
                .zip(&effs)
                .map(|(r, e)| format!("{}: {e} bit/use", r.label()))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Ok(resolved)
}

fn points_text(points: &[BerPoint]) -> String {
    let mut s = format!("{:<16} {:>8} {:>12} {:>12} {:>14}\n", "scheme", "snr_db", "trials", "bit_errors", "ber");
    for p in points {
        let _ = writeln!(s, "{:<16} {:>8} {:>12} {:>12} {:>14.6e}", p.scheme, p.snr_db, p.trials, p.bit_errors, p.ber);
    }
    s
}

pub fn simulate(ctx: &Ctx, args: &SimulateArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(Format::Csv, &[Format::Text, Format::Json, Format::Csv])?;
    let resolved = resolve_sim(ctx, args)?;
    let config_json = resolved.to_json();
    for w in &resolved.warnings {
        ctx.info(&format!("warning: {w}"));
    }
    if args.dry_run {
        ctx.emit(&pretty(&config_json))?;
        return Ok(Outcome::Pass);
    }

    let mut points = Vec::new();
    for run in &resolved.runs {
        ctx.info(&format!(
            "[simulate] {} ({}, {} SNR points)",
            run.label(),
            run.modulation,
            run.snr_db_points.len()
        ));
        points.extend(run_ber(run).map_err(|e| CliError::Usage(e.to_string()))?);
    }

    match format {
        Format::Json => ctx.emit(&pretty(&json!({"config": config_json, "points": points})))?,
        Format::Text => ctx.emit(&format!("{}\n{}", pretty(&config_json), points_text(&points)))?,
        Format::Csv => {
            ctx.emit(&to_csv(&points))?;
            match &ctx.out {
                Some(out) => write_file(&sibling(out, ".config.json"), &pretty(&config_json))?,
                None => ctx.info(&pretty(&config_json)),
            }
        }
    }
    if args.plot {
        let out = ctx.out.as_ref().expect("clap requires --out with --plot");
        let name = out.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        write_file(&sibling(out, ".plot.py"), &plot_script(&name))?;
    }
    Ok(Outcome::Pass)
}
