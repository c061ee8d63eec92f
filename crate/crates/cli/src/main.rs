mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use polarlab::bp::{DecoderConfig, UpdateRule};
use polarlab::exit::{
    extract_vnd_estimate, match_profile, record_scattered, Curve, ExitHistogram, RidgeEstimator, ScatterConfig,
    ScatterResult, TunnelSpec, VndTap, DEFAULT_MIN_COUNT,
};
use polarlab::setup::{CodeSet, SetupParams};
use polarlab::sim::{records_to_csv, run_monte_carlo, CodewordMode, SimConfig, SnrAxis};

use manifest::{write_file, RunManifest};

const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "polarlab", version, about = "Polar codes with an auxiliary LDPC code: construction, BER simulation and scattered EXIT charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polar code (and LDPC code) and write its description files.
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Monte-Carlo BER/BLER sweep.
    Ber(BerArgs),
    /// Record scattered EXIT histograms of the joint decoder.
    ExitScatter(ScatterArgs),
    /// Rank check-degree profiles against a VND curve.
    CndMatch(MatchArgs),
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Reference set-up 1 to 4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4), conflicts_with_all = ["n", "k_good", "n_ldpc"])]
    setup: Option<u8>,
    /// Number of polar stages (N = 2^n) for a custom code.
    #[arg(long, requires = "k_good")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    k_good: Option<usize>,
    #[arg(long, requires = "n", default_value_t = 0)]
    n_ldpc: usize,
    /// LDPC message length; defaults to N_LDPC minus the check count implied by the profile.
    #[arg(long)]
    k_ldpc: Option<usize>,
    /// Check degrees of the LDPC profile, e.g. 4,5,17.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    degrees: Vec<usize>,
    /// Node fractions matching --degrees.
    #[arg(long, value_delimiter = ',')]
    fractions: Option<Vec<f64>>,
    /// Variable degree of the LDPC code.
    #[arg(long, default_value_t = 3)]
    dv: usize,
    /// Design E_s/N0 (dB) of the Bhattacharyya construction.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    design_snr: f64,
    /// Seed of the PEG construction.
    #[arg(long, default_value_t = 1)]
    code_seed: u64,
}

#[derive(Args, Debug, Clone)]
struct DecoderArgs {
    #[arg(long, default_value_t = 60)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = Rule::Boxplus)]
    rule: Rule,
    /// LLR saturation magnitude.
    #[arg(long, default_value_t = 30.0)]
    clip: f64,
    /// Always run --max-iters iterations.
    #[arg(long)]
    no_early_stop: bool,
    /// Reset LDPC edge messages every global iteration.
    #[arg(long)]
    ldpc_reset: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Rule {
    Boxplus,
    Minsum,
}

#[derive(Args, Debug, Clone)]
#[group(id = "snr_choice", multiple = false)]
struct SnrArgs {
    /// E_b/N0 in dB (same as --snr-eb); a value or start:step:stop.
    #[arg(long, group = "snr_choice", allow_hyphen_values = true)]
    snr: Option<String>,
    #[arg(long, group = "snr_choice", allow_hyphen_values = true)]
    snr_eb: Option<String>,
    #[arg(long, group = "snr_choice", allow_hyphen_values = true)]
    snr_es: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct BerArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    snr: SnrArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Maximum frames per SNR point.
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    /// Stop a point once this many bit errors are seen (0 disables).
    #[arg(long, default_value_t = 500)]
    min_bit_errors: u64,
    /// Stop a point once this many frame errors are seen.
    #[arg(long)]
    min_frame_errors: Option<u64>,
    /// Transmit the all-zero codeword.
    #[arg(long)]
    all_zero: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct ScatterArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    snr: SnrArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[arg(long, default_value_t = 500)]
    frames: u64,
    /// Histogram bins per axis.
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Where the polar/VND transfer is measured.
    #[arg(long, value_enum, default_value_t = Tap::Edge)]
    tap: Tap,
    /// Ridge estimator for the exported curves: mode, mean or q<percent> (e.g. q90).
    #[arg(long, default_value = "mode")]
    estimator: String,
    /// Minimum column population for the exported curves.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    min_count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Tap {
    Edge,
    Boundary,
}

#[derive(Args, Debug, Clone)]
struct MatchArgs {
    /// Two-column CSV of the polar/VND curve.
    #[arg(long)]
    vnd: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<usize>,
    /// Fraction grid step.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// Required tunnel opening.
    #[arg(long, default_value_t = 0.01)]
    margin: f64,
    /// Upper end of the checked a-priori range.
    #[arg(long, default_value_t = 0.999)]
    x_max: f64,
    /// VND level that counts as converged (use the top bin center for binned curves).
    #[arg(long, default_value_t = 1.0)]
    saturation: f64,
    /// Rows to print.
    #[arg(long, default_value_t = 20)]
    top: usize,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// Error in the meaning of otherwise well-formed flags.
fn usage_error(kind: ErrorKind, msg: impl std::fmt::Display) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn parse_snr_range(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("bad SNR value '{s}'"));
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, s, b] => {
            let (start, step, stop) = (num(a)?, num(s)?, num(b)?);
            if !(step > 0.0) || stop < start || !start.is_finite() || !stop.is_finite() {
                return Err(format!("bad SNR range '{text}'; expected start:step:stop with step > 0"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| round_db(start + k as f64 * step)).collect())
        }
        _ => Err(format!("bad SNR spec '{text}'; expected a value or start:step:stop")),
    }
}

/// Strip float noise from grid points, e.g. 0.30000000000000004 → 0.3.
fn round_db(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

impl SnrArgs {
    fn resolve(&self) -> (Vec<f64>, SnrAxis) {
        let (text, axis) = match (&self.snr, &self.snr_eb, &self.snr_es) {
            (Some(t), _, _) | (_, Some(t), _) => (t, SnrAxis::EbN0),
            (_, _, Some(t)) => (t, SnrAxis::EsN0),
            _ => usage_error(ErrorKind::MissingRequiredArgument, "one of --snr, --snr-eb or --snr-es is required"),
        };
        match parse_snr_range(text) {
            Ok(points) => (points, axis),
            Err(e) => usage_error(ErrorKind::InvalidValue, e),
        }
    }
}

impl CodeArgs {
    fn params(&self) -> SetupParams {
        if let Some(id) = self.setup {
            return SetupParams::preset(id).expect("range-checked by clap");
        }
        let (Some(n), Some(k_good)) = (self.n, self.k_good) else {
            usage_error(ErrorKind::MissingRequiredArgument, "give --setup or a custom code via --n and --k-good");
        };
        if n == 0 || n > 24 {
            usage_error(ErrorKind::InvalidValue, format!("--n {n} outside 1..=24"));
        }
        let fractions = match &self.fractions {
            Some(f) if f.len() != self.degrees.len() => {
                usage_error(ErrorKind::InvalidValue, "--fractions must have one entry per --degrees entry")
            }
            Some(f) => f.clone(),
            None if self.degrees.len() == 1 => vec![1.0],
            None => usage_error(ErrorKind::MissingRequiredArgument, "--fractions is required with several --degrees"),
        };
        let profile: Vec<(usize, f64)> = self.degrees.iter().copied().zip(fractions).collect();
        let k_ldpc = match self.k_ldpc {
            Some(k) => k,
            None if self.n_ldpc == 0 => 0,
            None => {
                let total: f64 = profile.iter().map(|p| p.1).sum();
                let avg: f64 = profile.iter().map(|&(d, f)| d as f64 * f).sum::<f64>() / total;
                let checks = (self.n_ldpc as f64 * self.dv as f64 / avg).round() as usize;
                self.n_ldpc.saturating_sub(checks)
            }
        };
        SetupParams {
            name: "custom".into(),
            stages: n,
            design_snr_es_db: self.design_snr,
            k_good,
            n_ldpc: self.n_ldpc,
            k_ldpc,
            var_degree: if self.n_ldpc > 0 { self.dv } else { 0 },
            check_profile: if self.n_ldpc > 0 { profile } else { Vec::new() },
            ldpc_seed: self.code_seed,
        }
    }
}

impl DecoderArgs {
    fn config(&self) -> DecoderConfig {
        DecoderConfig {
            max_global_iters: self.max_iters,
            update_rule: match self.rule {
                Rule::Boxplus => UpdateRule::BoxPlus,
                Rule::Minsum => UpdateRule::MinSum,
            },
            clip: self.clip,
            early_stop: !self.no_early_stop,
            ldpc_message_persistence: !self.ldpc_reset,
        }
    }
}

fn parse_estimator(text: &str) -> RidgeEstimator {
    match text {
        "mode" => RidgeEstimator::Mode,
        "mean" => RidgeEstimator::Mean,
        q if q.starts_with('q') => match q[1..].parse::<f64>() {
            Ok(p) if p > 0.0 && p <= 100.0 => RidgeEstimator::Quantile(p / 100.0),
            _ => usage_error(ErrorKind::InvalidValue, format!("bad quantile estimator '{q}'")),
        },
        other => usage_error(ErrorKind::InvalidValue, format!("unknown estimator '{other}' (mode, mean, q<percent>)")),
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn codes_summary(params: &SetupParams, codes: &CodeSet) -> serde_json::Value {
    let p = codes.polar.partition();
    json!({
        "params": params,
        "block_len": codes.polar.block_len(),
        "k_good": p.k_good(),
        "n_ldpc": p.n_ldpc(),
        "k_ldpc": codes.k_ldpc(),
        "f_polar": p.f_polar(),
        "info_bits_per_frame": codes.info_bits_per_frame(),
        "rate_total": codes.rate_total(),
        "rate_polar": codes.rate_polar(),
        "rate_ldpc": codes.rate_ldpc(),
        "ldpc": codes.ldpc.as_ref().map(|c| c.metadata()),
    })
}

fn build(params: &SetupParams) -> Result<CodeSet> {
    params.build().context("building codes")
}

fn cmd_construct(code: &CodeArgs, out: &Path) -> Result<()> {
    let params = code.params();
    let codes = build(&params)?;
    prepare_dir(out)?;
    let summary = codes_summary(&params, &codes);
    let mut manifest = RunManifest::new("construct", None, json!({ "code": params }), summary.clone());
    write_file(out, "polar.json", &serde_json::to_string_pretty(&codes.polar.to_json())?)?;
    write_file(out, "setup.json", &serde_json::to_string_pretty(&summary)?)?;
    manifest.outputs.extend(["polar.json".into(), "setup.json".into()]);
    if let Some(ldpc) = &codes.ldpc {
        write_file(out, "ldpc.alist", &ldpc.to_alist())?;
        write_file(out, "ldpc.json", &serde_json::to_string_pretty(&ldpc.metadata())?)?;
        manifest.outputs.extend(["ldpc.alist".into(), "ldpc.json".into()]);
    }
    manifest.write(out)?;
    let p = codes.polar.partition();
    println!(
        "{}: N={} K_good={} N_LDPC={} K_LDPC={} F_polar={} R={:.6}",
        params.name,
        codes.polar.block_len(),
        p.k_good(),
        p.n_ldpc(),
        codes.k_ldpc(),
        p.f_polar(),
        codes.rate_total()
    );
    Ok(())
}

fn cmd_ber(args: &BerArgs) -> Result<()> {
    let params = args.code.params();
    let (snr_points, snr_axis) = args.snr.resolve();
    let config = SimConfig {
        snr_points,
        snr_axis,
        max_frames: args.frames,
        min_bit_errors: (args.min_bit_errors > 0).then_some(args.min_bit_errors),
        min_frame_errors: args.min_frame_errors,
        master_seed: args.seed,
        decoder: args.decoder.config(),
        codeword: if args.all_zero { CodewordMode::AllZero } else { CodewordMode::Random },
        jobs: args.jobs,
    };
    let codes = build(&params)?;
    prepare_dir(&args.out)?;
    let mut manifest = RunManifest::new(
        "ber",
        Some(args.seed),
        json!({ "code": params, "sim": config }),
        codes_summary(&params, &codes),
    );
    let records = run_monte_carlo(&codes, &config)?;
    let csv = records_to_csv(&records);
    write_file(&args.out, "ber.csv", &csv)?;
    write_file(&args.out, "ber.json", &serde_json::to_string_pretty(&records)?)?;
    manifest.outputs.extend(["ber.csv".into(), "ber.json".into()]);
    manifest.write(&args.out)?;
    print!("{csv}");
    Ok(())
}

fn histogram_meta(hist: &ExitHistogram, result: &ScatterResult, args: &ScatterArgs) -> serde_json::Value {
    json!({
        "role": hist.role(),
        "eb_n0_db": result.eb_n0_db,
        "es_n0_db": result.es_n0_db,
        "bins": hist.bins(),
        "frames": args.frames,
        "total_points": hist.total_points(),
        "top_bin_center": hist.bin_center(hist.bins() - 1),
    })
}

fn cmd_exit_scatter(args: &ScatterArgs) -> Result<()> {
    let params = args.code.params();
    let (points, snr_axis) = args.snr.resolve();
    if points.len() != 1 {
        usage_error(ErrorKind::InvalidValue, "exit-scatter takes a single SNR value");
    }
    let estimator = parse_estimator(&args.estimator);
    let config = ScatterConfig {
        snr_db: points[0],
        snr_axis,
        frames: args.frames,
        seed: args.seed,
        decoder: args.decoder.config(),
        bins: args.bins,
        vnd_tap: match args.tap {
            Tap::Edge => VndTap::Edge,
            Tap::Boundary => VndTap::Boundary,
        },
        jobs: args.jobs,
    };
    let codes = build(&params)?;
    prepare_dir(&args.out)?;
    let mut manifest = RunManifest::new(
        "exit-scatter",
        Some(args.seed),
        json!({ "code": params, "scatter": config, "estimator": estimator, "min_count": args.min_count }),
        codes_summary(&params, &codes),
    );
    let result = record_scattered(&codes, &config)?;
    let mut outputs = Vec::new();
    for (name, hist) in [("vnd", &result.vnd), ("cnd", &result.cnd)] {
        write_file(&args.out, &format!("{name}_hist.csv"), &hist.to_csv())?;
        let meta = histogram_meta(hist, &result, args);
        write_file(&args.out, &format!("{name}_hist.json"), &serde_json::to_string_pretty(&meta)?)?;
        outputs.extend([format!("{name}_hist.csv"), format!("{name}_hist.json")]);
        match extract_vnd_estimate(hist, estimator, args.min_count) {
            Ok(curve) => {
                write_file(&args.out, &format!("{name}_curve.csv"), &curve.to_csv())?;
                outputs.push(format!("{name}_curve.csv"));
            }
            Err(e) => eprintln!("warning: no {name} curve: {e}"),
        }
    }
    let (ens_vnd, ens_cnd) = result.ensemble();
    let mut ens = String::from("iteration,vnd_ia,vnd_ie,cnd_ia,cnd_ie\n");
    for (k, (v, c)) in ens_vnd.iter().zip(&ens_cnd).enumerate() {
        ens.push_str(&format!("{},{},{},{},{}\n", k + 1, v.0, v.1, c.0, c.1));
    }
    write_file(&args.out, "ensemble.csv", &ens)?;
    write_file(&args.out, "trajectories.json", &serde_json::to_string(&result.trajectories)?)?;
    outputs.extend(["ensemble.csv".into(), "trajectories.json".into()]);
    manifest.outputs = outputs;
    manifest.write(&args.out)?;
    println!(
        "{} frames at Eb/N0 {:.3} dB (Es/N0 {:.3} dB): {} points per role, bins {}",
        args.frames,
        result.eb_n0_db,
        result.es_n0_db,
        result.cnd.total_points(),
        args.bins
    );
    Ok(())
}

fn cmd_cnd_match(args: &MatchArgs) -> Result<()> {
    let text = fs::read_to_string(&args.vnd).with_context(|| format!("reading {}", args.vnd.display()))?;
    let vnd = Curve::from_csv(&text)?;
    let spec = TunnelSpec {
        margin: args.margin,
        x_max: args.x_max,
        saturation: args.saturation,
        ..TunnelSpec::default()
    };
    let ranked = match_profile(&vnd, &args.degrees, args.step, &spec)?;
    let mut table = String::from("rank,avg_check_degree,min_gap");
    for d in &args.degrees {
        table.push_str(&format!(",f{d}"));
    }
    table.push('\n');
    for (k, r) in ranked.iter().enumerate() {
        table.push_str(&format!("{},{:.4},{:.4}", k + 1, r.avg_check_degree, r.min_gap));
        for d in &args.degrees {
            let f = r.profile.node_fractions().iter().find(|e| e.0 == *d).map_or(0.0, |e| e.1);
            table.push_str(&format!(",{}", (f * 1e6).round() / 1e6));
        }
        table.push('\n');
    }
    let shown: String = table.lines().take(args.top + 1).map(|l| format!("{l}\n")).collect();
    print!("{shown}");
    if ranked.is_empty() {
        eprintln!("no profile keeps the tunnel open");
    }
    if let Some(dir) = &args.out {
        prepare_dir(dir)?;
        let mut manifest = RunManifest::new(
            "cnd-match",
            None,
            json!({ "vnd": args.vnd, "degrees": args.degrees, "step": args.step, "tunnel": spec }),
            json!(null),
        );
        write_file(dir, "matches.csv", &table)?;
        manifest.outputs.push("matches.csv".into());
        manifest.write(dir)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Construct { code, out } => cmd_construct(code, out),
        Command::Ber(args) => cmd_ber(args),
        Command::ExitScatter(args) => cmd_exit_scatter(args),
        Command::CndMatch(args) => {
            if args.degrees.is_empty() {
                bail!("--degrees is empty");
            }
            cmd_cnd_match(args)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
