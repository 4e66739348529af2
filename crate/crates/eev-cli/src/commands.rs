//! Implementations of the CLI subcommands.

use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};

use eev_core::bounds::{
    bliss_constant, closed_bound_multiplier, extremal_sweep_26, hardy_classic_check,
    hardy_classic_constant, hardy_lplq_check, mu_beta_threshold_coefficient,
    near_wall_lemma_check, sharpness_gap_26, slab_estimate_check, slab_multiplier, HardyParams,
    SlabProfile, TestFunction1D, ZeroAt,
};
use eev_core::diagnostics::{
    bound_report, records_from_csv, records_to_csv, render_bound_report, sha256_hex,
    DissipationRecord,
};
use eev_core::fields::checkpoint;
use eev_core::solver::{run, EnsembleState, SimConfig};
use eev_core::CoreError;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{parse_config, render_config, ConfigError, RunOptions};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::new(EXIT_CONFIG, e.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::InvalidConfig(_) | CoreError::Domain(_) => EXIT_CONFIG,
            CoreError::Io(_) | CoreError::Malformed(_) => EXIT_IO,
            _ => EXIT_NUMERIC,
        };
        CliError::new(code, e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Result<(SimConfig, RunOptions), CliError> {
    let text = match path {
        Some(p) => read_file(p)?,
        None => String::new(),
    };
    Ok(parse_config(&text)?)
}

/// Thread-count resolution: `EEV_THREADS` overrides the `numerics.threads`
/// key; absent both, the global default stands.
fn configure_threads(opts: &RunOptions) -> Result<(), CliError> {
    let from_env = match std::env::var("EEV_THREADS") {
        Ok(v) => Some(v.parse::<usize>().map_err(|_| {
            CliError::new(EXIT_CONFIG, format!("EEV_THREADS must be a positive integer, got \"{v}\""))
        })?),
        Err(_) => None,
    };
    let threads = from_env.or(opts.threads);
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::new(EXIT_CONFIG, "thread count must be at least 1"));
        }
        // a second initialization in the same process is harmless: keep the
        // existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn write_checkpoint(dir: &Path, name: &str, state: &EnsembleState) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let file = fs::File::create(&path)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    for member in state.ensemble.members() {
        checkpoint::write_vector(&mut w, member)?;
    }
    checkpoint::write_scalar(&mut w, &state.nu_turb)?;
    w.flush().map_err(CoreError::from)?;
    Ok(path)
}

pub fn cmd_run(config_path: &Path, out_dir: &Path, quiet: bool) -> Result<(), CliError> {
    let config_text = read_file(config_path)?;
    let (cfg, opts) = parse_config(&config_text)?;
    configure_threads(&opts)?;

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot create {}: {e}", out_dir.display())))?;
    let ckpt_dir = out_dir.join("checkpoints");
    fs::create_dir_all(&ckpt_dir)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot create {}: {e}", ckpt_dir.display())))?;

    let interval = opts.checkpoint_interval;
    let mut ckpt_files: Vec<PathBuf> = Vec::new();
    let mut pending: Vec<(String, EnsembleState)> = Vec::new();
    let result = run(&cfg, |state, _record| {
        if interval > 0 && state.step > 0 && state.step % interval == 0 {
            pending.push((format!("state_step{:08}.bin", state.step), state.clone()));
        }
        Ok(())
    })?;
    for (name, state) in &pending {
        ckpt_files.push(write_checkpoint(&ckpt_dir, name, state)?);
    }
    ckpt_files.push(write_checkpoint(&ckpt_dir, "state_final.bin", &result.state)?);

    let csv = records_to_csv(&result.records);
    let report_text = render_bound_report(&result.report);
    let echo = render_config(&cfg, &opts);
    write_file(&out_dir.join("diagnostics.csv"), &csv)?;
    write_file(&out_dir.join("bound_report.txt"), &report_text)?;
    write_file(&out_dir.join("config_resolved.toml"), &echo)?;

    // manifest: resolved config digest plus one digest per output file,
    // sorted by relative path so reruns are byte-identical
    let mut entries: Vec<(String, String)> = vec![
        ("bound_report.txt".into(), sha256_hex(report_text.as_bytes())),
        ("config_resolved.toml".into(), sha256_hex(echo.as_bytes())),
        ("diagnostics.csv".into(), sha256_hex(csv.as_bytes())),
    ];
    for path in &ckpt_files {
        let bytes = fs::read(path).map_err(CoreError::from)?;
        let rel = format!("checkpoints/{}", path.file_name().unwrap().to_string_lossy());
        entries.push((rel, sha256_hex(&bytes)));
    }
    entries.sort();
    let mut manifest = String::from("manifest_version = 1\n\n[config]\n");
    manifest.push_str(&format!("config_resolved_sha256 = {}\n", sha256_hex(echo.as_bytes())));
    manifest.push_str("\n[outputs]\n");
    for (name, digest) in &entries {
        manifest.push_str(&format!("{name} = {digest}\n"));
    }
    write_file(&out_dir.join("manifest.txt"), &manifest)?;

    if !quiet {
        println!("run complete: {} steps, {} diagnostic records", result.state.step, result.records.len());
        println!(
            "slab-chain inequality: {} checks, {} violations{}",
            result.chain_checks,
            result.chain_violations.len(),
            if result.chain_violations.is_empty() {
                String::new()
            } else {
                format!(" (at steps {:?})", result.chain_violations)
            }
        );
        print!("{report_text}");
        if let Some(slope) = result.report.nw_slope {
            if slope < 1.5 {
                println!("warning: near-wall scaling exponent {slope:.3} is below 1.5");
            }
        }
        if result.report.re_eff_clamped {
            println!("warning: effective Reynolds number clamped the slab fraction");
        }
        if !result.chain_violations.is_empty() {
            println!(
                "warning: slab-chain inequality violated at {} of {} checks; \
                 refine the vertical resolution",
                result.chain_violations.len(),
                result.chain_checks
            );
        }
        println!("outputs written to {}", out_dir.display());
    }
    Ok(())
}

pub fn cmd_report(run_dir: &Path) -> Result<(), CliError> {
    let cfg_path = run_dir.join("config_resolved.toml");
    let csv_path = run_dir.join("diagnostics.csv");
    let (cfg, _opts) = parse_config(&read_file(&cfg_path)?)?;
    let records: Vec<DissipationRecord> = records_from_csv(&read_file(&csv_path)?)?;
    let report = bound_report(&records, &cfg)?;
    print!("{}", render_bound_report(&report));
    Ok(())
}

pub fn cmd_print_config(config_path: Option<&Path>) -> Result<(), CliError> {
    let (cfg, opts) = load_config(config_path)?;
    print!("{}", render_config(&cfg, &opts));
    Ok(())
}

// ---------------------------------------------------------------------------
// inequality verification suite
// ---------------------------------------------------------------------------

struct SuiteRow {
    inequality: String,
    function: String,
    lhs: f64,
    rhs: f64,
    ratio: f64,
    pass: bool,
}

fn row(inequality: &str, function: &str, lhs: f64, rhs: f64, ratio: f64, pass: bool) -> SuiteRow {
    SuiteRow {
        inequality: inequality.into(),
        function: function.into(),
        lhs,
        rhs,
        ratio,
        pass,
    }
}

/// Random test function vanishing at the origin: `x * (cubic in x) * exp(-c x)`.
fn random_origin_zero(rng: &mut impl Rng, x_max: f64, n: usize) -> TestFunction1D {
    let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let decay = rng.gen_range(0.2..1.0);
    TestFunction1D::from_fn(x_max, n, Some(ZeroAt::Start), |x| {
        x * (c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x) * (-decay * x).exp()
    })
    .expect("valid samples")
}

/// Random non-negative integrable function: a squared trigonometric
/// polynomial with exponential decay.
fn random_nonneg(rng: &mut impl Rng, x_max: f64, n: usize) -> TestFunction1D {
    let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let decay = rng.gen_range(0.3..1.0);
    TestFunction1D::from_fn(x_max, n, None, |x| {
        let g = c[0] + c[1] * (x).sin() + c[2] * (2.0 * x).cos();
        g * g * (-decay * x).exp()
    })
    .expect("valid samples")
}

/// Random slab field vanishing at the wall `z = L`: `(L - z) * (quadratic)`.
fn random_slab(rng: &mut impl Rng, beta: f64, box_l: f64, lines: usize, n: usize) -> SlabProfile {
    let mk_line = |rng: &mut dyn rand::RngCore| {
        let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let z0 = (1.0 - beta) * box_l;
        (0..=n)
            .map(|i| {
                let z = z0 + beta * box_l * i as f64 / n as f64;
                let s = box_l - z;
                s * (c[0] + c[1] * s + c[2] * s * s)
            })
            .collect::<Vec<f64>>()
    };
    let all: Vec<Vec<f64>> = (0..lines).map(|_| mk_line(rng)).collect();
    SlabProfile::new(beta, box_l, all).expect("valid slab profile")
}

const RATIO_SLACK: f64 = 1.0 + 1e-6;

fn hardy_suite(samples: usize) -> Result<(String, Vec<SuiteRow>), CliError> {
    let mut rows = Vec::new();
    let n = samples.max(256);

    // closed-form constants against their expected decimal values
    let c26 = bliss_constant(2.0, 6.0)?;
    let mut constants = String::from("constant,value,expected,pass\n");
    for (name, value, expected, tol) in [
        ("bliss_c26", c26, 0.98014, 1e-4),
        ("hardy_classic_p2", hardy_classic_constant(2.0), 4.0, 1e-12),
        ("slab_multiplier", slab_multiplier(), 0.23092, 1e-4),
        ("closed_bound_multiplier", closed_bound_multiplier(), 1.8474, 1e-3),
        ("mu_beta_threshold", mu_beta_threshold_coefficient(), 0.27064, 1e-4),
    ] {
        let ok = (value - expected).abs() < tol;
        constants.push_str(&format!("{name},{value:.6},{expected},{}\n", if ok { "pass" } else { "FAIL" }));
    }

    // classical Hardy inequality at several exponents
    for p in [1.5, 2.0, 3.0] {
        let linear = TestFunction1D::from_fn(1.0, n, Some(ZeroAt::Start), |x| x)
            .expect("valid samples");
        let r = hardy_classic_check(&linear, p)?;
        rows.push(row(&format!("hardy_classic_p{p}"), "linear", r.lhs, r.rhs, r.ratio, r.ratio <= RATIO_SLACK));

        let mut rng = ChaCha8Rng::seed_from_u64(1000 + (10.0 * p) as u64);
        let mut worst: Option<eev_core::bounds::CheckResult> = None;
        for _ in 0..100 {
            let f = random_origin_zero(&mut rng, 20.0, n);
            let r = hardy_classic_check(&f, p)?;
            if worst.as_ref().is_none_or(|w| r.ratio > w.ratio) {
                worst = Some(r);
            }
        }
        let w = worst.expect("100 draws");
        rows.push(row(
            &format!("hardy_classic_p{p}"),
            "random_worst_of_100",
            w.lhs,
            w.rhs,
            w.ratio,
            w.ratio <= RATIO_SLACK,
        ));
    }

    // Lp-Lq form at (p, q) = (2, 6). Ratios are reported against the quoted
    // Gamma-product constant; the true sharp constant exceeds it by exactly
    // sharpness_gap_26, so ratios up to that factor still confirm the
    // inequality (see the sharpness_gap_26 docs).
    let gap = sharpness_gap_26();
    let lplq_slack = gap * (1.0 + 1e-6);
    let hp = HardyParams::coupled(2.0, 6.0)?;
    let gauss = TestFunction1D::from_fn(40.0, n, None, |x| (-x * x / 4.0).exp())
        .expect("valid samples");
    let r = hardy_lplq_check(&gauss, hp)?;
    rows.push(row("hardy_lplq_26", "gaussian", r.lhs, r.rhs, r.ratio, r.ratio <= lplq_slack));

    let mut rng = ChaCha8Rng::seed_from_u64(2000);
    let mut worst: Option<eev_core::bounds::CheckResult> = None;
    for _ in 0..100 {
        let f = random_nonneg(&mut rng, 40.0, n);
        let r = hardy_lplq_check(&f, hp)?;
        if worst.as_ref().is_none_or(|w| r.ratio > w.ratio) {
            worst = Some(r);
        }
    }
    let w = worst.expect("100 draws");
    rows.push(row("hardy_lplq_26", "random_worst_of_100", w.lhs, w.rhs, w.ratio, w.ratio <= lplq_slack));

    // sharpness: the extremal family must push the ratio up to the gap
    let c_values: Vec<f64> = (0..13).map(|i| 0.25 * 1.26f64.powi(i)).collect();
    let sup = extremal_sweep_26(4 * n, &c_values)?;
    rows.push(row(
        "hardy_lplq_26_sharpness",
        "extremal_family_sweep",
        sup,
        gap,
        sup,
        sup >= 0.999 && sup <= lplq_slack,
    ));

    // near-wall weighted lemma and the slab estimate built from it
    let beta = 0.125;
    let mut rng = ChaCha8Rng::seed_from_u64(3000);
    let linear_profile = {
        let z0 = (1.0 - beta) * 1.0;
        let line: Vec<f64> =
            (0..=n).map(|i| 1.0 - (z0 + beta * i as f64 / n as f64)).collect();
        SlabProfile::new(beta, 1.0, vec![line]).expect("valid slab profile")
    };
    let r = near_wall_lemma_check(&linear_profile)?;
    rows.push(row("near_wall_lemma", "linear_in_wall_distance", r.lhs, r.rhs, r.ratio, r.ratio <= RATIO_SLACK));

    let random_profile = random_slab(&mut rng, beta, 1.0, 20, n);
    let r = near_wall_lemma_check(&random_profile)?;
    rows.push(row("near_wall_lemma", "random_20_lines", r.lhs, r.rhs, r.ratio, r.ratio <= RATIO_SLACK));

    let comps: Vec<SlabProfile> =
        (0..3).map(|_| random_slab(&mut rng, beta, 1.0, 20, n)).collect();
    let r = slab_estimate_check([&comps[0], &comps[1], &comps[2]])?;
    rows.push(row("slab_estimate", "random_3_components", r.lhs, r.rhs, r.ratio, r.ratio <= RATIO_SLACK));

    Ok((constants, rows))
}

pub fn cmd_hardy_verify(samples: usize, output: Option<&Path>) -> Result<(), CliError> {
    let (constants, rows) = hardy_suite(samples)?;
    let mut csv = String::from("inequality,function,lhs,rhs,ratio,pass\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{:.12e},{:.12e},{:.9},{}\n",
            r.inequality,
            r.function,
            r.lhs,
            r.rhs,
            r.ratio,
            if r.pass { "pass" } else { "FAIL" }
        ));
    }
    print!("{constants}\n{csv}");
    if let Some(path) = output {
        write_file(path, &format!("{constants}\n{csv}"))?;
    }
    let failures = rows.iter().filter(|r| !r.pass).count()
        + constants.lines().filter(|l| l.ends_with(",FAIL")).count();
    if failures > 0 {
        return Err(CliError::new(EXIT_NUMERIC, format!("{failures} inequality check(s) failed")));
    }
    Ok(())
}
