use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use piecewise_fourier::csvfmt::g17;
use piecewise_fourier::eckhoff::shift_factorization_residual;
use piecewise_fourier::model::synth_random;
use piecewise_fourier::oracles::identity_suite;
use piecewise_fourier::pipeline::{error_report, reconstruct, ReconstructionConfig, ReconstructionResult};
use piecewise_fourier::sweep::{localization_errors, run_sweep, two_jump_function, SweepSpec, Table};
use piecewise_fourier::{Bounds, Error, Result, TestFunction};

#[derive(Parser)]
#[command(name = "pwfourier", version, about = "Reconstruct piecewise-smooth functions from Fourier coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random test function from a config file.
    Synth {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Reconstruct a stored test function and report errors as CSV.
    Reconstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "M", alias = "m")]
        m: i64,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long = "K", alias = "k")]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.2)]
        r: f64,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Use the true parameters instead of running the pipeline.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the reconstruction as JSON.
        #[arg(long)]
        result: Option<PathBuf>,
    },
    /// Convergence sweep over M.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Two jumps at 0 and 3, localized around 1/40.
    LocalizeDemo {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 6)]
        d1: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "32,45,64,91,128,181,256,362,512")]
        ms: Vec<i64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the combinatorial identities and the shift factorization.
    Identities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Deserialize)]
struct SynthConfig {
    schema: u32,
    k: usize,
    d1: usize,
    n_smooth: usize,
    seed: u64,
    #[serde(default)]
    bounds: Bounds,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn synth(config: &Path, output: &Path) -> Result<()> {
    let cfg: SynthConfig = serde_json::from_str(&read(config)?).map_err(|e| Error::Config(e.to_string()))?;
    if cfg.schema != 1 {
        return Err(Error::Config(format!("unsupported schema {}", cfg.schema)));
    }
    let f = synth_random(cfg.k, cfg.d1, cfg.n_smooth, cfg.seed, cfg.bounds)?;
    fs::write(output, f.to_json()?)?;
    println!(
        "wrote {}: K = {}, d1 = {}, N = {}, xi = [{}]",
        output.display(),
        f.singular.len(),
        f.singular.d1(),
        f.smooth.bandwidth(),
        f.singular.xis().iter().map(|x| g17(*x)).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}

const RECONSTRUCT_HEADER: [&str; 14] = [
    "M", "d", "j", "xi_true", "xi_est", "xi_err", "l", "A_true", "A_est", "A_err", "sup_err_Dr", "seconds",
    "xi_ref", "status",
];

#[allow(clippy::too_many_arguments)]
fn reconstruct_cmd(
    input: &Path,
    m: i64,
    d: Option<usize>,
    k: Option<usize>,
    r: f64,
    grid: usize,
    oracle: bool,
    output: Option<&Path>,
    result: Option<&Path>,
) -> Result<()> {
    let f = TestFunction::from_json(&read(input)?)?;
    let k = k.unwrap_or(f.singular.len());
    let bounds = f.bounds.unwrap_or_default();
    let d1 = f.singular.d1();
    let cfg = if oracle {
        let d = d.unwrap_or(d1);
        ReconstructionConfig { k, d, d1, m, bounds }
    } else {
        ReconstructionConfig::new(k, d, d1, m, bounds)?
    };
    let t = Instant::now();
    let res = if oracle {
        ReconstructionResult::from_truth(&f, cfg)
    } else {
        reconstruct(&f.symmetric_window(cfg.window_half_width()), &cfg)
    };
    let seconds = t.elapsed().as_secs_f64();
    let xi_ref = (m as f64).powi(-(cfg.d as i32) - 2);
    let mut table = Table::new(&RECONSTRUCT_HEADER);
    let outcome = res.and_then(|res| Ok((error_report(&res, &f, r, grid)?, res)));
    match outcome {
        Ok((rep, res)) => {
            let order: Vec<usize> = {
                // estimate matched to each true jump
                let xis = res.xis();
                f.singular
                    .xis()
                    .iter()
                    .map(|&x| {
                        (0..xis.len())
                            .min_by(|&a, &b| {
                                piecewise_fourier::model::circular_distance(x, xis[a])
                                    .total_cmp(&piecewise_fourier::model::circular_distance(x, xis[b]))
                            })
                            .unwrap_or(0)
                    })
                    .collect()
            };
            for (j, tj) in f.singular.jumps().iter().enumerate() {
                let est = &res.jumps[order[j]];
                for l in 0..=cfg.d.min(tj.magnitudes.len() - 1) {
                    table.push(vec![
                        m.to_string(),
                        cfg.d.to_string(),
                        j.to_string(),
                        g17(tj.xi),
                        g17(est.xi),
                        g17(rep.location_errors[j]),
                        l.to_string(),
                        g17(tj.magnitudes[l]),
                        g17(est.magnitudes[l]),
                        g17(rep.magnitude_errors[j][l]),
                        g17(rep.sup_error),
                        g17(seconds),
                        g17(xi_ref),
                        "ok".into(),
                    ]);
                }
            }
            if let Some(p) = result {
                fs::write(p, res.to_json()?)?;
            }
            emit(&table.to_csv()?, output)
        }
        Err(e) => {
            let nan = g17(f64::NAN);
            let mut row = vec![m.to_string(), cfg.d.to_string()];
            row.extend(std::iter::repeat(nan).take(9));
            row.push(g17(seconds));
            row.push(g17(xi_ref));
            row.push(e.to_string());
            table.push(row);
            emit(&table.to_csv()?, output)?;
            Err(e)
        }
    }
}

fn sweep_cmd(spec: &Path, out_dir: &Path) -> Result<()> {
    let spec = SweepSpec::from_json(&read(spec)?)?;
    let res = run_sweep(&spec)?;
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("trials.csv"), res.trials_table().to_csv()?)?;
    fs::write(out_dir.join("medians.csv"), res.medians_table().to_csv()?)?;
    fs::write(out_dir.join("fits.csv"), res.fits_table().to_csv()?)?;
    fs::write(out_dir.join("plot.svg"), res.svg())?;
    fs::write(out_dir.join("plot.gp"), res.gnuplot("plot_gnuplot.svg"))?;
    for f in &res.fits {
        println!(
            "{:>4}: slope {:>8.3} (reference {:>5.1}), R^2 {:.3}, {} points",
            f.quantity,
            f.slope,
            spec.reference_order(&f.quantity),
            f.r2,
            f.points.len()
        );
    }
    Ok(())
}

fn localize_demo(d: usize, d1: usize, seed: u64, ms: &[i64], output: Option<&Path>) -> Result<()> {
    if d > d1 {
        return Err(Error::Config("d must not exceed d1".into()));
    }
    let f = two_jump_function(d1, seed)?;
    let mut header = vec!["M".to_string(), "xi_err".to_string()];
    header.extend((0..=d).map(|l| format!("A{l}_err")));
    header.push("xi_ref".into());
    header.push("status".into());
    let mut table = Table { header, rows: Vec::new() };
    let mut failed = None;
    for &m in ms {
        let reference = g17((m as f64).powi(-(d as i32) - 2));
        match localization_errors(&f, d, m) {
            Ok(v) => {
                let mut row = vec![m.to_string()];
                row.extend(v.iter().map(|x| g17(*x)));
                row.push(reference);
                row.push("ok".into());
                table.push(row);
            }
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e) => {
                let mut row = vec![m.to_string()];
                row.extend(std::iter::repeat(g17(f64::NAN)).take(d + 2));
                row.push(reference);
                row.push(e.to_string());
                table.push(row);
                failed.get_or_insert(e);
            }
        }
    }
    emit(&table.to_csv()?, output)?;
    failed.map_or(Ok(()), Err)
}

fn identities(seed: u64) -> Result<()> {
    let mut all = true;
    for c in identity_suite(seed) {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        all &= c.passed;
    }
    let mut worst: f64 = 0.0;
    for d in 0..=4 {
        for k in [1, 10, 100, 1000] {
            worst = worst.max(shift_factorization_residual(d, k)?);
        }
    }
    let ok = worst <= 1e-8;
    println!(
        "{} V_k^-1 = S_(k,d) V_0^-1 for d <= 4: max residual {worst:.3e}",
        if ok { "PASS" } else { "FAIL" }
    );
    all &= ok;
    if all {
        Ok(())
    } else {
        Err(Error::Accuracy("identity check failed".into()))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth { config, output } => synth(&config, &output),
        Command::Reconstruct { input, m, d, k, r, grid, oracle, output, result } => {
            reconstruct_cmd(&input, m, d, k, r, grid, oracle, output.as_deref(), result.as_deref())
        }
        Command::Sweep { spec, out_dir } => sweep_cmd(&spec, &out_dir),
        Command::LocalizeDemo { d, d1, seed, ms, output } => localize_demo(d, d1, seed, &ms, output.as_deref()),
        Command::Identities { seed } => identities(seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
