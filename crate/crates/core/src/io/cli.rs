use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{parse_config, Overrides};
use super::manifest::{RunManifest, MANIFEST_FILE};
use super::plot::{emit_plot, PlotData};
use super::table::{read_xy, write_csv, OutputEntry};
use crate::error::{Error, Result};
use crate::experiments::{
    evaluate, fit_power_law, run_distance_scan, run_grid2d_scan, run_noise_map, run_size_scan, Family, GroundReference,
    ScanConfig,
};
use crate::model::{chain_y, grid_2d, GridPlane};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "SPINWIT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "spinwit",
    version,
    about = "Transition amplitudes and entanglement witness for dipole-coupled triplet spins"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV, plot and manifest files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: $SPINWIT_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Dipole prefactor, GHz·nm³.
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Also write an SVG plot next to the CSV.
    #[arg(long, global = true)]
    plot: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one chain or two-row arrangement and print A, λ and the low spectrum.
    Single {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        spacing: Option<f64>,
        /// ZY or XY for a two-row arrangement instead of a chain.
        #[arg(long)]
        plane: Option<GridPlane>,
        /// eigenstate or product.
        #[arg(long)]
        ground: Option<GroundReference>,
    },
    /// A and λ against separation for a fixed-size chain.
    ScanDistance {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        r_step: Option<f64>,
    },
    /// A and λ against chain length.
    ScanSize {
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        /// Switch the dipole coupling off.
        #[arg(long)]
        non_interacting: bool,
    },
    /// A and λ against size for two-row arrangements.
    #[command(name = "scan-2d")]
    Scan2d {
        #[arg(long)]
        plane: Option<GridPlane>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Mean and spread of A and λ over Gaussian zero-field and position noise.
    NoiseMap {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
        /// Points per noise axis.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Fit y = a·x^b to the first two columns of a CSV with a header row.
    Fit { input: PathBuf },
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::validation(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let threads = match cli.common.threads {
        Some(t) => Some(t),
        None => threads_from_env()?,
    };
    if threads == Some(0) {
        return Err(Error::validation("thread count must be at least 1"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::validation(format!("cannot start thread pool: {e}")))?;
    let mut buf = Vec::new();
    let result = pool.install(|| execute(cli, &mut buf));
    out.write_all(&buf).map_err(|e| Error::io("<stdout>", e))?;
    result
}

fn write_line(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(line)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| Error::io("<stdout>", e))
}

fn execute(cli: Cli, out: &mut Vec<u8>) -> Result<()> {
    let Cli { common, command } = cli;
    let mut cfg = match &common.config {
        Some(p) => parse_config(p)?,
        None => ScanConfig::default(),
    };
    let mut ov = Overrides::default();
    ov.apply("seed", &mut cfg.seed, common.seed);
    ov.apply("kappa", &mut cfg.kappa, common.kappa);

    let (family, name) = match &command {
        Command::Single { .. } | Command::Fit { .. } => (None, ""),
        Command::ScanDistance { .. } => (Some(Family::Distance), "scan-distance"),
        Command::ScanSize { .. } => (Some(Family::Size), "scan-size"),
        Command::Scan2d { .. } => (Some(Family::Grid2d), "scan-2d"),
        Command::NoiseMap { .. } => (Some(Family::Noise), "noise-map"),
    };
    if let (Some(f), Some(file_family)) = (family, cfg.family) {
        if f != file_family {
            return Err(Error::validation(format!(
                "config declares family {} but the command runs {}",
                file_family.label(),
                f.label()
            )));
        }
    }
    cfg.family = family.or(cfg.family);

    match command {
        Command::Single {
            n,
            spacing,
            plane,
            ground,
        } => {
            ov.apply("spacing", &mut cfg.spacing, spacing);
            if let Some(g) = ground {
                cfg.solver.ground_reference = g;
            }
            cfg.validate()?;
            let params = cfg.model();
            let geom = match plane {
                Some(p) => grid_2d(n, params.spacing, p)?,
                None => chain_y(n, params.spacing)?,
            }
            .with_uniform_zfs(params.d0);
            let p = evaluate(&geom, &params, &cfg.solver, cfg.seed)?;
            write_line(out, format_args!("amplitude {:.12}", p.amplitude))?;
            write_line(out, format_args!("lambda {:.12}", p.lambda))?;
            write_line(out, format_args!("excited_energy_ghz {:.12}", p.excited_energy))?;
            write_line(out, format_args!("bright_manifolds {}", p.bright_manifolds))?;
            let head: Vec<String> = p.spectrum.iter().map(|e| format!("{e:.9}")).collect();
            write_line(out, format_args!("spectrum {}", head.join(" ")))?;
            Ok(())
        }
        Command::Fit { input } => {
            let (xs, ys) = read_xy(&input)?;
            let f = fit_power_law(&xs, &ys)?;
            write_line(out, format_args!("a = {}", f.a))?;
            write_line(out, format_args!("b = {}", f.b))?;
            write_line(out, format_args!("residual = {:e}", f.residual))?;
            write_line(out, format_args!("iterations = {}", f.iterations))?;
            Ok(())
        }
        Command::ScanDistance {
            n,
            r_min,
            r_max,
            r_step,
        } => {
            ov.apply("distance.n", &mut cfg.distance.n, n);
            ov.apply("distance.r_min", &mut cfg.distance.r_min, r_min);
            ov.apply("distance.r_max", &mut cfg.distance.r_max, r_max);
            ov.apply("distance.r_step", &mut cfg.distance.r_step, r_step);
            let records = run_distance_scan(&cfg)?;
            finish(
                &common,
                name,
                &cfg,
                ov,
                "distance",
                &records,
                PlotData::Distance(&records),
                out,
            )
        }
        Command::ScanSize {
            n_min,
            n_max,
            non_interacting,
        } => {
            ov.apply("size.n_min", &mut cfg.size.n_min, n_min);
            ov.apply("size.n_max", &mut cfg.size.n_max, n_max);
            ov.apply(
                "size.interacting",
                &mut cfg.size.interacting,
                non_interacting.then_some(false),
            );
            let records = run_size_scan(&cfg, cfg.size.interacting)?;
            finish(&common, name, &cfg, ov, "size", &records, PlotData::Size(&records), out)
        }
        Command::Scan2d { plane, n_min, n_max } => {
            ov.apply("grid2d.plane", &mut cfg.grid2d.plane, plane);
            ov.apply("grid2d.n_min", &mut cfg.grid2d.n_min, n_min);
            ov.apply("grid2d.n_max", &mut cfg.grid2d.n_max, n_max);
            let records = run_grid2d_scan(&cfg, cfg.grid2d.plane)?;
            let stem = format!("grid2d_{}", cfg.grid2d.plane.label());
            finish(
                &common,
                name,
                &cfg,
                ov,
                &stem,
                &records,
                PlotData::Grid2d(&records),
                out,
            )
        }
        Command::NoiseMap { n, reps, steps } => {
            ov.apply("noise.n", &mut cfg.noise.n, n);
            ov.apply("reps", &mut cfg.reps, reps);
            ov.apply("noise.steps", &mut cfg.noise.steps, steps);
            let records = run_noise_map(&cfg)?;
            finish(
                &common,
                name,
                &cfg,
                ov,
                "noise",
                &records,
                PlotData::Noise(&records),
                out,
            )
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<R: super::table::CsvRow>(
    common: &Common,
    command: &str,
    cfg: &ScanConfig,
    ov: Overrides,
    stem: &str,
    records: &[R],
    plot: PlotData<'_>,
    out: &mut dyn Write,
) -> Result<()> {
    let dir: &Path = &common.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut manifest = RunManifest::new(command, cfg, ov.0);
    let mut outputs: Vec<OutputEntry> = vec![write_csv(records, &dir.join(format!("{stem}.csv")))?];
    if common.plot {
        outputs.push(emit_plot(plot, plot.default_kind(), &dir.join(format!("{stem}.svg")))?);
    }
    for o in &outputs {
        write_line(out, format_args!("wrote {} ({})", o.path, o.sha256))?;
    }
    manifest.outputs = outputs;
    manifest.write(&dir.join(MANIFEST_FILE))
}
