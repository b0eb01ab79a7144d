use clap::{Parser, Subcommand, ValueEnum};
use hankel_convect::bessel::{self, find_roots};
use hankel_convect::config::SimulationConfig;
use hankel_convect::fields::SolvedState;
use hankel_convect::hankel::{self, RadialProfile, SpectralCoeffs};
use hankel_convect::verify;
use hankel_convect::Error;
use serde::Serialize;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Axisymmetric convection solver based on a finite Hankel transform of
/// order 3/2.
#[derive(Parser)]
#[command(name = "hankel-convect", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate positive roots of J_{3/2}(mu * xi0) as CSV on stdout.
    Roots {
        /// Outer radius of the hemispherical domain.
        #[arg(long, default_value_t = 1.0)]
        xi0: f64,
        /// Number of roots.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Solve a configured problem and write one field CSV per output time.
    Solve {
        /// TOML configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the verification suite for a configuration.
    Verify {
        /// TOML configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Optional path for a JSON report.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Forward or inverse Hankel transform of a CSV profile.
    Transform {
        /// Direction of the transform.
        #[arg(long, value_enum)]
        direction: Direction,
        /// Input CSV: `xi,value` samples (forward) or `n,coefficient`
        /// rows (inverse).
        #[arg(long)]
        input: PathBuf,
        /// Outer radius (inverse only; forward takes it from the last
        /// sample node).
        #[arg(long, default_value_t = 1.0)]
        xi0: f64,
        /// Number of modes (forward only).
        #[arg(long, default_value_t = 10)]
        modes: usize,
        /// Number of evaluation points on [0, xi0] (inverse only).
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Quadrature tolerance (forward only).
        #[arg(long, default_value_t = hankel::DEFAULT_QUAD_TOL)]
        quad_tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Serialize)]
struct RunMeta<'a> {
    config: &'a SimulationConfig,
    prandtl: f64,
    rayleigh: f64,
    t_tilde: f64,
    modes: usize,
    quad_tol: f64,
    /// max residual of the CSV temperature fit, when one was performed
    fit_residual: Option<f64>,
    outputs: Vec<OutputMeta>,
}

#[derive(Serialize)]
struct OutputMeta {
    t: f64,
    file: String,
    /// magnitude of the last retained vorticity-series term, maximized
    /// over the sampled radii (series truncation indicator)
    series_tail: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Roots { xi0, count } => cmd_roots(xi0, count),
        Command::Solve { config, out_dir } => cmd_solve(&config, &out_dir),
        Command::Verify { config, json } => cmd_verify(&config, json.as_deref()),
        Command::Transform { direction, input, xi0, modes, points, quad_tol } => {
            cmd_transform(direction, &input, xi0, modes, points, quad_tol)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidArgument(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn cmd_roots(xi0: f64, count: usize) -> Result<ExitCode, Error> {
    let table = find_roots(xi0, count)?;
    let mut out = String::from("n,mu,mu_xi0,j_prime,abs_j\n");
    for (i, &mu) in table.roots().iter().enumerate() {
        let x = mu * xi0;
        let j = bessel::j_three_half(x)?.abs();
        out.push_str(&format!("{},{},{},{},{:e}\n", i + 1, mu, x, table.deriv_at_root()[i], j));
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn format_time(t: f64) -> String {
    format!("{t}")
}

fn cmd_solve(config: &Path, out_dir: &Path) -> Result<ExitCode, Error> {
    let cfg = SimulationConfig::load(config)?;
    let base_dir = config.parent().unwrap_or(Path::new("."));
    let state = SolvedState::from_config(&cfg, base_dir)?;
    std::fs::create_dir_all(out_dir)?;

    let mut outputs = Vec::new();
    for &t in &cfg.times {
        let snap = state.snapshot(&cfg.grid, t)?;
        let file = format!("fields_t{}.csv", format_time(t));
        let path = out_dir.join(&file);
        let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(w, "r,z,u,v,omega,T")?;
        for (i_r, &r) in snap.r.iter().enumerate() {
            for (i_z, &z) in snap.z.iter().enumerate() {
                let k = snap.idx(i_r, i_z);
                if !snap.mask[k] {
                    continue;
                }
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r, z, snap.u[k], snap.v[k], snap.omega[k], snap.temperature[k]
                )?;
            }
        }
        w.flush()?;

        // truncation indicator: tail of the vorticity series along a radius
        let vfield = state.vorticity_at(t)?;
        let mut tail = 0.0f64;
        for i in 1..=20 {
            let xi = state.roots.xi0() * i as f64 / 20.0;
            let (_, last) = hankel::inverse_with_tail(vfield.coeffs(), xi)?;
            tail = tail.max(last);
        }
        outputs.push(OutputMeta { t, file, series_tail: tail });
    }

    let meta = RunMeta {
        config: &cfg,
        prandtl: state.prandtl,
        rayleigh: state.rayleigh,
        t_tilde: state.t_tilde,
        modes: state.roots.len(),
        quad_tol: state.quad_tol,
        fit_residual: state.fit_residual,
        outputs,
    };
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| Error::Config(format!("meta serialization: {e}")))?;
    std::fs::write(out_dir.join("run_meta.json"), json + "\n")?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(config: &Path, json: Option<&Path>) -> Result<ExitCode, Error> {
    let cfg = SimulationConfig::load(config)?;
    let base_dir = config.parent().unwrap_or(Path::new("."));
    let reports = verify::run_suite(&cfg, base_dir)?;

    let mut all_pass = true;
    println!("{:<20} {:>12} {:>12} {:>12}  status", "check", "max_abs", "l2", "threshold");
    for r in &reports {
        let (thresh, status) = match (r.threshold, r.pass) {
            (Some(th), Some(true)) => (format!("{th:.2e}"), "pass"),
            (Some(th), Some(false)) => {
                all_pass = false;
                (format!("{th:.2e}"), "FAIL")
            }
            _ => ("-".into(), "info"),
        };
        println!("{:<20} {:>12.4e} {:>12.4e} {:>12}  {}", r.name, r.max_abs, r.l2, thresh, status);
    }

    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&reports)
            .map_err(|e| Error::Config(format!("report serialization: {e}")))?;
        std::fs::write(path, text + "\n")?;
    }
    if all_pass {
        println!("verification passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verification FAILED");
        Ok(ExitCode::FAILURE)
    }
}

fn read_csv_pairs(path: &Path) -> Result<Vec<(f64, f64)>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        // first and last columns, so forward output (n,mu,coefficient)
        // feeds directly into inverse
        let parts: Vec<&str> = line.split(',').collect();
        let a = parts.first().copied().unwrap_or("").trim();
        let b = parts.last().copied().unwrap_or("").trim();
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(y)) => rows.push((x, y)),
            _ if lineno == 0 => continue, // header
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "{}:{}: expected two numeric columns",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

fn cmd_transform(
    direction: Direction,
    input: &Path,
    xi0: f64,
    modes: usize,
    points: usize,
    quad_tol: f64,
) -> Result<ExitCode, Error> {
    match direction {
        Direction::Forward => {
            let rows = read_csv_pairs(input)?;
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
            let profile = RadialProfile::from_samples(xs, ys)?;
            let roots = find_roots(profile.xi0(), modes)?;
            let coeffs = hankel::forward(&profile, &roots, quad_tol)?;
            println!("n,mu,coefficient");
            for (i, &c) in coeffs.values().iter().enumerate() {
                println!("{},{},{}", i + 1, roots.roots()[i], c);
            }
        }
        Direction::Inverse => {
            if points < 2 {
                return Err(Error::InvalidArgument("points must be >= 2".into()));
            }
            let rows = read_csv_pairs(input)?;
            let roots = find_roots(xi0, rows.len())?;
            let values: Vec<f64> = rows.iter().map(|&(_, c)| c).collect();
            let coeffs = SpectralCoeffs::new(roots, values)?;
            println!("xi,value");
            for i in 0..points {
                let xi = xi0 * i as f64 / (points - 1) as f64;
                println!("{},{}", xi, hankel::inverse(&coeffs, xi)?);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
