//! `fano`: build, verify, enumerate and apply lattice Fano kernels.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification or
//! invariant failure, 3 I/O or malformed input.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fano_core::axioms::{CheckRecord, DEFAULT_TOL};
use fano_core::continuum::{self, continuum_report, GaussianState, QuadratureConfig};
use fano_core::enumerate::{certify_sample, enumerate_kernels};
use fano_core::io::{
    read_sign, read_wigner_csv, write_continuum_csv, write_wigner_csv, EnumerationLine,
    EnumerationSummary, KernelFile, StateFile,
};
use fano_core::kernel::parse_bits;
use fano_core::{
    build_kernel, cohendet_sign, sign_from_bits, state_of_wigner, verify_all, wigner_of_state,
    Error, LatticeDim,
};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "fano", version, about = "Discrete Wigner-function kernels on an N x N lattice")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a kernel from a sign function and write it as JSON.
    Build {
        #[arg(long = "n")]
        n: i64,
        /// `cohendet`, `bits:<+/- per free orbit>` or `file:<path>`.
        #[arg(long)]
        sign: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also store the N^2 matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Run every axiom and covariance check on a kernel file.
    Verify {
        kernel: PathBuf,
        #[arg(long, env = "FANO_TOL", default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// List the admissible kernels for one N.
    Enumerate {
        #[arg(long = "n")]
        n: i64,
        #[arg(long)]
        count_only: bool,
        /// Matrix-verify every member (N <= 4).
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Members to matrix-verify when not certifying; 0 disables.
        #[arg(long, default_value_t = 32)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Wigner grid of a state, as CSV.
    Wigner {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density matrix of a Wigner grid, as JSON.
    Reconstruct {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        wigner: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadrature checks of the continuous Wigner function of a Gaussian.
    ContinuumCheck {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        p0: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 12.0)]
        r_max: f64,
        #[arg(long, default_value_t = 512)]
        steps: usize,
        #[arg(long, default_value_t = 8.0)]
        grid_extent: f64,
        #[arg(long, default_value_t = 129)]
        grid_points: usize,
        /// Translation used by the covariance check.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = continuum::DEFAULT_TOL)]
        tol: f64,
        /// Write the sampled grid here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: 1, msg: msg.into() }
    }

    fn invariant(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidDimension(_)
            | Error::Arity { .. }
            | Error::TooLarge { .. }
            | Error::Config(_)
            | Error::InvalidTolerance(_) => 1,
            Error::Shape(_)
            | Error::InvalidSign(_)
            | Error::UnsupportedDimension { .. }
            | Error::NonRealTrace { .. }
            | Error::NotDensity(_)
            | Error::InconsistentGrid(_)
            | Error::ImaginaryResidue(_) => 2,
            Error::Format(_) | Error::Io(_) => 3,
        };
        Self { code, msg: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be at least 1"));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Build { n, sign, out, matrices } => cmd_build(n, &sign, out.as_deref(), matrices),
        Command::Verify { kernel, tol } => cmd_verify(&kernel, tol),
        Command::Enumerate {
            n,
            count_only,
            certify,
            out,
            sample,
            seed,
        } => cmd_enumerate(n, count_only, certify, out.as_deref(), sample, seed),
        Command::Wigner { kernel, state, out } => cmd_wigner(&kernel, &state, out.as_deref()),
        Command::Reconstruct { kernel, wigner, out } => {
            cmd_reconstruct(&kernel, &wigner, out.as_deref())
        }
        Command::ContinuumCheck {
            q0,
            p0,
            hbar,
            r_max,
            steps,
            grid_extent,
            grid_points,
            a,
            b,
            tol,
            csv,
        } => {
            let cfg = QuadratureConfig {
                r_max,
                steps,
                grid_extent,
                grid_points,
            };
            cmd_continuum_check(q0, p0, hbar, a, b, &cfg, tol, csv.as_deref())
        }
    }
}

fn dim(n: i64) -> Result<LatticeDim, Failure> {
    Ok(LatticeDim::try_from(n)?)
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure { code: 3, msg: format!("{}: {e}", path.display()) })
}

/// Runs `f` against the file at `path`, or stdout when no path is given.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Outcome {
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| Failure { code: 3, msg: format!("{}: {e}", p.display()) })?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    with_output(None, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn cmd_build(n: i64, source: &str, out: Option<&Path>, matrices: bool) -> Outcome {
    let n = dim(n)?;
    let sign = if source == "cohendet" {
        cohendet_sign(n)?
    } else if let Some(bits) = source.strip_prefix("bits:") {
        sign_from_bits(n, &parse_bits(bits).map_err(|e| Failure::usage(e.to_string()))?)?
    } else if let Some(path) = source.strip_prefix("file:") {
        read_sign(open(Path::new(path))?, n)?
    } else {
        return Err(Failure::usage(format!(
            "unknown sign source {source:?}; expected cohendet, bits:<...> or file:<path>"
        )));
    };
    let kernel = build_kernel(&sign)?;
    log::info!("built {}", kernel.id());
    let file = KernelFile::from_kernel(&kernel, matrices);
    with_output(out, |w| {
        file.write(&mut *w)?;
        writeln!(w)?;
        Ok(())
    })
}

fn cmd_verify(path: &Path, tol: f64) -> Outcome {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol).into());
    }
    let loaded = KernelFile::read(open(path)?)?.load()?;
    let mut report = verify_all(&loaded.kernel, tol)?;
    if let Some(dev) = loaded.matrices_dev {
        report.push(CheckRecord::new("matrices_match_sign", dev, tol));
    }
    print_json(&report)?;
    if report.pass {
        Ok(())
    } else {
        let failing: Vec<&str> = report.failing().collect();
        Err(Failure::invariant(format!("failing checks: {}", failing.join(", "))))
    }
}

fn cmd_enumerate(
    n: i64,
    count_only: bool,
    certify: bool,
    out: Option<&Path>,
    sample: usize,
    seed: u64,
) -> Outcome {
    let n = dim(n)?;
    let result = enumerate_kernels(n, certify)?;
    let sampled = if certify || sample == 0 {
        None
    } else {
        Some(certify_sample(n, sample, seed)?)
    };
    let summary = EnumerationSummary {
        n,
        count: result.count,
        certified: result.certified,
        sampled: sampled.as_ref().map(|s| s.sampled),
        sample_pass: sampled.as_ref().map(|s| s.pass()),
    };
    let members = result.signs.unwrap_or_default();
    with_output(out, |w| {
        if !count_only {
            for sign in &members {
                serde_json::to_writer(&mut *w, &EnumerationLine::new(sign))?;
                writeln!(w)?;
            }
        }
        serde_json::to_writer(&mut *w, &summary)?;
        writeln!(w)?;
        Ok(())
    })?;
    match sampled {
        Some(s) if !s.pass() => Err(Failure::invariant(format!(
            "{} of {} sampled kernels failed verification",
            s.sampled - s.passed,
            s.sampled
        ))),
        _ => Ok(()),
    }
}

fn cmd_wigner(kernel: &Path, state: &Path, out: Option<&Path>) -> Outcome {
    let kernel = KernelFile::read(open(kernel)?)?.load()?.kernel;
    let rho = StateFile::read(open(state)?)?.into_state()?;
    let grid = wigner_of_state(&kernel, &rho)?;
    with_output(out, |w| write_wigner_csv(w, &grid))
}

fn cmd_reconstruct(kernel: &Path, wigner: &Path, out: Option<&Path>) -> Outcome {
    let kernel = KernelFile::read(open(kernel)?)?.load()?.kernel;
    let grid = read_wigner_csv(open(wigner)?)?;
    let rho = state_of_wigner(&kernel, &grid)?;
    with_output(out, |w| {
        StateFile::from_state(&rho).write(&mut *w)?;
        writeln!(w)?;
        Ok(())
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_continuum_check(
    q0: f64,
    p0: f64,
    hbar: f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    tol: f64,
    csv: Option<&Path>,
) -> Outcome {
    let state = GaussianState::new(q0, p0, hbar)?;
    let report = continuum_report(&state, a, b, cfg, tol)?;
    if let Some(path) = csv {
        let grid = continuum::wigner_grid(&state, cfg)?;
        with_output(Some(path), |w| write_continuum_csv(w, &grid))?;
    }
    print_json(&report)?;
    if report.pass {
        Ok(())
    } else {
        let failing: Vec<&str> = report.failing().collect();
        Err(Failure::invariant(format!("failing checks: {}", failing.join(", "))))
    }
}
