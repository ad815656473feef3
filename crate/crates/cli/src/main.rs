//! `entrokit` command-line front end. Every verb writes CSV with a one-line
//! header to standard output or to `--out`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entrokit::discrete::{
    log_weighted_growth, binomial_to_poisson, nb_to_logarithmic, poisson_entropy,
    poisson_entropy_derivative, ConvergenceTable, DEFAULT_R_GRID,
};
use entrokit::entropy::{self, kl_divergence, KlPair};
use entrokit::gaussian::{det_psd, fgn_det_sweep, gaussian_entropy, hadamard_gap, CovMatrix};
use entrokit::oracle::{self, OracleConfig};
use entrokit::validation::{log_grid, parse_families, selftest, SelftestConfig, DEFAULT_SEED};
use entrokit::{Distribution, EntropySpec, Error, Exec, MeasureKind};

#[derive(Parser)]
#[command(name = "entrokit", version, about = "Closed-form entropies with numerical cross-checks")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Evaluate one entropy measure for one distribution.
    Entropy {
        #[command(flatten)]
        measure: MeasureArgs,
        /// Also evaluate the numerical oracle.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kullback-Leibler divergence between two members of one family.
    Kl {
        #[arg(long)]
        p: Distribution,
        #[arg(long)]
        q: Distribution,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Modified Shannon entropy.
    Modified {
        #[arg(long)]
        dist: Distribution,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a measure along a grid of one parameter.
    Sweep {
        #[command(flatten)]
        measure: MeasureArgs,
        /// start:stop:steps, with an optional :log suffix.
        #[arg(long)]
        grid: Grid,
        /// Parameter to vary: a distribution parameter, `alpha` or `beta`.
        /// Defaults to the first distribution parameter.
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discrete limit experiments.
    Converge {
        #[command(subcommand)]
        experiment: Experiment,
    },
    /// Gaussian vector determinants: an fGn sweep or one explicit matrix.
    Gauss {
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Comma list or start:stop:steps[:log].
        #[arg(long, default_value = "0:1:21")]
        hurst_grid: Grid,
        /// Rows separated by `;`, entries by `,`. Overrides the fGn sweep.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Oracle equivalence and monotonicity checks.
    Selftest {
        /// Comma list of family tags, or `all`.
        #[arg(long, default_value = "all")]
        families: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    dist: Distribution,
    #[arg(long)]
    measure: MeasureKind,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Subcommand)]
enum Experiment {
    /// Binomial(n, λ/n·(1 + c/n)) towards Poisson(λ).
    Binomial {
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
        n_grid: Vec<u64>,
        #[arg(long, default_value_t = 0.0)]
        perturbation: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conditional negative binomial towards Logarithmic(p) as r → 0.
    Nb {
        #[arg(long)]
        p: f64,
        #[arg(long, value_delimiter = ',')]
        r_grid: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Poisson entropy, its derivative and the log-weighted series on a λ grid.
    Poisson {
        #[arg(long, default_value = "0.01:1000:51:log")]
        grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_grid(s).map(Grid)
    }
}

fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: {t:?}"))
    };
    if !s.contains(':') {
        return s.split(',').map(num).collect();
    }
    let parts: Vec<&str> = s.split(':').collect();
    let log = match parts.len() {
        3 => false,
        4 if parts[3] == "log" => true,
        _ => return Err(format!("expected start:stop:steps[:log], got {s:?}")),
    };
    let (a, b) = (num(parts[0])?, num(parts[1])?);
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| format!("steps must be a positive integer, got {:?}", parts[2]))?;
    if steps == 0 || !a.is_finite() || !b.is_finite() {
        return Err(format!("empty or non-finite grid {s:?}"));
    }
    if log {
        if !(a > 0.0 && b > 0.0) {
            return Err(format!("log grid needs positive bounds, got {s:?}"));
        }
        return Ok(log_grid(a, b, steps));
    }
    if steps == 1 {
        return Ok(vec![a]);
    }
    let h = (b - a) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { b } else { a + h * i as f64 })
        .collect())
}

enum Failure {
    Domain(Error),
    Input(String),
    Report,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e)
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

/// Seventeen significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit(out: &Option<PathBuf>, csv: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn spec_of(m: &MeasureArgs) -> Result<EntropySpec, Error> {
    EntropySpec::from_kind(m.measure, m.alpha, m.beta)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn run_entropy(m: &MeasureArgs, verify: bool, out: &Option<PathBuf>) -> Outcome {
    let spec = spec_of(m)?;
    let value = entropy::evaluate(&spec, &m.dist)?;
    let mut csv = String::from("dist,measure,alpha,beta,value");
    let mut row = format!(
        "{},{},{},{},{}",
        csv_field(&m.dist.to_string()),
        spec.kind(),
        opt(spec.alpha()),
        opt(spec.beta()),
        num(value)
    );
    if verify {
        let o = oracle::measure_by_definition(&spec, &m.dist, &OracleConfig::default())?;
        csv.push_str(",oracle,abs_diff");
        write!(row, ",{},{}", num(o), num((value - o).abs())).unwrap();
    }
    emit(out, &format!("{csv}\n{row}\n"))
}

fn run_kl(p: &Distribution, q: &Distribution, verify: bool, out: &Option<PathBuf>) -> Outcome {
    let pair = KlPair::new(*p, *q)?;
    let value = kl_divergence(&pair)?;
    let mut csv = String::from("p,q,kl");
    let mut row = format!(
        "{},{},{}",
        csv_field(&p.to_string()),
        csv_field(&q.to_string()),
        num(value)
    );
    if verify {
        let o = oracle::kl_integral(p, q, &OracleConfig::default())?.value;
        csv.push_str(",oracle,abs_diff");
        write!(row, ",{},{}", num(o), num((value - o).abs())).unwrap();
    }
    emit(out, &format!("{csv}\n{row}\n"))
}

fn run_modified(d: &Distribution, verify: bool, out: &Option<PathBuf>) -> Outcome {
    let value = entropy::modified_shannon(d)?;
    let mut csv = String::from("dist,modified");
    let mut row = format!("{},{}", csv_field(&d.to_string()), num(value));
    if verify {
        let o = oracle::modified_shannon_integral(d, &OracleConfig::default())?.value;
        csv.push_str(",oracle,abs_diff");
        write!(row, ",{},{}", num(o), num((value - o).abs())).unwrap();
    }
    emit(out, &format!("{csv}\n{row}\n"))
}

fn run_sweep(m: &MeasureArgs, grid: &[f64], param: Option<&str>, out: &Option<PathBuf>) -> Outcome {
    let family = m.dist.family();
    let names = family.param_names();
    let param = param.unwrap_or(names[0]);
    let slot = names.iter().position(|n| *n == param);
    if slot.is_none() && !matches!(param, "alpha" | "beta") {
        return Err(Failure::Input(format!(
            "cannot sweep {param:?}: expected alpha, beta or one of {}",
            names.join(", ")
        )));
    }
    let base = m.dist.values();
    let rows = Exec::default().try_map(grid, |&x| -> Result<f64, Error> {
        let (mut alpha, mut beta, mut values) = (m.alpha, m.beta, base.clone());
        match (slot, param) {
            (Some(i), _) => values[i] = x,
            (None, "alpha") => alpha = Some(x),
            _ => beta = Some(x),
        }
        let d = Distribution::from_values(family, &values)?;
        entropy::evaluate(&EntropySpec::from_kind(m.measure, alpha, beta)?, &d)
    })?;
    let mut csv = format!("{param},{}\n", m.measure);
    for (x, v) in grid.iter().zip(rows) {
        writeln!(csv, "{},{}", num(*x), num(v)).unwrap();
    }
    emit(out, &csv)
}

fn table_csv(driver: &str, t: &ConvergenceTable) -> String {
    let mut csv = format!("{driver},approx,limit,abs_error\n");
    for r in &t.rows {
        writeln!(
            csv,
            "{},{},{},{}",
            num(r.driver),
            num(r.approx),
            num(r.limit),
            num(r.abs_error)
        )
        .unwrap();
    }
    csv
}

fn run_converge(e: &Experiment) -> Outcome {
    match e {
        Experiment::Binomial {
            lambda,
            n_grid,
            perturbation,
            out,
        } => {
            let t = binomial_to_poisson(*lambda, n_grid, *perturbation, Exec::default())?;
            emit(out, &table_csv("n", &t))
        }
        Experiment::Nb { p, r_grid, out } => {
            let grid = r_grid.as_deref().unwrap_or(&DEFAULT_R_GRID);
            let t = nb_to_logarithmic(*p, grid, Exec::default())?;
            emit(out, &table_csv("r", &t))
        }
        Experiment::Poisson { grid, out } => {
            let growth = log_weighted_growth(&grid.0, Exec::default())?;
            let rows = Exec::default().try_map(&grid.0, |&l| {
                Ok::<_, Error>((poisson_entropy(l)?, poisson_entropy_derivative(l)?))
            })?;
            let mut csv = String::from("lambda,entropy,derivative,log_weighted_series\n");
            for (g, (h, dh)) in growth.iter().zip(rows) {
                writeln!(csv, "{},{},{},{}", num(g.lambda), num(h), num(dh), num(g.value)).unwrap();
            }
            emit(out, &csv)
        }
    }
}

fn parse_matrix(s: &str) -> Result<CovMatrix, Failure> {
    let rows = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("bad matrix {s:?}: {e}")))?;
    Ok(CovMatrix::from_rows(&rows)?)
}

fn run_gauss(n: usize, hurst: &[f64], matrix: Option<&str>, out: &Option<PathBuf>) -> Outcome {
    if let Some(s) = matrix {
        let m = parse_matrix(s)?;
        let d = det_psd(&m)?;
        let h = if d.singular {
            String::from("-inf")
        } else {
            num(gaussian_entropy(&m)?)
        };
        let csv = format!(
            "n,det,log_det,rank,entropy,hadamard_gap\n{},{},{},{},{},{}\n",
            m.dim(),
            num(d.det),
            num(d.log_det),
            d.rank,
            h,
            num(hadamard_gap(&m)?)
        );
        return emit(out, &csv);
    }
    if n == 0 {
        return Err(Failure::Input("--n must be at least 1".into()));
    }
    let rows = fgn_det_sweep(n, hurst, Exec::default())?;
    let mut csv = String::from("hurst,det,log_det,singular,entropy\n");
    for r in rows {
        writeln!(
            csv,
            "{},{},{},{},{}",
            num(r.hurst),
            num(r.det),
            num(r.log_det),
            r.singular,
            r.entropy.map(num).unwrap_or_else(|| "-inf".into())
        )
        .unwrap();
    }
    emit(out, &csv)
}

fn run_selftest(families: &str, tol: f64, seed: u64, draws: usize, out: &Option<PathBuf>) -> Outcome {
    if !(tol > 0.0) {
        return Err(Failure::Input(format!("--tol must be positive, got {tol}")));
    }
    let cfg = SelftestConfig {
        families: parse_families(families)?,
        tolerance: tol,
        seed,
        draws,
        ..SelftestConfig::default()
    };
    let report = selftest(&cfg)?;
    let mut csv = String::from("check,count,max_error,failures\n");
    for f in &report.families {
        writeln!(csv, "{},{},{},{}", f.family, f.checks, num(f.max_error), f.failures).unwrap();
    }
    for s in &report.sweeps {
        writeln!(csv, "{},,,{}", csv_field(s.name), u8::from(!s.passed)).unwrap();
    }
    emit(out, &csv)?;
    if report.passed() {
        Ok(())
    } else {
        eprintln!("selftest: failures above tolerance {tol:e}");
        Err(Failure::Report)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.verb {
        Verb::Entropy {
            measure,
            verify,
            out,
        } => run_entropy(&measure, verify, &out),
        Verb::Kl { p, q, verify, out } => run_kl(&p, &q, verify, &out),
        Verb::Modified { dist, verify, out } => run_modified(&dist, verify, &out),
        Verb::Sweep {
            measure,
            grid,
            param,
            out,
        } => run_sweep(&measure, &grid.0, param.as_deref(), &out),
        Verb::Converge { experiment } => run_converge(&experiment),
        Verb::Gauss {
            n,
            hurst_grid,
            matrix,
            out,
        } => run_gauss(n, &hurst_grid.0, matrix.as_deref(), &out),
        Verb::Selftest {
            families,
            tol,
            seed,
            draws,
            out,
        } => run_selftest(&families, tol, seed, draws, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Report) => ExitCode::from(1),
    }
}
