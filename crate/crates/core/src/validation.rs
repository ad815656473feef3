//! Seeded random draws and the closed-form-versus-oracle self test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discrete::{poisson_entropy, poisson_entropy_derivative, poisson_entropy_with};
use crate::distribution::{Distribution, Family};
use crate::entropy::{self, kl_divergence, KlPair};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussian::CovMatrix;
use crate::measure::{EntropySpec, MeasureKind};
use crate::oracle::{self, discrete_entropy_sum, OracleConfig, Transform};

pub const DEFAULT_SEED: u64 = 42;

/// The five families with closed forms for every order-dependent measure.
pub const CLOSED_FORM_FAMILIES: [Family; 5] = [
    Family::Gamma,
    Family::Exponential,
    Family::ChiSquared,
    Family::Laplace,
    Family::LogNormal,
];

/// The six measures with orders or none, excluding modified Shannon.
pub const CORE_MEASURES: [MeasureKind; 6] = [
    MeasureKind::Shannon,
    MeasureKind::Renyi,
    MeasureKind::GeneralizedRenyi1,
    MeasureKind::Tsallis,
    MeasureKind::GeneralizedRenyi2,
    MeasureKind::SharmaMittal,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// A random member of `family` from a moderate parameter box.
pub fn random_distribution<R: Rng>(family: Family, rng: &mut R) -> Distribution {
    let d = match family {
        Family::Gamma => Distribution::gamma(log_uniform(rng, 0.2, 5.0), log_uniform(rng, 0.3, 8.0)),
        Family::Exponential => Distribution::exponential(log_uniform(rng, 0.2, 5.0)),
        Family::ChiSquared => Distribution::chi_squared(rng.gen_range(1..=12)),
        Family::Laplace => {
            Distribution::laplace(rng.gen_range(-3.0..3.0), log_uniform(rng, 0.2, 5.0))
        }
        Family::LogNormal => {
            Distribution::log_normal(rng.gen_range(-1.0..1.0), log_uniform(rng, 0.1, 2.0))
        }
        Family::Normal => Distribution::normal(rng.gen_range(-3.0..3.0), log_uniform(rng, 0.1, 5.0)),
        Family::Uniform => {
            let a = rng.gen_range(-3.0..3.0);
            Distribution::uniform(a, a + log_uniform(rng, 0.1, 10.0))
        }
        Family::Poisson => Distribution::poisson(log_uniform(rng, 0.01, 200.0)),
        Family::Binomial => Distribution::binomial(rng.gen_range(1..=500), rng.gen_range(0.01..0.99)),
        Family::NegBinomialConditional => {
            Distribution::nb_conditional(rng.gen_range(0.05..0.95), log_uniform(rng, 0.001, 10.0))
        }
        Family::Logarithmic => Distribution::logarithmic(rng.gen_range(0.02..0.98)),
    };
    d.expect("parameter box lies inside the family's domain")
}

/// Orders keep away from the removable singularities `α = 1`, `β = 1` and
/// `α = β`, and gamma-type draws keep `α(μ-1) ≥ -0.8`.
fn random_order<R: Rng>(rng: &mut R, d: &Distribution, avoid: &[f64]) -> f64 {
    let shape = d.gamma_params().map(|(_, mu)| mu - 1.0);
    loop {
        let a = log_uniform(rng, 0.2, 4.0);
        let clear = avoid.iter().all(|&x| (a - x).abs() > 0.05);
        let valid = shape.is_none_or(|s| a * s >= -0.8);
        if clear && valid {
            return a;
        }
    }
}

/// A random admissible `(distribution, measure)` pair.
pub fn admissible_draw<R: Rng>(family: Family, kind: MeasureKind, rng: &mut R) -> (Distribution, EntropySpec) {
    let mut d = random_distribution(family, rng);
    // modified Shannon needs a bounded density
    while kind == MeasureKind::ModifiedShannon && d.density_sup().is_err() {
        d = random_distribution(family, rng);
    }
    let spec = match kind {
        MeasureKind::Shannon => Ok(EntropySpec::shannon()),
        MeasureKind::ModifiedShannon => Ok(EntropySpec::modified_shannon()),
        MeasureKind::Renyi => EntropySpec::renyi(random_order(rng, &d, &[1.0])),
        MeasureKind::GeneralizedRenyi1 => EntropySpec::generalized_renyi1(random_order(rng, &d, &[])),
        MeasureKind::Tsallis => EntropySpec::tsallis(random_order(rng, &d, &[1.0])),
        MeasureKind::GeneralizedRenyi2 => {
            let a = random_order(rng, &d, &[]);
            EntropySpec::generalized_renyi2(a, random_order(rng, &d, &[a]))
        }
        MeasureKind::SharmaMittal => {
            let a = random_order(rng, &d, &[1.0]);
            EntropySpec::sharma_mittal(a, random_order(rng, &d, &[1.0]))
        }
    };
    (d, spec.expect("orders drawn inside the admissible set"))
}

/// Same-family pair; with probability 0.1 the two members coincide.
pub fn random_kl_pair<R: Rng>(family: Family, rng: &mut R) -> KlPair {
    let p = random_distribution(family, rng);
    let q = if rng.gen_bool(0.1) {
        p
    } else {
        random_distribution(family, rng)
    };
    KlPair::new(p, q).expect("same family")
}

/// `BᵀB` for `B` with independent uniform(-1, 1) entries; with probability
/// 0.1 a positive diagonal matrix instead.
pub fn random_psd<R: Rng>(n: usize, rng: &mut R) -> CovMatrix {
    if rng.gen_bool(0.1) {
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
        return CovMatrix::diagonal(&d).expect("positive diagonal");
    }
    let b: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = (0..n).map(|k| b[k * n + i] * b[k * n + j]).sum();
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    CovMatrix::new(n, a).expect("Gram matrix of a random square matrix")
}

/// `|closed form - oracle| / (1 + |closed form|)`.
pub fn scaled_error(closed: f64, oracle: f64) -> f64 {
    (closed - oracle).abs() / (1.0 + closed.abs())
}

/// One closed-form value checked against its oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub family: Family,
    pub spec: EntropySpec,
    pub dist: Distribution,
    pub closed: f64,
    pub oracle: f64,
    pub scaled_error: f64,
}

pub fn compare(spec: &EntropySpec, d: &Distribution, cfg: &OracleConfig) -> Result<Comparison> {
    let closed = entropy::evaluate(spec, d)?;
    let oracle = oracle::measure_by_definition(spec, d, cfg)?;
    Ok(Comparison {
        family: d.family(),
        spec: *spec,
        dist: *d,
        closed,
        oracle,
        scaled_error: scaled_error(closed, oracle),
    })
}

/// `draws` seeded random comparisons for each `(family, measure)` cell.
/// Results are grouped by cell in input order.
pub fn oracle_equivalence(
    families: &[Family],
    kinds: &[MeasureKind],
    draws: usize,
    seed: u64,
    cfg: &OracleConfig,
    exec: Exec,
) -> Result<Vec<Comparison>> {
    let mut cases = Vec::with_capacity(families.len() * kinds.len() * draws);
    for &family in families {
        for &kind in kinds {
            // each cell has its own stream so filters do not shift the draws
            let cell = (family as u64) << 32 | kind as u64;
            let mut r = rng(seed ^ cell.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            for _ in 0..draws {
                cases.push(admissible_draw(family, kind, &mut r));
            }
        }
    }
    exec.try_map(&cases, |(d, spec)| compare(spec, d, cfg))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub family: Family,
    pub checks: usize,
    pub max_error: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCheck {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub tolerance: f64,
    pub families: Vec<FamilyReport>,
    pub sweeps: Vec<SweepCheck>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.failures == 0) && self.sweeps.iter().all(|s| s.passed)
    }
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub families: Vec<Family>,
    pub tolerance: f64,
    pub seed: u64,
    pub draws: usize,
    pub oracle: OracleConfig,
    pub exec: Exec,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            tolerance: 1e-8,
            seed: DEFAULT_SEED,
            draws: 20,
            oracle: OracleConfig::default(),
            exec: Exec::default(),
        }
    }
}

fn measures_for(family: Family) -> Vec<MeasureKind> {
    match family {
        f if f.is_discrete() => vec![],
        _ => MeasureKind::ALL.to_vec(),
    }
}

/// Discrete families have no closed forms; their checks are normalization
/// and, for Poisson, the series form of the entropy against the direct sum.
fn discrete_errors(family: Family, cfg: &SelftestConfig) -> Result<Vec<f64>> {
    let mut r = rng(cfg.seed ^ family as u64);
    let dists: Vec<Distribution> = (0..cfg.draws)
        .map(|_| random_distribution(family, &mut r))
        .collect();
    let oracle = cfg.oracle;
    let errs = cfg.exec.try_map(&dists, |d| -> Result<Vec<f64>> {
        let mass = discrete_entropy_sum(d, Transform::PAlpha(1.0), &oracle)?.value;
        let mut e = vec![(mass - 1.0).abs()];
        if let crate::distribution::Params::Poisson { lambda } = d.params() {
            let direct = -discrete_entropy_sum(d, Transform::PLogP, &oracle)?.value;
            let series = poisson_entropy_with(lambda, &oracle)?.value;
            e.push(scaled_error(series, direct));
        }
        Ok(e)
    })?;
    Ok(errs.into_iter().flatten().collect())
}

/// Runs the oracle-equivalence suite on the selected families plus the
/// monotonicity sweeps.
pub fn selftest(cfg: &SelftestConfig) -> Result<SelftestReport> {
    let mut families = Vec::new();
    for &family in &cfg.families {
        let errors: Vec<f64> = if family.is_discrete() {
            discrete_errors(family, cfg)?
        } else {
            let kinds = measures_for(family);
            oracle_equivalence(&[family], &kinds, cfg.draws, cfg.seed, &cfg.oracle, cfg.exec)?
                .into_iter()
                .map(|c| c.scaled_error)
                .collect()
        };
        families.push(FamilyReport {
            family,
            checks: errors.len(),
            max_error: errors.iter().copied().fold(0.0, f64::max),
            failures: errors.iter().filter(|&&e| !(e <= cfg.tolerance)).count(),
        });
    }
    let sweeps = vec![
        SweepCheck {
            name: "poisson entropy increasing, derivative positive and decreasing",
            passed: poisson_monotone(&log_grid(0.01, 100.0, 40))?,
        },
        SweepCheck {
            name: "gamma shannon decreasing in lambda, increasing in mu",
            passed: gamma_monotone(&log_grid(0.1, 10.0, 12), &log_grid(0.1, 10.0, 12)),
        },
        SweepCheck {
            name: "exponential measures decreasing in lambda",
            passed: exponential_monotone(&log_grid(0.05, 20.0, 40)),
        },
        SweepCheck {
            name: "kl nonnegative",
            passed: kl_nonnegative(200, cfg.seed),
        },
    ];
    Ok(SelftestReport {
        tolerance: cfg.tolerance,
        families,
        sweeps,
    })
}

/// `steps` points from `lo` to `hi`, evenly spaced in log scale.
pub fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..steps)
        .map(|i| (a + (b - a) * i as f64 / (steps - 1) as f64).exp())
        .collect()
}

fn strictly(values: &[f64], increasing: bool) -> bool {
    values
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

pub fn poisson_monotone(grid: &[f64]) -> Result<bool> {
    let h = grid.iter().map(|&l| poisson_entropy(l)).collect::<Result<Vec<_>>>()?;
    let dh = grid
        .iter()
        .map(|&l| poisson_entropy_derivative(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(strictly(&h, true) && dh.iter().all(|&v| v > 0.0) && strictly(&dh, false))
}

pub fn gamma_monotone(lambdas: &[f64], mus: &[f64]) -> bool {
    let h = |l: f64, m: f64| entropy::shannon(&Distribution::gamma(l, m).unwrap()).unwrap();
    let rows = mus.iter().all(|&m| {
        let v: Vec<f64> = lambdas.iter().map(|&l| h(l, m)).collect();
        strictly(&v, false)
    });
    let cols = lambdas.iter().all(|&l| {
        let v: Vec<f64> = mus.iter().map(|&m| h(l, m)).collect();
        strictly(&v, true)
    });
    rows && cols
}

fn exponential_monotone(lambdas: &[f64]) -> bool {
    let specs = [
        EntropySpec::shannon(),
        EntropySpec::renyi(0.5).unwrap(),
        EntropySpec::renyi(3.0).unwrap(),
        EntropySpec::generalized_renyi1(2.0).unwrap(),
        EntropySpec::tsallis(0.5).unwrap(),
        EntropySpec::tsallis(2.0).unwrap(),
        EntropySpec::generalized_renyi2(0.5, 2.0).unwrap(),
        EntropySpec::sharma_mittal(2.0, 3.0).unwrap(),
        EntropySpec::sharma_mittal(0.5, 0.3).unwrap(),
    ];
    specs.iter().all(|s| {
        let v: Vec<f64> = lambdas
            .iter()
            .map(|&l| entropy::evaluate(s, &Distribution::exponential(l).unwrap()).unwrap())
            .collect();
        strictly(&v, false)
    })
}

/// KL ≥ -1e-12 on random pairs, and below 1e-12 only for equal members.
pub fn kl_nonnegative(pairs: usize, seed: u64) -> bool {
    let mut r = rng(seed);
    (0..pairs).all(|i| {
        let family = CLOSED_FORM_FAMILIES[i % CLOSED_FORM_FAMILIES.len()];
        let pair = random_kl_pair(family, &mut r);
        let kl = kl_divergence(&pair).unwrap();
        let same = pair.p() == pair.q();
        kl >= -1e-12 && ((kl < 1e-12) == same)
    })
}

/// Parses a family filter like `exp,gamma`; empty means every family.
pub fn parse_families(list: &str) -> Result<Vec<Family>> {
    if matches!(list.trim(), "" | "all") {
        return Ok(Family::ALL.to_vec());
    }
    list.split(',')
        .map(|t| {
            Family::from_tag(t.trim()).ok_or_else(|| Error::Parse(format!("unknown family {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_admissible_and_reproducible() {
        let mut a = rng(7);
        let mut b = rng(7);
        for family in CLOSED_FORM_FAMILIES {
            for kind in CORE_MEASURES {
                let x = admissible_draw(family, kind, &mut a);
                let y = admissible_draw(family, kind, &mut b);
                assert_eq!(x, y);
                assert!(entropy::evaluate(&x.1, &x.0).is_ok());
            }
        }
    }

    #[test]
    fn random_psd_is_symmetric() {
        let mut r = rng(1);
        let m = random_psd(4, &mut r);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
    }

    #[test]
    fn family_filter() {
        assert_eq!(parse_families("exp").unwrap(), vec![Family::Exponential]);
        assert_eq!(parse_families("").unwrap().len(), 11);
        assert!(parse_families("cauchy").is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.01, 100.0, 5);
        assert_eq!(g.len(), 5);
        assert!((g[0] - 0.01).abs() < 1e-15 && (g[4] - 100.0).abs() < 1e-12);
    }
}
