use std::process::{Command, Output};

fn entrokit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entrokit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Splits one CSV line, honouring double quotes.
fn split(line: &str) -> Vec<String> {
    let (mut out, mut cur, mut quoted) = (Vec::new(), String::new(), false);
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    out.push(cur);
    out
}

/// Value of `column` in the first data row.
fn field(csv: &str, column: &str) -> f64 {
    let mut lines = csv.lines();
    let header = split(lines.next().unwrap());
    let i = header.iter().position(|h| h == column).unwrap();
    split(lines.next().unwrap())[i].parse().unwrap()
}

#[test]
fn exponential_shannon_crosses_zero() {
    let o = entrokit(&["entropy", "--dist", "exp:lambda=2.718281828", "--measure", "shannon"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("dist,measure,alpha,beta,value\n"));
    assert!(field(&csv, "value").abs() < 1e-9);
}

#[test]
fn verify_prints_oracle_and_difference() {
    let o = entrokit(&[
        "entropy", "--dist", "gamma:lambda=1.5,mu=2.5", "--measure", "sm", "--alpha", "1.7",
        "--beta", "0.6", "--verify",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    assert!(csv.starts_with("dist,measure,alpha,beta,value,oracle,abs_diff\n"));
    let (v, w, d) = (field(&csv, "value"), field(&csv, "oracle"), field(&csv, "abs_diff"));
    assert_eq!(d, (v - w).abs());
    assert!(d < 1e-8);
}

#[test]
fn kl_of_identical_members_is_zero() {
    let o = entrokit(&["kl", "--p", "exp:lambda=3", "--q", "exp:lambda=3"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "kl"), 0.0);
}

#[test]
fn domain_error_exits_two_with_inequality() {
    let o = entrokit(&[
        "entropy", "--dist", "gamma:lambda=1,mu=0.5", "--measure", "renyi", "--alpha", "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("α(μ−1) ≤ −1"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn unbounded_density_is_a_domain_error() {
    let o = entrokit(&["modified", "--dist", "chisq:nu=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_one() {
    for args in [
        &["entropy", "--dist", "gamma:lambda=1", "--measure", "shannon"][..],
        &["entropy", "--dist", "exp:lambda=-1", "--measure", "shannon"],
        &["entropy", "--dist", "exp:lambda=1", "--measure", "renyi"],
        &["entropy", "--dist", "exp:lambda=1", "--measure", "bogus"],
        &["kl", "--p", "exp:lambda=1", "--q", "gamma:lambda=1,mu=2"],
        &["sweep", "--dist", "exp:lambda=1", "--measure", "shannon", "--grid", "1:2"],
        &["gauss", "--matrix", "1,2;2,1"],
        &["frobnicate"],
    ] {
        let o = entrokit(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn modified_normal() {
    let o = entrokit(&["modified", "--dist", "normal:mean=0,sigma2=1", "--verify"]);
    assert!(o.status.success());
    let v = field(&stdout(&o), "modified");
    assert!((v - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-10);
}

#[test]
fn sweep_rows_follow_grid_order() {
    let o = entrokit(&[
        "sweep", "--dist", "exp:lambda=1", "--measure", "shannon", "--grid", "0.1:10:25:log",
    ]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,shannon"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 25);
    for w in rows.windows(2) {
        assert!(w[1].0 > w[0].0 && w[1].1 < w[0].1);
    }
    for (l, h) in rows {
        assert!((h - (1.0 - l.ln())).abs() < 1e-14);
    }
}

#[test]
fn sweep_over_order() {
    let o = entrokit(&[
        "sweep", "--dist", "laplace:mu=0,lambda=1", "--measure", "gr2", "--alpha", "2",
        "--beta", "3", "--grid", "0.5:1.5:3", "--param", "beta",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("beta,gr2\n"));
    let o = entrokit(&[
        "sweep", "--dist", "exp:lambda=1", "--measure", "shannon", "--grid", "1:2:2",
        "--param", "nu",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn converge_tables() {
    let o = entrokit(&["converge", "binomial", "--lambda", "2", "--n-grid", "10,100,1000"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("n,approx,limit,abs_error\n"));
    assert_eq!(csv.lines().count(), 4);

    let o = entrokit(&["converge", "nb", "--p", "0.5", "--r-grid", "0.1,0.4"]);
    assert_eq!(o.status.code(), Some(1));

    let o = entrokit(&["converge", "poisson", "--grid", "1,10"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("lambda,entropy,derivative,log_weighted_series\n"));
    assert!((field(&csv, "entropy") - 1.304_842_242_256_251_5).abs() < 1e-12);
}

#[test]
fn gauss_sweep_and_matrix() {
    let o = entrokit(&["gauss", "--n", "5", "--hurst-grid", "0.5,1"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "hurst,det,log_det,singular,entropy");
    assert!(rows[1].starts_with("5.0000000000000000e-1,1.0000000000000000e0,"));
    assert!(rows[2].ends_with(",true,-inf"));

    let o = entrokit(&["gauss", "--matrix", "2,1;1,2"]);
    assert!(o.status.success());
    assert!((field(&stdout(&o), "det") - 3.0).abs() < 1e-14);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("entrokit-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = entrokit(&["kl", "--p", "exp:lambda=1", "--q", "exp:lambda=2", "--out", p]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!((field(&csv, "kl") - (1.0 - 2f64.ln())).abs() < 1e-15);
}

#[test]
fn selftest_filters_families() {
    let o = entrokit(&["selftest", "--families", "exp", "--draws", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let csv = stdout(&o);
    let families: Vec<String> = csv
        .lines()
        .skip(1)
        .map(split)
        .filter(|f| !f[1].is_empty())
        .map(|f| f[0].clone())
        .collect();
    assert_eq!(families, ["exp"]);
}

#[test]
fn selftest_tight_tolerance_fails() {
    let o = entrokit(&["selftest", "--families", "exp", "--tol", "1e-15"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("failures"));
}

#[test]
fn output_is_deterministic() {
    let args = ["selftest", "--families", "gamma,laplace", "--seed", "9", "--draws", "4"];
    assert_eq!(entrokit(&args).stdout, entrokit(&args).stdout);
}
