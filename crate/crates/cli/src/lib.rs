//! The `pdiv` command line: each subcommand runs one verification and emits
//! a [`Report`] as JSON or TSV.

pub mod cache;
pub mod report;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use pdiv::apps::{
    periodicity_detect, supercongruence_sweep, verify_permutation_divisibility, CycleCutoff, CycleRule,
};
use pdiv::arith::residue_mod_p;
use pdiv::bounds::{floor_lemma_checks, q_sequence, rational_grid, verify_bounds, verify_q_recurrence, Bound, BoundKind};
use pdiv::groups::{classify_abelian_case, named_group_subgroup_counts, GroupSpec, PartitionType};
use pdiv::series::{check_hypotheses, exp_transform, log_transform, parse_series_text, ExpSeries, LogSeries, Theorem};
use pdiv::{vp, Prime, Valuation};
use serde_json::json;

pub use cache::{cache_get_or_compute, cache_path, CacheEvent};
pub use report::{Report, Status};

#[derive(Debug)]
pub enum CliError {
    Core(pdiv::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pdiv::Error> for CliError {
    fn from(e: pdiv::Error) -> CliError {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "pdiv", version, about = "Exact checks of p-adic divisibility bounds for exponential generating functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Directory holding cached h-sequences of groups.
    #[arg(long, global = true, default_value = ".pdiv-cache")]
    pub cache_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a statement's hypotheses on a series file, then its bound on exp of the series.
    AnalyzeSeries {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Defaults to the prime in the file header.
        #[arg(long)]
        p: Option<u64>,
        /// Defaults to the file's truncation order.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Verify a divisibility bound on h_n(G) = |Hom(G, S_n)|.
    VerifyGroup {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 512)]
        n_max: usize,
        #[arg(long)]
        p: Option<u64>,
        /// Use a series statement instead of the group's own bound.
        #[arg(long, value_parser = parse_theorem)]
        theorem: Option<Theorem>,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
    /// The dihedral group of order 2m: the 2-adic bound, or for odd p an n with p not dividing h_n.
    VerifyDihedral {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 512)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Permutations whose cycle lengths are a p^s with a in A.
    VerifyPermutations {
        #[arg(long, value_parser = parse_cutoff)]
        rule: CycleCutoff,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u32,
        /// Comma-separated multipliers.
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
    /// Sweep the binomial-type supercongruence over 1 <= a <= a-max, 0 <= b, c < p.
    Supercongruence {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        a_max: u64,
    },
    /// Look for eventual periodicity of s_n(G) mod p.
    Periodicity {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 400)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Exhaustive checks of the floor-sum inequalities.
    Lemmas {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 200)]
        i_max: u64,
        #[arg(long, default_value_t = 50)]
        j_max: u64,
        /// The halving inequality is checked for -J <= j <= J.
        #[arg(long, default_value_t = 100)]
        halving_j: i64,
        /// Largest denominator of the rational sample points in [-3, 3].
        #[arg(long, default_value_t = 6)]
        grid_den: i64,
    },
}

fn parse_theorem(s: &str) -> std::result::Result<Theorem, String> {
    s.parse().map_err(|e: pdiv::Error| e.to_string())
}

fn parse_cutoff(s: &str) -> std::result::Result<CycleCutoff, String> {
    s.parse().map_err(|e: pdiv::Error| e.to_string())
}

fn prime(p: u64) -> Result<Prime> {
    Ok(Prime::new(p)?)
}

fn parse_spec(spec: &str) -> Result<GroupSpec> {
    Ok(spec.parse()?)
}

/// Parse `args`, run, write the report and return the exit code:
/// 0 on success, 1 when a check fails, 2 on usage or input errors.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli).and_then(|report| emit(&cli, &report).map(|_| report)) {
        Ok(report) => report.status.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Tsv => report.to_tsv(),
    };
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::AnalyzeSeries { input, theorem, l, m, p, n_max } => analyze_series(input, *theorem, *l, *m, *p, *n_max),
        Command::VerifyGroup { spec, n_max, p, theorem, l, m } => {
            verify_group(cli, &parse_spec(spec)?, *n_max, *p, theorem.map(|t| (t, *l, *m)))
        }
        Command::VerifyDihedral { m, n_max, p } => verify_dihedral(cli, *m, *n_max, *p),
        Command::VerifyPermutations { rule, p, l, a, n_max } => verify_permutations(*rule, *p, *l, a, *n_max),
        Command::Supercongruence { p, a_max } => supercongruence(*p, *a_max),
        Command::Periodicity { spec, p, n_max, window } => periodicity(cli, &parse_spec(spec)?, *p, *n_max, *window),
        Command::Lemmas { p, l, i_max, j_max, halving_j, grid_den } => {
            lemmas(*p, *l, *i_max, *j_max, *halving_j, *grid_den)
        }
    }
}

/// Bound rows, tightness claims and the quotient congruence; `s` (the log
/// series) enables the last two. Returns whether everything held.
fn bound_section(report: &mut Report, h: &ExpSeries, s: Option<&LogSeries>, bound: &Bound, n_max: usize) -> Result<bool> {
    let v = verify_bounds(h, bound, 0..=n_max)?;
    report.rows_from(&v.rows);
    report.note("bound", bound.to_string());
    report.note("violations", &v.summary.violations);
    report.note("min_slack", v.summary.min_slack);
    report.note("tight", &v.summary.tight);
    let mut ok = v.summary.violations.is_empty();
    let Some(s) = s else {
        return Ok(ok);
    };
    let claims = bound.tightness_claims(s)?;
    let missed = v.claim_failures(&claims);
    ok &= missed.is_empty();
    report.note("tightness_claims", &claims);
    report.note("claim_failures", &missed);
    if v.summary.violations.is_empty() {
        let q = q_sequence(h, bound)?;
        match verify_q_recurrence(&q, bound, s) {
            Ok(rec) => {
                ok &= rec.holds();
                report.note("quotient", rec);
            }
            Err(pdiv::Error::NoQuotientCongruence) => {
                report.note("quotient", ());
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(ok)
}

fn analyze_series(
    input: &PathBuf,
    theorem: Theorem,
    l: u32,
    m: u32,
    p: Option<u64>,
    n_max: Option<usize>,
) -> Result<Report> {
    let text = fs::read_to_string(input).map_err(|e| CliError::Io(input.clone(), e))?;
    let doc = parse_series_text(&text)?;
    let p = match (p, doc.p) {
        (Some(p), _) => p,
        (None, 0) => return Err(CliError::Usage("the series file carries no prime; pass --p".into())),
        (None, p) => p,
    };
    let p = prime(p)?;
    let s = doc.into_log()?;
    let n_max = n_max.unwrap_or(s.order());
    if n_max > s.order() {
        return Err(CliError::Usage(format!("--n-max {n_max} exceeds the series order {}", s.order())));
    }
    theorem.validate(p, l, m)?;
    let bound = Bound::for_theorem(theorem, p, l, m)?;
    let hypotheses = check_hypotheses(&s, p, theorem, l, m)?;
    let admissible = hypotheses.passed();

    let mut report = Report::new("analyze-series", n_max);
    report
        .param("input", input.display().to_string())
        .param("theorem", theorem.id())
        .param("p", p)
        .param("l", l)
        .param("m", m)
        .param("n_max", n_max);
    report.hypotheses = serde_json::to_value(&hypotheses).expect("serializable");
    let h = exp_transform(&s);
    // Claims and the quotient congruence only follow from the hypotheses.
    let ok = bound_section(&mut report, &h, admissible.then_some(&s), &bound, n_max)?;
    report.status = Status::from_ok(admissible && ok);
    Ok(report)
}

/// The type of a finite abelian p-group (cyclic groups of prime-power order included).
fn abelian_type(g: &GroupSpec) -> Option<PartitionType> {
    match g {
        GroupSpec::Abelian(t) => Some(t.clone()),
        GroupSpec::Cyclic(m) if *m > 1 => {
            let q = (2..=*m).find(|d| m % d == 0)?;
            let mut rest = *m;
            let mut k = 0;
            while rest % q == 0 {
                rest /= q;
                k += 1;
            }
            (rest == 1).then(|| PartitionType::new(Prime::new(q).ok()?, vec![k]).ok()).flatten()
        }
        _ => None,
    }
}

fn verify_group(cli: &Cli, g: &GroupSpec, n_max: usize, p: Option<u64>, theorem: Option<(Theorem, u32, u32)>) -> Result<Report> {
    let abelian = abelian_type(g);
    let p = match (p, &abelian, g) {
        (Some(p), _, _) => prime(p)?,
        (None, Some(t), _) => t.prime(),
        (None, None, GroupSpec::Dihedral(_)) => prime(2)?,
        _ => return Err(CliError::Usage(format!("{g}: pass --p"))),
    };
    let (h, _) = cache_get_or_compute(g, n_max, &cli.cache_dir)?;
    let s = match g {
        GroupSpec::FreeProduct(_) => log_transform(&h)?,
        finite => named_group_subgroup_counts(finite)?.to_log_series(n_max),
    };
    let mut report = Report::new("verify-group", n_max);
    report.param("spec", g.to_string()).param("p", p).param("n_max", n_max);

    if let Some((theorem, l, m)) = theorem {
        report.param("theorem", theorem.id()).param("l", l).param("m", m);
        theorem.validate(p, l, m)?;
        let bound = Bound::for_theorem(theorem, p, l, m)?;
        let hypotheses = check_hypotheses(&s, p, theorem, l, m)?;
        let admissible = hypotheses.passed();
        report.hypotheses = serde_json::to_value(&hypotheses).expect("serializable");
        let ok = bound_section(&mut report, &h, admissible.then_some(&s), &bound, n_max)?;
        report.status = Status::from_ok(admissible && ok);
        return Ok(report);
    }

    let (bound, claims_from) = match (&abelian, g) {
        (Some(t), _) if t.prime() == p => {
            let c = classify_abelian_case(t);
            report.note("classification", &c);
            let kind = if c.dyadic_exception { BoundKind::AbelianDyadic(t.clone()) } else { BoundKind::Abelian(t.clone()) };
            (Bound::new(p, kind)?, Some(&s))
        }
        (_, GroupSpec::Dihedral(m)) if p.get() == 2 => (Bound::new(p, BoundKind::Dihedral { m: *m })?, None),
        _ => {
            return Err(CliError::Usage(format!(
                "no built-in bound for {g} at p = {p}; pass --theorem (and --l, --m)"
            )))
        }
    };
    let ok = bound_section(&mut report, &h, claims_from, &bound, n_max)?;
    report.status = Status::from_ok(ok);
    Ok(report)
}

fn verify_dihedral(cli: &Cli, m: u64, n_max: usize, p: u64) -> Result<Report> {
    if m < 1 {
        return Err(CliError::Usage("--m must be positive".into()));
    }
    let p = prime(p)?;
    if p.get() == 2 {
        let mut report = verify_group(cli, &GroupSpec::Dihedral(m), n_max, Some(2), None)?;
        report.command = "verify-dihedral";
        return Ok(report);
    }
    let g = GroupSpec::Dihedral(m);
    let (h, _) = cache_get_or_compute(&g, n_max, &cli.cache_dir)?;
    let mut report = Report::new("verify-dihedral", n_max);
    report.param("spec", g.to_string()).param("p", p).param("n_max", n_max);
    let valuations: Vec<Valuation> = (0..=n_max).map(|n| vp(&h[n], p)).collect();
    report.rows_from(valuations.iter().enumerate().map(|(n, v)| json!({ "n": n, "valuation": v })));
    // For odd p no nontrivial lower bound exists; the witness shows it.
    let witness = valuations.iter().skip(1).position(|&v| v == Valuation::Finite(0)).map(|i| i + 1);
    report.note("first_indivisible", witness);
    report.status = Status::from_ok(witness.is_some());
    Ok(report)
}

fn verify_permutations(cutoff: CycleCutoff, p: u64, l: u32, a: &str, n_max: usize) -> Result<Report> {
    let multipliers = a
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad multiplier `{x}` in --a"))))
        .collect::<Result<BTreeSet<u64>>>()?;
    let rule = CycleRule::new(cutoff, prime(p)?, l, multipliers)?;
    let r = verify_permutation_divisibility(&rule, n_max)?;
    let mut report = Report::new("verify-permutations", n_max);
    report
        .param("rule", cutoff.name())
        .param("p", p)
        .param("l", l)
        .param("a", &rule.multipliers)
        .param("n_max", n_max);
    report.hypotheses = serde_json::to_value(&r.hypotheses).expect("serializable");
    report.rows_from(&r.rows);
    report
        .note("rule", rule.to_string())
        .note("allowed", &r.allowed)
        .note("bound", &r.bound)
        .note("admissible", r.admissible)
        .note("violations", &r.violations);
    report.status = Status::from_ok(r.admissible && r.passed());
    Ok(report)
}

fn supercongruence(p: u64, a_max: u64) -> Result<Report> {
    let p = prime(p)?;
    let instances = supercongruence_sweep(p, a_max)?;
    let failed: Vec<(u64, u64, u64)> = instances.iter().filter(|i| !i.ok()).map(|i| (i.a, i.b, i.c)).collect();
    let truncation = instances.iter().map(|i| (p.get() * (p.get() * i.a + i.b) + i.c) as usize).max().unwrap_or(0);
    let mut report = Report::new("supercongruence", truncation);
    report.param("p", p).param("a_max", a_max);
    report.rows_from(&instances);
    report
        .note("instances", instances.len())
        .note("passed", instances.len() - failed.len())
        .note("failed", &failed);
    report.status = Status::from_ok(failed.is_empty());
    Ok(report)
}

fn periodicity(cli: &Cli, g: &GroupSpec, p: u64, n_max: usize, window: usize) -> Result<Report> {
    let p = prime(p)?;
    let (h, _) = cache_get_or_compute(g, n_max, &cli.cache_dir)?;
    let s = log_transform(&h)?;
    let residues = s
        .iter()
        .map(|(n, sn)| residue_mod_p(sn, p).ok_or(pdiv::Error::NotIntegral(n)))
        .collect::<pdiv::Result<Vec<u64>>>()?;
    let found = periodicity_detect(&residues, window);
    let mut report = Report::new("periodicity", n_max);
    report.param("spec", g.to_string()).param("p", p).param("n_max", n_max).param("window", window);
    report.rows_from(residues.iter().enumerate().map(|(i, r)| json!({ "n": i + 1, "residue": r })));
    report.summary = serde_json::to_value(&found)
        .expect("serializable")
        .as_object()
        .cloned()
        .expect("struct serializes to an object");
    report.status = Status::from_ok(found.detected());
    Ok(report)
}

fn lemmas(p: u64, l: u32, i_max: u64, j_max: u64, halving_j: i64, grid_den: i64) -> Result<Report> {
    let p = prime(p)?;
    if grid_den < 1 || halving_j < 0 {
        return Err(CliError::Usage("--grid-den must be positive and --halving-j non-negative".into()));
    }
    let grid = rational_grid(grid_den, -3, 3);
    let r = floor_lemma_checks(p, l, i_max, j_max, -halving_j..=halving_j, &grid);
    let mut report = Report::new("lemmas", i_max as usize);
    report
        .param("p", p)
        .param("l", l)
        .param("i_max", i_max)
        .param("j_max", j_max)
        .param("halving_j", halving_j)
        .param("grid_den", grid_den);
    let scaling = r.scaling_counterexamples.iter().map(|(i, j)| json!({ "kind": "scaling", "i": i, "j": j, "x": null }));
    let halving = r.halving_counterexamples.iter().map(|(j, x)| json!({ "kind": "halving", "i": null, "j": j, "x": x }));
    report.rows_from(scaling.chain(halving));
    report
        .note("scaling_checked", r.scaling_checked)
        .note("scaling_counterexamples", r.scaling_counterexamples.len())
        .note("halving_checked", r.halving_checked)
        .note("halving_counterexamples", r.halving_counterexamples.len());
    report.status = Status::from_ok(r.clean());
    Ok(report)
}
