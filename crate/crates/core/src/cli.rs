//! Command-line front end shared by the `ptosc` binary and the tests.
//!
//! Every value flag is collected as text, merged over an optional flat
//! `key = value` config file (keys mirror the long flag names) and then
//! validated in one pass, so a bad invocation reports all of its problems
//! at once.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisTruncation, MultiIndex};
use crate::borel::{borel_sum, BorelResult, DEFAULT_NODES};
use crate::error::{Error, Result};
use crate::linalg::{eig_general, eig_hermitian, CMatrix};
use crate::operators::{write_matrix_dump, Discretization};
use crate::perturbation::{branch_eigenvalue, coefficient_growth_fit, required_cutoff, rs_coefficients, PowerSeries};
use crate::potential::{parse_potential, PolynomialPotential};
use crate::verify::{run_check, VerificationReport, VerifyOptions, CHECK_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ptosc", version, about = "Singular values and perturbation series of PT-symmetric oscillators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of H(g), sorted by real part then imaginary part.
    Spectrum(Flags),
    /// Singular values, signed eigenvalues of Q(g) and resolved parity.
    Singular(Flags),
    /// Rayleigh-Schrodinger coefficients of a Q-level.
    Perturb(Flags),
    /// Borel-Leroy sum of the perturbation series.
    Borel(Flags),
    /// Run matrix-level checks and report JSON.
    Verify(Flags),
    /// Track Q-branches over a coupling grid.
    Sweep(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Singular(_) => "singular",
            Command::Perturb(_) => "perturb",
            Command::Borel(_) => "borel",
            Command::Verify(_) => "verify",
            Command::Sweep(_) => "sweep",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Spectrum(f)
            | Command::Singular(f)
            | Command::Perturb(f)
            | Command::Borel(f)
            | Command::Verify(f)
            | Command::Sweep(f) => f,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat key = value file; explicit flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<String>,
    #[arg(long)]
    pub cutoff: Option<String>,
    /// Homogeneous odd polynomial, e.g. "x1^2*x2 + 0.5*x2^3".
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// start:stop:count, endpoints included.
    #[arg(long = "g-grid", allow_hyphen_values = true)]
    pub g_grid: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long = "dump-matrix")]
    pub dump_matrix: Option<PathBuf>,
    /// Unperturbed level as comma-separated quantum numbers (default: ground).
    #[arg(long)]
    pub level: Option<String>,
    /// Highest perturbative order N.
    #[arg(long)]
    pub orders: Option<String>,
    #[arg(long = "order-q")]
    pub order_q: Option<String>,
    /// Pade degrees as M,Mp.
    #[arg(long)]
    pub pade: Option<String>,
    #[arg(long)]
    pub nodes: Option<String>,
    #[arg(long = "k-max")]
    pub k_max: Option<String>,
    /// Comma-separated subset of checks.
    #[arg(long)]
    pub checks: Option<String>,
    /// Number of rows or branches to emit (default: all / 6 branches).
    #[arg(long)]
    pub count: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub threads: Option<String>,
    #[arg(long = "compare-direct")]
    pub compare_direct: bool,
}

const KEYS: &[&str] = &[
    "dim", "cutoff", "potential", "g", "g-grid", "format", "output", "dump-matrix", "level", "orders", "order-q",
    "pade", "nodes", "k-max", "checks", "count", "seed", "threads", "compare-direct",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Fully validated run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub dim: usize,
    /// `None` lets `perturb` and `borel` choose the smallest valid cutoff.
    pub cutoff: Option<usize>,
    pub potential: PolynomialPotential,
    pub couplings: Vec<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub dump_matrix: Option<PathBuf>,
    pub level: MultiIndex,
    pub orders: usize,
    pub order_q: f64,
    pub pade: Option<(usize, usize)>,
    pub nodes: usize,
    pub k_max: usize,
    pub checks: Vec<String>,
    pub count: Option<usize>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub compare_direct: bool,
}

pub const DEFAULT_CUTOFF_1D: usize = 40;
pub const DEFAULT_CUTOFF_2D: usize = 16;
pub const DEFAULT_ORDERS: usize = 16;

/// Parses a flat `key = value` (or `key value`) file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, "true"),
            },
        };
        let k = k.trim_start_matches("--");
        if !KEYS.contains(&k) {
            return Err(Error::Config(format!("config line {}: unknown key '{k}'", n + 1)));
        }
        map.insert(k.to_string(), v.trim_matches('"').to_string());
    }
    Ok(map)
}

fn flag_map(f: &Flags) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: &Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v.clone());
        }
    };
    put("dim", &f.dim);
    put("cutoff", &f.cutoff);
    put("potential", &f.potential);
    put("g", &f.g);
    put("g-grid", &f.g_grid);
    put("format", &f.format);
    put("level", &f.level);
    put("orders", &f.orders);
    put("order-q", &f.order_q);
    put("pade", &f.pade);
    put("nodes", &f.nodes);
    put("k-max", &f.k_max);
    put("checks", &f.checks);
    put("count", &f.count);
    put("seed", &f.seed);
    put("threads", &f.threads);
    let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    put("output", &path(&f.output));
    put("dump-matrix", &path(&f.dump_matrix));
    if f.compare_direct {
        m.insert("compare-direct".into(), "true".into());
    }
    m
}

/// Linear grid `start:stop:count` with both endpoints.
pub fn parse_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("g-grid must be start:stop:count, got '{text}'"));
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| format!("g-grid start '{}' is not a number", parts[0]))?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| format!("g-grid stop '{}' is not a number", parts[1]))?;
    let count: usize = parts[2].trim().parse().map_err(|_| format!("g-grid count '{}' is not an integer", parts[2]))?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(format!("g-grid '{text}' is empty or not finite"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i == count - 1 { stop } else { start + step * i as f64 })
        .collect())
}

impl RunConfig {
    /// Merges defaults, the config file and flags (in increasing priority)
    /// and validates the result. All problems are reported together.
    pub fn resolve(command: &str, flags: &Flags) -> Result<RunConfig> {
        let mut values = BTreeMap::new();
        if let Some(path) = &flags.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
            values = parse_config_file(&text)?;
        }
        values.extend(flag_map(flags));
        Self::from_values(command, &values)
    }

    pub fn from_values(command: &str, v: &BTreeMap<String, String>) -> Result<RunConfig> {
        let mut problems: Vec<String> = Vec::new();
        let get = |k: &str| v.get(k).map(String::as_str);

        fn num<T: std::str::FromStr>(v: Option<&str>, key: &str, problems: &mut Vec<String>) -> Option<T> {
            let s = v?;
            match s.trim().parse::<T>() {
                Ok(x) => Some(x),
                Err(_) => {
                    problems.push(format!("--{key}: cannot parse '{s}'"));
                    None
                }
            }
        }

        let dim: usize = num(get("dim"), "dim", &mut problems).unwrap_or(1);
        if dim == 0 {
            problems.push("--dim must be at least 1".into());
        }
        let dim = dim.max(1);
        let cutoff: Option<usize> = num(get("cutoff"), "cutoff", &mut problems);
        let potential_text = get("potential").unwrap_or("x1^3");
        let potential = match parse_potential(potential_text, dim) {
            Ok(p) => Some(p),
            Err(e) => {
                problems.push(format!("--potential: {e}"));
                None
            }
        };

        let couplings = match (get("g"), get("g-grid")) {
            (Some(_), Some(_)) => {
                problems.push("--g and --g-grid are mutually exclusive".into());
                vec![]
            }
            (_, Some(grid)) => parse_grid(grid).unwrap_or_else(|e| {
                problems.push(format!("--g-grid: {e}"));
                vec![]
            }),
            (g, None) => num::<f64>(Some(g.unwrap_or("0.1")), "g", &mut problems).into_iter().collect(),
        };
        if couplings.iter().any(|g| !g.is_finite()) {
            problems.push("--g must be finite".into());
        }

        let default_format = if matches!(command, "borel" | "verify") { "json" } else { "csv" };
        let format = match get("format").unwrap_or(default_format) {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => {
                problems.push(format!("--format must be csv or json, got '{other}'"));
                Format::Csv
            }
        };

        let level = match get("level") {
            None => MultiIndex::new(vec![0; dim]),
            Some(s) => {
                let parsed: std::result::Result<Vec<u32>, _> =
                    s.trim_matches(|c| c == '(' || c == ')').split(',').map(|x| x.trim().parse::<u32>()).collect();
                match parsed {
                    Ok(e) if e.len() == dim => MultiIndex::new(e),
                    Ok(e) => {
                        problems.push(format!("--level has {} entries but dim is {dim}", e.len()));
                        MultiIndex::new(vec![0; dim])
                    }
                    Err(_) => {
                        problems.push(format!("--level: cannot parse '{s}'"));
                        MultiIndex::new(vec![0; dim])
                    }
                }
            }
        };

        let orders: usize = num(get("orders"), "orders", &mut problems).unwrap_or(DEFAULT_ORDERS);
        let order_q: Option<f64> = num(get("order-q"), "order-q", &mut problems);
        if order_q.is_some_and(|q| !(q > 0.0) || !q.is_finite()) {
            problems.push("--order-q must be positive".into());
        }
        let pade = get("pade").and_then(|s| {
            let p: Vec<std::result::Result<usize, _>> = s.split(',').map(|x| x.trim().parse::<usize>()).collect();
            match p.as_slice() {
                [Ok(m), Ok(mp)] => Some((*m, *mp)),
                _ => {
                    problems.push(format!("--pade must be M,Mp, got '{s}'"));
                    None
                }
            }
        });
        if let Some((m, mp)) = pade {
            if m + mp > orders {
                problems.push(format!("--pade {m},{mp} needs {} coefficients but --orders is {orders}", m + mp));
            }
        }
        let nodes: usize = num(get("nodes"), "nodes", &mut problems).unwrap_or(DEFAULT_NODES);
        if nodes == 0 {
            problems.push("--nodes must be at least 1".into());
        }
        let k_max: usize = num(get("k-max"), "k-max", &mut problems).unwrap_or(10);
        let checks: Vec<String> = match get("checks") {
            None => CHECK_NAMES.iter().map(|s| s.to_string()).collect(),
            Some(s) => s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
        };
        for c in &checks {
            if !CHECK_NAMES.contains(&c.as_str()) {
                problems.push(format!("--checks: unknown check '{c}' (known: {})", CHECK_NAMES.join(", ")));
            }
        }
        let count: Option<usize> = num(get("count"), "count", &mut problems);
        let seed: u64 = num(get("seed"), "seed", &mut problems).unwrap_or(0x5eed);
        let threads: Option<usize> = num(get("threads"), "threads", &mut problems);
        let compare_direct = match get("compare-direct") {
            None | Some("false") => false,
            Some("true") | Some("") => true,
            Some(other) => {
                problems.push(format!("--compare-direct: expected true or false, got '{other}'"));
                false
            }
        };
        if matches!(command, "borel") && couplings.iter().any(|&g| g < 0.0) {
            problems.push("borel: couplings must be non-negative".into());
        }

        if !problems.is_empty() {
            return Err(Error::Config(problems.join("; ")));
        }
        let potential = potential.expect("checked above");
        Ok(RunConfig {
            command: command.to_string(),
            dim,
            cutoff,
            order_q: order_q.unwrap_or_else(|| potential.borel_order()),
            potential,
            couplings,
            format,
            output: get("output").map(PathBuf::from),
            dump_matrix: get("dump-matrix").map(PathBuf::from),
            level,
            orders,
            pade,
            nodes,
            k_max,
            checks,
            count,
            seed,
            threads,
            compare_direct,
        })
    }

    fn matrix_cutoff(&self) -> usize {
        self.cutoff.unwrap_or(if self.dim == 1 { DEFAULT_CUTOFF_1D } else { DEFAULT_CUTOFF_2D })
    }

    fn discretization(&self) -> Result<Discretization> {
        Discretization::new(&BasisTruncation::new(self.dim, self.matrix_cutoff())?, &self.potential)
    }

    fn series_cutoff(&self) -> usize {
        let need = required_cutoff(&self.level, self.orders, &self.potential);
        self.cutoff.unwrap_or(need)
    }
}

/// Text emitted by a command plus whether every verification check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub all_passed: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct SpectrumRow {
    g: f64,
    index: usize,
    re: f64,
    im: f64,
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let disc = cfg.discretization()?;
    dump(cfg, &disc, "H")?;
    let mut rows = Vec::new();
    for &g in &cfg.couplings {
        let values = eig_general(&disc.h_real(g))?.values;
        let take = cfg.count.unwrap_or(values.len());
        rows.extend(values.iter().take(take).enumerate().map(|(index, z)| SpectrumRow {
            g,
            index,
            re: z.re,
            im: z.im,
        }));
    }
    let text = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("g,index,re_lambda,im_lambda\n");
            for r in &rows {
                writeln!(s, "{},{},{},{}", r.g, r.index, r.re, r.im).unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, all_passed: true })
}

#[derive(Debug, Serialize)]
pub struct SingularRow {
    pub g: f64,
    pub index: usize,
    pub mu: f64,
    pub signed: f64,
    /// Parity of the unperturbed level the eigenvector continues, when one
    /// level carries at least half of its weight.
    pub parity: Option<i8>,
}

/// Rows for one coupling, ordered by `μ` then signed value.
pub fn singular_rows(disc: &Discretization, g: f64) -> Result<Vec<SingularRow>> {
    let dec = eig_hermitian(&disc.q_real(g))?;
    let vecs = dec.vectors.as_ref().expect("vectors");
    let mut order: Vec<usize> = (0..dec.values.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (dec.values[a].re, dec.values[b].re);
        x.abs().total_cmp(&y.abs()).then(x.total_cmp(&y))
    });
    Ok(order
        .iter()
        .enumerate()
        .map(|(index, &k)| SingularRow {
            g,
            index,
            mu: dec.values[k].re.abs(),
            signed: dec.values[k].re,
            parity: resolve_parity(disc, vecs, k),
        })
        .collect())
}

fn resolve_parity(disc: &Discretization, vecs: &CMatrix, k: usize) -> Option<i8> {
    let mut weight: BTreeMap<u32, f64> = BTreeMap::new();
    for (i, m) in disc.states().iter().enumerate() {
        *weight.entry(m.principal()).or_default() += vecs[(i, k)].norm_sqr();
    }
    let (&l, &w) = weight.iter().max_by(|a, b| a.1.total_cmp(b.1))?;
    (w >= 0.5).then_some(if l % 2 == 0 { 1 } else { -1 })
}

fn singular_text(rows: &[SingularRow], format: Format) -> String {
    match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("g,index,mu,signed_q,parity\n");
            for r in rows {
                let p = r.parity.map(|p| p.to_string()).unwrap_or_default();
                writeln!(s, "{},{},{},{},{}", r.g, r.index, r.mu, r.signed, p).unwrap();
            }
            s
        }
    }
}

pub fn cmd_singular(cfg: &RunConfig) -> Result<Outcome> {
    let disc = cfg.discretization()?;
    dump(cfg, &disc, "Q")?;
    let mut rows = Vec::new();
    for &g in &cfg.couplings {
        let mut r = singular_rows(&disc, g)?;
        r.truncate(cfg.count.unwrap_or(usize::MAX));
        rows.extend(r);
    }
    Ok(Outcome {
        text: singular_text(&rows, cfg.format),
        all_passed: true,
    })
}

fn series(cfg: &RunConfig) -> Result<PowerSeries> {
    let t = BasisTruncation::new(cfg.dim, cfg.series_cutoff())?;
    rs_coefficients(&t, &cfg.potential, &cfg.level, cfg.orders)
}

pub fn cmd_perturb(cfg: &RunConfig) -> Result<Outcome> {
    let s = series(cfg)?;
    if cfg.dump_matrix.is_some() {
        let disc = Discretization::new(&BasisTruncation::new(cfg.dim, cfg.series_cutoff())?, &cfg.potential)?;
        dump(cfg, &disc, "H")?;
    }
    let fit = coefficient_growth_fit(&s);
    let text = match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                series: &'a PowerSeries,
                growth_fit: Option<crate::perturbation::GrowthFit>,
                growth_fit_error: Option<String>,
            }
            json(&Out {
                series: &s,
                growth_fit: fit.as_ref().ok().copied(),
                growth_fit_error: fit.as_ref().err().map(|e| e.to_string()),
            })
        }
        Format::Csv => {
            let mut buf = Vec::new();
            s.write_csv(&mut buf)?;
            let mut text = String::from_utf8(buf).expect("utf8");
            match &fit {
                Ok(f) => writeln!(
                    text,
                    "# growth_fit a={},c={},q_fit={},residual={},orders_used={}",
                    f.a, f.c, f.q_fit, f.residual, f.orders_used
                )
                .unwrap(),
                Err(e) => writeln!(text, "# growth_fit unavailable: {e}").unwrap(),
            }
            text
        }
    };
    Ok(Outcome { text, all_passed: true })
}

#[derive(Debug, Serialize)]
pub struct BorelOutput {
    #[serde(flatten)]
    pub result: BorelResult,
    pub direct: Option<f64>,
    pub relative_deviation: Option<f64>,
}

pub fn cmd_borel(cfg: &RunConfig) -> Result<Outcome> {
    let s = series(cfg)?;
    let direct_disc = if cfg.compare_direct {
        let l = cfg.cutoff.unwrap_or(0).max(cfg.series_cutoff()).max(if cfg.dim == 1 { 50 } else { 20 });
        Some(Discretization::new(&BasisTruncation::new(cfg.dim, l)?, &cfg.potential)?)
    } else {
        None
    };
    if let Some(d) = &direct_disc {
        dump(cfg, d, "Q")?;
    }
    let mut out = Vec::new();
    for &g in &cfg.couplings {
        let result = borel_sum(&s, g, cfg.order_q, cfg.nodes, cfg.pade)?;
        let direct = match &direct_disc {
            Some(d) => Some(branch_eigenvalue(d, &cfg.level, g)?),
            None => None,
        };
        let relative_deviation = direct.map(|d| (result.value - d).abs() / d.abs());
        out.push(BorelOutput {
            result,
            direct,
            relative_deviation,
        });
    }
    let text = match cfg.format {
        Format::Json if out.len() == 1 => json(&out[0]),
        Format::Json => json(&out),
        Format::Csv => {
            let mut s = String::from(
                "g,q,value,pade_m,pade_mp,pade_fallback,nodes,pole_count,pole_warning,direct,relative_deviation\n",
            );
            for o in &out {
                let r = &o.result;
                let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.g,
                    r.q,
                    r.value,
                    r.pade_degrees.0,
                    r.pade_degrees.1,
                    r.pade_fallback,
                    r.quadrature_nodes,
                    r.continuation_poles.len(),
                    r.pole_warning,
                    opt(o.direct),
                    opt(o.relative_deviation)
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, all_passed: true })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let disc = cfg.discretization()?;
    dump(cfg, &disc, "H")?;
    let opts = VerifyOptions {
        seed: cfg.seed,
        k_max: cfg.k_max,
        ..VerifyOptions::default()
    };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for &g in &cfg.couplings {
        for name in &cfg.checks {
            reports.push(run_check(name, &disc, g, &opts)?);
        }
    }
    let all_passed = reports.iter().all(|r| r.passed);
    let text = match cfg.format {
        Format::Json => json(&reports),
        Format::Csv => {
            let mut s = String::from("check,g,kind,measured_discrepancy,tolerance,passed\n");
            for r in &reports {
                let kind = serde_json::to_value(r.kind).expect("kind");
                writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.check_name,
                    r.parameters.g,
                    kind.as_str().unwrap_or(""),
                    r.measured_discrepancy,
                    r.tolerance,
                    r.passed
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, all_passed })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub branch: usize,
    pub mu: f64,
    pub signed: f64,
    /// `|⟨v_prev, v⟩|` with the matched vector at the previous grid point.
    pub overlap: f64,
}

/// Follows the `count` lowest-`|q|` eigenvectors of `Q` at the first grid
/// point across the grid, matching each step by greedy maximal overlap.
pub fn track_branches(disc: &Discretization, grid: &[f64], count: usize) -> Result<Vec<SweepRow>> {
    let decs: Vec<Result<(Vec<f64>, CMatrix)>> = grid
        .par_iter()
        .map(|&g| {
            let d = eig_hermitian(&disc.q_real(g))?;
            Ok((d.real_values(), d.vectors.expect("vectors")))
        })
        .collect();
    let decs: Vec<(Vec<f64>, CMatrix)> = decs.into_iter().collect::<Result<_>>()?;
    let Some((first_vals, _)) = decs.first() else {
        return Ok(vec![]);
    };
    let n = first_vals.len();
    let count = count.min(n);
    let mut start: Vec<usize> = (0..n).collect();
    start.sort_by(|&a, &b| {
        let (x, y) = (first_vals[a], first_vals[b]);
        x.abs().total_cmp(&y.abs()).then(x.total_cmp(&y))
    });
    let mut current: Vec<usize> = start[..count].to_vec();
    let mut rows = Vec::with_capacity(grid.len() * count);
    for (b, &k) in current.iter().enumerate() {
        rows.push(SweepRow {
            g: grid[0],
            branch: b,
            mu: first_vals[k].abs(),
            signed: first_vals[k],
            overlap: 1.0,
        });
    }
    for step in 1..grid.len() {
        let (_, prev_vecs) = &decs[step - 1];
        let (vals, vecs) = &decs[step];
        // overlaps of tracked vectors with every candidate
        let overlap = prev_vecs.adjoint().matmul(vecs);
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(count * n);
        for (b, &pk) in current.iter().enumerate() {
            for k in 0..n {
                pairs.push((overlap[(pk, k)].norm(), b, k));
            }
        }
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut assigned = vec![None; count];
        let mut taken = vec![false; n];
        for (o, b, k) in pairs {
            if assigned[b].is_none() && !taken[k] {
                assigned[b] = Some((k, o));
                taken[k] = true;
            }
        }
        for (b, a) in assigned.iter().enumerate() {
            let (k, o) = a.expect("every branch matched");
            current[b] = k;
            rows.push(SweepRow {
                g: grid[step],
                branch: b,
                mu: vals[k].abs(),
                signed: vals[k],
                overlap: o,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let disc = cfg.discretization()?;
    dump(cfg, &disc, "Q")?;
    let count = cfg.count.unwrap_or(6);
    let rows = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| track_branches(&disc, &cfg.couplings, count))?,
        None => track_branches(&disc, &cfg.couplings, count)?,
    };
    let text = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("g,branch,mu,signed_q,overlap\n");
            for r in &rows {
                writeln!(s, "{},{},{},{},{}", r.g, r.branch, r.mu, r.signed, r.overlap).unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, all_passed: true })
}

fn dump(cfg: &RunConfig, disc: &Discretization, which: &str) -> Result<()> {
    let Some(path) = &cfg.dump_matrix else { return Ok(()) };
    let g = cfg.couplings.first().copied().unwrap_or(0.0);
    let op = if which == "Q" { disc.q_real(g) } else { disc.h_real(g) };
    let mut buf = Vec::new();
    write_matrix_dump(&mut buf, which, &op, disc.potential(), Complex64::new(g, 0.0))?;
    write_file(path, &buf)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command.as_str() {
        "spectrum" => cmd_spectrum(cfg),
        "singular" => cmd_singular(cfg),
        "perturb" => cmd_perturb(cfg),
        "borel" => cmd_borel(cfg),
        "verify" => cmd_verify(cfg),
        "sweep" => cmd_sweep(cfg),
        other => Err(Error::Config(format!("unknown command '{other}'"))),
    }
}

/// Exit code for an error: configuration problems are 2, anything raised
/// by the numerics is 3.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Validation(_) | Error::DimensionMismatch { .. } => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

/// Runs a parsed command line, writing output to `--output` or `stdout` and
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run<W: Write, E: Write>(cli: &Cli, stdout: &mut W, stderr: &mut E) -> i32 {
    let cfg = match RunConfig::resolve(cli.command.name(), cli.command.flags()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cfg.output {
        Some(p) => write_file(p, outcome.text.as_bytes()),
        None => stdout.write_all(outcome.text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_SOLVER;
    }
    if outcome.all_passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: &str, pairs: &[(&str, &str)]) -> Result<RunConfig> {
        let m = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        RunConfig::from_values(command, &m)
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.2:0.2:1").unwrap(), vec![0.2]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn errors_are_aggregated() {
        let e = cfg("spectrum", &[("dim", "x"), ("format", "xml"), ("potential", "x1^2")]).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("--dim") && msg.contains("--format") && msg.contains("--potential"), "{msg}");
        assert_eq!(exit_code(&e), EXIT_CONFIG);
    }

    #[test]
    fn parse_error_keeps_position() {
        let e = cfg("spectrum", &[("potential", "x1^3 +* x1")]).unwrap_err();
        assert!(e.to_string().contains("position"), "{e}");
    }

    #[test]
    fn config_file_keys() {
        let m = parse_config_file("# comment\ndim = 2\ncutoff 8\n--potential = \"x1^2*x2\"\ncompare-direct\n").unwrap();
        assert_eq!(m["dim"], "2");
        assert_eq!(m["cutoff"], "8");
        assert_eq!(m["potential"], "x1^2*x2");
        assert_eq!(m["compare-direct"], "true");
        assert!(parse_config_file("bogus = 1").is_err());
    }

    #[test]
    fn spectrum_at_zero_coupling() {
        let c = cfg("spectrum", &[("cutoff", "3"), ("g", "0")]).unwrap();
        let out = cmd_spectrum(&c).unwrap().text;
        assert_eq!(out, "g,index,re_lambda,im_lambda\n0,0,1,0\n0,1,3,0\n0,2,5,0\n0,3,7,0\n");
    }

    #[test]
    fn singular_at_zero_coupling() {
        let c = cfg("singular", &[("cutoff", "3"), ("g", "0")]).unwrap();
        let out = cmd_singular(&c).unwrap().text;
        assert_eq!(
            out,
            "g,index,mu,signed_q,parity\n0,0,1,1,1\n0,1,3,-3,-1\n0,2,5,5,1\n0,3,7,-7,-1\n"
        );
    }

    #[test]
    fn sweep_tracks_branches_in_grid_order() {
        let c = cfg("sweep", &[("cutoff", "30"), ("g-grid", "0:0.3:7"), ("count", "3")]).unwrap();
        let out = cmd_sweep(&c).unwrap().text;
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 1 + 7 * 3);
        assert!(lines[1].starts_with("0,0,1,1,1"));
        let last: Vec<&str> = lines[lines.len() - 3].split(',').collect();
        assert_eq!(last[0], "0.3");
        // the ground branch keeps a large overlap on a fine grid
        assert!(last[4].parse::<f64>().unwrap() > 0.9);
    }

    #[test]
    fn perturb_csv_has_fit_line() {
        let c = cfg("perturb", &[("orders", "10")]).unwrap();
        let out = cmd_perturb(&c).unwrap().text;
        assert!(out.starts_with("s,mu_s,stability_estimate\n0,1,"));
        assert!(out.lines().last().unwrap().starts_with("# growth_fit"));
    }

    #[test]
    fn borel_json_with_direct_comparison() {
        let c = cfg("borel", &[("g", "0.02"), ("compare-direct", "true")]).unwrap();
        let out = cmd_borel(&c).unwrap().text;
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["relative_deviation"].as_f64().unwrap() < 1e-4);
        assert!(v["continuation_poles"].is_array());
    }

    #[test]
    fn verify_reports_failures() {
        let c = cfg("verify", &[("cutoff", "20"), ("g", "0.2"), ("checks", "pseudohermiticity,weyl")]).unwrap();
        let o = cmd_verify(&c).unwrap();
        assert!(!o.all_passed);
        let c = cfg("verify", &[("cutoff", "20"), ("g", "0.2"), ("checks", "pseudohermiticity")]).unwrap();
        assert!(cmd_verify(&c).unwrap().all_passed);
    }
}
