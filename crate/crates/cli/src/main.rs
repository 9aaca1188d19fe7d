//! `zslab`: compute, verify and tabulate weighted zero-sum constants.

mod cache;
mod table;

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zslab::constants::{
    classify_c_extremal_pow2, classify_e_extremal_pow2, compute_exhaustive, enumerate_extremal, predict,
    ConstantKind, ConstantResult, Method, DEFAULT_BUDGET,
};
use zslab::gf2::{self, GF2Matrix, LBarCheck, L_BAR_EXHAUSTIVE_MAX_N};
use zslab::solver::{self, pipelines, CertificateKind};
use zslab::{Error, ResidueSequence, RingSpec, WeightSetSpec};

use cache::{Cache, CacheEntry, CacheKey, Provenance};
use table::{NRange, Row};

#[derive(Parser)]
#[command(name = "zslab", version, about = "Weighted zero-sum constants of Z_n")]
struct Cli {
    /// Do not read or write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value of D, C or E for a weight set modulo n.
    Constant {
        #[arg(value_parser = parse_kind)]
        kind: ConstantKind,
        n: u64,
        #[arg(value_parser = parse_spec)]
        weights: WeightSetSpec,
        #[arg(long, value_enum, default_value_t = ConstantMethod::Exhaustive)]
        method: ConstantMethod,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Find a weighted zero-sum certificate in a sequence.
    Solve {
        n: u64,
        #[arg(value_parser = parse_spec)]
        weights: WeightSetSpec,
        /// Comma-separated residues in [0, n).
        #[arg(allow_hyphen_values = true)]
        sequence: String,
        /// any, consecutive or length:L.
        #[arg(long, default_value = "any", value_parser = parse_cert_kind)]
        kind: CertificateKind,
        /// `dp` is complete; `constructive` runs the unit-weight pipelines.
        #[arg(long, value_enum, default_value_t = SolveMethod::Dp)]
        method: SolveMethod,
    },
    /// Enumerate or classify extremal sequences.
    Extremal {
        #[arg(value_parser = parse_kind)]
        kind: ConstantKind,
        n: u64,
        #[arg(value_parser = parse_spec)]
        weights: WeightSetSpec,
        #[arg(long, conflicts_with = "classify", required_unless_present = "classify")]
        enumerate: bool,
        /// Comma-separated sequence to classify.
        #[arg(long)]
        classify: Option<String>,
        #[arg(long, requires = "enumerate")]
        up_to_equivalence: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = ListFormat::Lines)]
        format: ListFormat,
    },
    /// Table of predicted vs computed constants.
    Table {
        /// Comma-separated subset of D,C,E.
        #[arg(long, default_value = "D,C,E", value_delimiter = ',', value_parser = parse_kind)]
        kinds: Vec<ConstantKind>,
        /// `a..b`, optionally `a..b:even` or `a..b:odd`.
        #[arg(long, default_value = "2..12")]
        n_range: NRange,
        /// Weight spec; repeat for several.
        #[arg(long = "weights", value_parser = parse_spec, default_value = "units")]
        weights: Vec<WeightSetSpec>,
        #[arg(long, value_enum, default_value_t = TableMethod::Verify)]
        method: TableMethod,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Direct access to the GF(2) kernel solvers.
    Gf2 {
        #[command(subcommand)]
        command: Gf2Command,
    },
}

#[derive(Subcommand)]
enum Gf2Command {
    /// Rows with zero XOR.
    Kernel {
        /// window, subset or weight:M.
        #[arg(long, default_value = "subset", value_parser = parse_kernel_mode)]
        mode: KernelMode,
        /// Comma-separated rows of bits, e.g. 01,10,11.
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        rows: Option<String>,
        /// Matrix fixture (`m a` header, then one row of bits per line); `-` for stdin.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Largest dimension of a subspace of F_2^n with no weight-m vector.
    Lbar {
        n: usize,
        m: usize,
        /// Enumerate all subspaces instead of applying the closed form.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantMethod {
    Predict,
    Exhaustive,
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableMethod {
    Predict,
    Exhaustive,
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    Dp,
    Constructive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Row,
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Lines,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy)]
enum KernelMode {
    Window,
    Subset,
    Weight(usize),
}

fn parse_kind(s: &str) -> Result<ConstantKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_spec(s: &str) -> Result<WeightSetSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_cert_kind(s: &str) -> Result<CertificateKind, String> {
    match s {
        "any" => Ok(CertificateKind::AnySubsequence),
        "consecutive" => Ok(CertificateKind::ConsecutiveBlock),
        _ => s
            .strip_prefix("length:")
            .and_then(|l| l.parse().ok())
            .map(CertificateKind::FixedLength)
            .ok_or_else(|| format!("expected any, consecutive or length:L, got {s:?}")),
    }
}

fn parse_kernel_mode(s: &str) -> Result<KernelMode, String> {
    match s {
        "window" => Ok(KernelMode::Window),
        "subset" => Ok(KernelMode::Subset),
        _ => s
            .strip_prefix("weight:")
            .and_then(|m| m.parse().ok())
            .map(KernelMode::Weight)
            .ok_or_else(|| format!("expected window, subset or weight:M, got {s:?}")),
    }
}

/// Failure with its exit status.
enum Failure {
    /// 1: nothing found, or a negative verdict.
    Negative(String),
    /// 2: malformed input or unmet precondition.
    Input(String),
    /// 3: search budget exhausted.
    Budget(String),
    /// 4: prediction and computation disagree.
    Mismatch(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Input(_) | Failure::Io(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Negative(m) | Failure::Input(m) | Failure::Budget(m) | Failure::Mismatch(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(msg),
            Error::NoFormula(_) | Error::NoKernel => Failure::Negative(msg),
            _ => Failure::Input(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Constant computation with optional caching.
struct Engine {
    cache: Option<Cache>,
    budget: u64,
}

/// Does an exhaustive value agree with a prediction?
fn agrees(predicted: &ConstantResult, exact: u64) -> bool {
    match predicted.method {
        Method::UpperBoundOnly => exact <= predicted.value,
        Method::LowerWitnessOnly => exact >= predicted.value,
        _ => exact == predicted.value,
    }
}

impl Engine {
    fn store(&self, entry: CacheEntry) {
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.append(&entry) {
                eprintln!("warning: could not write cache {}: {e}", cache.path().display());
            }
        }
    }

    fn predict(&self, kind: ConstantKind, n: u64, spec: &WeightSetSpec) -> Result<ConstantResult, Error> {
        predict(kind, n, spec)
    }

    fn exhaustive(&self, kind: ConstantKind, n: u64, spec: &WeightSetSpec) -> Result<ConstantResult, Failure> {
        // validate before touching the cache
        spec.materialize(n)?;
        let key = CacheKey::new(kind, n, spec);
        if let Some(cache) = &self.cache {
            match cache.lookup(&key, CacheEntry::is_exact) {
                Ok(Some(entry)) => return Ok(entry.result),
                Ok(None) => {}
                Err(e) => eprintln!("warning: could not read cache {}: {e}", cache.path().display()),
            }
        }
        let result = compute_exhaustive(kind, n, spec, self.budget)?;
        self.store(CacheEntry::new(result.clone(), Provenance::Exhaustive, None, Some(result.value)));
        Ok(result)
    }

    /// Prediction (if any), exhaustive result, and whether they agree.
    fn verify(
        &self,
        kind: ConstantKind,
        n: u64,
        spec: &WeightSetSpec,
    ) -> Result<(Option<ConstantResult>, ConstantResult, Option<bool>), Failure> {
        let predicted = match self.predict(kind, n, spec) {
            Ok(p) => Some(p),
            Err(Error::NoFormula(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let exact = self.exhaustive(kind, n, spec)?;
        let agree = predicted.as_ref().map(|p| agrees(p, exact.value));
        if let (Some(p), Some(true)) = (&predicted, agree) {
            if p.value == exact.value {
                self.store(CacheEntry::new(exact.clone(), Provenance::Verified, Some(p.value), Some(exact.value)));
            }
        }
        Ok((predicted, exact, agree))
    }
}

fn row_line(r: &ConstantResult) -> String {
    format!("{},{},{},{},{}", r.kind, r.n, r.weights, r.value, r.method)
}

fn parse_sequence(n: u64, s: &str) -> Result<ResidueSequence, Failure> {
    let xs = zslab::algebra::parse_values(s)?;
    if let Some(x) = xs.iter().find(|&&x| x < 0 || x as u64 >= n) {
        return Err(Failure::Input(format!("term {x} is not in [0, {n})")));
    }
    Ok(ResidueSequence::new(n, xs)?)
}

fn cmd_constant(
    engine: &Engine,
    kind: ConstantKind,
    n: u64,
    spec: &WeightSetSpec,
    method: ConstantMethod,
    format: Format,
) -> Outcome {
    RingSpec::new(n)?;
    match method {
        ConstantMethod::Predict => {
            let r = engine.predict(kind, n, spec)?;
            engine.store(CacheEntry::new(r.clone(), Provenance::Predicted, Some(r.value), None));
            match format {
                Format::Json => println!("{}", r.to_json()),
                Format::Row => println!("{}", row_line(&r)),
            }
        }
        ConstantMethod::Exhaustive => {
            let r = engine.exhaustive(kind, n, spec)?;
            match format {
                Format::Json => println!("{}", r.to_json()),
                Format::Row => println!("{}", row_line(&r)),
            }
        }
        ConstantMethod::Verify => {
            let (predicted, exact, agree) = engine.verify(kind, n, spec)?;
            let Some(predicted) = predicted else {
                return Err(Failure::Negative(format!(
                    "no closed form covers {kind} for {spec} modulo {n}; exhaustive value is {}",
                    exact.value
                )));
            };
            let agree = agree.unwrap_or(false);
            match format {
                Format::Json => {
                    let out = json!({
                        "kind": kind,
                        "n": n,
                        "weights": spec,
                        "value": exact.value,
                        "predicted": serde_json::to_value(&predicted).unwrap(),
                        "exhaustive": serde_json::to_value(&exact).unwrap(),
                        "agree": agree,
                    });
                    println!("{out}");
                }
                Format::Row => println!(
                    "{},{},{},{},{},{}",
                    kind, n, spec, predicted.value, exact.value, agree
                ),
            }
            if !agree {
                return Err(Failure::Mismatch(format!(
                    "{kind} for {spec} modulo {n}: predicted {} ({}), exhaustive {}",
                    predicted.value, predicted.method, exact.value
                )));
            }
        }
    }
    Ok(())
}

fn cmd_solve(n: u64, spec: &WeightSetSpec, sequence: &str, kind: CertificateKind, method: SolveMethod) -> Outcome {
    let a = spec.materialize(n)?;
    let seq = parse_sequence(n, sequence)?;
    let verdict = match method {
        SolveMethod::Dp => solver::solve(&seq, &a, kind)?,
        SolveMethod::Constructive => {
            if a.values() != RingSpec::new(n)?.units().as_slice() {
                return Err(Failure::Input("constructive pipelines need the unit weight set".into()));
            }
            pipelines::constructive(&seq, kind)?
        }
    };
    match verdict.found() {
        Some(cert) => {
            debug_assert!(cert.verify(&seq, &a));
            println!("{}", cert.to_json());
            Ok(())
        }
        None => {
            println!("none");
            Err(Failure::Negative(String::new()))
        }
    }
}

fn cmd_extremal(
    engine: &Engine,
    kind: ConstantKind,
    n: u64,
    spec: &WeightSetSpec,
    classify: Option<&str>,
    up_to_equivalence: bool,
    format: ListFormat,
) -> Outcome {
    let ring = RingSpec::new(n)?;
    let a = spec.materialize_in(&ring)?;
    if let Some(s) = classify {
        let seq = parse_sequence(n, s)?;
        let pow2_units = n.is_power_of_two() && n >= 2 && a.values() == ring.units().as_slice();
        let verdict = match kind {
            ConstantKind::C if pow2_units => classify_c_extremal_pow2(&seq)?.0,
            ConstantKind::E if pow2_units => classify_e_extremal_pow2(&seq)?,
            _ => {
                let value = engine.exhaustive(kind, n, spec)?.value;
                seq.len() as u64 + 1 == value
                    && !solver::solve(&seq, &a, kind.certificate_kind(n))?.is_found()
            }
        };
        println!("{verdict}");
        return if verdict {
            Ok(())
        } else {
            Err(Failure::Negative(String::new()))
        };
    }
    let found = enumerate_extremal(kind, n, spec, up_to_equivalence, engine.budget)?;
    match format {
        ListFormat::Lines => {
            for s in &found {
                println!("{s}");
            }
        }
        ListFormat::Json => {
            let lists: Vec<&[u64]> = found.iter().map(|s| s.terms()).collect();
            println!("{}", serde_json::to_string(&lists).unwrap());
        }
    }
    let noun = if up_to_equivalence { "classes" } else { "sequences" };
    eprintln!("{} {noun}", found.len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    engine: &Engine,
    kinds: &[ConstantKind],
    range: NRange,
    specs: &[WeightSetSpec],
    method: TableMethod,
    format: TableFormat,
    out: Option<&PathBuf>,
) -> Outcome {
    let mut rows = Vec::new();
    let mut budget_hit = false;
    for n in range.values() {
        for &kind in kinds {
            for spec in specs {
                // a weight set can be empty for small n (e.g. even residues mod 2)
                if spec.materialize(n).is_err() {
                    continue;
                }
                let predicted = if method == TableMethod::Exhaustive {
                    None
                } else {
                    engine.predict(kind, n, spec).ok()
                };
                let computed = if method == TableMethod::Predict {
                    None
                } else {
                    match engine.exhaustive(kind, n, spec) {
                        Ok(r) => Some(r.value),
                        Err(Failure::Budget(_)) => {
                            budget_hit = true;
                            None
                        }
                        Err(e) => return Err(e),
                    }
                };
                let agree = match (&predicted, computed) {
                    (Some(p), Some(c)) => Some(agrees(p, c)),
                    _ => None,
                };
                rows.push(Row {
                    n,
                    kind,
                    weights: spec.clone(),
                    predicted: predicted.as_ref().map(|p| p.value),
                    predicted_method: predicted.as_ref().map(|p| p.method.to_string()),
                    computed,
                    agree,
                });
            }
        }
    }
    table::sort_rows(&mut rows);
    let text = match format {
        TableFormat::Csv => table::to_csv(&rows),
        TableFormat::Json => table::to_json(&rows),
    };
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    let mismatches = rows.iter().filter(|r| r.agree == Some(false)).count();
    if mismatches > 0 {
        return Err(Failure::Mismatch(format!("{mismatches} rows disagree")));
    }
    if budget_hit {
        return Err(Failure::Budget("search budget exhausted for some rows".into()));
    }
    Ok(())
}

fn read_matrix(rows: Option<&str>, file: Option<&PathBuf>) -> Result<GF2Matrix, Failure> {
    if let Some(rows) = rows {
        let parts: Vec<&str> = rows.split(',').map(str::trim).filter(|r| !r.is_empty()).collect();
        return Ok(GF2Matrix::from_rows(&parts)?);
    }
    let path = file.expect("clap requires rows or file");
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    Ok(text.parse()?)
}

fn cmd_gf2(command: &Gf2Command) -> Outcome {
    match command {
        Gf2Command::Kernel { mode, rows, file } => {
            let p = read_matrix(rows.as_deref(), file.as_ref())?;
            let found = match mode {
                KernelMode::Window => gf2::kernel_window(&p),
                KernelMode::Subset => gf2::kernel_subset(&p),
                KernelMode::Weight(m) => gf2::kernel_fixed_weight(&p, *m),
            };
            match found {
                Ok(sel) => {
                    println!("{}", json!({ "indices": sel.one_based() }));
                    Ok(())
                }
                Err(Error::NoKernel) => {
                    println!("none");
                    Err(Failure::Negative(String::new()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Gf2Command::Lbar { n, m, exhaustive } => {
            if *exhaustive {
                if *n > L_BAR_EXHAUSTIVE_MAX_N {
                    return Err(Failure::Input(format!(
                        "exhaustive enumeration is limited to n <= {L_BAR_EXHAUSTIVE_MAX_N}"
                    )));
                }
                println!("{}", json!({ "n": n, "m": m, "value": gf2::l_bar_exhaustive(*n, *m), "method": "exhaustive" }));
                return Ok(());
            }
            match gf2::check_l_bar(*n, *m) {
                LBarCheck::Guaranteed { value, exhaustive_upper, .. } => {
                    println!(
                        "{}",
                        json!({ "n": n, "m": m, "value": value, "method": "closed_form", "exhaustive_upper": exhaustive_upper })
                    );
                    Ok(())
                }
                LBarCheck::NotGuaranteed => Err(Failure::Negative(format!(
                    "no closed form for l({n}, {m}); use --exhaustive for n <= {L_BAR_EXHAUSTIVE_MAX_N}"
                ))),
            }
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cache = (!cli.no_cache).then(|| Cache::new(Cache::default_path()));
    let engine = |budget| Engine { cache, budget };
    match cli.command {
        Command::Constant { kind, n, weights, method, budget, format } => {
            cmd_constant(&engine(budget), kind, n, &weights, method, format)
        }
        Command::Solve { n, weights, sequence, kind, method } => cmd_solve(n, &weights, &sequence, kind, method),
        Command::Extremal { kind, n, weights, enumerate: _, classify, up_to_equivalence, budget, format } => {
            cmd_extremal(&engine(budget), kind, n, &weights, classify.as_deref(), up_to_equivalence, format)
        }
        Command::Table { kinds, n_range, weights, method, budget, format, out } => {
            cmd_table(&engine(budget), &kinds, n_range, &weights, method, format, out.as_ref())
        }
        Command::Gf2 { command } => cmd_gf2(&command),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message().is_empty() {
                eprintln!("zslab: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
