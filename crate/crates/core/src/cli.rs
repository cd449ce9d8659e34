//! Command-line front end.
//!
//! Every run prints one JSON object `{params, inputs, result, provenance}`
//! by default. Exact values are written as `"p/q"` strings. Exit codes:
//! 0 on success (including negative verdicts), 1 when a resource cap is
//! hit, 2 on bad input.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::affine::{compose_word, cylinder};
use crate::dimension::{
    box_count_dimension, detect_exact_overlaps, hausdorff_formula, is_commensurable,
    moran_residual, similarity_dimension, DigitSet, DimensionResult, DEFAULT_BOX_CAP, DEFAULT_TOL,
};
use crate::dynamics::{
    greedy_expand, invariant_density_histogram_with, orbit_histogram, overlap_hit_stats,
    DensityHistogram, DEFAULT_BURN_IN,
};
use crate::error::Error;
use crate::multiplicity::{
    check_unique, enumerate_prefixes, enumerate_words, search_unique_periodic, thm42_language,
    verify_language_bounds, DEFAULT_MAX_NODES,
};
use crate::params::Params;
use crate::rational::{check_unit, parse_rational, Rational};
use crate::word::EventuallyPeriodicWord;

pub const MAX_NODES_ENV: &str = "AB_EXPAND_MAX_NODES";

#[derive(Debug, Parser)]
#[command(name = "abexp", version, about = "Exact two-base digit expansions")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for sampling and box counting (0 = all cores); output
    /// does not depend on it
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Args)]
pub struct Bases {
    /// Blow-up base for digit 0 (a > 1)
    #[arg(long)]
    pub a: u32,
    /// Main base (b > a)
    #[arg(long)]
    pub b: u32,
}

impl Bases {
    fn params(&self) -> Result<Params, Error> {
        Params::new(self.a, self.b)
    }
}

#[derive(Debug, Clone, Args)]
pub struct Cap {
    /// Node/word cap for enumerations
    #[arg(long, env = MAX_NODES_ENV, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Similarity,
    Box,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy digits of x, with the exact cylinder and partial sum
    Expand {
        #[command(flatten)]
        bases: Bases,
        /// Point in [0,1] as p/q
        #[arg(long)]
        x: String,
        /// Number of digits
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Count expansion prefixes of x at each depth
    Count {
        #[command(flatten)]
        bases: Bases,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Also list every word at the final depth
        #[arg(long)]
        words: bool,
        #[command(flatten)]
        cap: Cap,
    },
    /// Decide whether an eventually periodic word is the unique expansion of its value
    Unique {
        #[command(flatten)]
        bases: Bases,
        /// Word as "preperiod|period", e.g. "|0,1,2" or "0,0|2"
        #[arg(long)]
        word: String,
    },
    /// Search purely periodic unique expansions
    SearchUnique {
        #[command(flatten)]
        bases: Bases,
        /// Longest period to try
        #[arg(long, default_value_t = 6)]
        max_period: usize,
        #[command(flatten)]
        cap: Cap,
    },
    /// The block language {0l, l0} and its bounds against the overlap
    Language {
        #[command(flatten)]
        bases: Bases,
        /// Maximum word length (preperiod + period) checked
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[command(flatten)]
        cap: Cap,
    },
    /// Dimension of the restricted-digit set
    Dimension {
        #[command(flatten)]
        bases: Bases,
        /// Digit set as a comma list
        #[arg(long)]
        digits: String,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        /// Cylinder depth for --method box
        #[arg(long, default_value_t = 14)]
        depth: usize,
        /// Dyadic scale exponents, "lo..hi" or a comma list
        #[arg(long, default_value = "6..12")]
        scales: String,
        /// Solver tolerance on the residual
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Cylinder cap for box counting
        #[arg(long, default_value_t = DEFAULT_BOX_CAP)]
        max_words: u64,
    },
    /// Commensurability of a, b and minimal exact overlaps among words over D
    Overlaps {
        #[command(flatten)]
        bases: Bases,
        /// Digit set as a comma list (default: full alphabet)
        #[arg(long)]
        digits: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        cap: Cap,
    },
    /// How often sampled orbits of G enter the open overlap (1/b, 1/a)
    OrbitStats {
        #[command(flatten)]
        bases: Bases,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Sample denominator q; points are k/q
        #[arg(long, default_value_t = 1_000_003)]
        denom: u64,
    },
    /// Orbit-visit histogram of G
    Density {
        #[command(flatten)]
        bases: Bases,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_003)]
        denom: u64,
        /// Fraction of each orbit discarded before counting
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: f64,
        /// Follow this single point instead of sampling
        #[arg(long)]
        x: Option<String>,
    },
}

#[derive(Debug, Serialize)]
struct Provenance {
    version: &'static str,
    seed: Option<u64>,
}

/// Everything a subcommand produces before formatting.
struct Outcome {
    params: Params,
    inputs: Value,
    result: Value,
    seed: Option<u64>,
    table: Option<Table>,
    summary: Vec<String>,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_scales(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Parse(format!("bad scales {s:?}, expected lo..hi or a comma list"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect()
    }
}

fn parse_unit(s: &str) -> Result<Rational, Error> {
    let x = parse_rational(s)?;
    check_unit(&x)?;
    Ok(x)
}

fn dimension_table(r: &DimensionResult) -> Option<Table> {
    r.regression.as_ref().map(|reg| Table {
        header: vec!["scale_exponent", "boxes_occupied"],
        rows: reg
            .points
            .iter()
            .map(|p| vec![p.scale_exponent.to_string(), p.boxes_occupied.to_string()])
            .collect(),
    })
}

fn histogram_table(h: &DensityHistogram) -> Table {
    let n = h.bins;
    Table {
        header: vec!["bin", "lo", "hi", "count", "mass"],
        rows: (0..n)
            .map(|i| {
                vec![
                    i.to_string(),
                    Rational::new(i.into(), n.into()).to_string(),
                    Rational::new((i + 1).into(), n.into()).to_string(),
                    h.counts[i].to_string(),
                    h.masses[i].to_string(),
                ]
            })
            .collect(),
    }
}

fn execute(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Expand { bases, x, depth } => {
            let p = bases.params()?;
            let xv = parse_unit(x)?;
            let digits = greedy_expand(&p, &xv, *depth)?;
            let cyl = cylinder(&p, &digits)?;
            let map = compose_word(&p, &digits)?;
            Ok(Outcome {
                params: p,
                inputs: json!({ "x": xv.to_string(), "depth": depth }),
                result: json!({
                    "digits": digits,
                    "cylinder": cyl,
                    "pi_prefix": map.translation.to_string(),
                    "contains_x": cyl.contains(&xv),
                }),
                seed: None,
                table: Some(Table {
                    header: vec!["position", "digit"],
                    rows: digits
                        .digits()
                        .iter()
                        .enumerate()
                        .map(|(i, d)| vec![(i + 1).to_string(), d.to_string()])
                        .collect(),
                }),
                summary: vec![
                    format!("digits: {digits}"),
                    format!("cylinder: {cyl}"),
                    format!("pi_prefix: {}", map.translation),
                ],
            })
        }
        Command::Count {
            bases,
            x,
            depth,
            words,
            cap,
        } => {
            let p = bases.params()?;
            let xv = parse_unit(x)?;
            let counts = enumerate_prefixes(&p, &xv, *depth, cap.max_nodes)?;
            let mut result = to_value(&counts);
            if *words {
                let list = enumerate_words(&p, &xv, *depth, cap.max_nodes)?;
                result["words"] = to_value(&list);
            }
            let summary = vec![format!(
                "counts: {}",
                counts
                    .counts
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )];
            Ok(Outcome {
                params: p,
                inputs: json!({ "x": xv.to_string(), "depth": depth, "max_nodes": cap.max_nodes }),
                result,
                seed: None,
                table: Some(Table {
                    header: vec!["depth", "count"],
                    rows: counts
                        .counts
                        .iter()
                        .enumerate()
                        .map(|(n, c)| vec![n.to_string(), c.to_string()])
                        .collect(),
                }),
                summary,
            })
        }
        Command::Unique { bases, word } => {
            let p = bases.params()?;
            let w = EventuallyPeriodicWord::parse(word)?;
            let v = check_unique(&p, &w)?;
            let mut summary = vec![format!("value: {}", v.value), format!("unique: {}", v.unique)];
            if let (Some(k), Some(y)) = (v.witness_shift, &v.witness_value) {
                summary.push(format!("witness: shift {k} has value {y} outside the good region"));
            }
            Ok(Outcome {
                params: p,
                inputs: json!({ "word": w.to_string() }),
                result: to_value(&v),
                seed: None,
                table: None,
                summary,
            })
        }
        Command::SearchUnique {
            bases,
            max_period,
            cap,
        } => {
            let p = bases.params()?;
            let found = search_unique_periodic(&p, *max_period, cap.max_nodes)?;
            let rows: Vec<Vec<String>> = found
                .iter()
                .map(|u| vec![u.word.period().to_string(), u.value.to_string()])
                .collect();
            let summary = found
                .iter()
                .map(|u| format!("({})^inf -> {}", u.word.period(), u.value))
                .collect();
            Ok(Outcome {
                params: p,
                inputs: json!({ "max_period": max_period, "max_nodes": cap.max_nodes }),
                result: to_value(&found),
                seed: None,
                table: Some(Table {
                    header: vec!["period", "value"],
                    rows,
                }),
                summary,
            })
        }
        Command::Language { bases, depth, cap } => {
            let p = bases.params()?;
            let info = thm42_language(&p);
            if !info.uncountable_condition {
                eprintln!(
                    "warning: b < a^2 - 2 - r fails for (a,b) = ({}, {}); checking anyway",
                    p.a(),
                    p.b()
                );
            }
            let report = verify_language_bounds(&p, *depth, cap.max_nodes)?;
            let summary = vec![
                format!("l = {}, r = {}", info.l, info.r),
                format!(
                    "countable condition (b < a^2): {}; uncountable condition (b < a^2-2-r): {}",
                    info.countable_condition, info.uncountable_condition
                ),
                format!(
                    "max over words starting 0: {} (< 1/b: {})",
                    report.max_start_zero, report.max_below_inv_b
                ),
                format!(
                    "min over words starting l: {} (> 1/a: {})",
                    report.min_start_l, report.min_above_inv_a
                ),
                format!(
                    "checked {} words: {} unique, {} hit j/b, {} hit the overlap",
                    report.words_checked, report.words_unique, report.exceptional, report.overlap_failures
                ),
            ];
            Ok(Outcome {
                params: p,
                inputs: json!({ "depth": depth, "max_nodes": cap.max_nodes }),
                result: to_value(&report),
                seed: None,
                table: None,
                summary,
            })
        }
        Command::Dimension {
            bases,
            digits,
            method,
            depth,
            scales,
            tol,
            max_words,
        } => {
            let p = bases.params()?;
            let set = DigitSet::parse(&p, digits)?;
            let scales = parse_scales(scales)?;
            let inputs = json!({
                "digits": set,
                "method": format!("{method:?}").to_lowercase(),
                "depth": depth,
                "scales": scales,
                "tol": tol,
            });
            let (result, table, summary) = match method {
                Method::Formula => {
                    let r = hausdorff_formula(&p, &set)?;
                    let summary = vec![format!("{}: {}", r.case, r.value)];
                    (to_value(&r), dimension_table(&r), summary)
                }
                Method::Similarity => {
                    let s = similarity_dimension(&p, &set, *tol)?;
                    let residual = moran_residual(&set.ratios(&p), s);
                    (
                        json!({ "s": s, "value": s.min(1.0), "residual": residual }),
                        None,
                        vec![format!("s = {s}")],
                    )
                }
                Method::Box => {
                    let r = box_count_dimension(&p, &set, *depth, &scales, *max_words)?;
                    for w in &r.warnings {
                        eprintln!("warning: {w}");
                    }
                    let reg = r.regression.as_ref().expect("box counting regresses");
                    let summary = vec![format!("slope {} (r^2 = {})", reg.slope, reg.r_squared)];
                    (to_value(&r), dimension_table(&r), summary)
                }
            };
            Ok(Outcome {
                params: p,
                inputs,
                result,
                seed: None,
                table,
                summary,
            })
        }
        Command::Overlaps {
            bases,
            digits,
            depth,
            cap,
        } => {
            let p = bases.params()?;
            let set = match digits {
                Some(s) => DigitSet::parse(&p, s)?,
                None => DigitSet::full(&p),
            };
            let comm = is_commensurable(p.a() as u64, p.b() as u64);
            let pairs = detect_exact_overlaps(&p, &set, *depth, cap.max_nodes)?;
            let mut summary = vec![match comm {
                Some((m, n)) => format!("a^{m} = b^{n}"),
                None => "a and b are multiplicatively independent".to_string(),
            }];
            summary.extend(pairs.iter().map(|pr| format!("{} ~ {}", pr.left, pr.right)));
            Ok(Outcome {
                params: p,
                inputs: json!({ "digits": set, "depth": depth }),
                result: json!({
                    "commensurable": comm.map(|(m, n)| json!({ "m": m, "n": n })),
                    "overlaps": pairs,
                }),
                seed: None,
                table: Some(Table {
                    header: vec!["left", "right"],
                    rows: pairs
                        .iter()
                        .map(|pr| vec![pr.left.to_string(), pr.right.to_string()])
                        .collect(),
                }),
                summary,
            })
        }
        Command::OrbitStats {
            bases,
            samples,
            steps,
            seed,
            denom,
        } => {
            let p = bases.params()?;
            let stats = overlap_hit_stats(&p, *samples, *steps, *seed, *denom)?;
            let rows = stats
                .first_hit_histogram
                .iter()
                .map(|(k, c)| vec![k.to_string(), c.to_string()])
                .collect();
            let summary = vec![format!(
                "{} of {} orbits entered the overlap within {} steps ({})",
                stats.hits, stats.samples, stats.steps, stats.hit_fraction
            )];
            Ok(Outcome {
                params: p,
                inputs: json!({ "samples": samples, "steps": steps, "denom": denom }),
                result: to_value(&stats),
                seed: Some(*seed),
                table: Some(Table {
                    header: vec!["first_hit_step", "count"],
                    rows,
                }),
                summary,
            })
        }
        Command::Density {
            bases,
            bins,
            samples,
            steps,
            seed,
            denom,
            burn_in,
            x,
        } => {
            let p = bases.params()?;
            let (hist, inputs, seed) = match x {
                Some(x) => {
                    let xv = parse_unit(x)?;
                    let h = orbit_histogram(&p, &xv, *bins, *steps, *burn_in)?;
                    let inputs = json!({ "x": xv.to_string(), "bins": bins, "steps": steps, "burn_in": burn_in });
                    (h, inputs, None)
                }
                None => {
                    let h = invariant_density_histogram_with(&p, *bins, *samples, *steps, *seed, *denom, *burn_in)?;
                    let inputs = json!({
                        "bins": bins, "samples": samples, "steps": steps,
                        "denom": denom, "burn_in": burn_in,
                    });
                    (h, inputs, Some(*seed))
                }
            };
            let summary = hist
                .masses
                .iter()
                .enumerate()
                .map(|(i, m)| format!("bin {i}: {m:.6}"))
                .collect();
            Ok(Outcome {
                params: p,
                inputs,
                result: to_value(&hist),
                seed,
                table: Some(histogram_table(&hist)),
                summary,
            })
        }
    }
}

fn write_outcome(out: &mut dyn Write, format: Format, o: &Outcome) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let report = json!({
                "params": o.params,
                "inputs": o.inputs,
                "result": o.result,
                "provenance": Provenance { version: env!("CARGO_PKG_VERSION"), seed: o.seed },
            });
            writeln!(out, "{report}")
        }
        Format::Csv => match &o.table {
            Some(t) => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&t.header)?;
                for row in &t.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            // no tabular form; fall back to the JSON result
            None => writeln!(out, "{}", o.result),
        },
        Format::Plain => {
            writeln!(out, "a = {}, b = {}", o.params.a(), o.params.b())?;
            for line in &o.summary {
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
    }
}

fn error_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        1
    } else {
        2
    }
}

/// Parses `args` and runs one subcommand, writing the report to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    if cli.threads > 0 {
        // Already-initialized pools (repeated in-process runs) are fine.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match execute(&cli.command) {
        Ok(outcome) => match write_outcome(out, cli.format, &outcome) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(e) => {
            let mut body = json!({ "error": e.to_string() });
            if let Error::EnumerationOverflow { partial_counts, .. } = &e {
                body["partial_counts"] = to_value(partial_counts);
            }
            let _ = writeln!(err, "{body}");
            error_code(&e)
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
