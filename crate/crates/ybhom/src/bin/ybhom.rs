//! Command-line front end: verify Yang-Baxter operators, emit boundary
//! matrices, compute homology, and reproduce the tabulated decompositions.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ybhom::chain::{boundary_to_text, cached_boundary};
use ybhom::homology::{
    compute_homology, expected_for, table_expected, ExpectKind, ExpectSource, HomologyError,
    HomologyReport,
};
use ybhom::ring::{rat_int, Rational, RingMode};
use ybhom::ybop::YBOperator;

#[derive(Parser)]
#[command(
    name = "ybhom",
    version,
    about = "Exact Yang-Baxter operators, their chain complexes, and homology over Q[y]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Emit one JSON object per line instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Boundary cache directory (falls back to $YBHOM_CACHE_DIR)
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Yang-Baxter equation on every basis triple
    Verify {
        #[arg(long, value_enum, default_value_t = OperatorKind::Homflypt)]
        operator: OperatorKind,
        /// Rank or inclusive range of ranks, e.g. `3` or `2..5`
        #[arg(long, default_value = "2..4", value_parser = parse_range)]
        m: RangeIncl,
        /// Shorthand for the `counterexample` subcommand
        #[arg(long)]
        counterexample: bool,
    },
    /// Compute the homology of the operator's complex
    Homology {
        #[arg(long, value_enum, default_value_t = OperatorKind::Homflypt)]
        operator: OperatorKind,
        #[arg(long, default_value = "2..3", value_parser = parse_range)]
        m: RangeIncl,
        /// Homological degree or inclusive range, e.g. `2` or `2..4`
        #[arg(long, default_value = "2", value_parser = parse_range)]
        n: RangeIncl,
        #[arg(long, value_enum, default_value_t = RingChoice::Qy)]
        ring: RingChoice,
        /// Compare against a known or conjectured decomposition
        #[arg(long, value_enum, default_value_t = ExpectChoice::None)]
        expect: ExpectChoice,
    },
    /// Computed vs tabulated decompositions (m = 3..7, degrees 2 and 3)
    Table {
        #[arg(long, default_value = "3..7", value_parser = parse_range)]
        m: RangeIncl,
        #[arg(long, default_value = "2..3", value_parser = parse_range)]
        n: RangeIncl,
        #[arg(long, value_enum, default_value_t = RingChoice::Qy)]
        ring: RingChoice,
    },
    /// Print a boundary matrix in the canonical cache format
    Boundary {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Show that column normalization can break the equation
    Counterexample {
        /// Candidate evaluation points, tried in order
        #[arg(long, default_value = "2,3,5", value_delimiter = ',')]
        points: Vec<i64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OperatorKind {
    Homflypt,
    HomflyptInverse,
    Jones,
    Identity,
    Kauffman,
}

impl OperatorKind {
    fn tag(self) -> &'static str {
        match self {
            OperatorKind::Homflypt => "homflypt",
            OperatorKind::HomflyptInverse => "homflypt-inverse",
            OperatorKind::Jones => "jones",
            OperatorKind::Identity => "identity",
            OperatorKind::Kauffman => "kauffman",
        }
    }

    fn build(self, m: usize) -> Result<YBOperator, String> {
        let op = match self {
            OperatorKind::Homflypt => YBOperator::homflypt(m),
            OperatorKind::HomflyptInverse => YBOperator::homflypt_inverse(m),
            OperatorKind::Jones => YBOperator::jones(m),
            OperatorKind::Identity => YBOperator::identity(m),
            OperatorKind::Kauffman => YBOperator::kauffman(),
        };
        op.map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RingChoice {
    Qy,
    Laurent,
}

impl From<RingChoice> for RingMode {
    fn from(r: RingChoice) -> RingMode {
        match r {
            RingChoice::Qy => RingMode::Poly,
            RingChoice::Laurent => RingMode::Laurent,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectChoice {
    None,
    Thm,
    Table,
    ConjPw,
    ConjH3,
}

impl ExpectChoice {
    fn kind(self) -> Option<ExpectKind> {
        match self {
            ExpectChoice::None => None,
            ExpectChoice::Thm => Some(ExpectKind::Theorem),
            ExpectChoice::Table => Some(ExpectKind::Table),
            ExpectChoice::ConjPw => Some(ExpectKind::ConjecturePw),
            ExpectChoice::ConjH3 => Some(ExpectKind::ConjectureH3),
        }
    }
}

/// Inclusive range `a..b` (or a single value `a`).
#[derive(Clone, Copy)]
struct RangeIncl(usize, usize);

impl RangeIncl {
    fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.0..=self.1
    }
}

fn parse_range(s: &str) -> Result<RangeIncl, String> {
    let parse_one = |t: &str| -> Result<usize, String> {
        let v: usize = t
            .trim()
            .parse()
            .map_err(|_| format!("`{t}` is not a number"))?;
        if v == 0 {
            return Err("values start at 1".into());
        }
        Ok(v)
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse_one(a)?, parse_one(b)?);
            if a > b {
                return Err(format!("`{s}` is empty"));
            }
            Ok(RangeIncl(a, b))
        }
        None => {
            let v = parse_one(s)?;
            Ok(RangeIncl(v, v))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?,
        ),
        None => Box::new(io::stdout()),
    };
    let cache = cli
        .cache
        .clone()
        .or_else(|| std::env::var_os("YBHOM_CACHE_DIR").map(PathBuf::from));
    let code = match &cli.command {
        Command::Verify {
            operator,
            m,
            counterexample,
        } => {
            if *counterexample {
                run_counterexample(cli.json, &mut out, &[2, 3, 5])?
            } else {
                run_verify(cli.json, &mut out, *operator, *m)?
            }
        }
        Command::Homology {
            operator,
            m,
            n,
            ring,
            expect,
        } => run_homology(
            cli.json,
            &mut out,
            cache.as_deref(),
            *operator,
            *m,
            *n,
            (*ring).into(),
            expect.kind(),
        )?,
        Command::Table { m, n, ring } => {
            run_table(cli.json, &mut out, cache.as_deref(), *m, *n, (*ring).into())?
        }
        Command::Boundary { m, n } => {
            let op = YBOperator::homflypt(*m).map_err(|e| e.to_string())?;
            let bm = cached_boundary(&op, "homflypt", *n, cache.as_deref())
                .map_err(|e| e.to_string())?;
            out.write_all(boundary_to_text("homflypt", &bm).as_bytes())
                .map_err(|e| e.to_string())?;
            ExitCode::SUCCESS
        }
        Command::Counterexample { points } => run_counterexample(cli.json, &mut out, points)?,
    };
    out.flush().map_err(|e| e.to_string())?;
    Ok(code)
}

fn run_verify(
    json: bool,
    out: &mut dyn Write,
    kind: OperatorKind,
    m: RangeIncl,
) -> Result<ExitCode, String> {
    let mut all_hold = true;
    let ranks: Vec<usize> = if kind == OperatorKind::Kauffman {
        vec![4] // fixed-size operator; the requested range does not apply
    } else {
        m.iter().collect()
    };
    for mm in ranks {
        let op = kind.build(mm)?;
        let report = op.verify_ybe().map_err(|e| e.to_string())?;
        let unital = op.is_column_unital();
        all_hold &= report.holds();
        if json {
            let line = json!({
                "operator": kind.tag(),
                "m": report.m,
                "triples": report.triples_checked,
                "ybe_holds": report.holds(),
                "column_unital": unital,
                "failures": report.failures.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            });
            writeln!(out, "{line}").map_err(|e| e.to_string())?;
        } else {
            let status = if report.holds() {
                "OK".to_string()
            } else {
                let shown: Vec<String> = report
                    .failures
                    .iter()
                    .take(8)
                    .map(|t| t.to_string())
                    .collect();
                let extra = report.failures.len().saturating_sub(8);
                let tail = if extra > 0 {
                    format!(" (+{extra} more)")
                } else {
                    String::new()
                };
                format!("FAILS at {}{tail}", shown.join(" "))
            };
            writeln!(
                out,
                "ybe operator={} m={} triples={} column_unital={}: {status}",
                kind.tag(),
                report.m,
                report.triples_checked,
                unital
            )
            .map_err(|e| e.to_string())?;
        }
    }
    Ok(if all_hold {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn source_tag(source: ExpectSource) -> &'static str {
    match source {
        ExpectSource::Degree2ClosedForm => "degree-2 closed form",
        ExpectSource::Table => "table",
        ExpectSource::PwConjecture => "rank-2 conjecture",
        ExpectSource::Degree3Conjecture => "degree-3 conjecture",
    }
}

fn render_report(r: &HomologyReport, kind: OperatorKind) -> String {
    let space = match kind {
        OperatorKind::Homflypt => format!("R_({})", r.m),
        _ => format!("{} m={}", kind.tag(), r.m),
    };
    let torsion = if r.torsion.is_empty() {
        "none".to_string()
    } else {
        let mut grouped: Vec<(String, usize)> = Vec::new();
        for t in &r.torsion {
            match grouped.last_mut() {
                Some((s, k)) if s == t => *k += 1,
                _ => grouped.push((t.clone(), 1)),
            }
        }
        grouped
            .into_iter()
            .map(|(s, k)| {
                if k == 1 {
                    format!("({s})")
                } else {
                    format!("({s})^{k}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let expect = match (&r.expected, r.matches) {
        (Some(e), Some(ok)) => format!(
            " | expected free={} y2={} y4={} [{}]: {}",
            e.free,
            e.y2_classes,
            e.y4_classes,
            source_tag(e.source),
            if ok { "match" } else { "MISMATCH" }
        ),
        _ => String::new(),
    };
    format!(
        "H_{}({space}) over {}: free rank {}, torsion {}{} ({} ms)",
        r.n, r.ring, r.free_rank, torsion, expect, r.wall_time_ms
    )
}

#[allow(clippy::too_many_arguments)]
fn run_homology(
    json: bool,
    out: &mut dyn Write,
    cache: Option<&std::path::Path>,
    kind: OperatorKind,
    m: RangeIncl,
    n: RangeIncl,
    mode: RingMode,
    expect: Option<ExpectKind>,
) -> Result<ExitCode, String> {
    let mut mismatch = false;
    let ranks: Vec<usize> = if kind == OperatorKind::Kauffman {
        vec![4]
    } else {
        m.iter().collect()
    };
    for mm in ranks {
        let op = kind.build(mm)?;
        for nn in n.iter() {
            match compute_homology(&op, kind.tag(), nn, mode, cache) {
                Ok(res) => {
                    let exp = expect.and_then(|k| expected_for(k, mm, nn));
                    let rep = res.report(exp);
                    if rep.matches == Some(false) {
                        mismatch = true;
                    }
                    let line = if json {
                        rep.to_json()
                    } else {
                        render_report(&rep, kind)
                    };
                    writeln!(out, "{line}").map_err(|e| e.to_string())?;
                }
                Err(HomologyError::ChainBroken { m, n }) => {
                    eprintln!("error: boundary composition is nonzero at m={m} n={n}");
                    return Ok(ExitCode::from(3));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(if mismatch {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_table(
    json: bool,
    out: &mut dyn Write,
    cache: Option<&std::path::Path>,
    m: RangeIncl,
    n: RangeIncl,
    mode: RingMode,
) -> Result<ExitCode, String> {
    let mut mismatch = false;
    if !json {
        writeln!(
            out,
            "{:>3} {:>3}  {:<20} {:<20} status",
            "m", "n", "computed", "expected"
        )
        .map_err(|e| e.to_string())?;
    }
    for mm in m.iter() {
        let op = YBOperator::homflypt(mm).map_err(|e| e.to_string())?;
        for nn in n.iter() {
            match compute_homology(&op, "homflypt", nn, mode, cache) {
                Ok(res) => {
                    let exp = table_expected(mm, nn);
                    let rep = res.report(exp);
                    if rep.matches == Some(false) || rep.summary.is_none() {
                        mismatch = true;
                    }
                    if json {
                        writeln!(out, "{}", rep.to_json()).map_err(|e| e.to_string())?;
                    } else {
                        let computed = match rep.summary {
                            Some([f, a, b]) => format!("({f}, {a}, {b})"),
                            None => format!("free {} + torsion {:?}", rep.free_rank, rep.torsion),
                        };
                        let expected = match &rep.expected {
                            Some(e) => format!("({}, {}, {})", e.free, e.y2_classes, e.y4_classes),
                            None => "-".to_string(),
                        };
                        let status = match rep.matches {
                            Some(true) => "ok",
                            Some(false) => "MISMATCH",
                            None => "no table entry",
                        };
                        writeln!(
                            out,
                            "{mm:>3} {nn:>3}  {computed:<20} {expected:<20} {status}"
                        )
                        .map_err(|e| e.to_string())?;
                    }
                }
                Err(HomologyError::ChainBroken { m, n }) => {
                    eprintln!("error: boundary composition is nonzero at m={m} n={n}");
                    return Ok(ExitCode::from(3));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(if mismatch {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_counterexample(json: bool, out: &mut dyn Write, points: &[i64]) -> Result<ExitCode, String> {
    let op = YBOperator::kauffman().map_err(|e| e.to_string())?;
    let symbolic = op.verify_ybe().map_err(|e| e.to_string())?;
    let unital = op.is_column_unital();
    let candidates: Vec<Rational> = points.iter().map(|&p| rat_int(p)).collect();
    let point = op
        .first_usable_point(&candidates)
        .map_err(|e| e.to_string())?;
    let normalized = match &point {
        Some(q) => {
            let norm = op.column_normalize_at(q).map_err(|e| e.to_string())?;
            Some(norm.verify_ybe().map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let broken = normalized.as_ref().map(|r| !r.holds()).unwrap_or(false);
    let confirmed = symbolic.holds() && !unital && broken;
    if json {
        let line = json!({
            "operator": "kauffman",
            "m": op.m(),
            "ybe_holds": symbolic.holds(),
            "column_unital": unital,
            "points": points,
            "point_used": point.as_ref().map(|q| q.to_string()),
            "normalized_ybe_holds": normalized.as_ref().map(|r| r.holds()),
            "normalized_failures": normalized.as_ref().map(|r| r.failures.len()),
            "first_failure": normalized
                .as_ref()
                .and_then(|r| r.failures.first())
                .map(|t| t.to_string()),
            "counterexample_confirmed": confirmed,
        });
        writeln!(out, "{line}").map_err(|e| e.to_string())?;
    } else {
        writeln!(
            out,
            "operator kauffman (m=4): YBE {} on {} triples; column_unital={}",
            if symbolic.holds() { "holds" } else { "FAILS" },
            symbolic.triples_checked,
            unital
        )
        .map_err(|e| e.to_string())?;
        match (&point, &normalized) {
            (Some(q), Some(rep)) => {
                writeln!(
                    out,
                    "normalized at q={q}: YBE {} ({} failing triples{})",
                    if rep.holds() { "still holds" } else { "FAILS" },
                    rep.failures.len(),
                    rep.failures
                        .first()
                        .map(|t| format!(", first {t}"))
                        .unwrap_or_default()
                )
                .map_err(|e| e.to_string())?;
            }
            _ => {
                writeln!(out, "no usable evaluation point among {points:?}")
                    .map_err(|e| e.to_string())?;
            }
        }
        writeln!(
            out,
            "counterexample {}",
            if confirmed {
                "confirmed"
            } else {
                "NOT confirmed"
            }
        )
        .map_err(|e| e.to_string())?;
    }
    Ok(if confirmed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
