//! Command-line front end for the mod-2 operator calculus: parse module
//! records, dispatch computations, and emit deterministic TSV or JSON
//! tables.
//!
//! Conventions shared by every verb:
//!
//! * One text record format serves both plain Steenrod modules and modules
//!   with lower Dyer-Lashof operations — the strict key set `{name, cutoff,
//!   generators, sq, length, q, flags}`; unknown keys are rejected.  A plain
//!   module is the case with an empty `q` table and every length 0.
//! * TSV is the default output (header line, then rows); `--format json`
//!   carries the same data with explicit schema version `"1"`.
//! * Identical invocations produce byte-identical output: every table is
//!   sorted on its key columns.
//! * Exit status 0 on success, 2 when an input fails validation (a witness
//!   goes to stderr — as a machine-readable record in JSON mode), 1 on
//!   usage errors.
//! * Tables go to stdout (or `--output`); diagnostics go to stderr.  The
//!   `QSQ_THREADS` environment variable bounds internal parallelism.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qsq::destab::{h0r_dual_steenrod, h0r_unstable, H0RObject};
use qsq::dyerlashof::{dl_adem_reduce, evaluate_lower, QModule, QModuleRecord};
use qsq::koszul::{build_bar, build_koszul, compare_homologies, koszul_homology};
use qsq::seqcomb::{enumerate_admissible, Constraint};
use qsq::specseq::{ss_desusp2, ss_dual_steenrod};
use qsq::steenrod::{adem_reduce, FpModule};
use qsq::steinberg::SteinbergSpace;

// ==================== command line ====================

#[derive(Parser)]
#[command(
    name = "qsq",
    version,
    about = "Mod-2 operator calculus: Steenrod/Dyer-Lashof rewriting, Steinberg \
             strata, Koszul and bar homology, and delooping spectral sequences",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Write the table to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DualTable {
    Reconstruction,
    Chart,
    Filtration,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesuspTable {
    Chart,
    Filtration,
    Totals,
}

/// A comma-separated operation word.
#[derive(Clone, Debug)]
struct Word(Vec<i64>);

fn parse_word(s: &str) -> Result<Word, String> {
    let entries = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad word entry {p:?}: {e}"))
        })
        .collect::<Result<Vec<i64>, String>>()?;
    Ok(Word(entries))
}

#[derive(Subcommand)]
enum Verb {
    /// Reduce a Steenrod word to its admissible normal form.
    #[command(name = "adem")]
    Adem {
        /// Operation indices, comma-separated, leftmost applied last.
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        word: Word,
    },
    /// Reduce a Dyer-Lashof word over a class of the given degree.
    #[command(name = "dl-adem")]
    DlAdem {
        /// Operation indices, comma-separated (upper indexing unless
        /// --lower).
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        word: Word,
        /// Degree of the class the word is applied to.
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        /// Read the word (and print the result) in lower indexing.
        #[arg(long)]
        lower: bool,
    },
    /// Enumerate the admissible Steenrod monomial basis per degree.
    #[command(name = "basis")]
    Basis {
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
        /// Keep only words of this length.
        #[arg(long)]
        length: Option<usize>,
        /// Keep only words of excess at most this bound (the empty word
        /// always passes — the free-unstable-module convention).
        #[arg(long, allow_negative_numbers = true)]
        excess: Option<i64>,
    },
    /// Per-degree dimensions of one Steinberg stratum L_s of a shifted
    /// point module.
    #[command(name = "steinberg")]
    Steinberg {
        /// Stratum index.
        #[arg(long)]
        s: usize,
        /// Degree of the point module's class.
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
    },
    /// Koszul-complex homology of a module record.
    #[command(name = "koszul")]
    Koszul {
        #[arg(long)]
        input: PathBuf,
        /// Weight (length) of the complex.
        #[arg(long)]
        length: u32,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
    },
    /// Bar-complex homology of a module record.
    #[command(name = "bar")]
    Bar {
        #[arg(long)]
        input: PathBuf,
        /// Total length window.
        #[arg(long)]
        max_length: u32,
        /// Homological window (default: max-length + 1).
        #[arg(long)]
        max_hom: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
        /// Use the unreduced complex.
        #[arg(long)]
        unreduced: bool,
    },
    /// Compare Koszul and bar homology cell by cell.
    #[command(name = "compare")]
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_length: u32,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
    },
    /// Destabilized object: per-cell dimensions with provenance.
    #[command(
        name = "h0r",
        group(ArgGroup::new("source").required(true).args(["input", "dual_n"]))
    )]
    H0r {
        /// Plain module record (free case on an unstable module).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Shift of the dual operation algebra (closed-form case).
        #[arg(long, allow_negative_numbers = true)]
        dual_n: Option<i64>,
        /// Length window for the free case.
        #[arg(long, required_unless_present = "dual_n")]
        max_length: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
    },
    /// Single-delooping tower chart of a 0-connected plain module.
    #[command(name = "deloop", group(ArgGroup::new("view").args(["page", "ranks"])))]
    Deloop {
        #[arg(long)]
        input: PathBuf,
        /// Chart of page r (default: the limit page).
        #[arg(long)]
        page: Option<u32>,
        /// Differential ranks leaving page r instead of a chart.
        #[arg(long)]
        ranks: Option<u32>,
    },
    /// Limit page over a shifted dual of the operation algebra, with the
    /// degree-by-degree reconstruction check.
    #[command(name = "ss-dual")]
    SsDual {
        /// The shift.
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
        #[arg(long, value_enum, default_value_t = DualTable::Reconstruction)]
        table: DualTable,
    },
    /// Limit page of the double desuspension of an unstable plain module.
    #[command(name = "ss-desusp2")]
    SsDesusp2 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
        #[arg(long, value_enum, default_value_t = DesuspTable::Chart)]
        table: DesuspTable,
    },
    /// Hilbert table of a module record.
    #[command(name = "hilbert")]
    Hilbert {
        #[arg(long)]
        input: PathBuf,
        /// Split the table by operation length.
        #[arg(long)]
        by_length: bool,
    },
    /// Validate a module record; optionally re-emit its normal form.
    #[command(name = "validate")]
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// Print the normalized record on success (JSON, one line).
        #[arg(long)]
        emit: bool,
    },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Adem { .. } => "adem",
            Verb::DlAdem { .. } => "dl-adem",
            Verb::Basis { .. } => "basis",
            Verb::Steinberg { .. } => "steinberg",
            Verb::Koszul { .. } => "koszul",
            Verb::Bar { .. } => "bar",
            Verb::Compare { .. } => "compare",
            Verb::H0r { .. } => "h0r",
            Verb::Deloop { .. } => "deloop",
            Verb::SsDual { .. } => "ss-dual",
            Verb::SsDesusp2 { .. } => "ss-desusp2",
            Verb::Hilbert { .. } => "hilbert",
            Verb::Validate { .. } => "validate",
        }
    }
}

// ==================== output plumbing ====================

/// A finished command result: the TSV text, the JSON value, and any
/// diagnostic lines destined for stderr.
struct Rendered {
    tsv: String,
    json: Value,
    diagnostics: Vec<String>,
}

/// A plain table with fixed columns; rows must already be sorted on the
/// key columns.
struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Value>>,
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Table {
    fn rendered(
        self,
        command: &str,
        extras: Vec<(&'static str, Value)>,
        diagnostics: Vec<String>,
    ) -> Rendered {
        let mut tsv = String::new();
        tsv.push_str(&self.columns.join("\t"));
        tsv.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(cell_text).collect();
            tsv.push_str(&cells.join("\t"));
            tsv.push('\n');
        }
        let mut obj = Map::new();
        obj.insert("schema".into(), json!("1"));
        obj.insert("command".into(), json!(command));
        obj.insert("columns".into(), json!(self.columns));
        obj.insert(
            "rows".into(),
            Value::Array(self.rows.into_iter().map(Value::Array).collect()),
        );
        for (k, v) in extras {
            obj.insert(k.into(), v);
        }
        Rendered { tsv, json: Value::Object(obj), diagnostics }
    }
}

/// Renders a set of operation words as a formal F₂ sum: terms joined by
/// " + ", the empty word printed as "1", the empty set as "0".
fn render_sum(words: &BTreeSet<Vec<i64>>, symbol: &str, lower: bool) -> String {
    if words.is_empty() {
        return "0".to_string();
    }
    words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter()
                    .map(|a| {
                        if lower {
                            format!("{symbol}_{a}")
                        } else {
                            format!("{symbol}^{a}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn rendered_words(
    command: &str,
    meta: Vec<(&'static str, Value)>,
    words: &BTreeSet<Vec<i64>>,
    symbol: &str,
    lower: bool,
) -> Rendered {
    let mut obj = Map::new();
    obj.insert("schema".into(), json!("1"));
    obj.insert("command".into(), json!(command));
    for (k, v) in meta {
        obj.insert(k.into(), v);
    }
    obj.insert("terms".into(), json!(words.iter().collect::<Vec<_>>()));
    Rendered {
        tsv: format!("{}\n", render_sum(words, symbol, lower)),
        json: Value::Object(obj),
        diagnostics: Vec::new(),
    }
}

// ==================== input records ====================

/// Reads, parses, structurally checks, and validates a module record.
fn load_qmodule(path: &Path) -> Result<QModule, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let record: QModuleRecord = serde_json::from_str(&text)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let q = QModule::try_from(record).map_err(|e| e.to_string())?;
    q.validate().map_err(|e| e.to_string())?;
    Ok(q)
}

/// Loads a record that must describe a plain Steenrod module: an empty
/// lower-operation table and every generator of length 0.
fn load_plain(path: &Path) -> Result<FpModule, String> {
    let q = load_qmodule(path)?;
    if !q.q_table().is_empty() || q.lengths().iter().any(|&l| l != 0) {
        return Err(format!(
            "{}: this verb needs a plain module record (empty q table, all lengths 0)",
            path.display()
        ));
    }
    Ok(q.fp().clone())
}

// ==================== verbs ====================

fn run_adem(word: &Word) -> Result<Rendered, String> {
    if word.0.is_empty() || word.0.iter().any(|&r| r < 1) {
        return Err("Steenrod operation indices must be ≥ 1".to_string());
    }
    let terms = adem_reduce(&word.0);
    Ok(rendered_words("adem", vec![("word", json!(word.0))], &terms, "Sq", false))
}

fn run_dl_adem(word: &Word, degree: i64, lower: bool) -> Result<Rendered, String> {
    let (terms, indexing) = if lower {
        (evaluate_lower(&word.0, degree), "lower")
    } else {
        (dl_adem_reduce(&word.0, degree), "upper")
    };
    Ok(rendered_words(
        "dl-adem",
        vec![
            ("word", json!(word.0)),
            ("degree", json!(degree)),
            ("indexing", json!(indexing)),
        ],
        &terms,
        "Q",
        lower,
    ))
}

fn run_basis(
    max_degree: i64,
    length: Option<usize>,
    excess: Option<i64>,
) -> Result<Rendered, String> {
    let mut rows = Vec::new();
    let mut total = 0usize;
    for k in 0..=max_degree.max(-1) {
        let mut labels: Vec<String> = enumerate_admissible(None, k, Constraint::StrictlyPositive)
            .into_iter()
            .filter(|i| length.is_none_or(|l| i.len() == l))
            .filter(|i| excess.is_none_or(|e| i.is_empty() || i.excess().le(e)))
            .map(|i| {
                if i.is_empty() {
                    "1".to_string()
                } else {
                    let body = i
                        .entries()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    format!("Sq({body})")
                }
            })
            .collect();
        if labels.is_empty() {
            continue;
        }
        labels.sort();
        total += labels.len();
        rows.push(vec![json!(k), json!(labels.len()), json!(labels.join(";"))]);
    }
    let table = Table { columns: &["degree", "dim", "words"], rows };
    Ok(table.rendered(
        "basis",
        vec![("max_degree", json!(max_degree)), ("total", json!(total))],
        Vec::new(),
    ))
}

fn run_steinberg(s: usize, d: i64, max_degree: i64) -> Result<Rendered, String> {
    let base = FpModule::sigma_f(d, max_degree.max(d));
    let space = SteinbergSpace::new(&base, s, max_degree);
    let mut rows = Vec::new();
    for (&k, &dim) in &space.hilbert() {
        let mut basis = space.describe_basis(k);
        basis.sort();
        rows.push(vec![json!(k), json!(dim), json!(basis.join(";"))]);
    }
    let table = Table { columns: &["degree", "dim", "basis"], rows };
    Ok(table.rendered(
        "steinberg",
        vec![("s", json!(s)), ("d", json!(d)), ("max_degree", json!(max_degree))],
        Vec::new(),
    ))
}

fn run_koszul(input: &Path, length: u32, max_degree: i64) -> Result<Rendered, String> {
    let q = load_qmodule(input)?;
    let kz = build_koszul(&q, length, max_degree).map_err(|e| e.to_string())?;
    let hom = koszul_homology(&kz).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for (&(t, deg), h) in &hom {
        if h.dim > 0 {
            rows.push(vec![json!(t), json!(deg), json!(h.dim)]);
        }
    }
    let table = Table { columns: &["t", "degree", "dim"], rows };
    Ok(table.rendered(
        "koszul",
        vec![("length", json!(kz.n())), ("cutoff", json!(kz.cutoff()))],
        Vec::new(),
    ))
}

fn run_bar(
    input: &Path,
    max_length: u32,
    max_hom: Option<u32>,
    max_degree: i64,
    unreduced: bool,
) -> Result<Rendered, String> {
    let q = load_qmodule(input)?;
    let max_hom = max_hom.unwrap_or(max_length + 1);
    let bar = build_bar(&q, max_hom, max_length, max_degree, !unreduced)
        .map_err(|e| e.to_string())?;
    let dims = bar.homology().map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for (&(length, t, deg), &dim) in &dims {
        if dim > 0 {
            rows.push(vec![json!(length), json!(t), json!(deg), json!(dim)]);
        }
    }
    let table = Table { columns: &["length", "t", "degree", "dim"], rows };
    Ok(table.rendered(
        "bar",
        vec![
            ("cutoff", json!(bar.cutoff())),
            ("reduced", json!(bar.reduced())),
            ("max_hom", json!(bar.max_hom())),
        ],
        Vec::new(),
    ))
}

fn run_compare(input: &Path, max_length: u32, max_degree: i64) -> Result<Rendered, String> {
    let q = load_qmodule(input)?;
    let report = compare_homologies(&q, max_length, max_degree).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for (&(length, t, deg), &dim) in &report.agreed {
        rows.push(vec![json!(length), json!(t), json!(deg), json!(dim)]);
    }
    let mut diagnostics: Vec<String> =
        report.skipped.iter().map(|s| format!("skipped: {s}")).collect();
    diagnostics.push(format!(
        "cells_checked={} window={}",
        report.cells_checked, report.cutoff
    ));
    let table = Table { columns: &["length", "t", "degree", "dim"], rows };
    Ok(table.rendered(
        "compare",
        vec![
            ("cells_checked", json!(report.cells_checked)),
            ("skipped", json!(report.skipped)),
            ("cutoff", json!(report.cutoff)),
        ],
        diagnostics,
    ))
}

fn run_h0r(
    input: Option<&Path>,
    dual_n: Option<i64>,
    max_length: Option<u32>,
    max_degree: i64,
) -> Result<Rendered, String> {
    let obj: H0RObject = match (input, dual_n) {
        (Some(path), None) => {
            let m = load_plain(path)?;
            let window = max_length.expect("clap enforces --max-length with --input");
            h0r_unstable(&m, window, max_degree).map_err(|e| e.to_string())?
        }
        (None, Some(n)) => h0r_dual_steenrod(n, max_degree),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let provenance = obj.provenance.label();
    let mut rows = Vec::new();
    for (&(length, deg), &dim) in &obj.hilbert_by_length() {
        rows.push(vec![json!(length), json!(deg), json!(dim), json!(provenance)]);
    }
    let table = Table { columns: &["length", "degree", "dim", "provenance"], rows };
    Ok(table.rendered(
        "h0r",
        vec![
            ("provenance", json!(provenance)),
            ("connectivity", json!(obj.provenance.connectivity())),
            ("cutoff", json!(obj.q.cutoff())),
        ],
        Vec::new(),
    ))
}

fn run_deloop(input: &Path, page: Option<u32>, ranks: Option<u32>) -> Result<Rendered, String> {
    let m = load_plain(input)?;
    let ss = m.deloop_ss().map_err(|e| e.to_string())?;
    if let Some(r) = ranks {
        let mut rows = Vec::new();
        for (&(p, q), &rank) in &ss.differential_ranks(r) {
            rows.push(vec![json!(p), json!(q), json!(rank)]);
        }
        let table = Table { columns: &["p", "q", "rank"], rows };
        return Ok(table.rendered(
            "deloop",
            vec![("page", json!(r)), ("cutoff", json!(ss.cutoff))],
            Vec::new(),
        ));
    }
    let mut entries = page.map_or_else(|| ss.infinity(), |r| ss.page(r));
    entries.sort();
    let rows = entries
        .iter()
        .map(|e| vec![json!(e.p), json!(e.q), json!(e.degree), json!(e.dim)])
        .collect();
    let table = Table { columns: &["p", "q", "degree", "dim"], rows };
    let page_value = page.map_or_else(|| json!("infinity"), |r| json!(r));
    Ok(table.rendered(
        "deloop",
        vec![("page", page_value), ("cutoff", json!(ss.cutoff))],
        Vec::new(),
    ))
}

fn run_ss_dual(n: i64, max_degree: i64, table: DualTable) -> Result<Rendered, String> {
    let (page, report) = ss_dual_steenrod(n, max_degree).map_err(|e| e.to_string())?;
    let negative = report.negative_column.map_or(Value::Null, |(t, k)| {
        json!({"t": t, "degree": k})
    });
    let extras = vec![
        ("n", json!(n)),
        ("cutoff", json!(page.cutoff())),
        ("split_checked", json!(report.split_checked)),
        ("negative_column", negative),
    ];
    let built = match table {
        DualTable::Reconstruction => {
            let rows = report
                .totals
                .iter()
                .map(|(&k, &(total, target))| vec![json!(k), json!(total), json!(target)])
                .collect();
            Table { columns: &["degree", "total", "target"], rows }
        }
        DualTable::Chart => chart_table(&page),
        DualTable::Filtration => filtration_table(&page),
    };
    Ok(built.rendered("ss-dual", extras, Vec::new()))
}

fn chart_table(page: &qsq::specseq::SSPage) -> Table {
    let rows = page
        .chart_rows()
        .into_iter()
        .map(|r| {
            vec![
                json!(r.s),
                json!(r.t),
                json!(r.degree),
                json!(r.dim),
                json!(r.labels),
            ]
        })
        .collect();
    Table { columns: &["s", "t", "degree", "dim", "labels"], rows }
}

fn filtration_table(page: &qsq::specseq::SSPage) -> Table {
    let rows = page
        .filtration_rows()
        .into_iter()
        .map(|(t, k, dim)| vec![json!(t), json!(k), json!(dim)])
        .collect();
    Table { columns: &["t", "degree", "dim"], rows }
}

fn run_ss_desusp2(input: &Path, max_degree: i64, table: DesuspTable) -> Result<Rendered, String> {
    let m = load_plain(input)?;
    let out = ss_desusp2(&m, max_degree).map_err(|e| e.to_string())?;
    let mut diagnostics = Vec::new();
    if let Some(b) = out.boundary_unreliable {
        diagnostics.push(format!(
            "boundary: layer-1 identification unreliable at degrees >= {b}"
        ));
    }
    let extras = vec![
        ("cutoff", json!(out.page.cutoff())),
        (
            "boundary_unreliable",
            out.boundary_unreliable.map_or(Value::Null, |b| json!(b)),
        ),
    ];
    let built = match table {
        DesuspTable::Chart => chart_table(&out.page),
        DesuspTable::Filtration => filtration_table(&out.page),
        DesuspTable::Totals => {
            let rows = out
                .totals
                .iter()
                .map(|(&k, &(total, target))| vec![json!(k), json!(total), json!(target)])
                .collect();
            Table { columns: &["degree", "total", "target"], rows }
        }
    };
    Ok(built.rendered("ss-desusp2", extras, diagnostics))
}

fn run_hilbert(input: &Path, by_length: bool) -> Result<Rendered, String> {
    let q = load_qmodule(input)?;
    let extras = vec![
        ("name", json!(q.name())),
        ("cutoff", json!(q.cutoff())),
        ("total", json!(q.fp().total_dim())),
    ];
    let built = if by_length {
        let rows = q
            .cells()
            .iter()
            .map(|(&(length, deg), idxs)| vec![json!(length), json!(deg), json!(idxs.len())])
            .collect();
        Table { columns: &["length", "degree", "dim"], rows }
    } else {
        let rows = q
            .fp()
            .hilbert()
            .iter()
            .map(|(&deg, &dim)| vec![json!(deg), json!(dim)])
            .collect();
        Table { columns: &["degree", "dim"], rows }
    };
    Ok(built.rendered("hilbert", extras, Vec::new()))
}

fn run_validate(input: &Path, emit: bool) -> Result<Rendered, String> {
    let q = load_qmodule(input)?;
    if emit {
        let record = QModuleRecord::from(&q);
        let line = serde_json::to_string(&record).map_err(|e| e.to_string())?;
        let json = json!({
            "schema": "1",
            "command": "validate",
            "record": serde_json::to_value(&record).map_err(|e| e.to_string())?,
        });
        return Ok(Rendered { tsv: format!("{line}\n"), json, diagnostics: Vec::new() });
    }
    let table = Table {
        columns: &["status", "name", "generators", "cutoff"],
        rows: vec![vec![
            json!("ok"),
            json!(q.name()),
            json!(q.fp().generators().len()),
            json!(q.cutoff()),
        ]],
    };
    Ok(table.rendered("validate", Vec::new(), Vec::new()))
}

// ==================== dispatch ====================

fn run(verb: &Verb) -> Result<Rendered, String> {
    match verb {
        Verb::Adem { word } => run_adem(word),
        Verb::DlAdem { word, degree, lower } => run_dl_adem(word, *degree, *lower),
        Verb::Basis { max_degree, length, excess } => run_basis(*max_degree, *length, *excess),
        Verb::Steinberg { s, d, max_degree } => run_steinberg(*s, *d, *max_degree),
        Verb::Koszul { input, length, max_degree } => run_koszul(input, *length, *max_degree),
        Verb::Bar { input, max_length, max_hom, max_degree, unreduced } => {
            run_bar(input, *max_length, *max_hom, *max_degree, *unreduced)
        }
        Verb::Compare { input, max_length, max_degree } => {
            run_compare(input, *max_length, *max_degree)
        }
        Verb::H0r { input, dual_n, max_length, max_degree } => {
            run_h0r(input.as_deref(), *dual_n, *max_length, *max_degree)
        }
        Verb::Deloop { input, page, ranks } => run_deloop(input, *page, *ranks),
        Verb::SsDual { n, max_degree, table } => run_ss_dual(*n, *max_degree, *table),
        Verb::SsDesusp2 { input, max_degree, table } => {
            run_ss_desusp2(input, *max_degree, *table)
        }
        Verb::Hilbert { input, by_length } => run_hilbert(input, *by_length),
        Verb::Validate { input, emit } => run_validate(input, *emit),
    }
}

/// Applies the `QSQ_THREADS` bound to the global thread pool before any
/// parallel work starts.
fn configure_threads() {
    if let Ok(raw) = std::env::var("QSQ_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring QSQ_THREADS={raw:?} (want a positive integer)"),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    configure_threads();
    let Cli { format, output, verb } = cli;
    match run(&verb) {
        Ok(rendered) => {
            for line in &rendered.diagnostics {
                eprintln!("{line}");
            }
            let text = match format {
                Format::Tsv => rendered.tsv,
                Format::Json => format!("{}\n", rendered.json),
            };
            if let Some(path) = output {
                if let Err(e) = fs::write(&path, text) {
                    eprintln!("error[{}]: {}: {e}", verb.name(), path.display());
                    process::exit(2);
                }
            } else {
                print!("{text}");
            }
        }
        Err(message) => {
            match format {
                Format::Tsv => eprintln!("error[{}]: {message}", verb.name()),
                Format::Json => eprintln!(
                    "{}",
                    json!({"schema": "1", "error": {"command": verb.name(), "message": message}})
                ),
            }
            process::exit(2);
        }
    }
}
