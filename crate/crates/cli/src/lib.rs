//! Command implementations behind the `anticanon` binary.
//!
//! Every command writes to a caller-supplied sink and returns an [`Exit`]
//! status; I/O and parse failures surface as `Err`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use anticanon::analysis::{analyze, OracleConfig, PlanAnalysis};
use anticanon::cycle::{enumerate_classes, format_string, KindCounts, PlanClass};
use anticanon::oracle::{image_degree, image_dimension, image_quadric_count, instantiate};
use anticanon::{BlowupPlan, Case, ClassificationReport, Error};
use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEEDS: [u64; 3] = [1, 2, 3];
pub const DEFAULT_SAMPLES: usize = 200;
pub const SEED_ENV: &str = "ANTICANON_SEED";

/// Expected values per enumerated class.
pub const GOLDEN_CSV: &str = include_str!("../data/golden.csv");

/// Marker attached to every value that is quoted rather than computed.
pub const NOT_COMPUTED: &str = "cited, not computed";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Enumerate,
    Classify,
    Verify,
    Table,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Markdown,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub plan_file: Option<PathBuf>,
    pub seeds: Vec<u64>,
    pub output_format: OutputFormat,
    pub samples: usize,
    /// `enumerate` only: keep plans made of node steps.
    pub nodes_only: bool,
    /// `table` only: compute the surface image invariants.
    pub images: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            plan_file: None,
            seeds: DEFAULT_SEEDS.to_vec(),
            output_format: OutputFormat::default(),
            samples: DEFAULT_SAMPLES,
            nodes_only: false,
            images: true,
        }
    }

    fn oracle(&self) -> OracleConfig {
        OracleConfig { seeds: self.seeds.clone(), samples: self.samples }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success,
    Mismatch,
}

impl Exit {
    pub fn code(self) -> i32 {
        match self {
            Exit::Success => 0,
            Exit::Mismatch => 1,
        }
    }

    fn from_clean(clean: bool) -> Self {
        if clean {
            Exit::Success
        } else {
            Exit::Mismatch
        }
    }
}

/// Parses `1,2,3`.
pub fn parse_seeds(s: &str) -> anyhow::Result<Vec<u64>> {
    let seeds = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().with_context(|| format!("bad seed {t:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if seeds.is_empty() {
        bail!("empty seed list");
    }
    Ok(seeds)
}

pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Exit> {
    match cfg.command {
        Command::Enumerate => cmd_enumerate(cfg, out),
        Command::Classify => cmd_classify(cfg, out),
        Command::Verify => cmd_verify(cfg, out),
        Command::Table => cmd_table(cfg, out),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn emit_markdown(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
    let mut s = String::new();
    writeln!(s, "| {} |", header.join(" | "))?;
    writeln!(s, "|{}", "---|".repeat(header.len()))?;
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
        writeln!(s, "| {} |", cells.join(" | "))?;
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

// ---------------------------------------------------------------- enumerate

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumerationRow {
    pub canonical_string: Vec<i64>,
    pub k: usize,
    pub m: usize,
    pub kinds: KindCounts,
    pub pattern: String,
    /// Raw plans that fell into this class.
    pub multiplicity: usize,
    pub string_collision: bool,
    pub plan: BlowupPlan,
}

impl From<&PlanClass> for EnumerationRow {
    fn from(c: &PlanClass) -> Self {
        Self {
            canonical_string: c.canonical_string.clone(),
            k: c.k(),
            m: c.canonical_string.len(),
            kinds: c.kinds,
            pattern: c.pattern.to_string(),
            multiplicity: c.multiplicity,
            string_collision: c.string_collision,
            plan: c.plan.clone(),
        }
    }
}

#[derive(Serialize)]
struct FlatEnumerationRow {
    canonical_string: String,
    k: usize,
    m: usize,
    kinds: String,
    pattern: String,
    multiplicity: usize,
    string_collision: bool,
    steps: String,
}

fn steps_json(plan: &BlowupPlan) -> String {
    serde_json::to_string(&plan.steps).unwrap_or_default()
}

pub fn enumeration_rows(nodes_only: bool) -> Vec<EnumerationRow> {
    enumerate_classes()
        .iter()
        .filter(|c| !nodes_only || c.kinds.node == c.plan.steps.len())
        .map(EnumerationRow::from)
        .collect()
}

pub fn cmd_enumerate(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Exit> {
    let rows = enumeration_rows(cfg.nodes_only);
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &rows)?,
        OutputFormat::Csv => {
            let flat: Vec<FlatEnumerationRow> = rows
                .iter()
                .map(|r| FlatEnumerationRow {
                    canonical_string: format_string(&r.canonical_string),
                    k: r.k,
                    m: r.m,
                    kinds: r.kinds.to_string(),
                    pattern: r.pattern.clone(),
                    multiplicity: r.multiplicity,
                    string_collision: r.string_collision,
                    steps: steps_json(&r.plan),
                })
                .collect();
            emit_csv(out, &flat)?;
        }
        OutputFormat::Markdown => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format_string(&r.canonical_string),
                        r.k.to_string(),
                        r.kinds.to_string(),
                        r.pattern.clone(),
                        r.multiplicity.to_string(),
                        if r.string_collision { "yes".into() } else { String::new() },
                        steps_json(&r.plan),
                    ]
                })
                .collect();
            emit_markdown(
                out,
                &["canonical string", "k", "kinds", "pattern", "plans", "string collision", "steps"],
                &body,
            )?;
        }
    }
    Ok(Exit::Success)
}

// ----------------------------------------------------------------- classify

#[derive(Deserialize)]
#[serde(untagged)]
enum PlanEntry {
    Plan(BlowupPlan),
    Row { plan: BlowupPlan },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PlanInput {
    One(BlowupPlan),
    Many(Vec<serde_json::Value>),
}

/// Per-entry parse results of a plans file: a single plan, an array of
/// plans, or the JSON output of `enumerate`.
pub fn parse_plans(text: &str) -> anyhow::Result<Vec<Result<BlowupPlan, String>>> {
    let input: PlanInput = serde_json::from_str(text).context("plans file is not a plan or a list of plans")?;
    Ok(match input {
        PlanInput::One(p) => vec![Ok(p)],
        PlanInput::Many(values) => values
            .into_iter()
            .enumerate()
            .map(|(i, v)| match serde_json::from_value::<PlanEntry>(v) {
                Ok(PlanEntry::Plan(p) | PlanEntry::Row { plan: p }) => Ok(p),
                Err(e) => Err(format!("entry {i}: {e}")),
            })
            .collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Mismatch,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyRecord {
    pub label: String,
    pub status: Status,
    pub canonical_string: Option<Vec<i64>>,
    pub pattern: Option<String>,
    pub report: Option<ClassificationReport>,
    /// Combinatorial h⁰ for `d = 1, 2`.
    pub rule: Option<[String; 2]>,
    /// Interpolation h⁰ for `d = 1, 2`.
    pub oracle: Option<[usize; 2]>,
    pub fixed_multiplicities: Option<Vec<i64>>,
    pub seeds_agree: bool,
    pub warnings: Vec<String>,
    pub mismatches: Vec<String>,
    pub error: Option<String>,
}

impl ClassifyRecord {
    fn failed(label: String, error: String, report: Option<ClassificationReport>) -> Self {
        Self {
            label,
            status: Status::Error,
            canonical_string: None,
            pattern: None,
            report,
            rule: None,
            oracle: None,
            fixed_multiplicities: None,
            seeds_agree: false,
            warnings: Vec::new(),
            mismatches: Vec::new(),
            error: Some(error),
        }
    }

    fn from_analysis(label: String, a: &PlanAnalysis) -> Self {
        Self {
            label,
            status: if a.is_consistent() { Status::Ok } else { Status::Mismatch },
            canonical_string: Some(a.canonical_string.clone()),
            pattern: Some(a.pattern.clone()),
            report: Some(a.report.clone()),
            rule: Some([a.rule[0].to_string(), a.rule[1].to_string()]),
            oracle: Some([a.oracle[0].value, a.oracle[1].value]),
            fixed_multiplicities: Some(a.fixed_multiplicities.clone()),
            seeds_agree: a.oracle.iter().all(|o| o.stable()),
            warnings: a.oracle.iter().flat_map(|o| o.warnings.clone()).collect(),
            mismatches: a.mismatches.clone(),
            error: None,
        }
    }

    pub fn case(&self) -> Option<Case> {
        self.report.as_ref().and_then(|r| r.case)
    }
}

fn analyze_record(label: String, plan: &BlowupPlan, cfg: &OracleConfig) -> (ClassifyRecord, Option<PlanAnalysis>) {
    match analyze(plan, cfg) {
        Ok(a) => (ClassifyRecord::from_analysis(label, &a), Some(a)),
        Err(Error::UnrecognisedSignature(report)) => {
            let msg = format!("unrecognised signature (h0(2K^-1), M^2) = ({}, {})", report.h0_biantican, report.movable_selfint);
            (ClassifyRecord::failed(label, msg, Some(*report)), None)
        }
        Err(e) => (ClassifyRecord::failed(label, e.to_string(), None), None),
    }
}

/// Runs both methods on every entry in parallel; output is sorted by
/// canonical string, then pattern, then label.
pub fn classify_plans(entries: Vec<Result<BlowupPlan, String>>, cfg: &OracleConfig) -> Vec<ClassifyRecord> {
    let mut records: Vec<(usize, ClassifyRecord)> = entries
        .into_par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let record = match entry {
                Ok(plan) => {
                    let label = if plan.label.is_empty() { format!("plan {i}") } else { plan.label.clone() };
                    analyze_record(label, &plan, cfg).0
                }
                Err(e) => ClassifyRecord::failed(format!("entry {i}"), e, None),
            };
            (i, record)
        })
        .collect();
    records.sort_by(|(i, a), (j, b)| {
        let key = |r: &ClassifyRecord| (r.canonical_string.is_none(), r.canonical_string.clone(), r.pattern.clone(), r.label.clone());
        key(a).cmp(&key(b)).then(i.cmp(j))
    });
    records.into_iter().map(|(_, r)| r).collect()
}

#[derive(Serialize)]
struct FlatClassifyRow {
    label: String,
    status: Status,
    string: String,
    pattern: String,
    k: Option<usize>,
    case: String,
    h0_antican: Option<i64>,
    h0_biantican: Option<i64>,
    #[serde(rename = "h0_2F")]
    h0_2f: Option<i64>,
    movable_selfint: Option<i64>,
    rule_d1: String,
    rule_d2: String,
    fixed: String,
    detail: String,
}

impl From<&ClassifyRecord> for FlatClassifyRow {
    fn from(r: &ClassifyRecord) -> Self {
        let rep = r.report.as_ref();
        let rule = r.rule.clone().unwrap_or_default();
        Self {
            label: r.label.clone(),
            status: r.status,
            string: r.canonical_string.as_deref().map(format_string).unwrap_or_default(),
            pattern: r.pattern.clone().unwrap_or_default(),
            k: rep.map(|x| x.k),
            case: r.case().map(|c| c.to_string()).unwrap_or_default(),
            h0_antican: rep.map(|x| x.h0_antican),
            h0_biantican: rep.map(|x| x.h0_biantican),
            h0_2f: rep.and_then(|x| x.h0_2f),
            movable_selfint: rep.map(|x| x.movable_selfint),
            rule_d1: rule[0].clone(),
            rule_d2: rule[1].clone(),
            fixed: r.fixed_multiplicities.as_deref().map(format_string).unwrap_or_default(),
            detail: r.error.iter().chain(&r.mismatches).chain(&r.warnings).cloned().collect::<Vec<_>>().join("; "),
        }
    }
}

fn opt(v: Option<impl ToString>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

fn emit_records(out: &mut dyn Write, format: OutputFormat, records: &[ClassifyRecord]) -> anyhow::Result<()> {
    match format {
        OutputFormat::Json => emit_json(out, &records),
        OutputFormat::Csv => emit_csv(out, &records.iter().map(FlatClassifyRow::from).collect::<Vec<_>>()),
        OutputFormat::Markdown => {
            let body: Vec<Vec<String>> = records
                .iter()
                .map(FlatClassifyRow::from)
                .map(|f| {
                    vec![
                        f.label,
                        format!("{:?}", f.status).to_lowercase(),
                        f.string,
                        f.case,
                        opt(f.h0_antican),
                        opt(f.h0_biantican),
                        opt(f.h0_2f),
                        opt(f.movable_selfint),
                        format!("{} / {}", f.rule_d1, f.rule_d2),
                        f.fixed,
                        f.detail,
                    ]
                })
                .collect();
            emit_markdown(
                out,
                &["plan", "status", "string", "case", "h0(-K)", "h0(-2K)", "h0(2F)", "M^2", "rule d=1 / d=2", "fixed part", "detail"],
                &body,
            )
        }
    }
}

pub fn cmd_classify(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Exit> {
    let Some(path) = &cfg.plan_file else {
        bail!("classify needs --plans FILE");
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let records = classify_plans(parse_plans(&text)?, &cfg.oracle());
    emit_records(out, cfg.output_format, &records)?;
    Ok(Exit::from_clean(records.iter().all(|r| r.status == Status::Ok)))
}

// ------------------------------------------------------------------- golden

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenRow {
    pub pattern: String,
    pub k: usize,
    pub string: String,
    pub case: Case,
    pub h0_antican: Option<i64>,
    pub h0_biantican: Option<i64>,
    #[serde(rename = "h0_2F")]
    pub h0_2f: Option<i64>,
    pub movable_selfint: Option<i64>,
    /// Which configuration of the case analysis the row transcribes.
    pub configuration: String,
}

pub fn golden_rows() -> anyhow::Result<Vec<GoldenRow>> {
    let mut r = csv::Reader::from_reader(GOLDEN_CSV.as_bytes());
    Ok(r.deserialize().collect::<Result<Vec<GoldenRow>, _>>()?)
}

/// Field-by-field differences between a computed record and its golden row.
pub fn golden_diff(record: &ClassifyRecord, golden: &GoldenRow) -> Vec<String> {
    let mut diffs = Vec::new();
    let Some(rep) = &record.report else {
        return vec![record.error.clone().unwrap_or_else(|| "no report".into())];
    };
    let string = record.canonical_string.as_deref().map(format_string).unwrap_or_default();
    if string != golden.string {
        diffs.push(format!("string {string}, expected {}", golden.string));
    }
    if rep.k != golden.k {
        diffs.push(format!("k {}, expected {}", rep.k, golden.k));
    }
    if rep.case != Some(golden.case) {
        diffs.push(format!("case {}, expected {}", opt(rep.case), golden.case));
    }
    let checks = [
        ("h0(-K)", Some(rep.h0_antican), golden.h0_antican),
        ("h0(-2K)", Some(rep.h0_biantican), golden.h0_biantican),
        ("h0(2F)", rep.h0_2f, golden.h0_2f),
        ("M^2", Some(rep.movable_selfint), golden.movable_selfint),
    ];
    for (name, got, want) in checks {
        if want.is_some() && got != want {
            diffs.push(format!("{name} {}, expected {}", opt(got), opt(want)));
        }
    }
    diffs.extend(record.mismatches.iter().cloned());
    diffs
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub pattern: String,
    pub k: Option<usize>,
    pub case: Option<Case>,
    pub configuration: String,
    pub pass: bool,
    pub diffs: Vec<String>,
}

pub fn verify_rows(cfg: &OracleConfig) -> anyhow::Result<Vec<VerifyRow>> {
    let golden: BTreeMap<String, GoldenRow> = golden_rows()?.into_iter().map(|g| (g.pattern.clone(), g)).collect();
    let classes = enumerate_classes();
    let records = classify_plans(classes.iter().map(|c| Ok(c.plan.clone())).collect(), cfg);

    let mut rows = Vec::new();
    let mut seen = Vec::new();
    for r in &records {
        let pattern = r.pattern.clone().unwrap_or_else(|| r.label.clone());
        let (configuration, diffs) = match golden.get(&pattern) {
            Some(g) => {
                seen.push(pattern.clone());
                (g.configuration.clone(), golden_diff(r, g))
            }
            None => (String::new(), vec!["no golden row".into()]),
        };
        rows.push(VerifyRow {
            pattern,
            k: r.report.as_ref().map(|x| x.k),
            case: r.case(),
            configuration,
            pass: diffs.is_empty(),
            diffs,
        });
    }
    for (pattern, g) in &golden {
        if !seen.contains(pattern) {
            rows.push(VerifyRow {
                pattern: pattern.clone(),
                k: Some(g.k),
                case: None,
                configuration: g.configuration.clone(),
                pass: false,
                diffs: vec!["golden row not produced by the enumeration".into()],
            });
        }
    }
    Ok(rows)
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Exit> {
    let rows = verify_rows(&cfg.oracle())?;
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &rows)?,
        OutputFormat::Csv => {
            #[derive(Serialize)]
            struct Flat<'a> {
                pattern: &'a str,
                k: Option<usize>,
                case: String,
                configuration: &'a str,
                pass: bool,
                diffs: String,
            }
            let flat: Vec<Flat> = rows
                .iter()
                .map(|r| Flat {
                    pattern: &r.pattern,
                    k: r.k,
                    case: opt(r.case),
                    configuration: &r.configuration,
                    pass: r.pass,
                    diffs: r.diffs.join("; "),
                })
                .collect();
            emit_csv(out, &flat)?;
        }
        OutputFormat::Markdown => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.pattern.clone(),
                        opt(r.k),
                        opt(r.case),
                        r.configuration.clone(),
                        if r.pass { "PASS".into() } else { "FAIL".into() },
                        r.diffs.join("; "),
                    ]
                })
                .collect();
            emit_markdown(out, &["pattern", "k", "case", "configuration", "result", "diffs"], &body)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            writeln!(out, "\n{} of {} rows match the golden table", rows.len() - failed, rows.len())?;
        }
    }
    Ok(Exit::from_clean(rows.iter().all(|r| r.pass)))
}

// -------------------------------------------------------------------- table

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub k: Option<usize>,
    pub source: String,
    pub string: String,
    pub case: Option<Case>,
    pub description: String,
    #[serde(rename = "h0_2F")]
    pub h0_2f: Option<i64>,
    pub movable_selfint: Option<i64>,
    /// Surface image of the bi-anticanonical map.
    pub image: String,
    /// Quoted statement about the threefold, never checked here.
    pub annotation: String,
    pub computed: bool,
}

/// Reference spaces whose values are constants.
pub fn reference_rows() -> Vec<TableRow> {
    [
        ("LeBrun", 9, "|2F| generated by |F|; image a hyperplane section of the Veronese embedding of CP^3"),
        ("Campana-Kreussler", 6, "image a Veronese surface in CP^5"),
    ]
    .into_iter()
    .map(|(name, h, note)| TableRow {
        k: None,
        source: name.into(),
        string: String::new(),
        case: Some(Case::TypeIII),
        description: Case::TypeIII.description().into(),
        h0_2f: Some(h),
        movable_selfint: None,
        image: String::new(),
        annotation: format!("{note} ({NOT_COMPUTED})"),
        computed: false,
    })
    .collect()
}

/// Threefold-level statements attached to a computed case.
pub fn annotation(case: Case, h0_2f: Option<i64>) -> String {
    let text = match (case, h0_2f) {
        (Case::TypeI, Some(7)) => "image of Z in CP^6 a complete intersection of 3 quadrics",
        (Case::TypeI, Some(9)) => "image of Z in CP^8 of degree 12, not a complete intersection",
        (Case::TypeII, _) => "Z 2:1 over a scroll of planes over a conic; branch divisor meets a general plane in a quartic curve",
        (Case::TypeIII, Some(5)) => "image of Z a surface, complete intersection of 2 quadrics x0x1 = x2^2, x3x4 = q(x0,x1,x2)",
        _ => return String::new(),
    };
    format!("{text} ({NOT_COMPUTED})")
}

/// Quadric count, dimension and degree of the image of the `d = 2` map at
/// the first seed.
pub fn surface_image(plan: &BlowupPlan, h0: i64, cfg: &OracleConfig) -> String {
    let seed = cfg.seeds.first().copied().unwrap_or(DEFAULT_SEEDS[0]);
    let describe = || -> anticanon::Result<String> {
        let pts = instantiate(plan, seed)?;
        let q = image_quadric_count(&pts, 2, cfg.samples)?;
        let dim = image_dimension(&pts, 2)?;
        let deg = image_degree(&pts, 2, cfg.samples)?;
        Ok(format!("CP^{}: dim {dim}, degree {deg}, {q} quadrics", h0 - 1))
    };
    describe().unwrap_or_else(|e| format!("not determined: {e}"))
}

pub fn table_rows(cfg: &RunConfig) -> Vec<TableRow> {
    let oracle = cfg.oracle();
    let classes = enumerate_classes();
    let mut rows: Vec<TableRow> = classes
        .par_iter()
        .map(|c| {
            let (record, analysis) = analyze_record(c.plan.label.clone(), &c.plan, &oracle);
            let case = record.case();
            let rep = record.report.as_ref();
            let image = match (&analysis, case) {
                (Some(a), Some(cs)) if cfg.images && cs.is_classified() => {
                    surface_image(&c.plan, a.report.h0_biantican, &oracle)
                }
                _ => String::new(),
            };
            TableRow {
                k: Some(c.k()),
                source: c.pattern.to_string(),
                string: format_string(&c.canonical_string),
                case,
                description: case.map(|x| x.description().to_string()).or(record.error.clone()).unwrap_or_default(),
                h0_2f: rep.and_then(|r| r.h0_2f),
                movable_selfint: rep.map(|r| r.movable_selfint),
                image,
                annotation: case.map(|x| annotation(x, rep.and_then(|r| r.h0_2f))).unwrap_or_default(),
                computed: record.status == Status::Ok,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.k.cmp(&a.k).then(a.case.cmp(&b.case)).then(a.source.cmp(&b.source)));
    rows.extend(reference_rows());
    rows
}

pub fn cmd_table(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Exit> {
    let rows = table_rows(cfg);
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &rows)?,
        OutputFormat::Csv => {
            #[derive(Serialize)]
            struct Flat<'a> {
                k: Option<usize>,
                source: &'a str,
                string: &'a str,
                case: String,
                description: &'a str,
                #[serde(rename = "h0_2F")]
                h0_2f: Option<i64>,
                movable_selfint: Option<i64>,
                image: &'a str,
                annotation: &'a str,
                computed: bool,
            }
            let flat: Vec<Flat> = rows
                .iter()
                .map(|r| Flat {
                    k: r.k,
                    source: &r.source,
                    string: &r.string,
                    case: opt(r.case),
                    description: &r.description,
                    h0_2f: r.h0_2f,
                    movable_selfint: r.movable_selfint,
                    image: &r.image,
                    annotation: &r.annotation,
                    computed: r.computed,
                })
                .collect();
            emit_csv(out, &flat)?;
        }
        OutputFormat::Markdown => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        opt(r.k),
                        r.source.clone(),
                        r.string.clone(),
                        opt(r.case),
                        r.description.clone(),
                        opt(r.h0_2f),
                        opt(r.movable_selfint),
                        r.image.clone(),
                        r.annotation.clone(),
                        if r.computed { "computed".into() } else { NOT_COMPUTED.into() },
                    ]
                })
                .collect();
            emit_markdown(
                out,
                &["k", "configuration", "string", "case", "map", "h0(2F)", "M^2", "surface image (d=2)", "threefold", "status"],
                &body,
            )?;
        }
    }
    Ok(Exit::from_clean(rows.iter().filter(|r| r.k.is_some()).all(|r| r.computed)))
}
