//! Reading and writing tabular data, building threshold grids from it,
//! and injecting measurement uncertainty into exact columns.
//!
//! CSV cells come in four shapes: a plain number, an integer range
//! `a..b` standing for the run of unit cells `]a-1, b]`, a decimal range
//! `lo..hi` taken literally as `]lo, hi]`, and the distributions
//! `N(mu,sigma)` and `U{c1,c2,...}`. A column named `class` holds object
//! labels instead of values.

use std::io::{BufRead, Read, Write};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::dist::{sample_normal, std_normal_quantile, Cdf};
use crate::encoding::{EncodedDataset, ItemVocabulary, VarSpec};
use crate::error::{Error, Result};
use crate::interval::{Interval, ThresholdGrid};
use crate::pattern::Language;

/// One parsed CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Point(f64),
    Interval(Interval),
    Dist(Cdf),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Point(y) => write!(f, "{y:?}"),
            Value::Interval(iv) => write!(f, "{:?}..{:?}", iv.lo(), iv.hi()),
            Value::Dist(c) => write!(f, "{c}"),
        }
    }
}

pub fn parse_cell(s: &str) -> Result<Value> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Data("empty cell".into()));
    }
    if let Some(inner) = t.strip_prefix("N(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Data(format!("`{t}`: expected N(mu,sigma)")));
        }
        let mu = parse_num(parts[0])?;
        let sigma = parse_num(parts[1])?;
        return Ok(Value::Dist(Cdf::normal(mu, sigma)?));
    }
    if let Some(inner) = t.strip_prefix("U{").and_then(|r| r.strip_suffix('}')) {
        let points = inner
            .split(',')
            .map(parse_num)
            .collect::<Result<Vec<f64>>>()?;
        return Ok(Value::Dist(Cdf::discrete(points)?));
    }
    if let Some((a, b)) = t.split_once("..") {
        // Integer endpoints follow the unit-cell convention: `1..2` is the
        // two cells ]0,1] and ]1,2], i.e. the interval ]0,2]. Decimal
        // endpoints are literal bounds.
        if let (Ok(ia), Ok(ib)) = (a.trim().parse::<i64>(), b.trim().parse::<i64>()) {
            if ia > ib {
                return Err(Error::Data(format!("`{t}`: range runs backwards")));
            }
            return Ok(Value::Interval(Interval::new(ia as f64 - 1.0, ib as f64)?));
        }
        let lo = parse_num(a)?;
        let hi = parse_num(b)?;
        return Ok(Value::Interval(Interval::new(lo, hi)?));
    }
    Ok(Value::Point(parse_num(t)?))
}

fn parse_num(s: &str) -> Result<f64> {
    let t = s.trim();
    t.parse::<f64>()
        .map_err(|_| Error::Data(format!("`{t}` is not a number")))
        .and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Data(format!("`{t}` is not finite")))
            }
        })
}

#[derive(Clone, Debug)]
pub struct Column {
    pub name: String,
    pub values: Vec<Value>,
}

/// A loaded dataset: data columns plus optional object labels.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<Column>,
    pub labels: Option<Vec<String>>,
    pub n_rows: usize,
}

impl Table {
    /// All columns as plain numbers; errors if any cell is not a point.
    pub fn numeric_rows(&self) -> Result<Vec<Vec<f64>>> {
        let mut rows = vec![Vec::with_capacity(self.columns.len()); self.n_rows];
        for col in &self.columns {
            for (r, v) in col.values.iter().enumerate() {
                match v {
                    Value::Point(y) => rows[r].push(*y),
                    other => {
                        return Err(Error::Data(format!(
                            "column `{}` holds `{other}`, not a plain number",
                            col.name
                        )))
                    }
                }
            }
        }
        Ok(rows)
    }
}

/// Load a headed CSV; the column named `class`, if present, becomes the
/// labels.
pub fn load_csv(r: impl Read) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.to_string()).collect();
    let class_idx = headers.iter().position(|h| h == "class");
    let mut columns: Vec<Column> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != class_idx)
        .map(|(_, h)| Column {
            name: h.clone(),
            values: Vec::new(),
        })
        .collect();
    if columns.is_empty() {
        return Err(Error::Data("no data columns".into()));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut n_rows = 0usize;
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != headers.len() {
            return Err(Error::Data(format!(
                "row {} has {} fields, header has {}",
                n_rows + 1,
                rec.len(),
                headers.len()
            )));
        }
        let mut ci = 0usize;
        for (i, cell) in rec.iter().enumerate() {
            if Some(i) == class_idx {
                labels.push(cell.to_string());
            } else {
                let v = parse_cell(cell).map_err(|e| {
                    Error::Data(format!("row {}, column `{}`: {e}", n_rows + 1, headers[i]))
                })?;
                columns[ci].values.push(v);
                ci += 1;
            }
        }
        n_rows += 1;
    }
    for col in &columns {
        let kind = |v: &Value| match v {
            Value::Point(_) => "point",
            Value::Interval(_) => "interval",
            Value::Dist(_) => "distribution",
        };
        if let Some(first) = col.values.first() {
            if let Some((row, v)) = col
                .values
                .iter()
                .enumerate()
                .find(|(_, v)| kind(v) != kind(first))
            {
                return Err(Error::Data(format!(
                    "column `{}` mixes {} and {} cells (row {})",
                    col.name,
                    kind(first),
                    kind(v),
                    row + 1
                )));
            }
        }
    }
    Ok(Table {
        columns,
        labels: class_idx.map(|_| labels),
        n_rows,
    })
}

/// Write a table back out; cells print in the same grammar `parse_cell`
/// reads (ranges always with decimal endpoints, so they round-trip
/// literally).
pub fn write_csv(table: &Table, w: impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
    if table.labels.is_some() {
        header.push("class");
    }
    wtr.write_record(&header)?;
    for r in 0..table.n_rows {
        let mut rec: Vec<String> = table
            .columns
            .iter()
            .map(|c| c.values[r].to_string())
            .collect();
        if let Some(labels) = &table.labels {
            rec.push(labels[r].clone());
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Smallest positive gap between distinct sorted values; the grid
/// resolution when none is given. Falls back to 1 when everything
/// coincides.
pub fn default_epsilon(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    let gap = v
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&g| g > 0.0)
        .fold(f64::INFINITY, f64::min);
    if gap.is_finite() {
        gap
    } else {
        1.0
    }
}

/// Equal-width grid over the observed range: `bins - 1` thresholds at
/// `min + i (max - min) / bins`, domain `]min - epsilon, max]` so that a
/// point sitting exactly at the minimum still falls inside.
pub fn equal_width_grid(min: f64, max: f64, bins: usize, epsilon: f64) -> Result<ThresholdGrid> {
    if bins < 2 {
        return Err(Error::Invalid(format!("{bins} bins leave no threshold")));
    }
    if !min.is_finite() || !max.is_finite() || min >= max {
        return Err(Error::Invalid(format!(
            "degenerate range [{min}, {max}]; an equal-width grid needs spread"
        )));
    }
    let width = (max - min) / bins as f64;
    let thresholds: Vec<f64> = (1..bins).map(|i| min + i as f64 * width).collect();
    ThresholdGrid::new(min - epsilon, max, &thresholds, epsilon)
}

/// The numbers a cell contributes to range and resolution statistics.
fn stat_values(v: &Value) -> Vec<f64> {
    match v {
        Value::Point(y) => vec![*y],
        Value::Interval(iv) => vec![iv.lo(), iv.hi()],
        Value::Dist(Cdf::Normal { mu, .. }) => vec![*mu],
        Value::Dist(Cdf::Discrete { points }) => points.clone(),
    }
}

/// Equal-width variable specs derived from the data itself, optionally
/// alpha-tagged (for distribution columns). Distribution cells enter the
/// statistics through their centers (normals) or support (discrete), which
/// keeps grids comparable between the exact data and its noisy versions.
pub fn make_var_specs(table: &Table, bins: usize, alphas: &[f64]) -> Result<Vec<VarSpec>> {
    let mut specs = Vec::with_capacity(table.columns.len());
    for col in &table.columns {
        let vals: Vec<f64> = col.values.iter().flat_map(stat_values).collect();
        if vals.is_empty() {
            return Err(Error::Data(format!("column `{}` has no values", col.name)));
        }
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in &vals {
            min = min.min(v);
            max = max.max(v);
        }
        let eps = default_epsilon(&vals);
        let grid = equal_width_grid(min, max, bins, eps)
            .map_err(|e| Error::Invalid(format!("column `{}`: {e}", col.name)))?;
        specs.push(VarSpec::tagged(col.name.clone(), grid, alphas.to_vec()));
    }
    Ok(specs)
}

/// Encode a loaded table against a vocabulary: plain vocabularies take
/// point and interval cells (points become unit cells at the grid
/// resolution), alpha-tagged vocabularies take distribution cells.
pub fn encode_table(
    name: impl Into<String>,
    table: &Table,
    vocab: &ItemVocabulary,
) -> Result<EncodedDataset> {
    if table.columns.len() != vocab.vars().len() {
        return Err(Error::Invalid(format!(
            "table has {} columns, vocabulary {} variables",
            table.columns.len(),
            vocab.vars().len()
        )));
    }
    for (col, spec) in table.columns.iter().zip(vocab.vars()) {
        if col.name != spec.name {
            return Err(Error::Invalid(format!(
                "column `{}` does not match variable `{}`",
                col.name, spec.name
            )));
        }
    }
    let tagged = vocab.vars().iter().any(|v| !v.alphas.is_empty());
    let mut itemsets = Vec::with_capacity(table.n_rows);
    for r in 0..table.n_rows {
        let items = if tagged {
            let row: Vec<Cdf> = table
                .columns
                .iter()
                .map(|c| match &c.values[r] {
                    Value::Dist(f) => Ok(f.clone()),
                    other => Err(Error::Data(format!(
                        "row {}, column `{}`: `{other}` is not a distribution",
                        r + 1,
                        c.name
                    ))),
                })
                .collect::<Result<_>>()?;
            crate::dist::encode_cdf_row(vocab, &row)?
        } else {
            let row: Vec<Interval> = table
                .columns
                .iter()
                .zip(vocab.vars())
                .map(|(c, spec)| match &c.values[r] {
                    Value::Point(y) => Interval::point(*y, spec.grid.epsilon()),
                    Value::Interval(iv) => Ok(*iv),
                    Value::Dist(_) => Err(Error::Data(format!(
                        "row {}, column `{}` holds a distribution; alpha levels are required",
                        r + 1,
                        c.name
                    ))),
                })
                .collect::<Result<_>>()?;
            vocab
                .encode_interval_row(&row)
                .map_err(|e| Error::Data(format!("row {}: {e}", r + 1)))?
        };
        itemsets.push(items);
    }
    let mut ds = EncodedDataset::from_itemsets(name, vocab.clone(), itemsets)?;
    if let Some(labels) = &table.labels {
        ds.set_labels(labels.clone())?;
    }
    Ok(ds)
}

/// How measurement noise is injected into exact columns.
#[derive(Clone, Copy, Debug)]
pub struct NoiseConfig {
    /// The per-object noise scale is drawn uniformly from
    /// `]0, sigma_max / rel]`.
    pub rel: f64,
    /// Draw one scale per column instead of one per object.
    pub shared_sigma: bool,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            rel: 1.75,
            shared_sigma: false,
            seed: 0,
        }
    }
}

/// Largest noise scale considered for a column spanning `range`: the
/// normal whose central 80% band just covers the column,
/// `range / (2 * quantile(0.9))`.
pub fn sigma_max(range: f64) -> f64 {
    range / (2.0 * std_normal_quantile(0.9).expect("0.9 is inside ]0, 1["))
}

/// Per-column generator; columns evolve independently so adding or
/// reordering one never disturbs the draws of another.
fn column_rng(seed: u64, col: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_add((col as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    )
}

/// Uniform draw from `]0, m]`.
fn positive_uniform(rng: &mut impl Rng, m: f64) -> f64 {
    m - rng.random_range(0.0..m)
}

/// Replace every exact value `z` by a noisy observation `v = z + e`,
/// `e ~ N(0, sigma)`, returning both the observed points and the observed
/// distributions `N(v, sigma)` the measuring device would report. Per
/// column the draw order is: the shared scale if configured, then per
/// object (its own scale unless shared, then its error).
pub fn simulate_measurements(table: &Table, cfg: &NoiseConfig) -> Result<(Table, Table)> {
    if !cfg.rel.is_finite() || cfg.rel <= 0.0 {
        return Err(Error::Invalid(format!(
            "noise divisor {} must be positive",
            cfg.rel
        )));
    }
    let mut point_cols = Vec::with_capacity(table.columns.len());
    let mut dist_cols = Vec::with_capacity(table.columns.len());
    for (ci, col) in table.columns.iter().enumerate() {
        let points = column_points(col)?;
        let (min, max) = min_max(&points, &col.name)?;
        let cap = sigma_max(max - min) / cfg.rel;
        let mut rng = column_rng(cfg.seed, ci);
        let shared = cfg.shared_sigma.then(|| positive_uniform(&mut rng, cap));
        let mut observed = Vec::with_capacity(points.len());
        let mut reported = Vec::with_capacity(points.len());
        for &z in &points {
            let sigma = shared.unwrap_or_else(|| positive_uniform(&mut rng, cap));
            let v = z + sample_normal(&mut rng, 0.0, sigma);
            observed.push(Value::Point(v));
            reported.push(Value::Dist(Cdf::normal(v, sigma)?));
        }
        point_cols.push(Column {
            name: col.name.clone(),
            values: observed,
        });
        dist_cols.push(Column {
            name: col.name.clone(),
            values: reported,
        });
    }
    let points = Table {
        columns: point_cols,
        labels: table.labels.clone(),
        n_rows: table.n_rows,
    };
    let dists = Table {
        columns: dist_cols,
        labels: table.labels.clone(),
        n_rows: table.n_rows,
    };
    Ok((points, dists))
}

/// Replace every exact value `z` by an interval around it: a reach `w` is
/// drawn uniformly from `[0, range/2]` and the interval is
/// `]max(min, z - w), min(max, z + w)]`, clipped to the column's observed
/// range; a zero draw falls back to the unit cell `]z - epsilon, z]`.
pub fn intervalize(table: &Table, seed: u64) -> Result<Table> {
    let mut columns = Vec::with_capacity(table.columns.len());
    for (ci, col) in table.columns.iter().enumerate() {
        let points = column_points(col)?;
        let (min, max) = min_max(&points, &col.name)?;
        let eps = default_epsilon(&points);
        let mut rng = column_rng(seed, ci);
        let values = points
            .iter()
            .map(|&z| {
                let w = rng.random_range(0.0..=(max - min) / 2.0);
                let lo = (z - w).max(min);
                let hi = (z + w).min(max);
                let iv = if lo < hi {
                    Interval::new(lo, hi)?
                } else {
                    Interval::point(z, eps)?
                };
                Ok(Value::Interval(iv))
            })
            .collect::<Result<Vec<Value>>>()?;
        columns.push(Column {
            name: col.name.clone(),
            values,
        });
    }
    Ok(Table {
        columns,
        labels: table.labels.clone(),
        n_rows: table.n_rows,
    })
}

/// One encoded dataset per requested (language, alpha-set) pair over the
/// same grids, named `<base>_<lang><k>[_<alphas>]`. Plain (point or
/// interval) tables take the empty alpha-set; distribution tables need
/// non-empty ones.
pub fn build_datasets(
    base: &str,
    table: &Table,
    specs: &[VarSpec],
    languages: &[Language],
    alpha_sets: &[Vec<f64>],
) -> Result<Vec<EncodedDataset>> {
    if specs.is_empty() || languages.is_empty() || alpha_sets.is_empty() {
        return Err(Error::Invalid(
            "dataset building needs grids, languages and alpha-sets".into(),
        ));
    }
    let k = specs[0].grid.k();
    let mut out = Vec::new();
    for &lang in languages {
        for alphas in alpha_sets {
            let tagged: Vec<VarSpec> = specs
                .iter()
                .map(|s| VarSpec::tagged(s.name.clone(), s.grid.clone(), alphas.clone()))
                .collect();
            let vocab = ItemVocabulary::new(lang, tagged)?;
            let mut name = format!("{base}_{lang}{k}");
            if !alphas.is_empty() {
                let joined: Vec<String> = alphas.iter().map(|a| a.to_string()).collect();
                name.push('_');
                name.push_str(&joined.join("-"));
            }
            out.push(encode_table(name, table, &vocab)?);
        }
    }
    Ok(out)
}

fn column_points(col: &Column) -> Result<Vec<f64>> {
    col.values
        .iter()
        .map(|v| match v {
            Value::Point(y) => Ok(*y),
            other => Err(Error::Data(format!(
                "column `{}` holds `{other}`; only exact values can take noise",
                col.name
            ))),
        })
        .collect()
}

fn min_max(points: &[f64], name: &str) -> Result<(f64, f64)> {
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &p in points {
        min = min.min(p);
        max = max.max(p);
    }
    if min >= max {
        return Err(Error::Data(format!(
            "column `{name}` is constant; its range carries no signal"
        )));
    }
    Ok((min, max))
}

/// Persist a vocabulary as a small text manifest:
/// a `language=` line, then one tab-separated `var` line per variable with
/// its domain, resolution, thresholds and alpha levels.
pub fn write_manifest(vocab: &ItemVocabulary, mut w: impl Write) -> Result<()> {
    writeln!(w, "format=1")?;
    writeln!(w, "language={}", vocab.language())?;
    for v in vocab.vars() {
        let join = |xs: &[f64]| -> String {
            // `-` keeps empty lists visible: a trailing empty field would
            // not survive whitespace trimming on the way back in.
            if xs.is_empty() {
                return "-".into();
            }
            let parts: Vec<String> = xs.iter().map(|x| format!("{x:?}")).collect();
            parts.join(",")
        };
        writeln!(
            w,
            "var\t{}\t{:?}\t{:?}\t{:?}\t{}\t{}",
            v.name,
            v.grid.domain().lo(),
            v.grid.domain().hi(),
            v.grid.epsilon(),
            join(v.grid.thresholds()),
            join(&v.alphas)
        )?;
    }
    Ok(())
}

pub fn read_manifest(r: impl BufRead) -> Result<ItemVocabulary> {
    let mut language: Option<Language> = None;
    let mut specs: Vec<VarSpec> = Vec::new();
    for (ln, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t == "format=1" {
            continue;
        }
        if let Some(l) = t.strip_prefix("language=") {
            language = Some(l.parse()?);
            continue;
        }
        if let Some(rest) = t.strip_prefix("var\t") {
            let f: Vec<&str> = rest.split('\t').collect();
            if f.len() != 6 {
                return Err(Error::Data(format!(
                    "line {}: expected 6 tab-separated fields after `var`",
                    ln + 1
                )));
            }
            let lo = parse_num(f[1])?;
            let hi = parse_num(f[2])?;
            let eps = parse_num(f[3])?;
            let thresholds: Vec<f64> = split_nums(f[4])?;
            let alphas: Vec<f64> = split_nums(f[5])?;
            let grid = ThresholdGrid::new(lo, hi, &thresholds, eps)?;
            specs.push(VarSpec::tagged(f[0].to_string(), grid, alphas));
            continue;
        }
        return Err(Error::Data(format!("line {}: unrecognized `{t}`", ln + 1)));
    }
    let language = language.ok_or_else(|| Error::Data("manifest has no language line".into()))?;
    ItemVocabulary::new(language, specs)
}

fn split_nums(s: &str) -> Result<Vec<f64>> {
    let t = s.trim();
    if t.is_empty() || t == "-" {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_num).collect()
}
