//! Command-line front end: ingest CSV data, build threshold grids, inject
//! uncertainty, encode into itemsets, mine closed patterns, interpret and
//! evaluate them.
//!
//! Exit codes: 0 success, 2 usage or validation problem, 3 data or IO
//! problem; all failures print a single `error: ...` line on stderr.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use rangemine::encoding::{self, EncodedDataset, ItemVocabulary, VarSpec};
use rangemine::ingest::{self, NoiseConfig, Table};
use rangemine::metrics;
use rangemine::mining::{self, Concept};
use rangemine::pattern::Language;
use rangemine::{BitSet, Error, Result};

#[derive(Parser)]
#[command(
    name = "rangemine",
    version,
    about = "Closed pattern mining over interval-valued and distribution-valued data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a CSV into an itemset file (FIMI), item map and grid manifest
    Encode(EncodeArgs),
    /// Mine closed patterns from an encoded dataset
    Mine(MineArgs),
    /// Decode an itemset (or a concept file) into range statements
    Interpret(InterpretArgs),
    /// Score mined concepts against labels and cluster the objects
    Eval(EvalArgs),
    /// Inject measurement noise into exact data and encode the results
    Simulate(SimulateArgs),
    /// Distances between concept support sets and a labeled partition
    Distance(DistanceArgs),
}

fn parse_language(s: &str) -> std::result::Result<Language, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Comma-separated alpha levels, e.g. `0.1` or `0.1,0.25`.
fn parse_alpha_set(s: &str) -> std::result::Result<Vec<f64>, String> {
    let set: std::result::Result<Vec<f64>, _> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect();
    let set = set?;
    if set.is_empty() {
        return Err("empty alpha set".into());
    }
    Ok(set)
}

#[derive(clap::Args)]
struct EncodeArgs {
    /// Input CSV (cells: number, `a..b`, `N(mu,sigma)`, `U{c1,...}`)
    #[arg(long)]
    input: PathBuf,
    /// Pattern language
    #[arg(long, value_parser = parse_language, default_value = "i")]
    lang: Language,
    /// Number of equal-width bins (thresholds = bins - 1)
    #[arg(long, default_value_t = 5)]
    bins: usize,
    /// Alpha level for distribution atoms (repeatable)
    #[arg(long, value_parser = clap::value_parser!(f64))]
    alpha: Vec<f64>,
    /// Reuse grids from an existing manifest instead of recomputing
    #[arg(long)]
    grids: Option<PathBuf>,
    /// Widen exact values into random intervals before encoding
    #[arg(long)]
    widen: bool,
    /// Seed for --widen
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Output stem (default: input stem + language + threshold count)
    #[arg(long)]
    name: Option<String>,
}

#[derive(clap::Args)]
struct MineArgs {
    /// Encoded dataset (one line of item ids per object)
    #[arg(long)]
    fimi: PathBuf,
    /// Grid manifest written alongside the encoding
    #[arg(long)]
    manifest: PathBuf,
    /// Minimum absolute support
    #[arg(long, default_value_t = 1, conflicts_with = "rel_support")]
    min_support: usize,
    /// Minimum support as a fraction of the objects (converted upward)
    #[arg(long)]
    rel_support: Option<f64>,
    /// Also write the lattice cover edges
    #[arg(long)]
    lattice: bool,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Output stem (default: the FIMI file's stem)
    #[arg(long)]
    name: Option<String>,
}

#[derive(clap::Args)]
struct InterpretArgs {
    /// Grid manifest describing the vocabulary
    #[arg(long)]
    manifest: PathBuf,
    /// Item ids to decode, space or comma separated
    #[arg(long, conflicts_with = "concepts")]
    items: Option<String>,
    /// Concept file to annotate line by line
    #[arg(long)]
    concepts: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Concept file from `mine`
    #[arg(long)]
    concepts: PathBuf,
    /// The encoded dataset the concepts came from
    #[arg(long)]
    fimi: PathBuf,
    /// Grid manifest for the encoding
    #[arg(long)]
    manifest: PathBuf,
    /// Original CSV carrying the `class` column
    #[arg(long)]
    data: PathBuf,
    /// Clusters for the k-medoids run
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Clustering trials
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cluster on Euclidean distance over the original numeric columns
    /// instead of Jaccard distance over the itemsets
    #[arg(long)]
    euclidean: bool,
    /// Standardize columns before Euclidean distances
    #[arg(long, requires = "euclidean")]
    standardize: bool,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Output stem (default: the concept file's stem)
    #[arg(long)]
    name: Option<String>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Input CSV of exact values
    #[arg(long)]
    input: PathBuf,
    /// Bin count for the encodings (repeatable)
    #[arg(long, required = true)]
    bins: Vec<usize>,
    /// Alpha set for one distribution encoding, e.g. `0.1` or `0.1,0.25`
    /// (repeatable; each occurrence yields one encoded dataset)
    #[arg(long, value_parser = parse_alpha_set)]
    alpha: Vec<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise reduction factor: scales are drawn from ]0, sigma_max/r]
    #[arg(long, default_value_t = 1.75)]
    r: f64,
    /// One noise scale per column instead of one per object
    #[arg(long)]
    shared_sigma: bool,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Base name for everything written (default: input stem)
    #[arg(long)]
    name: Option<String>,
}

#[derive(clap::Args)]
struct DistanceArgs {
    /// Concept file from `mine`
    #[arg(long)]
    concepts: PathBuf,
    /// CSV carrying the `class` column
    #[arg(long)]
    data: PathBuf,
    /// Seed for the size-preserving random partition baseline
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Encode(a) => cmd_encode(a),
        Cmd::Mine(a) => cmd_mine(a),
        Cmd::Interpret(a) => cmd_interpret(a),
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Distance(a) => cmd_distance(a),
    };
    if let Err(e) = r {
        // A downstream reader closing the pipe (| head) ends the run
        // quietly; it is not an error of ours.
        if matches!(&e, Error::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

// ---------------------------------------------------------------- helpers

/// `println!` that reports stdout failure instead of panicking.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let mut out = std::io::stdout().lock();
        writeln!(out, $($arg)*).map_err(Error::from)
    }};
}

fn open(path: &Path) -> Result<BufReader<fs::File>> {
    let f = fs::File::open(path)
        .map_err(|e| Error::Data(format!("cannot open `{}`: {e}", path.display())))?;
    Ok(BufReader::new(f))
}

/// Write through a temp file and rename, so readers never see half files.
fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let f = fs::File::create(&tmp)
            .map_err(|e| Error::Data(format!("cannot create `{}`: {e}", tmp.display())))?;
        let mut w = BufWriter::new(f);
        body(&mut w)?;
        w.flush()?;
    }
    fs::rename(&tmp, path)
        .map_err(|e| Error::Data(format!("cannot move into `{}`: {e}", path.display())))?;
    Ok(())
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| Error::Data(format!("cannot create `{}`: {e}", dir.display())))
}

fn write_dataset_files(ds: &EncodedDataset, dir: &Path) -> Result<()> {
    let stem = ds.name();
    write_atomic(&dir.join(format!("{stem}.fimi")), |w| {
        encoding::write_fimi(ds, w)
    })?;
    write_atomic(&dir.join(format!("{stem}.map.tsv")), |w| {
        encoding::write_item_map(ds, w)
    })?;
    write_atomic(&dir.join(format!("{stem}.manifest")), |w| {
        ingest::write_manifest(ds.vocab(), w)
    })?;
    if ds.objects().iter().any(|o| o.label.is_some()) {
        write_atomic(&dir.join(format!("{stem}.labels.csv")), |w| {
            encoding::write_labeled_csv(ds, w)
        })?;
    }
    Ok(())
}

fn load_encoded(fimi: &Path, manifest: &Path, name: &str) -> Result<EncodedDataset> {
    let vocab = ingest::read_manifest(open(manifest)?)?;
    let rows = encoding::parse_fimi(open(fimi)?, vocab.len())?;
    EncodedDataset::from_itemsets(name, vocab, rows)
}

/// One `support<TAB>extent<TAB>intent<TAB>text` record per concept.
fn write_concepts(concepts: &[Concept], vocab: &ItemVocabulary, w: &mut dyn Write) -> Result<()> {
    for c in concepts {
        let extent: Vec<String> = c.extent.iter().map(|i| i.to_string()).collect();
        let intent: Vec<String> = c.intent.iter().map(|i| i.to_string()).collect();
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            c.support(),
            extent.join(" "),
            intent.join(" "),
            vocab.interpretation(&c.intent)?
        )?;
    }
    Ok(())
}

struct ConceptRecord {
    support: usize,
    extent: Vec<usize>,
    intent: Vec<usize>,
}

fn read_concepts(path: &Path) -> Result<Vec<ConceptRecord>> {
    let mut out = Vec::new();
    for (ln, line) in open(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 {
            return Err(Error::Data(format!(
                "{}:{}: expected support<TAB>extent<TAB>intent",
                path.display(),
                ln + 1
            )));
        }
        let parse_ids = |s: &str| -> Result<Vec<usize>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Data(format!("bad id `{t}` at line {}", ln + 1)))
                })
                .collect()
        };
        out.push(ConceptRecord {
            support: fields[0]
                .trim()
                .parse()
                .map_err(|_| Error::Data(format!("bad support at line {}", ln + 1)))?,
            extent: parse_ids(fields[1])?,
            intent: parse_ids(fields[2])?,
        });
    }
    Ok(out)
}

fn extents_of(records: &[ConceptRecord], n_objects: usize) -> Result<Vec<BitSet>> {
    records
        .iter()
        .map(|r| {
            if let Some(&bad) = r.extent.iter().find(|&&i| i >= n_objects) {
                return Err(Error::Data(format!(
                    "extent object id {bad} outside the {n_objects}-object dataset"
                )));
            }
            if r.extent.len() != r.support {
                return Err(Error::Data(format!(
                    "support {} disagrees with extent size {}",
                    r.support,
                    r.extent.len()
                )));
            }
            Ok(BitSet::from_indices(n_objects, &r.extent))
        })
        .collect()
}

fn class_sets(table: &Table) -> Result<(Vec<BitSet>, metrics::Partition)> {
    let labels = table
        .labels
        .as_ref()
        .ok_or_else(|| Error::Invalid("missing labels: the data has no `class` column".into()))?;
    let (partition, _names) = metrics::Partition::from_names(labels)?;
    Ok((partition.classes(), partition))
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

// ------------------------------------------------------------ subcommands

fn cmd_encode(a: EncodeArgs) -> Result<()> {
    let mut table = ingest::load_csv(open(&a.input)?)?;
    if table.n_rows == 0 {
        return Err(Error::Invalid(format!(
            "no objects in `{}`",
            a.input.display()
        )));
    }
    ensure_dir(&a.out)?;
    let mut alphas = a.alpha.clone();
    alphas.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Grids come from the manifest or from the original values; widening
    // happens afterwards so that the thresholds describe the measurements,
    // not the injected uncertainty.
    let specs: Vec<VarSpec> = match &a.grids {
        Some(m) => ingest::read_manifest(open(m)?)?
            .vars()
            .iter()
            .map(|v| VarSpec::tagged(v.name.clone(), v.grid.clone(), alphas.clone()))
            .collect(),
        None => ingest::make_var_specs(&table, a.bins, &alphas)?,
    };
    if a.widen {
        table = ingest::intervalize(&table, a.seed)?;
    }
    let k = specs[0].grid.k();
    let stem = a.name.unwrap_or_else(|| {
        let mut s = format!("{}_{}{}", stem_of(&a.input), a.lang, k);
        if !alphas.is_empty() {
            let joined: Vec<String> = alphas.iter().map(|x| x.to_string()).collect();
            s.push('_');
            s.push_str(&joined.join("-"));
        }
        s
    });
    let vocab = ItemVocabulary::new(a.lang, specs)?;
    let ds = ingest::encode_table(stem.clone(), &table, &vocab)?;
    if a.widen {
        write_atomic(&a.out.join(format!("{stem}.widened.csv")), |w| {
            ingest::write_csv(&table, w)
        })?;
    }
    write_dataset_files(&ds, &a.out)?;
    say!(
        "encoded {} objects over {} items into {}",
        ds.n_objects(),
        ds.vocab().len(),
        a.out.join(format!("{stem}.fimi")).display()
    )?;
    Ok(())
}

fn cmd_mine(a: MineArgs) -> Result<()> {
    let stem = a.name.clone().unwrap_or_else(|| stem_of(&a.fimi));
    let ds = load_encoded(&a.fimi, &a.manifest, &stem)?;
    ensure_dir(&a.out)?;
    let n = ds.n_objects();
    let min_support = match a.rel_support {
        Some(r) => {
            if !(0.0 < r && r <= 1.0) {
                return Err(Error::Invalid(format!(
                    "relative support {r} outside ]0, 1]"
                )));
            }
            ((r * n as f64).ceil() as usize).max(1)
        }
        None => a.min_support,
    };
    if n == 0 {
        eprintln!("warning: dataset has no objects; nothing to mine");
    } else if min_support > n {
        return Err(Error::Invalid(format!(
            "min support {min_support} exceeds the {n} objects"
        )));
    }
    let concepts = mining::mine_closed(&ds, min_support)?;
    write_atomic(&a.out.join(format!("{stem}.concepts.tsv")), |w| {
        write_concepts(&concepts, ds.vocab(), w)
    })?;
    if a.lattice {
        let edges = mining::lattice_edges(&concepts);
        write_atomic(&a.out.join(format!("{stem}.edges.tsv")), |w| {
            for (parent, child) in &edges {
                writeln!(w, "{parent}\t{child}")?;
            }
            Ok(())
        })?;
    }
    say!(
        "mined {} concepts at min support {} into {}",
        concepts.len(),
        min_support,
        a.out.join(format!("{stem}.concepts.tsv")).display()
    )?;
    Ok(())
}

fn cmd_interpret(a: InterpretArgs) -> Result<()> {
    let vocab = ingest::read_manifest(open(&a.manifest)?)?;
    match (&a.items, &a.concepts) {
        (Some(items), None) => {
            let ids: Vec<usize> = items
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Invalid(format!("bad item id `{t}`")))
                })
                .collect::<Result<_>>()?;
            if let Some(&bad) = ids.iter().find(|&&i| i >= vocab.len()) {
                return Err(Error::Invalid(format!(
                    "item id {bad} outside the {}-item vocabulary",
                    vocab.len()
                )));
            }
            let set = BitSet::from_indices(vocab.len(), &ids);
            let atoms: Vec<String> = set.iter().map(|i| vocab.atom_text(i)).collect();
            say!("atoms: {}", atoms.join(" "))?;
            say!("{}", vocab.interpretation(&set)?)?;
            Ok(())
        }
        (None, Some(path)) => {
            for rec in read_concepts(path)? {
                let set = BitSet::from_indices(vocab.len(), &rec.intent);
                say!("{}\t{}", rec.support, vocab.interpretation(&set)?)?;
            }
            Ok(())
        }
        _ => Err(Error::Invalid(
            "exactly one of --items and --concepts is required".into(),
        )),
    }
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let stem = a.name.clone().unwrap_or_else(|| stem_of(&a.concepts));
    let ds = load_encoded(&a.fimi, &a.manifest, &stem)?;
    let table = ingest::load_csv(open(&a.data)?)?;
    if table.n_rows != ds.n_objects() {
        return Err(Error::Data(format!(
            "data has {} rows but the encoding has {} objects",
            table.n_rows,
            ds.n_objects()
        )));
    }
    ensure_dir(&a.out)?;
    let (classes, truth) = class_sets(&table)?;
    let records = read_concepts(&a.concepts)?;
    let extents = extents_of(&records, ds.n_objects())?;

    let n_patterns = extents.len();
    let covering = metrics::covering(&extents, ds.n_objects());
    let avg_support = metrics::avg_support(&extents)?;
    let d_classes = metrics::dist_to_partition(&extents, &classes)?;
    let d_random = metrics::dist_to_partition(&extents, &truth.shuffled(a.seed).classes())?;

    let matrix = if a.euclidean {
        let mut rows = table.numeric_rows()?;
        if a.standardize {
            standardize(&mut rows);
        }
        metrics::euclidean_matrix(&rows)?
    } else {
        let itemsets: Vec<BitSet> = ds.objects().iter().map(|o| o.items.clone()).collect();
        metrics::jaccard_matrix(&itemsets)?
    };
    let scores: Vec<f64> = metrics::k_medoids_trials(&matrix, a.k, a.trials, a.seed)?
        .iter()
        .map(|p| metrics::overall_f_measure(&truth, p))
        .collect::<Result<_>>()?;
    let (f_mean, f_std) = mean_std(&scores);

    let lang = ds.vocab().language().to_string();
    let distance_kind = if a.euclidean { "euclidean" } else { "jaccard" };
    write_atomic(&a.out.join(format!("{stem}.report.tsv")), |w| {
        writeln!(
            w,
            "# overall F = sum over classes (|c|/n) * max over clusters 2|c^p|/(|c|+|p|); \
             k={} trials={} seed={} distance={distance_kind}",
            a.k, a.trials, a.seed
        )?;
        writeln!(
            w,
            "language\tpatterns\tcovering\tavg_support\td_s_classes\td_s_random\tf_mean\tf_std"
        )?;
        writeln!(
            w,
            "{lang}\t{n_patterns}\t{covering}\t{avg_support:.4}\t{d_classes:.4}\t{d_random:.4}\t{f_mean:.4}\t{f_std:.4}"
        )?;
        Ok(())
    })?;
    say!(
        "{lang}\t{n_patterns}\t{covering}\t{avg_support:.4}\t{d_classes:.4}\t{d_random:.4}\t{f_mean:.4}\t{f_std:.4}"
    )?;
    Ok(())
}

fn standardize(rows: &mut [Vec<f64>]) {
    if rows.is_empty() {
        return;
    }
    let n = rows.len() as f64;
    for c in 0..rows[0].len() {
        let mean = rows.iter().map(|r| r[c]).sum::<f64>() / n;
        let var = rows
            .iter()
            .map(|r| (r[c] - mean) * (r[c] - mean))
            .sum::<f64>()
            / n;
        let sd = var.sqrt();
        for r in rows.iter_mut() {
            r[c] = if sd > 0.0 { (r[c] - mean) / sd } else { 0.0 };
        }
    }
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let table = ingest::load_csv(open(&a.input)?)?;
    if table.n_rows == 0 {
        return Err(Error::Invalid(format!(
            "no objects in `{}`",
            a.input.display()
        )));
    }
    ensure_dir(&a.out)?;
    let base = a.name.clone().unwrap_or_else(|| stem_of(&a.input));
    let cfg = NoiseConfig {
        rel: a.r,
        shared_sigma: a.shared_sigma,
        seed: a.seed,
    };
    let (observed, reported) = ingest::simulate_measurements(&table, &cfg)?;
    write_atomic(&a.out.join(format!("{base}_obs.csv")), |w| {
        ingest::write_csv(&observed, w)
    })?;
    write_atomic(&a.out.join(format!("{base}_obsdist.csv")), |w| {
        ingest::write_csv(&reported, w)
    })?;

    let mut written = Vec::new();
    for &bins in &a.bins {
        // Grids come from the observed points and are shared by every
        // encoding at this bin count.
        let specs = ingest::make_var_specs(&observed, bins, &[])?;
        let mut datasets =
            ingest::build_datasets(&base, &observed, &specs, &[Language::Num], &[vec![]])?;
        if !a.alpha.is_empty() {
            datasets.extend(ingest::build_datasets(
                &base,
                &reported,
                &specs,
                &[Language::I],
                &a.alpha,
            )?);
        }
        for ds in datasets {
            write_dataset_files(&ds, &a.out)?;
            written.push(format!(
                "{} (objects={} items={})",
                ds.name(),
                ds.n_objects(),
                ds.vocab().len()
            ));
        }
    }

    write_atomic(&a.out.join(format!("{base}.genconfig")), |w| {
        writeln!(w, "input={}", a.input.display())?;
        writeln!(w, "seed={}", a.seed)?;
        writeln!(w, "r={}", a.r)?;
        writeln!(w, "shared_sigma={}", a.shared_sigma)?;
        let bins: Vec<String> = a.bins.iter().map(|b| b.to_string()).collect();
        writeln!(w, "bins={}", bins.join(","))?;
        for set in &a.alpha {
            let s: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            writeln!(w, "alphas={}", s.join(","))?;
        }
        Ok(())
    })?;

    for line in &written {
        say!("wrote {line}")?;
    }
    say!(
        "observations in {}, distributions in {}",
        a.out.join(format!("{base}_obs.csv")).display(),
        a.out.join(format!("{base}_obsdist.csv")).display()
    )?;
    Ok(())
}

fn cmd_distance(a: DistanceArgs) -> Result<()> {
    let table = ingest::load_csv(open(&a.data)?)?;
    let (classes, truth) = class_sets(&table)?;
    let records = read_concepts(&a.concepts)?;
    let extents = extents_of(&records, table.n_rows)?;
    let d_classes = metrics::dist_to_partition(&extents, &classes)?;
    let d_random = metrics::dist_to_partition(&extents, &truth.shuffled(a.seed).classes())?;
    say!("patterns\t{}", extents.len())?;
    say!("d_s_classes\t{d_classes:.4}")?;
    say!("d_s_random\t{d_random:.4}")?;
    Ok(())
}
