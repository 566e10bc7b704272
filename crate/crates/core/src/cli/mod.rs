//! The `specimp` command line: `gen`, `analyze`, `importance` and `predict`.
//!
//! Every file written carries the tool version and the full command configuration
//! (including seeds): CSV files as leading `#` lines, JSON files under `meta`, SVG files
//! as an XML comment.

mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{FeatureBuilder, Target, FEATURE_COLUMNS};
use crate::generate::{gen_barbell, gen_synthetic_temporal, SyntheticConfig};
use crate::graph::{StrengthMode, TemporalNetwork};
use crate::importance::{node_importance_directed, Scheme, SnapshotSpectrum};
use crate::ingest::{load_snapshots_path, write_edge_list, IngestOptions, LoadReport, LoadSummary};
use crate::model::FitOptions;
use crate::netstats::{detect_communities, mean_diff_ttest, modularity, pearson};
use crate::pipeline::{run_prediction, write_coefficients_csv, PredictConfig, PredictionReport, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(
    name = "specimp",
    version,
    about = "Spectral node importance for weighted temporal networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated network as an edge-list CSV.
    Gen(GenArgs),
    /// Spectra, modularity over time, eigen-ranks and measure distributions.
    Analyze(AnalyzeArgs),
    /// Node importance of one snapshot.
    Importance(ImportanceArgs),
    /// Full presence / change prediction pipeline.
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Edge-list CSV with header `time,src,dst,value`.
    #[arg(long)]
    pub input: PathBuf,
    /// Aggregation period in the file's time unit (days for dates).
    #[arg(long, default_value_t = 1)]
    pub period: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Barbell,
    Synthetic,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long, default_value_t = 4)]
    pub n_left: usize,
    #[arg(long, default_value_t = 2)]
    pub bridge: usize,
    #[arg(long, default_value_t = 5)]
    pub n_right: usize,
    /// Number of identical barbell snapshots.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[arg(long, default_value_t = 120)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub communities: usize,
    #[arg(long, default_value_t = 4)]
    pub hub_count: usize,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub dropout_coupling: f64,
    #[arg(long, default_value_t = 30)]
    pub horizon: usize,
    #[arg(long, default_value_t = 2.5, allow_hyphen_values = true)]
    pub base_logit: f64,
    #[arg(long, default_value_t = 0.1)]
    pub weight_noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Skip the SVG figures (their CSV data is still written).
    #[arg(long)]
    pub no_plots: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ImportanceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// ma, mb, mc, md, or directed.
    #[arg(long, default_value = "mb")]
    pub scheme: String,
    /// Snapshot ordinal.
    #[arg(long, default_value_t = 0)]
    pub snapshot: usize,
    /// Read edges as directed (required by the `directed` scheme).
    #[arg(long)]
    pub directed: bool,
    /// Strength used by the directed scheme: total, in, or out.
    #[arg(long, default_value = "total")]
    pub strength_mode: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PredictArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// presence, change, sign, or rel_change.
    #[arg(long, default_value = "presence")]
    pub target: String,
    /// Comma-separated L2 penalties to choose from.
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1, 1.0, 10.0])]
    pub l2_grid: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub bootstrap_iters: usize,
    #[arg(long, default_value_t = 100)]
    pub null_trials: usize,
    #[arg(long, default_value_t = 10)]
    pub permutation_repeats: usize,
    #[arg(long, default_value_t = 0.8)]
    pub prune_threshold: f64,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[arg(long, default_value_t = 0.05)]
    pub change_threshold: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Provenance block attached to every output.
#[derive(Debug, Serialize)]
struct Meta<'a, C: Serialize> {
    tool: &'a str,
    command: &'a str,
    config: &'a C,
}

impl<C: Serialize> Meta<'_, C> {
    fn lines(&self) -> Result<Vec<String>> {
        Ok(vec![
            format!("tool={}", self.tool),
            format!("command={}", self.command),
            format!("config={}", serde_json::to_string(self.config)?),
        ])
    }

    fn csv_preamble(&self) -> Result<String> {
        Ok(self.lines()?.iter().map(|l| format!("# {l}\n")).collect())
    }

    fn svg_comment(&self) -> Result<String> {
        Ok(format!("<!-- {} -->\n", self.lines()?.join(" ").replace("--", "- -")))
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Importance(a) => cmd_importance(&a),
        Command::Predict(a) => cmd_predict(&a).map(|_| ()),
    }
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize, C: Serialize>(path: &Path, meta: &Meta<C>, body: &T) -> Result<()> {
    #[derive(Serialize)]
    struct Wrapped<'a, M: Serialize, B: Serialize> {
        meta: &'a M,
        #[serde(flatten)]
        body: &'a B,
    }
    let text = serde_json::to_string_pretty(&Wrapped { meta, body })?;
    write_text(path, &(text + "\n"))
}

/// CSV file whose rows come from `rows`, headed by the provenance preamble.
fn write_csv<C: Serialize>(path: &Path, meta: &Meta<C>, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut file = create(path)?;
    file.write_all(meta.csv_preamble()?.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Reads `directed=true|false` from the leading `#` lines of an edge-list file.
pub fn declared_directedness(path: &Path) -> Result<Option<bool>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    for line in text.lines() {
        let Some(comment) = line.strip_prefix('#') else {
            break;
        };
        if let Some(v) = comment.trim().strip_prefix("directed=") {
            return Ok(v.trim().parse().ok());
        }
    }
    Ok(None)
}

fn load(input: &InputArgs, directed: bool) -> Result<LoadReport> {
    let report = load_snapshots_path(
        &input.input,
        IngestOptions {
            period: input.period,
            directed,
        },
    )?;
    if report.negative_weights > 0 {
        eprintln!(
            "warning: {} edges had a negative net value and were stored as absolute values",
            report.negative_weights
        );
    }
    Ok(report)
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let (tn, directed) = match a.kind {
        GenKind::Barbell => {
            if a.repeats == 0 {
                return Err(Error::Argument("--repeats must be at least 1".into()));
            }
            let b = gen_barbell(a.n_left, a.bridge, a.n_right)?;
            let snaps = (0..a.repeats).map(|t| b.clone().with_timestamp(t)).collect();
            (TemporalNetwork::new(b.node_ids().to_vec(), snaps)?, false)
        }
        GenKind::Synthetic => {
            let cfg = SyntheticConfig {
                n: a.n,
                communities: a.communities,
                hub_count: a.hub_count,
                dropout_coupling: a.dropout_coupling,
                horizon: a.horizon,
                base_logit: a.base_logit,
                weight_noise: a.weight_noise,
            };
            (gen_synthetic_temporal(&cfg, a.seed)?, false)
        }
    };
    let meta = Meta {
        tool: TOOL_VERSION,
        command: "gen",
        config: a,
    };
    let mut comment = meta.lines()?;
    comment.push(format!("directed={directed}"));
    match &a.out {
        Some(path) => write_edge_list(&tn, create(path)?, &comment),
        None => write_edge_list(&tn, std::io::stdout().lock(), &comment),
    }
}

#[derive(Debug, Serialize)]
struct SpectrumSummary {
    snapshot: usize,
    active_nodes: usize,
    edges: usize,
    positive_eigenvalues: usize,
    eigenvalues: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct MeasureTest {
    measure: String,
    n_present_next: usize,
    n_absent_next: usize,
    mean_present_next: Option<f64>,
    mean_absent_next: Option<f64>,
    t_stat: Option<f64>,
    p_value: Option<f64>,
    dof: Option<f64>,
    /// `p_value` below the Bonferroni-corrected level.
    significant: bool,
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct AnalyzeStats {
    alpha: f64,
    bonferroni_alpha: f64,
    tests: Vec<MeasureTest>,
    pearson_columns: Vec<String>,
    /// Correlations over all (snapshot, node) observations; `null` where undefined.
    pearson: Vec<Vec<Option<f64>>>,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<()> {
    let loaded = load(&a.input, false)?;
    let tn = &loaded.network;
    ensure_dir(&a.out)?;
    let meta = Meta {
        tool: TOOL_VERSION,
        command: "analyze",
        config: a,
    };

    let mut spectra = Vec::with_capacity(tn.len());
    let mut rank_rows = Vec::new();
    let mut q_rows = Vec::new();
    let mut q_points = Vec::new();
    for s in tn.snapshots() {
        let ss = SnapshotSpectrum::new(s)?;
        spectra.push(SpectrumSummary {
            snapshot: s.timestamp(),
            active_nodes: ss.nodes.len(),
            edges: s.edges().len(),
            positive_eigenvalues: ss.spectrum.positive_count(),
            eigenvalues: ss.spectrum.eigenvalues.clone(),
        });
        for (node, rank) in ss.selected_ranks()? {
            rank_rows.push(vec![
                s.timestamp().to_string(),
                tn.universe()[node].clone(),
                rank.to_string(),
            ]);
        }
        let (sub, _) = s.active_subgraph();
        if !sub.edges().is_empty() {
            let q = modularity(&sub, &detect_communities(&sub)?)?;
            q_rows.push(vec![s.timestamp().to_string(), q.to_string()]);
            q_points.push((s.timestamp() as f64, q));
        }
    }

    #[derive(Serialize)]
    struct Spectra<'a> {
        load: LoadSummary,
        snapshots: &'a [SpectrumSummary],
    }
    write_json(
        &a.out.join("spectra.json"),
        &meta,
        &Spectra {
            load: LoadSummary::from(&loaded),
            snapshots: &spectra,
        },
    )?;
    write_csv(
        &a.out.join("eigen_ranks.csv"),
        &meta,
        &["snapshot", "node", "eig_rank"],
        rank_rows,
    )?;
    write_csv(&a.out.join("modularity.csv"), &meta, &["snapshot", "Q"], q_rows)?;
    if !a.no_plots {
        let plot = svg::line_plot("Modularity over time", "snapshot", "Q", &q_points);
        write_text(&a.out.join("modularity.svg"), &(meta.svg_comment()? + &plot))?;
    }

    // Per-snapshot measures split by presence in the next snapshot.
    let builder = FeatureBuilder::new(tn)?;
    let measures = builder.measures();
    let names = &FEATURE_COLUMNS[..8];
    let mut groups: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); names.len()];
    let mut pooled: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    let mut dist_rows = Vec::new();
    for t in 0..measures.len() {
        for (node, v) in measures[t].values.iter().enumerate() {
            let Some(v) = v else { continue };
            for (k, &x) in v.iter().enumerate() {
                pooled[k].push(x);
            }
            if t + 1 >= measures.len() {
                continue;
            }
            let next = measures[t + 1].is_present(node);
            for (k, &x) in v.iter().enumerate() {
                if next {
                    groups[k].0.push(x);
                } else {
                    groups[k].1.push(x);
                }
                dist_rows.push(vec![
                    t.to_string(),
                    tn.universe()[node].clone(),
                    names[k].to_string(),
                    x.to_string(),
                    u8::from(next).to_string(),
                ]);
            }
        }
    }
    write_csv(
        &a.out.join("distributions.csv"),
        &meta,
        &["snapshot", "node", "measure", "value", "next_present"],
        dist_rows,
    )?;
    if !a.no_plots {
        for (k, name) in names.iter().enumerate() {
            let plot = svg::violin_plot(
                &format!("{name} by presence in the next snapshot"),
                name,
                &[
                    ("present next".to_string(), groups[k].0.clone()),
                    ("absent next".to_string(), groups[k].1.clone()),
                ],
            );
            write_text(
                &a.out.join(format!("violin_{name}.svg")),
                &(meta.svg_comment()? + &plot),
            )?;
        }
    }

    let alpha = 0.05;
    let bonferroni_alpha = alpha / names.len() as f64;
    let tests = names
        .iter()
        .zip(&groups)
        .map(|(name, (present, absent))| {
            let mut test = MeasureTest {
                measure: name.to_string(),
                n_present_next: present.len(),
                n_absent_next: absent.len(),
                mean_present_next: mean(present),
                mean_absent_next: mean(absent),
                t_stat: None,
                p_value: None,
                dof: None,
                significant: false,
                note: None,
            };
            match mean_diff_ttest(present, absent) {
                Ok(r) => {
                    test.t_stat = Some(r.t_stat);
                    test.p_value = Some(r.p_value);
                    test.dof = Some(r.dof);
                    test.significant = r.p_value < bonferroni_alpha;
                }
                Err(e) => test.note = Some(e.to_string()),
            }
            test
        })
        .collect();
    let pearson_matrix = (0..names.len())
        .map(|i| (0..names.len()).map(|j| pearson(&pooled[i], &pooled[j]).ok()).collect())
        .collect();
    write_json(
        &a.out.join("stats.json"),
        &meta,
        &AnalyzeStats {
            alpha,
            bonferroni_alpha,
            tests,
            pearson_columns: names.iter().map(|s| s.to_string()).collect(),
            pearson: pearson_matrix,
        },
    )
}

fn cmd_importance(a: &ImportanceArgs) -> Result<()> {
    let scheme: Scheme = a.scheme.parse()?;
    let mode: StrengthMode = a.strength_mode.parse()?;
    if (scheme == Scheme::Directed) != a.directed {
        return Err(Error::Argument(
            "the `directed` scheme and the --directed flag go together".into(),
        ));
    }
    if a.directed && declared_directedness(&a.input.input)? == Some(false) {
        return Err(Error::Argument(format!(
            "{} declares an undirected network; --directed does not apply",
            a.input.input.display()
        )));
    }
    let loaded = load(&a.input, a.directed)?;
    let tn = &loaded.network;
    let s = tn.snapshot(a.snapshot)?;
    let iv = if a.directed {
        node_importance_directed(s, mode)?
    } else {
        SnapshotSpectrum::new(s)?.importance(scheme)?
    };
    let meta = Meta {
        tool: TOOL_VERSION,
        command: "importance",
        config: a,
    };
    let mut buf = Vec::new();
    match a.format {
        Format::Csv => {
            buf.extend(meta.csv_preamble()?.into_bytes());
            iv.write_csv(tn.universe(), &mut buf)?;
        }
        Format::Svg => {
            let bars: Vec<(String, f64)> = iv.values.iter().map(|(&i, &v)| (tn.universe()[i].clone(), v)).collect();
            let title = format!("{} importance, snapshot {}", scheme.as_str(), a.snapshot);
            buf.extend(meta.svg_comment()?.into_bytes());
            buf.extend(svg::bar_plot(&title, scheme.as_str(), &bars).into_bytes());
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                node: &'a str,
                value: f64,
                eig_rank: Option<usize>,
            }
            #[derive(Serialize)]
            struct Body<'a> {
                meta: &'a Meta<'a, ImportanceArgs>,
                scheme: Scheme,
                snapshot: usize,
                values: Vec<Row<'a>>,
                excluded: Vec<&'a str>,
            }
            let body = Body {
                meta: &meta,
                scheme,
                snapshot: a.snapshot,
                values: iv
                    .values
                    .iter()
                    .map(|(&i, &value)| Row {
                        node: &tn.universe()[i],
                        value,
                        eig_rank: iv.eigen_rank_used.as_ref().and_then(|r| r.get(&i).copied()),
                    })
                    .collect(),
                excluded: iv.excluded.iter().map(|&i| tn.universe()[i].as_str()).collect(),
            };
            buf.extend(serde_json::to_string_pretty(&body)?.into_bytes());
            buf.push(b'\n');
        }
    }
    match &a.out {
        Some(path) => fs::write(path, &buf).map_err(|e| Error::io(path, e)),
        None => std::io::stdout()
            .lock()
            .write_all(&buf)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

/// Runs the prediction pipeline and writes `report.json`, `coefficients.csv`,
/// `permutation_importance.csv`, `shap.csv` and `cv.csv` into the output directory.
pub fn cmd_predict(a: &PredictArgs) -> Result<PredictionReport> {
    let target: Target = a.target.parse()?;
    let loaded = load(&a.input, false)?;
    let tn = &loaded.network;
    if tn.len() < 5 {
        return Err(Error::DataSize(format!(
            "prediction needs at least 5 snapshots, got {}",
            tn.len()
        )));
    }
    let cfg = PredictConfig {
        target,
        l2_grid: a.l2_grid.clone(),
        seed: a.seed,
        bootstrap_iters: a.bootstrap_iters,
        null_trials: a.null_trials,
        permutation_repeats: a.permutation_repeats,
        prune_threshold: a.prune_threshold,
        threshold: a.threshold,
        change_threshold: a.change_threshold,
        fit: FitOptions {
            max_iter: a.max_iter,
            tol: a.tol,
        },
    };
    let report = run_prediction(tn, &cfg)?;
    ensure_dir(&a.out)?;
    let meta = Meta {
        tool: TOOL_VERSION,
        command: "predict",
        config: a,
    };
    write_json(&a.out.join("report.json"), &meta, &report)?;

    let mut coef = create(&a.out.join("coefficients.csv"))?;
    coef.write_all(meta.csv_preamble()?.as_bytes())
        .map_err(|e| Error::io(a.out.join("coefficients.csv"), e))?;
    write_coefficients_csv(report.coefficients(), coef)?;

    let (importance, shap, rows) = match (&report.classification, &report.regression) {
        (Some(c), _) => (&c.permutation_importance, &c.shap, &c.test_rows),
        (_, Some(r)) => (&r.permutation_importance, &r.shap, &r.test_rows),
        _ => unreachable!("a report carries one of the two evaluations"),
    };
    write_csv(
        &a.out.join("permutation_importance.csv"),
        &meta,
        &["feature", "importance"],
        importance
            .iter()
            .map(|f| vec![f.feature.clone(), f.importance.to_string()])
            .collect(),
    )?;
    let mut header = vec!["as_of", "node"];
    header.extend(shap.columns.iter().map(String::as_str));
    write_csv(
        &a.out.join("shap.csv"),
        &meta,
        &header,
        rows.iter()
            .zip(&shap.values)
            .map(|(k, v)| {
                let mut r = vec![k.as_of.to_string(), tn.universe()[k.node].clone()];
                r.extend(v.iter().map(|x| x.to_string()));
                r
            })
            .collect(),
    )?;
    if let Some(c) = &report.classification {
        let mut cv_rows = Vec::new();
        for s in &c.cv {
            for (f, auc) in s.fold_auc.iter().enumerate() {
                cv_rows.push(vec![
                    s.l2.to_string(),
                    f.to_string(),
                    auc.map(|v| v.to_string()).unwrap_or_default(),
                ]);
            }
        }
        write_csv(&a.out.join("cv.csv"), &meta, &["l2", "fold", "auc"], cv_rows)?;
        println!(
            "test AUC {:.3} (bootstrap 95% CI {:.3}-{:.3}); null prior AUC 90% CI {}",
            c.metrics.auc,
            c.ci_auc.lo,
            c.ci_auc.hi,
            c.null_prior
                .auc
                .ci90
                .map_or("undefined".to_string(), |(lo, hi)| format!("{lo:.3}-{hi:.3}"))
        );
    }
    if let Some(r) = &report.regression {
        println!(
            "test R² {:.4}; shuffled-target mean R² {:.4}",
            r.r2_test,
            r.null_shuffled.summary.mean.unwrap_or(f64::NAN)
        );
    }
    Ok(report)
}
