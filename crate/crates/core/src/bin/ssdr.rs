use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ssdr::costs::{hadamard_power, heat_kernel_costs, HeatKernelSpec};
use ssdr::dataset::{
    center_columns, generate_balance, generate_multimodal_toy, load_csv_with, write_csv,
    CsvOptions, ToyKind,
};
use ssdr::harness::{export_neighbor_graph, run_benchmark, ExperimentConfig};
use ssdr::knn::{good_nearby_ratio, good_neighbors_score, threshold_for_top_pairs, KnnIndex};
use ssdr::kpca::KernelSpec;
use ssdr::learner::{fit_pipeline, read_pipeline, write_pipeline, Pipeline};
use ssdr::{Dataset, Error, LearnerSpec, Result};

#[derive(Parser)]
#[command(
    name = "ssdr",
    version,
    about = "Semi-supervised spectral dimensionality reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark config and print the summary table.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's split seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write summary.tsv and realizations.tsv here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra `key=value` config lines, applied after the file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Write a synthetic dataset as CSV.
    ToyGen {
        /// two-cluster, three-cluster, ssl-only or balance
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Leave-one-out 1-NN accuracy with all labels revealed.
    GoodNeighbors {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        kernel: Option<KernelSpec>,
        /// Also report the same-class ratio among the N strongest heat-kernel pairs.
        #[arg(long, value_name = "N")]
        top_pairs: Option<usize>,
        #[arg(long, default_value = "local:7")]
        heat: HeatKernelSpec,
    },
    /// Export the heat-kernel neighbor graph as a TSV edge list.
    GraphExport {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "local:7")]
        heat: HeatKernelSpec,
        /// Hadamard power applied before thresholding.
        #[arg(long, default_value_t = 1)]
        alpha: u32,
    },
    /// Fit a learner and save the model.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        /// Preset name, e.g. LFDA, SS-LFDA, LPP*.
        #[arg(long)]
        learner: String,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        alpha: Option<u32>,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        kernel: Option<KernelSpec>,
        /// Neighbor count for DNE/MFA graphs.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Embed a dataset with a saved model and write the coordinates as CSV.
    Transform {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// k-NN classification in the embedded space of a saved model.
    Classify {
        #[arg(long)]
        model: PathBuf,
        /// Labeled reference examples (unlabeled rows are ignored).
        #[arg(long)]
        train: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Args)]
struct DataArgs {
    /// CSV file, one row per example.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "class")]
    label_column: String,
    /// Label cell value marking an unlabeled example.
    #[arg(long, default_value = "")]
    missing_label: String,
    /// The file has no header row; the label is the last column.
    #[arg(long)]
    no_header: bool,
}

impl DataArgs {
    fn options(&self) -> CsvOptions {
        CsvOptions {
            label_column: self.label_column.clone(),
            missing_label_token: self.missing_label.clone(),
            has_headers: !self.no_header,
        }
    }

    fn load(&self) -> Result<Dataset> {
        load_path(&self.data, &self.options())
    }
}

fn load_path(path: &Path, opts: &CsvOptions) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_csv_with(BufReader::new(file), opts)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    let out_err = |e| Error::io("<stdout>", e);
    match cmd {
        Command::Benchmark {
            config,
            seed,
            out,
            overrides,
        } => {
            let mut text = std::fs::read_to_string(&config).map_err(|e| Error::io(&config, e))?;
            for o in &overrides {
                text.push('\n');
                text.push_str(o);
            }
            let mut cfg = ExperimentConfig::parse(&text, config.parent())?;
            if let Some(s) = seed {
                cfg = cfg.with_seed(s);
            }
            let report = run_benchmark(&cfg)?;
            if let Some(dir) = out {
                report.write_to_dir(&dir)?;
            }
            write!(stdout, "{}", report.summary_tsv()).map_err(out_err)?;
        }
        Command::ToyGen {
            kind,
            out,
            n,
            noise,
            seed,
        } => {
            let d = if kind == "balance" {
                generate_balance()
            } else {
                generate_multimodal_toy(kind.parse::<ToyKind>()?, n, noise, seed)?
            };
            let mut w = create(&out)?;
            write_csv(&d, &mut w, "class", "")?;
            w.flush().map_err(|e| Error::io(&out, e))?;
        }
        Command::GoodNeighbors {
            data,
            kernel,
            top_pairs,
            heat,
        } => {
            let d = data.load()?;
            let score = good_neighbors_score(&d, kernel.as_ref())?;
            writeln!(stdout, "good_neighbors\t{score:.4}").map_err(out_err)?;
            if let Some(count) = top_pairs {
                let labels: Vec<_> = d
                    .labels()
                    .iter()
                    .map(|y| y.ok_or(Error::NoLabels))
                    .collect::<Result<_>>()?;
                let cu = heat_kernel_costs(&center_columns(d.x()).0, &heat)?;
                let t = threshold_for_top_pairs(&cu, count);
                let ratio = good_nearby_ratio(&cu, &labels, t)?;
                writeln!(stdout, "threshold\t{t:.6}\ngood_nearby_ratio\t{ratio:.4}")
                    .map_err(out_err)?;
            }
        }
        Command::GraphExport {
            data,
            threshold,
            out,
            heat,
            alpha,
        } => {
            let d = data.load()?;
            let cu = heat_kernel_costs(&center_columns(d.x()).0, &heat)?;
            let cu = hadamard_power(&cu, alpha)?;
            let rows = export_neighbor_graph(&cu, threshold, &out)?;
            log::info!("wrote {rows} edges to {}", out.display());
        }
        Command::Fit {
            data,
            learner,
            gamma,
            alpha,
            dim,
            kernel,
            k,
            out,
        } => {
            let d = data.load()?;
            let mut spec = LearnerSpec::preset(&learner)?
                .with_dim(dim)
                .with_kernel(kernel);
            if let Some(g) = gamma {
                spec = spec.with_gamma(g);
            }
            if let Some(a) = alpha {
                spec = spec.with_alpha(a);
            }
            spec.k = k;
            let pipeline = fit_pipeline(&d, &spec)?;
            let mut w = create(&out)?;
            write_pipeline(&pipeline, &mut w)?;
            w.flush().map_err(|e| Error::io(&out, e))?;
        }
        Command::Transform { model, data, out } => {
            let p = read_model_file(&model)?;
            let d = data.load()?;
            let z = p.embed_columns(d.x())?;
            let mut w = csv::Writer::from_writer(create(&out)?);
            let header: Vec<String> = (1..=z.nrows()).map(|i| format!("z{i}")).collect();
            w.write_record(&header)?;
            for col in z.column_iter() {
                w.write_record(col.iter().map(|v| format!("{v:?}")))?;
            }
            w.flush().map_err(|e| Error::io(&out, e))?;
        }
        Command::Classify {
            model,
            train,
            data,
            k,
        } => {
            let p = read_model_file(&model)?;
            let opts = data.options();
            let reference = load_path(&train, &opts)?;
            let labeled: Vec<usize> = (0..reference.len())
                .filter(|&i| reference.labels()[i].is_some())
                .collect();
            if labeled.is_empty() {
                return Err(Error::NoLabels);
            }
            let z = p.embed_columns(&reference.x().select_columns(&labeled))?;
            let y = labeled
                .iter()
                .map(|&i| reference.labels()[i].expect("labeled"))
                .collect();
            let index = KnnIndex::new(z, y, k.min(labeled.len()))?;

            let d = data.load()?;
            let predicted = index.classify_columns(&p.embed_columns(d.x())?)?;
            let names = reference.class_names();
            let mut hits = 0;
            let mut known = 0;
            writeln!(stdout, "index\tpredicted\tactual").map_err(out_err)?;
            for (i, (&pred, truth)) in predicted.iter().zip(d.labels()).enumerate() {
                let actual = truth.map(|t| d.class_names()[t].as_str()).unwrap_or("");
                if truth.is_some() {
                    known += 1;
                    hits += usize::from(actual == names[pred]);
                }
                writeln!(stdout, "{i}\t{}\t{actual}", names[pred]).map_err(out_err)?;
            }
            if known > 0 {
                eprintln!(
                    "accuracy {:.4} ({hits}/{known})",
                    hits as f64 / known as f64
                );
            }
        }
    }
    Ok(())
}

fn read_model_file(path: &Path) -> Result<Pipeline> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_pipeline(BufReader::new(file))
}
