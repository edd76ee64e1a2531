use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dig_core::corruption::{build_refinement_case, CorruptionError, CorruptionParams, ImageRaster};
use dig_core::harness::adapter::{self, Strategy};
use dig_core::harness::{
    run_benchmark, run_nog_batch, summarize_nog, Baseline, ExternalSegmentor, NogConfig, NogMode, QueryOptions,
    Segmentor,
};
use dig_core::maskops::{encode_rle, write_binary_png};
use dig_core::metrics::{aggregate_with_failures, EvalRecord, FailedRecord};
use dig_core::pipeline::{
    generate_corpus, ingest_coco_file, load_samples, measure_timings, read_mask, render_timings, split,
    verify_manifest, write_corpus, write_fixture_dataset, GenerateConfig, MaskFormat, PipelineError,
};
use dig_core::sample::Setting;

#[derive(Parser)]
#[command(name = "dig", version, about = "Gesture datasets and RICE/NoG evaluation for interactive segmentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic annotation file (and optionally images).
    Fixtures {
        #[arg(long, default_value_t = 200)]
        regions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        images: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse an instance-annotation file and report what survives filtering.
    Ingest {
        annotations: PathBuf,
        #[arg(long)]
        images_dir: Option<PathBuf>,
    },
    /// Generate the gesture corpus: manifest plus mask and gesture files.
    Generate {
        annotations: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "creation,refinement,multi")]
        settings: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "rle")]
        mask_format: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory image file names are relative to (defaults to the annotation file's).
        #[arg(long)]
        images_dir: Option<PathBuf>,
        /// Oversegment image pixels when corrupting.
        #[arg(long)]
        use_images: bool,
        /// Draw refinement scribbles on the previous segmentation rather than the correction.
        #[arg(long)]
        scribble_from_prev: bool,
        #[arg(long, default_value_t = 0.2)]
        multi_p: f64,
    },
    /// Corrupt one mask into a previous segmentation.
    Corrupt {
        mask: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        image: Option<PathBuf>,
        /// Output mask, PNG or RLE JSON by extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Single-shot evaluation of every gesture in a manifest.
    Bench {
        manifest: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sequential evaluation: gestures needed to reach IoU thresholds.
    Nog {
        manifest: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// click, scribble, loose_lasso, tight_lasso, rectangle or mixed.
        #[arg(long, default_value = "click")]
        mode: String,
        #[arg(long, default_value = "80,85,90")]
        thresholds: String,
        #[arg(long, default_value_t = 20)]
        cap: usize,
        /// Only samples of these settings.
        #[arg(long)]
        settings: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregate harness records into a table.
    Report {
        records: PathBuf,
        #[arg(long)]
        failures: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Time gesture generation per type.
    Timings {
        #[arg(long, default_value_t = 1000)]
        regions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Regions from this annotation file instead of fixtures.
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Image-level train/val/test split.
    Split {
        annotations: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// File with one training image id per line; other images are held out.
        #[arg(long)]
        train_ids: Option<PathBuf>,
    },
    /// Check every file referenced by a manifest.
    Verify { manifest: PathBuf },
    /// Reference model process speaking the wire protocol on stdio.
    Adapter {
        #[arg(long, default_value = "echo_prev")]
        strategy: String,
    },
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Built-in model: oracle, identity, empty, gesture_union, gesture_cut.
    #[arg(long, conflicts_with = "cmd", required_unless_present = "cmd")]
    baseline: Option<String>,
    /// External model command run through `sh -c`.
    #[arg(long)]
    cmd: Option<String>,
    /// Method name for an external model in records and reports.
    #[arg(long, requires = "cmd")]
    name: Option<String>,
    #[arg(long, default_value_t = 60.0)]
    timeout_secs: f64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    reveal_context: bool,
    #[arg(long)]
    reveal_type: bool,
    #[arg(long)]
    distance_map: bool,
    #[arg(long)]
    embed_image: bool,
}

impl ModelArgs {
    fn options(&self) -> QueryOptions {
        QueryOptions {
            reveal_context: self.reveal_context,
            reveal_type: self.reveal_type,
            include_distance_map: self.distance_map,
            embed_image: self.embed_image,
        }
    }

    fn factory(&self) -> Result<impl Fn() -> Box<dyn Segmentor> + Sync> {
        let baseline = match &self.baseline {
            Some(name) => Some(Baseline::parse(name).ok_or_else(|| anyhow!("unknown baseline {name:?}"))?),
            None => None,
        };
        let cmd = self.cmd.clone();
        let name = self.name.clone();
        let timeout = Duration::from_secs_f64(self.timeout_secs);
        Ok(move || -> Box<dyn Segmentor> {
            match (baseline, &cmd) {
                (Some(b), _) => Box::new(b),
                (None, Some(c)) => {
                    let model = ExternalSegmentor::new(c.clone(), timeout);
                    Box::new(match &name {
                        Some(n) => model.with_name(n.clone()),
                        None => model,
                    })
                }
                (None, None) => unreachable!("clap requires a model"),
            }
        })
    }
}

fn parse_settings(s: &str) -> Result<Vec<Setting>> {
    s.split(',')
        .map(|t| Setting::parse(t.trim()).ok_or_else(|| anyhow!("unknown setting {t:?}")))
        .collect()
}

fn write_jsonl<T: serde::Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path).with_context(|| path.display().to_string())?);
    for it in items {
        serde_json::to_writer(&mut w, it)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let f = std::io::BufReader::new(fs::File::open(path).with_context(|| path.display().to_string())?);
    let mut out = Vec::new();
    for (n, line) in f.lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), n + 1))?);
        }
    }
    Ok(out)
}

/// Error raised after all outputs are written when some items failed.
#[derive(Debug)]
struct PartialFailure {
    failures: usize,
    log: PathBuf,
}

impl std::fmt::Display for PartialFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} item(s) failed; see {}", self.failures, self.log.display())
    }
}

impl std::error::Error for PartialFailure {}

fn error_kind(e: &anyhow::Error) -> &'static str {
    if e.is::<PartialFailure>() {
        return "partial_failure";
    }
    for cause in e.chain() {
        if let Some(p) = cause.downcast_ref::<PipelineError>() {
            return match p {
                PipelineError::Malformed { .. } => "malformed",
                PipelineError::Image(_) => "image",
                PipelineError::Io(_) => "io",
                PipelineError::Mask(_) => "mask",
            };
        }
        if cause.is::<CorruptionError>() {
            return "corruption";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
        if cause.is::<serde_json::Error>() {
            return "parse";
        }
    }
    "error"
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fixtures { regions, seed, images, out } => {
            let data = write_fixture_dataset(&out, regions, seed, images)?;
            let n: usize = data.iter().map(|im| im.regions.len()).sum();
            println!("{}", json!({ "images": data.len(), "regions": n, "annotations": out.join("annotations.json") }));
        }
        Command::Ingest { annotations, images_dir } => {
            let dir = images_dir.or_else(|| annotations.parent().map(Path::to_path_buf));
            let (_, stats) = ingest_coco_file(&annotations, dir.as_deref())?;
            println!("{}", serde_json::to_string(&stats)?);
        }
        Command::Generate { annotations, seed, settings, out, mask_format, jobs, images_dir, use_images, scribble_from_prev, multi_p } => {
            let format = MaskFormat::parse(&mask_format).ok_or_else(|| anyhow!("unknown mask format {mask_format:?}"))?;
            let dir = images_dir.or_else(|| annotations.parent().map(Path::to_path_buf));
            let (images, stats) = ingest_coco_file(&annotations, dir.as_deref())?;
            let cfg = GenerateConfig {
                dataset_seed: seed,
                settings: parse_settings(&settings)?,
                multi_region_p: multi_p,
                corruption: CorruptionParams::default(),
                use_images,
                scribble_from_prev,
                jobs,
            };
            let corpus = generate_corpus(&images, &cfg);
            let manifest = write_corpus(&corpus, &out, format)?;
            let counts: serde_json::Map<String, serde_json::Value> =
                Setting::ALL.iter().map(|&s| (s.to_string(), json!(corpus.count(s)))).collect();
            println!(
                "{}",
                json!({
                    "manifest": manifest,
                    "ingest": stats,
                    "samples": counts,
                    "gestures": corpus.samples.iter().map(|s| s.sample.gestures.len()).sum::<usize>(),
                    "failures": corpus.failures.len(),
                })
            );
        }
        Command::Corrupt { mask, seed, image, out } => {
            let region = read_mask(&mask)?;
            let raster = image.map(|p| ImageRaster::open(&p).with_context(|| p.display().to_string())).transpose()?;
            let case = build_refinement_case(&region, raster.as_ref(), &CorruptionParams::default(), seed)?;
            if out.extension().is_some_and(|e| e == "png") {
                write_binary_png(&out, &case.prev_seg)?;
            } else {
                fs::write(&out, serde_json::to_vec(&encode_rle(&case.prev_seg))?)?;
            }
            let corrections: Vec<_> =
                case.corrections.iter().map(|c| json!({ "kind": c.kind, "area": c.area, "anchor": c.anchor })).collect();
            println!("{}", json!({ "beta": case.beta, "corrections": corrections, "out": out }));
        }
        Command::Bench { manifest, model, out } => {
            let samples = load_samples(&manifest)?;
            let result = run_benchmark(model.factory()?, &samples, &model.options(), model.jobs);
            fs::create_dir_all(&out)?;
            write_jsonl(&out.join("records.jsonl"), &result.records)?;
            write_jsonl(&out.join("failures.jsonl"), &result.failures)?;
            let table = aggregate_with_failures(&result.records, &result.failures);
            fs::write(out.join("report.csv"), table.to_csv())?;
            fs::write(out.join("report.json"), serde_json::to_vec_pretty(&table.to_json())?)?;
            print!("{}", table.to_csv());
            if !result.failures.is_empty() {
                return Err(PartialFailure { failures: result.failures.len(), log: out.join("failures.jsonl") }.into());
            }
        }
        Command::Nog { manifest, model, mode, thresholds, cap, settings, out } => {
            let mode = NogMode::parse(&mode).ok_or_else(|| anyhow!("unknown mode {mode:?}"))?;
            let thresholds: Vec<u32> = thresholds
                .split(',')
                .map(|t| t.trim().parse().with_context(|| format!("bad threshold {t:?}")))
                .collect::<Result<_>>()?;
            let mut samples = load_samples(&manifest)?;
            if let Some(s) = settings {
                let keep = parse_settings(&s)?;
                samples.retain(|x| keep.contains(&x.setting));
            }
            let config = NogConfig { thresholds: thresholds.clone(), cap, options: model.options(), seed: 0 };
            let (traces, failures) = run_nog_batch(model.factory()?, &samples, mode, &config, model.jobs);
            fs::create_dir_all(&out)?;
            write_jsonl(&out.join("traces.jsonl"), &traces)?;
            write_jsonl(&out.join("failures.jsonl"), &failures)?;
            let summary = summarize_nog(&traces, &thresholds, cap);
            let doc = json!({
                "mode": mode.label(),
                "cap": cap,
                "fitting": "each gesture is generated on the largest 8-connected error component; clicks at its innermost pixel; failed generation falls back to a click",
                "summary": summary,
                "failures": failures.len(),
            });
            fs::write(out.join("nog.json"), serde_json::to_vec_pretty(&doc)?)?;
            println!("{doc}");
            if !failures.is_empty() {
                return Err(PartialFailure { failures: failures.len(), log: out.join("failures.jsonl") }.into());
            }
        }
        Command::Report { records, failures, format } => {
            let records: Vec<EvalRecord> = read_jsonl(&records)?;
            let failures: Vec<FailedRecord> = match failures {
                Some(p) => read_jsonl(&p)?,
                None => Vec::new(),
            };
            let table = aggregate_with_failures(&records, &failures);
            match format.as_str() {
                "csv" => print!("{}", table.to_csv()),
                "json" => println!("{}", serde_json::to_string_pretty(&table.to_json())?),
                other => bail!("unknown report format {other:?}"),
            }
        }
        Command::Timings { regions, seed, annotations, json } => {
            let images = match annotations {
                Some(p) => {
                    let dir = p.parent().map(Path::to_path_buf);
                    ingest_coco_file(&p, dir.as_deref())?.0
                }
                None => dig_core::pipeline::fixture_corpus(regions, seed),
            };
            let masks: Vec<_> = images.iter().flat_map(|im| im.regions.iter().map(|r| &r.mask)).take(regions).collect();
            let rows = measure_timings(&masks, seed);
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                print!("{}", render_timings(&rows));
            }
        }
        Command::Split { annotations, seed, train_ids } => {
            let (images, _) = ingest_coco_file(&annotations, None)?;
            let train: Vec<String> = match train_ids {
                Some(p) => fs::read_to_string(&p)?.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect(),
                None => Vec::new(),
            };
            let held_out: Vec<String> =
                images.iter().map(|im| im.image_id.clone()).filter(|id| !train.contains(id)).collect();
            println!("{}", serde_json::to_string(&split(&train, &held_out, seed))?);
        }
        Command::Verify { manifest } => {
            let n = verify_manifest(&manifest)?;
            println!("{}", json!({ "files": n }));
        }
        Command::Adapter { strategy } => {
            let s = Strategy::parse(&strategy).ok_or_else(|| anyhow!("unknown strategy {strategy:?}"))?;
            let stdin = std::io::stdin();
            adapter::serve(stdin.lock(), std::io::stdout().lock(), s)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = error_kind(&e);
            log::debug!("{e:?}");
            eprintln!("{}", json!({ "error": kind, "message": format!("{e:#}") }));
            // clap already uses 2 for usage errors.
            ExitCode::from(if kind == "partial_failure" { 3 } else { 1 })
        }
    }
}
