//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::collections::{BTreeMap, VecDeque};
use std::path::Path;
use std::process::ExitCode;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use rand::Rng;

use dig_core::corruption::{
    build_local_eval_gt, build_part_gt, build_train_gt_among, decompose_corrections, synthesize_prev_seg, CorrectionKind,
    CorruptionParams,
};
use dig_core::gestures::{generate, GestureAnnotation, GestureParams, GestureType};
use dig_core::harness::{
    run_benchmark, run_nog, Baseline, ExternalSegmentor, NogConfig, NogMode, Prediction, Query, QueryOptions,
    Segmentor, SegmentorError,
};
use dig_core::maskops::{BinaryMask, Connectivity};
use dig_core::metrics::{aggregate, rice, rice_slope};
use dig_core::pipeline::{
    fixture_corpus, generate_corpus, ingest_coco_file, write_corpus, write_fixture_dataset, Corpus, GenerateConfig,
    IngestedImage, MaskFormat,
};
use dig_core::rng::{derive_seed, rng_from_seed};
use dig_core::sample::{Sample, Setting};

const CORPUS_REGIONS: usize = 200;
const CORPUS_SEED: u64 = 7;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn fixtures() -> &'static Vec<IngestedImage> {
    static F: OnceLock<Vec<IngestedImage>> = OnceLock::new();
    F.get_or_init(|| fixture_corpus(CORPUS_REGIONS, CORPUS_SEED))
}

fn corpus() -> &'static Corpus {
    static C: OnceLock<Corpus> = OnceLock::new();
    C.get_or_init(|| generate_corpus(fixtures(), &GenerateConfig { dataset_seed: CORPUS_SEED, ..Default::default() }))
}

fn fixture_masks() -> Vec<&'static BinaryMask> {
    fixtures().iter().flat_map(|im| im.regions.iter().map(|r| &r.mask)).collect()
}

fn within_budget(start: Instant, budget: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= budget {
        Ok(format!("{detail}; {:.2}s (budget {}s)", took.as_secs_f64(), budget.as_secs()))
    } else {
        Err(format!("{detail}; took {:.2}s, over the {}s budget", took.as_secs_f64(), budget.as_secs()))
    }
}

// Scalar oracles over raw pixels, independent of the library's mask code.

fn pixels(m: &BinaryMask) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for r in 0..m.height() {
        for c in 0..m.width() {
            if m.get(r, c) {
                v.push((r, c));
            }
        }
    }
    v
}

fn count(m: &BinaryMask) -> usize {
    pixels(m).len()
}

fn iou_oracle(a: &BinaryMask, b: &BinaryMask) -> f64 {
    let (mut i, mut u) = (0usize, 0usize);
    for r in 0..a.height() {
        for c in 0..a.width() {
            let (x, y) = (a.get(r, c), b.get(r, c));
            i += (x && y) as usize;
            u += (x || y) as usize;
        }
    }
    if u == 0 {
        1.0
    } else {
        i as f64 / u as f64
    }
}

/// Sizes of the 8-connected components of `keep`.
fn component_sizes(width: usize, height: usize, keep: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; width * height];
    let mut sizes = Vec::new();
    for r0 in 0..height {
        for c0 in 0..width {
            if seen[r0 * width + c0] || !keep(r0, c0) {
                continue;
            }
            seen[r0 * width + c0] = true;
            let mut queue = VecDeque::from([(r0, c0)]);
            let mut n = 0;
            while let Some((r, c)) = queue.pop_front() {
                n += 1;
                for dr in -1i64..=1 {
                    for dc in -1i64..=1 {
                        let (rr, cc) = (r as i64 + dr, c as i64 + dc);
                        if rr < 0 || cc < 0 || rr >= height as i64 || cc >= width as i64 {
                            continue;
                        }
                        let (rr, cc) = (rr as usize, cc as usize);
                        if !seen[rr * width + cc] && keep(rr, cc) {
                            seen[rr * width + cc] = true;
                            queue.push_back((rr, cc));
                        }
                    }
                }
            }
            sizes.push(n);
        }
    }
    sizes
}

fn mask_from(width: usize, height: usize, on: &[(usize, usize)]) -> BinaryMask {
    BinaryMask::from_fn(width, height, |r, c| on.contains(&(r, c)))
}

fn check_rice() -> Outcome {
    let start = Instant::now();
    let v: f64 = rice(0.91, 0.90).map_err(|e| e.to_string())?;
    if (v - 0.10).abs() > 1e-12 {
        return Err(format!("rice(0.91, 0.90) = {v}"));
    }
    let mut rng = rng_from_seed(1);
    for _ in 0..10_000 {
        let a: f64 = rng.random_range(0.0..=1.0);
        let b: f64 = rng.random_range(0.0..1.0);
        let bp: f64 = rng.random_range(1e-6..1.0);
        let cases = [
            (b, b, 0.0, "rice(b, b)"),
            (0.0, bp, -1.0, "rice(0, b)"),
            (1.0, b, 1.0, "rice(1, b)"),
            (a, 0.0, a, "rice(a, 0)"),
        ];
        for (alpha, beta, want, what) in cases {
            let got: f64 = rice(alpha, beta).map_err(|e| e.to_string())?;
            if (got - want).abs() > 1e-12 {
                return Err(format!("{what} at a={alpha}, b={beta}: {got} != {want}"));
            }
        }
    }
    let h = 1e-5;
    for _ in 0..1000 {
        let b: f64 = rng.random_range(0.01..0.99);
        let a: f64 = rng.random_range(0.0..=1.0);
        if (a - b).abs() <= 2.0 * h || a < h || a > 1.0 - h {
            continue;
        }
        let fd = (rice(a + h, b).unwrap() - rice(a - h, b).unwrap()) / (2.0 * h);
        let s: f64 = rice_slope(a, b).map_err(|e| e.to_string())?;
        if (fd - s).abs() > 1e-6 {
            return Err(format!("slope at a={a}, b={b}: analytic {s}, finite difference {fd}"));
        }
    }
    within_budget(start, Duration::from_secs(1), "exact value, 4x10^4 identities, 1000 slope checks".into())
}

fn lasso_bounds(len: usize) -> (usize, usize) {
    let lo = len.div_ceil(512).max(3);
    (lo, (len / 8).max(lo))
}

fn check_stroke(g: &GestureAnnotation) -> Result<(), String> {
    let path = g.path_mask();
    let (w, h) = (g.stroke.width(), g.stroke.height());
    for (r, c) in pixels(&g.stroke) {
        let mut near = false;
        'search: for rr in r.saturating_sub(5)..=(r + 5).min(h - 1) {
            for cc in c.saturating_sub(5)..=(c + 5).min(w - 1) {
                let d2 = (rr as i64 - r as i64).pow(2) + (cc as i64 - c as i64).pow(2);
                if d2 <= 25 && path.get(rr, cc) {
                    near = true;
                    break 'search;
                }
            }
        }
        if !near {
            return Err(format!("stroke pixel ({r}, {c}) is farther than 5 px from the polyline"));
        }
    }
    Ok(())
}

fn check_one_gesture(g: &GestureAnnotation, target: &BinaryMask) -> Result<(), String> {
    check_stroke(g)?;
    match (&g.params, g.gesture_type) {
        (
            GestureParams::Lasso { jitter, boundary_len, n, boundary_samples, .. },
            GestureType::LooseLasso | GestureType::TightLasso,
        ) => {
            let (lo, hi) = lasso_bounds(*boundary_len);
            if !(lo..=hi).contains(n) || boundary_samples.len() != *n || g.points.len() != *n {
                return Err(format!("lasso n={n} outside {lo}..={hi} for |L|={boundary_len}"));
            }
            let j = *jitter as f64;
            for (p, a) in g.points.iter().zip(boundary_samples) {
                if (p.row - a.row).abs() > j || (p.col - a.col).abs() > j {
                    return Err(format!("jitter beyond {j}: {p:?} from {a:?}"));
                }
            }
            if g.gesture_type == GestureType::TightLasso {
                let (w, h) = (target.width() as i64, target.height() as i64);
                for a in boundary_samples {
                    let (r, c) = (a.row as i64, a.col as i64);
                    let inside = |r: i64, c: i64| r >= 0 && c >= 0 && r < h && c < w && target.get(r as usize, c as usize);
                    let on_boundary = inside(r, c)
                        && (-1..=1).any(|dr| (-1..=1).any(|dc| (dr, dc) != (0, 0) && !inside(r + dr, c + dc)));
                    if a.row.fract() != 0.0 || a.col.fract() != 0.0 || !on_boundary {
                        return Err(format!("tight-lasso sample {a:?} is not a boundary pixel"));
                    }
                }
            }
        }
        (GestureParams::Scribble { control_points, .. }, GestureType::Scribble) => {
            if !(4..=6).contains(&control_points.len()) {
                return Err(format!("{} scribble control points", control_points.len()));
            }
        }
        (GestureParams::Rectangle { v, g: gn, tight_box, .. }, GestureType::Rectangle) => {
            let px = pixels(target);
            let xmin = px.iter().map(|p| p.1).min().unwrap() as f64;
            let xmax = px.iter().map(|p| p.1).max().unwrap() as f64;
            let ymin = px.iter().map(|p| p.0).min().unwrap() as f64;
            let ymax = px.iter().map(|p| p.0).max().unwrap() as f64;
            if *tight_box != [xmin, ymin, xmax, ymax] {
                return Err(format!("tight box {tight_box:?} != [{xmin}, {ymin}, {xmax}, {ymax}]"));
            }
            if !(0.10..=0.15).contains(v) {
                return Err(format!("v = {v}"));
            }
            let (sx, sy) = (xmax - xmin, ymax - ymin);
            let raw = [xmin + v * gn[0] * sx, ymin + v * gn[1] * sy, xmax + v * gn[2] * sx, ymax + v * gn[3] * sy];
            let xl = (target.width() - 1) as f64;
            let yl = (target.height() - 1) as f64;
            let (xa, xb) = (raw[0].clamp(0.0, xl), raw[2].clamp(0.0, xl));
            let (ya, yb) = (raw[1].clamp(0.0, yl), raw[3].clamp(0.0, yl));
            let (x0, x1, y0, y1) = (xa.min(xb), xa.max(xb), ya.min(yb), ya.max(yb));
            let want = [(y0, x0), (y0, x1), (y1, x1), (y1, x0)];
            if g.points.len() != 4 {
                return Err(format!("rectangle with {} corners", g.points.len()));
            }
            for (p, (wr, wc)) in g.points.iter().zip(want) {
                if (p.row - wr).abs() > 1e-9 || (p.col - wc).abs() > 1e-9 {
                    return Err(format!("corner {p:?} != ({wr}, {wc})"));
                }
            }
        }
        (GestureParams::Click {}, GestureType::Click) => {}
        (p, t) => return Err(format!("{t} carries {p:?}")),
    }
    Ok(())
}

fn check_gestures() -> Outcome {
    let start = Instant::now();
    let masks = fixture_masks();
    let mut checked = 0;
    for (k, m) in masks.iter().enumerate() {
        for t in GestureType::ALL {
            let seed = derive_seed(&[CORPUS_SEED, k as u64, t as u64]);
            let g = generate(t, m, seed).map_err(|e| format!("region {k} {t}: {e}"))?;
            check_one_gesture(&g, m).map_err(|e| format!("region {k} {t}: {e}"))?;
            checked += 1;
        }
    }
    within_budget(start, Duration::from_secs(30), format!("{checked} gestures on {} regions", masks.len()))
}

fn check_corruption() -> Outcome {
    let start = Instant::now();
    let params = CorruptionParams::default();
    let masks = fixture_masks();
    let mut ok = 0;
    for (k, m) in masks.iter().enumerate() {
        if let Ok(prev) = synthesize_prev_seg(m, None, &params, derive_seed(&[CORPUS_SEED, k as u64])) {
            let v = iou_oracle(&prev, m);
            if !(0.75..0.85).contains(&v) {
                return Err(format!("region {k}: emitted mask has IoU {v}"));
            }
            ok += 1;
        }
    }
    let rate = ok as f64 / masks.len() as f64;
    let detail = format!("{ok}/{} in band ({:.1}%)", masks.len(), 100.0 * rate);
    if rate < 0.95 {
        return Err(detail);
    }
    within_budget(start, Duration::from_secs(60), detail)
}

fn check_void_fixture() -> Result<(), String> {
    let (w, h) = (6, 6);
    let block: Vec<(usize, usize)> = (1..=4).flat_map(|r| (1..=4).map(move |c| (r, c))).collect();
    let a = [(1, 1), (1, 2), (2, 1), (2, 2)];
    let s = [(4, 5), (5, 4), (5, 5)];
    let g_r = mask_from(w, h, &block);
    let m_px: Vec<_> = block.iter().copied().filter(|p| !a.contains(p)).chain(s).collect();
    let m = mask_from(w, h, &m_px);
    let cs = decompose_corrections(&g_r, &m, 1, Connectivity::Eight).map_err(|e| e.to_string())?;
    if cs.len() != 2 {
        return Err(format!("{} corrections in the 6x6 fixture", cs.len()));
    }
    let mut region_plus_s = block.clone();
    region_plus_s.extend(s);
    let region_minus_a: Vec<_> = block.iter().copied().filter(|p| !a.contains(p)).collect();
    for (k, c) in cs.iter().enumerate() {
        let (name, expected) = match c.kind {
            CorrectionKind::Add => ("add A", mask_from(w, h, &region_plus_s)),
            CorrectionKind::Subtract => ("subtract S", mask_from(w, h, &region_minus_a)),
        };
        let g_a = build_train_gt_among(&g_r, &m, &cs, k).map_err(|e| e.to_string())?;
        let g_l = build_local_eval_gt(&g_r, &m, &g_a, Setting::Refinement).map_err(|e| e.to_string())?;
        if g_l != expected {
            return Err(format!("{name}: local GT {:?} != {:?}", pixels(&g_l), pixels(&expected)));
        }
    }
    // Creation on one part of a two-part region: the other part is void and resolves to 0.
    let part: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
    let other: Vec<(usize, usize)> = vec![(4, 4), (4, 5), (5, 4), (5, 5)];
    let full = mask_from(w, h, &[part.clone(), other].concat());
    let part_mask = mask_from(w, h, &part);
    let empty = BinaryMask::new(w, h);
    let g_a = build_part_gt(&full, &part_mask).map_err(|e| e.to_string())?;
    let g_l = build_local_eval_gt(&full, &empty, &g_a, Setting::Creation).map_err(|e| e.to_string())?;
    if g_l != part_mask {
        return Err(format!("creation part: local GT {:?}", pixels(&g_l)));
    }
    let g_l = build_local_eval_gt(&g_r, &empty, &dig_core::maskops::TriMask::from_binary(&g_r), Setting::Creation)
        .map_err(|e| e.to_string())?;
    if g_l != g_r {
        return Err("creation: local GT differs from region".into());
    }
    Ok(())
}

fn check_void() -> Outcome {
    check_void_fixture()?;
    let mut cases = 0;
    let mut corrections = 0;
    for gs in &corpus().samples {
        let s = &gs.sample;
        let Some(prev) = &s.prev_seg else { continue };
        let (w, h) = (s.width(), s.height());
        let mut fixed: Vec<bool> = (0..w * h).map(|i| prev.get(i / w, i % w)).collect();
        for c in &s.corrections {
            let area = count(&c.mask);
            if area < 100 || area != c.area {
                return Err(format!("{}: correction of {area} px (recorded {})", s.sample_id, c.area));
            }
            for (r, col) in pixels(&c.mask) {
                fixed[r * w + col] = c.kind == CorrectionKind::Add;
            }
            corrections += 1;
        }
        let g = &s.region;
        let missing = component_sizes(w, h, |r, c| g.get(r, c) && !fixed[r * w + c]);
        let extra = component_sizes(w, h, |r, c| !g.get(r, c) && fixed[r * w + c]);
        if let Some(big) = missing.iter().chain(&extra).find(|&&n| n >= 100) {
            return Err(format!("{}: {big} px residual after applying every correction", s.sample_id));
        }
        cases += 1;
    }
    if cases == 0 {
        return Err("corpus has no refinement samples".into());
    }
    Ok(format!("6x6 fixture exact; {corrections} corrections >= 100 px; reconstruction holds on {cases} samples"))
}

/// The k-th answer (from 1) covers 50 + 5k of the 100 ground-truth pixels.
struct Scripted {
    calls: usize,
}

impl Segmentor for Scripted {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn predict(&mut self, _: &Query<'_>) -> Result<Prediction, SegmentorError> {
        self.calls += 1;
        let keep = 50 + 5 * self.calls;
        Ok(Prediction::Mask(BinaryMask::from_fn(20, 20, |r, c| r < 10 && c < 10 && r * 10 + c < keep)))
    }
}

const ECHO_ADAPTER: &str = r#"read -r hello; echo '{"protocol":"dig/1"}'; while IFS= read -r line; do printf '%s\n' "$line" | sed -E 's/.*"prev_seg":(\{[^}]*\}).*/{"mask":\1}/'; done"#;

fn mean_by(
    samples: &[Sample],
    baseline: Baseline,
    setting: Setting,
) -> Result<(f64, usize), String> {
    let chosen: Vec<Sample> = samples.iter().filter(|s| s.setting == setting).cloned().collect();
    let out = run_benchmark(|| Box::new(baseline), &chosen, &QueryOptions::default(), 1);
    if !out.failures.is_empty() {
        return Err(format!("{} failed on {} queries", baseline.as_str(), out.failures.len()));
    }
    let n = out.records.len();
    let row = aggregate(&out.records);
    let r = row.get(baseline.as_str(), setting, "all").ok_or("missing report row")?;
    Ok((r.rice_global_pct, n))
}

fn has_key(line: &str, key: &str) -> bool {
    line.contains(&format!("\"{key}\":"))
}

fn check_harness() -> Outcome {
    let start = Instant::now();
    let samples: Vec<Sample> = corpus().samples.iter().map(|g| g.sample.clone()).collect();
    let mut notes = Vec::new();
    for setting in Setting::ALL {
        let (v, n) = mean_by(&samples, Baseline::Oracle, setting)?;
        if format!("{v:.2}") != "100.00" {
            return Err(format!("oracle on {setting}: {v:.4}"));
        }
        notes.push(format!("oracle/{setting} {v:.2} (n={n})"));
    }
    if samples.iter().filter(|s| s.setting == Setting::Refinement).any(|s| s.prev_seg.as_ref().is_none_or(|m| m.is_empty())) {
        return Err("refinement sample without a previous segmentation".into());
    }
    let (v, _) = mean_by(&samples, Baseline::Identity, Setting::Refinement)?;
    if format!("{v:.2}") != "0.00" {
        return Err(format!("identity on refinement: {v:.4}"));
    }
    notes.push(format!("identity {v:.2}"));
    let (v, _) = mean_by(&samples, Baseline::Empty, Setting::Refinement)?;
    if format!("{v:.2}") != "-100.00" {
        return Err(format!("empty on refinement: {v:.4}"));
    }
    notes.push(format!("empty {v:.2}"));

    let gt = BinaryMask::from_fn(20, 20, |r, c| r < 10 && c < 10);
    let sample = Sample::creation("scripted", "scripted", None, gt, None, Vec::new());
    let trace = run_nog(&mut Scripted { calls: 0 }, &sample, NogMode::Only(GestureType::Click), &NogConfig::default())
        .map_err(|f| f.message)?;
    let got = (trace.nog(80), trace.nog(85), trace.nog(90));
    if got != (Some(6), Some(7), Some(8)) {
        return Err(format!("scripted NoG@80/85/90 = {got:?}"));
    }
    notes.push("NoG 6/7/8".into());

    let subset: Vec<&Sample> = samples.iter().filter(|s| !s.gestures.is_empty()).step_by(10).take(20).collect();
    let transcript = |options: QueryOptions| -> Result<Vec<String>, String> {
        let t = Arc::new(Mutex::new(Vec::new()));
        let mut ext = ExternalSegmentor::new(ECHO_ADAPTER, Duration::from_secs(20)).with_transcript(t.clone());
        for s in &subset {
            for g in 0..s.gestures.len() {
                dig_core::harness::run_single_shot(&mut ext, s, g, &options).map_err(|f| f.message)?;
            }
        }
        let lines = t.lock().unwrap().clone();
        Ok(lines)
    };
    let hidden = transcript(QueryOptions::default())?;
    let bad = hidden.iter().filter(|l| l.starts_with("> ")).filter(|l| has_key(l, "intent") || has_key(l, "gesture_type")).count();
    if bad > 0 || hidden.len() < 2 * subset.len() {
        return Err(format!("{bad} context-free requests reveal intent or type"));
    }
    let revealed = transcript(QueryOptions { reveal_context: true, reveal_type: true, ..Default::default() })?;
    if !revealed.iter().any(|l| l.starts_with("> ") && has_key(l, "intent") && has_key(l, "gesture_type")) {
        return Err("control run with revealing options shows no intent/type keys".into());
    }
    notes.push(format!("{} transcript lines clean", hidden.len()));
    within_budget(start, Duration::from_secs(60), notes.join(", "))
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn check_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut trees = Vec::new();
    let mut manifests = 0;
    for run in 0..2 {
        let data = tmp.path().join(format!("data{run}"));
        write_fixture_dataset(&data, CORPUS_REGIONS, CORPUS_SEED, false).map_err(|e| e.to_string())?;
        let (images, _) = ingest_coco_file(&data.join("annotations.json"), None).map_err(|e| e.to_string())?;
        let cfg = GenerateConfig { dataset_seed: CORPUS_SEED, jobs: 1 + run * 3, ..Default::default() };
        let c = generate_corpus(&images, &cfg);
        for format in [MaskFormat::Rle, MaskFormat::Png] {
            let out = tmp.path().join(format!("out{run}-{format:?}"));
            write_corpus(&c, &out, format).map_err(|e| e.to_string())?;
            trees.push((format, tree(&out)));
            manifests += 1;
        }
        trees.push((MaskFormat::Rle, tree(&data)));
    }
    let (a, b) = trees.split_at(trees.len() / 2);
    for ((fa, ta), (_, tb)) in a.iter().zip(b) {
        if ta.keys().ne(tb.keys()) {
            return Err(format!("{fa:?}: file sets differ"));
        }
        if let Some(k) = ta.keys().find(|k| ta[*k] != tb[*k]) {
            return Err(format!("{fa:?}: {k} differs"));
        }
    }
    let files: usize = a.iter().map(|(_, t)| t.len()).sum();
    Ok(format!("{manifests} corpus writes (1 and 4 workers, RLE and PNG), {files} files byte-identical"))
}

fn check_throughput() -> Outcome {
    let images = fixture_corpus(1000, 11);
    let masks: Vec<&BinaryMask> = images.iter().flat_map(|im| im.regions.iter().map(|r| &r.mask)).take(1000).collect();
    let start = Instant::now();
    let mut made = 0;
    for (k, m) in masks.iter().enumerate() {
        for t in GestureType::ALL {
            if generate(t, m, derive_seed(&[11, k as u64, t as u64])).is_ok() {
                made += 1;
            }
        }
    }
    let per_region = start.elapsed().as_secs_f64() / masks.len() as f64;
    within_budget(
        start,
        Duration::from_secs(75),
        format!("{made} gestures on {} regions, {:.4}s per region", masks.len(), per_region),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("rice_exactness", check_rice),
        ("gesture_invariants", check_gestures),
        ("corruption_band", check_corruption),
        ("void_local_gt", check_void),
        ("harness_identities", check_harness),
        ("determinism", check_determinism),
        ("throughput", check_throughput),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
