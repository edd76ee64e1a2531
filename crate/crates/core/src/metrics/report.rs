use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{EvalRecord, FailedRecord};
use crate::sample::Setting;
use crate::Scalar;

/// Gesture column label for the all-gestures bucket.
pub const ALL_GESTURES: &str = "all";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: String,
    pub setting: Setting,
    pub gesture: String,
    pub n: usize,
    pub rice_local_pct: f64,
    pub rice_global_pct: f64,
    pub iou_pct: f64,
    /// Records excluded from the means because the model failed.
    pub failures: usize,
}

/// Mean scores in percent per (method, setting, gesture), plus one
/// all-gestures row per (method, setting). Buckets without records are absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
}

#[derive(Default)]
struct Acc {
    n: usize,
    local: f64,
    global: f64,
    iou: f64,
    failures: usize,
}

type Key = (String, Setting, String);

fn keys(method: &Option<String>, setting: Setting, gesture: &str) -> [Key; 2] {
    let m = method.clone().unwrap_or_else(|| "-".to_owned());
    [
        (m.clone(), setting, gesture.to_owned()),
        (m, setting, ALL_GESTURES.to_owned()),
    ]
}

pub fn aggregate<T: Scalar>(records: &[EvalRecord<T>]) -> ReportTable {
    aggregate_with_failures(records, &[])
}

pub fn aggregate_with_failures<T: Scalar>(records: &[EvalRecord<T>], failures: &[FailedRecord]) -> ReportTable {
    let mut acc: BTreeMap<Key, Acc> = BTreeMap::new();
    for r in records {
        for k in keys(&r.method, r.setting, r.gesture_type.as_str()) {
            let a = acc.entry(k).or_default();
            a.n += 1;
            a.local += r.scores.rice_local.to_f64_lossy();
            a.global += r.scores.rice_global.to_f64_lossy();
            a.iou += r.scores.alpha.to_f64_lossy();
        }
    }
    for f in failures {
        for k in keys(&f.method, f.setting, f.gesture_type.as_str()) {
            acc.entry(k).or_default().failures += 1;
        }
    }
    let pct = |sum: f64, n: usize| if n == 0 { f64::NAN } else { 100.0 * sum / n as f64 };
    let rows = acc
        .into_iter()
        .filter(|(_, a)| a.n > 0 || a.failures > 0)
        .map(|((method, setting, gesture), a)| ReportRow {
            method,
            setting,
            gesture,
            n: a.n,
            rice_local_pct: pct(a.local, a.n),
            rice_global_pct: pct(a.global, a.n),
            iou_pct: pct(a.iou, a.n),
            failures: a.failures,
        })
        .collect();
    ReportTable { rows }
}

fn two_places(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::Value::from((v * 100.0).round() / 100.0)
    } else {
        serde_json::Value::Null
    }
}

fn cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.2}")
    } else {
        String::new()
    }
}

impl ReportTable {
    pub fn get(&self, method: &str, setting: Setting, gesture: &str) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.setting == setting && r.gesture == gesture)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,setting,gesture,n,rice_local_pct,rice_global_pct,iou_pct,failures\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.method,
                r.setting,
                r.gesture,
                r.n,
                cell(r.rice_local_pct),
                cell(r.rice_global_pct),
                cell(r.iou_pct),
                r.failures
            );
        }
        out
    }

    /// JSON array of rows with percentages rounded to two decimals; rows
    /// holding only failures have null means.
    pub fn to_json(&self) -> serde_json::Value {
        self.rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "method": r.method,
                    "setting": r.setting,
                    "gesture": r.gesture,
                    "n": r.n,
                    "rice_local_pct": two_places(r.rice_local_pct),
                    "rice_global_pct": two_places(r.rice_global_pct),
                    "iou_pct": two_places(r.iou_pct),
                    "failures": r.failures,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gestures::GestureType;
    use crate::metrics::Scores;

    fn rec(g: GestureType, rice: f64) -> EvalRecord {
        EvalRecord {
            sample_id: "s".into(),
            method: Some("m".into()),
            gesture_type: g,
            setting: Setting::Refinement,
            gesture_index: 0,
            scores: Scores {
                alpha: 0.5,
                beta: 0.5,
                alpha_local: 0.5,
                beta_local: 0.5,
                rice_global: rice,
                rice_local: rice,
            },
        }
    }

    #[test]
    fn single_record() {
        let t = aggregate(&[rec(GestureType::Click, 0.37)]);
        let row = t.get("m", Setting::Refinement, "click").unwrap();
        assert_eq!(row.n, 1);
        assert!((row.rice_global_pct - 37.0).abs() < 1e-12);
        assert!((t.get("m", Setting::Refinement, "all").unwrap().rice_local_pct - 37.0).abs() < 1e-12);
    }

    #[test]
    fn arithmetic_mean_and_absent_buckets() {
        let t = aggregate(&[rec(GestureType::Click, 0.2), rec(GestureType::Click, 0.4)]);
        assert!((t.get("m", Setting::Refinement, "click").unwrap().rice_global_pct - 30.0).abs() < 1e-12);
        assert!(t.get("m", Setting::Refinement, "scribble").is_none());
        assert!(t.get("m", Setting::Creation, "click").is_none());
        assert_eq!(t.rows.len(), 2);
        let csv = t.to_csv();
        assert!(csv.contains("m,refinement,click,2,30.00,30.00,50.00,0"), "{csv}");
        assert!(!csv.contains("scribble"));
    }

    #[test]
    fn failures_are_counted_not_averaged() {
        let f = FailedRecord {
            sample_id: "x".into(),
            method: Some("m".into()),
            gesture_type: GestureType::Rectangle,
            setting: Setting::Refinement,
            gesture_index: 0,
            error: "timeout".into(),
            message: String::new(),
        };
        let t = aggregate_with_failures(&[rec(GestureType::Click, 0.5)], &[f]);
        let all = t.get("m", Setting::Refinement, "all").unwrap();
        assert_eq!((all.n, all.failures), (1, 1));
        assert!((all.rice_global_pct - 50.0).abs() < 1e-12);
        let rect = t.get("m", Setting::Refinement, "rectangle").unwrap();
        assert_eq!(rect.n, 0);
        let json = t.to_json();
        let rect_json = json.as_array().unwrap().iter().find(|r| r["gesture"] == "rectangle").unwrap();
        assert!(rect_json["rice_global_pct"].is_null());
    }

    #[test]
    fn ordering_is_deterministic() {
        let rs = [rec(GestureType::Scribble, 0.1), rec(GestureType::Click, 0.2)];
        let rev: Vec<_> = rs.iter().rev().cloned().collect();
        assert_eq!(aggregate(&rs), aggregate(&rev));
    }
}
