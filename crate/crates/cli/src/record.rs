use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use akns_multiform::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(serialize_with = "ordered_map")]
    pub params: Vec<(String, i64)>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u64,
}

fn ordered_map<S: Serializer>(params: &[(String, i64)], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(params.len()))?;
    for (k, v) in params {
        map.serialize_entry(k, v)?;
    }
    map.end()
}

impl CheckRecord {
    pub fn from_report(report: Report, millis: u64) -> Self {
        let status = if report.passed() { Status::Pass } else { Status::Fail };
        CheckRecord { check: report.check, params: report.params, status, witness: report.witness, millis }
    }

    pub fn skipped(check: &str, params: Vec<(String, i64)>) -> Self {
        CheckRecord { check: check.to_string(), params, status: Status::Skipped, witness: None, millis: 0 }
    }

    fn param_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

pub fn sort(records: &mut [CheckRecord]) {
    records.sort_by(|a, b| (&a.check, &a.params).cmp(&(&b.check, &b.params)));
}

pub fn render_json(records: &[CheckRecord]) -> String {
    let mut out = serde_json::to_string(records).expect("records serialize");
    out.push('\n');
    out
}

/// One line per record and a summary; timings are left out so that
/// reruns are byte-identical.
pub fn render_text(records: &[CheckRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        out.push_str(&format!("{status} {}({})", r.check, r.param_string()));
        if let Some(w) = &r.witness {
            out.push_str(&format!(" witness {w}"));
        }
        out.push('\n');
    }
    let failed = records.iter().filter(|r| r.status == Status::Fail).count();
    out.push_str(&format!("{} checks, {} failed\n", records.len(), failed));
    out
}
