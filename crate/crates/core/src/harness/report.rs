//! Structured experiment reports and their JSON / CSV renderings.

use serde::Serialize;

/// Where a target value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A constant or bound stated in the literature the harness reproduces.
    Published,
    /// Obtained here from a closed-form evaluation or an independent oracle.
    ClosedForm,
    /// Follows immediately from the definitions.
    Elementary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Target {
    pub name: String,
    pub value: f64,
    pub provenance: Provenance,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Computed {
    pub name: String,
    pub value: f64,
    pub trace: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub id: String,
    pub targets: Vec<Target>,
    pub computed: Vec<Computed>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            targets: Vec::new(),
            computed: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn target(&mut self, name: impl Into<String>, value: f64, provenance: Provenance, tolerance: f64) {
        self.targets.push(Target {
            name: name.into(),
            value,
            provenance,
            tolerance,
        });
    }

    pub fn computed(&mut self, name: impl Into<String>, value: f64, trace: Vec<f64>, converged: bool) {
        self.computed.push(Computed {
            name: name.into(),
            value,
            trace,
            converged,
        });
    }

    /// Record a check. `inputs_converged = false` downgrades any outcome to
    /// inconclusive, so an unconverged estimate can never pass.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, inputs_converged: bool, detail: impl Into<String>) {
        let status = match (inputs_converged, ok) {
            (false, _) => Status::Inconclusive,
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
        };
        self.verdict(name, status, detail);
    }

    pub fn verdict(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            check: name.into(),
            status,
            detail: detail.into(),
        });
    }

    /// Checks that need a radial level beyond the configured grid.
    pub fn needs_level(&mut self, name: impl Into<String>, level: u32, j_max: u32) {
        self.verdict(
            name,
            Status::Inconclusive,
            format!("needs radial level {level}, grid stops at {j_max}"),
        );
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn computed_value(&self, name: &str) -> Option<&Computed> {
        self.computed.iter().find(|c| c.name == name)
    }

    pub fn verdict_status(&self, name: &str) -> Option<Status> {
        self.verdicts.iter().find(|v| v.check == name).map(|v| v.status)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == Status::Pass)
    }

    /// Rows `id,section,name,value,status,tolerance,detail` for plotting and
    /// spreadsheets. Traces are flattened into `trace[i]` rows.
    pub fn csv_rows(&self) -> Vec<[String; 7]> {
        let mut rows = Vec::new();
        for t in &self.targets {
            rows.push([
                self.id.clone(),
                "target".into(),
                t.name.clone(),
                fmt_num(t.value),
                ser_name(&t.provenance),
                fmt_num(t.tolerance),
                String::new(),
            ]);
        }
        for c in &self.computed {
            rows.push([
                self.id.clone(),
                "computed".into(),
                c.name.clone(),
                fmt_num(c.value),
                if c.converged { "converged" } else { "not_converged" }.into(),
                String::new(),
                String::new(),
            ]);
            for (i, v) in c.trace.iter().enumerate() {
                rows.push([
                    self.id.clone(),
                    "trace".into(),
                    format!("{}[{i}]", c.name),
                    fmt_num(*v),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
        }
        for v in &self.verdicts {
            rows.push([
                self.id.clone(),
                "verdict".into(),
                v.check.clone(),
                String::new(),
                ser_name(&v.status),
                String::new(),
                v.detail.clone(),
            ]);
        }
        rows
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:e}")
}

fn ser_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub const CSV_HEADER: [&str; 7] = ["id", "section", "name", "value", "status", "tolerance", "detail"];

pub fn to_csv(reports: &[Report]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in reports {
        for row in r.csv_rows() {
            w.write_record(&row).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}
