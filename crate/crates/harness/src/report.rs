//! Check reports: one JSON document per run and a flat CSV table.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub status: Status,
    /// Non-finite residuals serialize as null.
    pub residual: f64,
    pub tolerance: f64,
    pub details: String,
    /// Seconds.
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl RunReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON document with every wall_time zeroed; equal across runs with
    /// the same configuration and seed.
    pub fn body_without_timing(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time = 0.0;
        }
        r.to_json()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,status,residual,tolerance,wall_ms\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:.3}\n",
                c.id,
                c.status.as_str(),
                c.residual,
                c.tolerance,
                c.wall_time * 1e3
            ));
        }
        out
    }

    /// One aligned line per check, for the terminal.
    pub fn to_table(&self) -> String {
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{}  {:<w$}  residual {:.3e}  tol {:.1e}  {:>8.1} ms  {}\n",
                c.status.as_str(),
                c.id,
                c.residual,
                c.tolerance,
                c.wall_time * 1e3,
                c.details
            ));
        }
        out
    }
}
