//! Runs registered checks concurrently and assembles reports in registry order.

use std::str::FromStr;
use std::time::Instant;

use crate::config::RunConfig;
use crate::registry::{registry, Category, Check, Ctx, Outcome};
use crate::report::{CheckReport, RunReport, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Orthogonality,
    Spectral,
    Asymptotics,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Orthogonality => "orthogonality",
            Suite::Spectral => "spectral",
            Suite::Asymptotics => "asymptotics",
            Suite::All => "all",
        }
    }

    fn includes(self, c: Category) -> bool {
        matches!(
            (self, c),
            (Suite::All, _)
                | (Suite::Identities, Category::Identity)
                | (Suite::Orthogonality, Category::Orthogonality)
                | (Suite::Spectral, Category::Spectral)
                | (Suite::Asymptotics, Category::Asymptotic)
        )
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "identities" => Suite::Identities,
            "orthogonality" => Suite::Orthogonality,
            "spectral" => Suite::Spectral,
            "asymptotics" => Suite::Asymptotics,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite '{s}'")),
        })
    }
}

fn execute(check: &Check, ctx: &Ctx) -> CheckReport {
    let t0 = Instant::now();
    let out = check.run(ctx);
    let wall_time = t0.elapsed().as_secs_f64();
    let tol = check.spec.tolerance;
    let (status, residual, details) = match out {
        Ok(Outcome::Measured { residual, details }) => {
            // NaN compares false and so fails
            let s = if residual <= tol { Status::Pass } else { Status::Fail };
            (s, residual, details)
        }
        Ok(Outcome::Skipped(reason)) => (Status::Skip, f64::NAN, reason),
        Err(e) => (Status::Fail, f64::INFINITY, format!("error: {e}")),
    };
    CheckReport {
        id: check.spec.id.to_string(),
        status,
        residual,
        tolerance: tol,
        details,
        wall_time,
    }
}

/// Runs the selected checks, optionally only those whose id is in `only`.
pub fn run_checks(cfg: &RunConfig, suite: Suite, only: Option<&[&str]>) -> RunReport {
    let checks: Vec<Check> = registry(cfg)
        .into_iter()
        .filter(|c| suite.includes(c.spec.category))
        .filter(|c| only.is_none_or(|ids| ids.contains(&c.spec.id)))
        .collect();
    let ctx = Ctx::new(cfg);
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|c| s.spawn(|| execute(c, &ctx))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    });
    RunReport {
        suite: suite.name().to_string(),
        seed: cfg.seed,
        checks: reports,
    }
}

pub fn run_suite(cfg: &RunConfig, suite: Suite) -> RunReport {
    run_checks(cfg, suite, None)
}
