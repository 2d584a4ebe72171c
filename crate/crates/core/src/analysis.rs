//! Rule and oracle side by side for one plan.

use serde::Serialize;

use crate::cycle::{format_string, BlowupPlan, KindCounts};
use crate::error::Result;
use crate::lattice::DivisorClass;
use crate::linsys::{self, classify, ClassificationReport, H0Rule};
use crate::oracle::{self, CertifiedValue};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub seeds: Vec<u64>,
    /// Torus samples for image computations.
    pub samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { seeds: vec![1, 2, 3], samples: 200 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanAnalysis {
    pub canonical_string: Vec<i64>,
    pub pattern: String,
    pub kinds: KindCounts,
    /// Combinatorial values for `d = 1, 2`.
    pub rule: [H0Rule; 2],
    /// Interpolation values for `d = 1, 2`.
    pub oracle: [CertifiedValue; 2],
    /// Fixed-part multiplicities of `2·(−K)` in cycle order.
    pub fixed_multiplicities: Vec<i64>,
    pub movable: DivisorClass,
    pub report: ClassificationReport,
    /// Rule values that disagree with the oracle.
    pub mismatches: Vec<String>,
}

impl PlanAnalysis {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn string_label(&self) -> String {
        format_string(&self.canonical_string)
    }
}

/// Peels, runs both h⁰ methods, cross-checks them and classifies.
///
/// The classification always uses the oracle values.
pub fn analyze(plan: &BlowupPlan, cfg: &OracleConfig) -> Result<PlanAnalysis> {
    plan.validate()?;
    let cycle = plan.realize()?;
    let bi = DivisorClass::anticanonical(cycle.lattice_rank) * 2;
    let peel = linsys::peel(&bi, &cycle)?;
    let m2 = linsys::movable_selfint(&peel);

    let rule = [linsys::h0_rule_on(1, &cycle)?, linsys::h0_rule_on(2, &cycle)?];
    let oracle = [oracle::certified_h0(plan, 1, &cfg.seeds)?, oracle::certified_h0(plan, 2, &cfg.seeds)?];

    let mut mismatches = Vec::new();
    for (d, (r, o)) in rule.iter().zip(&oracle).enumerate() {
        if let Some(v) = r.value() {
            if v != o.value as i64 {
                mismatches.push(format!("h0({}(-K)): rule {v}, oracle {}", d + 1, o.value));
            }
        }
    }

    let report = classify(plan, oracle[0].value as i64, oracle[1].value as i64, m2)?;
    Ok(PlanAnalysis {
        canonical_string: cycle.canonical_string(),
        pattern: cycle.canonical_pattern().to_string(),
        kinds: plan.kind_counts(),
        rule,
        oracle,
        fixed_multiplicities: peel.multiplicities(cycle.len()),
        movable: peel.movable,
        report,
        mismatches,
    })
}
