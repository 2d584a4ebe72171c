//! Fixed-component peeling, the combinatorial h⁰ rule and the case classifier.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycle::{AnticanonicalCycle, BlowupPlan, Curve};
use crate::error::{Error, Result};
use crate::lattice::{self, DivisorClass};

pub const MAX_PEEL_ROUNDS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    pub index: usize,
    pub curve: Curve,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelResult {
    pub input: DivisorClass,
    pub fixed: DivisorClass,
    /// Nonzero multiplicities, in cycle order.
    pub fixed_components: Vec<FixedComponent>,
    pub movable: DivisorClass,
    /// Component indices subtracted in each round.
    pub rounds: Vec<Vec<usize>>,
}

impl PeelResult {
    pub fn multiplicity(&self, index: usize) -> i64 {
        self.fixed_components
            .iter()
            .find(|c| c.index == index)
            .map_or(0, |c| c.multiplicity)
    }

    /// Multiplicities indexed by cycle position.
    pub fn multiplicities(&self, m: usize) -> Vec<i64> {
        (0..m).map(|i| self.multiplicity(i)).collect()
    }
}

/// Strips cycle components on which the class has negative degree.
///
/// Each round subtracts every currently negative component once.
pub fn peel(d: &DivisorClass, cycle: &AnticanonicalCycle) -> Result<PeelResult> {
    let mut current = *d;
    let mut mult = vec![0i64; cycle.len()];
    let mut rounds = Vec::new();
    loop {
        let mut negative = Vec::new();
        for c in &cycle.components {
            if lattice::intersect(&current, &c.class)? < 0 {
                negative.push(c.index);
            }
        }
        if negative.is_empty() {
            break;
        }
        if rounds.len() == MAX_PEEL_ROUNDS {
            return Err(Error::PeelDiverged(MAX_PEEL_ROUNDS));
        }
        for &i in &negative {
            current = current - cycle.components[i].class;
            mult[i] += 1;
        }
        rounds.push(negative);
    }
    let fixed_components: Vec<FixedComponent> = cycle
        .components
        .iter()
        .zip(&mult)
        .filter(|(_, &n)| n > 0)
        .map(|(c, &n)| FixedComponent { index: c.index, curve: c.curve, multiplicity: n })
        .collect();
    Ok(PeelResult { input: *d, fixed: *d - current, fixed_components, movable: current, rounds })
}

pub fn movable_selfint(pr: &PeelResult) -> i64 {
    pr.movable.square()
}

/// Which argument produced a combinatorial h⁰ value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleStrategy {
    /// Everything is fixed, so the only section is the cycle itself.
    Rigid,
    /// The movable part is a multiple `n·P` of an elliptic-type pencil `P`.
    Pencil,
    /// Restriction sequence from `K⁻¹` to the movable part.
    ExactSequence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum H0Rule {
    Exact { value: i64, strategy: RuleStrategy },
    Deferred { reason: String },
}

impl H0Rule {
    pub fn value(&self) -> Option<i64> {
        match self {
            H0Rule::Exact { value, .. } => Some(*value),
            H0Rule::Deferred { .. } => None,
        }
    }

    fn deferred(reason: impl Into<String>) -> Self {
        H0Rule::Deferred { reason: reason.into() }
    }
}

impl fmt::Display for H0Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            H0Rule::Exact { value, .. } => write!(f, "{value}"),
            H0Rule::Deferred { .. } => write!(f, "deferred"),
        }
    }
}

/// Combinatorial h⁰(d·(−K)) for the surface of `plan`.
pub fn h0_rule(d: i64, plan: &BlowupPlan) -> Result<H0Rule> {
    h0_rule_on(d, &plan.realize()?)
}

pub fn h0_rule_on(d: i64, cycle: &AnticanonicalCycle) -> Result<H0Rule> {
    if !(1..=2).contains(&d) {
        return Err(Error::UnsupportedMultiple(d));
    }
    let anti = DivisorClass::anticanonical(cycle.lattice_rank);
    let pr = peel(&(anti * d), cycle)?;
    let movable = pr.movable;

    if movable.is_zero() {
        return Ok(H0Rule::Exact { value: 1, strategy: RuleStrategy::Rigid });
    }

    if movable.square() == 0 {
        let n = movable.divisibility();
        if let Some(p) = movable.div_exact(n) {
            let nef_on_cycle = cycle
                .classes()
                .all(|c| lattice::intersect(&p, &c).map(|v| v >= 0).unwrap_or(false));
            if p.square() == 0 && p.anticanonical_degree() == 2 && nef_on_cycle {
                return Ok(H0Rule::Exact { value: n + 1, strategy: RuleStrategy::Pencil });
            }
        }
    }

    if d == 2 {
        let base = match h0_rule_on(1, cycle)? {
            H0Rule::Exact { value: 1, .. } => 1,
            H0Rule::Exact { value, .. } => {
                return Ok(H0Rule::deferred(format!(
                    "h0(-K) = {value}, so H1(-K) does not vanish"
                )))
            }
            H0Rule::Deferred { reason } => return Ok(H0Rule::deferred(format!("h0(-K) deferred: {reason}"))),
        };
        let residual = movable + DivisorClass::canonical(cycle.lattice_rank);
        if let Some(count) = disjoint_degree_zero_decomposition(&residual, &movable, cycle)? {
            return Ok(H0Rule::Exact { value: base + count as i64, strategy: RuleStrategy::ExactSequence });
        }
        return Ok(H0Rule::deferred(format!(
            "movable part minus -K ({residual}) is not a sum of disjoint degree-0 components"
        )));
    }

    Ok(H0Rule::deferred(format!(
        "movable part {movable} with M^2 = {} is neither empty nor a pencil",
        movable.square()
    )))
}

/// Number of components in a decomposition of `residual` as a sum of
/// pairwise disjoint cycle components on which `movable` has degree zero.
fn disjoint_degree_zero_decomposition(
    residual: &DivisorClass,
    movable: &DivisorClass,
    cycle: &AnticanonicalCycle,
) -> Result<Option<usize>> {
    if residual.is_zero() {
        return Ok(Some(0));
    }
    let mut candidates = Vec::new();
    for c in &cycle.components {
        if lattice::intersect(movable, &c.class)? == 0 {
            candidates.push(c.index);
        }
    }
    let n = candidates.len();
    for mask in 1u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| candidates[b]).collect();
        let disjoint = chosen
            .iter()
            .enumerate()
            .all(|(x, &i)| chosen[x + 1..].iter().all(|&j| !cycle.are_adjacent(i, j)));
        if !disjoint {
            continue;
        }
        let sum: DivisorClass = chosen.iter().map(|&i| cycle.components[i].class).sum();
        if sum == *residual {
            return Ok(Some(chosen.len()));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    NonMoishezon,
    ExcludedH0Geq3,
    TypeI,
    TypeII,
    TypeIII,
}

impl Case {
    pub fn is_classified(self) -> bool {
        matches!(self, Case::TypeI | Case::TypeII | Case::TypeIII)
    }

    pub fn description(self) -> &'static str {
        match self {
            Case::NonMoishezon => "non-Moishezon",
            Case::ExcludedH0Geq3 => "excluded: h0(-K) >= 3",
            Case::TypeI => "birational",
            Case::TypeII => "double solid",
            Case::TypeIII => "conic bundle",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub plan: BlowupPlan,
    pub string: Vec<i64>,
    pub h0_antican: i64,
    pub h0_biantican: i64,
    /// `None` for cases outside the trichotomy.
    #[serde(rename = "h0_2F")]
    pub h0_2f: Option<i64>,
    pub movable_selfint: i64,
    /// `None` only inside an unrecognised-signature error.
    pub case: Option<Case>,
    pub k: usize,
}

/// Assigns the case from trusted h⁰ values and the movable self-intersection.
pub fn classify(plan: &BlowupPlan, h0_1: i64, h0_2: i64, m2: i64) -> Result<ClassificationReport> {
    let cycle = plan.realize()?;
    let mut report = ClassificationReport {
        plan: plan.clone(),
        string: cycle.string(),
        h0_antican: h0_1,
        h0_biantican: h0_2,
        h0_2f: None,
        movable_selfint: m2,
        case: None,
        k: cycle.half(),
    };
    let trivial_on_cycle = cycle
        .classes()
        .map(|c| lattice::adjunction_degree(&c))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|&deg| deg == 0);
    let case = if h0_1 >= 3 {
        Case::ExcludedH0Geq3
    } else if trivial_on_cycle {
        Case::NonMoishezon
    } else {
        match (h0_2, m2) {
            (5, 4) | (7, 6) => Case::TypeI,
            (3, 2) => Case::TypeII,
            (3, 0) => Case::TypeIII,
            _ => return Err(Error::UnrecognisedSignature(Box::new(report))),
        }
    };
    report.case = Some(case);
    if case.is_classified() {
        report.h0_2f = Some(h0_2 + 2);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{apply_step, initial_cycle, BlowupStep::*, NearPosition};

    fn run(steps: &[crate::cycle::BlowupStep]) -> AnticanonicalCycle {
        steps.iter().fold(initial_cycle(), |c, s| apply_step(&c, *s).unwrap())
    }

    fn bi(cycle: &AnticanonicalCycle) -> DivisorClass {
        DivisorClass::anticanonical(cycle.lattice_rank) * 2
    }

    // (-2,-1)x4: nodes at C1∩C2 and C2∩C1bar
    fn s1_k4() -> Vec<crate::cycle::BlowupStep> {
        vec![Node { target: 0 }, Node { target: 2 }]
    }

    #[test]
    fn alternating_three_one_fixed_part_and_genus() {
        let mut steps = s1_k4();
        steps.extend([SmoothPoint { target: 0 }, SmoothPoint { target: 2 }]);
        let c = run(&steps);
        assert_eq!(c.string(), vec![-3, -1, -3, -1, -3, -1, -3, -1]);
        let pr = peel(&bi(&c), &c).unwrap();
        assert_eq!(pr.multiplicities(8), vec![1, 0, 1, 0, 1, 0, 1, 0]);
        assert_eq!(pr.rounds.len(), 1);
        assert_eq!(movable_selfint(&pr), 4);
        let k = DivisorClass::canonical(8);
        let m = pr.movable;
        let twice_genus_term = m.square() + lattice::intersect(&m, &k).unwrap();
        assert_eq!(twice_genus_term / 2 + 1, 1);
        assert_eq!(h0_rule_on(2, &c).unwrap().value(), Some(5));
        assert_eq!(h0_rule_on(1, &c).unwrap().value(), Some(1));
    }

    #[test]
    fn pencil_case_peels_with_multiplicity_two() {
        // two points on the same (-1)-curve of (-2,-1)x4
        let c = run(&[Node { target: 0 }, Node { target: 0 }, SmoothPoint { target: 1 }, SmoothPoint { target: 1 }]);
        assert_eq!(c.string(), vec![-2, -3, -2, -1, -2, -3, -2, -1]);
        let pr = peel(&bi(&c), &c).unwrap();
        assert_eq!(pr.multiplicities(8), vec![1, 2, 1, 0, 1, 2, 1, 0]);
        assert_eq!(pr.rounds.len(), 3);
        assert_eq!(movable_selfint(&pr), 0);
        assert_eq!(pr.movable.divisibility(), 2);
        assert_eq!(
            h0_rule_on(2, &c).unwrap(),
            H0Rule::Exact { value: 3, strategy: RuleStrategy::Pencil }
        );
    }

    #[test]
    fn peel_is_idempotent_on_the_movable_part() {
        let c = run(&[Node { target: 0 }, Node { target: 0 }, Node { target: 0 }, SmoothPoint { target: 1 }]);
        let pr = peel(&bi(&c), &c).unwrap();
        let again = peel(&pr.movable, &c).unwrap();
        assert!(again.fixed.is_zero());
        assert!(again.rounds.is_empty());
        assert_eq!(pr.fixed + pr.movable, pr.input);
    }

    #[test]
    fn toric_three_one_string_has_seven_sections() {
        // (-3,-1)x6
        let c = run(&[Node { target: 0 }, Node { target: 0 }, Node { target: 0 }, Node { target: 2 }]);
        assert_eq!(crate::cycle::canonical_form(&c.string()), [-3, -1].repeat(6));
        let pr = peel(&bi(&c), &c).unwrap();
        assert_eq!(movable_selfint(&pr), 6);
        assert_eq!(
            h0_rule_on(2, &c).unwrap(),
            H0Rule::Exact { value: 7, strategy: RuleStrategy::ExactSequence }
        );
    }

    #[test]
    fn unsupported_multiple() {
        let c = run(&s1_k4());
        assert!(matches!(h0_rule_on(3, &c), Err(Error::UnsupportedMultiple(3))));
        assert!(matches!(h0_rule_on(0, &c), Err(Error::UnsupportedMultiple(0))));
    }

    #[test]
    fn all_minus_two_cycle_is_deferred_and_non_moishezon() {
        let steps = vec![
            SmoothPoint { target: 0 },
            InfinitelyNear { target: 0, position: NearPosition::CycleIntersection },
            SmoothPoint { target: 1 },
            InfinitelyNear { target: 2, position: NearPosition::CycleIntersection },
        ];
        let plan = BlowupPlan::new(steps, "all -2").unwrap();
        let c = plan.realize().unwrap();
        assert_eq!(c.string(), vec![-2; 4]);
        assert!(matches!(h0_rule_on(1, &c).unwrap(), H0Rule::Deferred { .. }));
        let r = classify(&plan, 1, 1, 0).unwrap();
        assert_eq!(r.case, Some(Case::NonMoishezon));
        assert_eq!(r.h0_2f, None);
    }

    #[test]
    fn classify_signatures() {
        let plan = BlowupPlan::new(
            vec![Node { target: 0 }, Node { target: 2 }, SmoothPoint { target: 0 }, SmoothPoint { target: 2 }],
            "alternating -3,-1",
        )
        .unwrap();
        let r = classify(&plan, 1, 5, 4).unwrap();
        assert_eq!(r.case, Some(Case::TypeI));
        assert_eq!(r.h0_2f, Some(7));
        assert_eq!(r.k, 4);
        assert_eq!(classify(&plan, 1, 3, 2).unwrap().case, Some(Case::TypeII));
        assert_eq!(classify(&plan, 1, 3, 0).unwrap().case, Some(Case::TypeIII));
        assert_eq!(classify(&plan, 3, 5, 4).unwrap().case, Some(Case::ExcludedH0Geq3));
        match classify(&plan, 1, 4, 4) {
            Err(Error::UnrecognisedSignature(report)) => {
                assert_eq!(report.h0_biantican, 4);
                assert_eq!(report.case, None);
            }
            other => panic!("expected an unrecognised signature, got {other:?}"),
        }
    }

    #[test]
    fn report_json_field_names() {
        let plan = BlowupPlan::new(
            vec![Node { target: 0 }, Node { target: 2 }, SmoothPoint { target: 0 }, SmoothPoint { target: 2 }],
            "alternating -3,-1",
        )
        .unwrap();
        let json = serde_json::to_value(classify(&plan, 1, 5, 4).unwrap()).unwrap();
        for key in ["plan", "string", "h0_antican", "h0_biantican", "h0_2F", "movable_selfint", "case", "k"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["case"], "TypeI");
    }
}
