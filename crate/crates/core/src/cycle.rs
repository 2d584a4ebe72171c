//! The anticanonical cycle under iterated conjugate-pair blowups.
//!
//! The starting surface is CP¹×CP¹ with the 4-cycle `C₁ + C₂ + C̄₁ + C̄₂` of
//! classes `f₂, f₁, f₂, f₁`. Components are stored in cyclic order and the
//! conjugate of component `i` is always component `i + m/2 (mod m)`; every
//! blowup step preserves that layout. Step targets always name the
//! representative on the first half of the cycle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, DivisorClass, MAX_EXCEPTIONAL};

/// Number of conjugate-pair blowups taking CP¹×CP¹ to the surface S.
pub const PLAN_STEPS: usize = 4;

/// Identity of a curve that can appear on the cycle or carry a blown-up point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Curve {
    /// One of the four initial components, in cyclic order `C₁, C₂, C̄₁, C̄₂`.
    Initial(u8),
    /// The exceptional curve over the blown-up point with this index.
    Exceptional(usize),
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Initial(0) => write!(f, "C1"),
            Curve::Initial(1) => write!(f, "C2"),
            Curve::Initial(2) => write!(f, "C1bar"),
            Curve::Initial(3) => write!(f, "C2bar"),
            Curve::Initial(i) => write!(f, "C?{i}"),
            Curve::Exceptional(i) => write!(f, "E{}", i + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NearPosition {
    /// The point where the parent's exceptional curve meets the cycle.
    #[default]
    CycleIntersection,
    /// A general point of the parent's exceptional curve (off the cycle).
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    Node,
    SmoothPoint,
    InfinitelyNear,
}

impl StepKind {
    pub fn tag(self) -> &'static str {
        match self {
            StepKind::Node => "node",
            StepKind::SmoothPoint => "smooth_point",
            StepKind::InfinitelyNear => "infinitely_near",
        }
    }
}

/// One conjugate pair of blowups.
///
/// * `Node { target: i }` blows up the node between components `i` and `i+1`.
/// * `SmoothPoint { target: i }` blows up a general point of component `i`.
/// * `InfinitelyNear { target: j, .. }` blows up a point on the exceptional
///   curve of the earlier smooth-point step `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlowupStep {
    Node { target: usize },
    SmoothPoint { target: usize },
    InfinitelyNear {
        target: usize,
        #[serde(default)]
        position: NearPosition,
    },
}

impl BlowupStep {
    pub fn kind(&self) -> StepKind {
        match self {
            BlowupStep::Node { .. } => StepKind::Node,
            BlowupStep::SmoothPoint { .. } => StepKind::SmoothPoint,
            BlowupStep::InfinitelyNear { .. } => StepKind::InfinitelyNear,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupPlan {
    pub steps: Vec<BlowupStep>,
    #[serde(default)]
    pub label: String,
}

impl BlowupPlan {
    pub fn new(steps: Vec<BlowupStep>, label: impl Into<String>) -> Result<Self> {
        let plan = Self { steps, label: label.into() };
        plan.validate()?;
        Ok(plan)
    }

    /// Checks the step count and replays the plan.
    pub fn validate(&self) -> Result<()> {
        if self.steps.len() != PLAN_STEPS {
            return Err(Error::PlanLength(self.steps.len()));
        }
        self.realize().map(|_| ())
    }

    /// Final cycle of the plan.
    pub fn realize(&self) -> Result<AnticanonicalCycle> {
        self.steps
            .iter()
            .try_fold(initial_cycle(), |c, s| apply_step(&c, *s))
    }

    pub fn kind_counts(&self) -> KindCounts {
        let mut k = KindCounts::default();
        for s in &self.steps {
            match s.kind() {
                StepKind::Node => k.node += 1,
                StepKind::SmoothPoint => k.smooth_point += 1,
                StepKind::InfinitelyNear => k.infinitely_near += 1,
            }
        }
        k
    }
}

/// Multiset of step kinds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KindCounts {
    pub node: usize,
    pub smooth_point: usize,
    pub infinitely_near: usize,
}

impl fmt::Display for KindCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N{} S{} I{}", self.node, self.smooth_point, self.infinitely_near)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleComponent {
    pub class: DivisorClass,
    pub index: usize,
    pub conjugate: usize,
    pub curve: Curve,
}

/// An exceptional curve of a smooth-point blowup; never part of the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffCycleCurve {
    pub curve: Curve,
    pub class: DivisorClass,
}

/// Bookkeeping for one blown-up point (exceptional index = position).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub step: usize,
    pub kind: StepKind,
    /// Cycle component carrying a smooth or infinitely near point.
    pub on: Option<Curve>,
    /// Parent point of an infinitely near point.
    pub parent: Option<usize>,
    /// Set once an infinitely near point has been blown up on this one.
    pub has_child: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnticanonicalCycle {
    pub components: Vec<CycleComponent>,
    pub lattice_rank: usize,
    pub off_cycle: Vec<OffCycleCurve>,
    pub points: Vec<PointRecord>,
}

/// The 4-cycle `C₁ + C₂ + C̄₁ + C̄₂` on CP¹×CP¹.
pub fn initial_cycle() -> AnticanonicalCycle {
    let f1 = DivisorClass::from_bidegree(1, 0, 0);
    let f2 = DivisorClass::from_bidegree(0, 1, 0);
    let components = [f2, f1, f2, f1]
        .into_iter()
        .enumerate()
        .map(|(i, class)| CycleComponent {
            class,
            index: i,
            conjugate: (i + 2) % 4,
            curve: Curve::Initial(i as u8),
        })
        .collect();
    AnticanonicalCycle { components, lattice_rank: 0, off_cycle: Vec::new(), points: Vec::new() }
}

impl AnticanonicalCycle {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn half(&self) -> usize {
        self.components.len() / 2
    }

    pub fn steps_applied(&self) -> usize {
        self.points.len() / 2
    }

    pub fn classes(&self) -> impl Iterator<Item = DivisorClass> + '_ {
        self.components.iter().map(|c| c.class)
    }

    pub fn position(&self, curve: Curve) -> Option<usize> {
        self.components.iter().position(|c| c.curve == curve)
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        let m = self.len();
        i != j && ((i + 1) % m == j || (j + 1) % m == i)
    }

    /// Cyclic list of self-intersection numbers.
    pub fn string(&self) -> Vec<i64> {
        self.classes().map(|c| c.square()).collect()
    }

    pub fn canonical_string(&self) -> Vec<i64> {
        canonical_form(&self.string())
    }

    /// Per component: self-intersection before any smooth or infinitely near
    /// blowups, and the number of simple points and infinitely near pairs
    /// blown up on it.
    pub fn decorations(&self) -> Vec<Decoration> {
        let mut simple: BTreeMap<Curve, u8> = BTreeMap::new();
        let mut pairs: BTreeMap<Curve, u8> = BTreeMap::new();
        for p in &self.points {
            match (p.kind, p.on) {
                (StepKind::SmoothPoint, Some(c)) if p.has_child => *pairs.entry(c).or_default() += 1,
                (StepKind::SmoothPoint, Some(c)) => *simple.entry(c).or_default() += 1,
                _ => {}
            }
        }
        self.components
            .iter()
            .map(|c| {
                let s = simple.get(&c.curve).copied().unwrap_or(0);
                let p = pairs.get(&c.curve).copied().unwrap_or(0);
                Decoration {
                    toric_selfint: c.class.square() + i64::from(s) + 2 * i64::from(p),
                    simple: s,
                    pairs: p,
                }
            })
            .collect()
    }

    /// Dihedral-minimal decorated cycle; the isomorphism key of the
    /// configuration for general point positions.
    pub fn canonical_pattern(&self) -> TargetPattern {
        TargetPattern(canonical_form(&self.decorations()))
    }

    /// Checks every structural invariant of an anticanonical cycle.
    pub fn check_invariants(&self) -> Result<()> {
        let m = self.len();
        let bad = |reason: String| Error::InvalidStep { step: self.steps_applied(), reason };
        if m < 4 || m % 2 != 0 {
            return Err(bad(format!("cycle has {m} components")));
        }
        let total: DivisorClass = self.classes().sum();
        if total != DivisorClass::anticanonical(self.lattice_rank) {
            return Err(bad(format!("components sum to {total}, not -K")));
        }
        for (i, ci) in self.components.iter().enumerate() {
            if ci.index != i || ci.conjugate != (i + m / 2) % m {
                return Err(bad(format!("component {i} has broken indexing")));
            }
            lattice::adjunction_degree(&ci.class)?;
            for (j, cj) in self.components.iter().enumerate().skip(i + 1) {
                let expected = i64::from(self.are_adjacent(i, j));
                let got = lattice::intersect(&ci.class, &cj.class)?;
                if got != expected {
                    return Err(bad(format!("C{i}.C{j} = {got}, expected {expected}")));
                }
            }
        }
        Ok(())
    }
}

/// Blows up one conjugate pair of points and returns the new cycle.
pub fn apply_step(cycle: &AnticanonicalCycle, step: BlowupStep) -> Result<AnticanonicalCycle> {
    let j = cycle.steps_applied();
    let invalid = |reason: String| Error::InvalidStep { step: j, reason };
    if j >= PLAN_STEPS || cycle.lattice_rank + 2 > MAX_EXCEPTIONAL {
        return Err(invalid("all four blowup steps are already used".into()));
    }
    let rank = cycle.lattice_rank + 2;
    let (er, ec) = (2 * j, 2 * j + 1);
    let e_rep = DivisorClass::exceptional(er, rank);
    let e_conj = DivisorClass::exceptional(ec, rank);
    let h = cycle.half();

    let mut comps: Vec<(Curve, DivisorClass)> = cycle
        .components
        .iter()
        .map(|c| (c.curve, c.class.extend(rank)))
        .collect();
    let mut off_cycle: Vec<OffCycleCurve> = cycle
        .off_cycle
        .iter()
        .map(|c| OffCycleCurve { curve: c.curve, class: c.class.extend(rank) })
        .collect();
    let mut points = cycle.points.clone();

    match step {
        BlowupStep::Node { target } => {
            if target >= h {
                return Err(invalid(format!("node target {target} outside 0..{h}")));
            }
            let m = comps.len();
            comps[target].1 = comps[target].1 - e_rep;
            comps[(target + 1) % m].1 = comps[(target + 1) % m].1 - e_rep;
            comps[target + h].1 = comps[target + h].1 - e_conj;
            comps[(target + h + 1) % m].1 = comps[(target + h + 1) % m].1 - e_conj;
            // insert the conjugate first so the representative position stays valid
            comps.insert(target + h + 1, (Curve::Exceptional(ec), e_conj));
            comps.insert(target + 1, (Curve::Exceptional(er), e_rep));
            for _ in 0..2 {
                points.push(PointRecord { step: j, kind: StepKind::Node, on: None, parent: None, has_child: false });
            }
        }
        BlowupStep::SmoothPoint { target } => {
            if target >= h {
                return Err(invalid(format!("smooth-point target {target} outside 0..{h}")));
            }
            comps[target].1 = comps[target].1 - e_rep;
            comps[target + h].1 = comps[target + h].1 - e_conj;
            off_cycle.push(OffCycleCurve { curve: Curve::Exceptional(er), class: e_rep });
            off_cycle.push(OffCycleCurve { curve: Curve::Exceptional(ec), class: e_conj });
            for on in [comps[target].0, comps[target + h].0] {
                points.push(PointRecord { step: j, kind: StepKind::SmoothPoint, on: Some(on), parent: None, has_child: false });
            }
        }
        BlowupStep::InfinitelyNear { target, position } => {
            if target >= j {
                return Err(invalid(format!("infinitely near step refers to step {target}, not an earlier one")));
            }
            let parent_rec = &points[2 * target];
            match parent_rec.kind {
                StepKind::SmoothPoint => {}
                StepKind::InfinitelyNear => {
                    return Err(invalid(
                        "only first-order infinitely near points are supported; parent is itself infinitely near".into(),
                    ))
                }
                StepKind::Node => {
                    return Err(invalid(
                        "parent is a node blowup whose exceptional curve lies on the cycle; use a node or smooth-point step".into(),
                    ))
                }
            }
            if parent_rec.has_child {
                return Err(invalid(format!(
                    "step {target} already carries an infinitely near point; deeper towers are not supported"
                )));
            }
            if position == NearPosition::Generic {
                return Err(invalid(
                    "a general point of the exceptional curve is off the anticanonical cycle".into(),
                ));
            }
            for (pi, e) in [(2 * target, e_rep), (2 * target + 1, e_conj)] {
                let on = points[pi].on.expect("smooth point records its component");
                let idx = comps
                    .iter()
                    .position(|(c, _)| *c == on)
                    .expect("component of a smooth point stays on the cycle");
                comps[idx].1 = comps[idx].1 - e;
                let parent_curve = off_cycle
                    .iter_mut()
                    .find(|c| c.curve == Curve::Exceptional(pi))
                    .expect("smooth point has an off-cycle exceptional curve");
                parent_curve.class = parent_curve.class - e;
                points[pi].has_child = true;
            }
            off_cycle.push(OffCycleCurve { curve: Curve::Exceptional(er), class: e_rep });
            off_cycle.push(OffCycleCurve { curve: Curve::Exceptional(ec), class: e_conj });
            for pi in [2 * target, 2 * target + 1] {
                points.push(PointRecord {
                    step: j,
                    kind: StepKind::InfinitelyNear,
                    on: points[pi].on,
                    parent: Some(pi),
                    has_child: false,
                });
            }
        }
    }

    let m = comps.len();
    let components = comps
        .into_iter()
        .enumerate()
        .map(|(i, (curve, class))| CycleComponent { class, index: i, conjugate: (i + m / 2) % m, curve })
        .collect();
    let out = AnticanonicalCycle { components, lattice_rank: rank, off_cycle, points };
    out.check_invariants()?;
    Ok(out)
}

/// Lexicographically least rotation or reflection of a cyclic sequence.
pub fn canonical_form<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    let mut best: Option<Vec<T>> = None;
    for start in 0..n {
        for reflect in [false, true] {
            let cand: Vec<T> = (0..n)
                .map(|k| {
                    let i = if reflect { (start + n - k) % n } else { (start + k) % n };
                    seq[i].clone()
                })
                .collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub toric_selfint: i64,
    pub simple: u8,
    pub pairs: u8,
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.toric_selfint)?;
        for _ in 0..self.simple {
            write!(f, "p")?;
        }
        for _ in 0..self.pairs {
            write!(f, "q")?;
        }
        Ok(())
    }
}

/// Canonical decorated cycle. Rendered as its first half, since the second
/// half repeats it: `-2pp` is a toric (-2)-curve carrying two general
/// points, `-1q` a toric (-1)-curve carrying an infinitely near pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetPattern(pub Vec<Decoration>);

impl fmt::Display for TargetPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = &self.0[..self.0.len() / 2];
        let parts: Vec<String> = half.iter().map(|d| d.to_string()).collect();
        write!(f, "({})x2", parts.join(","))
    }
}

/// One isomorphism class of blowup configuration.
#[derive(Clone, Debug)]
pub struct PlanClass {
    /// First plan of the class in enumeration order.
    pub plan: BlowupPlan,
    pub canonical_string: Vec<i64>,
    pub kinds: KindCounts,
    pub pattern: TargetPattern,
    /// Number of raw plans that fell into this class.
    pub multiplicity: usize,
    /// Another class has the same canonical string.
    pub string_collision: bool,
}

impl PlanClass {
    pub fn k(&self) -> usize {
        self.canonical_string.len() / 2
    }
}

pub fn format_string(s: &[i64]) -> String {
    s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// All four-step plans up to isomorphism, sorted by canonical string and
/// then by pattern.
pub fn enumerate_classes() -> Vec<PlanClass> {
    let mut found: BTreeMap<(Vec<i64>, KindCounts, TargetPattern), (BlowupPlan, usize)> = BTreeMap::new();
    let mut prefix = Vec::with_capacity(PLAN_STEPS);
    extend_plans(&initial_cycle(), &mut prefix, &mut |steps, cycle| {
        let kinds = BlowupPlan { steps: steps.to_vec(), label: String::new() }.kind_counts();
        let key = (cycle.canonical_string(), kinds, cycle.canonical_pattern());
        found
            .entry(key)
            .and_modify(|(_, n)| *n += 1)
            .or_insert_with(|| (BlowupPlan { steps: steps.to_vec(), label: String::new() }, 1));
    });

    let mut per_string: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for (s, _, _) in found.keys() {
        *per_string.entry(s.clone()).or_default() += 1;
    }
    found
        .into_iter()
        .map(|((canonical_string, kinds, pattern), (mut plan, multiplicity))| {
            plan.label = format!("k={} {}", canonical_string.len() / 2, pattern);
            let string_collision = per_string[&canonical_string] > 1;
            PlanClass { plan, canonical_string, kinds, pattern, multiplicity, string_collision }
        })
        .collect()
}

pub fn enumerate_plans() -> Vec<BlowupPlan> {
    enumerate_classes().into_iter().map(|c| c.plan).collect()
}

/// Every valid step at the current stage, in a fixed order.
pub fn candidate_steps(cycle: &AnticanonicalCycle) -> Vec<BlowupStep> {
    let h = cycle.half();
    let mut out: Vec<BlowupStep> = (0..h).map(|target| BlowupStep::Node { target }).collect();
    out.extend((0..h).map(|target| BlowupStep::SmoothPoint { target }));
    let parents: BTreeSet<usize> = cycle
        .points
        .iter()
        .step_by(2)
        .filter(|p| p.kind == StepKind::SmoothPoint && !p.has_child)
        .map(|p| p.step)
        .collect();
    out.extend(parents.into_iter().map(|target| BlowupStep::InfinitelyNear {
        target,
        position: NearPosition::CycleIntersection,
    }));
    out
}

fn extend_plans(
    cycle: &AnticanonicalCycle,
    prefix: &mut Vec<BlowupStep>,
    visit: &mut dyn FnMut(&[BlowupStep], &AnticanonicalCycle),
) {
    if prefix.len() == PLAN_STEPS {
        visit(prefix, cycle);
        return;
    }
    for step in candidate_steps(cycle) {
        let next = apply_step(cycle, step).expect("candidate steps are valid by construction");
        prefix.push(step);
        extend_plans(&next, prefix, visit);
        prefix.pop();
    }
}

/// Number of raw (non-deduplicated) four-step plans.
pub fn raw_plan_count() -> usize {
    let mut n = 0;
    extend_plans(&initial_cycle(), &mut Vec::new(), &mut |_, _| n += 1);
    n
}
