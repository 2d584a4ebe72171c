use anticanon::cycle::{apply_step, candidate_steps, initial_cycle, AnticanonicalCycle, BlowupPlan, BlowupStep};
use anticanon::lattice::{self, chi, DivisorClass};
use anticanon::linsys::{h0_rule_on, peel};
use anticanon::oracle::{constraint_matrix, h0_oracle, instantiate};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// A random valid plan, built by picking among the candidate steps.
fn plan_strategy() -> impl Strategy<Value = BlowupPlan> {
    proptest::collection::vec(any::<prop::sample::Index>(), 4).prop_map(|picks| {
        let mut cycle = initial_cycle();
        let mut steps = Vec::new();
        for pick in picks {
            let options = candidate_steps(&cycle);
            let step = options[pick.index(options.len())];
            cycle = apply_step(&cycle, step).unwrap();
            steps.push(step);
        }
        BlowupPlan::new(steps, "random").unwrap()
    })
}

fn class_strategy(rank: usize) -> impl Strategy<Value = DivisorClass> {
    (-6i64..=6, -6i64..=6, proptest::collection::vec(-3i64..=3, rank)).prop_map(move |(a, b, ms)| {
        let mut d = DivisorClass::from_bidegree(a, b, rank);
        d.m[..rank].copy_from_slice(&ms);
        d
    })
}

fn prefixes(plan: &BlowupPlan) -> Vec<(Option<BlowupStep>, AnticanonicalCycle)> {
    let mut out = vec![(None, initial_cycle())];
    for s in &plan.steps {
        let next = apply_step(&out.last().unwrap().1, *s).unwrap();
        out.push((Some(*s), next));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycle_invariants_hold_after_every_step(plan in plan_strategy()) {
        let stages = prefixes(&plan);
        for w in stages.windows(2) {
            let (before, (step, after)) = (&w[0].1, (&w[1].0, &w[1].1));
            let grew = after.len() - before.len();
            match step.unwrap() {
                BlowupStep::Node { .. } => prop_assert_eq!(grew, 2),
                _ => prop_assert_eq!(grew, 0),
            }
        }
        for (_, c) in &stages {
            c.check_invariants().unwrap();
            let total: DivisorClass = c.classes().sum();
            prop_assert_eq!(total, DivisorClass::anticanonical(c.lattice_rank));
            let m = c.len();
            prop_assert!(m % 2 == 0 && (4..=12).contains(&m));
            for comp in &c.components {
                prop_assert_ne!(comp.conjugate, comp.index);
                prop_assert_eq!(c.components[comp.conjugate].conjugate, comp.index);
                prop_assert_eq!(
                    c.components[comp.conjugate].class.square(),
                    comp.class.square()
                );
            }
        }
        let last = &stages.last().unwrap().1;
        let degree_sum: i64 = last
            .classes()
            .map(|c| lattice::adjunction_degree(&c).unwrap())
            .sum();
        prop_assert_eq!(degree_sum, DivisorClass::canonical(8).square());
        prop_assert_eq!(degree_sum, 0);
    }

    #[test]
    fn peeling_is_exact_and_idempotent(plan in plan_strategy(), d in 1i64..=3) {
        let c = plan.realize().unwrap();
        let input = DivisorClass::anticanonical(8) * d;
        let pr = peel(&input, &c).unwrap();
        prop_assert_eq!(pr.fixed + pr.movable, input);
        for comp in &c.components {
            prop_assert!(lattice::intersect(&pr.movable, &comp.class).unwrap() >= 0);
        }
        let again = peel(&pr.movable, &c).unwrap();
        prop_assert!(again.fixed.is_zero());
        prop_assert_eq!(again.movable, pr.movable);
    }

    #[test]
    fn riemann_roch_is_serre_symmetric(d in class_strategy(8)) {
        let k = DivisorClass::canonical(8);
        let lhs = chi(&d) + chi(&(k - d));
        let rhs = lattice::intersect(&d, &(d - k)).unwrap() + 2 * chi(&DivisorClass::zero(8));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_is_symmetric(x in class_strategy(8), y in class_strategy(8)) {
        prop_assert_eq!(lattice::intersect(&x, &y).unwrap(), lattice::intersect(&y, &x).unwrap());
    }

    #[test]
    fn oracle_values_respect_riemann_roch(plan in plan_strategy(), seed in 1u64..1000) {
        let pts = instantiate(&plan, seed).unwrap();
        for d in 1..=2u32 {
            let h0 = h0_oracle(d, &pts).unwrap() as i64;
            let lower = chi(&(DivisorClass::anticanonical(8) * d as i64));
            prop_assert!(h0 >= lower && lower == 1);
        }
    }

    #[test]
    fn adding_points_only_cuts_sections(plan in plan_strategy(), seed in 1u64..1000) {
        let pts = instantiate(&plan, seed).unwrap();
        for d in 1..=2u32 {
            let mut prev = (2 * d as usize + 1).pow(2);
            for k in 1..=pts.len() {
                let m = constraint_matrix(d, &pts[..k]).unwrap();
                let added = m.rows().len() - constraint_matrix(d, &pts[..k - 1]).unwrap().rows().len();
                let now = m.nullity();
                prop_assert!(now <= prev);
                prop_assert!(prev - now <= added);
                prev = now;
            }
        }
    }

    #[test]
    fn rule_never_disagrees_with_the_oracle(plan in plan_strategy()) {
        let c = plan.realize().unwrap();
        let pts = instantiate(&plan, 11).unwrap();
        for d in 1..=2 {
            if let Some(v) = h0_rule_on(d, &c).unwrap().value() {
                prop_assert_eq!(v, h0_oracle(d as u32, &pts).unwrap() as i64);
            }
        }
    }
}

/// Inertia of a symmetric rational matrix by symmetric elimination.
fn inertia(g: &[Vec<i64>]) -> (usize, usize) {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            // pair with a later index to create a nonzero diagonal entry
            let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) else {
                k += 1;
                continue;
            };
            for i in 0..n {
                let v = a[j][i].clone();
                a[k][i] += v;
            }
            for i in 0..n {
                let v = a[i][j].clone();
                a[i][k] += v;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
        }
        k += 1;
    }
    (pos, neg)
}

#[test]
fn gram_matrix_is_hyperbolic() {
    for rank in 0..=8 {
        let g = lattice::gram_matrix(rank);
        assert_eq!(inertia(&g), (1, rank + 1), "rank {rank}");
    }
}
