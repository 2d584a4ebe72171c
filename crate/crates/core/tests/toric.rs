//! Node-only plans give toric surfaces. Here they are rebuilt from their
//! fans, and section counts come from lattice points of the polygon.

use anticanon::cycle::{canonical_form, enumerate_classes, BlowupPlan, BlowupStep};
use anticanon::oracle::{certified_h0, h0_oracle, instantiate};

/// Rays in cyclic order, one per cycle component.
fn fan(plan: &BlowupPlan) -> Vec<(i64, i64)> {
    let mut rays = vec![(1, 0), (0, 1), (-1, 0), (0, -1)];
    for step in &plan.steps {
        let BlowupStep::Node { target } = *step else {
            panic!("toric fans only cover node steps");
        };
        let h = rays.len() / 2;
        let m = rays.len();
        let sum = |i: usize| {
            let (a, b) = (rays[i % m], rays[(i + 1) % m]);
            (a.0 + b.0, a.1 + b.1)
        };
        let (rep, conj) = (sum(target), sum(target + h));
        rays.insert(target + h + 1, conj);
        rays.insert(target + 1, rep);
    }
    rays
}

/// `v_{i-1} + v_{i+1} = -(C_i)² v_i`.
fn self_intersections(rays: &[(i64, i64)]) -> Vec<i64> {
    let m = rays.len();
    (0..m)
        .map(|i| {
            let (p, v, n) = (rays[(i + m - 1) % m], rays[i], rays[(i + 1) % m]);
            let s = (p.0 + n.0, p.1 + n.1);
            let k = if v.0 != 0 { s.0 / v.0 } else { s.1 / v.1 };
            assert_eq!((k * v.0, k * v.1), s, "rays do not form a smooth complete fan");
            -k
        })
        .collect()
}

/// Sections of `d·(−K)`: lattice points `u` with `<u, v> >= -d` for all rays.
fn lattice_points(rays: &[(i64, i64)], d: i64) -> usize {
    let mut n = 0;
    for x in -d..=d {
        for y in -d..=d {
            if rays.iter().all(|v| x * v.0 + y * v.1 >= -d) {
                n += 1;
            }
        }
    }
    n
}

fn toric_plans() -> Vec<BlowupPlan> {
    enumerate_classes()
        .into_iter()
        .filter(|c| c.kinds.node == 4)
        .map(|c| c.plan)
        .collect()
}

#[test]
fn fan_strings_match_the_cycle_model() {
    for plan in toric_plans() {
        let rays = fan(&plan);
        let cycle = plan.realize().unwrap();
        assert_eq!(self_intersections(&rays), cycle.string(), "{}", plan.label);
    }
}

#[test]
fn fan_oracle_reproduces_the_three_toric_strings() {
    let mut strings: Vec<Vec<i64>> = toric_plans()
        .iter()
        .map(|p| canonical_form(&self_intersections(&fan(p))))
        .collect();
    strings.sort();
    let mut expected = vec![
        canonical_form(&[-4, -1, -2, -2, -2, -1].repeat(2)),
        canonical_form(&[-3, -2, -1].repeat(4)),
        canonical_form(&[-3, -1].repeat(6)),
    ];
    expected.sort();
    assert_eq!(strings, expected);
}

#[test]
fn interpolation_agrees_with_lattice_points() {
    for plan in toric_plans() {
        let rays = fan(&plan);
        for d in 1..=2u32 {
            let expected = lattice_points(&rays, d as i64);
            let pts = instantiate(&plan, 1).unwrap();
            assert_eq!(h0_oracle(d, &pts).unwrap(), expected, "{} d={d}", plan.label);
            assert_eq!(certified_h0(&plan, d, &[1, 2, 3]).unwrap().value, expected);
        }
    }
}

#[test]
fn toric_counts_for_every_node_prefix() {
    // all node-only sequences, including ones that revisit an isomorphism class
    fn walk(steps: &mut Vec<BlowupStep>, out: &mut usize) {
        if steps.len() == 4 {
            let plan = BlowupPlan::new(steps.clone(), "walk").unwrap();
            let rays = fan(&plan);
            let pts = instantiate(&plan, 1).unwrap();
            assert_eq!(h0_oracle(1, &pts).unwrap(), lattice_points(&rays, 1));
            *out += 1;
            return;
        }
        let h = 2 + steps.len();
        for target in 0..h {
            steps.push(BlowupStep::Node { target });
            walk(steps, out);
            steps.pop();
        }
    }
    let mut n = 0;
    walk(&mut Vec::new(), &mut n);
    assert_eq!(n, 2 * 3 * 4 * 5);
}
