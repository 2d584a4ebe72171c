//! Bi-anticanonical images of a few surfaces, plus a specialisation check.

use anticanon::cycle::{BlowupPlan, BlowupStep};
use anticanon::oracle::instance::{free_parameter_count, FixedParameters};
use anticanon::oracle::{h0_oracle, image_degree, image_dimension, image_quadric_count, instantiate, instantiate_with};
use num_rational::BigRational;

use BlowupStep::{Node, SmoothPoint};

const SAMPLES: usize = 200;

fn plan(steps: [BlowupStep; 4]) -> BlowupPlan {
    BlowupPlan::new(steps.to_vec(), "images").unwrap()
}

fn quartic_surfaces() -> Vec<BlowupPlan> {
    vec![
        plan([Node { target: 0 }, Node { target: 0 }, Node { target: 0 }, Node { target: 1 }]),
        plan([Node { target: 0 }, Node { target: 0 }, Node { target: 0 }, SmoothPoint { target: 2 }]),
        plan([Node { target: 0 }, Node { target: 0 }, SmoothPoint { target: 0 }, SmoothPoint { target: 2 }]),
    ]
}

#[test]
fn five_section_surfaces_are_quartics_on_two_quadrics() {
    for p in quartic_surfaces() {
        let pts = instantiate(&p, 1).unwrap();
        assert_eq!(h0_oracle(2, &pts).unwrap(), 5);
        assert_eq!(image_dimension(&pts, 2).unwrap(), 2);
        assert_eq!(image_degree(&pts, 2, SAMPLES).unwrap(), 4);
        assert_eq!(image_quadric_count(&pts, 2, SAMPLES).unwrap(), 2);
    }
}

#[test]
fn pencil_surface_maps_onto_a_conic() {
    let p = plan([Node { target: 0 }, Node { target: 0 }, SmoothPoint { target: 1 }, SmoothPoint { target: 1 }]);
    let pts = instantiate(&p, 1).unwrap();
    assert_eq!(image_dimension(&pts, 2).unwrap(), 1);
    assert_eq!(image_degree(&pts, 2, SAMPLES).unwrap(), 2);
    assert_eq!(image_quadric_count(&pts, 2, SAMPLES).unwrap(), 1);
}

#[test]
fn double_cover_surfaces_fill_the_plane() {
    let p = plan([Node { target: 0 }, Node { target: 0 }, Node { target: 0 }, SmoothPoint { target: 1 }]);
    let pts = instantiate(&p, 1).unwrap();
    assert_eq!(image_dimension(&pts, 2).unwrap(), 2);
    assert_eq!(image_quadric_count(&pts, 2, SAMPLES).unwrap(), 0);
}

#[test]
fn special_position_never_lowers_h0() {
    let p = plan([Node { target: 0 }, Node { target: 0 }, SmoothPoint { target: 0 }, SmoothPoint { target: 2 }]);
    assert_eq!(free_parameter_count(&p), 4);
    let generic: Vec<usize> = (1..=2).map(|d| h0_oracle(d, &instantiate(&p, 1).unwrap()).unwrap()).collect();
    let q = |n: i64| BigRational::from_integer(n.into());
    // b' = a'·b / a
    let special = [vec![q(2), q(3), q(4), q(6)], vec![q(2), q(2), q(2), q(2)], vec![q(1), q(-1), q(1), q(-1)]];
    for params in special {
        let pts = instantiate_with(&p, &mut FixedParameters(params.clone().into_iter())).unwrap();
        for d in 1..=2u32 {
            let v = h0_oracle(d, &pts).unwrap();
            let shown: Vec<String> = params.iter().map(|x| x.to_string()).collect();
            println!("params [{}] d={d}: {v}, generic {}", shown.join(", "), generic[d as usize - 1]);
            assert!(v >= generic[d as usize - 1]);
        }
    }
}
