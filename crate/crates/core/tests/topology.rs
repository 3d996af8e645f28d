mod common;

use bing_core::bing_topology::{
    affine_map, affine_nbhd, example1_audit, example1_family, example2_window, nbhd_closure_contains, nbhd_contains,
    point_from_projections, proj_minus, proj_plus, ritter_regular_nbhd_contains, separation_check,
    theta_discrete_finite, BasicNbhd, Point,
};
use bing_core::exact_algebra::rational::rationals_of_height;
use bing_core::exact_algebra::{qf3_conjugate, Qf3};
use bing_core::Qf3Value;
use common::{p, pt, q, rand_nonneg, rand_point, rng};
use num_bigint::BigInt;
use rand::Rng;

fn n(center: &str, r: (i64, i64)) -> BasicNbhd {
    BasicNbhd::new(p(center), q(r.0, r.1)).unwrap()
}

fn qv(a: (i64, i64), b: (i64, i64)) -> Qf3Value {
    Qf3::new(q(a.0, a.1), q(b.0, b.1))
}

#[test]
fn projections() {
    assert_eq!(proj_minus(&p("0;0")), qv((0, 1), (0, 1)));
    assert_eq!(proj_plus(&p("0;0")), qv((0, 1), (0, 1)));
    let z = p("1/2;1/3");
    assert_eq!(proj_minus(&z), qv((1, 2), (-1, 3)));
    assert_eq!(proj_plus(&z), qv((1, 2), (1, 3)));
    let b = p("-7/5;0");
    assert_eq!(proj_minus(&b), proj_plus(&b));
    assert!(Point::new(q(0, 1), q(-1, 2)).is_err());
}

#[test]
fn projections_invert() {
    let s = qv((0, 1), (-1, 1));
    let t = qv((0, 1), (1, 1));
    assert_eq!(point_from_projections(&s, &t).unwrap(), Some(p("0;1")));
    assert_eq!(point_from_projections(&qv((0, 1), (0, 1)), &qv((1, 1), (0, 1))).unwrap(), None);
    let c = qv((5, 3), (0, 1));
    assert_eq!(point_from_projections(&c, &c).unwrap(), Some(p("5/3;0")));
    assert!(point_from_projections(&t, &s).is_err());
}

#[test]
fn neighbourhood_membership() {
    assert!(nbhd_contains(&n("0;1", (1, 1)), &p("0;1")));
    assert!(!nbhd_contains(&n("0;1", (1, 1)), &p("0;0")));
    assert!(nbhd_contains(&n("0;1", (2, 1)), &p("-3/2;0")));
    assert!(BasicNbhd::new(p("0;0"), q(0, 1)).is_err());
}

#[test]
fn closure_membership() {
    assert!(nbhd_closure_contains(&n("3;4", (1, 9)), &p("3;4")));
    assert!(!nbhd_closure_contains(&n("0;0", (1, 1)), &p("0;1")));
    assert!(nbhd_closure_contains(&n("0;0", (2, 1)), &p("0;1")));
}

#[test]
fn regular_interior_membership() {
    assert!(ritter_regular_nbhd_contains(&n("2;1", (1, 5)), &p("2;1")));
    assert!(ritter_regular_nbhd_contains(&n("0;0", (2, 1)), &p("0;1")));
    assert!(!ritter_regular_nbhd_contains(&n("0;0", (1, 1)), &p("0;1")));
}

#[test]
fn affine_examples() {
    assert_eq!(affine_map(&q(1, 1), &q(0, 1), &p("3;7")).unwrap(), p("3;7"));
    assert_eq!(affine_map(&q(2, 1), &q(1, 1), &p("1;1")).unwrap(), p("3;2"));
    assert!(affine_map(&q(-1, 1), &q(0, 1), &p("1;1")).is_err());
    let mut r = rng(3);
    let (a, b) = (q(2, 1), q(1, 1));
    for _ in 0..300 {
        let z = rand_point(&mut r, 9, 0.3);
        let w = rand_point(&mut r, 9, 0.7);
        let nb = BasicNbhd::new(z.clone(), q(r.gen_range(1..9), r.gen_range(1..9))).unwrap();
        let image = affine_nbhd(&a, &b, &nb).unwrap();
        assert_eq!(image.radius(), &(nb.radius() * &a));
        let fw = affine_map(&a, &b, &w).unwrap();
        assert_eq!(nbhd_contains(&nb, &w), nbhd_contains(&image, &fw));
    }
}

#[test]
fn theta_witnesses() {
    let w = theta_discrete_finite(&[]);
    assert!(w.discrete && w.min_gap.is_none());
    let w = theta_discrete_finite(&[p("0;0"), p("1;0")]);
    assert_eq!(w.min_gap, Some(qv((1, 1), (0, 1))));
    let pts = [p("0;0"), p("0;1")];
    let w = theta_discrete_finite(&pts);
    assert_eq!(w.min_gap, Some(qv((0, 1), (1, 1))));
    assert!(w.separates(&pts).is_ok());
}

#[test]
fn example_one() {
    assert_eq!(example1_family(1).unwrap(), p("0;1"));
    assert_eq!(example1_family(5).unwrap(), p("0;1/5"));
    assert!(example1_family(0).is_err());
    assert_eq!(example1_audit(&q(2, 1)).unwrap(), BigInt::from(1));
    assert_eq!(example1_audit(&q(1, 2)).unwrap(), BigInt::from(4));
    let mut last = BigInt::from(0);
    for t in 0..12 {
        let eps = q(1, 1 << t);
        let k = example1_audit(&eps).unwrap();
        assert!(k >= last);
        last = k.clone();
        let origin = BasicNbhd::new(p("0;0"), eps).unwrap();
        let k: u64 = k.try_into().unwrap();
        for j in k..k + 20 {
            assert!(nbhd_closure_contains(&origin, &example1_family(j).unwrap()));
        }
        if k > 1 {
            assert!(!nbhd_closure_contains(&origin, &example1_family(k - 1).unwrap()));
        }
    }
}

#[test]
fn example_two_window() {
    let window = example2_window(-5, 5);
    assert_eq!(window.len(), 11);
    assert!(separation_check(&window, &q(1, 3)).is_ok());
    assert_eq!(theta_discrete_finite(&window).radius, Some(q(1, 3)));
    // the Example 1 family is caught twice by every closure at the origin
    let fam: Vec<Point> = (1..40).map(|k| example1_family(k).unwrap()).collect();
    assert!(separation_check(&[vec![p("0;0")], fam].concat(), &q(1, 3)).is_err());
}

#[test]
fn projections_are_disjoint_up_to_height_five() {
    let mut xs = Vec::new();
    for h in 1..=5 {
        xs.extend(rationals_of_height(h));
    }
    let ys: Vec<_> = xs.iter().filter(|y| **y >= q(0, 1)).cloned().collect();
    let mut seen = std::collections::HashMap::new();
    for x in &xs {
        for y in &ys {
            let z = pt(x.clone(), y.clone());
            assert_eq!(qf3_conjugate(&proj_minus(&z)), proj_plus(&z));
            assert_eq!(point_from_projections(&z.minus(), &z.plus()).unwrap(), Some(z.clone()));
            for v in [z.minus(), z.plus()] {
                if let Some(other) = seen.insert(v, z.clone()) {
                    assert_eq!(other, z);
                }
            }
        }
    }
}

#[test]
fn containment_chain_and_monotonicity() {
    let mut r = rng(11);
    for _ in 0..500 {
        let z = rand_point(&mut r, 7, 0.3);
        let b = rand_point(&mut r, 7, 0.5);
        let e = rand_nonneg(&mut r, 6) + q(1, 8);
        let nb = BasicNbhd::new(z.clone(), e.clone()).unwrap();
        let wider = BasicNbhd::new(z, &e + rand_nonneg(&mut r, 4)).unwrap();
        let inside = nbhd_contains(&nb, &b);
        let regular = ritter_regular_nbhd_contains(&nb, &b);
        let closure = nbhd_closure_contains(&nb, &b);
        assert!(!inside || regular);
        assert!(!regular || closure);
        assert!(!closure || nbhd_closure_contains(&wider, &b));
    }
}
