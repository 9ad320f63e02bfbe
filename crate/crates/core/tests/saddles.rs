use std::collections::BTreeMap;

use conesurf::corpus;
use conesurf::saddles::{enumerate_saddles, spectrum_of, DEFAULT_UNFOLDING_BUDGET};
use conesurf::Vec2;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Primitive integer vectors of norm at most `l`, one per line through the origin.
fn primitive_lines(l: f64) -> Vec<(i64, i64)> {
    let n = l.floor() as i64;
    let mut out = Vec::new();
    for a in 0..=n {
        for b in -n..=n {
            if (a > 0 || b > 0) && gcd(a, b.abs()) == 1 && ((a * a + b * b) as f64).sqrt() <= l {
                out.push((a, b));
            }
        }
    }
    out
}

fn key(v: Vec2) -> (i64, i64) {
    let k = (v.x.round() as i64, v.y.round() as i64);
    assert!((v.x - k.0 as f64).abs() < 1e-9 && (v.y - k.1 as f64).abs() < 1e-9, "holonomy {v:?} is not integral");
    k
}

#[test]
fn reversal_symmetry_on_the_octagon() {
    let s = corpus::octagon();
    let list = enumerate_saddles(&s, None, 3.0, DEFAULT_UNFOLDING_BUDGET).unwrap();
    assert!(!list.is_empty());
    // one chart and translation gluings: reversal negates holonomy, and
    // parallel connections of equal holonomy come in equal numbers both ways
    let count = |h: Vec2| list.iter().filter(|d| (d.holonomy - h).norm() < 1e-9).count();
    for c in &list {
        assert_eq!(count(c.holonomy), count(-c.holonomy), "reversal of {:?}", c.holonomy);
    }
    let mut starts: Vec<i64> = list.iter().map(|c| (c.start_angle * 1e6).round() as i64).collect();
    starts.sort();
    starts.dedup();
    assert_eq!(starts.len(), list.len(), "two connections leave in the same direction");
}

#[test]
fn pillowcase_matches_lattice_lines() {
    // the pillowcase is the quotient of the plane by the lattice 2Z^2 and the
    // half-turns about integer points; cone points sit at the integer points
    let s = corpus::pillowcase();
    for l in [1.5, 4.0, 8.0] {
        let lines = primitive_lines(l);
        let mut expected: Vec<(i64, i64)> = lines.iter().map(|&(a, b)| (a, b.abs())).collect();
        expected.sort();
        for class in 0..4 {
            let list = enumerate_saddles(&s, Some(class), l, DEFAULT_UNFOLDING_BUDGET).unwrap();
            let mut got: Vec<(i64, i64)> = list
                .iter()
                .map(|c| {
                    let (a, b) = key(c.holonomy);
                    (a.abs(), b.abs())
                })
                .collect();
            got.sort();
            assert_eq!(got, expected, "class {class} at L = {l}");
            assert!(list.iter().all(|c| c.end != c.start && c.interior_hits.is_empty()));
        }
    }
}

#[test]
fn endpoint_pattern_on_the_pillowcase() {
    // a vector (a,b) joins two corners whose parities differ by (a mod 2, b mod 2)
    let s = corpus::pillowcase();
    let list = enumerate_saddles(&s, Some(0), 6.0, DEFAULT_UNFOLDING_BUDGET).unwrap();
    let mut by_parity: BTreeMap<(i64, i64), std::collections::BTreeSet<usize>> = BTreeMap::new();
    for c in &list {
        let (a, b) = key(c.holonomy);
        by_parity.entry((a.rem_euclid(2), b.rem_euclid(2))).or_default().insert(c.end);
    }
    assert_eq!(by_parity.len(), 3);
    let ends: std::collections::BTreeSet<usize> = by_parity.values().map(|e| {
        assert_eq!(e.len(), 1);
        *e.iter().next().unwrap()
    }).collect();
    assert_eq!(ends.len(), 3);
}

#[test]
fn lengths_are_sorted_and_bounded() {
    for (_, s) in corpus::named() {
        if s.singular_classes().next().is_none() {
            continue;
        }
        let list = enumerate_saddles(&s, None, 4.0, DEFAULT_UNFOLDING_BUDGET).unwrap();
        for c in &list {
            assert!(c.length <= 4.0 + 1e-9);
            assert!((c.holonomy.norm() - c.length).abs() < 1e-9);
            assert!((c.path.total_length - c.length).abs() < 1e-9);
        }
    }
}

#[test]
fn spectrum_gap_shrinks_on_marked_torus() {
    let s = corpus::marked_torus();
    let mut prev = f64::INFINITY;
    for l in [2.0, 5.0, 10.0, 20.0] {
        let list = enumerate_saddles(&s, None, l, DEFAULT_UNFOLDING_BUDGET).unwrap();
        let sp = spectrum_of(&list);
        assert!(sp.max_gap < prev);
        prev = sp.max_gap;
    }
    // the widest gap at L = 10 sits next to the horizontal, between (1,0) and (9,1)
    let sp = spectrum_of(&enumerate_saddles(&s, None, 10.0, DEFAULT_UNFOLDING_BUDGET).unwrap());
    assert!((sp.max_gap - (1.0f64 / 9.0).atan()).abs() < 1e-12);
}
