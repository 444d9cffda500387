//! How often a sawtooth of frequency at most `F` realizes a crossing pattern
//! on arcs that passed the independence check.

use billiard_knots::braid::Sign;
use billiard_knots::cli::presets::{preset, PRESET_NAMES};
use billiard_knots::height::{search_heights, HeightProblem, DEFAULT_MARGIN};
use billiard_knots::invariants::certify::first_over_from_signs;
use billiard_knots::pipeline::Options;
use billiard_knots::realize;

const LEVELS: [u64; 6] = [1, 10, 100, 1_000, 10_000, 100_000];

fn fractions(problems: &[HeightProblem]) -> Vec<f64> {
    LEVELS
        .iter()
        .map(|&level| {
            let solved = problems
                .iter()
                .filter(|p| match search_heights(p, level, DEFAULT_MARGIN) {
                    Ok(h) => {
                        assert!(p.satisfied_by(&h, DEFAULT_MARGIN));
                        assert!(h.iter().all(|s| s.f <= level));
                        true
                    }
                    Err(_) => false,
                })
                .count();
            solved as f64 / problems.len() as f64
        })
        .collect()
}

#[test]
fn preset_patterns_reach_full_density() {
    let problems: Vec<HeightProblem> = PRESET_NAMES
        .iter()
        .map(|name| {
            let r = realize(&preset(name).unwrap(), &Options::default()).unwrap();
            assert!(r.independence.pass);
            HeightProblem::from_table(&r.polygon.arc_length_table(), &r.first_over)
        })
        .collect();
    let fr = fractions(&problems);
    assert!(fr.windows(2).all(|w| w[0] <= w[1]), "{fr:?}");
    assert_eq!(*fr.last().unwrap(), 1.0, "{fr:?}");
}

#[test]
fn every_sign_pattern_on_the_pentagram_is_reachable() {
    let r = realize(&preset("torus-2-5").unwrap(), &Options::default()).unwrap();
    let arcs = r.polygon.arc_length_table();
    let n = r.star.crossings().len();
    let problems: Vec<HeightProblem> = (0..1u32 << n)
        .map(|bits| {
            let signs: Vec<Sign> =
                (0..n).map(|i| if bits >> i & 1 == 1 { Sign::Positive } else { Sign::Negative }).collect();
            HeightProblem::from_table(&arcs, &first_over_from_signs(&r.polygon, &signs))
        })
        .collect();
    let fr = fractions(&problems);
    assert!(fr.windows(2).all(|w| w[0] <= w[1]), "{fr:?}");
    assert_eq!(*fr.last().unwrap(), 1.0, "{fr:?}");
}
