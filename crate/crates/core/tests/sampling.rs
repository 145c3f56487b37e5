use std::collections::HashMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use permlab::exact::event_prob;
use permlab::oracle::avoiders_312;
use permlab::perm::EventSpec;
use permlab::sampler::{estimate_event, heatmap, sample_many};
use permlab::Execution;

fn chi_square_p(n: usize, samples: usize, seed: u64) -> f64 {
    let cells = avoiders_312(n).unwrap();
    let mut counts: HashMap<Vec<usize>, u64> = cells.iter().map(|p| (p.values().to_vec(), 0)).collect();
    for p in sample_many(n, samples, seed, Execution::default()).unwrap() {
        *counts.get_mut(p.values()).expect("sample is a 312-avoider") += 1;
    }
    let e = samples as f64 / cells.len() as f64;
    let stat: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
    ChiSquared::new((cells.len() - 1) as f64).unwrap().sf(stat)
}

#[test]
fn uniform_on_six() {
    assert!(chi_square_p(6, 132 * 500, 41) > 1e-3);
}

#[test]
fn output_independent_of_workers() {
    let spec = EventSpec::new(vec![(12, 5)]).unwrap();
    let base = estimate_event(20, &spec, 10_000, 3, Execution::Sequential).unwrap();
    for w in [Some(2), Some(3), None] {
        let exec = Execution::with_workers(w).unwrap();
        assert_eq!(estimate_event(20, &spec, 10_000, 3, exec).unwrap(), base);
        assert_eq!(
            sample_many(15, 9_000, 8, exec).unwrap(),
            sample_many(15, 9_000, 8, Execution::Sequential).unwrap()
        );
        assert_eq!(
            heatmap(50, 5_000, 8, 10, exec).unwrap(),
            heatmap(50, 5_000, 8, 10, Execution::Sequential).unwrap()
        );
    }
}

#[test]
fn impossible_event_never_seen() {
    // j2 < i1 + 1 for an increasing pair
    let spec = EventSpec::new(vec![(5, 2), (8, 4)]).unwrap();
    let e = estimate_event(10, &spec, 20_000, 1, Execution::default()).unwrap();
    assert_eq!(e.hits, 0);
    assert_eq!(e.estimate, 0.0);
}

#[test]
fn estimates_concentrate() {
    let spec = EventSpec::new(vec![(7, 3)]).unwrap();
    let p = event_prob(10, &spec).unwrap().to_f64();
    let inside = (0..100)
        .filter(|&seed| {
            let e = estimate_event(10, &spec, 2_000, 1000 + seed, Execution::default()).unwrap();
            (e.estimate - p).abs() <= 4.0 * e.stderr
        })
        .count();
    assert!(inside >= 99, "{inside} of 100 within 4 stderr");
}
