use permlab::corner::{
    chain_exact_corner_prob, chain_limit_prob, marginal_tail, sample_corner_walk, theta_limit,
    theta_limit_with, CornerChain, CornerEvent, CornerPoint,
};
use permlab::exact::count_one_point;
use permlab::{catalan, rho, ExactProb, Error};

fn pt(a: i64, b: i64) -> CornerPoint {
    CornerPoint::new(-a, b).unwrap()
}

#[test]
fn theta_on_chains_is_chain_limit() {
    for incs in [vec![(1, 1)], vec![(1, 2), (4, 2), (2, 3)], vec![(2, 2), (1, 1)]] {
        let chain = CornerChain::new(incs).unwrap();
        let ev = CornerEvent::new(chain.points(), vec![]).unwrap();
        assert_eq!(theta_limit(&ev).unwrap(), chain_limit_prob(&chain));
        assert!(chain_exact_corner_prob(&chain) <= theta_limit(&ev).unwrap());
    }
}

#[test]
fn theta_monotone_in_zeros() {
    let ones = vec![pt(2, 1)];
    let candidates = [pt(1, 1), pt(3, 2), pt(1, 3), pt(4, 4), pt(2, 2), pt(5, 1)];
    let mut zeros = Vec::new();
    let mut prev = theta_limit(&CornerEvent::new(ones.clone(), vec![]).unwrap()).unwrap();
    for z in candidates {
        zeros.push(z);
        let cur = theta_limit(&CornerEvent::new(ones.clone(), zeros.clone()).unwrap()).unwrap();
        assert!(cur <= prev, "adding {z} raised theta");
        prev = cur;
    }
}

#[test]
fn theta_zero_set_is_complement() {
    let q = pt(2, 3);
    let one = theta_limit(&CornerEvent::new(vec![q], vec![]).unwrap()).unwrap();
    let zero = theta_limit(&CornerEvent::new(vec![], vec![q]).unwrap()).unwrap();
    assert_eq!(one.as_ratio() + zero.as_ratio(), *ExactProb::one().as_ratio());
    let ev = CornerEvent::new(vec![], vec![pt(1, 1), pt(1, 2)]).unwrap();
    assert!(matches!(theta_limit_with(&ev, 1), Err(Error::SubsetLimit { .. })));
}

#[test]
fn rho_is_limit_of_corner_points() {
    let cn = catalan(800);
    for (a, b) in [(1, 1), (2, 5), (4, 1)] {
        let finite = ExactProb::from_counts(&count_one_point(800, 801 - a, b).unwrap(), &cn).to_f64();
        let limit = rho(a, b).unwrap().to_f64();
        assert!((finite / limit - 1.0).abs() < 0.02, "({a},{b}) {finite} vs {limit}");
    }
}

#[test]
fn marginal_mass_to_1e5() {
    assert!(1.0 - marginal_tail(100_000).to_f64() >= 0.99);
}

#[test]
fn walk_trajectories_are_northwest_chains() {
    for seed in 0..50 {
        let w = sample_corner_walk(seed, (1_000, 1_000)).unwrap();
        assert!(CornerChain::from_points(&w).is_ok());
        assert_eq!(w, sample_corner_walk(seed, (1_000, 1_000)).unwrap());
    }
}
