mod common;

use common::{bell, brute_force_optimum, load_fixture, partitions_recursive, reshape, small_instance, unbounded};
use laplan::constraints::is_feasible;
use laplan::model::Solution;
use laplan::netgen::{generate, GenParams};
use laplan::oracle::{bell_number, enumerate_optimal, for_each_partition, greedy_baseline, OracleLimits};
use laplan::Error;

#[test]
fn bell_numbers() {
    for n in 0..=20 {
        assert_eq!(bell_number(n), Some(bell(n)), "B({n})");
    }
    assert_eq!(bell(6), 203);
    assert_eq!(bell(8), 4140);
    assert_eq!(bell_number(40), None);
}

#[test]
fn partitions_in_lexicographic_order() {
    for n in 1..=7 {
        let mut seen = Vec::new();
        for_each_partition(n, |a| seen.push(a.to_vec()));
        assert_eq!(seen, partitions_recursive(n), "n = {n}");
        assert_eq!(seen.len() as u64, bell(n));
    }
}

#[test]
fn matches_brute_force() {
    for seed in [5, 10, 15, 20] {
        let inst = small_instance(seed);
        assert_eq!(inst.n_bs(), 6);
        let res = enumerate_optimal(&inst, &OracleLimits::default(), None).unwrap();
        let expected = brute_force_optimum(&inst).unwrap();
        assert!(
            (res.cost.total - expected).abs() < 1e-9,
            "seed {seed}: {} vs {expected}",
            res.cost.total
        );
        assert_eq!(res.partitions, bell(6));
        assert!(is_feasible(&inst, &res.solution).feasible());
    }
}

#[test]
fn fixture6_optimum() {
    let inst = load_fixture("fixture6.net");
    let res = enumerate_optimal(&inst, &OracleLimits::default(), None).unwrap();
    assert_eq!(res.cost.total, 52.0);
    assert_eq!(res.solution.num_las(), 2);
    assert_eq!(brute_force_optimum(&inst), Some(52.0));
}

#[test]
fn zero_handoff_picks_first_feasible_partition() {
    let base = load_fixture("fixture6.net");
    let inst = reshape(&base, |_, b| b.clone(), |_, c| c.clone(), |_| 0.0);
    let res = enumerate_optimal(&inst, &OracleLimits::default(), None).unwrap();
    assert_eq!(res.cost.total, 0.0);
    // first string in lexicographic order with some feasible attachment
    let first = partitions_recursive(6)
        .into_iter()
        .find(|p| {
            (0..64usize).any(|mask| {
                let attach = (0..6).map(|b| (mask >> b) & 1).collect();
                let sol = Solution::from_assignment(&inst, attach, p.clone()).unwrap();
                is_feasible(&inst, &sol).feasible()
            })
        })
        .unwrap();
    assert_eq!(res.solution.bs_to_la(), first.as_slice());
}

#[test]
fn unconstrained_is_one_la() {
    for seed in [3, 6, 9] {
        let inst = unbounded(&small_instance(seed));
        let res = enumerate_optimal(&inst, &OracleLimits::default(), None).unwrap();
        assert_eq!(res.cost.total, 0.0);
        assert_eq!(res.solution.num_las(), 1);
    }
}

#[test]
fn msc_split_costs_at_least_the_cut() {
    let inst = load_fixture("fixture6_2msc.net");
    let cut: f64 = inst
        .handoff()
        .entries()
        .filter(|&(i, j, _)| inst.candidate_bscs(i) != inst.candidate_bscs(j))
        .map(|(_, _, h)| h)
        .sum();
    let res = enumerate_optimal(&inst, &OracleLimits::default(), None).unwrap();
    assert_eq!(res.cost.total, 21.0);
    assert!(res.cost.total >= cut);
    assert_eq!(brute_force_optimum(&inst), Some(21.0));
}

#[test]
fn fixed_attachment_is_kept() {
    let inst = load_fixture("fixture6.net");
    let fixed = [1, 1, 0, 1, 1, 0];
    let res = enumerate_optimal(&inst, &OracleLimits::default(), Some(&fixed)).unwrap();
    assert_eq!(res.solution.bs_to_bsc(), &fixed);
    assert!(is_feasible(&inst, &res.solution).feasible());
    assert!(res.cost.total >= 52.0);
}

#[test]
fn limits_enforced() {
    let big = generate(&GenParams {
        n_bs: 11,
        ..GenParams::default()
    })
    .unwrap();
    assert!(matches!(
        enumerate_optimal(&big, &OracleLimits::default(), None),
        Err(Error::LimitExceeded(_))
    ));
    let wide = generate(&GenParams {
        n_bs: 8,
        n_bsc: 4,
        ..GenParams::default()
    })
    .unwrap();
    assert!(matches!(
        enumerate_optimal(&wide, &OracleLimits::default(), None),
        Err(Error::LimitExceeded(_))
    ));
    let limits = OracleLimits {
        max_bsc: 4,
        ..OracleLimits::default()
    };
    assert!(enumerate_optimal(&wide, &limits, None).is_ok());
}

#[test]
fn greedy_on_fixtures() {
    let inst = load_fixture("fixture6.net");
    let g = greedy_baseline(&inst).unwrap();
    assert_eq!(g.cost.total, 52.0);
    assert!(is_feasible(&inst, &g.solution).feasible());

    let inst = load_fixture("fixture6_2msc.net");
    let g = greedy_baseline(&inst).unwrap();
    assert_eq!(g.cost.total, 21.0);
    let msc: Vec<usize> = (0..g.solution.num_las()).map(|la| g.solution.la_msc(la)).collect();
    assert_eq!(msc.len(), 2);
    assert_ne!(msc[0], msc[1]);
}

#[test]
fn greedy_never_beats_oracle() {
    for seed in 1..=8 {
        let inst = small_instance(seed);
        let g = greedy_baseline(&inst).unwrap();
        let o = enumerate_optimal(&inst, &OracleLimits::default(), None).unwrap();
        assert!(is_feasible(&inst, &g.solution).feasible());
        assert!(o.cost.total <= g.cost.total + 1e-9, "seed {seed}");
    }
}
