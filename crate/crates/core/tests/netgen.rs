mod common;

use laplan::anneal::restart_rng;
use laplan::model::{format_instance, initial_topology_with_attempts, parse_instance};
use laplan::netgen::{generate, hex_adjacent, hex_spiral, GenParams};
use laplan::Error;

#[test]
fn shape_matches_params() {
    let p = GenParams {
        n_bs: 30,
        n_bsc: 5,
        n_msc: 2,
        seed: 4,
        ..GenParams::default()
    };
    let inst = generate(&p).unwrap();
    assert_eq!((inst.n_bs(), inst.n_bsc(), inst.n_msc()), (30, 5, 2));
    let used: std::collections::BTreeSet<usize> = inst.bscs().iter().map(|c| c.msc).collect();
    assert_eq!(used.len(), 2);
    for bs in inst.bss() {
        assert!((2.0..10.0).contains(&bs.call_traffic));
    }
}

#[test]
fn handoff_only_between_lattice_neighbours() {
    let inst = generate(&GenParams {
        n_bs: 37,
        seed: 2,
        ..GenParams::default()
    })
    .unwrap();
    let cells = hex_spiral(37);
    let mut pairs = 0;
    for (i, j, h) in inst.handoff().entries() {
        assert!(h > 0.0);
        assert!(hex_adjacent(cells[i], cells[j]), "{i} {j}");
        assert!(inst.handoff().get(j, i) > 0.0);
        pairs += 1;
    }
    let expected = (0..37)
        .flat_map(|i| (0..37).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && hex_adjacent(cells[i], cells[j]))
        .count();
    assert_eq!(pairs, expected);
}

#[test]
fn same_seed_same_instance() {
    let p = GenParams {
        n_bs: 25,
        n_bsc: 4,
        seed: 17,
        ..GenParams::default()
    };
    let a = format_instance(&generate(&p).unwrap());
    let b = format_instance(&generate(&p).unwrap());
    assert_eq!(a, b);
    let c = format_instance(&generate(&GenParams { seed: 18, ..p }).unwrap());
    assert_ne!(a, c);
}

#[test]
fn generated_instance_round_trips() {
    let inst = generate(&GenParams {
        n_bs: 40,
        n_bsc: 6,
        n_msc: 2,
        seed: 8,
        ..GenParams::default()
    })
    .unwrap();
    let text = format_instance(&inst);
    let back = parse_instance(&text, "gen").unwrap();
    assert_eq!(format_instance(&back), text);
}

#[test]
fn moderate_tightness_builds_first_try() {
    let inst = generate(&GenParams {
        tightness: 0.5,
        seed: 11,
        ..GenParams::default()
    })
    .unwrap();
    let (_, attempts) = initial_topology_with_attempts(&inst, &mut restart_rng(11, 0)).unwrap();
    assert_eq!(attempts, 1);
}

#[test]
fn invalid_params_rejected() {
    for p in [
        GenParams {
            n_bsc: 30,
            ..GenParams::default()
        },
        GenParams {
            n_msc: 0,
            ..GenParams::default()
        },
        GenParams {
            tightness: 0.0,
            ..GenParams::default()
        },
        GenParams {
            tightness: 1.5,
            ..GenParams::default()
        },
        GenParams {
            traffic_range: (5.0, 1.0),
            ..GenParams::default()
        },
    ] {
        assert!(matches!(generate(&p), Err(Error::InvalidParam(_))), "{p:?}");
    }
}
