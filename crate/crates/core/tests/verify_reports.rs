use theta_bounds::orbits::rational;
use theta_bounds::verify::{run_suite, sup_scan, Report, SuiteOptions, Verdict, SUITES};

#[test]
fn suites_round_trip_through_json() {
    let opts = SuiteOptions {
        q_max: 10,
        trials: 5,
        samples: 400,
        ..Default::default()
    };
    for s in ["identity", "invariance", "reduction", "classify", "kappa"] {
        let r = run_suite(s, &opts).unwrap();
        assert!(r.pass(), "{s}: {r:?}");
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        for key in ["name", "inputs", "observed", "threshold", "pass"] {
            assert!(serde_json::to_value(&r.items[0]).unwrap().get(key).is_some());
        }
    }
    assert_eq!(SUITES.len(), 7);
}

#[test]
fn suites_are_deterministic_for_a_seed() {
    let opts = SuiteOptions {
        trials: 4,
        ..Default::default()
    };
    assert_eq!(run_suite("kappa", &opts).unwrap(), run_suite("kappa", &opts).unwrap());
}

#[test]
fn sup_suite_picks_the_bad_pair_configuration() {
    let opts = SuiteOptions {
        pair: Some((rational(1, 2), rational(1, 3))),
        ..Default::default()
    };
    let r = run_suite("sup", &opts).unwrap();
    assert!(r.pass(), "{r:?}");
    assert_eq!(r.items[0].observed["verdict"], "growing");
}

#[test]
fn scans_sort_scales_and_reject_bad_input() {
    let s = sup_scan(0.5, 1.0 / 6.0, &[0.05, 0.2, 0.1], (0.0, 4.0), 400, Some(200.0)).unwrap();
    assert_eq!(s.scales, vec![0.2, 0.1, 0.05]);
    assert_eq!(s.verdict, Verdict::Bounded);
    assert!(sup_scan(0.5, 0.0, &[0.1], (0.0, 1.0), 10, None).is_err());
    assert!(sup_scan(0.5, 0.0, &[-0.1], (0.0, 1.0), 400, None).is_err());
}
