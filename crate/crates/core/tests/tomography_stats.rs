use boostwave::fixtures;
use boostwave::tomography::{estimate_a, extract_slice, simulate, CountsTable, SliceSpec, TomographyConfig};
use boostwave::verify::{run_suite, SuiteConfig};

fn a_variance(samples: u64) -> f64 {
    let model = fixtures::standard_eigen_gaussian().build().unwrap();
    let spec = SliceSpec::new(2, 0).unwrap();
    let xs: Vec<f64> = (0..100u64)
        .map(|seed| {
            let cfg = TomographyConfig { samples, rows: 8, dt_d: 1.0, dx: 1.0, length: 16.0, seed };
            let table = simulate(&cfg, &model).unwrap();
            estimate_a(&extract_slice(&table, spec).unwrap(), &table).unwrap()
        })
        .collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

#[test]
fn estimator_variance_falls_as_one_over_n() {
    let sizes = [500u64, 2_000, 8_000, 32_000];
    let lx: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = sizes.iter().map(|&n| a_variance(n).ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 1.0).abs() <= 0.2, "slope {slope}");
}

#[test]
fn simulated_table_round_trips_through_csv() {
    let model = fixtures::standard_eigen_gaussian().build().unwrap();
    let cfg = TomographyConfig { samples: 500, rows: 6, dt_d: 0.3, dx: 0.5, length: 16.0, seed: 11 };
    let table = simulate(&cfg, &model).unwrap();
    let mut buf = Vec::new();
    table.write_csv(&mut buf).unwrap();
    let back = CountsTable::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, table);
    let mut again = Vec::new();
    back.write_csv(&mut again).unwrap();
    assert_eq!(buf, again);
}

#[test]
fn suite_report_is_reproducible() {
    let cfg = SuiteConfig { velocities: vec![0.0, 0.5], kinematics_samples: 500, tomography: None, ..Default::default() };
    let a = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let report = run_suite(&cfg).unwrap();
    let mut names: Vec<_> = report.checks.iter().map(|c| c.name.clone()).collect();
    let n = names.len();
    names.dedup();
    assert_eq!(names.len(), n);
    assert!(report.checks.iter().all(|c| c.passed == c.recompute_passed()));
    assert!(!report.has_failures(), "{}", report.summary());
}
