use cantor_rips::harness::{assert_rigid_free, find_rigid_edges};
use cantor_rips::rational::{int, ratio};
use cantor_rips::space::io::{cloud_to_csv_string, read_cloud_csv, read_config_json};
use cantor_rips::{betti01, build_cloud, build_complex, scale_window, CloudConfig, Rational};

fn window_grid(points: i64) -> Vec<Rational> {
    let (lo, hi) = scale_window();
    (0..points).map(|k| &lo + (&hi - &lo) * ratio(k, points - 1)).collect()
}

#[test]
fn window_grid_keeps_rigid_edges_and_betti_law() {
    for a in window_grid(5) {
        for n in [1, 4, 7] {
            let cloud = build_cloud(&CloudConfig::minimal(n, a.clone())).unwrap();
            let c = build_complex(&cloud, &a);
            let rigid = find_rigid_edges(&c);
            assert_eq!(rigid.len(), n, "a = {a}");
            assert!(assert_rigid_free(&c, &rigid).unwrap().is_free(), "a = {a}");
            assert_eq!(betti01(&c).unwrap(), (1, n - 1), "a = {a}");
        }
    }
}

#[test]
fn csv_round_trip_preserves_homology() {
    let a = ratio(236195, 236196);
    let mut cfg = CloudConfig::full(3, a.clone());
    cfg.include_cube0 = true;
    let cloud = build_cloud(&cfg).unwrap();
    let text = cloud_to_csv_string(&cloud).unwrap();
    let back = read_cloud_csv(text.as_bytes()).unwrap();
    assert_eq!(back.points(), cloud.points());
    assert_eq!(
        betti01(&build_complex(&back, &a)).unwrap(),
        betti01(&build_complex(&cloud, &a)).unwrap()
    );
    assert_eq!(cloud_to_csv_string(&back).unwrap(), text);
}

#[test]
fn config_json_defaults_and_validation() {
    let cfg = read_config_json(r#"{"sheets":["0","1"],"scale":"1"}"#.as_bytes()).unwrap();
    assert_eq!(cfg.blocks, 8);
    assert_eq!(cfg.cube_grid, 2);
    assert!(!cfg.include_cube0);
    assert!(cfg.include_partners);
    assert_eq!(cfg.scale, int(1));

    for bad in [
        r#"{"sheets":[],"scale":"1"}"#,
        r#"{"sheets":["0","00"],"scale":"1"}"#,
        r#"{"sheets":["0"],"scale":"1/2"}"#,
        r#"{"sheets":["0"],"scale":"1","x_values":["3/2"]}"#,
        r#"{"sheets":["2"],"scale":"1"}"#,
        r#"{"sheets":["0"],"scale":"1/0"}"#,
    ] {
        assert!(read_config_json(bad.as_bytes()).is_err(), "{bad}");
    }
}

#[test]
fn extra_sheet_samples_do_not_break_rigidity() {
    let a = ratio(118097, 118098);
    let mut cfg = CloudConfig::minimal(3, a.clone());
    cfg.x_values = vec![int(0), ratio(1, 3), ratio(2, 3)];
    let cloud = build_cloud(&cfg).unwrap();
    let c = build_complex(&cloud, &a);
    let rigid = find_rigid_edges(&c);
    assert_eq!(rigid.len(), 3);
    assert!(assert_rigid_free(&c, &rigid).unwrap().is_free());
}
