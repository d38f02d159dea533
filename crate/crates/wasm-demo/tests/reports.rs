use cmforms_wasm_demo::{class_group_report, cm_points_report, siegel_report};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn class_group_table() {
    let v = parse(&class_group_report("gauss", 5).unwrap());
    assert_eq!(v["order"], "4");
    assert_eq!(v["passed"], true);
}

#[test]
fn cm_points_lie_in_the_upper_half_plane() {
    let v = parse(&cm_points_report("zeta5", 2).unwrap());
    assert_eq!(v["g"], 2);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    for p in pts {
        assert!(p["im"].as_str().unwrap().parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn siegel_values_for_gauss_level_three() {
    let v = parse(&siegel_report("gauss", 3, 128).unwrap());
    assert_eq!(v["values"].as_array().unwrap().len(), 2);
    assert_eq!(v["certified"], true);
}

#[test]
fn bad_inputs_are_errors() {
    assert!(class_group_report("nonesuch", 1).is_err());
    assert!(class_group_report("gauss", 0).is_err());
    assert!(siegel_report("gauss", 1, 64).is_err());
    assert!(cm_points_report("gauss", 99).is_err());
}
