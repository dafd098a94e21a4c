use std::process::{Command, Output};

fn prodfec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodfec"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ncg_prints_json() {
    let o = prodfec(&["ncg", "--threshold", "4.6"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["ncg_db"].as_f64().unwrap() - 10.39).abs() < 0.01);
}

#[test]
fn rejects_bad_target() {
    let o = prodfec(&["ncg", "--threshold", "4.6", "--target-ber", "0.7"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn noiseless_sweep_to_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let o = prodfec(&[
        "sweep",
        "--ebn0",
        "inf",
        "--max-blocks",
        "3",
        "--workers",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("ebn0_db,"));
    assert_eq!(lines.count(), 1);

    let o = prodfec(&[
        "sweep",
        "--ebn0",
        "inf",
        "--max-blocks",
        "2",
        "--workers",
        "1",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["points"][0]["bit_errors"], 0);
    assert_eq!(v["result"]["points"][0]["blocks"], 2);
}

#[test]
fn extrapolates_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let rate = 0.820_630_505_632_638_1_f64;
    let model = |x: f64| {
        let u = (2.0 * rate * 10f64.powf(x / 10.0)).sqrt();
        prodfec::math::q(40.0 * u - 79.1)
    };
    let mut text = String::from(prodfec::sim::CSV_HEADER);
    text.push('\n');
    for x in [4.2, 4.25, 4.3, 4.35] {
        let ber = model(x);
        let bits = 1_000_000_000_000u64;
        let errors = (ber * bits as f64).round() as u64;
        text.push_str(&format!(
            "{x},{},{bits},{errors},{errors},{ber:e},1.0,0.01,10.0,1.0\n",
            bits / 53_361
        ));
    }
    std::fs::write(&csv, text).unwrap();
    let o = prodfec(&["extrapolate", "--input", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["approximate"], true);
    let threshold = v["estimate"]["threshold_ebn0_db"].as_f64().unwrap();
    assert!(threshold > 4.5 && threshold < 4.7, "{threshold}");
}

#[test]
fn selftest_passes() {
    assert!(prodfec(&["selftest"]).status.success());
}
