use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eef-textcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn synth_pair(dir: &Path) -> (String, String) {
    let train = dir.join("train.txt").to_string_lossy().into_owned();
    let test = dir.join("test.txt").to_string_lossy().into_owned();
    ok(&[
        "synth",
        "--classes",
        "3",
        "--vocab",
        "40",
        "--docs-per-class",
        "60",
        "--separation",
        "0.6",
        "--seed",
        "4",
        "--test-frac",
        "0.3",
        "--out",
        &train,
        "--test-out",
        &test,
    ]);
    (train, test)
}

#[test]
fn synth_then_sweep_writes_a_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = synth_pair(dir.path());
    let lines = fs::read_to_string(&train).unwrap();
    assert_eq!(lines.lines().count(), 3 * 42);
    assert_eq!(fs::read_to_string(&test).unwrap().lines().count(), 3 * 18);

    let args = [
        "sweep",
        "--train",
        &train,
        "--test",
        &test,
        "--k",
        "1,5,10",
        "--no-timing",
    ];
    let first = ok(&args);
    let second = ok(&args);
    assert_eq!(first, second);

    let mut rows = first.lines();
    assert_eq!(rows.next(), Some("classifier,k,accuracy,macro_f1,wall_ms"));
    let rows: Vec<&str> = rows.collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5, "{row}");
        assert!(["eef", "ppt", "mnb"].contains(&fields[0]));
        let acc: f64 = fields[2].parse().unwrap();
        assert!((0.0..=1.0).contains(&acc));
        assert!(fields[4].is_empty());
    }
}

#[test]
fn sweep_writes_side_outputs_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let (train, _) = synth_pair(dir.path());
    let out = dir.path().join("report.csv");
    let ig = dir.path().join("ig.csv");
    let model = dir.path().join("model.txt");
    ok(&[
        "sweep",
        "--train",
        &train,
        "--test-frac",
        "0.25",
        "--seed",
        "9",
        "--k",
        "2:10:4",
        "--classifiers",
        "eef,mnb",
        "--out",
        out.to_str().unwrap(),
        "--ig-out",
        ig.to_str().unwrap(),
        "--model-out",
        model.to_str().unwrap(),
    ]);
    let report = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = report.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows
        .iter()
        .all(|r| r.rsplit(',').next().unwrap().parse::<f64>().is_ok()));
    assert!(fs::read_to_string(&ig).unwrap().starts_with("term,class,ig\n"));
    assert!(fs::read_to_string(&model).unwrap().starts_with("eef-model v1 3 40 "));
}

#[test]
fn sweep_reads_class_directories() {
    let dir = tempfile::tempdir().unwrap();
    let texts = [
        (
            "sports",
            [
                "The match ended with a late goal.",
                "A goal in the final match!",
                "Fans cheered the goal.",
            ],
        ),
        (
            "weather",
            [
                "Heavy rain and wind tonight.",
                "Rain clears, wind drops.",
                "Cold wind, more rain.",
            ],
        ),
    ];
    for (class, docs) in texts {
        let class_dir = dir.path().join(class);
        fs::create_dir(&class_dir).unwrap();
        for (i, text) in docs.iter().enumerate() {
            fs::write(class_dir.join(format!("{i}.txt")), text).unwrap();
        }
        fs::write(class_dir.join("notes.md"), "ignored").unwrap();
    }
    let out = ok(&[
        "sweep",
        "--train",
        dir.path().to_str().unwrap(),
        "--test",
        dir.path().to_str().unwrap(),
        "--k",
        "1,2",
        "--no-timing",
    ]);
    for row in out.lines().skip(1) {
        assert_eq!(row.split(',').nth(2).unwrap().parse::<f64>().unwrap(), 1.0, "{row}");
    }
}

#[test]
fn verify_reports_small_deviations() {
    let out = ok(&["verify", "--cases", "100", "--seed", "5"]);
    let mut seen = 0;
    for line in out.lines().skip(1) {
        let (name, value) = line.split_once(char::is_whitespace).unwrap();
        let value: f64 = value.trim().parse().unwrap();
        let bound = if name == "finite_difference" { 1e-5 } else { 1e-6 };
        assert!(value <= bound, "{name} = {value}");
        seen += 1;
    }
    assert_eq!(seen, 7);
}

#[test]
fn bad_arguments_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let (train, _) = synth_pair(dir.path());
    for args in [
        vec!["sweep", "--train", &train, "--k", "5,x"],
        vec!["sweep", "--train", &train, "--k", "0"],
        vec!["sweep", "--train", &train, "--k", "40"],
        vec!["sweep", "--train", &train, "--classifiers", "svm"],
        vec!["sweep", "--train", "/no/such/path"],
        vec!["synth", "--separation", "1.5"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
}
