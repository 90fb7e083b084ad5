use std::path::PathBuf;
use std::process::{Command, Output};

fn quon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn shipped_band() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data/synthetic_band.csv")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn vev_examples() {
    let out = quon(&["vev", "a2 a1 ad2 ad1", "--exact"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "q\n");
    assert_eq!(stdout(&quon(&["vev", "a1 ad1", "--q", "0.3"])), "1\n");
    assert_eq!(stdout(&quon(&["vev", "a1 ad2", "--q", "0.7"])), "0\n");
    assert_eq!(
        stdout(&quon(&["vev", "a2 a1 ad2 ad1", "--q", "-0.25"])),
        "-0.25\n"
    );
    assert_eq!(
        stdout(&quon(&["--exact", "vev", "a1 a1 ad1 ad1"])),
        "1 + q\n"
    );
}

#[test]
fn vev_parse_error_exits_2() {
    let out = quon(&["vev", "a1 bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn out_of_range_q_exits_2() {
    assert_eq!(
        quon(&["vev", "a1 ad1", "--q", "1.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn classify_three_distinct_modes() {
    let out = quon(&["classify", "1:1", "2:1", "3:1", "--q", "0.5", "--exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sector,eigenvalue,multiplicity,null,polynomial");
    assert_eq!(lines[1], "symmetric,2.625,1,false,1 + 2q + 2q^2 + q^3");
    assert_eq!(lines[2], "antisymmetric,0.375,1,false,1 - 2q + 2q^2 - q^3");
    assert_eq!(lines[3], "mixed(1),1.125,2,false,1 + q - q^2 - q^3");
    assert_eq!(lines[4], "mixed(2),0.375,2,false,1 - q - q^2 + q^3");
    assert_eq!(lines.len(), 5);
}

#[test]
fn classify_small_cases() {
    assert_eq!(
        stdout(&quon(&["classify", "1:2", "--q", "0.5"])),
        "sector,eigenvalue,multiplicity,null\nsymmetric,1.5,1,false\n"
    );
    assert_eq!(
        stdout(&quon(&["classify", "1:1", "2:1", "--q", "1"])),
        "sector,eigenvalue,multiplicity,null\nsymmetric,2,1,false\nantisymmetric,0,1,true\n"
    );
}

#[test]
fn classify_cap_exits_3() {
    assert_eq!(quon(&["classify", "1:9"]).status.code(), Some(3));
    assert_eq!(quon(&["classify", "1:x"]).status.code(), Some(2));
}

#[test]
fn spectrum_examples() {
    assert_eq!(
        stdout(&quon(&["spectrum", "osc", "--nmax", "3", "--q", "1"])),
        "N,energy,degeneracy\n0,1.5,1\n1,2.5,3\n2,3.5,6\n3,4.5,10\n"
    );
    assert_eq!(
        stdout(&quon(&[
            "spectrum", "rotor", "--lmax", "4", "--q", "1", "--A", "1"
        ])),
        "l,energy\n0,0\n1,2\n2,6\n3,12\n4,20\n"
    );
    let text = stdout(&quon(&[
        "spectrum",
        "osc",
        "--nmax",
        "2",
        "--compare-q",
        "1,0.99,0.98",
        "--hbar-omega",
        "2",
    ]));
    assert_eq!(
        text,
        "N,energy_q1,energy_q0.99,energy_q0.98,degeneracy\n0,3,3,3,1\n1,5,4.99,4.98,3\n2,7,6.9601,6.9204,6\n"
    );
}

#[test]
fn spectrum_rejects_bad_units() {
    assert_eq!(
        quon(&["spectrum", "rotor", "--A", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        quon(&["spectrum", "osc", "--compare-q", "1,2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fit_shipped_band() {
    let out = quon(&["fit", &shipped_band()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let summary = text.lines().last().unwrap();
    let fields: Vec<(&str, f64)> = summary
        .split(' ')
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap();
            (k, v.parse().unwrap())
        })
        .collect();
    assert_eq!(fields[0].0, "A");
    assert!((fields[1].1 - 0.99478).abs() < 1e-4);
    assert!((fields[0].1 - 7.156).abs() / 7.156 < 1e-3);
    assert!(text.starts_with("l,energy_exp,energy_fit,residual\n"));
    assert!(out.stderr.is_empty());
}

#[test]
fn fit_output_file_and_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fit.csv");
    let out = quon(&[
        "fit",
        &shipped_band(),
        "--emit-comparison",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("A="));
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("l,energy_exp,energy_fit,residual,energy_rigid\n"));
    assert_eq!(written.lines().count(), 14);
}

#[test]
fn fit_rigid_band_warns_at_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rigid.csv");
    std::fs::write(&path, "l,energy_kev\n2,6\n4,20\n").unwrap();
    let out = quon(&["fit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(stdout(&out).ends_with("A=1 q=1 rms=0\n"));
}

#[test]
fn fit_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(
        quon(&["fit", empty.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let head_only = dir.path().join("head.csv");
    std::fs::write(&head_only, "l,energy_kev\n0,0\n").unwrap();
    assert_eq!(
        quon(&["fit", head_only.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        quon(&["fit", "/nonexistent/band.csv"]).status.code(),
        Some(2)
    );
}

#[test]
fn spectrum_feeds_back_into_fit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("band.csv");
    let out = quon(&[
        "spectrum",
        "rotor",
        "--lmax",
        "20",
        "--even",
        "--q",
        "0.985",
        "--A",
        "12.5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let fit = stdout(&quon(&["fit", path.to_str().unwrap()]));
    let q: f64 = fit.lines().last().unwrap().split(' ').nth(1).unwrap()[2..]
        .parse()
        .unwrap();
    assert!((q - 0.985).abs() < 1e-4, "q = {q}");
}

#[test]
fn verify_passes_and_caps() {
    let out = quon(&["verify", "--max-n", "4"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.contains(",PASS,")));

    let gram = stdout(&quon(&["verify", "--suite", "gram", "--max-n", "3"]));
    assert_eq!(gram.lines().count(), 2);
    assert!(gram.lines().nth(1).unwrap().starts_with("gram,PASS,"));

    assert_eq!(quon(&["verify", "--max-n", "99"]).status.code(), Some(3));
    assert_eq!(quon(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn table_format() {
    let text = stdout(&quon(&[
        "spectrum", "rotor", "--lmax", "2", "--format", "table",
    ]));
    assert_eq!(text, "l  energy\n-  ------\n0  0\n1  2\n2  6\n");
}
