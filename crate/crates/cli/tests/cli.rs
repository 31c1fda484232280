use std::path::Path;
use std::process::{Command, Output};

fn cavscat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavscat")).args(args).output().expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = cavscat(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn phase_shifts_free_space_is_zero() {
    let csv = ok_stdout(&["phase-shifts", "--size", "0", "--m-max", "6"]);
    assert!(csv.starts_with("m,delta_plus,delta_minus,re_B_a,im_B_a,re_B_b,im_B_b,abs2_B_a,abs2_B_b\n"));
    let r = rows(&csv);
    assert_eq!(r.len(), 7);
    for row in &r {
        assert!(row[1..].iter().all(|v| num(v) == 0.0), "{row:?}");
    }
}

#[test]
fn phase_shifts_row_count_and_dominant_wave() {
    let csv = ok_stdout(&["phase-shifts", "--size", "2.35741", "--k-over-kappa", "0.1", "--m-max", "9"]);
    let r = rows(&csv);
    assert_eq!(r.len(), 10);
    let b: Vec<f64> = r.iter().map(|row| num(&row[8])).collect();
    let top = (0..b.len()).max_by(|&i, &j| b[i].total_cmp(&b[j])).unwrap();
    assert_eq!(top, 1, "{b:?}");
}

#[test]
fn scan_grid_and_thread_independence() {
    let one = ok_stdout(&["scan", "total_b", "0:3:0.05", "--threads", "1"]);
    let four = ok_stdout(&["scan", "total_b", "0:3:0.05", "--threads", "4"]);
    assert_eq!(one, four);
    assert!(one.starts_with("x,value\n"));
    let r = rows(&one);
    assert_eq!(r.len(), 61);
    assert_eq!(num(&r[0][1]), 0.0);
    let coeff = ok_stdout(&["scan", "coeff_b(1)", "2.3:2.4:0.01"]);
    assert_eq!(rows(&coeff).len(), 11);
}

#[test]
fn differential_is_even() {
    let csv = ok_stdout(&["differential", "--size", "3.79243", "--theta-points", "64"]);
    let r = rows(&csv);
    assert_eq!(r.len(), 64);
    // theta_j and theta_{n-2-j} are mirror images
    for j in 0..31 {
        let (a, b) = (&r[j], &r[62 - j]);
        assert!((num(&a[0]) + num(&b[0])).abs() < 1e-12);
        for c in 1..3 {
            let (x, y) = (num(&a[c]), num(&b[c]));
            assert!((x - y).abs() <= 1e-8 * x.abs().max(1e-300), "{a:?} {b:?}");
        }
    }
    let free = ok_stdout(&["differential", "--size", "0", "--theta-points", "16"]);
    assert!(rows(&free).iter().all(|row| num(&row[1]) == 0.0 && num(&row[2]) == 0.0));
}

#[test]
fn resonances_reproduce_captions() {
    let csv = ok_stdout(&["resonances", "--m-range", "0:3", "--window", "0:6"]);
    assert!(csv.starts_with("m,kappa_R0,gamma,residual,method\n"));
    let r = rows(&csv);
    for (m, x) in [(0usize, 0.72890), (1, 2.35741), (2, 3.79243), (3, 5.09697)] {
        assert!(
            r.iter().any(|row| row[0] == m.to_string() && (num(&row[1]) - x).abs() <= 1e-3),
            "m={m} missing in\n{csv}"
        );
    }
    let csv = ok_stdout(&["resonances", "--m-range", "3", "--window", "10:13"]);
    assert!(rows(&csv).iter().any(|row| (num(&row[1]) - 11.5287).abs() <= 1e-3), "{csv}");
    let empty = ok_stdout(&["resonances", "--m-range", "1", "--window", "3:3"]);
    assert_eq!(empty, "m,kappa_R0,gamma,residual,method\n");
}

#[test]
fn out_file_gets_manifest_that_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let args = ["scan", "coeff_b(1)", "2:3:0.1", "--k-over-kappa", "0.1", "--size", "7"];
    let mut a = args.to_vec();
    let p = first.to_str().unwrap();
    a.extend(["--out", p]);
    ok_stdout(&a);
    let manifest = dir.path().join("first.csv.manifest");
    let text = std::fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("command = scan coeff_b(1) 2:3:0.1"));
    assert!(text.contains("k_over_kappa_n = 0.1"));

    let second = dir.path().join("second.csv");
    ok_stdout(&["scan", "coeff_b(1)", "2:3:0.1", "--config", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# cold run\nk_over_kappa_n = 0.1\nsize = 2.35741\nm_max = 4\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = ok_stdout(&["phase-shifts", "--config", c]);
    assert_eq!(rows(&from_file).len(), 5);
    let overridden = ok_stdout(&["phase-shifts", "--config", c, "--m-max", "2"]);
    assert_eq!(rows(&overridden).len(), 3);
    assert_eq!(rows(&from_file)[..3], rows(&overridden)[..]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "size = 1\nratio = 3\n").unwrap();
    let out = cavscat(&["phase-shifts", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line 2") && msg.contains("ratio"), "{msg}");

    assert_eq!(cavscat(&["scan", "total_b", "3:1:0.1"]).status.code(), Some(2));
    assert_eq!(cavscat(&["phase-shifts", "--k-over-kappa", "-1"]).status.code(), Some(2));
    assert_eq!(cavscat(&["figure", "9"]).status.code(), Some(2));
    assert_eq!(cavscat(&["phase-shifts", "--threads", "zero"]).status.code(), Some(2));

    let missing = dir.path().join("nope.cfg");
    assert_eq!(cavscat(&["phase-shifts", "--config", missing.to_str().unwrap()]).status.code(), Some(4));
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(cavscat(&["phase-shifts", "--out", unwritable.to_str().unwrap()]).status.code(), Some(4));

    let tight = dir.path().join("tight.cfg");
    std::fs::write(&tight, "mode = gaussian\nsize = 15\nm_max = 0\node_step = 0.000001\n").unwrap();
    assert_eq!(cavscat(&["phase-shifts", "--config", tight.to_str().unwrap()]).status.code(), Some(3));
}

fn figure(id: &str, dir: &Path) -> Vec<String> {
    let listed = ok_stdout(&["figure", id, "--out", dir.to_str().unwrap()]);
    assert!(dir.join("manifest.txt").exists());
    listed.lines().map(|l| Path::new(l).file_name().unwrap().to_string_lossy().into_owned()).collect()
}

#[test]
fn figure4_has_exact_and_two_overlays() {
    let dir = tempfile::tempdir().unwrap();
    let files = figure("4", dir.path());
    assert_eq!(files, ["fig4_totals.csv", "fig4_overlay_b.csv", "fig4_overlay_a.csv"]);
    for f in &files {
        assert_eq!(rows(&std::fs::read_to_string(dir.path().join(f)).unwrap()).len(), 1201);
    }
}

#[test]
fn figure5_wavefunction_and_potential() {
    let dir = tempfile::tempdir().unwrap();
    let files = figure("5", dir.path());
    assert_eq!(files, ["fig5_wavefunction.csv", "fig5_potential.csv"]);
    let wf = std::fs::read_to_string(dir.path().join(&files[0])).unwrap();
    assert!(wf.starts_with("r,u\n"));
    let peak = rows(&wf).iter().map(|r| num(&r[1]).abs()).fold(0.0, f64::max);
    assert!((peak - 1.0).abs() < 1e-12);
}

#[test]
fn figure7_is_a_gaussian_scan() {
    let dir = tempfile::tempdir().unwrap();
    let files = figure("7", dir.path());
    assert_eq!(files, ["fig7_total_b.csv"]);
    let r = rows(&std::fs::read_to_string(dir.path().join(&files[0])).unwrap());
    assert_eq!(r.len(), 1500);
    assert!((num(&r[0][0]) - 0.01).abs() < 1e-12 && (num(&r[1499][0]) - 15.0).abs() < 1e-9);
    let manifest = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(manifest.contains("mode = gaussian"));
}
