use std::process::{Command, Output};

fn hdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_prints_csv() {
    let o = hdm(&["run", "--scheme", "morley", "--problem", "sq-sin2", "--levels", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "level,h,errL2,eocL2,errH1,eocH1,errH2,eocH2,ndofs,iters,seconds");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,"));
    assert!(lines[3].starts_with("4,"));
}

#[test]
fn out_writes_csv_and_plot_data() {
    let dir = std::env::temp_dir().join(format!("hdm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("study.csv");
    let o = hdm(&["run", "--scheme", "mfvm", "--problem", "sq-poly", "--levels", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 3);
    for norm in ["l2", "h1", "h2"] {
        let data = std::fs::read_to_string(dir.join(format!("study.{norm}.dat"))).unwrap();
        assert_eq!(data.lines().filter(|l| !l.starts_with('#')).count(), 2, "{norm}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn incompatible_choices_exit_with_two() {
    for args in [
        &["run", "--scheme", "adini", "--problem", "sq-sin2", "--mesh", "triangles"][..],
        &["run", "--scheme", "fvm", "--problem", "sq-sin2", "--b", "identity"],
        &["run", "--scheme", "gr", "--problem", "sq-sin2", "--rho", "0"],
        &["mesh", "--scheme", "adini", "--problem", "lshape"],
    ] {
        let o = hdm(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn unknown_problem_is_a_usage_error() {
    let o = hdm(&["run", "--scheme", "gr", "--problem", "disc"]);
    assert!(!o.status.success());
}

#[test]
fn matrix_is_symmetric() {
    let o = hdm(&["matrix", "--scheme", "gr", "--problem", "sq-sin2", "--level", "1"]);
    assert!(o.status.success());
    let mut entries = std::collections::BTreeMap::new();
    for line in stdout(&o).lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            continue;
        }
        let key: (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        entries.insert(key, f[2].parse::<f64>().unwrap());
    }
    assert!(!entries.is_empty());
    for (&(i, j), &v) in &entries {
        let w = entries.get(&(j, i)).copied().unwrap_or(0.0);
        assert!((v - w).abs() <= 1e-12 * v.abs().max(1.0));
    }
}

#[test]
fn mesh_lists_vertices_and_cells() {
    let o = hdm(&["mesh", "--scheme", "morley", "--problem", "sq-sin2", "--level", "1"]);
    assert!(o.status.success());
    assert!(!stdout(&o).is_empty());
}

#[test]
fn diagnostics_have_their_own_header() {
    let o = hdm(&["diagnostics", "--scheme", "morley", "--problem", "sq-sin2", "--levels", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("level,h,SD,WD,CD\n"));
}
