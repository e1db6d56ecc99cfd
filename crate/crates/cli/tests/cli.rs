use std::path::Path;
use std::process::{Command, Output};

const REFERENCE_BAND: &[&str] = &["--f-high", "2.5e9", "--f-low", "2.4e9", "--n", "51", "--k", "144", "--c", "3e8"];

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_unwrap-kit"));
    cmd.args(args).env_remove("UNWRAP_KIT_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn header_field(line: &str, key: &str) -> f64 {
    line.trim_start_matches("# ")
        .split(',')
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap()
        .parse()
        .unwrap()
}

fn write_plan(dir: &Path) -> String {
    let path = dir.join("plan.csv");
    let path_s = path.to_str().unwrap().to_string();
    let mut args = vec!["design"];
    args.extend_from_slice(REFERENCE_BAND);
    args.extend_from_slice(&["--out", &path_s]);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path_s
}

#[test]
fn design_prints_the_plan() {
    let mut args = vec!["design"];
    args.extend_from_slice(REFERENCE_BAND);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "index,f_hz,lambda_m");
    assert_eq!(lines.len(), 2 + 51);
    assert!((header_field(lines[0], "r") - 1.0822).abs() < 1e-4);
    assert!((header_field(lines[0], "UMR_m") - 144.0).abs() < 1e-6);
    assert!(lines[2].starts_with("0,2.5e9,"));
    assert!(lines[52].starts_with("50,2.4e9,"));
}

#[test]
fn plan_file_drives_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_plan(dir.path());
    let o = run(&["estimate", "--plan", &plan, "--range", "37.25"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let value = |key: &str| -> String {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key},")))
            .unwrap()
            .to_string()
    };
    assert_eq!(value("method"), "concerto");
    assert!((value("l_final_m").parse::<f64>().unwrap() - 37.25).abs() < 1e-9);
    assert_eq!(value("m_chain").split(';').count(), 50);

    let phases = run(&["estimate", "--plan", &plan, "--method", "bw", "--phases", "-1.0,0.5"]);
    assert_eq!(code(&phases), 2, "wrong phase count is invalid input");
}

#[test]
fn crb_prints_one_row() {
    let mut args = vec!["crb", "--snr-db", "20"];
    args.extend_from_slice(REFERENCE_BAND);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["snr_db,sigma_rad,crb_m2,rmse_m", lines[1]]);
    let crb: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((crb / 3.6491620853779364e-8 - 1.0).abs() < 1e-12);
}

#[test]
fn simulate_is_reproducible_and_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let mut args = vec!["simulate", "--snr-db", "10..12", "--trials", "300", "--seed", "9", "--quiet"];
    args.extend_from_slice(REFERENCE_BAND);
    let a = run(&args);
    let b = run_env(&args, &[("UNWRAP_KIT_THREADS", "3")]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stderr.is_empty());

    let mut with_out = args.clone();
    with_out.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let c = run(&with_out);
    assert_eq!(code(&c), 0);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);

    let text = stdout(&a);
    assert!(text.starts_with("sweep_param,method,n_trials,"));
    assert_eq!(text.lines().count(), 1 + 3 * 3);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# 2.4-2.5 GHz band\nf_high_hz = 2.5e9\nf_low_hz = 2.4e9\nn_freq = 51\nrange_k_m = 144\nc_m_s = 3e8\n\
         trials = 10\nseed = 5\nsnr_db_list = 15\nmethods = concerto\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = run(&["simulate", "--config", cfg, "--quiet"]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert!(stdout(&from_file).contains("\n15,concerto,10,"));
    let flagged = run(&["--config", cfg, "simulate", "--trials", "100", "--quiet"]);
    assert!(stdout(&flagged).contains("\n15,concerto,100,"));
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "f_high_hz = 2.5e9\nfoo = 3\n").unwrap();
    let o = run(&["crb", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("`foo`"));

    let missing = run(&["crb", "--f-high", "2.5e9", "--snr-db", "20"]);
    assert_eq!(code(&missing), 1);
    assert!(stderr(&missing).contains("f_low_hz"));

    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["design", "--n", "many"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    let threads = run_env(&["crb"], &[("UNWRAP_KIT_THREADS", "zero")]);
    assert_eq!(code(&threads), 1);
}

#[test]
fn plan_errors_exit_2() {
    let infeasible = run(&["design", "--f-high", "2.5e9", "--f-low", "2.4e9", "--n", "51", "--k", "1", "--c", "3e8"]);
    assert_eq!(code(&infeasible), 2);
    assert_eq!(code(&run(&["design", "--f-high", "2.5e9", "--f-low", "2.4e9", "--n", "2", "--k", "144"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let plan = write_plan(dir.path());
    let text = std::fs::read_to_string(&plan).unwrap();
    let row3 = text.lines().find(|l| l.starts_with("3,")).unwrap();
    let tampered = text.replace(row3, "3,2.6e9,1.1538461538461539e-1");
    std::fs::write(&plan, tampered).unwrap();
    let o = run(&["crb", "--plan", &plan, "--snr-db", "20"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("index 3"), "{}", stderr(&o));
}

#[test]
fn degenerate_plan_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("one.csv");
    std::fs::write(
        &plan,
        "# pattern=explicit,r=,B_hz=0e0,K_m=1.2e-1,UMR_m=1.2e-1,c_m_s=3e8\nindex,f_hz,lambda_m\n0,2.5e9,1.2e-1\n",
    )
    .unwrap();
    let o = run(&["estimate", "--plan", plan.to_str().unwrap(), "--phases", "0.1"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn sweep_range_keeps_going_past_infeasible_budgets() {
    let o = run(&[
        "sweep-range", "--f-high", "2.5e9", "--f-low", "2.4e9", "--c", "3e8", "--n-list", "8,16", "--k-list",
        "1,1e3", "--snr-db", "200", "--trials", "50", "--quiet",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "8,2e2,1e0,0,,,,,");
    assert!(rows[1].starts_with("8,2e2,1e3,50,0e0,"));
    assert!(rows[3].starts_with("16,2e2,1e3,50,0e0,"));
    assert_eq!(text.matches("# error").count(), 2);
}

#[test]
fn threshold_and_bench_tables() {
    let o = run(&[
        "threshold", "--f-high", "2.5e9", "--f-low", "2.4e9", "--k", "144", "--c", "3e8", "--n-list", "51",
        "--snr-db", "10..30:5", "--trials", "200", "--quiet",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n_freq,threshold_db,p_fail_at_threshold,points_scanned");
    assert!(lines[1].starts_with("51,"));

    let above = run(&[
        "threshold", "--f-high", "2.5e9", "--f-low", "2.4e9", "--k", "144", "--c", "3e8", "--n-list", "51",
        "--snr-db", "0,1", "--trials", "200", "--quiet",
    ]);
    assert!(stdout(&above).contains("51,above_grid,,2"));

    let mut args = vec!["bench", "--trials", "50", "--methods", "concerto,bw", "--quiet"];
    args.extend_from_slice(REFERENCE_BAND);
    let b = run(&args);
    assert_eq!(code(&b), 0);
    let text = stdout(&b);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("concerto,51,1.44e2,50,"));
    let rate: f64 = rows[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!(rate > 0.0);
}
