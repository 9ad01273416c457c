use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn psp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("psp-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn parametric_prints_breakpoints_and_lambda_star() {
    let p = write_temp("pair.txt", "p psp 2 2\ns 1\na 1 2 0 0 1\na 1 2 4 1 1\n");
    let o = psp(&["parametric", p.to_str().unwrap(), "--dump-log", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 4\nv 1 -inf -\nv 2 -inf 1\nv 2 4 2\nlambda_star inf\n");
}

#[test]
fn parametric_reports_terminal_cycle() {
    let p = write_temp("two.txt", "c two-cycle\np psp 2 2\ns 1\na 1 2 3 1 1\na 2 1 5 1 1\n");
    let o = psp(&["parametric", p.to_str().unwrap()]);
    assert_eq!(stdout(&o), "cycle 1 2\nlambda_star 4\n");
}

#[test]
fn mmc_algorithms_agree() {
    let p = write_temp("tri.txt", "p psp 3 4\na 1 2 1 1 1\na 2 3 3 1 1\na 3 1 2 1 1\na 2 1 1 1 1\n");
    let path = p.to_str().unwrap();
    for algo in ["parametric", "karp", "brute"] {
        let o = psp(&["mmc", path, "--algo", algo, "--certify"]);
        assert_eq!(o.status.code(), Some(0), "{algo}");
        assert!(stdout(&o).starts_with("lambda_star 1\n"), "{algo}: {}", stdout(&o));
    }
    let o = psp(&["mmc", path, "--scc"]);
    assert_eq!(stdout(&o), "lambda_star 1\ncycle 4 1\n");
}

#[test]
fn mmc_ratio_mode() {
    let p = write_temp("ratio.txt", "p psp 2 2\na 1 2 3 1 1\na 2 1 5 1 3\n");
    let o = psp(&["mmc", p.to_str().unwrap(), "--ratio"]);
    assert!(stdout(&o).starts_with("lambda_star 2\n"));
    let o = psp(&["mmc", p.to_str().unwrap(), "--ratio", "--algo", "karp"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn acyclic_mmc_is_infinite() {
    let p = write_temp("dag.txt", "p psp 3 2\na 1 2 1 1 1\na 2 3 1 1 1\n");
    let o = psp(&["mmc", p.to_str().unwrap()]);
    assert_eq!(stdout(&o), "lambda_star inf\n");
}

#[test]
fn balance_output_and_check() {
    let p = write_temp("bal.txt", "p psp 2 2\na 1 2 4 1 1\na 2 1 0 1 1\n");
    let o = psp(&["balance", p.to_str().unwrap(), "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "pi 1 0\npi 2 2\ncontractions 1\ncycle 2 1 2\n");
}

#[test]
fn balance_rejects_not_strongly_connected() {
    let p = write_temp("one-way.txt", "p psp 2 1\na 1 2 4 1 1\n");
    let o = psp(&["balance", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_one_with_line_number() {
    let p = write_temp("bad.txt", "p psp 2 1\na 1 3 5 1 1\n");
    let o = psp(&["parametric", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("vertex id 3 out of range"), "{err}");
    assert_eq!(psp(&["nonsense"]).status.code(), Some(1));
    assert_eq!(psp(&["--help"]).status.code(), Some(0));
}

#[test]
fn gen_round_trips_and_is_deterministic() {
    let a = psp(&["gen", "--n", "30", "--m", "90", "--seed", "5"]);
    let b = psp(&["gen", "--n", "30", "--m", "90", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("p psp 30 90\n"));
    let g: psp_core::IntGraph = text.parse().unwrap();
    assert_eq!(psp_core::serialize_graph(&g), text);
    assert_eq!(psp(&["gen", "--n", "3", "--m", "7"]).status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let o = psp(&["bench", "--mode", "balance", "--points", "10:30", "--trials", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let recs = psp_core::bench::parse_csv(text.as_bytes()).unwrap();
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r.contractions.is_some() && r.time_karp_ns.is_none()));
}
