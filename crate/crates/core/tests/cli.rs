//! The `thomp` binary: output headers, exit statuses and reproducibility.

use std::process::{Command, Output};

fn thomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn element_commands() {
    let o = thomp(&["mul", "((..).)|(.(..))", "(.(..))|((..).)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "# thomp-element v1 n=2\n.|.\n");
    let o = thomp(&["inv", "((..).)|(.(..))"]);
    assert_eq!(stdout(&o), "# thomp-element v1 n=2\n(.(..))|((..).)\n");
    let o = thomp(&["eval", "x0^-1 x1 x0", "-n", "3"]);
    let p = thomp(&["eval", "x3", "-n", "3"]);
    assert_eq!(stdout(&o), stdout(&p));
    let j = thomp(&["reduce", "ex3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["format"], "thomp-element");
    assert_eq!(v["version"], 1);
    assert_eq!(v["n"], 2);
}

#[test]
fn files_round_trip() {
    let dir = std::env::temp_dir().join(format!("thomp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x.txt");
    let e = thomp(&["embed", "(....)|(....)", "-q", "2"]);
    std::fs::write(&path, stdout(&thomp(&["eval", "x1 x2^-1", "-n", "4"]))).unwrap();
    let embedded = thomp(&["embed", path.to_str().unwrap(), "-q", "2"]);
    assert_eq!(code(&embedded), 0);
    assert_eq!(stdout(&e), "# thomp-element v1 n=2\n.|.\n");
    let factored_path = dir.join("y.txt");
    std::fs::write(&factored_path, stdout(&embedded)).unwrap();
    let back = thomp(&["factor", factored_path.to_str().unwrap(), "-q", "2"]);
    assert_eq!(stdout(&back), stdout(&thomp(&["eval", "x1 x2^-1", "-n", "4"])));
    let pd_path = dir.join("k.pd");
    std::fs::write(&pd_path, stdout(&thomp(&["link", "ex7"]))).unwrap();
    let c = thomp(&["color", pd_path.to_str().unwrap(), "-p", "7"]);
    assert_eq!(code(&c), 0);
    assert!(stdout(&c).contains("colorings: 49\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn member_verdicts() {
    let o = thomp(&["member", "ex3", "-p", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# thomp-member v1 p=3 q=2\n"));
    assert!(text.contains("1\t0100\t01\t1\t1\n"));
    assert!(text.ends_with("verdict: member\n"));
    let o = thomp(&["member", "(.(..))|((..).)", "-p", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness leaf: 1\n"));
    let o = thomp(&["member", "ex3", "-p", "4"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid modulus 4"));
}

#[test]
fn factor_and_link_errors() {
    assert_eq!(code(&thomp(&["factor", "(.(..))|((..).)", "-q", "2"])), 1);
    assert_eq!(code(&thomp(&["factor", "ex3", "-q", "2"])), 0);
    assert_eq!(stdout(&thomp(&["link", ".|."])), "# thomp-pd v1 components=1\nPD[]\n");
    assert_eq!(code(&thomp(&["link", ".|.", "--format", "svg"])), 2);
    assert_eq!(code(&thomp(&["link", "((..).)|((..).)"])), 2);
    let o = thomp(&["link", "((..).)|((..).)", "--allow-nonreduced"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("# thomp-pd v1 components=3\n"));
    assert_eq!(code(&thomp(&["reduce", "((..)|.)"])), 2);
}

#[test]
fn link_formats() {
    let pd = thomp(&["link", "ex3"]);
    assert!(stdout(&pd).starts_with("# thomp-pd v1 components=1\nPD[X["));
    let svg = thomp(&["link", "ex3", "--format", "svg"]);
    let s = stdout(&svg);
    assert!(s.contains("<!-- thomp-svg v1 carets=4 crossings=8 -->"));
    assert!(s.trim_end().ends_with("</svg>"));
    let j = thomp(&["link", "ex7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["format"], "thomp-link");
    assert_eq!(v["crossings"], 16);
    assert_eq!(v["components"], 1);
}

#[test]
fn color_verdicts() {
    let o = thomp(&["color", "fig8", "-p", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# thomp-color v1 p=5\n"));
    assert!(text.contains("colorings: 25\n"));
    let sample = text.lines().find_map(|l| l.strip_prefix("sample: ")).unwrap();
    let v: serde_json::Value = serde_json::from_str(sample).unwrap();
    assert_eq!(v.as_object().unwrap().len(), 6);
    let o = thomp(&["color", "fig8", "-p", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("verdict: only trivial colorings\n"));
    let j = thomp(&["color", "ex3", "-p", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["format"], "thomp-color");
    assert_eq!(v["colorings"], "9");
    assert_eq!(v["nontrivial"], true);
}

#[test]
fn census_is_reproducible() {
    let args = ["census", "-p", "7", "--count", "12", "--seed", "5"];
    let a = thomp(&args);
    let b = thomp(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("# thomp-census v1 p=7 count=12 seed=5 max_len=3\n"));
    assert!(text.contains("# colorable 12/12\n"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 12);
    for (i, r) in rows.iter().enumerate() {
        assert!(r.starts_with(&format!("{i}\t")));
    }
    let other = thomp(&["census", "-p", "7", "--count", "12", "--seed", "6"]);
    assert_ne!(stdout(&a), stdout(&other));
    let empty = thomp(&["census", "-p", "3", "--count", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&empty)).unwrap();
    assert_eq!(v["samples"].as_array().unwrap().len(), 0);
}

#[test]
fn fixtures_print_verbatim() {
    let names = stdout(&thomp(&["fixture"]));
    assert_eq!(names, "ex3\nex7\nspine-q2\nspine-q3\nfig8\n");
    let fig8 = stdout(&thomp(&["fixture", "fig8"]));
    assert_eq!(fig8, thomp::fixtures::FIG8_PD);
    let ex3 = stdout(&thomp(&["fixture", "ex3"]));
    assert_eq!(ex3, format!("# thomp-element v1 n=2\n{}\n", thomp::fixtures::EX3));
    assert_eq!(code(&thomp(&["fixture", "nope"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&thomp(&[])), 2);
    assert_eq!(code(&thomp(&["frobnicate"])), 2);
    assert_eq!(code(&thomp(&["member", "ex3"])), 2);
    assert_eq!(code(&thomp(&["link", "ex3", "--format", "png"])), 2);
    assert_eq!(code(&thomp(&["eval", "y0"])), 2);
}
