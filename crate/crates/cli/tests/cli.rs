use std::process::{Command, Output};

use serde_json::Value;

fn abelcay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelcay"))
        .args(args)
        .env_remove("ABELCAY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = abelcay(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    abelcay(args).status.code().unwrap()
}

#[test]
fn snf_reports() {
    let text = stdout(&["snf", "3,-1,-1;-1,3,-1;-1,-1,3"]);
    assert!(text.contains("S = diag(1, 4, 4)"));
    assert!(text.contains("Z4 x Z4"));
    assert!(stdout(&["snf", "1,0;0,1"]).contains("S = diag(1, 1)"));

    let v = json(&["snf", "3,-1,-1;-1,3,-1;-1,-1,3"]);
    assert_eq!(v["s"], serde_json::json!(["1", "4", "4"]));
    assert_eq!(v["det"], "16");
    assert_eq!(v["structure"]["rank"], 2);
}

#[test]
fn snf_json_transforms_reproduce_the_diagonal() {
    let v = json(&["snf", "6,4,-2;3,9,1;0,5,7"]);
    let mat = |key: &str| -> Vec<Vec<i64>> {
        v[key]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                r.as_array()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_str().unwrap().parse().unwrap())
                    .collect()
            })
            .collect()
    };
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| (0..3).map(|t| a[i][t] * b[t][j]).sum())
                    .collect()
            })
            .collect()
    };
    let m = vec![vec![6, 4, -2], vec![3, 9, 1], vec![0, 5, 7]];
    let s = mul(&mul(&mat("u"), &m), &mat("v"));
    for (i, row) in s.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let want: i64 = if i == j {
                v["s"][i].as_str().unwrap().parse().unwrap()
            } else {
                0
            };
            assert_eq!(x, want);
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["snf", "2,4;1,2"]), 2);
    assert_eq!(code(&["snf", "1,2;3"]), 1);
    assert_eq!(code(&["family", "1", "1"]), 1);
    assert_eq!(code(&["diameter", "Z4", "2"]), 3);
    assert_eq!(code(&["diameter", "Z4", "1,1"]), 1);
    assert_eq!(code(&["diameter", "Q4", "1"]), 1);
    assert_eq!(code(&["nonsense"]), 1);
    assert_eq!(code(&["snf", "1", "--no-such-flag"]), 1);
    assert_eq!(code(&["search", "3", "6", "--budget", "100"]), 4);
    assert_eq!(code(&["bounds", "3", "7", "--format", "dot"]), 1);
}

#[test]
fn not_generating_reports_reach() {
    let out = abelcay(&["diameter", "Z4", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("reached 2 of 4"));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_abelcay"))
        .args(["search", "3", "5"])
        .env("ABELCAY_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn family_verification() {
    let text = stdout(&["family", "3", "1", "--verify"]);
    assert!(text.contains("predicted: order 16, diameter 3, density 2/27"));
    assert!(text.contains("measured:  order 16, diameter 3"));
    assert!(text.contains("PASS"));

    let v = json(&["family", "3", "2", "--verify"]);
    assert_eq!(v["predicted"]["order"], "128");
    assert_eq!(v["measured"]["order"], 128);
    assert_eq!(v["measured"]["diameter"], 9);
    assert_eq!(v["pass"]["all"], true);
}

#[test]
fn diameter_reports() {
    let v = json(&["diameter", "Z84", "2", "9", "35"]);
    assert_eq!(v["diameter"], 7);
    assert_eq!(v["density"], "21/250");

    // the set printed alongside the published density has diameter 10
    let v = json(&["diameter", "Z84", "2", "9", "25"]);
    assert_eq!(v["diameter"], 10);

    let v = json(&["diameter", "Z4xZ4", "1,1", "2,1", "1,2"]);
    assert_eq!(v["diameter"], 3);
    assert_eq!(v["counts"], serde_json::json!([1, 3, 6, 6]));

    let csv = stdout(&["diameter", "Z16", "1", "5", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 8);

    let dot = stdout(&["diameter", "Z5", "1", "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 5);
    assert_eq!(code(&["diameter", "Z300", "1", "--format", "dot"]), 1);
}

#[test]
fn search_json_round_trips() {
    for (args, best) in [
        (vec!["search", "2", "4"], 11),
        (vec!["search", "2", "4", "--abelian"], 12),
        (vec!["search", "3", "2"], 9),
        (vec!["search", "3", "3", "--threads", "2"], 16),
    ] {
        let v = json(&args);
        assert_eq!(v["best"], best, "{args:?}");
        assert_eq!(v["exhaustive"], true);
        for w in v["witnesses"].as_array().unwrap() {
            let mut cmd = vec!["diameter", w["group"].as_str().unwrap()];
            let gens: Vec<String> = w["generators"]
                .as_array()
                .unwrap()
                .iter()
                .map(|g| {
                    g.as_array()
                        .unwrap()
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            cmd.extend(gens.iter().map(String::as_str));
            let p = json(&cmd);
            assert!(p["diameter"].as_u64().unwrap() <= v["k"].as_u64().unwrap());
            assert_eq!(p["order"], best);
        }
    }
}

#[test]
fn table_rows() {
    let v = json(&["table", "4"]);
    let rows = v.as_array().unwrap();
    let nc: Vec<u64> = rows.iter().map(|r| r["nc3"].as_u64().unwrap()).collect();
    assert_eq!(nc, [4, 9, 16, 27]);
    let delta: Vec<&str> = rows.iter().map(|r| r["delta"].as_str().unwrap()).collect();
    assert_eq!(delta, ["0.06250", "0.07200", "0.07407", "0.07872"]);
    let col4: Vec<&str> = rows
        .iter()
        .map(|r| r["floor_k3_3_9"].as_str().unwrap())
        .collect();
    assert_eq!(col4, ["7", "13", "24", "38"]);
    assert!(rows.iter().all(|r| r["source"] == "search"));

    let csv = stdout(&["table", "10", "--search-up-to", "2", "--format", "csv"]);
    let k7 = csv.lines().find(|l| l.starts_with("7,")).unwrap();
    assert_eq!(k7, "7,0.08400,29,42,120,111,84,published");
}

#[test]
fn hyperl_outputs() {
    assert_eq!(
        stdout(&["hyperl", "--mn", "2"])
            .lines()
            .take(2)
            .collect::<Vec<_>>(),
        ["1 .", "0 1"]
    );
    let v = json(&["hyperl", "--mn", "3", "--verify"]);
    assert_eq!(v["size"], 16);
    assert_eq!(v["max_norm"], 3);
    let csv = stdout(&["hyperl", "4,-1;-1,4", "--format", "csv"]);
    assert_eq!(csv.lines().next(), Some("x1,x2,norm"));
    assert_eq!(csv.lines().count(), 16);
}

#[test]
fn bounds_report() {
    let text = stdout(&["bounds", "3", "7"]);
    assert!(text.contains("= 2\n"));
    let v = json(&["bounds", "3", "9"]);
    assert_eq!(v["family_coefficient"], "2");
    assert_eq!(v["family_at_k"]["order"], "128");
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("abelcay-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    stdout(&["bounds", "2", "4", "--format", "json", "--output", p]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["nc2"], 11);
    assert_eq!(v["na2"], 12);
    std::fs::remove_file(path).unwrap();
}
