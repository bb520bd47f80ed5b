use std::fs;
use std::path::PathBuf;

use tempfile::TempDir;
use treechoice::cli::{run, EXIT_BUDGET, EXIT_FAILS, EXIT_OK, EXIT_USAGE};
use treechoice::{catalog, io, Domain, Preference};

struct Ws {
    dir: TempDir,
}

impl Ws {
    fn new() -> Self {
        let ws = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        let line4 = catalog::line(4);
        ws.write("line4.json", &io::tree_to_string(&line4));
        ws.write("star.json", r#"{"nodes": ["c", "x", "y", "z"], "edges": [["c", "x"], ["c", "y"], ["c", "z"]]}"#);
        let sp = Domain::single_peaked(&line4);
        ws.write("sp-line4.json", &io::domain_to_string(&sp));
        let bad = Preference::from_tokens(&["d", "b", "c", "a"], line4.nodes()).unwrap();
        ws.write("sp-line4-dbca.json", &io::domain_to_string(&sp.with_preference(bad).unwrap()));
        ws.write("p-cd.json", r#"{"entries": [["c", "b", "a", "d"], ["d", "c", "b", "a"]]}"#);
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) {
        fs::write(self.path(name), text).unwrap();
    }

    /// Runs with `@name` arguments replaced by paths in the workspace.
    fn run(&self, args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["treechoice".to_string()];
        for a in args {
            match a.strip_prefix('@') {
                Some(name) => argv.push(self.path(name).display().to_string()),
                None => argv.push(a.to_string()),
            }
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn eval_prints_the_outcome() {
    let ws = Ws::new();
    let (code, out, _) = ws.run(&["eval", "--tree", "@line4.json", "--leaf", "a", "--profile", "@p-cd.json"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "c"));

    ws.write("rule.json", r#"{"type": "extreme", "leaf": "d"}"#);
    let (code, out, _) = ws.run(&[
        "--format", "structured", "eval", "--tree", "@line4.json", "--rule", "@rule.json", "--profile", "@p-cd.json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["outcome"], "d");
    assert_eq!(v["tops"], serde_json::json!(["c", "d"]));

    ws.write("p-idx.json", r#"{"indices": [0, 7]}"#);
    let (code, out, _) = ws.run(&[
        "eval", "--tree", "@line4.json", "--leaf", "d", "--profile", "@p-idx.json", "--domain", "@sp-line4.json",
    ]);
    assert_eq!((code, out.trim()), (EXIT_OK, "d"));
}

#[test]
fn star_center_outcome() {
    let ws = Ws::new();
    ws.write("p-xy.json", r#"{"entries": [["x", "c", "y", "z"], ["y", "c", "x", "z"]]}"#);
    let (code, out, _) = ws.run(&["eval", "--tree", "@star.json", "--leaf", "z", "--profile", "@p-xy.json"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "c"));
}

#[test]
fn hull_and_minimizer() {
    let ws = Ws::new();
    let (code, out, _) = ws.run(&["hull", "--tree", "@line4.json", "--nodes", "a,c"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "{a,b,c}"));
    let (code, out, _) = ws.run(&["minimizer", "--tree", "@star.json", "--from", "z", "--nodes", "x,y"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "c"));
    let (code, _, err) = ws.run(&["hull", "--tree", "@line4.json", "--nodes", "a,q"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn check_rule_exit_codes() {
    let ws = Ws::new();
    let base = ["check-rule", "--property", "sp", "--tree", "@line4.json", "--leaf", "a", "--n", "2"];
    let (code, _, _) = ws.run(&[&base[..], &["--domain", "@sp-line4.json"]].concat());
    assert_eq!(code, EXIT_OK);

    let (code, out, _) = ws.run(&[&["--format", "structured"], &base[..], &["--domain", "@sp-line4-dbca.json"]].concat());
    assert_eq!(code, EXIT_FAILS);
    let v = json(&out);
    assert_eq!(v["verdict"], "fails");
    assert_eq!(v["witness"]["kind"], "manipulation");
    assert_eq!(v["witness"]["truthful_outcome"], "c");
    assert_eq!(v["witness"]["deviating_outcome"], "b");
    let keys: Vec<&str> = ["\"property\"", "\"verdict\"", "\"witness\"", "\"profiles_examined\"", "\"work_units\""]
        .into_iter()
        .collect();
    let pos: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));

    let (code, out, _) = ws.run(&[
        "--format", "structured", "check-rule", "--tree", "@line4.json", "--leaf", "a", "--domain", "@sp-line4.json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out).as_array().unwrap().len(), 4);

    let (code, _, err) = ws.run(&[&base[..], &["--domain", "@sp-line4.json", "--budget", "10"]].concat());
    assert_eq!(code, EXIT_BUDGET);
    assert!(err.contains("10"), "{err}");
}

#[test]
fn manipulation_and_proof_witness() {
    let ws = Ws::new();
    for extra in [&[][..], &["--tops-only"][..]] {
        let args = [
            &["find-manipulation", "--tree", "@line4.json", "--leaf", "a", "--domain", "@sp-line4-dbca.json"][..],
            extra,
        ]
        .concat();
        assert_eq!(ws.run(&args).0, EXIT_FAILS);
    }
    let (code, _, _) = ws.run(&["find-manipulation", "--tree", "@line4.json", "--leaf", "d", "--domain", "@sp-line4.json"]);
    assert_eq!(code, EXIT_OK);

    let (code, out, _) = ws.run(&[
        "--format", "structured", "proof-witness", "--tree", "@line4.json", "--domain", "@sp-line4-dbca.json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["leaf"], "a");
    assert_eq!(v["witness"]["truthful_outcome"], "c");
    assert_eq!(v["witness"]["deviating_outcome"], "b");

    let (code, _, _) = ws.run(&[
        "proof-witness", "--tree", "@line4.json", "--domain", "@sp-line4.json", "--bad-pref", "a,b,c,d",
    ]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn enumerate_and_check_domains() {
    let ws = Ws::new();
    let (code, out, _) = ws.run(&["enumerate-sp", "--tree", "@star.json"]);
    assert_eq!(code, EXIT_OK);
    let d = io::domain_from_str(&out).unwrap();
    assert_eq!(d.len(), 6 + 3 * 2);
    assert_eq!(io::domain_to_string(&d), out);

    let (code, _, _) = ws.run(&["enumerate-sp", "--tree", "@star.json", "--output", "@sp-star.json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(fs::read_to_string(ws.path("sp-star.json")).unwrap(), out);
    assert_eq!(ws.run(&["check-sp-domain", "--tree", "@star.json", "--domain", "@sp-star.json"]).0, EXIT_OK);
    assert_eq!(
        ws.run(&["check-sp-domain", "--tree", "@line4.json", "--domain", "@sp-line4-dbca.json"]).0,
        EXIT_FAILS
    );
}

#[test]
fn pareto_reports_the_peak_hull() {
    let ws = Ws::new();
    let (code, out, _) = ws.run(&["--format", "structured", "pareto", "--profile", "@p-cd.json", "--tree", "@line4.json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["pareto"], serde_json::json!(["c", "d"]));
    assert_eq!(v["pareto"], v["peak_hull"]);
}

#[test]
fn usage_errors() {
    let ws = Ws::new();
    assert_eq!(ws.run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(ws.run(&[]).0, EXIT_USAGE);
    assert_eq!(ws.run(&["--help"]).0, EXIT_OK);
    assert_eq!(
        ws.run(&["eval", "--tree", "@line4.json", "--leaf", "b", "--profile", "@p-cd.json"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        ws.run(&["check-rule", "--tree", "@line4.json", "--leaf", "a", "--domain", "@sp-line4.json", "--n", "0"]).0,
        EXIT_USAGE
    );
    assert_eq!(ws.run(&["--budget", "0", "hull", "--tree", "@line4.json", "--nodes", "a"]).0, EXIT_USAGE);
    assert_eq!(ws.run(&["hull", "--tree", "@missing.json", "--nodes", "a"]).0, EXIT_USAGE);
}

#[test]
fn malformed_files_are_diagnosed() {
    let ws = Ws::new();
    ws.write("loop.json", r#"{"nodes": ["u", "v", "w"], "edges": [["u", "v"], ["u", "u"]]}"#);
    let (code, _, err) = ws.run(&["hull", "--tree", "@loop.json", "--nodes", "u"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("self-loop") || err.contains("self loop"), "{err}");

    ws.write("bad.json", "{\"nodes\": [\"a\", \"b\", \"c\"],\n \"edges\": [[\"a\", \"b\"], [\"b\"]]}");
    let (code, _, err) = ws.run(&["hull", "--tree", "@bad.json", "--nodes", "a"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("edges[1]") && err.contains("line 2"), "{err}");
}

#[test]
fn files_round_trip() {
    for t in catalog::catalog(3..=6) {
        let text = io::tree_to_string(&t.tree);
        assert_eq!(io::tree_from_str(&text).unwrap(), t.tree);
        let d = Domain::single_peaked(&t.tree);
        let text = io::domain_to_string(&d);
        assert_eq!(io::domain_to_string(&io::domain_from_str(&text).unwrap()), text);
    }
    let p = treechoice::Profile::from_indices(&Domain::single_peaked(&catalog::star(4)), &[0, 3, 5]).unwrap();
    let text = io::profile_to_string(&p);
    let ws = Ws::new();
    ws.write("p.json", &text);
    assert_eq!(io::load_profile(&ws.path("p.json"), p.alphabet(), None).unwrap(), p);
}

#[test]
fn sweep_output_is_identical_across_worker_counts() {
    let ws = Ws::new();
    let args = |jobs: &'static str| {
        vec!["--format", "structured", "--jobs", jobs, "theorem-sweep", "--max-nodes", "4", "--n", "2,3"]
    };
    let (c1, a, _) = ws.run(&args("1"));
    let (c2, b, _) = ws.run(&args("3"));
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let verdicts = json(&a);
    assert!(verdicts.as_array().unwrap().iter().all(|v| v["consistent"] == true));

    let (code, text, _) = ws.run(&["theorem-sweep", "--max-nodes", "3", "--forward-only"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.ends_with("1 verdicts, 0 inconsistent\n"), "{text}");
}
