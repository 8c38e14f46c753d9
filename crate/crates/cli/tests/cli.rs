//! End-to-end tests of the binary: exit codes, JSON outputs against the
//! published schema, and file-format round trips.

use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tropls")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("TROPLS_SEED", "11")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_tmp(dir: &tempdir::TempDir, name: &str, content: &str) -> PathBuf {
    let p = dir.path().join(name);
    let mut f = std::fs::File::create(&p).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    p
}

// minimal tempdir to avoid a dependency
mod tempdir {
    use std::path::{Path, PathBuf};
    pub struct TempDir(PathBuf);
    impl TempDir {
        pub fn new(tag: &str) -> TempDir {
            let p = std::env::temp_dir().join(format!(
                "tropls-test-{tag}-{}",
                std::process::id()
            ));
            std::fs::create_dir_all(&p).unwrap();
            TempDir(p)
        }
        pub fn path(&self) -> &Path {
            &self.0
        }
    }
    impl Drop for TempDir {
        fn drop(&mut self) {
            let _ = std::fs::remove_dir_all(&self.0);
        }
    }
}

// ------------------------------------------------------- schema checking

struct Schema {
    root: Value,
}

impl Schema {
    fn load() -> Schema {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json");
        let text = std::fs::read_to_string(path).expect("schema file ships with the repo");
        Schema {
            root: serde_json::from_str(&text).unwrap(),
        }
    }

    fn validate_command(&self, value: &Value) {
        let cmd = value["command"].as_str().expect("output carries a command");
        let schema = &self.root["commands"][cmd];
        assert!(
            !schema.is_null(),
            "no schema for command {cmd:?}"
        );
        let mut path = cmd.to_string();
        self.validate(value, schema, &mut path);
    }

    fn resolve<'a>(&'a self, schema: &'a Value) -> &'a Value {
        match schema.get("$ref").and_then(|r| r.as_str()) {
            Some(name) => &self.root["definitions"][name],
            None => schema,
        }
    }

    fn validate(&self, value: &Value, schema: &Value, path: &mut String) {
        if schema.get("nullable").and_then(|b| b.as_bool()) == Some(true) && value.is_null() {
            return;
        }
        let schema = self.resolve(schema);
        if let Some(ty) = schema.get("type").and_then(|t| t.as_str()) {
            let ok = match ty {
                "object" => value.is_object(),
                "array" => value.is_array(),
                "string" => value.is_string(),
                "integer" => value.is_i64() || value.is_u64(),
                "number" => value.is_number(),
                "boolean" => value.is_boolean(),
                _ => true,
            };
            assert!(ok, "{path}: expected {ty}, got {value}");
        }
        if let Some(vals) = schema.get("enum").and_then(|e| e.as_array()) {
            assert!(vals.contains(value), "{path}: {value} not in {vals:?}");
        }
        if let Some(req) = schema.get("required").and_then(|r| r.as_array()) {
            for key in req {
                let key = key.as_str().unwrap();
                assert!(
                    value.get(key).is_some(),
                    "{path}: missing required {key:?} in {value}"
                );
            }
        }
        if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
            for (key, sub) in props {
                if let Some(v) = value.get(key) {
                    let mut sub_path = format!("{path}.{key}");
                    self.validate(v, sub, &mut sub_path);
                }
            }
        }
        if let Some(items) = schema.get("items") {
            if let Some(arr) = value.as_array() {
                for (i, v) in arr.iter().enumerate() {
                    let mut sub_path = format!("{path}[{i}]");
                    self.validate(v, items, &mut sub_path);
                }
            }
        }
    }
}

// ----------------------------------------------------------------- tests

const BARBELL_GRAPH: &str = r#"{"vertices":["v","w"],"edges":[
  {"id":"loopL","tail":"v","head":"v","length":"1"},
  {"id":"bridge","tail":"v","head":"w","length":"2"},
  {"id":"loopR","tail":"w","head":"w","length":"1"}]}"#;

#[test]
fn rank_and_reduce_round_trip() {
    let dir = tempdir::TempDir::new("rank");
    let schema = Schema::load();
    let g = write_tmp(&dir, "graph.json", BARBELL_GRAPH);
    let d = write_tmp(
        &dir,
        "div.json",
        r#"{"coeffs":[{"at":{"vertex":"v"},"n":1},{"at":{"vertex":"w"},"n":1}]}"#,
    );
    let out = run(&["rank", "-g", g.to_str().unwrap(), "-d", d.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    schema.validate_command(&v);
    assert_eq!(v["rank"], 1);

    let out = run(&[
        "reduce",
        "-g",
        g.to_str().unwrap(),
        "-d",
        d.to_str().unwrap(),
        "--base",
        r#"{"vertex":"v"}"#,
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    schema.validate_command(&v);
    // reduced divisor parses back against the same graph
    let coeffs = v["reduced"]["coeffs"].as_array().unwrap();
    let total: i64 = coeffs.iter().map(|c| c["n"].as_i64().unwrap()).sum();
    assert_eq!(total, 2);
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempdir::TempDir::new("bad");
    let g = write_tmp(
        &dir,
        "bad-graph.json",
        r#"{"vertices":["v"],"edges":[{"id":"e","tail":"v","head":"v","length":"0"}]}"#,
    );
    let d = write_tmp(&dir, "div.json", r#"{"coeffs":[]}"#);
    let out = run(&["rank", "-g", g.to_str().unwrap(), "-d", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["example", "no-such-fixture"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dependence_exit_codes_and_schema() {
    let dir = tempdir::TempDir::new("dep");
    let schema = Schema::load();
    // extract the fg fixture functions through the example command
    let out = run(&["example", "fg", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    schema.validate_command(&v);
    let g = write_tmp(&dir, "graph.json", &v["graph"].to_string());
    let gens = v["module"]["generators"].as_array().unwrap().clone();
    let mut fn_args: Vec<String> = Vec::new();
    for (i, f) in gens.iter().enumerate() {
        let p = write_tmp(&dir, &format!("f{i}.json"), &f.to_string());
        fn_args.push(p.to_str().unwrap().to_string());
    }

    // independent triple: exit 1
    let mut args = vec!["dep", "decide", "-g", g.to_str().unwrap(), "--json"];
    for f in &fn_args {
        args.push("-f");
        args.push(f);
    }
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    schema.validate_command(&v);
    assert_eq!(v["verdict"], "independent");
    assert!(!v["certificate"].is_null());

    // dependent pair: exit 0
    let mut args = vec!["dep", "decide", "-g", g.to_str().unwrap(), "--json"];
    args.extend(["-f", &fn_args[0], "-f", &fn_args[0]]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    schema.validate_command(&v);
    assert_eq!(v["verdict"], "dependent");

    // verify with explicit coefficients
    let mut args = vec![
        "dep",
        "verify",
        "-g",
        g.to_str().unwrap(),
        "--coeffs",
        "0,3",
        "--json",
    ];
    args.extend(["-f", &fn_args[0], "-f", &fn_args[0]]);
    let out = run(&args);
    let v = stdout_json(&out);
    schema.validate_command(&v);
    assert_eq!(v["kind"], "neither");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn module_and_tls_commands() {
    let dir = tempdir::TempDir::new("tls");
    let schema = Schema::load();
    let out = run(&["example", "barbell", "--json"]);
    let v = stdout_json(&out);
    let g = write_tmp(&dir, "graph.json", &v["graph"].to_string());
    let m = write_tmp(&dir, "module.json", &v["module"].to_string());
    let f = write_tmp(
        &dir,
        "gen0.json",
        &v["module"]["generators"][0].to_string(),
    );

    for (args, want_code) in [
        (
            vec![
                "module",
                "member",
                "-g",
                g.to_str().unwrap(),
                "-m",
                m.to_str().unwrap(),
                "-f",
                f.to_str().unwrap(),
                "--json",
            ],
            0,
        ),
        (
            vec![
                "module",
                "minimize",
                "-g",
                g.to_str().unwrap(),
                "-m",
                m.to_str().unwrap(),
                "--json",
            ],
            0,
        ),
        (
            vec![
                "module",
                "slopes",
                "-g",
                g.to_str().unwrap(),
                "-m",
                m.to_str().unwrap(),
                "--json",
            ],
            0,
        ),
        (
            vec![
                "module",
                "cover",
                "-g",
                g.to_str().unwrap(),
                "-m",
                m.to_str().unwrap(),
                "--json",
            ],
            0,
        ),
        (
            vec![
                "tls",
                "verify",
                "-g",
                g.to_str().unwrap(),
                "-m",
                m.to_str().unwrap(),
                "--rank",
                "1",
                "--json",
            ],
            0,
        ),
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(want_code),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        schema.validate_command(&stdout_json(&out));
    }

    // restriction through the CLI
    let sub = write_tmp(
        &dir,
        "sub.json",
        r#"{"vertices":["v"],"edges":[{"id":"loopL"}]}"#,
    );
    let out = run(&[
        "tls",
        "restrict",
        "-g",
        g.to_str().unwrap(),
        "-m",
        m.to_str().unwrap(),
        "--subgraph",
        sub.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    schema.validate_command(&stdout_json(&out));
}

#[test]
fn tls_generate_and_obstruct() {
    let dir = tempdir::TempDir::new("gen");
    let schema = Schema::load();
    let g = write_tmp(
        &dir,
        "interval.json",
        r#"{"vertices":["x","y"],"edges":[{"id":"e","tail":"x","head":"y","length":"1"}]}"#,
    );
    let d = write_tmp(&dir, "d.json", r#"{"coeffs":[{"at":{"vertex":"x"},"n":2}]}"#);
    let out = run(&[
        "tls",
        "generate-rank1",
        "-g",
        g.to_str().unwrap(),
        "-d",
        d.to_str().unwrap(),
        "--w0",
        r#"{"edge":"e","t":"3/4"}"#,
        "--w1",
        r#"{"edge":"e","t":"1/4"}"#,
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    schema.validate_command(&v);
    assert_eq!(v["module"]["generators"].as_array().unwrap().len(), 3);

    // luo obstruction through files
    let out = run(&["example", "luo", "--json"]);
    let v = stdout_json(&out);
    let g = write_tmp(&dir, "luo.json", &v["graph"].to_string());
    let d = write_tmp(&dir, "luo-div.json", &v["divisor"].to_string());
    let out = run(&[
        "tls",
        "obstruct-rank1",
        "-g",
        g.to_str().unwrap(),
        "-d",
        d.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    schema.validate_command(&v);
    assert_eq!(v["found"], true);
}

#[test]
fn matroid_and_morph_commands() {
    let dir = tempdir::TempDir::new("mat");
    let schema = Schema::load();
    let m = write_tmp(
        &dir,
        "fano.json",
        r#"{"elements":["1","2","3","4","5","6","7"],
            "lines":[["1","2","4"],["2","3","5"],["3","4","6"],["4","5","7"],
                     ["5","6","1"],["6","7","2"],["7","1","3"]]}"#,
    );
    for sub in ["check", "flats", "levi", "series"] {
        let out = run(&["matroid", sub, "-m", m.to_str().unwrap(), "--json"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        schema.validate_command(&stdout_json(&out));
    }
    let u23 = write_tmp(
        &dir,
        "u23.json",
        r#"{"elements":["1","2","3"],"circuits":[["1","2","3"]],"rank":2}"#,
    );
    let out = run(&[
        "matroid",
        "bergman",
        "-m",
        u23.to_str().unwrap(),
        "--point",
        r#"["0","0","5"]"#,
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    schema.validate_command(&stdout_json(&out));
    let out = run(&[
        "matroid",
        "bergman",
        "-m",
        u23.to_str().unwrap(),
        "--point",
        r#"["0","3","5"]"#,
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // morph on the interval series
    let out = run(&["example", "interval", "--json"]);
    let v = stdout_json(&out);
    let g = write_tmp(&dir, "interval.json", &v["graph"].to_string());
    let module = write_tmp(&dir, "module.json", &v["module"].to_string());
    for sub in ["modify", "map", "balance"] {
        let out = run(&[
            "morph",
            sub,
            "-g",
            g.to_str().unwrap(),
            "-m",
            module.to_str().unwrap(),
            "--json",
        ]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        schema.validate_command(&stdout_json(&out));
    }
    // dot output is well-formed-ish
    let out = run(&[
        "morph",
        "balance",
        "-g",
        g.to_str().unwrap(),
        "-m",
        module.to_str().unwrap(),
        "--dot",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("graph {") && text.trim_end().ends_with('}'));
}

#[test]
fn example_fixtures_build_and_check() {
    let schema = Schema::load();
    let out = run(&["example", "list", "--json"]);
    let v = stdout_json(&out);
    schema.validate_command(&v);
    let names: Vec<String> = v["names"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n.as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        names,
        vec!["lollipop", "barbell", "interval", "fg", "luo", "loop-of-loops", "fano", "u34"]
    );
    for name in &names {
        let out = run(&["example", name, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        schema.validate_command(&stdout_json(&out));
    }
    // every fixture's fact table passes end to end
    for name in &names {
        let out = run(&["example", name, "--check", "--json"]);
        let v = stdout_json(&out);
        schema.validate_command(&v);
        assert_eq!(out.status.code(), Some(0), "{name}: {v}");
        assert_eq!(v["passed"], true, "{name}");
    }
}

#[test]
fn round_trip_is_identity_on_the_fixture_corpus() {
    let dir = tempdir::TempDir::new("rt");
    // fixtures whose shipped generator set is already minimal
    for name in ["barbell", "interval", "fg"] {
        let out = run(&["example", name, "--json"]);
        let v = stdout_json(&out);
        let g = write_tmp(&dir, "graph.json", &v["graph"].to_string());
        let m = write_tmp(&dir, "module.json", &v["module"].to_string());
        // feeding the serialized module back through minimize must parse
        // and re-serialize to the same generators
        let out = run(&[
            "module",
            "minimize",
            "-g",
            g.to_str().unwrap(),
            "-m",
            m.to_str().unwrap(),
            "--json",
        ]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let back = stdout_json(&out);
        assert_eq!(back["module"], v["module"], "{name}");
    }
}
