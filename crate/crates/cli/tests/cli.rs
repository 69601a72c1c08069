//! End-to-end tests for the binary: exit codes, output shapes, file
//! inputs, budgets, and the mutation hook.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega-frag"))
        .args(args)
        .env_remove("OMEGA_FRAG_BUDGET")
        .output()
        .expect("binary runs")
}

fn run_with_budget(budget: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega-frag"))
        .args(args)
        .env("OMEGA_FRAG_BUDGET", budget)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("an exit code")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).expect("tmp dir");
    dir.join(name)
}

#[test]
fn synt_prints_the_syntactic_monoid() {
    let out = run(&["synt", "([ab]*aa[ab]*)^w"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("elements (6): 1, a, b, aa, ab, ba"), "{text}");
    assert!(text.contains("accepted: [aa][aa]^w"), "{text}");
    assert!(text.contains("idempotents: 1, b, aa, ab, ba"), "{text}");

    let trivial = run(&["synt", "[ab]^inf"]);
    assert!(stdout(&trivial).contains("elements (1): 1"));

    let two = run(&["synt", "[ab]*a[ab]^inf"]);
    assert!(stdout(&two).contains("elements (2): 1, a"));
}

#[test]
fn decide_exit_codes_encode_the_verdict() {
    assert_eq!(code(&run(&["decide", "alph-bool", "([ab]*aa[ab]*)^w"])), 1);
    assert_eq!(code(&run(&["decide", "alph-bool", "[ab]*a[b]^w"])), 0);
    assert_eq!(code(&run(&["decide", "cantor-bool", "[ab]^inf"])), 0);
    assert_eq!(code(&run(&["decide", "cantor-bool", "[ab]*a[b]^w"])), 1);
    assert_eq!(code(&run(&["decide", "bsigma2", "[ab]*a[b]^w"])), 2);
    assert_eq!(
        code(&run(&[
            "decide",
            "bsigma2",
            "--oracle",
            "assume-yes",
            "[ab]*a[b]^w"
        ])),
        0
    );
}

#[test]
fn invalid_inputs_exit_with_a_distinct_code() {
    let out = run(&["decide", "alph-bool", "(("]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).is_empty());
    let out = run(&["decide", "nonsense-question", "[ab]^inf"]);
    assert_eq!(code(&out), 3);
    let out = run(&["decide", "bsigma2", "--oracle", "evidence:many", "[ab]^inf"]);
    assert_eq!(code(&out), 3);
    let out = run(&["verify", "--bounds", "6", "[ab]^inf"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn emitted_monoid_json_reproduces_the_verdict() {
    let emitted = run(&["synt", "--json", "([ab]*aa[ab]*)^w"]);
    assert_eq!(code(&emitted), 0);
    let path = temp_path("example.monoid.json");
    fs::write(&path, stdout(&emitted)).expect("write monoid file");

    let from_file = run(&["decide", "alph-bool", "--json", path.to_str().unwrap()]);
    let from_regex = run(&["decide", "alph-bool", "--json", "([ab]*aa[ab]*)^w"]);
    assert_eq!(code(&from_file), 1);
    assert_eq!(code(&from_regex), 1);
    assert_eq!(stdout(&from_file), stdout(&from_regex));
    assert!(stdout(&from_file).contains("\"alpha\": \"aa(aab)^w\""));
}

#[test]
fn automaton_json_input_is_accepted() {
    let aut = omega_frag::buchi::compile("[ab]*a[b]^w").unwrap();
    let path = temp_path("eventually_b.aut.json");
    fs::write(&path, aut.to_json()).expect("write automaton file");

    let from_file = run(&["decide", "cantor-bool", "--json", path.to_str().unwrap()]);
    let from_regex = run(&["decide", "cantor-bool", "--json", "[ab]*a[b]^w"]);
    assert_eq!(code(&from_file), 1);
    assert_eq!(stdout(&from_file), stdout(&from_regex));
}

#[test]
fn verify_confirms_and_mutation_breaks_the_representation() {
    let good = run(&["verify", "[ab]*a[b]^w"]);
    assert_eq!(code(&good), 0, "{}", stderr(&good));
    assert!(stdout(&good).contains("verified bound: (6, 6)"));

    let tight = run(&["verify", "--bounds", "3,4", "[ab]*a[b]^w"]);
    assert_eq!(code(&tight), 0);
    assert!(stdout(&tight).contains("verified bound: (3, 4)"));

    let broken = run(&["verify", "--mutate", "drop-block", "[ab]^inf"]);
    assert_eq!(code(&broken), 1);
    assert!(stdout(&broken).contains("disagree"), "{}", stdout(&broken));

    let refused = run(&["verify", "([ab]*aa[ab]*)^w"]);
    assert_eq!(code(&refused), 3);
    assert!(stderr(&refused).contains("nothing to verify"));
}

#[test]
fn budgets_cap_the_computation_and_force_lifts_the_cap() {
    let capped = run_with_budget("3", &["synt", "([ab]*aa[ab]*)^w"]);
    assert_eq!(code(&capped), 3);
    assert!(
        stderr(&capped).contains("exceeds the budget"),
        "{}",
        stderr(&capped)
    );

    let forced = run_with_budget("3", &["synt", "--force", "([ab]*aa[ab]*)^w"]);
    assert_eq!(code(&forced), 0);

    let tight_k = run_with_budget(
        "1,3,5000",
        &["decide", "bsigma2", "--oracle", "evidence:2", "(aa)*|[a]^w"],
    );
    assert_eq!(code(&tight_k), 3);
    assert!(
        stderr(&tight_k).contains("exceeds the budget"),
        "{}",
        stderr(&tight_k)
    );

    let in_k = run_with_budget(
        "1,3,5000",
        &["decide", "bsigma2", "--oracle", "evidence:1", "(aa)*|[a]^w"],
    );
    assert_eq!(code(&in_k), 1);
    assert!(
        stdout(&in_k).contains("words: aa and aaa"),
        "{}",
        stdout(&in_k)
    );

    let malformed = run_with_budget("1,2", &["synt", "[ab]^inf"]);
    assert_eq!(code(&malformed), 3);
}
