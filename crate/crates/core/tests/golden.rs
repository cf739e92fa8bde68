use sha2::{Digest, Sha256};

use subcycle::corpus::{
    cycle_corpus, planar_corpus, serialize_cycle_corpus, serialize_planar_corpus,
    serialize_wfh_corpus, wfh_corpus, WfhBounds,
};

const GOLDEN: &str = include_str!("golden/corpus.sha256");

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn regenerated() -> Vec<(&'static str, String)> {
    let bounds = WfhBounds {
        max_k: 6,
        universe: 16,
        max_families: 8,
        max_family: 5,
    };
    vec![
        (
            "cycles",
            digest(&serialize_cycle_corpus(&cycle_corpus(1, 240, 10))),
        ),
        (
            "planar",
            digest(&serialize_planar_corpus(&planar_corpus(2, 60, 9))),
        ),
        (
            "wfh",
            digest(&serialize_wfh_corpus(&wfh_corpus(3, 320, bounds))),
        ),
    ]
}

#[test]
fn corpus_digests_match_golden_file() {
    let stored: Vec<(&str, &str)> = GOLDEN
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_once(' ').expect("name digest"))
        .collect();
    let fresh = regenerated();
    let printable: Vec<String> = fresh.iter().map(|(n, d)| format!("{n} {d}")).collect();
    assert_eq!(
        stored.len(),
        fresh.len(),
        "regenerated:\n{}",
        printable.join("\n")
    );
    for ((name, want), (fresh_name, got)) in stored.iter().zip(&fresh) {
        assert_eq!(name, fresh_name);
        assert_eq!(
            want,
            got,
            "{name} corpus drifted; regenerated:\n{}",
            printable.join("\n")
        );
    }
}

#[test]
fn corpus_is_byte_identical_across_runs() {
    assert_eq!(regenerated(), regenerated());
}
