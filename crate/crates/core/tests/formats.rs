use proptest::prelude::*;

use subcycle::corpus::{
    cycle_corpus, lower_bound_instance, planar_corpus, random_wfh, rng, WfhParams,
};
use subcycle::io::{
    parse_function, parse_graph, parse_wfh, write_function, write_graph, write_wfh, GraphFile,
};
use subcycle::Error;

#[test]
fn corpus_files_round_trip() {
    for case in cycle_corpus(41, 40, 10) {
        let text = write_graph(&GraphFile {
            graph: case.graph.clone(),
            rotation: None,
        });
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.graph, case.graph);
        assert_eq!(write_graph(&back), text);
        let ftext = write_function(&case.function);
        let fback = parse_function(&ftext).unwrap();
        assert_eq!(fback, case.function);
        assert_eq!(write_function(&fback), ftext);
    }
    for case in planar_corpus(42, 30, 9) {
        let file = GraphFile {
            graph: case.graph.graph().clone(),
            rotation: Some(case.graph.edge_rotation()),
        };
        let text = write_graph(&file);
        let back = parse_graph(&text).unwrap();
        let sizes = |faces: Vec<Vec<usize>>| {
            let mut s: Vec<usize> = faces.iter().map(Vec::len).collect();
            s.sort_unstable();
            s
        };
        assert_eq!(
            sizes(back.embedded().unwrap().faces()),
            sizes(case.graph.faces())
        );
        assert_eq!(write_graph(&back), text);
    }
}

#[test]
fn lower_bound_files_round_trip() {
    let (g, f) = lower_bound_instance(3, 2, Some(vec![0, 2, 4, 6]));
    let text = write_function(&f);
    assert_eq!(text, "lb-fc\nlb 3 2 cycle 0 2 4 6\n");
    assert_eq!(parse_function(&text).unwrap(), f);
    assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
}

#[test]
fn diagnostics_carry_line_numbers() {
    let err = parse_graph("n 3\n# comment\ne 0 1\ne 1 7\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    let err = parse_function("modular\nw 0 heavy\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    let err = parse_wfh("k 1\nu 3\nset 0\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
}

proptest! {
    #[test]
    fn wfh_files_round_trip(seed in 0u64..500, k in 1usize..5, fams in 1usize..6) {
        let inst = random_wfh(
            &mut rng(seed),
            WfhParams { k, universe: 10, families: fams, max_family: 4, planted: seed % 2 == 0 },
        );
        let text = write_wfh(&inst);
        let back = parse_wfh(&text).unwrap();
        prop_assert_eq!(back.families(), inst.families());
        prop_assert_eq!(write_wfh(&back), text);
    }
}
