//! Text formats: exact layouts, round-trips and parse errors.

use proptest::prelude::*;

use ramsey_stepup::coloring::{gen_base_coloring, BaseColoring};
use ramsey_stepup::params::Rational;
use ramsey_stepup::ramsey::{subset_rank, Certificate, CopySearch, KColoring};
use ramsey_stepup::reduction::{regression, ReductionState};
use ramsey_stepup::template::{gen_template, TemplateFamily};
use ramsey_stepup::{Error, Graph, Hypergraph, ParamSet, PropertyReport};

#[test]
fn graph_layout_is_exact() {
    let g = Graph::from_edges(4, [(2, 1), (0, 3)]).unwrap();
    let text = g.to_text();
    assert_eq!(text, "graph n=4 e=2\n0 3\n1 2\n");
    assert_eq!(Graph::from_text(&text).unwrap(), g);
}

#[test]
fn hypergraph_layout_is_exact() {
    let h = Hypergraph::from_edges(5, 3, [vec![4, 0, 2], vec![0, 1, 2]]).unwrap();
    let text = h.to_text();
    assert_eq!(text, "hypergraph n=5 k=3 e=2\n0 1 2\n0 2 4\n");
    assert_eq!(Hypergraph::from_text(&text).unwrap(), h);
}

#[test]
fn parse_errors_name_the_line() {
    let bad_edge = Graph::from_text("graph n=3 e=1\n2 1\n").unwrap_err();
    assert!(matches!(bad_edge, Error::Parse { line: 2, .. }), "{bad_edge}");
    let short = Hypergraph::from_text("hypergraph n=4 k=3 e=1\n0 1\n").unwrap_err();
    assert!(matches!(short, Error::Parse { line: 2, .. }), "{short}");
    let count = Graph::from_text("graph n=3 e=2\n0 1\n").unwrap_err();
    assert!(matches!(count, Error::Parse { line: 1, .. }), "{count}");
    assert!(Graph::from_text("digraph n=3 e=0\n").is_err());
    assert!(Graph::from_text("").is_err());
}

#[test]
fn coloring_with_and_without_bitmap() {
    let c = gen_base_coloring(16, 3).unwrap();
    let coeff = Rational::new(5, 8);
    let short = c.to_text(coeff, false);
    assert_eq!(short, "basecoloring s=16 seed=3 coeff=5/8\n");
    let full = c.to_text(coeff, true);
    assert_eq!(full.lines().count(), 2);
    for text in [&short, &full] {
        let (back, k) = BaseColoring::from_text(text).unwrap();
        assert_eq!(back, c);
        assert_eq!(k, coeff);
    }
    assert!(c.matches_seed());
}

#[test]
fn coloring_bitmap_must_fit() {
    let mut text = gen_base_coloring(8, 1).unwrap().to_text(Rational::from_integer(1), true);
    text.push_str("ff\n");
    assert!(BaseColoring::from_text(&text).is_err());
}

#[test]
fn template_round_trip() {
    let generated = gen_template(2000, 40, 0.1, &ParamSet::desk(3, 4), 8).unwrap();
    assert!(generated.to_text().starts_with("template n=2000 s=40 "));
    let (_, _, with_copies) = regression::counterexample_instance().unwrap();
    for t in [generated, with_copies] {
        let text = t.to_text();
        let back = TemplateFamily::from_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
    }
}

#[test]
fn certificates_round_trip_and_verify() {
    let k3 = Hypergraph::complete(3, 2);
    // The pentagon and its complement: no monochromatic triangle on K5.
    let mut coloring = KColoring::uniform(5, 2, 0);
    for i in 0..5usize {
        for j in i + 1..5 {
            coloring.colors[subset_rank(&[i, j])] = u8::from(matches!(j - i, 1 | 4));
        }
    }
    let lower = Certificate::LowerBound { target: "K3".into(), q: 2, coloring };
    let text = lower.to_text();
    assert!(text.starts_with("certificate target=K3 k=2 q=2 n=5 kind=lower-bound\nhypergraph n=5 k=2 e=10\n"));
    assert_eq!(Certificate::from_text(&text).unwrap(), lower);
    assert!(lower.verify(&k3, CopySearch::Backtrack));
    assert!(lower.verify(&k3, CopySearch::Enumerate));

    let upper = Certificate::Exhausted { target: "K3".into(), k: 2, q: 2, n: 6, colorings: 32768 };
    let text = upper.to_text();
    assert_eq!(text, "certificate target=K3 k=2 q=2 n=6 kind=upper-bound colorings=32768\nexhausted full\n");
    assert_eq!(Certificate::from_text(&text).unwrap(), upper);
    assert!(upper.verify(&k3, CopySearch::Backtrack));
}

#[test]
fn false_certificates_are_rejected() {
    let k3 = Hypergraph::complete(3, 2);
    let mono = Certificate::LowerBound { target: "K3".into(), q: 2, coloring: KColoring::uniform(5, 2, 0) };
    assert!(!mono.verify(&k3, CopySearch::Backtrack));
    let short = Certificate::Exhausted { target: "K3".into(), k: 2, q: 2, n: 5, colorings: 1024 };
    assert!(!short.verify(&k3, CopySearch::Enumerate));
}

#[test]
fn params_round_trip() {
    for p in [ParamSet::desk(3, 2), ParamSet::paper(4, 9)] {
        let back = ParamSet::from_text(&p.to_text()).unwrap();
        assert_eq!(back, p);
    }
    assert!(ParamSet::from_text("no_such_key = 3\n").is_err());
}

#[test]
fn structured_report_layout() {
    let mut r = PropertyReport::new("demo");
    r.record("a", 1).record("b", "x");
    assert_eq!(r.to_structured(), "report-v1 name=demo status=pass definitive=true\na=1\nb=x\n");
    r.fail("broken");
    assert!(r.to_structured().ends_with("counterexample=broken\n"));
}

#[test]
fn reduction_state_round_trip() {
    let (state, _, template) = regression::counterexample_instance().unwrap();
    let text = state.to_text();
    assert!(text.starts_with("reduction-state v1\nstate k=3 u=3 n=64 "));
    let back = ReductionState::from_text(&text).unwrap();
    assert_eq!(back, state);
    assert!(back.audit_invariants(&template).passed());
}

/// Checked-in regression assets equal what the builders produce now.
/// `REGEN_ASSETS=1` rewrites them.
#[test]
fn regression_assets_match_builders() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let (state, sc, template) = regression::counterexample_instance().unwrap();
    let (adv, _, _) = regression::advanced_instance().unwrap();
    let assets = [
        ("counterexample.state", state.to_text()),
        ("counterexample.tmpl", template.to_text()),
        ("counterexample.coloring", sc.base.to_text(sc.params.base_exponent_coeff, true)),
        ("advanced.state", adv.to_text()),
    ];
    for (name, text) in assets {
        let path = dir.join(name);
        if std::env::var_os("REGEN_ASSETS").is_some() {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let stored = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(stored, text, "{name} is stale");
    }
}

fn edge_lists(max_n: usize, k: usize) -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (k..=max_n).prop_flat_map(move |n| {
        let edge = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k);
        (Just(n), proptest::collection::vec(edge, 0..20))
    })
}

proptest! {
    #[test]
    fn graph_text_round_trips((n, edges) in edge_lists(12, 2)) {
        let unique: std::collections::BTreeSet<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(n, unique).unwrap();
        let text = g.to_text();
        prop_assert_eq!(Graph::from_text(&text).unwrap(), g);
    }

    #[test]
    fn hypergraph_text_round_trips(k in 2usize..5, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(k..10);
        let edges: std::collections::BTreeSet<Vec<usize>> = (0..rng.gen_range(0..15))
            .map(|_| {
                let mut e = rand::seq::index::sample(&mut rng, n, k).into_vec();
                e.sort_unstable();
                e
            })
            .collect();
        let h = Hypergraph::from_edges(n, k, edges).unwrap();
        prop_assert_eq!(Hypergraph::from_text(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn coloring_text_round_trips(s in 2usize..40, seed in any::<u64>(), bitmap in any::<bool>()) {
        let c = gen_base_coloring(s, seed).unwrap();
        let (back, _) = BaseColoring::from_text(&c.to_text(Rational::from_integer(1), bitmap)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn k_coloring_certificate_round_trips(n in 2usize..7, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut c = KColoring::uniform(n, 2, 0);
        for x in c.colors.iter_mut() {
            *x = rng.gen_range(0..3);
        }
        let cert = Certificate::LowerBound { target: "P3".into(), q: 3, coloring: c };
        prop_assert_eq!(Certificate::from_text(&cert.to_text()).unwrap(), cert);
    }
}
