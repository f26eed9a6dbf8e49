mod common;

use std::collections::BTreeMap;

use common::{corpus, dominant, named, rows};
use rigged_crystals::explorer::{generate, isomorphic, CrystalGraph};
use rigged_crystals::rigged::{HighestWeight, RiggedConfiguration};
use serde_json::Value;

fn golden() -> Value {
    serde_json::from_str(include_str!("fixtures/a2_infinity_depth3.json")).unwrap()
}

fn rows_of(x: &RiggedConfiguration) -> BTreeMap<String, Vec<[i64; 3]>> {
    let c = x.cartan();
    (0..c.rank())
        .map(|a| {
            let mut v: Vec<[i64; 3]> =
                x.part(a).strings().iter().map(|s| [s.length as i64, s.rigging, x.vacancy(a, s.length)]).collect();
            v.sort();
            (c.label(a).to_string(), v)
        })
        .collect()
}

#[test]
fn a2_infinity_to_depth_three() {
    let g = generate(named("A2"), HighestWeight::Infinity, 3).unwrap();
    let golden = golden();
    let want: BTreeMap<String, BTreeMap<String, Vec<[i64; 3]>>> =
        serde_json::from_value(golden["nodes"].clone()).unwrap();
    let mut key_of = BTreeMap::new();
    for (id, x) in g.nodes().iter().enumerate() {
        let r = rows_of(x);
        let key = want.iter().find(|(_, v)| **v == r).map(|(k, _)| k.clone());
        key_of.insert(id, key.unwrap_or_else(|| panic!("unexpected node\n{x}")));
    }
    assert_eq!(key_of.len(), want.len());
    let mut got: Vec<[String; 3]> = g
        .edges()
        .iter()
        .map(|e| [key_of[&e.src].clone(), key_of[&e.dst].clone(), g.cartan().label(e.index).to_string()])
        .collect();
    let mut edges: Vec<[String; 3]> = serde_json::from_value(golden["edges"].clone()).unwrap();
    got.sort();
    edges.sort();
    assert_eq!(got, edges);
    assert_eq!(g.edges().iter().filter(|e| e.index == 0).count(), 7);
}

#[test]
fn colabel_of_a_single_box() {
    let c = named("A2");
    let x = RiggedConfiguration::empty(c, HighestWeight::Infinity).unwrap().f(0).unwrap();
    let s = x.part(0).strings()[0];
    assert_eq!(x.colabel(0, s).unwrap(), -1);
}

fn graphs() -> Vec<CrystalGraph> {
    let mut out: Vec<CrystalGraph> =
        corpus().into_iter().map(|(c, hw)| generate(c, hw, 4).unwrap()).collect();
    for (name, lambda) in [("A2", vec![2, 1]), ("B3", vec![1, 0, 1]), ("G2", vec![1, 1])] {
        out.push(generate(named(name), dominant(&lambda), usize::MAX).unwrap());
    }
    out
}

#[test]
fn exactly_one_highest_weight_node() {
    for g in graphs() {
        assert_eq!(g.highest_weight_nodes(), vec![g.root()]);
        assert_eq!(g.root(), 0);
    }
}

#[test]
fn edges_follow_the_lowering_operators() {
    for g in graphs() {
        let table = g.successor_table();
        let infinity = g.highest_weight().is_infinity();
        for (id, x) in g.nodes().iter().enumerate() {
            if x.size() as usize >= g.depth() && !g.is_complete() {
                continue;
            }
            for a in 0..g.cartan().rank() {
                let target = x.f(a);
                assert_eq!(target.is_some(), infinity || x.phi(a) > 0);
                assert_eq!(table[id][a].map(|j| &g.nodes()[j]), target.as_ref());
            }
        }
        for e in g.edges() {
            assert_eq!(g.nodes()[e.src].f(e.index).as_ref(), Some(&g.nodes()[e.dst]));
            assert_eq!(g.nodes()[e.dst].e(e.index).as_ref(), Some(&g.nodes()[e.src]));
        }
    }
}

#[test]
fn infinity_depth_counts_boxes() {
    let g = generate(named("A3"), HighestWeight::Infinity, 4).unwrap();
    assert!(g.nodes().iter().all(|x| x.size() <= 4));
    assert!(!g.is_complete());
    // BFS discovery order is by depth
    let sizes: Vec<u64> = g.nodes().iter().map(|x| x.size()).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    for g in graphs() {
        let text = g.to_json();
        let again = generate(g.cartan().clone(), g.highest_weight().clone(), g.depth()).unwrap();
        assert_eq!(again.to_json(), text);
        assert_eq!(again.to_dot(), g.to_dot());
        let back = CrystalGraph::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert!(isomorphic(&g, &back).unwrap());
    }
}

#[test]
fn isomorphism_separates_different_crystals() {
    let g1 = generate(named("B2"), HighestWeight::Infinity, 4).unwrap();
    let g2 = generate(named("C2"), HighestWeight::Infinity, 4).unwrap();
    let g3 = generate(rows(&[&[2, -2], &[-1, 2]]), HighestWeight::Infinity, 4).unwrap();
    assert!(isomorphic(&g2, &g3).unwrap());
    assert!(!isomorphic(&g1, &g2).unwrap());
    let shallow = generate(named("B2"), HighestWeight::Infinity, 3).unwrap();
    assert!(isomorphic(&g1, &shallow).is_err());
}
