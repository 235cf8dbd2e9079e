use nestprof_core::approx::{greedy_vertex_cover, strength_from_cover, Threshold, ViolationGraph};
use nestprof_core::fd::{build_adjacency, fdep_collect, fdep_mine, tane_collect, tane_mine, Nfd};
use nestprof_core::ind::{demarchi_collect, demarchi_mine, spider_collect, spider_mine, Nind};
use nestprof_core::json_model::{enumerate_paths, evaluate_path, Atomic, DocId, DocumentCollection, JsonValue, Path};
use nestprof_core::oracle::{exact_min_vertex_cover, fully_included, validate_nfd, validate_nind};
use nestprof_core::unroll::static_unroll;
use num_rational::Ratio;

fn collection(docs: &[&str]) -> DocumentCollection {
    DocumentCollection::from_values(docs.iter().map(|d| serde_json::from_str::<JsonValue>(d).unwrap())).unwrap()
}

fn p(s: &str) -> Path {
    s.parse().unwrap()
}

fn overlap() -> DocumentCollection {
    collection(&[
        r#"{"a": ["X"], "b": ["X", "Y"]}"#,
        r#"{"a": ["X", "Y"], "b": ["X", "Z"]}"#,
        r#"{"a": ["X"], "b": ["Y"]}"#,
        r#"{"a": ["X"], "b": ["Z"]}"#,
    ])
}

fn relations() -> DocumentCollection {
    collection(&[
        r#"{"id": 2, "parent": 5, "rel": [3, 5], "main": "A", "types": ["A"]}"#,
        r#"{"id": 3, "rel": [2], "main": "D", "types": ["D"]}"#,
        r#"{"id": 4, "parent": 2, "rel": [2], "main": "C", "types": ["A", "C"]}"#,
        r#"{"id": 5, "related": [2], "main": "B", "types": ["B", "C"]}"#,
    ])
}

const PRODUCT: &str = r#"{
  "asin": "B007IJKOMK",
  "salesRank": {"Music": 513528},
  "related": { "also_viewed": ["B00284G31G", "B001HADE96"], "buy_after_viewing": ["B001HADE96"]},
  "categories": [ ["CDs & Vinyl", "Classical"], ["Musical Instruments", "Instrument Acc."] ]
}"#;

fn strings(values: &[&str]) -> Vec<Atomic> {
    values.iter().map(|&v| v.into()).collect()
}

fn find_nind<'a>(out: &'a [Nind], lhs: &str, rhs: &str) -> &'a Nind {
    out.iter().find(|n| n.lhs == p(lhs) && n.rhs == p(rhs)).unwrap()
}

fn find_nfd<'a>(out: &'a [Nfd], lhs: &[&str], rhs: &str) -> Option<&'a Nfd> {
    let lhs: Vec<Path> = lhs.iter().map(|s| p(s)).collect();
    out.iter().find(|n| n.lhs == lhs && n.rhs == p(rhs))
}

#[test]
fn product_paths_and_values() {
    let c = collection(&[PRODUCT]);
    let keys: Vec<&str> = c.documents()[0].root.iter().map(|(k, _)| k).collect();
    assert_eq!(keys, ["asin", "salesRank", "related", "categories"]);
    let cats = evaluate_path(&c.documents()[0], &p("$.categories[*][0]"));
    assert_eq!(cats.iter().cloned().collect::<Vec<_>>(), strings(&["CDs & Vinyl", "Musical Instruments"]));
    assert!(evaluate_path(&c.documents()[0], &p("$.missing")).is_empty());
    let meta = fdep_collect(&c);
    let rank = &meta.doc(1).unwrap()[&p("$.salesRank.Music")];
    assert!(rank.contains(&513528.into()));
}

#[test]
fn product_unrolls_to_four_rows() {
    let table = static_unroll(&collection(&[PRODUCT]));
    assert_eq!(table.rows().len(), 4);
    assert_eq!(table.expansion_factor(), 4.0);
    let cols: Vec<String> = table.columns().iter().map(|c| c.to_string()).collect();
    assert_eq!(
        cols,
        [
            "$.asin",
            "$.salesRank.Music",
            "$.related.also_viewed[*]",
            "$.related.buy_after_viewing[*]",
            "$.categories[*][0]",
            "$.categories[*][1]",
        ]
    );
    let viewed: Vec<_> = table.rows().iter().map(|r| r.cells[2].clone().unwrap()).collect();
    assert_eq!(viewed, strings(&["B00284G31G", "B001HADE96", "B00284G31G", "B001HADE96"]));
    let cat0: Vec<_> = table.rows().iter().map(|r| r.cells[4].clone().unwrap()).collect();
    assert_eq!(
        cat0,
        strings(&["CDs & Vinyl", "CDs & Vinyl", "Musical Instruments", "Musical Instruments"])
    );
    assert!(table.rows().iter().all(|r| r.doc == DocId(1)));
}

#[test]
fn relations_paths() {
    let c = relations();
    let got: Vec<String> = enumerate_paths(&c).iter().map(|p| p.to_string()).collect();
    let mut want = vec!["$.id", "$.parent", "$.rel[*]", "$.main", "$.types[*]", "$.related[*]"];
    want.sort_by_key(|s| p(s));
    assert_eq!(got, want);
    let rel = evaluate_path(&c.documents()[0], &p("$.rel[*]"));
    assert_eq!(rel.iter().cloned().collect::<Vec<_>>(), vec![Atomic::from(3), Atomic::from(5)]);
}

#[test]
fn relations_inclusions() {
    let c = relations();
    assert_eq!(validate_nind(&c, &p("$.parent"), &p("$.id")), (true, Ratio::from_integer(1)));
    assert!(fully_included(&c, &c.documents()[0], &p("$.rel[*]"), &p("$.id")));
    let meta = spider_collect(&c);
    let parents: Vec<_> = meta.values(&p("$.parent")).unwrap().iter().cloned().collect();
    assert_eq!(parents, vec![Atomic::from(2), Atomic::from(5)]);
    let out = spider_mine(&meta, Threshold::EXACT).unwrap();
    assert!(find_nind(&out, "$.parent", "$.id").satisfied);
}

#[test]
fn relations_functional() {
    let c = relations();
    assert!(validate_nfd(&c, &[p("$.id")], &[p("$.rel[*]")]));
    assert!(validate_nfd(&c, &[p("$.id")], &[p("$.main")]));
    assert!(validate_nfd(&c, &[p("$.id")], &[p("$.parent")]));
    let adj = build_adjacency(&tane_collect(&c), 4).unwrap();
    assert!(adj.get(&p("$.id")).unwrap().is_empty());
    for out in [
        tane_mine(&adj, 4, Threshold::EXACT, 3).unwrap(),
        fdep_mine(&fdep_collect(&c), 4, Threshold::EXACT, 3).unwrap(),
    ] {
        assert!(find_nfd(&out, &["$.id"], "$.main").is_some());
    }
}

#[test]
fn overlap_inclusion_strengths() {
    let c = overlap();
    let spider = spider_collect(&c);
    assert_eq!(spider.values(&p("$.a[*]")).unwrap().len(), 2);
    assert_eq!(spider.values(&p("$.b[*]")).unwrap().len(), 3);
    let demarchi = demarchi_collect(&c);
    let x: Vec<&Path> = demarchi.paths_of(&"X".into()).unwrap().into_iter().collect();
    assert_eq!(x, [&p("$.a[*]"), &p("$.b[*]")]);
    let z: Vec<&Path> = demarchi.paths_of(&"Z".into()).unwrap().into_iter().collect();
    assert_eq!(z, [&p("$.b[*]")]);

    let t: Threshold = "0.6".parse().unwrap();
    let a = spider_mine(&spider, t).unwrap();
    let b = demarchi_mine(&demarchi, t).unwrap();
    assert_eq!(a, b);
    let ba = find_nind(&a, "$.b[*]", "$.a[*]");
    assert_eq!(ba.strength, Ratio::new(2, 3));
    assert!(ba.satisfied);
    assert_eq!(find_nind(&a, "$.a[*]", "$.b[*]").strength, Ratio::from_integer(1));
    assert_eq!(validate_nind(&c, &p("$.b[*]"), &p("$.a[*]")), (false, Ratio::new(2, 3)));
    assert!(!fully_included(&c, &c.documents()[1], &p("$.b[*]"), &p("$.a[*]")));
}

#[test]
fn overlap_partitions_and_bitmaps() {
    let c = overlap();
    let meta = tane_collect(&c);
    assert_eq!(meta.partition(&p("$.a[*]"), &"X".into()), Some(vec![1, 2, 3, 4]));
    assert_eq!(meta.partition(&p("$.b[*]"), &"Z".into()), Some(vec![2, 4]));
    let adj = build_adjacency(&meta, 4).unwrap();
    assert_eq!(adj.get(&p("$.a[*]")).unwrap().len(), 6);
    let b: Vec<_> = adj.get(&p("$.b[*]")).unwrap().pairs().collect();
    assert_eq!(b, [(1, 2), (1, 3), (2, 4)]);
    let doc2 = &fdep_collect(&c);
    let doc2 = doc2.doc(2).unwrap();
    assert_eq!(doc2[&p("$.a[*]")].iter().cloned().collect::<Vec<_>>(), strings(&["X", "Y"]));
    assert_eq!(doc2[&p("$.b[*]")].iter().cloned().collect::<Vec<_>>(), strings(&["X", "Z"]));
}

#[test]
fn overlap_functional_strength() {
    let c = overlap();
    assert!(!validate_nfd(&c, &[p("$.a[*]")], &[p("$.b[*]")]));
    let adj = build_adjacency(&tane_collect(&c), 4).unwrap();
    let fdep = fdep_collect(&c);
    let half: Threshold = "0.5".parse().unwrap();
    for out in [tane_mine(&adj, 4, half, 3).unwrap(), fdep_mine(&fdep, 4, half, 3).unwrap()] {
        assert_eq!(find_nfd(&out, &["$.a[*]"], "$.b[*]").unwrap().strength, Ratio::new(2, 4));
    }
    for out in [
        tane_mine(&adj, 4, Threshold::EXACT, 3).unwrap(),
        fdep_mine(&fdep, 4, Threshold::EXACT, 3).unwrap(),
    ] {
        assert!(find_nfd(&out, &["$.a[*]"], "$.b[*]").is_none());
    }
}

#[test]
fn vertex_cover_examples() {
    let g: ViolationGraph = [(2, 3), (3, 4)].into_iter().collect();
    assert_eq!(greedy_vertex_cover(&g), 2);
    assert_eq!(exact_min_vertex_cover(&g), 1);
    assert_eq!(strength_from_cover(2, 4).unwrap(), Ratio::new(1, 2));
    let triangle: ViolationGraph = [(1, 2), (1, 3), (2, 3)].into_iter().collect();
    assert_eq!(greedy_vertex_cover(&triangle), 2);
    assert_eq!(exact_min_vertex_cover(&triangle), 2);
}
