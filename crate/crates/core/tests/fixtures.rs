//! Checks over the committed map fixtures.

use std::path::PathBuf;

use osmag::io::{parse_osm, serialize, serialize_document};
use osmag::merge::{merge_documents, DEFAULT_THRESHOLD};
use osmag::model::{validate, MapModel};
use osmag::planner::{build_passage_graph, precompute_hierarchy, CapabilityProfile, Planner};
use osmag::render::{render_svg, HeightBand, RenderStyle};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn osm_files(sub: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir().join(sub))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "osm"))
        .collect();
    v.sort();
    v
}

fn load(name: &str) -> MapModel {
    MapModel::from_osm_bytes(&std::fs::read(dir().join(name)).unwrap()).unwrap()
}

#[test]
fn valid_fixtures_round_trip_and_validate() {
    let files = osm_files("");
    assert!(files.len() >= 8);
    for f in files {
        let bytes = std::fs::read(&f).unwrap();
        let m = MapModel::from_osm_bytes(&bytes).unwrap();
        let errors: Vec<_> = validate(&m).into_iter().filter(|d| d.is_error()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", f.display());
        let once = serialize(&m);
        let again = MapModel::from_osm_bytes(&once).unwrap();
        assert_eq!(again, m, "{}", f.display());
        assert_eq!(serialize(&again), once, "{}", f.display());
    }
}

#[test]
fn annotated_fixture_keeps_foreign_content() {
    let bytes = std::fs::read(dir().join("annotated.osm")).unwrap();
    let doc = parse_osm(&bytes).unwrap();
    let text = String::from_utf8(serialize_document(&doc)).unwrap();
    assert!(text.contains("<bounds "));
    assert!(text.contains("<relation id=\"1\">"));
    assert!(text.contains("barrier"));
    assert!(text.contains("surveyor &amp; co"));
    let m = MapModel::build(&doc).unwrap();
    assert_eq!(m.passthrough_ways().len(), 1);
    assert_eq!(m.area("n1").unwrap().name(), Some("Seminar \"Blue\" <2>"));
}

#[test]
fn each_defect_yields_its_code() {
    let expected = [
        ("containment_outside", "CONTAINMENT"),
        ("containment_protruding", "CONTAINMENT"),
        ("dangling_area", "DANGLING_AREA"),
        ("dangling_node", "DANGLING_NODE"),
        ("open_ring", "OPEN_RING"),
        ("open_ring_office", "OPEN_RING"),
        ("overlap_roots", "OVERLAP"),
        ("overlap_siblings", "OVERLAP"),
        ("passage_share", "PASSAGE_SHARE"),
        ("passage_share_vertical", "PASSAGE_SHARE"),
    ];
    let files = osm_files("defects");
    assert_eq!(files.len(), expected.len());
    for (name, code) in expected {
        let bytes = std::fs::read(dir().join("defects").join(format!("{name}.osm"))).unwrap();
        let doc = parse_osm(&bytes).unwrap();
        let codes: Vec<&str> = match MapModel::build(&doc) {
            Ok(m) => validate(&m).into_iter().filter(|d| d.is_error()).map(|d| d.code).collect(),
            Err(e) => vec![e.code()],
        };
        assert_eq!(codes, vec![code], "{name}");
    }
}

#[test]
fn split_map_merges_back() {
    let read = |n: &str| parse_osm(&std::fs::read(dir().join("merge").join(n)).unwrap()).unwrap();
    let (a, b) = (read("left.osm"), read("right.osm"));
    let (m, report) = merge_documents(&a, &b, DEFAULT_THRESHOLD).unwrap();
    // Four nodes on the shared wall: two corners, two door posts.
    assert_eq!(report.consolidated_node_pairs, 4);
    assert!(report.pairs.iter().all(|p| (0.02..=0.05).contains(&p.2)));
    assert_eq!(m.passages().len(), 1);
    let graph = build_passage_graph(&m, 0.1).unwrap();
    let planner = Planner::new(&m, &graph, None, CapabilityProfile::default());
    let c1 = m.polygon("r1").unwrap().centroid();
    let c2 = m.polygon("r2").unwrap().centroid();
    let route = planner.plan_local(c1, 0.0, c2, 0.0).unwrap();
    assert_eq!(route.passages_crossed, ["d1"]);
}

#[test]
fn render_second_floor_only() {
    let m = load("two_buildings.osm");
    let style = RenderStyle { band: Some(HeightBand { min: 3.5, max: 4.5 }), ..Default::default() };
    let svg = String::from_utf8(render_svg(&m, &style, None).unwrap()).unwrap();
    let ids: Vec<&str> = svg
        .lines()
        .filter(|l| l.starts_with("<polygon"))
        .map(|l| l.split("id=\"area-").nth(1).unwrap().split('"').next().unwrap())
        .collect();
    assert!(!ids.is_empty());
    for id in ids {
        assert_eq!(m.area(id).unwrap().height, 4.0, "{id}");
    }
}

#[test]
fn render_polygons_keep_vertex_counts() {
    let m = load("small_campus.osm");
    let svg = String::from_utf8(render_svg(&m, &RenderStyle::default(), None).unwrap()).unwrap();
    for line in svg.lines().filter(|l| l.starts_with("<polygon")) {
        let id = line.split("id=\"area-").nth(1).unwrap().split('"').next().unwrap();
        let pts = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        let ring = &m.area(id).unwrap().ring;
        let distinct = ring.len() - 1;
        assert_eq!(pts.split(' ').count(), distinct, "{id}");
    }
}

#[test]
fn render_route_through_both_buildings() {
    let m = load("two_buildings.osm");
    let graph = build_passage_graph(&m, 0.1).unwrap();
    let index = precompute_hierarchy(&m, &graph);
    let planner = Planner::new(&m, &graph, Some(&index), CapabilityProfile::default());
    let from = m.polygon("A1-s").unwrap().centroid();
    let to = m.polygon("B1-n").unwrap().centroid();
    let route = planner.plan_local(from, 4.0, to, 4.0).unwrap();
    let svg = String::from_utf8(render_svg(&m, &RenderStyle::default(), Some(&route)).unwrap()).unwrap();
    let areas: Vec<&str> = svg
        .lines()
        .filter(|l| l.contains("class=\"route\""))
        .map(|l| l.split("data-area=\"").nth(1).unwrap().split('"').next().unwrap())
        .collect();
    assert!(areas.iter().any(|a| a.starts_with('A')));
    assert!(areas.iter().any(|a| a.starts_with('B')));
    assert!(areas.contains(&"plaza"));
}
