//! Regenerates the map fixtures under `fixtures/`.
//!
//! ```text
//! cargo run -p osmag --example gen_fixtures -- fixtures
//! ```
//!
//! Valid maps go to `fixtures/`, maps with exactly one seeded defect to
//! `fixtures/defects/` (named after the expected diagnostic code) and the two
//! halves of a split map to `fixtures/merge/`.

use std::path::{Path, PathBuf};

use osmag::io::{serialize_document, Attrs, OsmDocument, RawNode, RawWay};
use osmag::synth::{campus, two_buildings, CampusParams, MapBuilder};

fn floor_with_rooms() -> MapBuilder {
    let mut b = MapBuilder::new();
    b.rect_area("floor", 0.0, 0.0, 10.0, 4.0).structure();
    b.rect_area("r1", 0.0, 0.0, 5.0, 4.0).inner().parent("floor");
    b.rect_area("r2", 5.0, 0.0, 10.0, 4.0).inner().parent("floor");
    b.passage("d1", "r1", "r2", &[(5.0, 1.5), (5.0, 2.5)]);
    b
}

/// One floor: a corridor with five rooms south and three rooms north.
fn office_floor() -> MapBuilder {
    let mut b = MapBuilder::new();
    b.rect_area("floor", 0.0, 0.0, 30.0, 14.0).structure().tag("level", "0");
    b.rect_area("corridor", 0.0, 5.0, 30.0, 9.0).inner().parent("floor").tag("indoor", "corridor");
    for i in 0..5 {
        let x0 = i as f64 * 6.0;
        let id = format!("s{i}");
        b.rect_area(&id, x0, 0.0, x0 + 6.0, 5.0).inner().parent("floor").tag("indoor", "room");
        b.passage(&format!("{id}-door"), &id, "corridor", &[(x0 + 2.0, 5.0), (x0 + 3.0, 5.0)]).tag("door", "yes");
    }
    for i in 0..3 {
        let x0 = i as f64 * 10.0;
        let id = format!("n{i}");
        b.rect_area(&id, x0, 9.0, x0 + 10.0, 14.0).inner().parent("floor").tag("indoor", "room");
        b.passage(&format!("{id}-door"), &id, "corridor", &[(x0 + 4.0, 9.0), (x0 + 5.5, 9.0)]).tag("door", "yes");
    }
    // A second door joins the two western south rooms.
    b.passage("s0-s1", "s0", "s1", &[(6.0, 1.0), (6.0, 2.0)]).tag("door", "yes");
    b
}

/// Non-convex rooms: an L-shaped corridor wrapping a U-shaped lab.
fn l_corridor() -> MapBuilder {
    let mut b = MapBuilder::new();
    b.rect_area("wing", 0.0, 0.0, 24.0, 20.0).structure();
    b.polygon_area("corridor", &[(0.0, 0.0), (24.0, 0.0), (24.0, 3.0), (3.0, 3.0), (3.0, 20.0), (0.0, 20.0)])
        .inner()
        .parent("wing")
        .tag("indoor", "corridor");
    b.polygon_area(
        "lab",
        &[(3.0, 3.0), (24.0, 3.0), (24.0, 20.0), (18.0, 20.0), (18.0, 9.0), (9.0, 9.0), (9.0, 20.0), (3.0, 20.0)],
    )
    .inner()
    .parent("wing")
    .tag("indoor", "room");
    b.rect_area("store", 9.0, 9.0, 18.0, 20.0).inner().parent("wing").tag("indoor", "room");
    b.passage("lab-west", "lab", "corridor", &[(3.0, 15.0), (3.0, 16.5)]).tag("door", "yes");
    b.passage("lab-south", "lab", "corridor", &[(20.0, 3.0), (21.5, 3.0)]).tag("door", "yes");
    b.passage("store-door", "store", "lab", &[(12.0, 9.0), (14.0, 9.0)]).tag("door", "yes");
    b
}

fn two_trees() -> MapBuilder {
    let mut b = MapBuilder::new();
    for (id, ox) in [("west", 0.0), ("east", 30.0)] {
        b.rect_area(id, ox, 0.0, ox + 10.0, 4.0).structure().tag("building", "yes");
        let (r1, r2) = (format!("{id}-1"), format!("{id}-2"));
        b.rect_area(&r1, ox, 0.0, ox + 5.0, 4.0).inner().parent(id);
        b.rect_area(&r2, ox + 5.0, 0.0, ox + 10.0, 4.0).inner().parent(id);
        b.passage(&format!("{id}-door"), &r1, &r2, &[(ox + 5.0, 1.5), (ox + 5.0, 2.5)]);
    }
    b
}

/// The office floor with content the toolkit must carry through untouched:
/// element metadata, a plain OSM way, node tags and non-way elements.
fn annotated() -> OsmDocument {
    let mut doc = office_floor().document();
    doc.osm_attrs.insert("copyright".into(), "fixture".into());
    for (i, n) in doc.nodes.iter_mut().enumerate() {
        n.attrs = Attrs::from([
            ("version".to_string(), (1 + i % 3).to_string()),
            ("changeset".to_string(), "4711".to_string()),
            ("user".to_string(), "surveyor & co".to_string()),
        ]);
    }
    for w in &mut doc.ways {
        w.attrs.insert("version".into(), "2".into());
        if w.tag("osmAG:id") == Some("n1") {
            w.tags.push(("name".into(), "Seminar \"Blue\" <2>".into()));
        }
    }
    let next = doc.nodes.iter().map(|n| n.id).max().unwrap() + 1;
    let (lat, lon) = (doc.nodes[1].lat, doc.nodes[1].lon);
    doc.nodes.push(RawNode {
        id: next,
        lat: lat + 0.00001,
        lon: lon + 0.00001,
        tags: vec![("amenity".into(), "vending_machine".into())],
        attrs: Attrs::new(),
    });
    doc.nodes.push(RawNode { id: next + 1, lat: lat + 0.00002, lon, tags: vec![], attrs: Attrs::new() });
    let way = doc.ways.iter().map(|w| w.id).max().unwrap() + 1;
    doc.ways.push(RawWay {
        id: way,
        refs: vec![next, next + 1],
        tags: vec![("barrier".into(), "handrail".into())],
        attrs: Attrs::new(),
    });
    doc.fragments
        .leading
        .push(r#"<bounds minlat="31.1794" minlon="121.5909" maxlat="31.1796" maxlon="121.5913"/>"#.into());
    doc.fragments.trailing.push(format!(
        r#"<relation id="1"><member type="way" ref="{way}" role=""/><tag k="type" v="site"/></relation>"#
    ));
    doc
}

fn empty() -> OsmDocument {
    OsmDocument {
        osm_attrs: Attrs::from([
            ("version".to_string(), "0.6".to_string()),
            ("generator".to_string(), "osmag-synth".to_string()),
        ]),
        ..Default::default()
    }
}

fn way_mut<'a>(doc: &'a mut OsmDocument, id: &str) -> &'a mut RawWay {
    doc.ways.iter_mut().find(|w| w.tag("osmAG:id") == Some(id)).expect("fixture way")
}

fn defects() -> Vec<(&'static str, OsmDocument)> {
    let mut out = Vec::new();

    let mut b = floor_with_rooms();
    b.rect_area("r3", 2.0, 4.0, 4.0, 7.0).inner().parent("floor");
    out.push(("containment_protruding", b.document()));

    let mut b = floor_with_rooms();
    b.rect_area("r3", 12.0, 0.0, 15.0, 4.0).inner().parent("floor");
    out.push(("containment_outside", b.document()));

    let mut b = floor_with_rooms();
    b.rect_area("r3", 1.0, 1.0, 3.0, 3.0).inner().parent("floor");
    out.push(("overlap_siblings", b.document()));

    let mut b = MapBuilder::new();
    b.rect_area("a", 0.0, 0.0, 5.0, 4.0).inner();
    b.rect_area("b", 4.0, 0.0, 9.0, 4.0).inner();
    out.push(("overlap_roots", b.document()));

    let mut doc = floor_with_rooms().document();
    way_mut(&mut doc, "r2").refs.pop();
    out.push(("open_ring", doc));

    let mut doc = office_floor().document();
    way_mut(&mut doc, "n2").refs.pop();
    out.push(("open_ring_office", doc));

    let mut b = floor_with_rooms();
    b.passage("d2", "r2", "ghost", &[(10.0, 1.0), (10.0, 2.0)]);
    out.push(("dangling_area", b.document()));

    let mut doc = floor_with_rooms().document();
    way_mut(&mut doc, "r1").refs[1] = 999_999;
    out.push(("dangling_node", doc));

    let mut b = floor_with_rooms();
    b.passage("bad", "r1", "r2", &[(2.0, 0.0), (3.0, 0.0)]);
    out.push(("passage_share", b.document()));

    let mut b = MapBuilder::new();
    b.rect_area("lo", 0.0, 0.0, 5.0, 4.0).inner();
    b.level(4.0);
    b.rect_area("hi", 0.0, 0.0, 3.0, 4.0).inner().height(4.0);
    b.passage("lift", "lo", "hi", &[(4.0, 0.0), (5.0, 0.0)]).tag("highway", "elevator");
    out.push(("passage_share_vertical", b.document()));

    out
}

/// The two-room map cut in half: the right half's door names `r1`, which
/// only exists in the left half, and its shared wall is offset by 3 cm.
fn merge_halves() -> (OsmDocument, OsmDocument) {
    let mut a = MapBuilder::new();
    a.rect_area("r1", 0.0, 0.0, 5.0, 4.0).inner();
    a.wall_node(5.0, 1.5).wall_node(5.0, 2.5);
    let mut b = MapBuilder::new();
    b.rect_area("r2", 5.03, 0.0, 9.0, 4.0).inner();
    b.passage("d1", "r2", "r1", &[(5.03, 1.5), (5.03, 2.5)]);
    (a.document(), b.document())
}

fn write(dir: &Path, name: &str, doc: &OsmDocument) {
    let path = dir.join(format!("{name}.osm"));
    std::fs::write(&path, serialize_document(doc)).unwrap();
    println!("{}", path.display());
}

fn main() {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    for sub in ["", "defects", "merge"] {
        std::fs::create_dir_all(root.join(sub)).unwrap();
    }
    let small = CampusParams {
        buildings: 2,
        floors: 3,
        rooms_per_side: 4,
        suites: false,
        target_areas: None,
        target_nodes: None,
        ..Default::default()
    };
    let valid = [
        ("two_rooms", MapBuilder::new().two_room_document()),
        ("office_floor", office_floor().document()),
        ("l_corridor", l_corridor().document()),
        ("two_trees", two_trees().document()),
        ("two_buildings", two_buildings().document()),
        ("small_campus", campus(&small).document()),
        ("campus", campus(&CampusParams::default()).document()),
        ("annotated", annotated()),
        ("empty", empty()),
    ];
    for (name, doc) in &valid {
        write(&root, name, doc);
    }
    for (name, doc) in defects() {
        write(&root.join("defects"), name, &doc);
    }
    let (a, b) = merge_halves();
    write(&root.join("merge"), "left", &a);
    write(&root.join("merge"), "right", &b);
}
