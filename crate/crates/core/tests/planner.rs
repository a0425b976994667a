//! Route-level properties of the planner on the fixture maps.

use std::path::PathBuf;

use osmag::cost::Cost;
use osmag::geo::LocalPoint;
use osmag::model::MapModel;
use osmag::planner::{
    build_passage_graph, precompute_hierarchy, CacheFile, CapabilityProfile, Effect, HierarchicalCostIndex,
    PassageGraph, PlanError, Planner, Route, Rule, ValueMatch, GOAL, START,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn load(name: &str) -> MapModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    MapModel::from_osm_bytes(&std::fs::read(path).unwrap()).unwrap()
}

fn prepare(name: &str) -> (MapModel, PassageGraph, HierarchicalCostIndex) {
    let m = load(name);
    let g = build_passage_graph(&m, 0.1).unwrap();
    let i = precompute_hierarchy(&m, &g);
    (m, g, i)
}

/// A uniformly drawn inner leaf and a point the model locates inside it.
fn random_point(m: &MapModel, rng: &mut impl Rng) -> (LocalPoint, f64) {
    let leaves: Vec<_> = m.leaf_areas().into_iter().filter(|a| a.is_inner()).collect();
    loop {
        let a = leaves[rng.gen_range(0..leaves.len())];
        let poly = m.polygon(&a.osmag_id).unwrap();
        let bb = poly.bbox();
        for _ in 0..50 {
            let p = LocalPoint::new(rng.gen_range(bb.min.x..bb.max.x), rng.gen_range(bb.min.y..bb.max.y));
            if poly.boundary_distance(p) > 0.3
                && poly.contains_point(p)
                && m.locate(p, a.height).is_ok_and(|l| l.osmag_id == a.osmag_id)
            {
                return (p, a.height);
            }
        }
    }
}

fn check_route_shape(m: &MapModel, r: &Route) {
    assert_eq!(r.legs.first().unwrap().entry, START);
    assert_eq!(r.legs.last().unwrap().exit, GOAL);
    for w in r.legs.windows(2) {
        assert_eq!(w[0].exit, w[1].entry);
        let p = m.passage(&w[0].exit).unwrap();
        assert_eq!(p.other_side(&w[0].area), Some(w[1].area.as_str()));
    }
    let sum = r.legs.iter().map(|l| l.cost).chain(r.crossings.iter().map(|c| c.cost)).fold(Cost::ZERO, |a, b| a + b);
    assert_eq!(sum, r.total);
    for leg in &r.legs {
        let poly = m.polygon(&leg.area).unwrap();
        for p in &leg.polyline {
            assert!(poly.contains_point(*p) || poly.boundary_distance(*p) < 0.15, "{} {p:?}", leg.area);
        }
    }
}

#[test]
fn hierarchy_matches_flat_search() {
    for name in ["two_trees.osm", "l_corridor.osm", "small_campus.osm", "two_buildings.osm"] {
        let (m, g, idx) = prepare(name);
        let flat = Planner::new(&m, &g, None, CapabilityProfile::default());
        let hier = Planner::new(&m, &g, Some(&idx), CapabilityProfile::default());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let (s, hs) = random_point(&m, &mut rng);
            let (t, ht) = random_point(&m, &mut rng);
            let a = flat.plan_local(s, hs, t, ht);
            let b = hier.plan_local(s, hs, t, ht);
            match (&a, &b) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a.total, b.total, "{name}");
                    check_route_shape(&m, a);
                    check_route_shape(&m, b);
                }
                (Err(x), Err(y)) => assert_eq!(x, y),
                _ => panic!("{name}: flat {a:?} vs hierarchical {b:?}"),
            }
        }
    }
}

#[test]
fn wheeled_avoids_steps_and_legged_pays_more() {
    let (m, g, idx) = prepare("two_buildings.osm");
    let default = Planner::new(&m, &g, Some(&idx), CapabilityProfile::default());
    let wheeled = Planner::new(&m, &g, Some(&idx), CapabilityProfile::wheeled());
    let legged = Planner::new(&m, &g, Some(&idx), CapabilityProfile::legged());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let (s, hs) = random_point(&m, &mut rng);
        let (t, ht) = random_point(&m, &mut rng);
        let d = default.plan_local(s, hs, t, ht);
        let l = legged.plan_local(s, hs, t, ht);
        match wheeled.plan_local(s, hs, t, ht) {
            Ok(r) => {
                for leg in &r.legs {
                    assert_ne!(m.area(&leg.area).unwrap().tags.get("highway").map(String::as_str), Some("steps"));
                }
                for p in &r.passages_crossed {
                    assert_ne!(m.passage(p).unwrap().tags.get("highway").map(String::as_str), Some("steps"));
                }
                assert!(r.total >= d.as_ref().unwrap().total);
            }
            // Only a start or goal on the stairs is unreachable without them.
            Err(PlanError::NoPath) => {
                let on_stairs = |p, h| m.locate(p, h).unwrap().tags.get("highway").map(String::as_str) == Some("steps");
                assert!(on_stairs(s, hs) || on_stairs(t, ht));
            }
            Err(e) => panic!("{e}"),
        }
        assert!(l.unwrap().total >= d.unwrap().total);
    }
}

#[test]
fn cached_graph_plans_identically() {
    let (m, g, idx) = prepare("small_campus.osm");
    let bytes =
        std::fs::read(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/small_campus.osm")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    CacheFile::new(&bytes, g.clone(), idx.clone()).save(&path).unwrap();
    let c = CacheFile::load_fresh(&path, &bytes, 0.1).unwrap().unwrap();
    let a = Planner::new(&m, &g, Some(&idx), CapabilityProfile::default());
    let b = Planner::new(&m, &c.graph, Some(&c.index), CapabilityProfile::default());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let (s, hs) = random_point(&m, &mut rng);
        let (t, ht) = random_point(&m, &mut rng);
        assert_eq!(a.plan_local(s, hs, t, ht), b.plan_local(s, hs, t, ht));
    }
}

#[test]
fn add_cost_on_a_door_is_paid_once_per_crossing() {
    let (m, g, idx) = prepare("office_floor.osm");
    let profile = CapabilityProfile::new(
        "toll",
        vec![Rule::new("osmAG:id", ValueMatch::Equals("s2-door".into()), Effect::AddCost(7.0))],
    );
    let base = Planner::new(&m, &g, Some(&idx), CapabilityProfile::default());
    let toll = Planner::new(&m, &g, Some(&idx), profile);
    let s = m.polygon("s2").unwrap().centroid();
    let t = m.polygon("n0").unwrap().centroid();
    let a = base.plan_local(s, 0.0, t, 0.0).unwrap();
    let b = toll.plan_local(s, 0.0, t, 0.0).unwrap();
    assert_eq!(a.passages_crossed, b.passages_crossed);
    assert_eq!(b.total, a.total + Cost::from_meters(7.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Raising the vertical rate never makes a route cheaper.
    #[test]
    fn vertical_rate_is_monotone(seed in any::<u64>(), rate in 0.0..5.0f64) {
        let (m, g, idx) = prepare("two_buildings.osm");
        let cheap = CapabilityProfile { vertical_cost_per_meter: rate, ..Default::default() };
        let dear = CapabilityProfile { vertical_cost_per_meter: rate + 1.0, ..Default::default() };
        let a = Planner::new(&m, &g, Some(&idx), cheap);
        let b = Planner::new(&m, &g, Some(&idx), dear);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, hs) = random_point(&m, &mut rng);
        let (t, ht) = random_point(&m, &mut rng);
        let (x, y) = (a.plan_local(s, hs, t, ht).unwrap(), b.plan_local(s, hs, t, ht).unwrap());
        prop_assert!(y.total >= x.total);
    }
}
