//! Generates the synthetic campus, precomputes it and plans one route
//! across both buildings.
//!
//! ```text
//! cargo run --release -p osmag --example campus
//! ```

use std::time::Instant;

use osmag::planner::{build_passage_graph, precompute_hierarchy, CapabilityProfile, Planner};
use osmag::synth::{campus, CampusParams};

fn main() {
    let model = campus(&CampusParams::default()).build();
    println!("nodes {} areas {} passages {}", model.nodes().len(), model.areas().len(), model.passages().len());
    let t = Instant::now();
    let graph = build_passage_graph(&model, 0.1).expect("campus rasterizes");
    let t_graph = t.elapsed();
    let t = Instant::now();
    let index = precompute_hierarchy(&model, &graph);
    println!("graph {:?}, hierarchy {:?}, {} edges", t_graph, t.elapsed(), graph.edge_count());

    let planner = Planner::new(&model, &graph, Some(&index), CapabilityProfile::default());
    let topological = Planner::new(&model, &graph, Some(&index), CapabilityProfile::default()).with_polylines(false);
    let from = model.polygon("b0f3-n2").unwrap().centroid();
    let to = model.polygon("b1f5-s7").unwrap().centroid();
    for run in ["cold", "warm"] {
        let t = Instant::now();
        let route = planner.plan_local(from, 12.0, to, 20.0).expect("route exists");
        println!("{run} query {:?}: {:.2} m, {} shortcuts", t.elapsed(), route.total_cost, route.shortcuts);
        let t = Instant::now();
        topological.plan_local(from, 12.0, to, 20.0).expect("route exists");
        println!("{run} query without polylines {:?}", t.elapsed());
        if run == "warm" {
            println!("{}", route.passages_crossed.join(" -> "));
        }
    }
}
