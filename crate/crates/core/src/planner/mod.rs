//! Global path planning over the passage graph.
//!
//! A query runs in five steps:
//!
//! 1. locate the start and goal points in inner leaf areas;
//! 2. if both are in the same leaf, run grid A* there and stop;
//! 3. otherwise connect the start to every passage of its leaf (and every
//!    passage of the goal leaf to the goal) with grid searches;
//! 4. search the passage graph with A*, applying the capability profile to
//!    each area walked through and each passage crossed;
//! 5. expand the result into legs with polylines.
//!
//! The search state is a passage together with the leaf just entered through
//! it. When the [`HierarchicalCostIndex`] is supplied, entering a subtree
//! that holds neither endpoint jumps straight to the subtree's exits using
//! the precomputed table of its highest such ancestor. Tables only hold
//! profile-free costs, so subtrees in which any profile rule fires are
//! searched leaf by leaf.
//!
//! ```
//! use osmag::planner::{build_passage_graph, precompute_hierarchy, CapabilityProfile, Planner};
//! use osmag::synth::MapBuilder;
//! use osmag::geo::LocalPoint;
//!
//! let mut b = MapBuilder::new();
//! b.rect_area("floor", 0.0, 0.0, 9.0, 4.0).structure();
//! b.rect_area("r1", 0.0, 0.0, 5.0, 4.0).inner().parent("floor");
//! b.rect_area("r2", 5.0, 0.0, 9.0, 4.0).inner().parent("floor");
//! b.passage("d1", "r1", "r2", &[(5.0, 1.5), (5.0, 2.5)]);
//! let model = b.build();
//!
//! let graph = build_passage_graph(&model, 0.1).unwrap();
//! let index = precompute_hierarchy(&model, &graph);
//! let planner = Planner::new(&model, &graph, Some(&index), CapabilityProfile::default());
//! let route = planner
//!     .plan_local(LocalPoint::new(1.0, 2.0), 0.0, LocalPoint::new(8.0, 2.0), 0.0)
//!     .unwrap();
//! assert_eq!(route.passages_crossed, ["d1"]);
//! assert!(route.total_cost >= 7.0 && route.total_cost < 7.5);
//! ```

mod cache;
mod graph;
mod hierarchy;
mod profile;

pub use cache::{map_hash, CacheError, CacheFile, CACHE_FORMAT};
pub use graph::{build_passage_graph, graph_passages, octile_m, GraphEdge, GraphError, LeafData, PassageGraph};
pub use hierarchy::{precompute_hierarchy, AreaTable, HierarchicalCostIndex, TableEntry, TableLeg};
pub use profile::{
    apply_effect, apply_profile, CapabilityProfile, Effect, ProfileError, Rule, Scope, Selector, ValueMatch,
    DEFAULT_VERTICAL_COST_PER_METER,
};

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;
use crate::geo::{self, LocalPoint};
use crate::model::MapModel;
use crate::raster::{self, Cell, OccupancyRaster, ANCHOR_SEARCH_RADIUS};
use graph::{Idx, Topology};

/// Reserved leg endpoint names.
pub const START: &str = "START";
pub const GOAL: &str = "GOAL";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("start point is not inside any inner leaf area")]
    StartNotLocated,
    #[error("goal point is not inside any inner leaf area")]
    GoalNotLocated,
    #[error("NoPath: no traversable route between start and goal")]
    NoPath,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A stretch of the route inside one leaf area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub area: String,
    /// Passage id, or [`START`].
    pub entry: String,
    /// Passage id, or [`GOAL`].
    pub exit: String,
    pub cost: Cost,
    pub polyline: Vec<LocalPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub passage: String,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    /// Meters, including vertical components.
    pub total_cost: f64,
    pub total: Cost,
    pub legs: Vec<Leg>,
    pub crossings: Vec<Crossing>,
    pub passages_crossed: Vec<String>,
    /// Number of precomputed table jumps the search took.
    pub shortcuts: usize,
}

impl Route {
    /// The areas walked through, in order.
    pub fn areas(&self) -> Vec<&str> {
        self.legs.iter().map(|l| l.area.as_str()).collect()
    }

    /// All polyline points, in order.
    pub fn points(&self) -> Vec<LocalPoint> {
        let mut out: Vec<LocalPoint> = Vec::new();
        for l in &self.legs {
            for p in &l.polyline {
                if out.last() != Some(p) {
                    out.push(*p);
                }
            }
        }
        out
    }
}

/// A query endpoint in geodetic coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
    pub height: f64,
}

/// One leaf-level step, before expansion.
#[derive(Debug, Clone, Copy)]
enum Move {
    /// From the start (or passage `from`) through `leaf` to passage `to`.
    Leg {
        leaf: Idx,
        from: Option<Idx>,
        to: Idx,
    },
    Table {
        area: Idx,
        from: Idx,
        to: Idx,
    },
    Goal {
        leaf: Idx,
        from: Idx,
    },
}

struct Endpoint {
    point: LocalPoint,
    leaf: Idx,
    cell: Cell,
    raster: Arc<OccupancyRaster>,
}

/// A planner bound to one map, its precomputed data and one profile.
pub struct Planner<'a> {
    model: &'a MapModel,
    graph: &'a PassageGraph,
    index: Option<&'a HierarchicalCostIndex>,
    profile: CapabilityProfile,
    topo: Topology,
    area_effect: Vec<Option<Effect>>,
    /// Crossing cost of each passage; `None` when blocked.
    crossing: Vec<Option<Cost>>,
    /// Whether each non-leaf area's table may be used under this profile.
    shortcut_ok: Vec<bool>,
    /// Tables re-keyed by index: `tables[area][(from, to)]`.
    tables: HashMap<Idx, HashMap<Idx, Vec<(Idx, Cost)>>>,
    heuristic_scale: f64,
    polylines: bool,
}

impl<'a> Planner<'a> {
    pub fn new(
        model: &'a MapModel,
        graph: &'a PassageGraph,
        index: Option<&'a HierarchicalCostIndex>,
        profile: CapabilityProfile,
    ) -> Self {
        let topo = Topology::new(model, graph);
        let area_effect: Vec<Option<Effect>> =
            topo.areas.iter().map(|a| profile.effect_for(true, &model.areas()[a].tags)).collect();
        let passage_effect: Vec<Option<Effect>> =
            topo.passages.iter().map(|p| profile.effect_for(false, &model.passages()[p].tags)).collect();
        let crossing = (0..topo.passages.len())
            .map(|p| {
                let base = Cost::from_meters(topo.rise[p] * profile.vertical_cost_per_meter);
                apply_effect(passage_effect[p], base)
            })
            .collect();

        // A subtree is neutral when no rule touches anything inside it and
        // its vertical crossings are priced as in the tables.
        let n = topo.areas.len();
        let mut dirty = vec![false; n];
        let mark = |leaf: Idx, dirty: &mut Vec<bool>| {
            dirty[leaf as usize] = true;
            for a in &topo.chain[leaf as usize] {
                dirty[*a as usize] = true;
            }
        };
        for a in 0..n {
            if area_effect[a].is_some() {
                mark(a as Idx, &mut dirty);
            }
        }
        let same_rate = index.is_some_and(|i| i.vertical_cost_per_meter == profile.vertical_cost_per_meter);
        for p in 0..topo.passages.len() {
            let (f, t) = topo.sides[p];
            let priced = passage_effect[p].is_some() || (topo.rise[p] > 0.0 && !same_rate);
            if priced {
                // Only ancestors holding both sides see it as an internal passage.
                for a in &topo.chain[f as usize] {
                    if topo.contains(*a, t) {
                        dirty[*a as usize] = true;
                    }
                }
            }
        }
        let mut tables: HashMap<Idx, HashMap<Idx, Vec<(Idx, Cost)>>> = HashMap::new();
        if let Some(index) = index {
            for (area, t) in &index.tables {
                let Some(&a) = topo.area_index.get(area) else { continue };
                let rows = tables.entry(a).or_default();
                for (from, row) in &t.entries {
                    let Some(&f) = topo.passage_index.get(from) else { continue };
                    let mut v: Vec<(Idx, Cost)> = row
                        .iter()
                        .filter(|(to, _)| *to != from)
                        .filter_map(|(to, e)| topo.passage_index.get(to).map(|&q| (q, e.cost)))
                        .collect();
                    v.sort();
                    rows.insert(f, v);
                }
            }
        }
        let shortcut_ok = (0..n).map(|a| !dirty[a] && tables.contains_key(&(a as Idx))).collect();
        let heuristic_scale = profile.min_multiplier().max(0.0);
        Planner {
            model,
            graph,
            index,
            profile,
            topo,
            area_effect,
            crossing,
            shortcut_ok,
            tables,
            heuristic_scale,
            polylines: true,
        }
    }

    /// With `false`, legs carry only their two end points instead of a
    /// grid path, which skips one grid search per leg.
    pub fn with_polylines(mut self, on: bool) -> Self {
        self.polylines = on;
        self
    }

    pub fn profile(&self) -> &CapabilityProfile {
        &self.profile
    }

    /// Plans between two geodetic points.
    pub fn plan(&self, start: GeoPoint, goal: GeoPoint) -> Result<Route, PlanError> {
        let anchor = self.model.root().anchor();
        let s = geo::to_local(start.lat, start.lon, anchor);
        let g = geo::to_local(goal.lat, goal.lon, anchor);
        self.plan_local(s, start.height, g, goal.height)
    }

    /// Plans between two points of the local frame.
    pub fn plan_local(
        &self,
        start: LocalPoint,
        start_height: f64,
        goal: LocalPoint,
        goal_height: f64,
    ) -> Result<Route, PlanError> {
        let s = self.endpoint(start, start_height).ok_or(PlanError::StartNotLocated)??;
        let g = self.endpoint(goal, goal_height).ok_or(PlanError::GoalNotLocated)??;
        if s.leaf == g.leaf {
            return self.same_leaf(&s, &g);
        }
        self.search(&s, &g)
    }

    fn endpoint(&self, p: LocalPoint, height: f64) -> Option<Result<Endpoint, PlanError>> {
        let area = self.model.locate(p, height).ok()?;
        let leaf = *self.topo.area_index.get(&area.osmag_id)?;
        let data = self.graph.leaves.get(&area.osmag_id)?;
        let raster = match data.raster(self.model, self.graph.resolution) {
            Ok(r) => r,
            Err(e) => return Some(Err(e.into())),
        };
        let cell = raster.nearest_free(p, ANCHOR_SEARCH_RADIUS)?;
        Some(Ok(Endpoint { point: p, leaf, cell, raster }))
    }

    fn area_cost(&self, leaf: Idx, base: Cost) -> Option<Cost> {
        apply_effect(self.area_effect[leaf as usize], base)
    }

    fn same_leaf(&self, s: &Endpoint, g: &Endpoint) -> Result<Route, PlanError> {
        let (base_m, polyline) = if s.cell == g.cell {
            (octile_m(s.point, g.point), dedup(vec![s.point, g.point]))
        } else {
            let path = raster::grid_astar(&s.raster, s.cell, g.cell).map_err(|_| PlanError::NoPath)?;
            let first = s.raster.cell_center(s.cell);
            let last = s.raster.cell_center(g.cell);
            let m = octile_m(s.point, first) + path.cost + octile_m(last, g.point);
            let mut pts = vec![s.point];
            pts.extend(path.cells.iter().map(|c| s.raster.cell_center(*c)));
            pts.push(g.point);
            (m, dedup(pts))
        };
        let cost = self.area_cost(s.leaf, Cost::from_meters(base_m)).ok_or(PlanError::NoPath)?;
        let leg = Leg {
            area: self.topo.areas[s.leaf as usize].clone(),
            entry: START.into(),
            exit: GOAL.into(),
            cost,
            polyline,
        };
        Ok(Route {
            total_cost: cost.meters(),
            total: cost,
            legs: vec![leg],
            crossings: Vec::new(),
            passages_crossed: Vec::new(),
            shortcuts: 0,
        })
    }

    /// Grid costs from an endpoint to the anchors of every passage of its
    /// leaf, including the straight segments at both ends.
    fn endpoint_legs(&self, e: &Endpoint) -> Vec<(Idx, Cost)> {
        let leaf_id = &self.topo.areas[e.leaf as usize];
        let data = &self.graph.leaves[leaf_id];
        let ids: Vec<(&String, &Cell)> = data.anchors.iter().collect();
        let targets: Vec<Cell> = ids.iter().map(|(_, c)| **c).collect();
        let found = raster::grid_costs_from(&e.raster, e.cell, &targets);
        let lead = octile_m(e.point, e.raster.cell_center(e.cell));
        let mut out = Vec::new();
        for ((pid, _), path) in ids.into_iter().zip(found) {
            let (Some(path), Some(&p)) = (path, self.topo.passage_index.get(pid)) else { continue };
            out.push((p, Cost::from_meters(lead + path.cost + data.dev[pid])));
        }
        out
    }

    fn heuristic(&self, at: LocalPoint, height: f64, goal: LocalPoint, goal_height: f64) -> Cost {
        let m = at.distance(goal) + (height - goal_height).abs() * self.profile.vertical_cost_per_meter;
        // Shrunk by a hair so rounding can never overestimate.
        Cost::floor_meters(self.heuristic_scale * m * (1.0 - 1e-12))
    }

    fn search(&self, s: &Endpoint, g: &Endpoint) -> Result<Route, PlanError> {
        let topo = &self.topo;
        let np = topo.passages.len();
        // State index: 2p + side, side 0 = we are in sides[p].0.
        let goal_state = 2 * np;
        let state_of = |p: Idx, leaf: Idx| 2 * p as usize + usize::from(topo.sides[p as usize].0 != leaf);
        let leaf_of = |st: usize| {
            let (f, t) = topo.sides[st / 2];
            if st.is_multiple_of(2) {
                f
            } else {
                t
            }
        };
        let goal_height = topo.heights[g.leaf as usize];
        let h = |st: usize| {
            let p = st / 2;
            self.heuristic(topo.midpoints[p], topo.heights[leaf_of(st) as usize], g.point, goal_height)
        };

        let mut best = vec![Cost::MAX; goal_state + 1];
        let mut parent: Vec<Option<(Option<usize>, Move)>> = vec![None; goal_state + 1];
        let mut heap = BinaryHeap::new();
        let start_legs: HashMap<Idx, Cost> = self.endpoint_legs(s).into_iter().collect();
        let goal_legs: HashMap<Idx, Cost> = self.endpoint_legs(g).into_iter().collect();

        let relax = |st: usize,
                     cost: Cost,
                     from: Option<usize>,
                     mv: Move,
                     best: &mut Vec<Cost>,
                     parent: &mut Vec<Option<(Option<usize>, Move)>>,
                     heap: &mut BinaryHeap<Reverse<(Cost, Cost, usize)>>| {
            if cost < best[st] {
                best[st] = cost;
                parent[st] = Some((from, mv));
                let hv = if st == goal_state { Cost::ZERO } else { h(st) };
                heap.push(Reverse((cost + hv, cost, st)));
            }
        };

        let mut first: Vec<(Idx, Cost)> = start_legs.iter().map(|(p, c)| (*p, *c)).collect();
        first.sort();
        for (p, base) in first {
            let (Some(walk), Some(cross)) = (self.area_cost(s.leaf, base), self.crossing[p as usize]) else {
                continue;
            };
            let next = topo.other_side(p, s.leaf);
            let mv = Move::Leg { leaf: s.leaf, from: None, to: p };
            relax(state_of(p, next), walk + cross, None, mv, &mut best, &mut parent, &mut heap);
        }

        // Ancestors of either endpoint are never shortcut.
        let mut pinned = vec![false; topo.areas.len()];
        for leaf in [s.leaf, g.leaf] {
            pinned[leaf as usize] = true;
            for a in &topo.chain[leaf as usize] {
                pinned[*a as usize] = true;
            }
        }

        while let Some(Reverse((_, cost, st))) = heap.pop() {
            if cost != best[st] {
                continue;
            }
            if st == goal_state {
                return Ok(self.reconstruct(s, g, &start_legs, &goal_legs, &parent, goal_state, cost));
            }
            let p = (st / 2) as Idx;
            let leaf = leaf_of(st);
            let came_from = topo.other_side(p, leaf);

            if self.index.is_some() {
                let chain = &topo.chain[leaf as usize];
                let from_chain = &topo.chain[came_from as usize];
                let first_new = chain.iter().zip(from_chain.iter()).take_while(|(a, b)| a == b).count();
                let jump = chain[first_new.min(chain.len())..]
                    .iter()
                    .copied()
                    .find(|a| !pinned[*a as usize] && self.shortcut_ok[*a as usize] && self.tables[a].contains_key(&p));
                if let Some(area) = jump {
                    for &(q, w) in &self.tables[&area][&p] {
                        let Some(cross) = self.crossing[q as usize] else { continue };
                        let (qf, qt) = topo.sides[q as usize];
                        let far = if topo.contains(area, qf) { qt } else { qf };
                        let mv = Move::Table { area, from: p, to: q };
                        relax(state_of(q, far), cost + w + cross, Some(st), mv, &mut best, &mut parent, &mut heap);
                    }
                    continue;
                }
            }

            if leaf == g.leaf {
                if let Some(w) = goal_legs.get(&p).and_then(|w| self.area_cost(leaf, *w)) {
                    let mv = Move::Goal { leaf, from: p };
                    relax(goal_state, cost + w, Some(st), mv, &mut best, &mut parent, &mut heap);
                }
            }
            if !topo.inner_leaf[leaf as usize] {
                continue;
            }
            for &(q, base) in topo.edges_from(leaf, p) {
                let (Some(walk), Some(cross)) = (self.area_cost(leaf, base), self.crossing[q as usize]) else {
                    continue;
                };
                let next = topo.other_side(q, leaf);
                let mv = Move::Leg { leaf, from: Some(p), to: q };
                relax(state_of(q, next), cost + walk + cross, Some(st), mv, &mut best, &mut parent, &mut heap);
            }
        }
        Err(PlanError::NoPath)
    }

    fn reconstruct(
        &self,
        s: &Endpoint,
        g: &Endpoint,
        start_legs: &HashMap<Idx, Cost>,
        goal_legs: &HashMap<Idx, Cost>,
        parent: &[Option<(Option<usize>, Move)>],
        goal_state: usize,
        total: Cost,
    ) -> Route {
        let mut moves = Vec::new();
        let mut cur = Some(goal_state);
        while let Some(st) = cur {
            let (prev, mv) = parent[st].expect("reached state has a parent");
            moves.push(mv);
            cur = prev;
        }
        moves.reverse();

        let topo = &self.topo;
        let name = |p: Idx| topo.passages[p as usize].clone();
        // Expand to (leaf, entry, exit) triples.
        let mut steps: Vec<(Idx, Option<Idx>, Option<Idx>)> = Vec::new();
        let mut shortcuts = 0;
        for mv in moves {
            match mv {
                Move::Leg { leaf, from, to } => steps.push((leaf, from, Some(to))),
                Move::Goal { leaf, from } => steps.push((leaf, Some(from), None)),
                Move::Table { area, from, to } => {
                    shortcuts += 1;
                    let entry = self
                        .index
                        .and_then(|i| i.table(&topo.areas[area as usize]))
                        .and_then(|t| t.get(&name(from), &name(to)))
                        .expect("table entry used by the search exists");
                    for leg in &entry.legs {
                        steps.push((
                            topo.area_index[&leg.leaf],
                            Some(topo.passage_index[&leg.from]),
                            Some(topo.passage_index[&leg.to]),
                        ));
                    }
                }
            }
        }

        let mut legs = Vec::new();
        let mut crossings = Vec::new();
        let mut sum = Cost::ZERO;
        for (i, &(leaf, from, to)) in steps.iter().enumerate() {
            let leaf_id = &topo.areas[leaf as usize];
            let base = match (from, to) {
                (None, Some(q)) => start_legs.get(&q).copied(),
                (Some(p), None) => goal_legs.get(&p).copied(),
                (Some(p), Some(q)) => topo.edges_from(leaf, p).iter().find(|(x, _)| *x == q).map(|x| x.1),
                (None, None) => None,
            }
            .expect("route step has a cost");
            let cost = self.area_cost(leaf, base).expect("route step is not blocked");
            sum += cost;
            let polyline = self.leg_polyline(leaf, from, to, s, g);
            legs.push(Leg {
                area: leaf_id.clone(),
                entry: from.map_or_else(|| START.to_string(), name),
                exit: to.map_or_else(|| GOAL.to_string(), name),
                cost,
                polyline,
            });
            if let Some(q) = to {
                let c = self.crossing[q as usize].expect("crossed passage is not blocked");
                sum += c;
                crossings.push(Crossing { passage: name(q), cost: c });
                debug_assert!(steps.get(i + 1).is_some_and(|n| n.1 == Some(q)));
            }
        }
        debug_assert_eq!(sum, total, "expanded route cost matches search cost");
        Route {
            total_cost: total.meters(),
            total,
            passages_crossed: crossings.iter().map(|c| c.passage.clone()).collect(),
            legs,
            crossings,
            shortcuts,
        }
    }

    fn leg_polyline(
        &self,
        leaf: Idx,
        from: Option<Idx>,
        to: Option<Idx>,
        s: &Endpoint,
        g: &Endpoint,
    ) -> Vec<LocalPoint> {
        let leaf_id = &self.topo.areas[leaf as usize];
        let data = &self.graph.leaves[leaf_id];
        let Ok(r) = data.raster(self.model, self.graph.resolution) else {
            return Vec::new();
        };
        let end = |p: Option<Idx>, e: &Endpoint| -> (LocalPoint, Cell) {
            match p {
                Some(p) => (self.topo.midpoints[p as usize], data.anchors[&self.topo.passages[p as usize]]),
                None => (e.point, e.cell),
            }
        };
        let (a, ca) = end(from, s);
        let (b, cb) = end(to, g);
        if !self.polylines {
            return dedup(vec![a, b]);
        }
        let mut pts = vec![a];
        match raster::grid_astar(&r, ca, cb) {
            Ok(path) => pts.extend(path.cells.iter().map(|c| r.cell_center(*c))),
            Err(_) => pts.extend([r.cell_center(ca), r.cell_center(cb)]),
        }
        pts.push(b);
        dedup(pts)
    }
}

fn dedup(mut pts: Vec<LocalPoint>) -> Vec<LocalPoint> {
    pts.dedup();
    pts
}
