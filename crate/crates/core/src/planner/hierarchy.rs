//! Boundary-passage cost tables for non-leaf areas.
//!
//! A passage is a boundary passage of area `A` when exactly one of its two
//! leaves lies in `A`'s subtree. For every ordered pair of boundary
//! passages the table stores the cheapest way through `A`: enter by the
//! first, leave by the second, never stepping outside. Tables are built
//! deepest areas first and reuse the tables of non-leaf children, so each
//! level only searches over its direct children.
//!
//! Costs are profile-free: base edge costs, base door crossings and
//! `vertical_cost_per_meter` = 1. Entry and exit crossings are not
//! included; the planner charges those itself.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{Idx, PassageGraph, Topology};
use crate::cost::Cost;
use crate::model::MapModel;

/// One walk through a leaf, from one passage to another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableLeg {
    pub leaf: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub cost: Cost,
    /// Leaf-level expansion; consecutive legs share the passage crossed
    /// between them.
    pub legs: Vec<TableLeg>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaTable {
    pub boundary: Vec<String>,
    /// `entries[from][to]`; missing pairs are not connected inside the area.
    pub entries: BTreeMap<String, BTreeMap<String, TableEntry>>,
}

impl AreaTable {
    pub fn get(&self, from: &str, to: &str) -> Option<&TableEntry> {
        self.entries.get(from)?.get(to)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchicalCostIndex {
    /// Vertical crossing rate the tables were computed with.
    pub vertical_cost_per_meter: f64,
    pub tables: BTreeMap<String, AreaTable>,
}

impl HierarchicalCostIndex {
    pub fn table(&self, area: &str) -> Option<&AreaTable> {
        self.tables.get(area)
    }
}

/// Crossing cost of a passage under the neutral profile.
pub(crate) fn base_crossing(topo: &Topology, p: Idx) -> Cost {
    Cost::from_meters(topo.rise[p as usize])
}

/// Builds tables for every non-leaf area, deepest first.
pub fn precompute_hierarchy(model: &MapModel, graph: &PassageGraph) -> HierarchicalCostIndex {
    let topo = Topology::new(model, graph);
    let n = topo.areas.len();
    let mut by_depth: BTreeMap<Reverse<usize>, Vec<Idx>> = BTreeMap::new();
    for a in 0..n as Idx {
        if !topo.is_leaf(a) {
            by_depth.entry(Reverse(topo.chain[a as usize].len())).or_default().push(a);
        }
    }
    // Boundary passages of each non-leaf area.
    let mut boundary: HashMap<Idx, Vec<Idx>> = HashMap::new();
    for p in 0..topo.passages.len() as Idx {
        let (f, t) = topo.sides[p as usize];
        let mut anc_f: Vec<Idx> = topo.chain[f as usize].clone();
        let mut anc_t: Vec<Idx> = topo.chain[t as usize].clone();
        anc_f.retain(|a| !topo.contains(*a, t));
        anc_t.retain(|a| !topo.contains(*a, f));
        for a in anc_f.into_iter().chain(anc_t) {
            boundary.entry(a).or_default().push(p);
        }
    }

    let mut tables: HashMap<Idx, HashMap<Idx, HashMap<Idx, TableEntry>>> = HashMap::new();
    for (_, level) in by_depth {
        let computed: Vec<(Idx, HashMap<Idx, HashMap<Idx, TableEntry>>)> = level
            .par_iter()
            .map(|&a| {
                let b = boundary.get(&a).cloned().unwrap_or_default();
                (a, area_table(&topo, &tables, a, &b))
            })
            .collect();
        tables.extend(computed);
    }

    let mut out = BTreeMap::new();
    for a in 0..n as Idx {
        if topo.is_leaf(a) {
            continue;
        }
        let mut b: Vec<String> =
            boundary.get(&a).into_iter().flatten().map(|p| topo.passages[*p as usize].clone()).collect();
        b.sort();
        let mut entries: BTreeMap<String, BTreeMap<String, TableEntry>> = BTreeMap::new();
        if let Some(t) = tables.get(&a) {
            for (from, row) in t {
                let r = entries.entry(topo.passages[*from as usize].clone()).or_default();
                for (to, e) in row {
                    r.insert(topo.passages[*to as usize].clone(), e.clone());
                }
            }
        }
        out.insert(topo.areas[a as usize].clone(), AreaTable { boundary: b, entries });
    }
    HierarchicalCostIndex { vertical_cost_per_meter: 1.0, tables: out }
}

#[derive(Clone, Copy)]
enum Step {
    Leaf { leaf: Idx, from: Idx, to: Idx },
    Table { area: Idx, from: Idx, to: Idx },
}

fn area_table(
    topo: &Topology,
    done: &HashMap<Idx, HashMap<Idx, HashMap<Idx, TableEntry>>>,
    area: Idx,
    boundary: &[Idx],
) -> HashMap<Idx, HashMap<Idx, TableEntry>> {
    let mut out = HashMap::new();
    for &b1 in boundary {
        let (f, t) = topo.sides[b1 as usize];
        let inside = if topo.contains(area, f) { f } else { t };
        let Some(child) = topo.child_under(area, inside) else {
            continue;
        };
        let mut row = HashMap::new();
        row.insert(b1, TableEntry { cost: Cost::ZERO, legs: Vec::new() });

        // State: (passage just crossed, child of `area` we are now in).
        type State = (Idx, Idx);
        let mut best: HashMap<State, Cost> = HashMap::new();
        let mut parent: HashMap<State, (State, Step)> = HashMap::new();
        let mut exits: BTreeMap<Idx, (Cost, State, Step)> = BTreeMap::new();
        let mut heap = BinaryHeap::new();
        let start = (b1, child);
        best.insert(start, Cost::ZERO);
        heap.push(Reverse((Cost::ZERO, start)));
        while let Some(Reverse((g, s))) = heap.pop() {
            if best.get(&s) != Some(&g) {
                continue;
            }
            let (p, c) = s;
            let moves: Vec<(Idx, Cost, Step)> = if topo.is_leaf(c) {
                if !topo.inner_leaf[c as usize] {
                    Vec::new()
                } else {
                    topo.edges_from(c, p).iter().map(|&(q, w)| (q, w, Step::Leaf { leaf: c, from: p, to: q })).collect()
                }
            } else {
                done.get(&c)
                    .and_then(|t| t.get(&p))
                    .map(|row| {
                        let mut v: Vec<_> = row
                            .iter()
                            .filter(|(q, _)| **q != p)
                            .map(|(&q, e)| (q, e.cost, Step::Table { area: c, from: p, to: q }))
                            .collect();
                        v.sort_by_key(|m| m.0);
                        v
                    })
                    .unwrap_or_default()
            };
            for (q, w, step) in moves {
                let (qf, qt) = topo.sides[q as usize];
                // The side of q away from the child we walked through.
                let far = if topo.contains(c, qf) { qt } else { qf };
                let arrive = g + w;
                if !topo.contains(area, far) {
                    let better = exits.get(&q).is_none_or(|(old, ..)| arrive < *old);
                    if better && q != b1 {
                        exits.insert(q, (arrive, s, step));
                    }
                    continue;
                }
                let Some(next_child) = topo.child_under(area, far) else {
                    continue;
                };
                let ns = (q, next_child);
                let ng = arrive + base_crossing(topo, q);
                if best.get(&ns).is_none_or(|old| ng < *old) {
                    best.insert(ns, ng);
                    parent.insert(ns, (s, step));
                    heap.push(Reverse((ng, ns)));
                }
            }
        }
        for (q, (cost, last, step)) in exits {
            let mut steps = vec![step];
            let mut cur = last;
            while let Some((prev, st)) = parent.get(&cur) {
                steps.push(*st);
                cur = *prev;
            }
            steps.reverse();
            let mut legs = Vec::new();
            for st in steps {
                match st {
                    Step::Leaf { leaf, from, to } => legs.push(TableLeg {
                        leaf: topo.areas[leaf as usize].clone(),
                        from: topo.passages[from as usize].clone(),
                        to: topo.passages[to as usize].clone(),
                    }),
                    Step::Table { area: c, from, to } => {
                        legs.extend(done[&c][&from][&to].legs.iter().cloned());
                    }
                }
            }
            row.insert(q, TableEntry { cost, legs });
        }
        out.insert(b1, row);
    }
    out
}
