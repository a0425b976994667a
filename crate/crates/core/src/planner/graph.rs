//! The passage graph: passages are vertices, and every inner leaf area
//! contributes one edge per pair of passages it touches.
//!
//! An edge's base cost is the walking distance from one passage midpoint to
//! the other inside the area: a short straight segment from the midpoint to
//! its anchor cell, the grid path between the anchors, and another segment
//! out. The segments are measured with the octile norm, the same metric the
//! grid uses, so edge costs never undercut a grid search over the merged
//! floor.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;
use crate::geo::LocalPoint;
use crate::model::{MapModel, Passage};
use crate::raster::{self, Cell, OccupancyRaster, RasterError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("area {area}: {source}")]
    Raster { area: String, source: RasterError },
}

/// Octile norm of the offset between two points, in meters.
pub fn octile_m(a: LocalPoint, b: LocalPoint) -> f64 {
    let dx = (a.x - b.x).abs();
    let dy = (a.y - b.y).abs();
    dx.max(dy) + (std::f64::consts::SQRT_2 - 1.0) * dx.min(dy)
}

/// Per-leaf data the planner needs at query time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeafData {
    pub area: String,
    pub height: f64,
    pub anchors: BTreeMap<String, Cell>,
    /// Octile distance from each passage midpoint to its anchor cell center.
    pub dev: BTreeMap<String, f64>,
    #[serde(skip)]
    raster: OnceLock<Arc<OccupancyRaster>>,
}

impl LeafData {
    /// The leaf's raster, rebuilt on first use after loading from a cache.
    pub fn raster(&self, model: &MapModel, resolution: f64) -> Result<Arc<OccupancyRaster>, GraphError> {
        if let Some(r) = self.raster.get() {
            return Ok(r.clone());
        }
        let area = model
            .areas()
            .get(&self.area)
            .ok_or_else(|| GraphError::Raster { area: self.area.clone(), source: RasterError::Unreachable })?;
        let r = Arc::new(
            raster::rasterize_area(area, model, resolution)
                .map_err(|e| GraphError::Raster { area: self.area.clone(), source: e })?,
        );
        Ok(self.raster.get_or_init(|| r).clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    /// Lexicographically smaller endpoint.
    pub a: String,
    pub b: String,
    pub via: String,
    pub base: Cost,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PassageGraph {
    pub resolution: f64,
    /// Passages usable for planning: both endpoints are distinct leaves.
    pub vertices: Vec<String>,
    /// Inner leaves by id.
    pub leaves: BTreeMap<String, LeafData>,
    pub edges: Vec<GraphEdge>,
}

/// Passages whose two endpoint areas are distinct leaves.
pub fn graph_passages(model: &MapModel) -> Vec<&Passage> {
    model
        .passages()
        .values()
        .filter(|p| p.from_area != p.to_area && model.is_leaf(&p.from_area) && model.is_leaf(&p.to_area))
        .collect()
}

/// Rasterizes every inner leaf and collects passage-to-passage costs.
pub fn build_passage_graph(model: &MapModel, resolution: f64) -> Result<PassageGraph, GraphError> {
    let usable = graph_passages(model);
    let vertices: Vec<String> = usable.iter().map(|p| p.osmag_id.clone()).collect();
    let mut touching: BTreeMap<&str, Vec<&Passage>> = BTreeMap::new();
    for p in &usable {
        touching.entry(p.from_area.as_str()).or_default().push(p);
        touching.entry(p.to_area.as_str()).or_default().push(p);
    }
    let inner: Vec<_> = model.leaf_areas().into_iter().filter(|a| a.is_inner()).collect();
    let results: Vec<Result<(LeafData, Vec<GraphEdge>), GraphError>> = inner
        .par_iter()
        .map(|area| {
            let ps = touching.get(area.osmag_id.as_str()).cloned().unwrap_or_default();
            let costs = raster::area_pair_costs_for(area, model, resolution, &ps)
                .map_err(|e| GraphError::Raster { area: area.osmag_id.clone(), source: e })?;
            let mut dev = BTreeMap::new();
            for p in &ps {
                let center = costs.raster.cell_center(costs.anchors[&p.osmag_id]);
                dev.insert(p.osmag_id.clone(), octile_m(model.passage_midpoint(p), center));
            }
            let edges = costs
                .pairs
                .iter()
                .map(|((a, b), pc)| GraphEdge {
                    a: a.clone(),
                    b: b.clone(),
                    via: area.osmag_id.clone(),
                    base: Cost::from_meters(dev[a] + pc.cost + dev[b]),
                })
                .collect();
            let leaf = LeafData {
                area: area.osmag_id.clone(),
                height: area.height,
                anchors: costs.anchors,
                dev,
                raster: OnceLock::from(Arc::new(costs.raster)),
            };
            Ok((leaf, edges))
        })
        .collect();
    let mut leaves = BTreeMap::new();
    let mut edges = Vec::new();
    for r in results {
        let (leaf, e) = r?;
        edges.extend(e);
        leaves.insert(leaf.area.clone(), leaf);
    }
    Ok(PassageGraph { resolution, vertices, leaves, edges })
}

impl PassageGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

pub(crate) type Idx = u32;

/// Integer-indexed view of a model and its passage graph.
#[derive(Debug)]
pub(crate) struct Topology {
    pub passages: Vec<String>,
    pub passage_index: HashMap<String, Idx>,
    pub areas: Vec<String>,
    pub area_index: HashMap<String, Idx>,
    /// `(from, to)` leaf of each passage.
    pub sides: Vec<(Idx, Idx)>,
    /// `|height(from) − height(to)|` of each passage.
    pub rise: Vec<f64>,
    pub midpoints: Vec<LocalPoint>,
    pub heights: Vec<f64>,
    pub children: Vec<Vec<Idx>>,
    /// Ancestors of each area, root first, excluding the area itself.
    pub chain: Vec<Vec<Idx>>,
    pub inner_leaf: Vec<bool>,
    /// Edges out of `(leaf, passage)`.
    pub adj: HashMap<(Idx, Idx), Vec<(Idx, Cost)>>,
}

impl Topology {
    pub fn new(model: &MapModel, graph: &PassageGraph) -> Topology {
        let areas: Vec<String> = model.areas().keys().cloned().collect();
        let area_index: HashMap<String, Idx> = areas.iter().enumerate().map(|(i, a)| (a.clone(), i as Idx)).collect();
        let passages = graph.vertices.clone();
        let passage_index: HashMap<String, Idx> =
            passages.iter().enumerate().map(|(i, p)| (p.clone(), i as Idx)).collect();
        let heights: Vec<f64> = areas.iter().map(|a| model.areas()[a].height).collect();
        let mut sides = Vec::with_capacity(passages.len());
        let mut rise = Vec::with_capacity(passages.len());
        let mut midpoints = Vec::with_capacity(passages.len());
        for id in &passages {
            let p = &model.passages()[id];
            let (f, t) = (area_index[&p.from_area], area_index[&p.to_area]);
            sides.push((f, t));
            rise.push((heights[f as usize] - heights[t as usize]).abs());
            midpoints.push(model.passage_midpoint(p));
        }
        let parent: Vec<Option<Idx>> =
            areas.iter().map(|a| model.areas()[a].parent.as_ref().and_then(|p| area_index.get(p).copied())).collect();
        let mut children = vec![Vec::new(); areas.len()];
        for (i, a) in areas.iter().enumerate() {
            for c in model.children_index().get(a).into_iter().flatten() {
                children[i].push(area_index[c]);
            }
        }
        let chain = (0..areas.len())
            .map(|i| {
                let mut up = Vec::new();
                let mut cur = parent[i];
                while let Some(p) = cur {
                    if up.contains(&p) || p as usize == i {
                        break;
                    }
                    up.push(p);
                    cur = parent[p as usize];
                }
                up.reverse();
                up
            })
            .collect();
        let inner_leaf = areas.iter().map(|a| graph.leaves.contains_key(a)).collect();
        let mut adj: HashMap<(Idx, Idx), Vec<(Idx, Cost)>> = HashMap::new();
        for e in &graph.edges {
            let (Some(&a), Some(&b), Some(&v)) =
                (passage_index.get(&e.a), passage_index.get(&e.b), area_index.get(&e.via))
            else {
                continue;
            };
            adj.entry((v, a)).or_default().push((b, e.base));
            adj.entry((v, b)).or_default().push((a, e.base));
        }
        for list in adj.values_mut() {
            list.sort();
        }
        Topology {
            passages,
            passage_index,
            areas,
            area_index,
            sides,
            rise,
            midpoints,
            heights,
            children,
            chain,
            inner_leaf,
            adj,
        }
    }

    /// The leaf on the other side of passage `p` from `leaf`.
    pub fn other_side(&self, p: Idx, leaf: Idx) -> Idx {
        let (f, t) = self.sides[p as usize];
        if f == leaf {
            t
        } else {
            f
        }
    }

    /// Whether `area` is `leaf` or one of its ancestors.
    pub fn contains(&self, area: Idx, leaf: Idx) -> bool {
        area == leaf || self.chain[leaf as usize].contains(&area)
    }

    /// The child of `area` whose subtree holds `leaf`.
    pub fn child_under(&self, area: Idx, leaf: Idx) -> Option<Idx> {
        let chain = &self.chain[leaf as usize];
        let pos = chain.iter().position(|a| *a == area)?;
        Some(chain.get(pos + 1).copied().unwrap_or(leaf))
    }

    pub fn is_leaf(&self, area: Idx) -> bool {
        self.children[area as usize].is_empty()
    }

    pub fn edges_from(&self, leaf: Idx, p: Idx) -> &[(Idx, Cost)] {
        self.adj.get(&(leaf, p)).map_or(&[], Vec::as_slice)
    }
}
