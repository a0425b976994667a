//! Per-area occupancy grids and true traversal costs.
//!
//! All rasters live on one global lattice: the cell with lattice index
//! `(i, j)` has its center at `((i + 0.5)·res, (j + 0.5)·res)` in the local
//! frame, so grids of neighbouring areas line up cell for cell. A cell is
//! free iff its center lies inside (or on the boundary of) the polygon.
//!
//! Moves are 8-connected with octile costs. A diagonal move is allowed only
//! when both orthogonal neighbours are free, so paths never squeeze through
//! a corner. Costs are tracked as exact `(axis, diagonal)` step counts.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{contains_point_edges, LocalPoint, Polygon2D};
use crate::model::{Area, MapModel, Passage};

pub const DEFAULT_RESOLUTION: f64 = 0.1;
pub const DEFAULT_CELL_CAP: usize = 4_000_000;
/// Passage anchors are searched this many cells around the midpoint.
pub const ANCHOR_SEARCH_RADIUS: i64 = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RasterError {
    #[error("resolution must be positive and finite, got {0}")]
    InvalidResolution(f64),
    #[error("area {area} has no free cell at this resolution")]
    ResolutionTooCoarse { area: String },
    #[error("area {area} needs {cells} cells, above the cap of {cap}")]
    CellCapExceeded { area: String, cells: usize, cap: usize },
    #[error("area {0} has a degenerate polygon")]
    DegeneratePolygon(String),
    #[error("cell ({}, {}) is not free", .0.col, .0.row)]
    NotFree(Cell),
    #[error("goal is unreachable within the area")]
    Unreachable,
    #[error("no free cell within {radius} cells of passage {passage} in area {area}")]
    NoFreeCellNearPassage { passage: String, area: String, radius: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub col: usize,
    pub row: usize,
}

impl Cell {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }
}

/// Exact grid path length as step counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GridCost {
    pub axis: u32,
    pub diag: u32,
}

impl GridCost {
    /// Length in cells.
    pub fn cells(self) -> f64 {
        self.axis as f64 + self.diag as f64 * std::f64::consts::SQRT_2
    }

    pub fn meters(self, resolution: f64) -> f64 {
        resolution * self.cells()
    }

    fn step(self, diagonal: bool) -> GridCost {
        if diagonal {
            GridCost { axis: self.axis, diag: self.diag + 1 }
        } else {
            GridCost { axis: self.axis + 1, diag: self.diag }
        }
    }
}

impl PartialOrd for GridCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GridCost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cells().total_cmp(&other.cells()).then(self.diag.cmp(&other.diag))
    }
}

/// Octile distance between two cells, in cells.
pub fn octile_cells(a: Cell, b: Cell) -> f64 {
    let dx = a.col.abs_diff(b.col) as f64;
    let dy = a.row.abs_diff(b.row) as f64;
    dx.max(dy) + (std::f64::consts::SQRT_2 - 1.0) * dx.min(dy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyRaster {
    /// Lower-left corner of cell (0, 0).
    pub origin: LocalPoint,
    pub resolution: f64,
    pub width: usize,
    pub height: usize,
    col0: i64,
    row0: i64,
    free: Vec<bool>,
}

impl OccupancyRaster {
    /// Rasterizes a polygon on the global lattice, padding its bounding box
    /// by one cell on each side.
    pub fn from_polygon(poly: &Polygon2D, resolution: f64, cell_cap: usize) -> Result<Self, RasterError> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(RasterError::InvalidResolution(resolution));
        }
        let bb = poly.bbox();
        let col0 = (bb.min.x / resolution).floor() as i64 - 1;
        let row0 = (bb.min.y / resolution).floor() as i64 - 1;
        let col1 = (bb.max.x / resolution).ceil() as i64 + 1;
        let row1 = (bb.max.y / resolution).ceil() as i64 + 1;
        let width = (col1 - col0) as usize;
        let height = (row1 - row0) as usize;
        let cells = width.saturating_mul(height);
        if cells > cell_cap {
            return Err(RasterError::CellCapExceeded { area: String::new(), cells, cap: cell_cap });
        }
        let edges = poly.edge_list();
        let mut free = vec![false; cells];
        let mut row_edges = Vec::with_capacity(edges.len());
        for r in 0..height {
            let cy = center_coord(row0 + r as i64, resolution);
            row_edges.clear();
            row_edges
                .extend(edges.iter().filter(|(a, b)| a.y.min(b.y) - 1e-9 <= cy && cy <= a.y.max(b.y) + 1e-9).copied());
            if row_edges.is_empty() {
                continue;
            }
            for c in 0..width {
                let p = LocalPoint::new(center_coord(col0 + c as i64, resolution), cy);
                if p.x < bb.min.x - 1e-9 || p.x > bb.max.x + 1e-9 {
                    continue;
                }
                free[r * width + c] = contains_point_edges(row_edges.iter(), p);
            }
        }
        Ok(Self {
            origin: LocalPoint::new(col0 as f64 * resolution, row0 as f64 * resolution),
            resolution,
            width,
            height,
            col0,
            row0,
            free,
        })
    }

    /// Raster whose free cells are given explicitly (tests, debugging).
    pub fn from_cells(width: usize, height: usize, resolution: f64, free: Vec<bool>) -> Self {
        assert_eq!(free.len(), width * height);
        Self { origin: LocalPoint::default(), resolution, width, height, col0: 0, row0: 0, free }
    }

    pub fn is_free(&self, c: Cell) -> bool {
        c.col < self.width && c.row < self.height && self.free[c.row * self.width + c.col]
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|f| **f).count()
    }

    pub fn cell_center(&self, c: Cell) -> LocalPoint {
        LocalPoint::new(
            center_coord(self.col0 + c.col as i64, self.resolution),
            center_coord(self.row0 + c.row as i64, self.resolution),
        )
    }

    /// Global lattice index of a cell.
    pub fn lattice_index(&self, c: Cell) -> (i64, i64) {
        (self.col0 + c.col as i64, self.row0 + c.row as i64)
    }

    /// The cell whose square contains `p`, if it lies on this raster.
    pub fn cell_at(&self, p: LocalPoint) -> Option<Cell> {
        let i = (p.x / self.resolution).floor() as i64 - self.col0;
        let j = (p.y / self.resolution).floor() as i64 - self.row0;
        (i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height)
            .then(|| Cell::new(i as usize, j as usize))
    }

    /// The free cell whose center is nearest to `p` (Euclidean; ties go to
    /// the smaller row, then the smaller column), within `radius` cells.
    pub fn nearest_free(&self, p: LocalPoint, radius: i64) -> Option<Cell> {
        let ci = (p.x / self.resolution).floor() as i64 - self.col0;
        let cj = (p.y / self.resolution).floor() as i64 - self.row0;
        let limit = radius as f64 * self.resolution + 1e-9;
        let mut best: Option<(f64, Cell)> = None;
        for j in (cj - radius)..=(cj + radius) {
            for i in (ci - radius)..=(ci + radius) {
                if i < 0 || j < 0 || i as usize >= self.width || j as usize >= self.height {
                    continue;
                }
                let c = Cell::new(i as usize, j as usize);
                if !self.is_free(c) {
                    continue;
                }
                let d = self.cell_center(c).distance(p);
                if d > limit {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bd, bc)) => d < bd || (d == bd && (c.row, c.col) < (bc.row, bc.col)),
                };
                if better {
                    best = Some((d, c));
                }
            }
        }
        best.map(|(_, c)| c)
    }

    fn index(&self, c: Cell) -> usize {
        c.row * self.width + c.col
    }

    fn cell_of(&self, idx: usize) -> Cell {
        Cell::new(idx % self.width, idx / self.width)
    }

    /// Free 8-neighbours with the no-corner-cutting rule, in a fixed order.
    pub fn neighbors(&self, c: Cell) -> impl Iterator<Item = (Cell, bool)> + '_ {
        const DIRS: [(i64, i64); 8] = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)];
        DIRS.iter().filter_map(move |&(dx, dy)| {
            let x = c.col as i64 + dx;
            let y = c.row as i64 + dy;
            if x < 0 || y < 0 {
                return None;
            }
            let n = Cell::new(x as usize, y as usize);
            if !self.is_free(n) {
                return None;
            }
            let diagonal = dx != 0 && dy != 0;
            if diagonal {
                let a = Cell::new(x as usize, c.row);
                let b = Cell::new(c.col, y as usize);
                if !self.is_free(a) || !self.is_free(b) {
                    return None;
                }
            }
            Some((n, diagonal))
        })
    }
}

fn center_coord(index: i64, resolution: f64) -> f64 {
    (index as f64 + 0.5) * resolution
}

/// A minimal-cost 8-connected path.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    pub cells: Vec<Cell>,
    pub steps: GridCost,
    /// Length in meters.
    pub cost: f64,
}

#[derive(PartialEq)]
struct Entry {
    f: f64,
    g: GridCost,
    idx: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // Reversed for a min-heap; ties pop the larger g (deeper) first, then the lower index.
    fn cmp(&self, other: &Self) -> Ordering {
        other.f.total_cmp(&self.f).then_with(|| self.g.cmp(&other.g)).then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn walk_back(raster: &OccupancyRaster, parent: &[u32], goal: usize) -> Vec<Cell> {
    let mut cells = vec![raster.cell_of(goal)];
    let mut cur = goal;
    while parent[cur] != u32::MAX {
        cur = parent[cur] as usize;
        cells.push(raster.cell_of(cur));
    }
    cells.reverse();
    cells
}

/// A* with the octile heuristic.
pub fn grid_astar(raster: &OccupancyRaster, start: Cell, goal: Cell) -> Result<GridPath, RasterError> {
    for c in [start, goal] {
        if !raster.is_free(c) {
            return Err(RasterError::NotFree(c));
        }
    }
    let n = raster.width * raster.height;
    let mut best: Vec<Option<GridCost>> = vec![None; n];
    let mut parent = vec![u32::MAX; n];
    let mut heap = BinaryHeap::new();
    let s = raster.index(start);
    let t = raster.index(goal);
    // Shrink the heuristic by a hair so rounding can never make it inadmissible.
    let h = |c: Cell| octile_cells(c, goal) * (1.0 - 1e-12);
    best[s] = Some(GridCost::default());
    heap.push(Entry { f: h(start), g: GridCost::default(), idx: s });
    while let Some(Entry { g, idx, .. }) = heap.pop() {
        if best[idx] != Some(g) {
            continue;
        }
        if idx == t {
            return Ok(GridPath { cells: walk_back(raster, &parent, t), steps: g, cost: g.meters(raster.resolution) });
        }
        let c = raster.cell_of(idx);
        for (nb, diagonal) in raster.neighbors(c) {
            let ng = g.step(diagonal);
            let ni = raster.index(nb);
            if best[ni].is_none_or(|old| ng < old) {
                best[ni] = Some(ng);
                parent[ni] = idx as u32;
                heap.push(Entry { f: ng.cells() + h(nb), g: ng, idx: ni });
            }
        }
    }
    Err(RasterError::Unreachable)
}

/// Dijkstra from `start` until every target is settled. Returns one entry
/// per target; `None` where the target is unreachable or occupied.
pub fn grid_costs_from(raster: &OccupancyRaster, start: Cell, targets: &[Cell]) -> Vec<Option<GridPath>> {
    if !raster.is_free(start) {
        return vec![None; targets.len()];
    }
    let n = raster.width * raster.height;
    let mut best: Vec<Option<GridCost>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut parent = vec![u32::MAX; n];
    let mut remaining: usize = {
        let mut t: Vec<usize> = targets.iter().filter(|c| raster.is_free(**c)).map(|c| raster.index(*c)).collect();
        t.sort_unstable();
        t.dedup();
        t.len()
    };
    let is_target: std::collections::HashSet<usize> = targets.iter().map(|c| raster.index(*c)).collect();
    let mut heap = BinaryHeap::new();
    let s = raster.index(start);
    best[s] = Some(GridCost::default());
    heap.push(Entry { f: 0.0, g: GridCost::default(), idx: s });
    while let Some(Entry { g, idx, .. }) = heap.pop() {
        if settled[idx] || best[idx] != Some(g) {
            continue;
        }
        settled[idx] = true;
        if is_target.contains(&idx) {
            remaining -= 1;
            if remaining == 0 {
                break;
            }
        }
        let c = raster.cell_of(idx);
        for (nb, diagonal) in raster.neighbors(c) {
            let ni = raster.index(nb);
            if settled[ni] {
                continue;
            }
            let ng = g.step(diagonal);
            if best[ni].is_none_or(|old| ng < old) {
                best[ni] = Some(ng);
                parent[ni] = idx as u32;
                heap.push(Entry { f: ng.cells(), g: ng, idx: ni });
            }
        }
    }
    targets
        .iter()
        .map(|t| {
            if !raster.is_free(*t) {
                return None;
            }
            let ti = raster.index(*t);
            if !settled[ti] {
                return None;
            }
            let steps = best[ti].unwrap();
            Some(GridPath { cells: walk_back(raster, &parent, ti), steps, cost: steps.meters(raster.resolution) })
        })
        .collect()
}

/// Renders an area's polygon.
pub fn rasterize_area(area: &Area, model: &MapModel, resolution: f64) -> Result<OccupancyRaster, RasterError> {
    rasterize_area_capped(area, model, resolution, DEFAULT_CELL_CAP)
}

pub fn rasterize_area_capped(
    area: &Area,
    model: &MapModel,
    resolution: f64,
    cell_cap: usize,
) -> Result<OccupancyRaster, RasterError> {
    let poly = model.polygon(&area.osmag_id).ok_or_else(|| RasterError::DegeneratePolygon(area.osmag_id.clone()))?;
    let raster = OccupancyRaster::from_polygon(poly, resolution, cell_cap).map_err(|e| match e {
        RasterError::CellCapExceeded { cells, cap, .. } => {
            RasterError::CellCapExceeded { area: area.osmag_id.clone(), cells, cap }
        }
        other => other,
    })?;
    if raster.free_count() == 0 {
        return Err(RasterError::ResolutionTooCoarse { area: area.osmag_id.clone() });
    }
    Ok(raster)
}

/// Free cell nearest to the passage's polyline midpoint.
pub fn passage_anchor(
    model: &MapModel,
    passage: &Passage,
    area: &Area,
    raster: &OccupancyRaster,
) -> Result<Cell, RasterError> {
    let mid = model.passage_midpoint(passage);
    raster.nearest_free(mid, ANCHOR_SEARCH_RADIUS).ok_or_else(|| RasterError::NoFreeCellNearPassage {
        passage: passage.osmag_id.clone(),
        area: area.osmag_id.clone(),
        radius: ANCHOR_SEARCH_RADIUS,
    })
}

/// Cheapest in-area route between two passages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCost {
    pub steps: GridCost,
    /// Grid cost between the two anchors, in meters.
    pub cost: f64,
    /// Path from the anchor of the lexicographically smaller passage to the
    /// other one.
    pub path: Vec<Cell>,
}

/// All passage-to-passage grid costs within one leaf area.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaCosts {
    pub area: String,
    pub raster: OccupancyRaster,
    pub anchors: BTreeMap<String, Cell>,
    /// Keyed by `(a, b)` with `a < b`; missing pairs are unreachable.
    pub pairs: BTreeMap<(String, String), PairCost>,
}

impl AreaCosts {
    /// Symmetric lookup of the grid cost in meters.
    pub fn cost(&self, a: &str, b: &str) -> Option<f64> {
        if a == b {
            return self.anchors.contains_key(a).then_some(0.0);
        }
        let key = if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        self.pairs.get(&key).map(|p| p.cost)
    }
}

/// Grid costs between the anchors of every pair of passages touching `area`.
pub fn area_pair_costs(area: &Area, model: &MapModel, resolution: f64) -> Result<AreaCosts, RasterError> {
    let passages: Vec<&Passage> = model.passages_of(&area.osmag_id).iter().map(|p| &model.passages()[p]).collect();
    area_pair_costs_for(area, model, resolution, &passages)
}

/// As [`area_pair_costs`], restricted to the given passages.
pub fn area_pair_costs_for(
    area: &Area,
    model: &MapModel,
    resolution: f64,
    passages: &[&Passage],
) -> Result<AreaCosts, RasterError> {
    let raster = rasterize_area(area, model, resolution)?;
    let mut anchors = BTreeMap::new();
    for p in passages {
        anchors.insert(p.osmag_id.clone(), passage_anchor(model, p, area, &raster)?);
    }
    let ids: Vec<&String> = anchors.keys().collect();
    let mut pairs = BTreeMap::new();
    for (i, a) in ids.iter().enumerate() {
        if i + 1 == ids.len() {
            break;
        }
        let targets: Vec<Cell> = ids[i + 1..].iter().map(|b| anchors[*b]).collect();
        let found = grid_costs_from(&raster, anchors[*a], &targets);
        for (b, path) in ids[i + 1..].iter().zip(found) {
            if let Some(path) = path {
                pairs.insert(
                    ((*a).clone(), (*b).clone()),
                    PairCost { steps: path.steps, cost: path.cost, path: path.cells },
                );
            }
        }
    }
    Ok(AreaCosts { area: area.osmag_id.clone(), raster, anchors, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::MapBuilder;

    fn open_grid(w: usize, h: usize) -> OccupancyRaster {
        OccupancyRaster::from_cells(w, h, 0.1, vec![true; w * h])
    }

    #[test]
    fn square_room_raster() {
        let mut b = MapBuilder::new();
        b.rect_area("room", 0.0, 0.0, 10.0, 10.0).inner();
        let m = b.build();
        let r = rasterize_area(m.area("room").unwrap(), &m, 0.1).unwrap();
        let free = r.free_count() as i64;
        assert!((free - 10_000).abs() <= 4 * 101, "{free}");
        for row in 0..r.height {
            for col in 0..r.width {
                let c = Cell::new(col, row);
                assert_eq!(r.is_free(c), m.polygon("room").unwrap().contains_point(r.cell_center(c)));
            }
        }
    }

    #[test]
    fn sliver_too_coarse() {
        let mut b = MapBuilder::new();
        b.rect_area("sliver", 0.0, 0.0, 5.0, 0.02).inner();
        let m = b.build();
        assert_eq!(
            rasterize_area(m.area("sliver").unwrap(), &m, 0.1),
            Err(RasterError::ResolutionTooCoarse { area: "sliver".into() })
        );
    }

    #[test]
    fn cap_exceeded() {
        let mut b = MapBuilder::new();
        b.rect_area("big", 0.0, 0.0, 100.0, 100.0).inner();
        let m = b.build();
        assert!(matches!(
            rasterize_area_capped(m.area("big").unwrap(), &m, 0.1, 1000),
            Err(RasterError::CellCapExceeded { .. })
        ));
    }

    #[test]
    fn astar_trivial_cases() {
        let g = open_grid(10, 1);
        let p = grid_astar(&g, Cell::new(3, 0), Cell::new(3, 0)).unwrap();
        assert_eq!(p.cost, 0.0);
        assert_eq!(p.cells, vec![Cell::new(3, 0)]);
        let p = grid_astar(&g, Cell::new(0, 0), Cell::new(9, 0)).unwrap();
        assert!((p.cost - 0.9).abs() < 1e-12);
        assert_eq!(p.cells.len(), 10);
    }

    #[test]
    fn astar_unreachable() {
        let mut free = vec![true; 25];
        for r in 0..5 {
            free[r * 5 + 2] = false;
        }
        let g = OccupancyRaster::from_cells(5, 5, 0.1, free);
        assert_eq!(grid_astar(&g, Cell::new(0, 0), Cell::new(4, 4)), Err(RasterError::Unreachable));
        assert_eq!(grid_astar(&g, Cell::new(2, 0), Cell::new(4, 4)), Err(RasterError::NotFree(Cell::new(2, 0))));
    }

    #[test]
    fn no_corner_cutting() {
        // Free cells touch only diagonally.
        let g = OccupancyRaster::from_cells(2, 2, 1.0, vec![true, false, false, true]);
        assert_eq!(grid_astar(&g, Cell::new(0, 0), Cell::new(1, 1)), Err(RasterError::Unreachable));
    }

    #[test]
    fn open_grid_matches_octile() {
        let g = open_grid(50, 50);
        for &(a, b) in &[((0, 0), (49, 49)), ((3, 7), (40, 12)), ((10, 45), (11, 2))] {
            let (s, t) = (Cell::new(a.0, a.1), Cell::new(b.0, b.1));
            let p = grid_astar(&g, s, t).unwrap();
            assert!((p.steps.cells() - octile_cells(s, t)).abs() < 1e-9);
        }
    }

    #[test]
    fn many_targets_match_astar() {
        let g = open_grid(30, 20);
        let targets = [Cell::new(29, 19), Cell::new(0, 19), Cell::new(15, 0)];
        let found = grid_costs_from(&g, Cell::new(5, 5), &targets);
        for (t, f) in targets.iter().zip(found) {
            assert_eq!(f.unwrap().steps, grid_astar(&g, Cell::new(5, 5), *t).unwrap().steps);
        }
    }

    fn room_with_doors() -> MapModel {
        let mut b = MapBuilder::new();
        b.rect_area("floor", -1.0, -1.0, 12.0, 5.0).structure();
        b.rect_area("room", 0.0, 0.0, 10.0, 4.0).inner().parent("floor");
        b.rect_area("west", -1.0, 0.0, 0.0, 4.0).inner().parent("floor");
        b.rect_area("east", 10.0, 0.0, 12.0, 4.0).inner().parent("floor");
        b.passage("dw", "room", "west", &[(0.0, 1.5), (0.0, 2.5)]);
        b.passage("de", "room", "east", &[(10.0, 1.5), (10.0, 2.5)]);
        b.build()
    }

    #[test]
    fn anchor_next_to_door() {
        let m = room_with_doors();
        let room = m.area("room").unwrap();
        let r = rasterize_area(room, &m, 0.1).unwrap();
        let c = passage_anchor(&m, m.passage("dw").unwrap(), room, &r).unwrap();
        let center = r.cell_center(c);
        assert!((center.x - 0.05).abs() < 1e-6, "{center:?}");
        // Brute force over every free cell.
        let mid = m.passage_midpoint(m.passage("dw").unwrap());
        let best = (0..r.height)
            .flat_map(|row| (0..r.width).map(move |col| Cell::new(col, row)))
            .filter(|c| r.is_free(*c))
            .map(|c| r.cell_center(c).distance(mid))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(center.distance(mid), best);
    }

    #[test]
    fn opposite_doors_cost() {
        let m = room_with_doors();
        let costs = area_pair_costs(m.area("room").unwrap(), &m, 0.1).unwrap();
        let c = costs.cost("dw", "de").unwrap();
        assert!((c - 10.0).abs() <= 0.2, "{c}");
        assert_eq!(costs.cost("de", "dw"), Some(c));
    }

    #[test]
    fn single_door_has_no_pairs() {
        let m = room_with_doors();
        let costs = area_pair_costs(m.area("west").unwrap(), &m, 0.1).unwrap();
        assert!(costs.pairs.is_empty());
    }
}
