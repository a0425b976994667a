//! Resolved in-memory osmAG map.
//!
//! [`MapModel::build`] turns a parsed [`OsmDocument`] into areas, passages and
//! a parent/child forest. Ways that carry no `osmAG:type` tag are kept as
//! opaque payload and written back unchanged.

mod validate;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::geo::{self, Anchor, LocalPoint, Polygon2D};
use crate::io::{Attrs, Fragments, OsmDocument, RawNode, RawWay};

pub use validate::{validate, Diagnostic, Severity};

pub const KEY_ID: &str = "osmAG:id";
pub const KEY_TYPE: &str = "osmAG:type";
pub const KEY_AREATYPE: &str = "osmAG:areatype";
pub const KEY_PARENT: &str = "osmAG:parent";
pub const KEY_FROM: &str = "osmAG:from";
pub const KEY_TO: &str = "osmAG:to";
pub const KEY_VERTICAL: &str = "osmAG:vertical";
pub const KEY_HEIGHT: &str = "height";

/// Outward slack when checking that a child lies inside its parent (m).
pub const CONTAINMENT_TOLERANCE: f64 = 0.05;
/// Heights closer than this are the same level (m).
pub const HEIGHT_TOLERANCE: f64 = 0.5;
/// Nodes closer than this are treated as the same point (m).
pub const NODE_MERGE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("no node tagged osmAG:type=root")]
    MissingRootAnchor,
    #[error("more than one root node: {0:?}")]
    MultipleRootAnchors(Vec<i64>),
    #[error("way {way} references missing node {node}")]
    DanglingNodeReference { way: i64, node: i64 },
    #[error("passage {passage} references missing area {area}")]
    DanglingAreaReference { passage: String, area: String },
    #[error("duplicate osmAG:id {0}")]
    DuplicateOsmagId(String),
    #[error("way {way} has unknown osmAG:type `{value}`")]
    UnknownOsmagType { way: i64, value: String },
    #[error("way {way} has unknown osmAG:areatype `{value}`")]
    UnknownAreaType { way: i64, value: String },
    #[error("way {way} is tagged osmAG:type but has no osmAG:id")]
    MissingOsmagId { way: i64 },
    #[error("passage {passage} lacks osmAG:from or osmAG:to")]
    MissingPassageEndpoint { passage: String },
    #[error("node {node} lies more than 50 km from the root")]
    CoordinateOutOfRange { node: i64 },
}

impl ModelError {
    /// Stable diagnostic code, used by the validator front end.
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::MissingRootAnchor => "MISSING_ROOT",
            ModelError::MultipleRootAnchors(_) => "MULTIPLE_ROOTS",
            ModelError::DanglingNodeReference { .. } => "DANGLING_NODE",
            ModelError::DanglingAreaReference { .. } => "DANGLING_AREA",
            ModelError::DuplicateOsmagId(_) => "DUPLICATE_ID",
            ModelError::UnknownOsmagType { .. } => "UNKNOWN_TYPE",
            ModelError::UnknownAreaType { .. } => "UNKNOWN_AREATYPE",
            ModelError::MissingOsmagId { .. } => "MISSING_ID",
            ModelError::MissingPassageEndpoint { .. } => "MISSING_ENDPOINT",
            ModelError::CoordinateOutOfRange { .. } => "OUT_OF_RANGE",
        }
    }

    pub fn subject(&self) -> String {
        match self {
            ModelError::MissingRootAnchor => "-".into(),
            ModelError::MultipleRootAnchors(ids) => ids.first().map_or("-".into(), |i| i.to_string()),
            ModelError::DanglingNodeReference { way, .. } => way.to_string(),
            ModelError::DanglingAreaReference { passage, .. } => passage.clone(),
            ModelError::DuplicateOsmagId(id) => id.clone(),
            ModelError::UnknownOsmagType { way, .. }
            | ModelError::UnknownAreaType { way, .. }
            | ModelError::MissingOsmagId { way } => way.to_string(),
            ModelError::MissingPassageEndpoint { passage } => passage.clone(),
            ModelError::CoordinateOutOfRange { node } => node.to_string(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("unknown area {0}")]
    UnknownArea(String),
    #[error("point is not inside any leaf area at that height")]
    NotInAnyArea,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoNode {
    pub id: i64,
    pub lat: f64,
    pub lon: f64,
    pub tags: Vec<(String, String)>,
    pub attrs: Attrs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootAnchor {
    /// `None` only for documents without any osmAG content.
    pub node_id: Option<i64>,
    pub lat0: f64,
    pub lon0: f64,
}

impl RootAnchor {
    pub fn anchor(&self) -> Anchor {
        Anchor { lat0: self.lat0, lon0: self.lon0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AreaType {
    Inner,
    Structure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Area {
    pub osmag_id: String,
    /// XML way id; carried along but not authoritative.
    pub way_id: i64,
    pub ring: Vec<i64>,
    pub area_type: AreaType,
    pub parent: Option<String>,
    /// Meters above the ground floor, inherited from the parent when absent.
    pub height: f64,
    /// Every tag on the way, osmAG keys included.
    pub tags: BTreeMap<String, String>,
    pub attrs: Attrs,
}

impl Area {
    pub fn is_inner(&self) -> bool {
        self.area_type == AreaType::Inner
    }

    pub fn is_closed(&self) -> bool {
        self.ring.len() >= 2 && self.ring.first() == self.ring.last()
    }

    pub fn name(&self) -> Option<&str> {
        self.tags.get("name").map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Passage {
    pub osmag_id: String,
    pub way_id: i64,
    pub polyline: Vec<i64>,
    pub from_area: String,
    pub to_area: String,
    pub tags: BTreeMap<String, String>,
    pub attrs: Attrs,
}

impl Passage {
    /// Elevator shafts and stairs between floors. These connect areas at
    /// different heights and are exempt from the shared-node rule.
    pub fn is_vertical(&self) -> bool {
        matches!(self.tags.get("highway").map(String::as_str), Some("elevator") | Some("steps"))
            || self.tags.get(KEY_VERTICAL).map(String::as_str) == Some("yes")
    }

    pub fn other_side(&self, area: &str) -> Option<&str> {
        if self.from_area == area {
            Some(&self.to_area)
        } else if self.to_area == area {
            Some(&self.from_area)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapModel {
    osm_attrs: Attrs,
    nodes: BTreeMap<i64, GeoNode>,
    areas: BTreeMap<String, Area>,
    passages: BTreeMap<String, Passage>,
    root: RootAnchor,
    passthrough: Vec<RawWay>,
    fragments: Fragments,
    local: BTreeMap<i64, LocalPoint>,
    polygons: BTreeMap<String, Polygon2D>,
    children_index: BTreeMap<String, Vec<String>>,
    area_passages_index: BTreeMap<String, Vec<String>>,
}

pub(crate) fn parse_height(tags: &BTreeMap<String, String>) -> Option<f64> {
    let raw = tags.get(KEY_HEIGHT)?;
    let trimmed = raw.trim().trim_end_matches('m').trim();
    trimmed.parse::<f64>().ok().filter(|h| h.is_finite())
}

impl MapModel {
    /// Resolves all osmAG ways of a parsed document.
    pub fn build(doc: &OsmDocument) -> Result<MapModel, ModelError> {
        let mut nodes = BTreeMap::new();
        let mut roots = Vec::new();
        for n in &doc.nodes {
            if n.tags.iter().any(|(k, v)| k == KEY_TYPE && v == "root") {
                roots.push(n.id);
            }
            nodes.insert(
                n.id,
                GeoNode { id: n.id, lat: n.lat, lon: n.lon, tags: n.tags.clone(), attrs: n.attrs.clone() },
            );
        }

        let mut areas = BTreeMap::new();
        let mut passages = BTreeMap::new();
        let mut passthrough = Vec::new();
        let mut explicit_height: BTreeMap<String, Option<f64>> = BTreeMap::new();
        let mut seen_ids = BTreeSet::new();

        let mut ways: Vec<&RawWay> = doc.ways.iter().collect();
        ways.sort_by_key(|w| w.id);
        for w in ways {
            let Some(kind) = w.tag(KEY_TYPE) else {
                passthrough.push(w.clone());
                continue;
            };
            if kind != "area" && kind != "passage" {
                return Err(ModelError::UnknownOsmagType { way: w.id, value: kind.to_string() });
            }
            let id = w.tag(KEY_ID).ok_or(ModelError::MissingOsmagId { way: w.id })?.to_string();
            if !seen_ids.insert(id.clone()) {
                return Err(ModelError::DuplicateOsmagId(id));
            }
            if let Some(&missing) = w.refs.iter().find(|r| !nodes.contains_key(r)) {
                return Err(ModelError::DanglingNodeReference { way: w.id, node: missing });
            }
            let tags: BTreeMap<String, String> = w.tags.iter().cloned().collect();
            if kind == "area" {
                let area_type = match w.tag(KEY_AREATYPE) {
                    None | Some("inner") => AreaType::Inner,
                    Some("structure") => AreaType::Structure,
                    Some(other) => return Err(ModelError::UnknownAreaType { way: w.id, value: other.to_string() }),
                };
                explicit_height.insert(id.clone(), parse_height(&tags));
                areas.insert(
                    id.clone(),
                    Area {
                        osmag_id: id,
                        way_id: w.id,
                        ring: w.refs.clone(),
                        area_type,
                        parent: w.tag(KEY_PARENT).map(str::to_string),
                        height: 0.0,
                        tags,
                        attrs: w.attrs.clone(),
                    },
                );
            } else {
                let (Some(from), Some(to)) = (w.tag(KEY_FROM), w.tag(KEY_TO)) else {
                    return Err(ModelError::MissingPassageEndpoint { passage: id });
                };
                passages.insert(
                    id.clone(),
                    Passage {
                        osmag_id: id,
                        way_id: w.id,
                        polyline: w.refs.clone(),
                        from_area: from.to_string(),
                        to_area: to.to_string(),
                        tags,
                        attrs: w.attrs.clone(),
                    },
                );
            }
        }

        for p in passages.values() {
            for a in [&p.from_area, &p.to_area] {
                if !areas.contains_key(a) {
                    return Err(ModelError::DanglingAreaReference { passage: p.osmag_id.clone(), area: a.clone() });
                }
            }
        }

        let has_osmag = !areas.is_empty() || !passages.is_empty();
        let root = match roots.as_slice() {
            [] if has_osmag => return Err(ModelError::MissingRootAnchor),
            [] => RootAnchor { node_id: None, lat0: 0.0, lon0: 0.0 },
            [id] => {
                let n = &nodes[id];
                RootAnchor { node_id: Some(*id), lat0: n.lat, lon0: n.lon }
            }
            many => return Err(ModelError::MultipleRootAnchors(many.to_vec())),
        };

        let anchor = root.anchor();
        let local: BTreeMap<i64, LocalPoint> =
            nodes.values().map(|n| (n.id, geo::to_local(n.lat, n.lon, anchor))).collect();
        for id in areas.values().flat_map(|a| &a.ring).chain(passages.values().flat_map(|p| &p.polyline)) {
            if !local[id].is_campus_scale() {
                return Err(ModelError::CoordinateOutOfRange { node: *id });
            }
        }

        // Height inheritance along parent links; cycles and dangling parents stop the walk.
        let ids: Vec<String> = areas.keys().cloned().collect();
        for id in &ids {
            let mut cur = id.clone();
            let mut height = 0.0;
            for _ in 0..=ids.len() {
                if let Some(Some(h)) = explicit_height.get(&cur) {
                    height = *h;
                    break;
                }
                match areas.get(&cur).and_then(|a| a.parent.clone()) {
                    Some(p) if areas.contains_key(&p) => cur = p,
                    _ => break,
                }
            }
            areas.get_mut(id).unwrap().height = height;
        }

        let polygons = areas
            .values()
            .filter_map(|a| {
                let pts: Vec<LocalPoint> = a.ring.iter().map(|r| local[r]).collect();
                Polygon2D::new(&pts).ok().map(|p| (a.osmag_id.clone(), p))
            })
            .collect();

        let mut model = MapModel {
            osm_attrs: doc.osm_attrs.clone(),
            nodes,
            areas,
            passages,
            root,
            passthrough,
            fragments: doc.fragments.clone(),
            local,
            polygons,
            children_index: BTreeMap::new(),
            area_passages_index: BTreeMap::new(),
        };
        let (children, touching) = model.compute_indices();
        model.children_index = children;
        model.area_passages_index = touching;
        Ok(model)
    }

    /// Parses and builds in one step.
    pub fn from_osm_bytes(bytes: &[u8]) -> Result<MapModel, crate::Error> {
        let doc = crate::io::parse_osm(bytes)?;
        Ok(MapModel::build(&doc)?)
    }

    /// Recomputes the hierarchy and adjacency indices from the authoritative
    /// fields.
    #[allow(clippy::type_complexity)]
    pub fn compute_indices(&self) -> (BTreeMap<String, Vec<String>>, BTreeMap<String, Vec<String>>) {
        let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for a in self.areas.values() {
            if let Some(p) = &a.parent {
                if self.areas.contains_key(p) && p != &a.osmag_id {
                    children.entry(p.clone()).or_default().push(a.osmag_id.clone());
                }
            }
        }
        let mut touching: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for p in self.passages.values() {
            touching.entry(p.from_area.clone()).or_default().push(p.osmag_id.clone());
            if p.to_area != p.from_area {
                touching.entry(p.to_area.clone()).or_default().push(p.osmag_id.clone());
            }
        }
        (children, touching)
    }

    pub fn children_index(&self) -> &BTreeMap<String, Vec<String>> {
        &self.children_index
    }

    pub fn area_passages_index(&self) -> &BTreeMap<String, Vec<String>> {
        &self.area_passages_index
    }

    pub fn nodes(&self) -> &BTreeMap<i64, GeoNode> {
        &self.nodes
    }

    pub fn areas(&self) -> &BTreeMap<String, Area> {
        &self.areas
    }

    pub fn passages(&self) -> &BTreeMap<String, Passage> {
        &self.passages
    }

    pub fn root(&self) -> RootAnchor {
        self.root
    }

    pub fn passthrough_ways(&self) -> &[RawWay] {
        &self.passthrough
    }

    pub fn area(&self, id: &str) -> Result<&Area, QueryError> {
        self.areas.get(id).ok_or_else(|| QueryError::UnknownArea(id.to_string()))
    }

    pub fn passage(&self, id: &str) -> Option<&Passage> {
        self.passages.get(id)
    }

    /// Local position of a node.
    pub fn local(&self, node: i64) -> LocalPoint {
        self.local[&node]
    }

    /// Normalized polygon of an area; `None` for rings with fewer than three
    /// distinct vertices.
    pub fn polygon(&self, area: &str) -> Option<&Polygon2D> {
        self.polygons.get(area)
    }

    pub fn passage_points(&self, passage: &Passage) -> Vec<LocalPoint> {
        passage.polyline.iter().map(|n| self.local(*n)).collect()
    }

    pub fn passage_midpoint(&self, passage: &Passage) -> LocalPoint {
        geo::polyline_midpoint(&self.passage_points(passage))
    }

    pub fn passages_of(&self, area: &str) -> &[String] {
        self.area_passages_index.get(area).map_or(&[], Vec::as_slice)
    }

    pub fn is_leaf(&self, area: &str) -> bool {
        self.children_index.get(area).is_none_or(Vec::is_empty)
    }

    pub fn leaf_areas(&self) -> Vec<&Area> {
        self.areas.values().filter(|a| self.is_leaf(&a.osmag_id)).collect()
    }

    pub fn parent_of(&self, id: &str) -> Result<Option<&Area>, QueryError> {
        let a = self.area(id)?;
        Ok(a.parent.as_deref().and_then(|p| self.areas.get(p)))
    }

    pub fn children_of(&self, id: &str) -> Result<Vec<&Area>, QueryError> {
        self.area(id)?;
        Ok(self.children_index.get(id).map(|c| c.iter().map(|c| &self.areas[c]).collect()).unwrap_or_default())
    }

    /// Ancestors ordered from the direct parent up to the tree root. Stops
    /// at a dangling parent or when a cycle closes.
    pub fn ancestors_of(&self, id: &str) -> Result<Vec<&Area>, QueryError> {
        let mut cur = self.area(id)?;
        let mut out: Vec<&Area> = Vec::new();
        while let Some(p) = cur.parent.as_deref().and_then(|p| self.areas.get(p)) {
            if p.osmag_id == id || out.iter().any(|a| a.osmag_id == p.osmag_id) {
                break;
            }
            out.push(p);
            cur = p;
        }
        Ok(out)
    }

    pub fn is_ancestor(&self, ancestor: &str, of: &str) -> bool {
        self.ancestors_of(of).is_ok_and(|v| v.iter().any(|a| a.osmag_id == ancestor))
    }

    /// Areas whose parent is absent or unresolvable, i.e. tree roots.
    pub fn tree_roots(&self) -> Vec<&Area> {
        self.areas.values().filter(|a| a.parent.as_deref().is_none_or(|p| !self.areas.contains_key(p))).collect()
    }

    /// Every area in the subtree rooted at `id`, the root included.
    pub fn subtree(&self, id: &str) -> Vec<&Area> {
        let mut out = Vec::new();
        let mut stack = vec![id.to_string()];
        let mut seen = BTreeSet::new();
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            if let Some(a) = self.areas.get(&cur) {
                out.push(a);
            }
            if let Some(c) = self.children_index.get(&cur) {
                stack.extend(c.iter().rev().cloned());
            }
        }
        out
    }

    /// Number of levels in the deepest tree (a lone area has depth 1).
    pub fn max_depth(&self) -> usize {
        self.areas.keys().map(|id| self.ancestors_of(id).map_or(0, |a| a.len()) + 1).max().unwrap_or(0)
    }

    /// The inner leaf containing `point` at `height`, searched top-down
    /// through the hierarchy. Points on a shared wall resolve to the
    /// lexicographically smallest id.
    pub fn locate(&self, point: LocalPoint, height: f64) -> Result<&Area, QueryError> {
        let mut found: Option<&Area> = None;
        let mut stack: Vec<&Area> = self.tree_roots();
        let mut visited = BTreeSet::new();
        while let Some(a) = stack.pop() {
            if !visited.insert(a.osmag_id.as_str()) {
                continue;
            }
            let Some(poly) = self.polygon(&a.osmag_id) else { continue };
            if !poly.contains_point(point) {
                continue;
            }
            match self.children_index.get(&a.osmag_id) {
                Some(children) if !children.is_empty() => {
                    stack.extend(children.iter().map(|c| &self.areas[c]));
                }
                _ => {
                    if a.is_inner()
                        && (a.height - height).abs() <= HEIGHT_TOLERANCE
                        && found.is_none_or(|f| a.osmag_id < f.osmag_id)
                    {
                        found = Some(a);
                    }
                }
            }
        }
        found.ok_or(QueryError::NotInAnyArea)
    }

    /// Converts back into a raw document with all pass-through content.
    pub fn to_document(&self) -> OsmDocument {
        let nodes = self
            .nodes
            .values()
            .map(|n| RawNode { id: n.id, lat: n.lat, lon: n.lon, tags: n.tags.clone(), attrs: n.attrs.clone() })
            .collect();
        let mut ways: Vec<RawWay> = self
            .areas
            .values()
            .map(|a| RawWay {
                id: a.way_id,
                refs: a.ring.clone(),
                tags: a.tags.clone().into_iter().collect(),
                attrs: a.attrs.clone(),
            })
            .chain(self.passages.values().map(|p| RawWay {
                id: p.way_id,
                refs: p.polyline.clone(),
                tags: p.tags.clone().into_iter().collect(),
                attrs: p.attrs.clone(),
            }))
            .chain(self.passthrough.iter().cloned())
            .collect();
        ways.sort_by_key(|w| w.id);
        OsmDocument { osm_attrs: self.osm_attrs.clone(), nodes, ways, fragments: self.fragments.clone() }
    }

    /// Distinct heights of inner leaves, ascending.
    pub fn height_levels(&self) -> Vec<f64> {
        let mut hs: Vec<f64> = self.leaf_areas().into_iter().filter(|a| a.is_inner()).map(|a| a.height).collect();
        hs.sort_by(f64::total_cmp);
        hs.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
        hs
    }

    /// Summed polygon area of all inner leaves (m²).
    pub fn inner_leaf_area(&self) -> f64 {
        self.leaf_areas()
            .into_iter()
            .filter(|a| a.is_inner())
            .filter_map(|a| self.polygon(&a.osmag_id))
            .map(|p| p.area())
            .fold(0.0, |acc, a| acc + a)
    }
}
