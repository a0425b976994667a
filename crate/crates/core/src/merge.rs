//! Fusing two osmAG documents.
//!
//! Maps surveyed separately rarely share node objects even where they share
//! walls. [`merge_documents`] welds nodes of the second map onto nodes of the
//! first when they lie within a threshold of each other on the same height
//! level, renames colliding `osmAG:id` values and element ids of the second
//! map, and validates the result.
//!
//! Merging works on raw documents so that partial maps whose passages point
//! at areas of the other map can be joined; [`merge_maps`] is the same
//! operation for already built models.
//!
//! ```
//! use osmag::merge::{merge_documents, DEFAULT_THRESHOLD};
//! use osmag::io::OsmDocument;
//! use osmag::synth::MapBuilder;
//!
//! let a = MapBuilder::new().two_room_document();
//! let (model, report) = merge_documents(&a, &OsmDocument::default(), DEFAULT_THRESHOLD).unwrap();
//! assert_eq!(report.consolidated_node_pairs, 0);
//! assert_eq!(model.areas().len(), 2);
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::geo::{self, Anchor, LocalPoint};
use crate::io::{Fragments, OsmDocument, RawNode, RawWay};
use crate::model::{
    parse_height, validate, Diagnostic, MapModel, ModelError, HEIGHT_TOLERANCE, KEY_FROM, KEY_ID, KEY_PARENT, KEY_TO,
    KEY_TYPE, NODE_MERGE_TOLERANCE,
};

pub const DEFAULT_THRESHOLD: f64 = NODE_MERGE_TOLERANCE;

/// Root anchors further apart than this belong to different sites (m).
pub const MAX_ROOT_DISTANCE: f64 = 10_000.0;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MergeReport {
    pub consolidated_node_pairs: usize,
    /// `(b node, a node, distance in m)` for every welded pair.
    pub pairs: Vec<(i64, i64, f64)>,
    /// Renamed `osmAG:id` values of the second map.
    pub renamed_ids: BTreeMap<String, String>,
    /// Node ids of the second map that clashed and were renumbered.
    pub renumbered_nodes: BTreeMap<i64, i64>,
    pub renumbered_ways: BTreeMap<i64, i64>,
    pub conflicts: Vec<Diagnostic>,
}

#[derive(Debug, Error)]
pub enum MergeError {
    #[error("root anchors are {distance:.0} m apart; the maps describe different sites")]
    IncompatibleRoots { distance: f64 },
    #[error("merged map does not build: {0}")]
    Model(#[from] ModelError),
    #[error("merged map has {} validation error(s)", .diagnostics.iter().filter(|d| d.is_error()).count())]
    ValidationFailed { report: Box<MergeReport>, diagnostics: Vec<Diagnostic> },
}

pub fn merge_maps(a: &MapModel, b: &MapModel, threshold: f64) -> Result<(MapModel, MergeReport), MergeError> {
    merge_documents(&a.to_document(), &b.to_document(), threshold)
}

fn tag<'a>(tags: &'a [(String, String)], key: &str) -> Option<&'a str> {
    tags.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn is_root(n: &RawNode) -> bool {
    tag(&n.tags, KEY_TYPE) == Some("root")
}

/// Height of every area, explicit or inherited through `osmAG:parent`.
fn area_heights(doc: &OsmDocument) -> HashMap<String, f64> {
    let mut explicit: HashMap<&str, (Option<f64>, Option<&str>)> = HashMap::new();
    for w in &doc.ways {
        if tag(&w.tags, KEY_TYPE) == Some("area") {
            if let Some(id) = tag(&w.tags, KEY_ID) {
                let tags: BTreeMap<String, String> = w.tags.iter().cloned().collect();
                explicit.insert(id, (parse_height(&tags), tag(&w.tags, KEY_PARENT)));
            }
        }
    }
    let mut out = HashMap::new();
    for &id in explicit.keys() {
        let mut seen = BTreeSet::new();
        let mut cur = id;
        let mut h = 0.0;
        while let Some((eh, parent)) = explicit.get(cur) {
            if let Some(x) = eh {
                h = *x;
                break;
            }
            match parent {
                Some(p) if seen.insert(cur) => cur = p,
                _ => break,
            }
        }
        out.insert(id.to_string(), h);
    }
    out
}

/// Heights at which each node is used: heights of the areas whose rings
/// hold it, or of a passage's two ends for passage-only nodes.
fn node_heights(doc: &OsmDocument, heights: &HashMap<String, f64>) -> HashMap<i64, Vec<f64>> {
    let mut out: HashMap<i64, Vec<f64>> = HashMap::new();
    let mut push = |refs: &[i64], h: f64| {
        for &n in refs {
            let v = out.entry(n).or_default();
            if !v.iter().any(|x| (x - h).abs() <= 1e-9) {
                v.push(h);
            }
        }
    };
    for w in &doc.ways {
        let ends: &[&str] = match tag(&w.tags, KEY_TYPE) {
            Some("area") => &[KEY_ID],
            Some("passage") => &[KEY_FROM, KEY_TO],
            _ => &[],
        };
        for key in ends {
            if let Some(h) = tag(&w.tags, key).and_then(|id| heights.get(id)) {
                push(&w.refs, *h);
            }
        }
    }
    out
}

fn same_level(x: &[f64], y: &[f64]) -> bool {
    x.iter().any(|h| y.iter().any(|g| (h - g).abs() <= HEIGHT_TOLERANCE))
}

/// Greedy nearest-pair matching of b nodes onto a nodes. Candidates are
/// collected through a bucket grid with cell size `threshold` and accepted
/// in order of (distance, b id, a id) while both nodes are still free.
fn consolidate(a: &OsmDocument, b: &OsmDocument, threshold: f64, anchor: Anchor) -> Vec<(i64, i64, f64)> {
    if threshold <= 0.0 || a.nodes.is_empty() || b.nodes.is_empty() {
        return Vec::new();
    }
    let ha = node_heights(a, &area_heights(a));
    // Passages of b may end in areas of a.
    let mut heights_b = area_heights(a);
    heights_b.extend(area_heights(b));
    let hb = node_heights(b, &heights_b);
    let cell = |p: LocalPoint| ((p.x / threshold).floor() as i64, (p.y / threshold).floor() as i64);

    let mut buckets: HashMap<(i64, i64), Vec<(i64, LocalPoint)>> = HashMap::new();
    for n in &a.nodes {
        if is_root(n) || !ha.contains_key(&n.id) {
            continue;
        }
        let p = geo::to_local(n.lat, n.lon, anchor);
        buckets.entry(cell(p)).or_default().push((n.id, p));
    }

    let mut candidates = Vec::new();
    for n in &b.nodes {
        let Some(hs) = hb.get(&n.id) else { continue };
        if is_root(n) {
            continue;
        }
        let p = geo::to_local(n.lat, n.lon, anchor);
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &(aid, q) in buckets.get(&(cx + dx, cy + dy)).into_iter().flatten() {
                    let d = p.distance(q);
                    if d <= threshold && same_level(hs, &ha[&aid]) {
                        candidates.push((d, n.id, aid));
                    }
                }
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut used_a = BTreeSet::new();
    let mut used_b = BTreeSet::new();
    let mut out = Vec::new();
    for (d, bid, aid) in candidates {
        if !used_a.contains(&aid) && !used_b.contains(&bid) {
            used_a.insert(aid);
            used_b.insert(bid);
            out.push((bid, aid, d));
        }
    }
    out.sort_by_key(|&(bid, ..)| bid);
    out
}

/// `{id}-b`, then `{id}-b2`, `{id}-b3`, ... until unused.
fn fresh_id(id: &str, taken: &BTreeSet<String>) -> String {
    let first = format!("{id}-b");
    if !taken.contains(&first) {
        return first;
    }
    (2..).map(|k| format!("{id}-b{k}")).find(|c| !taken.contains(c)).unwrap()
}

/// Merges `b` into `a`. Nodes and ways of `a` are kept exactly, so merging
/// with an empty document reproduces `a`.
pub fn merge_documents(
    a: &OsmDocument,
    b: &OsmDocument,
    threshold: f64,
) -> Result<(MapModel, MergeReport), MergeError> {
    let root_a = a.nodes.iter().find(|n| is_root(n));
    let root_b = b.nodes.iter().find(|n| is_root(n));
    let origin = root_a.or(root_b).or(a.nodes.first()).or(b.nodes.first());
    let anchor = origin.map_or(Anchor { lat0: 0.0, lon0: 0.0 }, |n| Anchor { lat0: n.lat, lon0: n.lon });
    if let (Some(ra), Some(rb)) = (root_a, root_b) {
        let d = geo::to_local(rb.lat, rb.lon, anchor).distance(geo::to_local(ra.lat, ra.lon, anchor));
        if d > MAX_ROOT_DISTANCE {
            return Err(MergeError::IncompatibleRoots { distance: d });
        }
    }

    let mut report = MergeReport::default();
    let pairs = consolidate(a, b, threshold, anchor);
    let welded: HashMap<i64, i64> = pairs.iter().map(|&(bid, aid, _)| (bid, aid)).collect();
    report.consolidated_node_pairs = pairs.len();
    report.pairs = pairs;

    // osmAG:id collisions.
    let a_ids: BTreeSet<String> = a.ways.iter().filter_map(|w| tag(&w.tags, KEY_ID)).map(str::to_string).collect();
    let mut taken: BTreeSet<String> = a_ids.clone();
    taken.extend(b.ways.iter().filter_map(|w| tag(&w.tags, KEY_ID)).map(str::to_string));
    for w in &b.ways {
        if let Some(id) = tag(&w.tags, KEY_ID) {
            if a_ids.contains(id) && !report.renamed_ids.contains_key(id) {
                let new = fresh_id(id, &taken);
                taken.insert(new.clone());
                report.conflicts.push(Diagnostic::warning(
                    "ID_COLLISION",
                    id,
                    format!("osmAG:id exists in both maps; renamed to {new}"),
                ));
                report.renamed_ids.insert(id.to_string(), new);
            }
        }
    }

    // b's root anchor is dropped when a has one, unless some way uses it.
    let b_refs: BTreeSet<i64> = b.ways.iter().flat_map(|w| w.refs.iter().copied()).collect();

    // Element id collisions.
    let a_nodes: BTreeSet<i64> = a.nodes.iter().map(|n| n.id).collect();
    let a_ways: BTreeSet<i64> = a.ways.iter().map(|w| w.id).collect();
    let mut next_node = a_nodes.iter().chain(b.nodes.iter().map(|n| &n.id)).max().copied().unwrap_or(0) + 1;
    let mut next_way = a_ways.iter().chain(b.ways.iter().map(|w| &w.id)).max().copied().unwrap_or(0) + 1;
    let mut node_map: HashMap<i64, i64> = welded.clone();
    let mut b_nodes: Vec<&RawNode> = b.nodes.iter().collect();
    b_nodes.sort_by_key(|n| n.id);
    let mut kept_nodes = Vec::new();
    for n in b_nodes {
        if welded.contains_key(&n.id) {
            continue;
        }
        let mut n = n.clone();
        if is_root(&n) && root_a.is_some() {
            if !b_refs.contains(&n.id) {
                continue;
            }
            n.tags.retain(|(k, _)| k != KEY_TYPE);
        }
        let new_id = if a_nodes.contains(&n.id) {
            let id = next_node;
            next_node += 1;
            report.renumbered_nodes.insert(n.id, id);
            id
        } else {
            n.id
        };
        node_map.insert(n.id, new_id);
        n.id = new_id;
        kept_nodes.push(n);
    }
    let mut b_ways: Vec<&RawWay> = b.ways.iter().collect();
    b_ways.sort_by_key(|w| w.id);
    let mut kept_ways = Vec::new();
    for w in b_ways {
        let mut w = w.clone();
        if a_ways.contains(&w.id) {
            report.renumbered_ways.insert(w.id, next_way);
            w.id = next_way;
            next_way += 1;
        }
        for r in &mut w.refs {
            if let Some(m) = node_map.get(r) {
                *r = *m;
            }
        }
        for (k, v) in &mut w.tags {
            if [KEY_ID, KEY_PARENT, KEY_FROM, KEY_TO].contains(&k.as_str()) {
                if let Some(new) = report.renamed_ids.get(v.as_str()) {
                    *v = new.clone();
                }
            }
        }
        kept_ways.push(w);
    }

    let merged = OsmDocument {
        osm_attrs: a.osm_attrs.clone(),
        nodes: a.nodes.iter().cloned().chain(kept_nodes).collect(),
        ways: a.ways.iter().cloned().chain(kept_ways).collect(),
        fragments: Fragments {
            leading: a.fragments.leading.iter().chain(&b.fragments.leading).cloned().collect(),
            trailing: a.fragments.trailing.iter().chain(&b.fragments.trailing).cloned().collect(),
        },
    };
    let model = MapModel::build(&merged)?;
    let diagnostics = validate(&model);
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(MergeError::ValidationFailed { report: Box::new(report), diagnostics });
    }
    Ok((model, report))
}
