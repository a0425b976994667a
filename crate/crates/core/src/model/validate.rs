//! Structural checks over a built model.
//!
//! Diagnostic codes form a closed set:
//!
//! | code                | severity | meaning                                                     |
//! |---------------------|----------|-------------------------------------------------------------|
//! | `OPEN_RING`         | error    | area ring does not repeat its first node at the end         |
//! | `DEGENERATE_RING`   | error    | fewer than three distinct vertices                          |
//! | `SELF_INTERSECT`    | error    | ring crosses or touches itself                              |
//! | `BAD_PARENT`        | error    | `osmAG:parent` names no existing area                       |
//! | `PARENT_CYCLE`      | error    | parent links loop                                           |
//! | `CONTAINMENT`       | error    | child polygon leaves its parent by more than 5 cm           |
//! | `OVERLAP`           | error    | same-level unrelated areas share more than 0.05 m²          |
//! | `PASSAGE_SHARE`     | error    | passage shares < 2 nodes with an endpoint ring              |
//! | `PASSAGE_SELF_LOOP` | error    | `osmAG:from` equals `osmAG:to`                              |
//! | `ISOLATED`          | warning  | area has neither parent nor children                        |
//! | `NON_LEAF_PASSAGE`  | warning  | passage touches a non-leaf area; the planner ignores it     |
//! | `BAD_HEIGHT`        | warning  | `height` is not a number and was ignored                    |
//!
//! Vertical passages (`highway=elevator`, `highway=steps`, `osmAG:vertical=yes`)
//! are checked differently: every polyline node must lie within 5 cm of a
//! ring node of each endpoint, since the floors use separate node objects.
//!
//! Build failures map onto further codes via [`super::ModelError::code`].

use std::collections::BTreeSet;
use std::fmt;

use super::{MapModel, CONTAINMENT_TOLERANCE, HEIGHT_TOLERANCE, KEY_HEIGHT, NODE_MERGE_TOLERANCE};
use crate::geo::{polygon_contains_polygon, polygons_overlap_area};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn error(code: &'static str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, code, subject: subject.into(), message: message.into() }
    }

    pub(crate) fn warning(code: &'static str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, code, subject: subject.into(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity, self.code, self.subject, self.message)
    }
}

/// Runs every structural check. Errors sort before warnings.
pub fn validate(model: &MapModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_rings(model, &mut out);
    check_hierarchy(model, &mut out);
    check_overlaps(model, &mut out);
    check_passages(model, &mut out);
    out.sort();
    out
}

fn check_rings(model: &MapModel, out: &mut Vec<Diagnostic>) {
    for a in model.areas().values() {
        if !a.is_closed() {
            out.push(Diagnostic::error("OPEN_RING", &a.osmag_id, "first node is not repeated as last"));
        }
        match model.polygon(&a.osmag_id) {
            None => {
                out.push(Diagnostic::error("DEGENERATE_RING", &a.osmag_id, "ring has fewer than 3 distinct vertices"))
            }
            Some(p) if p.is_self_intersecting() => {
                out.push(Diagnostic::error("SELF_INTERSECT", &a.osmag_id, "ring intersects itself"))
            }
            Some(_) => {}
        }
        if let Some(raw) = a.tags.get(KEY_HEIGHT) {
            if super::parse_height(&a.tags).is_none() {
                out.push(Diagnostic::warning("BAD_HEIGHT", &a.osmag_id, format!("unparsable height `{raw}`")));
            }
        }
    }
}

fn check_hierarchy(model: &MapModel, out: &mut Vec<Diagnostic>) {
    let areas = model.areas();
    for a in areas.values() {
        let Some(parent) = &a.parent else {
            if model.is_leaf(&a.osmag_id) {
                out.push(Diagnostic::warning("ISOLATED", &a.osmag_id, "area has no parent and no children"));
            }
            continue;
        };
        let Some(p) = areas.get(parent) else {
            out.push(Diagnostic::error("BAD_PARENT", &a.osmag_id, format!("parent {parent} does not exist")));
            continue;
        };
        // Cycle: walking up from a returns to a.
        let mut cur = p;
        let mut steps = 0;
        let mut cyclic = false;
        loop {
            if cur.osmag_id == a.osmag_id {
                cyclic = true;
                break;
            }
            steps += 1;
            match cur.parent.as_deref().and_then(|x| areas.get(x)) {
                Some(next) if steps <= areas.len() => cur = next,
                _ => break,
            }
        }
        if cyclic {
            out.push(Diagnostic::error("PARENT_CYCLE", &a.osmag_id, "parent links form a cycle"));
            continue;
        }
        if let (Some(outer), Some(inner)) = (model.polygon(parent), model.polygon(&a.osmag_id)) {
            if !polygon_contains_polygon(outer, inner, CONTAINMENT_TOLERANCE) {
                out.push(Diagnostic::error(
                    "CONTAINMENT",
                    &a.osmag_id,
                    format!("polygon is not contained in parent {parent}"),
                ));
            }
        }
    }
}

fn check_overlaps(model: &MapModel, out: &mut Vec<Diagnostic>) {
    let mut items: Vec<(&str, f64, &crate::geo::Polygon2D)> = model
        .areas()
        .values()
        .filter_map(|a| model.polygon(&a.osmag_id).map(|p| (a.osmag_id.as_str(), a.height, p)))
        .collect();
    items.sort_by(|a, b| a.2.bbox().min.x.total_cmp(&b.2.bbox().min.x).then(a.0.cmp(b.0)));
    for i in 0..items.len() {
        let (ia, ha, pa) = items[i];
        for &(ib, hb, pb) in &items[i + 1..] {
            if pb.bbox().min.x > pa.bbox().max.x {
                break;
            }
            if (ha - hb).abs() > HEIGHT_TOLERANCE || !pa.bbox().intersects(&pb.bbox(), 0.0) {
                continue;
            }
            if model.is_ancestor(ia, ib) || model.is_ancestor(ib, ia) {
                continue;
            }
            let overlap = polygons_overlap_area(pa, pb);
            if overlap > CONTAINMENT_TOLERANCE {
                let (x, y) = if ia < ib { (ia, ib) } else { (ib, ia) };
                out.push(Diagnostic::error("OVERLAP", format!("{x}/{y}"), format!("areas overlap by {overlap:.3} m²")));
            }
        }
    }
}

fn check_passages(model: &MapModel, out: &mut Vec<Diagnostic>) {
    for p in model.passages().values() {
        if p.from_area == p.to_area {
            out.push(Diagnostic::error("PASSAGE_SELF_LOOP", &p.osmag_id, "passage connects an area to itself"));
            continue;
        }
        for end in [&p.from_area, &p.to_area] {
            if !model.is_leaf(end) {
                out.push(Diagnostic::warning(
                    "NON_LEAF_PASSAGE",
                    &p.osmag_id,
                    format!("endpoint {end} is not a leaf area"),
                ));
            }
        }
        // Vertical passages join rings on different floors, so they only need
        // every polyline node to sit on a ring node of each end.
        if p.is_vertical() {
            for end in [&p.from_area, &p.to_area] {
                let ring = &model.areas()[end].ring;
                let off = p.polyline.iter().filter(|&&n| {
                    let q = model.local(n);
                    !ring.iter().any(|&r| model.local(r).distance(q) <= NODE_MERGE_TOLERANCE)
                });
                let off = off.count();
                if off > 0 {
                    out.push(Diagnostic::error(
                        "PASSAGE_SHARE",
                        &p.osmag_id,
                        format!("{off} vertical passage node(s) do not coincide with a node of area {end}"),
                    ));
                }
            }
            continue;
        }
        let distinct: BTreeSet<i64> = p.polyline.iter().copied().collect();
        for end in [&p.from_area, &p.to_area] {
            let ring: BTreeSet<i64> = model.areas()[end].ring.iter().copied().collect();
            let shared = distinct.intersection(&ring).count();
            if shared < 2 {
                out.push(Diagnostic::error(
                    "PASSAGE_SHARE",
                    &p.osmag_id,
                    format!("shares {shared} node(s) with area {end}, needs 2"),
                ));
            }
        }
    }
}
