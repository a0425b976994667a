//! SVG rendering of map levels and routes.
//!
//! Map coordinates are local meters (x east, y north). SVG y grows
//! downward, so every point is written as `(x, -y)`: a node at local
//! `(3, 2)` appears at `3,-2`. The viewBox wraps the drawn areas with a
//! 1 m margin. Output depends only on the inputs, so it can be diffed.
//!
//! ```
//! use osmag::model::MapModel;
//! use osmag::render::{render_svg, RenderStyle};
//! use osmag::synth::MapBuilder;
//!
//! let model = MapModel::build(&MapBuilder::new().two_room_document()).unwrap();
//! let svg = String::from_utf8(render_svg(&model, &RenderStyle::default(), None).unwrap()).unwrap();
//! assert_eq!(svg.matches("<polygon").count(), 2);
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{BBox, LocalPoint};
use crate::model::{Area, AreaType, MapModel, HEIGHT_TOLERANCE};
use crate::planner::Route;

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("no areas between heights {min} m and {max} m")]
    EmptySelection { min: f64, max: f64 },
    #[error("invalid style: {0}")]
    InvalidStyle(String),
    #[error("style file: {0}")]
    StyleFile(String),
}

/// Inclusive height range of areas to draw (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightBand {
    pub min: f64,
    pub max: f64,
}

impl HeightBand {
    /// The band holding a single level.
    pub fn level(h: f64) -> Self {
        HeightBand { min: h - HEIGHT_TOLERANCE, max: h + HEIGHT_TOLERANCE }
    }

    pub fn contains(&self, h: f64) -> bool {
        self.min <= h && h <= self.max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderStyle {
    /// Wall stroke width in meters.
    pub wall_width: f64,
    pub wall_color: String,
    pub inner_fill: String,
    pub structure_fill: String,
    /// Fill overrides keyed by the `indoor` tag (`room`, `corridor`, ...).
    pub indoor_fill: BTreeMap<String, String>,
    pub passage_color: String,
    pub passage_width: f64,
    pub route_color: String,
    pub route_width: f64,
    /// `None` draws every level on top of each other.
    pub band: Option<HeightBand>,
    pub labels: bool,
    pub label_size: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            wall_width: 0.15,
            wall_color: "#333333".into(),
            inner_fill: "#f4f1e8".into(),
            structure_fill: "none".into(),
            indoor_fill: BTreeMap::from([
                ("corridor".to_string(), "#e6eef5".to_string()),
                ("room".to_string(), "#f4f1e8".to_string()),
            ]),
            passage_color: "#d62728".into(),
            passage_width: 0.35,
            route_color: "#1f77b4".into(),
            route_width: 0.3,
            band: None,
            labels: true,
            label_size: 0.6,
        }
    }
}

impl RenderStyle {
    pub fn from_toml(text: &str) -> Result<Self, RenderError> {
        let style: RenderStyle = toml::from_str(text).map_err(|e| RenderError::StyleFile(e.to_string()))?;
        style.check()?;
        Ok(style)
    }

    pub fn check(&self) -> Result<(), RenderError> {
        for (name, w) in
            [("wall_width", self.wall_width), ("passage_width", self.passage_width), ("route_width", self.route_width)]
        {
            if !(w > 0.0 && w.is_finite()) {
                return Err(RenderError::InvalidStyle(format!("{name} must be positive, got {w}")));
            }
        }
        if let Some(b) = self.band {
            if !(b.min <= b.max) {
                return Err(RenderError::InvalidStyle(format!("empty height band [{}, {}]", b.min, b.max)));
            }
        }
        Ok(())
    }

    fn in_band(&self, h: f64) -> bool {
        self.band.is_none_or(|b| b.contains(h))
    }

    fn fill(&self, a: &Area) -> &str {
        if a.area_type == AreaType::Structure {
            return &self.structure_fill;
        }
        a.tags.get("indoor").and_then(|v| self.indoor_fill.get(v)).unwrap_or(&self.inner_fill)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn points(pts: &[LocalPoint]) -> String {
    pts.iter().map(|p| format!("{},{}", num(p.x), num(-p.y))).collect::<Vec<_>>().join(" ")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Draws the areas in the style's height band, structures below inner
/// areas and shallow areas below deep ones, then passages touching a drawn
/// area, then the parts of `route` inside drawn areas.
pub fn render_svg(model: &MapModel, style: &RenderStyle, route: Option<&Route>) -> Result<Vec<u8>, RenderError> {
    style.check()?;
    let depth = |id: &str| model.ancestors_of(id).map_or(0, |a| a.len());
    let mut areas: Vec<&Area> =
        model.areas().values().filter(|a| style.in_band(a.height) && model.polygon(&a.osmag_id).is_some()).collect();
    if areas.is_empty() {
        let (min, max) = style.band.map_or((f64::NEG_INFINITY, f64::INFINITY), |b| (b.min, b.max));
        return Err(RenderError::EmptySelection { min, max });
    }
    areas.sort_by_key(|a| (a.is_inner(), depth(&a.osmag_id), a.osmag_id.clone()));

    let mut bbox: Option<BBox> = None;
    for a in &areas {
        let b = model.polygon(&a.osmag_id).unwrap().bbox();
        bbox = Some(bbox.map_or(b, |x| x.union(&b)));
    }
    let bb = bbox.unwrap();
    let (x0, y0) = (bb.min.x - 1.0, -bb.max.y - 1.0);
    let (w, h) = (bb.max.x - bb.min.x + 2.0, bb.max.y - bb.min.y + 2.0);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">",
        num(x0),
        num(y0),
        num(w),
        num(h),
        num((w * 20.0).round()),
        num((h * 20.0).round())
    );
    s.push_str("<g id=\"areas\">\n");
    for a in &areas {
        let poly = model.polygon(&a.osmag_id).unwrap();
        let _ = writeln!(
            s,
            "<polygon id=\"area-{}\" class=\"{}\" points=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"miter\"/>",
            escape(&a.osmag_id),
            if a.is_inner() { "inner" } else { "structure" },
            points(poly.vertices()),
            escape(style.fill(a)),
            escape(&style.wall_color),
            num(style.wall_width)
        );
    }
    s.push_str("</g>\n<g id=\"passages\">\n");
    let drawn: std::collections::BTreeSet<&str> = areas.iter().map(|a| a.osmag_id.as_str()).collect();
    for p in model.passages().values() {
        if !drawn.contains(p.from_area.as_str()) && !drawn.contains(p.to_area.as_str()) {
            continue;
        }
        let pts = model.passage_points(p);
        let _ = writeln!(
            s,
            "<polyline id=\"passage-{}\" class=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linecap=\"round\"/>",
            escape(&p.osmag_id),
            if p.is_vertical() { "passage vertical" } else { "passage" },
            points(&pts),
            escape(&style.passage_color),
            num(style.passage_width)
        );
    }
    s.push_str("</g>\n");
    if let Some(r) = route {
        s.push_str("<g id=\"route\">\n");
        for (i, leg) in r.legs.iter().enumerate() {
            if !drawn.contains(leg.area.as_str()) || leg.polyline.len() < 2 {
                continue;
            }
            let _ = writeln!(
                s,
                "<polyline class=\"route\" data-leg=\"{i}\" data-area=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
                escape(&leg.area),
                points(&leg.polyline),
                escape(&style.route_color),
                num(style.route_width)
            );
        }
        s.push_str("</g>\n");
    }
    if style.labels {
        s.push_str("<g id=\"labels\" font-family=\"sans-serif\" text-anchor=\"middle\">\n");
        for a in areas.iter().filter(|a| a.is_inner()) {
            let c = model.polygon(&a.osmag_id).unwrap().centroid();
            let text = a.name().unwrap_or(&a.osmag_id);
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\">{}</text>",
                num(c.x),
                num(-c.y),
                num(style.label_size),
                escape(text)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s.into_bytes())
}
