//! Reading and writing OSM XML.
//!
//! Parsing captures every `<node>` and `<way>` with its tags untouched and
//! keeps all other top-level elements (relations, bounds, …) as verbatim
//! fragments. Writing is deterministic: nodes then ways sorted by id, tags
//! sorted by key, attributes in a fixed order, coordinates with 7 decimals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("XML syntax error at line {line}, column {col}: {message}")]
    XmlSyntax { line: usize, col: usize, message: String },
    #[error("<{element}> is missing attribute `{attr}`")]
    MissingAttribute { element: String, attr: String },
    #[error("non-numeric coordinate `{value}` on node {node}")]
    NonNumericCoordinate { node: String, value: String },
    #[error("non-numeric id `{value}` on <{element}>")]
    NonNumericId { element: String, value: String },
    #[error("input is not valid UTF-8")]
    NotUtf8,
}

/// Element attributes other than `id`, `lat`, `lon` (version, changeset,
/// user, …), kept sorted by name.
pub type Attrs = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct RawNode {
    pub id: i64,
    pub lat: f64,
    pub lon: f64,
    pub tags: Vec<(String, String)>,
    pub attrs: Attrs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawWay {
    pub id: i64,
    pub refs: Vec<i64>,
    pub tags: Vec<(String, String)>,
    pub attrs: Attrs,
}

impl RawWay {
    pub fn tag(&self, key: &str) -> Option<&str> {
        self.tags.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Top-level elements that are neither nodes nor ways, stored as the exact
/// source text. `leading` ones appeared before the first node or way.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Fragments {
    pub leading: Vec<String>,
    pub trailing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OsmDocument {
    /// Attributes of the `<osm>` root element.
    pub osm_attrs: Attrs,
    pub nodes: Vec<RawNode>,
    pub ways: Vec<RawWay>,
    pub fragments: Fragments,
}

impl OsmDocument {
    /// Canonical form used for structural comparison: elements sorted by id,
    /// tags sorted by key, and the implicit `version="1"` spelled out.
    pub fn canonical(&self) -> OsmDocument {
        let mut d = self.clone();
        d.nodes.sort_by_key(|n| n.id);
        d.ways.sort_by_key(|w| w.id);
        for n in &mut d.nodes {
            n.tags.sort();
            n.attrs.entry("version".into()).or_insert_with(|| "1".into());
        }
        for w in &mut d.ways {
            w.tags.sort();
            w.attrs.entry("version".into()).or_insert_with(|| "1".into());
        }
        d
    }
}

fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn syntax_error(text: &str, pos: u64, message: impl ToString) -> ParseError {
    let (line, col) = line_col(text, pos as usize);
    ParseError::XmlSyntax { line, col, message: message.to_string() }
}

fn attributes(text: &str, pos: u64, e: &BytesStart) -> Result<Vec<(String, String)>, ParseError> {
    let mut out = Vec::new();
    for a in e.attributes() {
        let a = a.map_err(|err| syntax_error(text, pos, err))?;
        let key = String::from_utf8_lossy(a.key.as_ref()).into_owned();
        let value = a.unescape_value().map_err(|err| syntax_error(text, pos, err))?.into_owned();
        out.push((key, value));
    }
    Ok(out)
}

fn take(attrs: &mut Vec<(String, String)>, element: &str, name: &str) -> Result<String, ParseError> {
    let i = attrs
        .iter()
        .position(|(k, _)| k == name)
        .ok_or_else(|| ParseError::MissingAttribute { element: element.to_string(), attr: name.to_string() })?;
    Ok(attrs.remove(i).1)
}

fn parse_id(element: &str, value: &str) -> Result<i64, ParseError> {
    value.trim().parse().map_err(|_| ParseError::NonNumericId { element: element.into(), value: value.into() })
}

enum Open {
    None,
    Node(RawNode),
    Way(RawWay),
}

/// Parses OSM XML. References from ways to nodes are not resolved here.
pub fn parse_osm(bytes: &[u8]) -> Result<OsmDocument, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::NotUtf8)?;
    let mut reader = Reader::from_str(text);
    reader.config_mut().check_end_names = true;

    let mut doc = OsmDocument::default();
    let mut open = Open::None;
    let mut depth = 0usize;
    let mut seen_osm = false;

    loop {
        let before = reader.buffer_position();
        let event = reader.read_event().map_err(|e| syntax_error(text, reader.error_position(), e))?;
        let (start, empty) = match &event {
            Event::Start(e) => (Some(e.clone()), false),
            Event::Empty(e) => (Some(e.clone()), true),
            Event::End(_) => {
                depth = depth.saturating_sub(1);
                if depth == 1 {
                    match std::mem::replace(&mut open, Open::None) {
                        Open::Node(n) => doc.nodes.push(n),
                        Open::Way(w) => doc.ways.push(w),
                        Open::None => {}
                    }
                }
                continue;
            }
            Event::Eof => break,
            _ => continue,
        };
        let e = start.unwrap();
        let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
        match depth {
            0 => {
                if name != "osm" {
                    return Err(syntax_error(text, before, format!("expected <osm> root, found <{name}>")));
                }
                seen_osm = true;
                doc.osm_attrs = attributes(text, before, &e)?.into_iter().collect();
                if !empty {
                    depth += 1;
                }
            }
            1 => match name.as_str() {
                "node" => {
                    let mut attrs = attributes(text, before, &e)?;
                    let id = parse_id("node", &take(&mut attrs, "node", "id")?)?;
                    let lat_s = take(&mut attrs, "node", "lat")?;
                    let lon_s = take(&mut attrs, "node", "lon")?;
                    let coord = |s: &str| -> Result<f64, ParseError> {
                        s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                            ParseError::NonNumericCoordinate { node: id.to_string(), value: s.to_string() }
                        })
                    };
                    let node = RawNode {
                        id,
                        lat: coord(&lat_s)?,
                        lon: coord(&lon_s)?,
                        tags: Vec::new(),
                        attrs: attrs.into_iter().collect(),
                    };
                    if empty {
                        doc.nodes.push(node);
                    } else {
                        open = Open::Node(node);
                        depth += 1;
                    }
                }
                "way" => {
                    let mut attrs = attributes(text, before, &e)?;
                    let id = parse_id("way", &take(&mut attrs, "way", "id")?)?;
                    let way = RawWay { id, refs: Vec::new(), tags: Vec::new(), attrs: attrs.into_iter().collect() };
                    if empty {
                        doc.ways.push(way);
                    } else {
                        open = Open::Way(way);
                        depth += 1;
                    }
                }
                _ => {
                    if !empty {
                        reader.read_to_end(e.name()).map_err(|err| syntax_error(text, reader.error_position(), err))?;
                    }
                    let end = reader.buffer_position();
                    let fragment = text[before as usize..end as usize].trim().to_string();
                    if doc.nodes.is_empty() && doc.ways.is_empty() {
                        doc.fragments.leading.push(fragment);
                    } else {
                        doc.fragments.trailing.push(fragment);
                    }
                }
            },
            _ => {
                let mut attrs = attributes(text, before, &e)?;
                match (name.as_str(), &mut open) {
                    ("tag", Open::Node(_) | Open::Way(_)) => {
                        let k = take(&mut attrs, "tag", "k")?;
                        let v = take(&mut attrs, "tag", "v")?;
                        match &mut open {
                            Open::Node(n) => n.tags.push((k, v)),
                            Open::Way(w) => w.tags.push((k, v)),
                            Open::None => unreachable!(),
                        }
                    }
                    ("nd", Open::Way(w)) => {
                        let r = parse_id("nd", &take(&mut attrs, "nd", "ref")?)?;
                        w.refs.push(r);
                    }
                    _ => {}
                }
                if !empty {
                    depth += 1;
                }
            }
        }
    }
    if !seen_osm {
        return Err(syntax_error(text, text.len() as u64, "missing <osm> root element"));
    }
    Ok(doc)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

fn write_attrs(out: &mut String, attrs: &Attrs) {
    let mut attrs = attrs.clone();
    attrs.entry("version".to_string()).or_insert_with(|| "1".to_string());
    for (k, v) in &attrs {
        let _ = write!(out, " {}=\"{}\"", k, escape(v));
    }
}

fn write_tags(out: &mut String, tags: &[(String, String)]) {
    let mut sorted: Vec<&(String, String)> = tags.iter().collect();
    sorted.sort();
    for (k, v) in sorted {
        let _ = writeln!(out, "    <tag k=\"{}\" v=\"{}\"/>", escape(k), escape(v));
    }
}

/// Formats a coordinate the OSM way: 7 decimal places.
pub fn format_coord(v: f64) -> String {
    format!("{v:.7}")
}

/// Deterministic XML for a raw document.
pub fn serialize_document(doc: &OsmDocument) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<osm");
    let mut root = doc.osm_attrs.clone();
    root.entry("version".into()).or_insert_with(|| "0.6".into());
    for (k, v) in &root {
        let _ = write!(out, " {}=\"{}\"", k, escape(v));
    }
    out.push_str(">\n");
    for f in &doc.fragments.leading {
        let _ = writeln!(out, "  {f}");
    }

    let mut nodes: Vec<&RawNode> = doc.nodes.iter().collect();
    nodes.sort_by_key(|n| n.id);
    for n in nodes {
        let _ = write!(out, "  <node id=\"{}\"", n.id);
        write_attrs(&mut out, &n.attrs);
        let _ = write!(out, " lat=\"{}\" lon=\"{}\"", format_coord(n.lat), format_coord(n.lon));
        if n.tags.is_empty() {
            out.push_str("/>\n");
        } else {
            out.push_str(">\n");
            write_tags(&mut out, &n.tags);
            out.push_str("  </node>\n");
        }
    }

    let mut ways: Vec<&RawWay> = doc.ways.iter().collect();
    ways.sort_by_key(|w| w.id);
    for w in ways {
        let _ = write!(out, "  <way id=\"{}\"", w.id);
        write_attrs(&mut out, &w.attrs);
        out.push_str(">\n");
        for r in &w.refs {
            let _ = writeln!(out, "    <nd ref=\"{r}\"/>");
        }
        write_tags(&mut out, &w.tags);
        out.push_str("  </way>\n");
    }
    for f in &doc.fragments.trailing {
        let _ = writeln!(out, "  {f}");
    }
    out.push_str("</osm>\n");
    out.into_bytes()
}

/// Serializes a resolved map, including all pass-through content.
pub fn serialize(model: &crate::model::MapModel) -> Vec<u8> {
    serialize_document(&model.to_document())
}

/// Optional grid debug dump: binary PGM (P5), 255 = free, 0 = occupied.
/// Row 0 of the image is the northernmost raster row.
pub fn raster_to_pgm(raster: &crate::raster::OccupancyRaster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", raster.width, raster.height).into_bytes();
    for row in (0..raster.height).rev() {
        for col in 0..raster.width {
            out.push(if raster.is_free(crate::raster::Cell { col, row }) { 255 } else { 0 });
        }
    }
    out
}
