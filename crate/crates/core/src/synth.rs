//! Programmatic map construction in local meters.
//!
//! [`MapBuilder`] lays out areas and passages in the root frame and emits an
//! osmAG document. Nodes are shared automatically: every ring edge picks up
//! all points of the same level that lie on it, so rooms sharing a wall share
//! the wall's nodes and door polylines. [`campus`] generates a large
//! multi-building map for benchmarks.

use std::collections::BTreeMap;

use crate::geo::{self, point_segment_distance, Anchor, LocalPoint};
use crate::io::{Attrs, OsmDocument, RawNode, RawWay};
use crate::model::{self, MapModel};

/// Default geodetic origin of generated maps.
pub const DEFAULT_ANCHOR: Anchor = Anchor { lat0: 31.179_470_0, lon0: 121.590_930_0 };

const ON_EDGE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct AreaSpec {
    id: String,
    points: Vec<LocalPoint>,
    level: i64,
    tags: BTreeMap<String, String>,
}

impl AreaSpec {
    pub fn inner(&mut self) -> &mut Self {
        self.tag(model::KEY_AREATYPE, "inner")
    }

    pub fn structure(&mut self) -> &mut Self {
        self.tag(model::KEY_AREATYPE, "structure")
    }

    pub fn parent(&mut self, parent: &str) -> &mut Self {
        self.tag(model::KEY_PARENT, parent)
    }

    pub fn height(&mut self, h: f64) -> &mut Self {
        self.tag(model::KEY_HEIGHT, &format_height(h))
    }

    pub fn tag(&mut self, k: &str, v: &str) -> &mut Self {
        self.tags.insert(k.to_string(), v.to_string());
        self
    }
}

#[derive(Debug, Clone)]
pub struct PassageSpec {
    from: String,
    to: String,
    points: Vec<LocalPoint>,
    tags: BTreeMap<String, String>,
}

impl PassageSpec {
    pub fn tag(&mut self, k: &str, v: &str) -> &mut Self {
        self.tags.insert(k.to_string(), v.to_string());
        self
    }
}

fn format_height(h: f64) -> String {
    let s = format!("{h:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Builder for osmAG documents in local coordinates.
#[derive(Debug, Clone)]
pub struct MapBuilder {
    anchor: Anchor,
    level: i64,
    areas: Vec<AreaSpec>,
    passages: Vec<PassageSpec>,
    extra_nodes: Vec<(LocalPoint, i64)>,
    generator: String,
}

impl Default for MapBuilder {
    fn default() -> Self {
        Self::new()
    }
}

fn level_key(h: f64) -> i64 {
    (h * 1000.0).round() as i64
}

fn quantize(v: f64) -> f64 {
    (v * 1e7).round() / 1e7
}

impl MapBuilder {
    pub fn new() -> Self {
        Self::with_anchor(DEFAULT_ANCHOR)
    }

    pub fn with_anchor(anchor: Anchor) -> Self {
        Self {
            anchor,
            level: 0,
            areas: Vec::new(),
            passages: Vec::new(),
            extra_nodes: Vec::new(),
            generator: "osmag-synth".into(),
        }
    }

    pub fn anchor(&self) -> Anchor {
        self.anchor
    }

    /// Node pool used by areas created from now on. Areas on different
    /// levels never share node objects even at identical coordinates.
    pub fn level(&mut self, height: f64) -> &mut Self {
        self.level = level_key(height);
        self
    }

    pub fn polygon_area(&mut self, id: &str, pts: &[(f64, f64)]) -> &mut AreaSpec {
        self.areas.push(AreaSpec {
            id: id.to_string(),
            points: pts.iter().map(|&(x, y)| LocalPoint::new(x, y)).collect(),
            level: self.level,
            tags: BTreeMap::from([
                (model::KEY_TYPE.to_string(), "area".to_string()),
                (model::KEY_ID.to_string(), id.to_string()),
            ]),
        });
        self.areas.last_mut().unwrap()
    }

    pub fn rect_area(&mut self, id: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> &mut AreaSpec {
        self.polygon_area(id, &[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    }

    pub fn passage(&mut self, id: &str, from: &str, to: &str, pts: &[(f64, f64)]) -> &mut PassageSpec {
        self.passages.push(PassageSpec {
            from: from.to_string(),
            to: to.to_string(),
            points: pts.iter().map(|&(x, y)| LocalPoint::new(x, y)).collect(),
            tags: BTreeMap::from([
                (model::KEY_TYPE.to_string(), "passage".to_string()),
                (model::KEY_ID.to_string(), id.to_string()),
                (model::KEY_FROM.to_string(), from.to_string()),
                (model::KEY_TO.to_string(), to.to_string()),
            ]),
        });
        self.passages.last_mut().unwrap()
    }

    /// Adds a node on the current level that rings passing through it will
    /// pick up (used to densify walls).
    pub fn wall_node(&mut self, x: f64, y: f64) -> &mut Self {
        self.extra_nodes.push((LocalPoint::new(x, y), self.level));
        self
    }

    pub fn area_count(&self) -> usize {
        self.areas.len()
    }

    pub fn passage_count(&self) -> usize {
        self.passages.len()
    }

    fn area_level(&self, id: &str) -> Option<i64> {
        self.areas.iter().find(|a| a.id == id).map(|a| a.level)
    }

    pub fn document(&self) -> OsmDocument {
        // Point pool per level.
        let mut pool: BTreeMap<i64, Vec<LocalPoint>> = BTreeMap::new();
        for a in &self.areas {
            pool.entry(a.level).or_default().extend(a.points.iter().copied());
        }
        for p in &self.passages {
            for lvl in [self.area_level(&p.from), self.area_level(&p.to)].into_iter().flatten() {
                pool.entry(lvl).or_default().extend(p.points.iter().copied());
            }
        }
        for (pt, lvl) in &self.extra_nodes {
            pool.entry(*lvl).or_default().push(*pt);
        }

        let mut ids: BTreeMap<(i64, i64, i64), i64> = BTreeMap::new();
        let mut nodes: Vec<RawNode> = Vec::new();
        let root = RawNode {
            id: 1,
            lat: quantize(self.anchor.lat0),
            lon: quantize(self.anchor.lon0),
            tags: vec![(model::KEY_TYPE.into(), "root".into()), ("name".into(), "origin".into())],
            attrs: Attrs::new(),
        };
        nodes.push(root);
        let anchor = self.anchor;
        let mut node_for = |lvl: i64, p: LocalPoint, nodes: &mut Vec<RawNode>| -> i64 {
            let key = (lvl, (p.x * 1000.0).round() as i64, (p.y * 1000.0).round() as i64);
            *ids.entry(key).or_insert_with(|| {
                let (lat, lon) = geo::from_local(p, anchor);
                let id = nodes.len() as i64 + 1;
                nodes.push(RawNode { id, lat: quantize(lat), lon: quantize(lon), tags: vec![], attrs: Attrs::new() });
                id
            })
        };

        let mut ways = Vec::new();
        let mut way_id = 0i64;
        for a in &self.areas {
            let pts = &pool[&a.level];
            let mut ring: Vec<LocalPoint> = Vec::new();
            let n = a.points.len();
            for i in 0..n {
                let (s, e) = (a.points[i], a.points[(i + 1) % n]);
                ring.push(s);
                let len = s.distance(e);
                let mut on: Vec<(f64, LocalPoint)> = pts
                    .iter()
                    .filter(|q| point_segment_distance(**q, s, e) <= ON_EDGE)
                    .map(|q| (s.distance(*q), *q))
                    .filter(|(d, _)| *d > ON_EDGE && *d < len - ON_EDGE)
                    .collect();
                on.sort_by(|x, y| x.0.total_cmp(&y.0));
                on.dedup_by(|x, y| (x.0 - y.0).abs() <= ON_EDGE);
                ring.extend(on.into_iter().map(|(_, q)| q));
            }
            let mut refs: Vec<i64> = ring.iter().map(|p| node_for(a.level, *p, &mut nodes)).collect();
            refs.push(refs[0]);
            way_id += 1;
            ways.push(RawWay { id: way_id, refs, tags: a.tags.clone().into_iter().collect(), attrs: Attrs::new() });
        }
        for p in &self.passages {
            let lvl = self.area_level(&p.from).unwrap_or(self.level);
            let refs = p.points.iter().map(|q| node_for(lvl, *q, &mut nodes)).collect();
            way_id += 1;
            ways.push(RawWay { id: way_id, refs, tags: p.tags.clone().into_iter().collect(), attrs: Attrs::new() });
        }
        // Densifying nodes that no ring picked up are still emitted.
        for (pt, lvl) in self.extra_nodes.clone() {
            node_for(lvl, pt, &mut nodes);
        }
        OsmDocument {
            osm_attrs: Attrs::from([
                ("version".to_string(), "0.6".to_string()),
                ("generator".to_string(), self.generator.clone()),
            ]),
            nodes,
            ways,
            fragments: Default::default(),
        }
    }

    /// Builds the model; panics on malformed input (intended for fixtures).
    pub fn build(&self) -> MapModel {
        MapModel::build(&self.document()).expect("builder produced an invalid document")
    }

    /// Two 5 m × 4 m rooms and one door: the smallest useful graph.
    pub fn two_room_document(mut self) -> OsmDocument {
        self.rect_area("r1", 0.0, 0.0, 5.0, 4.0).inner();
        self.rect_area("r2", 5.0, 0.0, 9.0, 4.0).inner();
        self.passage("d1", "r1", "r2", &[(5.0, 1.5), (5.0, 2.5)]);
        self.document()
    }
}

/// Layout parameters for [`campus`].
#[derive(Debug, Clone)]
pub struct CampusParams {
    pub buildings: usize,
    pub floors: usize,
    /// Rooms per corridor side on each floor.
    pub rooms_per_side: usize,
    pub room_width: f64,
    pub room_depth: f64,
    pub corridor_width: f64,
    pub floor_height: f64,
    /// Group neighbouring room pairs under a structure "suite" area.
    pub suites: bool,
    /// Door-less shaft cells are added until the area count is reached
    /// (at least one per floor).
    pub target_areas: Option<usize>,
    /// Walls are densified until the node count is reached.
    pub target_nodes: Option<usize>,
}

impl Default for CampusParams {
    /// Two six-storey buildings and an outdoor strip: 500 areas, 347
    /// passages and 4908 nodes.
    fn default() -> Self {
        Self {
            buildings: 2,
            floors: 6,
            rooms_per_side: 11,
            room_width: 5.0,
            room_depth: 8.0,
            corridor_width: 3.0,
            floor_height: 4.0,
            suites: true,
            target_areas: Some(500),
            target_nodes: Some(4908),
        }
    }
}

impl CampusParams {
    fn base_areas(&self) -> usize {
        let suites = if self.suites { 2 * (self.rooms_per_side / 2) } else { 0 };
        let per_floor = 6 + 2 * self.rooms_per_side + suites;
        1 + 2 * (2 * self.buildings + 1) + self.buildings * (1 + self.floors * per_floor)
    }

    /// Shaft count per floor, in building-major order.
    fn shafts(&self) -> Vec<usize> {
        let floors = (self.buildings * self.floors).max(1);
        let wanted = self.target_areas.map_or(floors, |t| t.saturating_sub(self.base_areas())).max(floors);
        (0..floors).map(|i| wanted / floors + usize::from(i < wanted % floors)).collect()
    }
}

/// Generates a campus: a row of multi-floor buildings with corridors, rooms,
/// stairs and elevators, joined by an outdoor road and lawn strip.
///
/// Each floor is a corridor flanked by rooms; the west end holds a stair
/// hall, an elevator and a small lobby, the east end a shaft block and one
/// large room. Floors are joined by vertical passages through the stairs and
/// the elevator. Every building has one entrance from the road through the
/// middle south room on the ground floor.
pub fn campus(params: &CampusParams) -> MapBuilder {
    let mut b = MapBuilder::new();
    let p = params;
    let shafts = p.shafts();
    let stair_w = 4.0;
    let lift_w = 3.0;
    let shaft_block = 1.5 * *shafts.iter().max().unwrap_or(&1) as f64;
    let rooms_len = p.rooms_per_side as f64 * p.room_width;
    let width = stair_w + rooms_len + shaft_block;
    let depth = 2.0 * p.room_depth + p.corridor_width;
    let gap = 10.0;
    let road = 8.0;
    let lawn = 10.0;
    let total = p.buildings as f64 * (width + gap) + gap;

    // Outdoor strip south of the buildings, split into tiles at building edges.
    b.level(0.0);
    b.rect_area("outdoor", 0.0, -(road + lawn), total, 0.0).structure().tag("name", "outdoor");
    let mut cuts = vec![0.0];
    for i in 0..p.buildings {
        let x0 = gap + i as f64 * (width + gap);
        cuts.push(x0);
        cuts.push(x0 + width);
    }
    cuts.push(total);
    for t in 0..cuts.len() - 1 {
        let (x0, x1) = (cuts[t], cuts[t + 1]);
        b.rect_area(&format!("road{t}"), x0, -road, x1, 0.0)
            .inner()
            .parent("outdoor")
            .tag("highway", "footway")
            .tag("surface", "pavement");
        b.rect_area(&format!("lawn{t}"), x0, -(road + lawn), x1, -road)
            .inner()
            .parent("outdoor")
            .tag("surface", "grass");
        let mid = (x0 + x1) / 2.0;
        b.passage(
            &format!("road{t}-lawn{t}"),
            &format!("road{t}"),
            &format!("lawn{t}"),
            &[(mid - 1.0, -road), (mid + 1.0, -road)],
        );
        if t > 0 {
            let (a, c) = (format!("road{}", t - 1), format!("road{t}"));
            b.passage(&format!("{a}-{c}"), &a, &c, &[(x0, -road + 2.0), (x0, -2.0)]);
            let (a, c) = (format!("lawn{}", t - 1), format!("lawn{t}"));
            b.passage(&format!("{a}-{c}"), &a, &c, &[(x0, -road - lawn + 2.0), (x0, -road - 2.0)]);
        }
    }

    for bi in 0..p.buildings {
        let bx = gap + bi as f64 * (width + gap);
        let bid = format!("b{bi}");
        b.level(0.0);
        b.rect_area(&bid, bx, 0.0, bx + width, depth).structure().tag("building", "university");
        for f in 0..p.floors {
            let h = f as f64 * p.floor_height;
            b.level(h);
            let fid = format!("{bid}f{f}");
            b.rect_area(&fid, bx, 0.0, bx + width, depth)
                .structure()
                .parent(&bid)
                .height(h)
                .tag("level", &f.to_string());
            let cy0 = p.room_depth;
            let cy1 = p.room_depth + p.corridor_width;
            let corridor = format!("{fid}-corridor");
            b.rect_area(&corridor, bx, cy0, bx + width, cy1).inner().parent(&fid).tag("indoor", "corridor");

            // West end: stairs (south), elevator and lobby (north).
            let stairs = format!("{fid}-stairs");
            b.rect_area(&stairs, bx, 0.0, bx + stair_w, cy0)
                .inner()
                .parent(&fid)
                .tag("highway", "steps")
                .tag("indoor", "room");
            b.passage(&format!("{stairs}-door"), &stairs, &corridor, &[(bx + 1.0, cy0), (bx + 3.0, cy0)])
                .tag("door", "push");
            let lift = format!("{fid}-lift");
            b.rect_area(&lift, bx, cy1, bx + lift_w, depth)
                .inner()
                .parent(&fid)
                .tag("highway", "elevator")
                .tag("indoor", "room");
            b.passage(&format!("{lift}-door"), &lift, &corridor, &[(bx + 0.7, cy1), (bx + 2.3, cy1)])
                .tag("door", "elevatordoor");
            let lobby = format!("{fid}-lobby");
            b.rect_area(&lobby, bx + lift_w, cy1, bx + stair_w, depth).inner().parent(&fid).tag("indoor", "area");
            b.passage(&format!("{lobby}-open"), &lobby, &corridor, &[(bx + lift_w, cy1), (bx + stair_w, cy1)]);
            if f > 0 {
                let below = format!("{bid}f{}", f - 1);
                b.passage(
                    &format!("{bid}-stairs{}-{f}", f - 1),
                    &format!("{below}-stairs"),
                    &stairs,
                    &[(bx, 1.0), (bx, cy0 - 1.0)],
                )
                .tag("highway", "steps");
                b.passage(
                    &format!("{bid}-lift{}-{f}", f - 1),
                    &format!("{below}-lift"),
                    &lift,
                    &[(bx, cy1 + 1.0), (bx, depth - 1.0)],
                )
                .tag("highway", "elevator");
            }

            for side in 0..2 {
                let (y0, y1, wall, tag) = if side == 0 { (0.0, cy0, cy0, 's') } else { (cy1, depth, cy1, 'n') };
                for r in 0..p.rooms_per_side {
                    let x0 = bx + stair_w + r as f64 * p.room_width;
                    let x1 = x0 + p.room_width;
                    let rid = format!("{fid}-{tag}{r}");
                    let parent = if p.suites && r / 2 < p.rooms_per_side / 2 {
                        let sid = format!("{fid}-{tag}suite{}", r / 2);
                        if r % 2 == 0 {
                            b.rect_area(&sid, x0, y0, x0 + 2.0 * p.room_width, y1).structure().parent(&fid);
                        }
                        sid
                    } else {
                        fid.clone()
                    };
                    b.rect_area(&rid, x0, y0, x1, y1).inner().parent(&parent).tag("indoor", "room");
                    b.passage(&format!("{rid}-door"), &rid, &corridor, &[(x0 + 1.0, wall), (x0 + 2.0, wall)])
                        .tag("door", "pull");
                }
            }
            // East end: shaft block (south) and one large room (north).
            let sx0 = bx + stair_w + rooms_len;
            let k = shafts[bi * p.floors + f];
            let sw = shaft_block / k as f64;
            for s in 0..k {
                let x0 = sx0 + s as f64 * sw;
                let x1 = if s + 1 == k { bx + width } else { x0 + sw };
                b.rect_area(&format!("{fid}-shaft{s}"), x0, 0.0, x1, cy0)
                    .structure()
                    .parent(&fid)
                    .tag("indoor", "wall");
            }
            let ne = format!("{fid}-ne");
            b.rect_area(&ne, sx0, cy1, bx + width, depth).inner().parent(&fid).tag("indoor", "room");
            b.passage(&format!("{ne}-door"), &ne, &corridor, &[(sx0 + 0.5, cy1), (bx + width - 0.5, cy1)]);
            if f == 0 {
                let mid = p.rooms_per_side / 2;
                let door_x = bx + stair_w + mid as f64 * p.room_width + 1.5;
                b.passage(
                    &format!("{bid}-entrance"),
                    &format!("{fid}-s{mid}"),
                    &format!("road{}", 1 + 2 * bi),
                    &[(door_x, 0.0), (door_x + 1.5, 0.0)],
                )
                .tag("door", "automatic")
                .tag("kerb:height", "0.02");
            }
        }
    }

    if let Some(target) = p.target_nodes {
        let have = b.document().nodes.len();
        // Densify the lawn's south edge, which no other area shares.
        let missing = target.saturating_sub(have);
        let y = -(road + lawn);
        b.level(0.0);
        for k in 0..missing {
            let x = total * (k as f64 + 0.5) / missing as f64;
            b.wall_node((x * 1000.0).round() / 1000.0, y);
        }
    }
    b
}

/// Two two-storey buildings facing each other across a plaza.
///
/// Building `A` spans x 0..20 m and `B` x 40..60 m, both 12 m deep; the
/// plaza fills the gap. Each floor has a hall along the middle, a south and
/// a north room, stairs and an elevator. In `A` the elevator sits at the east
/// end next to the plaza and the stairs at the far west end; `B` is the
/// mirror image. Floors are 4 m apart, and everything hangs under a `site`
/// root area.
pub fn two_buildings() -> MapBuilder {
    let mut b = MapBuilder::new();
    b.rect_area("site", 0.0, 0.0, 60.0, 12.0).structure().tag("name", "site");
    b.rect_area("plaza", 20.0, 0.0, 40.0, 12.0)
        .inner()
        .parent("site")
        .tag("name", "plaza")
        .tag("surface", "paving_stones")
        .tag("indoor", "no");
    for (bid, ox, east) in [("A", 0.0, true), ("B", 40.0, false)] {
        // Mirror B so its elevator also faces the plaza.
        let x = |v: f64| if east { ox + v } else { ox + 20.0 - v };
        let span = |a: f64, c: f64| (x(a).min(x(c)), x(a).max(x(c)));
        b.level(0.0);
        b.rect_area(bid, ox, 0.0, ox + 20.0, 12.0).structure().parent("site").tag("building", "yes");
        for f in 0..2 {
            let h = 4.0 * f as f64;
            b.level(h);
            let fid = format!("{bid}{f}");
            b.rect_area(&fid, ox, 0.0, ox + 20.0, 12.0).structure().parent(bid).height(h).tag("level", &f.to_string());
            let hall = format!("{fid}-hall");
            b.rect_area(&hall, ox, 4.0, ox + 20.0, 8.0).inner().parent(&fid).tag("indoor", "corridor");
            let (sx0, sx1) = span(0.0, 4.0);
            let stairs = format!("{fid}-stairs");
            b.rect_area(&stairs, sx0, 0.0, sx1, 4.0).inner().parent(&fid).tag("highway", "steps").tag("indoor", "room");
            let (rx0, rx1) = span(4.0, 20.0);
            let south = format!("{fid}-s");
            b.rect_area(&south, rx0, 0.0, rx1, 4.0)
                .inner()
                .parent(&fid)
                .tag("indoor", "room")
                .tag("name", &format!("{fid} south"));
            let (lx0, lx1) = span(16.0, 20.0);
            let lift = format!("{fid}-lift");
            b.rect_area(&lift, lx0, 8.0, lx1, 12.0)
                .inner()
                .parent(&fid)
                .tag("highway", "elevator")
                .tag("indoor", "room");
            let (nx0, nx1) = span(0.0, 16.0);
            let north = format!("{fid}-n");
            b.rect_area(&north, nx0, 8.0, nx1, 12.0)
                .inner()
                .parent(&fid)
                .tag("indoor", "room")
                .tag("name", &format!("{fid} north"));

            let door = |a: f64, c: f64, y: f64| {
                let (p, q) = span(a, c);
                [(p, y), (q, y)]
            };
            b.passage(&format!("{stairs}-door"), &stairs, &hall, &door(1.0, 3.0, 4.0)).tag("door", "yes");
            b.passage(&format!("{south}-door"), &south, &hall, &door(10.0, 12.0, 4.0)).tag("door", "yes");
            b.passage(&format!("{lift}-door"), &lift, &hall, &door(17.0, 19.0, 8.0)).tag("door", "elevatordoor");
            b.passage(&format!("{north}-door"), &north, &hall, &door(7.0, 9.0, 8.0)).tag("door", "yes");
            if f == 0 {
                b.passage(&format!("{bid}-entrance"), &hall, "plaza", &[(x(20.0), 5.0), (x(20.0), 7.0)])
                    .tag("door", "automatic");
            } else {
                let below = format!("{bid}0");
                b.passage(&format!("{bid}-lift0-1"), &format!("{below}-lift"), &lift, &door(17.0, 19.0, 12.0))
                    .tag("highway", "elevator");
                b.passage(
                    &format!("{bid}-stairs0-1"),
                    &format!("{below}-stairs"),
                    &stairs,
                    &[(x(0.0), 1.0), (x(0.0), 3.0)],
                )
                .tag("highway", "steps");
            }
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_buildings_is_valid() {
        let m = two_buildings().build();
        let errors: Vec<_> = crate::model::validate(&m).into_iter().filter(|d| d.is_error()).collect();
        assert!(errors.is_empty(), "{errors:?}");
        assert_eq!(m.tree_roots().len(), 1);
        assert_eq!(m.height_levels(), vec![0.0, 4.0]);
    }

    #[test]
    fn builder_shares_wall_nodes() {
        let doc = MapBuilder::new().two_room_document();
        let r1 = doc.ways.iter().find(|w| w.tag("osmAG:id") == Some("r1")).unwrap();
        let r2 = doc.ways.iter().find(|w| w.tag("osmAG:id") == Some("r2")).unwrap();
        let d1 = doc.ways.iter().find(|w| w.tag("osmAG:id") == Some("d1")).unwrap();
        for n in &d1.refs {
            assert!(r1.refs.contains(n) && r2.refs.contains(n));
        }
        assert_eq!(r1.refs.first(), r1.refs.last());
    }

    #[test]
    fn default_campus_counts() {
        let m = campus(&CampusParams::default()).build();
        assert_eq!(m.areas().len(), 500);
        assert_eq!(m.passages().len(), 347);
        assert_eq!(m.nodes().len(), 4908);
    }
}
