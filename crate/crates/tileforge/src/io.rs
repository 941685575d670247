//! Versioned JSON documents.
//!
//! Every document is a JSON object with a `"format"` string such as
//! `"tileforge/rel-wang-instance/v1"`. Regions are written as
//! `{"cells": [[x, y], ...]}` or `{"outline": [[x, y], ...]}`, edges as
//! `[x, y, side]`, and big integers as numbers or decimal strings. Parsing
//! re-validates every invariant the constructors enforce.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::gadgets::{GadgetTileset, GadgetTiling, GadgetValidationReport, TILESET_FORMAT};
use crate::geometry::{Outline, Region};
use crate::oracles::AssignmentCount;
use crate::pipeline::Manifest;
use crate::rect_reduction::{ExpandedRegion, PerturbedTileset};
use crate::rect_solver::{RectTile, RectTiling};
use crate::reductions::PolyominoTile;
use crate::solve::TilingCount;
use crate::wang::{BoundaryTileMap, ColoredRegion, GenWangTile, OrdWangTile, RelWangSystem, WangTiling};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document has no \"format\" string")]
    MissingFormat,
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("expected a {expected} document, found {found:?}")]
    WrongKind { expected: &'static str, found: String },
    #[error("invalid document: {0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, IoError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenWangInstance {
    pub tiles: Vec<GenWangTile>,
    pub region: ColoredRegion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdWangInstance {
    pub tiles: Vec<OrdWangTile>,
    pub region: ColoredRegion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelWangInstance {
    pub system: RelWangSystem,
    pub region: Region,
    /// Boundary tiles on every exterior edge; `None` leaves the boundary free.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryTileMap>,
}

/// A rectangle-tiling region given by cells or, for large instances, by its outline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RectRegion {
    Cells(Region),
    Outline(Outline),
}

impl RectRegion {
    pub fn to_outline(&self) -> std::result::Result<Outline, crate::geometry::GeometryError> {
        match self {
            RectRegion::Cells(r) => r.to_outline(),
            RectRegion::Outline(o) => Ok(o.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectInstance {
    pub tiles: Vec<RectTile>,
    pub region: RectRegion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyInstance {
    pub tiles: Vec<PolyominoTile>,
    pub region: Region,
}

/// Output of the Wang-to-rectangle reduction: the tileset by provenance, the
/// expanded region with its shift log, and concrete sizes when they fit in `u64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WangToRectDoc {
    pub tileset: PerturbedTileset,
    pub region: ExpandedRegion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiles: Option<Vec<RectTile>>,
}

impl WangToRectDoc {
    /// The reduced instance as a plain rectangle-tiling instance, if sizes fit.
    pub fn rect_instance(&self) -> Option<RectInstance> {
        Some(RectInstance { tiles: self.tiles.clone()?, region: RectRegion::Outline(self.region.outline.clone()) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witnesses {
    Wang(Vec<WangTiling>),
    Rect(Vec<RectTiling>),
    Placements(Vec<GadgetTiling>),
}

impl Witnesses {
    pub fn len(&self) -> usize {
        match self {
            Witnesses::Wang(v) => v.len(),
            Witnesses::Rect(v) => v.len(),
            Witnesses::Placements(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A solver result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingsDoc {
    #[serde(with = "crate::bignum")]
    pub count: num_bigint::BigUint,
    pub exhausted: bool,
    pub nodes: u64,
    pub witnesses: Witnesses,
}

impl TilingsDoc {
    fn from_count<W>(c: TilingCount<W>, wrap: impl FnOnce(Vec<W>) -> Witnesses) -> Self {
        TilingsDoc { count: c.count, exhausted: c.exhausted, nodes: c.nodes, witnesses: wrap(c.witnesses) }
    }
}

impl From<TilingCount<WangTiling>> for TilingsDoc {
    fn from(c: TilingCount<WangTiling>) -> Self {
        Self::from_count(c, Witnesses::Wang)
    }
}

impl From<TilingCount<RectTiling>> for TilingsDoc {
    fn from(c: TilingCount<RectTiling>) -> Self {
        Self::from_count(c, Witnesses::Rect)
    }
}

impl From<TilingCount<GadgetTiling>> for TilingsDoc {
    fn from(c: TilingCount<GadgetTiling>) -> Self {
        Self::from_count(c, Witnesses::Placements)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDoc {
    /// `1in3` or `2sat`.
    pub problem: String,
    pub variables: usize,
    #[serde(flatten)]
    pub result: AssignmentCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Document {
    GenWang(GenWangInstance),
    OrdWang(OrdWangInstance),
    RelWang(RelWangInstance),
    Rect(RectInstance),
    Poly(PolyInstance),
    WangToRect(WangToRectDoc),
    Gadgets(GadgetTileset),
    GadgetReport(GadgetValidationReport),
    Tilings(TilingsDoc),
    Oracle(OracleDoc),
    Manifest(Manifest),
}

pub const GEN_WANG_FORMAT: &str = "tileforge/gen-wang-instance/v1";
pub const ORD_WANG_FORMAT: &str = "tileforge/ord-wang-instance/v1";
pub const REL_WANG_FORMAT: &str = "tileforge/rel-wang-instance/v1";
pub const RECT_FORMAT: &str = "tileforge/rect-instance/v1";
pub const POLY_FORMAT: &str = "tileforge/polyomino-instance/v1";
pub const WANG_TO_RECT_FORMAT: &str = "tileforge/wang-to-rect/v1";
pub const GADGET_REPORT_FORMAT: &str = "tileforge/gadget-report/v1";
pub const TILINGS_FORMAT: &str = "tileforge/tilings/v1";
pub const ORACLE_FORMAT: &str = "tileforge/oracle-count/v1";
pub const MANIFEST_FORMAT: &str = "tileforge/manifest/v1";

fn object<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).expect("documents serialize") {
        Value::Object(m) => m,
        _ => unreachable!("documents are structs"),
    }
}

fn parse<T: DeserializeOwned>(m: Map<String, Value>) -> Result<T> {
    Ok(serde_json::from_value(Value::Object(m))?)
}

impl Document {
    pub fn format(&self) -> &'static str {
        match self {
            Document::GenWang(_) => GEN_WANG_FORMAT,
            Document::OrdWang(_) => ORD_WANG_FORMAT,
            Document::RelWang(_) => REL_WANG_FORMAT,
            Document::Rect(_) => RECT_FORMAT,
            Document::Poly(_) => POLY_FORMAT,
            Document::WangToRect(_) => WANG_TO_RECT_FORMAT,
            Document::Gadgets(_) => TILESET_FORMAT,
            Document::GadgetReport(_) => GADGET_REPORT_FORMAT,
            Document::Tilings(_) => TILINGS_FORMAT,
            Document::Oracle(_) => ORACLE_FORMAT,
            Document::Manifest(_) => MANIFEST_FORMAT,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = match self {
            Document::GenWang(d) => object(d),
            Document::OrdWang(d) => object(d),
            Document::RelWang(d) => object(d),
            Document::Rect(d) => object(d),
            Document::Poly(d) => object(d),
            Document::WangToRect(d) => object(d),
            Document::Gadgets(d) => object(d),
            Document::GadgetReport(d) => object(d),
            Document::Tilings(d) => object(d),
            Document::Oracle(d) => object(d),
            Document::Manifest(d) => object(d),
        };
        m.insert("format".into(), Value::String(self.format().into()));
        Value::Object(m)
    }

    /// Pretty-printed JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("documents serialize") + "\n"
    }

    pub fn from_value(v: Value) -> Result<Document> {
        let Value::Object(mut m) = v else {
            return Err(IoError::MissingFormat);
        };
        let format = match m.get("format") {
            Some(Value::String(s)) => s.clone(),
            _ => return Err(IoError::MissingFormat),
        };
        if format != TILESET_FORMAT {
            m.remove("format");
        }
        let doc = match format.as_str() {
            GEN_WANG_FORMAT => Document::GenWang(parse(m)?),
            ORD_WANG_FORMAT => Document::OrdWang(parse(m)?),
            REL_WANG_FORMAT => Document::RelWang(parse(m)?),
            RECT_FORMAT => Document::Rect(parse(m)?),
            POLY_FORMAT => Document::Poly(parse(m)?),
            WANG_TO_RECT_FORMAT => Document::WangToRect(parse(m)?),
            TILESET_FORMAT => Document::Gadgets(parse(m)?),
            GADGET_REPORT_FORMAT => Document::GadgetReport(parse(m)?),
            TILINGS_FORMAT => Document::Tilings(parse(m)?),
            ORACLE_FORMAT => Document::Oracle(parse(m)?),
            MANIFEST_FORMAT => Document::Manifest(parse(m)?),
            _ => return Err(IoError::UnknownFormat(format)),
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn from_json(s: &str) -> Result<Document> {
        Self::from_value(serde_json::from_str(s)?)
    }

    /// Checks the invariants that plain deserialization does not.
    pub fn validate(&self) -> Result<()> {
        let bad = |e: &dyn std::fmt::Display| IoError::Invalid(e.to_string());
        match self {
            Document::GenWang(d) => {
                for t in &d.tiles {
                    GenWangTile::new(t.name.clone(), t.shape.clone(), t.colors.clone()).map_err(|e| bad(&e))?;
                }
                ColoredRegion::new(d.region.region.clone(), d.region.boundary.clone()).map_err(|e| bad(&e))?;
            }
            Document::OrdWang(d) => {
                ColoredRegion::new(d.region.region.clone(), d.region.boundary.clone()).map_err(|e| bad(&e))?;
            }
            Document::RelWang(d) => {
                RelWangSystem::new(d.system.n, d.system.h.iter().copied(), d.system.v.iter().copied()).map_err(|e| bad(&e))?;
                if let Some(b) = &d.boundary {
                    for e in d.region.exterior_edges() {
                        match b.get(e) {
                            None => return Err(IoError::Invalid(format!("no boundary tile at {e:?}"))),
                            Some(t) if t as usize >= d.system.n => return Err(IoError::Invalid(format!("boundary tile {t} out of range"))),
                            _ => {}
                        }
                    }
                }
            }
            Document::Rect(d) => {
                if let Some(t) = d.tiles.iter().find(|t| t.height == 0 || t.width == 0) {
                    return Err(IoError::Invalid(format!("tile {:?} has zero size", t.label)));
                }
            }
            Document::Gadgets(d) => {
                for t in &d.tiles {
                    GenWangTile::new(t.name.clone(), t.shape.clone(), t.colors.clone()).map_err(|e| bad(&e))?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        self.format().split('/').nth(1).unwrap_or("document")
    }
}

macro_rules! expect_kind {
    ($fn:ident, $variant:ident, $ty:ty, $fmt:expr) => {
        /// Parses a document and requires the given kind.
        pub fn $fn(s: &str) -> Result<$ty> {
            match Document::from_json(s)? {
                Document::$variant(d) => Ok(d),
                other => Err(IoError::WrongKind { expected: $fmt, found: other.format().into() }),
            }
        }
    };
}

expect_kind!(read_gen_wang, GenWang, GenWangInstance, GEN_WANG_FORMAT);
expect_kind!(read_ord_wang, OrdWang, OrdWangInstance, ORD_WANG_FORMAT);
expect_kind!(read_rel_wang, RelWang, RelWangInstance, REL_WANG_FORMAT);
expect_kind!(read_rect, Rect, RectInstance, RECT_FORMAT);
expect_kind!(read_gadgets, Gadgets, GadgetTileset, TILESET_FORMAT);
expect_kind!(read_tilings, Tilings, TilingsDoc, TILINGS_FORMAT);
expect_kind!(read_manifest, Manifest, Manifest, MANIFEST_FORMAT);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Cell, Edge, Side};
    use crate::wang::{uniform_boundary, EdgeMap};

    fn roundtrip(d: Document) {
        let s = d.to_json();
        let back = Document::from_json(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn region_forms() {
        let r = Region::rectangle(0, 0, 2, 1);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"cells":[[0,0],[1,0]]}"#);
        let o = Outline::rectangle(0, 0, 2, 1);
        assert_eq!(serde_json::to_string(&o).unwrap(), r#"{"outline":[[0,0],[2,0],[2,1],[0,1]]}"#);
        let e = Edge::new(Cell::new(3, 4), Side::West);
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"[3,4,"West"]"#);
        // disconnected regions and diagonal outlines are rejected
        assert!(serde_json::from_str::<Region>(r#"{"cells":[[0,0],[2,0]]}"#).is_err());
        assert!(serde_json::from_str::<Outline>(r#"{"outline":[[0,0],[2,2],[0,2]]}"#).is_err());
        let rr: RectRegion = serde_json::from_str(r#"{"outline":[[0,0],[2,0],[2,1],[0,1]]}"#).unwrap();
        assert_eq!(rr, RectRegion::Outline(o));
    }

    #[test]
    fn roundtrips() {
        let region = Region::rectangle(0, 0, 2, 2);
        let sys = RelWangSystem::new(2, [(0, 1), (1, 0)], [(0, 1)]).unwrap();
        roundtrip(Document::RelWang(RelWangInstance { system: sys.clone(), region: region.clone(), boundary: Some(uniform_boundary(&region, 1)) }));
        roundtrip(Document::RelWang(RelWangInstance { system: sys, region: region.clone(), boundary: None }));
        let tile = GenWangTile::unit("a", OrdWangTile::new(0, 1, 0, 1));
        let cr = ColoredRegion::uniform(region.clone(), 0);
        roundtrip(Document::GenWang(GenWangInstance { tiles: vec![tile], region: cr.clone() }));
        roundtrip(Document::OrdWang(OrdWangInstance { tiles: vec![OrdWangTile::new(0, 0, 0, 0)], region: cr }));
        roundtrip(Document::Rect(RectInstance { tiles: vec![RectTile::new(1, 2, "d")], region: RectRegion::Cells(region.clone()) }));
        roundtrip(Document::Rect(RectInstance { tiles: vec![RectTile::new(1, 2, "d")], region: RectRegion::Outline(Outline::rectangle(0, 0, 4, 4)) }));
        roundtrip(Document::Poly(PolyInstance { tiles: vec![PolyominoTile { shape: Region::rectangle(0, 0, 1, 2) }], region }));
        roundtrip(Document::Gadgets(crate::gadgets::build_tileset_t()));
        let tc = TilingCount { count: num_bigint::BigUint::from(5u32).pow(30), exhausted: true, witnesses: vec![WangTiling { assignment: vec![0, 1] }], nodes: 7 };
        roundtrip(Document::Tilings(tc.into()));
        roundtrip(Document::Oracle(OracleDoc { problem: "2sat".into(), variables: 2, result: AssignmentCount { count: 3, assignments: Some(vec![1, 2, 3]) } }));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(Document::from_json("{}"), Err(IoError::MissingFormat)));
        assert!(matches!(Document::from_json(r#"{"format":"tileforge/nope/v9"}"#), Err(IoError::UnknownFormat(_))));
        // boundary tile out of range
        let region = Region::rectangle(0, 0, 1, 1);
        let sys = RelWangSystem::complete(1);
        let d = Document::RelWang(RelWangInstance { system: sys, region: region.clone(), boundary: Some(uniform_boundary(&region, 3)) });
        assert!(matches!(Document::from_json(&d.to_json()), Err(IoError::Invalid(_))));
        // boundary missing an edge
        let partial = EdgeMap::from_entries(vec![(Edge::new(Cell::new(0, 0), Side::North), 0)]);
        let d = Document::RelWang(RelWangInstance { system: RelWangSystem::complete(1), region, boundary: Some(partial) });
        assert!(matches!(Document::from_json(&d.to_json()), Err(IoError::Invalid(_))));
        let s = Document::Oracle(OracleDoc { problem: "1in3".into(), variables: 1, result: AssignmentCount { count: 0, assignments: None } }).to_json();
        assert!(matches!(read_rect(&s), Err(IoError::WrongKind { .. })));
    }
}
