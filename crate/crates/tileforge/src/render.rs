//! SVG drawings of instances and tilings.
//!
//! Wang colors are drawn as triangles on the edges they label: boundary colors
//! point outward from the region, tile colors point into the tile. Rectangle
//! tilings are drawn as labeled rectangles. Output depends only on the input.

use std::fmt::Write;

use thiserror::Error;

use crate::geometry::{Cell, Edge, Outline, Region, Side};
use crate::io::{Document, RectRegion, TilingsDoc, Witnesses};
use crate::rect_solver::{RectTile, RectTiling};
use crate::wang::{Color, ColoredRegion, GenWangTile, OrdWangTile, TileId, WangTiling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("drawing needs {elements} elements, above the cap of {cap}")]
    TooLarge { elements: usize, cap: usize },
    #[error("tiling does not match the instance: {0}")]
    Mismatch(String),
    #[error("nothing to render for a {0} document")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, RenderError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Largest number of drawn shapes before the renderer gives up or falls back to the outline.
    pub max_elements: usize,
    /// Pixels per unit cell for Wang drawings.
    pub cell_px: u32,
    /// Longest side in pixels for rectangle drawings.
    pub target_px: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { max_elements: 50_000, cell_px: 24, target_px: 800 }
    }
}

const PALETTE: [&str; 12] = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#9a6324",
];

/// Fill for a color index; the free-boundary marker is white.
pub fn color_fill(c: Color) -> &'static str {
    if c == crate::gadgets::FREE_COLOR {
        "#ffffff"
    } else {
        PALETTE[c as usize % PALETTE.len()]
    }
}

struct Svg {
    body: String,
    elements: usize,
}

impl Svg {
    fn new() -> Self {
        Svg { body: String::new(), elements: 0 }
    }

    fn push(&mut self, s: std::fmt::Arguments) {
        self.elements += 1;
        let _ = self.body.write_fmt(s);
        self.body.push('\n');
    }

    fn finish(self, view: (i64, i64, i64, i64), px: (u64, u64)) -> String {
        let (x, y, w, h) = view;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x} {y} {w} {h}\" width=\"{}\" height=\"{}\">\n{}</svg>\n",
            px.0, px.1, self.body
        )
    }
}

fn check_cap(elements: usize, o: &RenderOptions) -> Result<()> {
    if elements > o.max_elements {
        Err(RenderError::TooLarge { elements, cap: o.max_elements })
    } else {
        Ok(())
    }
}

/// Triangle on edge `e` with its apex at the centre of cell `e.cell`, in units of `s`.
fn triangle(e: Edge, s: i64) -> String {
    let (x, y) = (e.cell.x * s, e.cell.y * s);
    let (cx, cy) = (x + s / 2, y + s / 2);
    let (a, b) = match e.side {
        Side::North => ((x, y), (x + s, y)),
        Side::East => ((x + s, y), (x + s, y + s)),
        Side::South => ((x + s, y + s), (x, y + s)),
        Side::West => ((x, y + s), (x, y)),
    };
    format!("{},{} {},{} {},{}", a.0, a.1, b.0, b.1, cx, cy)
}

fn outline_points(o: &Outline, s: i64) -> String {
    o.vertices.iter().map(|&(x, y)| format!("{},{}", x * s, y * s)).collect::<Vec<_>>().join(" ")
}

fn wang_frame(region: &Region, s: i64) -> ((i64, i64, i64, i64), (u64, u64)) {
    let (x0, y0, x1, y1) = region.bbox();
    let (w, h) = ((x1 - x0 + 3) * s, (y1 - y0 + 3) * s);
    (((x0 - 1) * s, (y0 - 1) * s, w, h), (w as u64, h as u64))
}

/// A colored region, optionally with a generalized Wang tiling given as
/// `(tile index, translation)` placements.
pub fn render_colored_region(region: &ColoredRegion, tiling: Option<(&[GenWangTile], &[(usize, Cell)])>, o: &RenderOptions) -> Result<String> {
    let s = o.cell_px as i64;
    let cells = region.region.len();
    let tile_edges: usize = tiling.map_or(0, |(ts, pl)| pl.iter().map(|&(t, _)| ts.get(t).map_or(0, |t| t.colors.len() + 1)).sum());
    check_cap(cells + region.boundary.len() + tile_edges, o)?;
    let mut svg = Svg::new();
    for c in region.region.cells() {
        svg.push(format_args!("<rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{s}\" height=\"{s}\" fill=\"#f4f4f4\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>", c.x * s, c.y * s));
    }
    if let Some((tiles, placements)) = tiling {
        for &(ti, at) in placements {
            let t = tiles.get(ti).ok_or_else(|| RenderError::Mismatch(format!("tile {ti} out of range")))?;
            for &(e, c) in t.colors.entries() {
                let e = Edge::new(e.cell.translate(at.x, at.y), e.side);
                svg.push(format_args!("<polygon class=\"tile-edge\" points=\"{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"0.5\"/>", triangle(e, s), color_fill(c)));
            }
            let outline = t.shape.translate(at.x, at.y).to_outline().map_err(|e| RenderError::Mismatch(e.to_string()))?;
            svg.push(format_args!("<polygon class=\"tile\" points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"><title>{}</title></polygon>", outline_points(&outline, s), xml(&t.name)));
        }
    }
    for &(e, c) in region.boundary.entries() {
        // drawn in the neighbouring outside cell, pointing away from the region
        let out = e.flip();
        svg.push(format_args!("<polygon class=\"boundary\" points=\"{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"0.5\"/>", triangle(out, s), color_fill(c)));
    }
    let (view, px) = wang_frame(&region.region, s);
    Ok(svg.finish(view, px))
}

/// A relational instance: cells labeled by their tile, boundary tiles outside.
pub fn render_relational(region: &Region, boundary: Option<&crate::wang::BoundaryTileMap>, tiling: Option<&WangTiling>, o: &RenderOptions) -> Result<String> {
    let s = o.cell_px as i64;
    let nb = boundary.map_or(0, |b| b.len());
    check_cap(2 * region.len() + 2 * nb, o)?;
    if let Some(t) = tiling {
        if t.assignment.len() != region.len() {
            return Err(RenderError::Mismatch(format!("{} tiles for {} cells", t.assignment.len(), region.len())));
        }
    }
    let mut svg = Svg::new();
    let font = s / 2;
    for (i, c) in region.cells().iter().enumerate() {
        let fill = tiling.map_or("#f4f4f4", |t| color_fill(t.assignment[i] as Color));
        svg.push(format_args!("<rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{s}\" height=\"{s}\" fill=\"{fill}\" stroke=\"#666666\" stroke-width=\"1\"/>", c.x * s, c.y * s));
        if let Some(t) = tiling {
            svg.push(format_args!("<text x=\"{}\" y=\"{}\" font-size=\"{font}\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>", c.x * s + s / 2, c.y * s + s / 2, t.assignment[i]));
        }
    }
    if let Some(b) = boundary {
        for &(e, t) in b.entries() {
            let out = e.cell.step(e.side);
            svg.push(format_args!("<text class=\"boundary\" x=\"{}\" y=\"{}\" font-size=\"{font}\" fill=\"#555555\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>", out.x * s + s / 2, out.y * s + s / 2, t as TileId));
        }
    }
    let (view, px) = wang_frame(region, s);
    Ok(svg.finish(view, px))
}

fn rect_frame(o: &Outline, target: u32) -> ((i64, i64, i64, i64), (u64, u64), f64) {
    let (x0, y0, x1, y1) = o.bbox();
    let (w, h) = ((x1 - x0).max(1), (y1 - y0).max(1));
    let pad = (w.max(h) / 50).max(1);
    let side = w.max(h) + 2 * pad;
    let scale = target as f64 / side as f64;
    let px = (((w + 2 * pad) as f64 * scale).round().max(1.0) as u64, ((h + 2 * pad) as f64 * scale).round().max(1.0) as u64);
    ((x0 - pad, y0 - pad, w + 2 * pad, h + 2 * pad), px, 1.0 / scale)
}

/// A rectangle-tiling region with an optional tiling.
///
/// Regions with more cells than the element cap are drawn by outline only;
/// a tiling with more rectangles than the cap is an error.
pub fn render_rect(tiles: &[RectTile], region: &RectRegion, tiling: Option<&RectTiling>, o: &RenderOptions) -> Result<String> {
    let outline = region.to_outline().map_err(|e| RenderError::Mismatch(e.to_string()))?;
    let draw_cells = matches!(region, RectRegion::Cells(r) if r.len() + tiling.map_or(0, |t| 2 * t.placements.len()) < o.max_elements);
    if let Some(t) = tiling {
        check_cap(2 * t.placements.len() + 1, o)?;
    }
    let (view, px, unit) = rect_frame(&outline, o.target_px);
    let stroke = format!("{:.3}", unit);
    let mut svg = Svg::new();
    if let (true, RectRegion::Cells(r)) = (draw_cells, region) {
        for c in r.cells() {
            svg.push(format_args!("<rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"1\" height=\"1\" fill=\"#f4f4f4\" stroke=\"#dddddd\" stroke-width=\"{stroke}\"/>", c.x, c.y));
        }
    }
    if let Some(t) = tiling {
        for &(ti, at) in &t.placements {
            let tile = tiles.get(ti).ok_or_else(|| RenderError::Mismatch(format!("tile {ti} out of range")))?;
            let (w, h) = (tile.width, tile.height);
            let font = (w.min(h) as f64 / 3.0).max(unit);
            svg.push(format_args!(
                "<rect class=\"tile\" x=\"{}\" y=\"{}\" width=\"{w}\" height=\"{h}\" fill=\"{}\" fill-opacity=\"0.6\" stroke=\"#000000\" stroke-width=\"{stroke}\"/>",
                at.x,
                at.y,
                color_fill(ti as Color)
            ));
            svg.push(format_args!(
                "<text x=\"{}\" y=\"{}\" font-size=\"{:.3}\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>",
                at.x as f64 + w as f64 / 2.0,
                at.y as f64 + h as f64 / 2.0,
                font,
                xml(&tile.label)
            ));
        }
    }
    let width = format!("{:.3}", 2.0 * unit);
    svg.push(format_args!("<polygon class=\"outline\" points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{width}\"/>", outline_points(&outline, 1)));
    Ok(svg.finish(view, px))
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders any instance document, with the first witness of `tilings` if given.
pub fn render_document(doc: &Document, tilings: Option<&TilingsDoc>, o: &RenderOptions) -> Result<String> {
    let wrong = |kind: &str| RenderError::Mismatch(format!("expected {kind} witnesses"));
    match doc {
        Document::GenWang(g) => match tilings.map(|t| &t.witnesses) {
            None => render_colored_region(&g.region, None, o),
            Some(Witnesses::Placements(v)) => match v.first() {
                Some(w) => render_colored_region(&g.region, Some((&g.tiles, &w.placements)), o),
                None => render_colored_region(&g.region, None, o),
            },
            Some(_) => Err(wrong("placement")),
        },
        Document::OrdWang(w) => {
            let units: Vec<GenWangTile> = w.tiles.iter().enumerate().map(|(i, &t): (usize, &OrdWangTile)| GenWangTile::unit(&format!("o{i}"), t)).collect();
            match tilings.map(|t| &t.witnesses) {
                None => render_colored_region(&w.region, None, o),
                Some(Witnesses::Wang(v)) => match v.first() {
                    Some(t) => {
                        let pl: Vec<(usize, Cell)> = w.region.region.cells().iter().zip(&t.assignment).map(|(&c, &a)| (a as usize, c)).collect();
                        render_colored_region(&w.region, Some((&units, &pl)), o)
                    }
                    None => render_colored_region(&w.region, None, o),
                },
                Some(_) => Err(wrong("wang")),
            }
        }
        Document::RelWang(r) => {
            let t = match tilings.map(|t| &t.witnesses) {
                None => None,
                Some(Witnesses::Wang(v)) => v.first(),
                Some(_) => return Err(wrong("wang")),
            };
            render_relational(&r.region, r.boundary.as_ref(), t, o)
        }
        Document::Rect(r) => {
            let t = match tilings.map(|t| &t.witnesses) {
                None => None,
                Some(Witnesses::Rect(v)) => v.first(),
                Some(_) => return Err(wrong("rect")),
            };
            render_rect(&r.tiles, &r.region, t, o)
        }
        Document::WangToRect(w) => {
            let t = match tilings.map(|t| &t.witnesses) {
                None => None,
                Some(Witnesses::Rect(v)) => v.first(),
                Some(_) => return Err(wrong("rect")),
            };
            let tiles = w.tiles.clone().unwrap_or_default();
            if t.is_some() && tiles.is_empty() {
                return Err(RenderError::Mismatch("tile sizes are not available".into()));
            }
            render_rect(&tiles, &RectRegion::Outline(w.region.outline.clone()), t, o)
        }
        Document::Poly(p) => {
            let cr = ColoredRegion::uniform(p.region.clone(), 0);
            render_colored_region(&cr, None, o)
        }
        other => Err(RenderError::Unsupported(other.kind().into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rect_reduction::{build_gamma0, build_gamma0_outline, build_r0};
    use crate::rect_solver::count_rect_tilings;
    use crate::solve::SolveLimits;

    #[test]
    fn one_cell_has_four_boundary_triangles() {
        let r = ColoredRegion::uniform(Region::rectangle(0, 0, 1, 1), 2);
        let svg = render_colored_region(&r, None, &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("class=\"boundary\"").count(), 4);
        assert_eq!(svg, render_colored_region(&r, None, &RenderOptions::default()).unwrap());
    }

    #[test]
    fn gamma0_base_tiling() {
        let region = build_gamma0(2, 2, 5, 1).unwrap();
        let tiles = build_r0(5, 1).unwrap();
        let c = count_rect_tilings(&tiles, &region, SolveLimits::default()).unwrap();
        assert_eq!(c.count_u64(), Some(1));
        let t = &c.witnesses[0];
        let svg = render_rect(&tiles, &RectRegion::Cells(region), Some(t), &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches(">w</text>").count(), 4);
        assert_eq!(svg.matches("class=\"tile\"").count(), t.placements.len());
        assert!(t.placements.len() > 4);
    }

    #[test]
    fn outline_fallback_and_cap() {
        let o = build_gamma0_outline(40, 40, 10, 1).unwrap();
        let svg = render_rect(&[], &RectRegion::Outline(o.clone()), None, &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("class=\"cell\"").count(), 0);
        assert_eq!(svg.matches("class=\"outline\"").count(), 1);
        let region = Region::rectangle(0, 0, 30, 30);
        let small = RenderOptions { max_elements: 100, ..Default::default() };
        let svg = render_rect(&[], &RectRegion::Cells(region.clone()), None, &small).unwrap();
        assert_eq!(svg.matches("class=\"cell\"").count(), 0);
        let cr = ColoredRegion::uniform(region, 0);
        assert!(matches!(render_colored_region(&cr, None, &small), Err(RenderError::TooLarge { .. })));
    }
}
