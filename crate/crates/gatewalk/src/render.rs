//! Deterministic SVG rendering of colorings, chains, and torus cycles.
//!
//! Vertices are filled circles (one color per sign), gates are thin dark
//! strokes, non-gate faces of chain simplexes are thick strokes, chain
//! simplexes are shaded, and torus seam crossings carry markers. The output
//! is a pure function of the input: identical input gives identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::chain::{Chain, Surface};
use crate::coloring::Coloring;
use crate::grid::{CombinatorialSquare, Face, FaceKind, GridPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("nothing to render: need a coloring, a chain, or both")]
    NothingToRender,
    #[error("coloring has k={0} but chain has k={1}")]
    ResolutionMismatch(u32, u32),
    #[error("resolution k={0} is not renderable")]
    BadResolution(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    pub cell_px: u32,
    pub margin_px: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { cell_px: 40, margin_px: 20 }
    }
}

const COLOR_MINUS: &str = "#2563eb";
const COLOR_PLUS: &str = "#dc2626";
const COLOR_GRID: &str = "#d4d4d4";
const COLOR_EDGE: &str = "#111111";
const COLOR_SHADE: &str = "#bfdbfe";
const COLOR_SEAM: &str = "#047857";

/// Render a coloring, a chain, or a chain over its coloring.
pub fn render_svg(
    coloring: Option<&Coloring>,
    chain: Option<&Chain>,
    opts: &RenderOptions,
) -> Result<String, RenderError> {
    let k = match (coloring, chain) {
        (Some(c), Some(ch)) if c.k() != ch.k => {
            return Err(RenderError::ResolutionMismatch(c.k(), ch.k))
        }
        (Some(c), _) => c.k(),
        (None, Some(ch)) => ch.k,
        (None, None) => return Err(RenderError::NothingToRender),
    };
    let square = CombinatorialSquare::new(k).map_err(|_| RenderError::BadResolution(k))?;
    let cell = opts.cell_px.max(4);
    let margin = opts.margin_px;
    let size = 2 * margin + k * cell;
    let px = |p: GridPoint| -> (i64, i64) {
        (
            margin as i64 + cell as i64 * p.i as i64,
            margin as i64 + cell as i64 * (k as i64 - p.j as i64),
        )
    };

    // Which faces count as gates: the coloring decides when present,
    // otherwise the chain's own gate list.
    let gates: BTreeSet<Face> = match (coloring, chain) {
        (Some(c), _) => square.faces().filter(|f| c.is_gate(*f)).collect(),
        (None, Some(ch)) => ch.gates.iter().copied().collect(),
        (None, None) => unreachable!(),
    };
    let chain_faces: BTreeSet<Face> = chain
        .map(|ch| ch.simplexes.iter().flat_map(|s| s.faces()).collect())
        .unwrap_or_default();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(
        svg,
        "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"#ffffff\"/>"
    );

    // shaded chain simplexes first, under everything else
    if let Some(ch) = chain {
        for s in &ch.simplexes {
            let [a, b, c] = s.vertices();
            let (ax, ay) = px(a);
            let (bx, by) = px(b);
            let (cx, cy) = px(c);
            let _ = writeln!(
                svg,
                "<polygon class=\"chain-simplex\" points=\"{ax},{ay} {bx},{by} {cx},{cy}\" fill=\"{COLOR_SHADE}\" fill-opacity=\"0.7\" stroke=\"none\"/>"
            );
        }
    }

    let line = |svg: &mut String, f: Face, class: &str, color: &str, width: u32| {
        let (x1, y1) = px(f.a());
        let (x2, y2) = px(f.b());
        let _ = writeln!(
            svg,
            "<line class=\"{class}\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"{color}\" stroke-width=\"{width}\"/>"
        );
    };

    // the full lattice as hairlines
    for f in square.faces() {
        line(&mut svg, f, "grid", COLOR_GRID, 1);
    }
    // thick walls: chain-simplex faces that are not gates
    for f in &chain_faces {
        if !gates.contains(f) {
            line(&mut svg, *f, "wall", COLOR_EDGE, 5);
        }
    }
    // thin gates on top
    for f in &gates {
        line(&mut svg, *f, "gate", COLOR_EDGE, 2);
    }

    // seam crossings of torus chains: canonical gates hugging a seam
    if let Some(ch) = chain {
        if ch.surface == Surface::Torus {
            for g in &ch.gates {
                let seam = match g.kind() {
                    FaceKind::Vertical => g.a().i == 0,
                    FaceKind::Horizontal => g.a().j == 0,
                    FaceKind::Diagonal => false,
                };
                if seam {
                    let (x1, y1) = px(g.a());
                    let (x2, y2) = px(g.b());
                    let mx = (x1 + x2) as f64 / 2.0;
                    let my = (y1 + y2) as f64 / 2.0;
                    let r = cell / 6;
                    let _ = writeln!(
                        svg,
                        "<circle class=\"seam-mark\" cx=\"{mx}\" cy=\"{my}\" r=\"{r}\" fill=\"{COLOR_SEAM}\"/>"
                    );
                }
            }
        }
    }

    // vertices last, one dot per lattice point
    if let Some(c) = coloring {
        let r = cell / 5;
        for p in square.vertices() {
            let (x, y) = px(p);
            let (class, color) = if c.value(p) == -1 {
                ("vertex-minus", COLOR_MINUS)
            } else {
                ("vertex-plus", COLOR_PLUS)
            };
            let _ = writeln!(
                svg,
                "<circle class=\"{class}\" cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"{color}\"/>"
            );
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
