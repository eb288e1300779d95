//! CSV and SVG renderings of a grid layout.

use std::fmt::Write as _;
use std::path::Path;

use super::FarmGrid;
use crate::bits::BitString;
use crate::error::{Error, Result};

/// `cell_index,x_m,y_m,occupied` for every cell.
pub fn layout_csv(layout: &BitString, grid: &FarmGrid) -> String {
    let mut out = String::from("cell_index,x_m,y_m,occupied\n");
    for cell in 0..grid.cells() {
        let (x, y) = grid.cell_center(cell);
        let _ = writeln!(out, "{cell},{x},{y},{}", u8::from(layout.get(cell)));
    }
    out
}

const SCALE: f64 = 0.15;
const MARGIN: f64 = 10.0;

/// One `<rect class="cell">` per cell; occupied cells also get a
/// `<circle class="turbine">`. North is up.
pub fn layout_svg(layout: &BitString, grid: &FarmGrid, title: &str) -> String {
    let w = grid.width() * SCALE;
    let h = grid.height() * SCALE;
    let cw = grid.cell_width * SCALE;
    let ch = grid.cell_height * SCALE;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN + 14.0,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN + 14.0
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(
        s,
        r#"  <text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
        MARGIN + 4.0,
        escape(title)
    );
    let top = MARGIN + 14.0;
    for cell in 0..grid.cells() {
        let col = cell % grid.columns;
        let row = cell / grid.columns;
        let x = MARGIN + col as f64 * cw;
        // row 0 is the south edge, drawn at the bottom
        let y = top + (grid.rows - 1 - row) as f64 * ch;
        let occupied = layout.get(cell);
        let _ = writeln!(
            s,
            r##"  <rect class="cell" data-cell="{cell}" x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="{}" stroke="#999" stroke-width="0.5"/>"##,
            if occupied { "#dbe9f6" } else { "#ffffff" }
        );
        if occupied {
            let _ = writeln!(
                s,
                r##"  <circle class="turbine" data-cell="{cell}" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="#1f4e79"/>"##,
                x + cw / 2.0,
                y + ch / 2.0,
                cw.min(ch) * 0.3
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn write_layout_csv(path: &Path, layout: &BitString, grid: &FarmGrid) -> Result<()> {
    std::fs::write(path, layout_csv(layout, grid)).map_err(|e| Error::io(path, e))
}

pub fn write_layout_svg(path: &Path, layout: &BitString, grid: &FarmGrid, title: &str) -> Result<()> {
    std::fs::write(path, layout_svg(layout, grid, title)).map_err(|e| Error::io(path, e))
}
