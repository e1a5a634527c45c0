//! SVG and ASCII pictures of a layout file.

use std::fmt::Write;

use crate::io::LayoutFile;

const SCALE: i32 = 20;

fn fill(piece: usize) -> String {
    // golden-angle hue walk keeps neighbouring ids apart
    let hue = (piece as f64 * 137.508) % 360.0;
    format!("hsl({hue:.0},65%,60%)")
}

/// One `<rect>` per sub-rectangle, y pointing up, framed by the bounding box.
pub fn svg(layout: &LayoutFile) -> String {
    let w = layout.end_x.unwrap_or(0).max(0);
    let h = layout.end_y.unwrap_or(0).max(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="-1 -1 {} {}">"#,
        w * SCALE + 2,
        h * SCALE + 2,
        w * SCALE + 2,
        h * SCALE + 2
    );
    let _ = writeln!(out, r#"<g transform="translate(0,{}) scale(1,-1)">"#, h * SCALE);
    for p in &layout.placements {
        let color = fill(p.piece);
        for r in &p.rects {
            let _ = writeln!(
                out,
                r#"<rect class="piece-{}" x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="{}"/>"#,
                p.piece,
                r.x * SCALE,
                r.y * SCALE,
                r.w * SCALE,
                r.h * SCALE,
                color,
                color
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<rect class="frame" x="0" y="0" width="{}" height="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        w * SCALE,
        h * SCALE
    );
    out.push_str("</g>\n</svg>\n");
    out
}

/// Character used for a piece id: 1-9, then a-z, then A-Z, then `#`.
pub fn piece_char(id: usize) -> char {
    match id {
        1..=9 => char::from(b'0' + id as u8),
        10..=35 => char::from(b'a' + (id - 10) as u8),
        36..=61 => char::from(b'A' + (id - 36) as u8),
        _ => '#',
    }
}

/// Text grid, top row first; `.` marks empty cells and `*` cells claimed twice.
pub fn ascii(layout: &LayoutFile) -> String {
    let w = layout.end_x.unwrap_or(0).max(0) as usize;
    let h = layout.end_y.unwrap_or(0).max(0) as usize;
    let mut grid = vec![vec!['.'; w]; h];
    for p in &layout.placements {
        let c = piece_char(p.piece);
        for r in &p.rects {
            for y in r.y.max(0)..(r.y + r.h).min(h as i32) {
                for x in r.x.max(0)..(r.x + r.w).min(w as i32) {
                    let cell = &mut grid[y as usize][x as usize];
                    *cell = if *cell == '.' { c } else { '*' };
                }
            }
        }
    }
    grid.iter().rev().map(|row| row.iter().collect::<String>() + "\n").collect()
}
