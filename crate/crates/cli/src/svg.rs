//! SVG drawing of a layout at true metric coordinates (1 m = 10 px).

use std::fmt::Write as _;

use mass_core::plan::{derive_grid, format_length, FloorPlan, Layout};

const PX_PER_M: f64 = 10.0;

fn px(scaled: i64) -> f64 {
    scaled as f64 / mass_core::fixed::SCALE as f64 * PX_PER_M
}

pub fn render_svg(layout: &Layout, fp: &FloorPlan, names: &[String]) -> String {
    let (w, h) = (px(fp.floor_width), px(fp.floor_height));
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(out, r##"  <rect x="0" y="0" width="{w}" height="{h}" fill="#f4f4f4" stroke="#333"/>"##).unwrap();
    let grid = derive_grid(fp).unwrap_or(layout.grid());
    for (f, name) in names.iter().enumerate() {
        let Some(slot) = layout.slot_of(f) else { continue };
        if slot.row >= grid.rows || slot.col >= grid.cols {
            continue;
        }
        let x = px(fp.column_pitch() * slot.col as i64);
        let y = px(fp.row_pitch() * slot.row as i64);
        let (fw, fh) = (px(fp.facility_width), px(fp.facility_height));
        writeln!(
            out,
            r##"  <rect x="{x}" y="{y}" width="{fw}" height="{fh}" fill="#cfe2f3" stroke="#1f4e79"/>"##
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle" font-family="monospace">{}</text>"#,
            x + fw / 2.0,
            y + fh / 2.0,
            escape(name)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"  <desc>floor {}x{} m, facility {}x{} m, aisle {} m</desc>"#,
        format_length(fp.floor_width),
        format_length(fp.floor_height),
        format_length(fp.facility_width),
        format_length(fp.facility_height),
        format_length(fp.aisle)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
