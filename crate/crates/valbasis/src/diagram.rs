//! Lattice diagrams of two-branch value semirings.

use std::fmt::Write as _;

use serde_json::{json, Value as Json};
use valbasis_core::{SemiringPresentation, Value, ValueVector};

use crate::error::CliError;

/// Members of `Γ` in the box `[0, a] × [0, b]`, with the columns `(x, ∞)` and
/// rows `(∞, y)` of `Γ` that meet it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub corner: (i64, i64),
    /// `grid[y][x]`.
    pub grid: Vec<Vec<bool>>,
    pub columns_to_infinity: Vec<i64>,
    pub rows_to_infinity: Vec<i64>,
}

impl Diagram {
    pub fn new(semiring: &SemiringPresentation, corner: (i64, i64)) -> Result<Self, CliError> {
        if semiring.branches() != 2 {
            return Err(valbasis_core::Error::UnsupportedRank(semiring.branches()).into());
        }
        let (a, b) = corner;
        if a < 0 || b < 0 {
            return Err(CliError::Semantic(format!("box corner ({},{}) is negative", a, b)));
        }
        let member = |x: Value, y: Value| semiring.member(&ValueVector::new(vec![x, y])).is_member();
        let grid = (0..=b)
            .map(|y| (0..=a).map(|x| member(Value::Finite(x), Value::Finite(y))).collect())
            .collect();
        let columns_to_infinity = (0..=a).filter(|&x| member(Value::Finite(x), Value::Infinite)).collect();
        let rows_to_infinity = (0..=b).filter(|&y| member(Value::Infinite, Value::Finite(y))).collect();
        Ok(Self {
            corner,
            grid,
            columns_to_infinity,
            rows_to_infinity,
        })
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x <= self.corner.0 && y <= self.corner.1 && self.grid[y as usize][x as usize]
    }

    pub fn members(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for (y, row) in self.grid.iter().enumerate() {
            for (x, &m) in row.iter().enumerate() {
                if m {
                    out.push((x as i64, y as i64));
                }
            }
        }
        out
    }

    /// `*` marks members, `.` the rest, `^` columns and `>` rows reaching
    /// infinity.
    pub fn text(&self) -> String {
        let (a, b) = self.corner;
        let label = b.to_string().len().max(1);
        let pad = " ".repeat(label + 2);
        let mut out = String::new();
        let mut top = pad.clone();
        for x in 0..=a {
            top.push(if self.columns_to_infinity.contains(&x) { '^' } else { ' ' });
            top.push(' ');
        }
        writeln!(out, "{}", top.trim_end()).unwrap();
        for y in (0..=b).rev() {
            let mut line = format!("{:>width$}  ", y, width = label);
            for x in 0..=a {
                line.push(if self.grid[y as usize][x as usize] { '*' } else { '.' });
                line.push(' ');
            }
            if self.rows_to_infinity.contains(&y) {
                line.push('>');
            }
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        let mut axis = pad;
        let mut x = 0;
        while x <= a {
            let s = x.to_string();
            axis.push_str(&s);
            let used = s.len() as i64;
            let step = 5;
            let gap = (2 * step - used).max(1) as usize;
            axis.push_str(&" ".repeat(gap));
            x += step;
        }
        writeln!(out, "{}", axis.trim_end()).unwrap();
        out
    }

    pub fn json(&self) -> Json {
        let members: Vec<Json> = self.members().into_iter().map(|(x, y)| json!([x, y])).collect();
        json!({
            "command": "diagram",
            "box": [self.corner.0, self.corner.1],
            "members": members,
            "columns_to_infinity": self.columns_to_infinity,
            "rows_to_infinity": self.rows_to_infinity,
        })
    }

    pub fn svg(&self) -> String {
        let (a, b) = self.corner;
        let cell = 16;
        let margin = 40;
        let width = margin * 2 + cell * (a + 1);
        let height = margin * 2 + cell * (b + 1);
        let px = |x: i64| margin + cell * x + cell / 2;
        let py = |y: i64| margin + cell * (b - y) + cell / 2;
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = width,
            h = height
        )
        .unwrap();
        writeln!(
            out,
            r##"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="3" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="#444"/></marker></defs>"##
        )
        .unwrap();
        writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        for &x in &self.columns_to_infinity {
            writeln!(
                out,
                r##"<line x1="{x}" y1="{y1}" x2="{x}" y2="{y2}" stroke="#444" marker-end="url(#head)"/>"##,
                x = px(x),
                y1 = py(b),
                y2 = margin / 2
            )
            .unwrap();
        }
        for &y in &self.rows_to_infinity {
            writeln!(
                out,
                r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="#444" marker-end="url(#head)"/>"##,
                x1 = px(a),
                x2 = width - margin / 2,
                y = py(y)
            )
            .unwrap();
        }
        for y in 0..=b {
            for x in 0..=a {
                let (r, fill) = if self.grid[y as usize][x as usize] { (5, "black") } else { (1, "#bbb") };
                writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
                    px(x),
                    py(y),
                    r,
                    fill
                )
                .unwrap();
            }
        }
        for x in (0..=a).filter(|x| x % 5 == 0) {
            writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
                px(x),
                height - margin / 2,
                x
            )
            .unwrap();
        }
        for y in (0..=b).filter(|y| y % 5 == 0) {
            writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#,
                margin / 2,
                py(y) + 4,
                y
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}
