//! Level sets of a sweep field by marching squares.

use std::collections::HashMap;

use serde::Serialize;

use super::config::Variable;
use super::run::SweepRow;
use crate::error::{Error, Result};

pub type Polyline = Vec<[f64; 2]>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contour {
    /// Slow (first) grid axis; the `x` of every vertex.
    pub x_axis: Variable,
    /// Fast (second) grid axis; the `y` of every vertex.
    pub y_axis: Variable,
    pub field: String,
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

/// A regular grid recovered from row-major sweep rows.
struct Grid {
    x_axis: Variable,
    y_axis: Variable,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// `values[i * ys.len() + j]` at `(xs[i], ys[j])`.
    values: Vec<f64>,
}

fn distinct_in_order(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if !out.iter().any(|&u| u.to_bits() == v.to_bits()) {
            out.push(v);
        }
    }
    out
}

fn recover_grid(rows: &[SweepRow], field: &str) -> Result<Grid> {
    if rows.is_empty() {
        return Err(Error::Domain("no rows".into()));
    }
    if rows[0].field(field).is_none() {
        return Err(Error::Domain(format!("unknown field `{field}`")));
    }
    let varying: Vec<Variable> = Variable::ALL
        .into_iter()
        .filter(|&v| distinct_in_order(rows.iter().map(|r| r.coordinate(v))).len() > 1)
        .collect();
    if varying.len() != 2 {
        return Err(Error::Domain(format!(
            "contours need a 2-D sweep; {} coordinate(s) vary",
            varying.len()
        )));
    }
    // Row-major: the slow axis is the one that is constant across the first two rows.
    let (x_axis, y_axis) = if rows[0].coordinate(varying[0]) == rows[1].coordinate(varying[0]) {
        (varying[0], varying[1])
    } else {
        (varying[1], varying[0])
    };
    let xs = distinct_in_order(rows.iter().map(|r| r.coordinate(x_axis)));
    let ys = distinct_in_order(rows.iter().map(|r| r.coordinate(y_axis)));
    if xs.len() * ys.len() != rows.len() {
        return Err(Error::Domain("rows do not form a complete row-major grid".into()));
    }
    for (k, r) in rows.iter().enumerate() {
        let (i, j) = (k / ys.len(), k % ys.len());
        if r.coordinate(x_axis) != xs[i] || r.coordinate(y_axis) != ys[j] {
            return Err(Error::Domain(format!("row {k} is out of row-major order")));
        }
    }
    let values = rows.iter().map(|r| r.field(field).unwrap_or(f64::NAN)).collect();
    Ok(Grid {
        x_axis,
        y_axis,
        xs,
        ys,
        values,
    })
}

type Key = (u64, u64);

fn key(p: [f64; 2]) -> Key {
    (p[0].to_bits(), p[1].to_bits())
}

/// Trace `field = level` through the grid. A vertex counts as inside when
/// its value is strictly above `level`; cells with a NaN corner are skipped.
/// Crossings are placed by linear interpolation along cell edges, and
/// segments sharing endpoints are joined into polylines.
pub fn contour_boundary(rows: &[SweepRow], field: &str, level: f64) -> Result<Contour> {
    let grid = recover_grid(rows, field)?;
    let (nx, ny) = (grid.xs.len(), grid.ys.len());
    let at = |i: usize, j: usize| grid.values[i * ny + j];
    let point = |i: usize, j: usize| [grid.xs[i], grid.ys[j]];

    // Interpolated crossing on the edge between two grid vertices, always
    // computed from the lexicographically smaller vertex so neighbouring
    // cells produce bit-identical points.
    let crossing = |a: (usize, usize), b: (usize, usize)| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let (fa, fb) = (at(a.0, a.1), at(b.0, b.1));
        let t = (level - fa) / (fb - fa);
        let (pa, pb) = (point(a.0, a.1), point(b.0, b.1));
        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
    };

    let mut segments: Vec<[[f64; 2]; 2]> = Vec::new();
    for i in 0..nx.saturating_sub(1) {
        for j in 0..ny.saturating_sub(1) {
            // Corners counter-clockwise from (i, j).
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let vals = corners.map(|(a, b)| at(a, b));
            if vals.iter().any(|v| v.is_nan()) {
                continue;
            }
            let inside = vals.map(|v| v > level);
            let mut case = 0;
            for (bit, &inn) in inside.iter().enumerate() {
                if inn {
                    case |= 1 << bit;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            let edge = |e: usize| crossing(corners[e], corners[(e + 1) % 4]);
            // Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c2-c3), 3 left (c3-c0).
            let crossed: Vec<usize> = (0..4).filter(|&e| inside[e] != inside[(e + 1) % 4]).collect();
            if crossed.len() == 2 {
                segments.push([edge(crossed[0]), edge(crossed[1])]);
            } else {
                // Saddle: decide the connectivity with the cell-centre average.
                let centre_inside = vals.iter().sum::<f64>() / 4.0 > level;
                let pairs = if centre_inside == inside[0] {
                    [(0, 1), (2, 3)]
                } else {
                    [(3, 0), (1, 2)]
                };
                for (a, b) in pairs {
                    segments.push([edge(a), edge(b)]);
                }
            }
        }
    }

    Ok(Contour {
        x_axis: grid.x_axis,
        y_axis: grid.y_axis,
        field: field.to_string(),
        level,
        polylines: join_segments(segments),
    })
}

/// Chain segments into maximal polylines, in order of first appearance.
fn join_segments(segments: Vec<[[f64; 2]; 2]>) -> Vec<Polyline> {
    let mut by_end: HashMap<Key, Vec<usize>> = HashMap::new();
    for (idx, s) in segments.iter().enumerate() {
        for p in s {
            by_end.entry(key(*p)).or_default().push(idx);
        }
    }
    let mut used = vec![false; segments.len()];
    let next_from =
        |p: [f64; 2], used: &[bool]| -> Option<usize> { by_end.get(&key(p))?.iter().copied().find(|&i| !used[i]) };
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut line: std::collections::VecDeque<[f64; 2]> = segments[start].iter().copied().collect();
        // Extend forward, then backward.
        while let Some(i) = next_from(*line.back().unwrap(), &used) {
            used[i] = true;
            let s = segments[i];
            let tail = *line.back().unwrap();
            line.push_back(if key(s[0]) == key(tail) { s[1] } else { s[0] });
        }
        while let Some(i) = next_from(*line.front().unwrap(), &used) {
            used[i] = true;
            let s = segments[i];
            let head = *line.front().unwrap();
            line.push_front(if key(s[0]) == key(head) { s[1] } else { s[0] });
        }
        // Degenerate crossings at a vertex give repeated points; drop them.
        let mut poly: Polyline = Vec::with_capacity(line.len());
        for p in line {
            if poly.last().map(|q: &[f64; 2]| key(*q)) != Some(key(p)) {
                poly.push(p);
            }
        }
        out.push(poly);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::CorrelationClass;

    fn row(x: f64, y: f64, v: f64) -> SweepRow {
        SweepRow {
            g: 1.0,
            l_over_t: x,
            d_over_t: y,
            gamma_a: 0.0,
            gamma_b: 0.0,
            gamma_c: 0.0,
            phi_ab: 0.0,
            phi_ba: 0.0,
            s_ab: 0.0,
            s_b: 0.0,
            s_cond: v,
            lambda_min: 0.0,
            negativity: v,
            concurrence: 0.0,
            eof: 0.0,
            discord: 0.0,
            psd_ok: true,
            class_label: CorrelationClass::PositiveSeparable,
            degenerate: false,
            error: None,
        }
    }

    fn grid(f: impl Fn(f64, f64) -> f64, n: usize) -> Vec<SweepRow> {
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (i as f64, j as f64);
                rows.push(row(x, y, f(x, y)));
            }
        }
        rows
    }

    #[test]
    fn constant_field_has_no_contour() {
        let c = contour_boundary(&grid(|_, _| 1.0, 4), "negativity", 0.0).unwrap();
        assert!(c.polylines.is_empty());
    }

    #[test]
    fn single_cell_crossing_interpolates() {
        let rows = vec![
            row(0.0, 0.0, 1.0),
            row(0.0, 1.0, 1.0),
            row(1.0, 0.0, -1.0),
            row(1.0, 1.0, -3.0),
        ];
        let c = contour_boundary(&rows, "negativity", 0.0).unwrap();
        assert_eq!(c.polylines.len(), 1);
        let line = &c.polylines[0];
        assert_eq!(line.len(), 2);
        let mut pts = line.clone();
        pts.sort_by(|a, b| a[1].total_cmp(&b[1]));
        assert_eq!(pts[0], [0.5, 0.0]);
        assert_eq!(pts[1], [0.25, 1.0]);
        assert_eq!((c.x_axis, c.y_axis), (Variable::LOverT, Variable::DOverT));
    }

    #[test]
    fn circle_is_one_closed_polyline() {
        let c = contour_boundary(
            &grid(|x, y| 9.0 - (x - 5.0).powi(2) - (y - 5.0).powi(2), 11),
            "s_cond",
            0.0,
        )
        .unwrap();
        assert_eq!(c.polylines.len(), 1);
        let line = &c.polylines[0];
        assert_eq!(line.first(), line.last());
        for p in line {
            let r = ((p[0] - 5.0).powi(2) + (p[1] - 5.0).powi(2)).sqrt();
            assert!((r - 3.0).abs() < 0.2, "{r}");
        }
    }

    #[test]
    fn rejects_unknown_field_and_1d() {
        assert!(contour_boundary(&grid(|_, _| 1.0, 3), "mass", 0.0).is_err());
        let line: Vec<_> = (0..4).map(|i| row(i as f64, 0.0, 1.0)).collect();
        assert!(contour_boundary(&line, "negativity", 0.0).is_err());
    }
}
