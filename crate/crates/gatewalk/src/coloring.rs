//! Vertex colorings into {−1, +1}, gate detection, sampling a coloring from
//! a circle-valued candidate map, and symmetry/periodicity diagnostics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Face, GridPoint, Simplex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ColoringError {
    #[error("expected a {expected}x{expected} matrix, got {rows} rows / {cols} columns")]
    ShapeMismatch { expected: usize, rows: usize, cols: usize },
    #[error("entry at (i={i}, j={j}) is {value}, expected +1 or -1")]
    BadValue { i: i32, j: i32, value: i8 },
    #[error("candidate map is undefined at sample vertex (i={i}, j={j})")]
    EvaluationFailure { i: i32, j: i32 },
    #[error("resolution {0} needs more than 64 vertices; bit colorings support (k+1)^2 <= 64")]
    TooManyVerticesForBits(u32),
}

/// A total map 𝒱(k) → {−1, +1}, stored row-major by j.
#[derive(Clone, PartialEq, Eq)]
pub struct Coloring {
    k: u32,
    values: Vec<i8>,
}

impl Coloring {
    /// Validate a (k+1)×(k+1) matrix; `rows[j][i]` colors vertex (i, j).
    pub fn from_rows(k: u32, rows: Vec<Vec<i8>>) -> Result<Self, ColoringError> {
        let n = k as usize + 1;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(ColoringError::ShapeMismatch {
                expected: n,
                rows: rows.len(),
                cols: rows.first().map_or(0, |r| r.len()),
            });
        }
        let mut values = Vec::with_capacity(n * n);
        for (j, row) in rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v != 1 && v != -1 {
                    return Err(ColoringError::BadValue {
                        i: i as i32,
                        j: j as i32,
                        value: v,
                    });
                }
                values.push(v);
            }
        }
        Ok(Coloring { k, values })
    }

    /// Build from a function over lattice coordinates; the function must
    /// return ±1.
    pub fn from_fn(k: u32, mut f: impl FnMut(i32, i32) -> i8) -> Result<Self, ColoringError> {
        let n = k as usize + 1;
        let rows = (0..n)
            .map(|j| (0..n).map(|i| f(i as i32, j as i32)).collect())
            .collect();
        Coloring::from_rows(k, rows)
    }

    pub fn constant(k: u32, value: i8) -> Result<Self, ColoringError> {
        Coloring::from_fn(k, |_, _| value)
    }

    /// Decode vertex colors from the low (k+1)² bits of `bits`
    /// (set bit = +1, clear = −1), vertex (i, j) at bit j·(k+1)+i.
    /// Supports exhaustive enumeration of small grids.
    pub fn from_bits(k: u32, bits: u64) -> Result<Self, ColoringError> {
        let n = k as usize + 1;
        if n * n > 64 {
            return Err(ColoringError::TooManyVerticesForBits(k));
        }
        let values = (0..n * n)
            .map(|t| if bits >> t & 1 == 1 { 1 } else { -1 })
            .collect();
        Ok(Coloring { k, values })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Color of a vertex. Panics if the point is outside the square.
    pub fn value(&self, p: GridPoint) -> i8 {
        let n = self.k as i32 + 1;
        assert!(
            0 <= p.i && p.i < n && 0 <= p.j && p.j < n,
            "vertex {p:?} outside square of resolution {}",
            self.k
        );
        self.values[(p.j * n + p.i) as usize]
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        let n = self.k as usize + 1;
        (0..n).map(|j| self.values[j * n..(j + 1) * n].to_vec()).collect()
    }

    /// A face is a gate iff its endpoints carry different colors.
    pub fn is_gate(&self, f: Face) -> bool {
        self.value(f.a()) != self.value(f.b())
    }

    /// The gates of a simplex; always 0 or 2 of its 3 faces.
    pub fn simplex_gates(&self, s: Simplex) -> Vec<Face> {
        s.faces().into_iter().filter(|f| self.is_gate(*f)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.k as i32;
        (0..=k).all(|i| {
            (0..=k).all(|j| self.value(GridPoint::new(i, j)) == self.value(GridPoint::new(j, i)))
        })
    }

    pub fn is_doubly_periodic(&self) -> bool {
        let k = self.k as i32;
        (0..=k).all(|t| {
            self.value(GridPoint::new(0, t)) == self.value(GridPoint::new(k, t))
                && self.value(GridPoint::new(t, 0)) == self.value(GridPoint::new(t, k))
        })
    }

    pub fn diagnostics(&self) -> ColoringDiagnostics {
        let k = self.k as i32;
        let side = |f: &dyn Fn(i32) -> (GridPoint, GridPoint)| -> Vec<i32> {
            (0..k)
                .filter(|&t| {
                    let (p, q) = f(t);
                    self.value(p) != self.value(q)
                })
                .collect()
        };
        ColoringDiagnostics {
            symmetric: self.is_symmetric(),
            doubly_periodic: self.is_doubly_periodic(),
            bottom: side(&|i| (GridPoint::new(i, 0), GridPoint::new(i + 1, 0))),
            right: side(&|j| (GridPoint::new(k, j), GridPoint::new(k, j + 1))),
            top: side(&|i| (GridPoint::new(i, k), GridPoint::new(i + 1, k))),
            left: side(&|j| (GridPoint::new(0, j), GridPoint::new(0, j + 1))),
        }
    }
}

impl std::fmt::Debug for Coloring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Coloring(k={})", self.k)?;
        // print top row first so the picture matches the plane
        for row in self.rows().iter().rev() {
            for v in row {
                write!(f, "{}", if *v == 1 { '+' } else { '-' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Boundary gate positions per side, each listed by the offset of the gate's
/// lower/lefter endpoint along its side, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringDiagnostics {
    pub symmetric: bool,
    pub doubly_periodic: bool,
    pub bottom: Vec<i32>,
    pub right: Vec<i32>,
    pub top: Vec<i32>,
    pub left: Vec<i32>,
}

/// Sample the coloring of a candidate map: vertex (i, j) evaluates the
/// candidate at ((i mod k)/k, (j mod k)/k) and is colored −1 iff the output
/// angle lies in [1/4, 3/4] — the exact sign set of cos(2πθ) ≤ 0, with both
/// endpoints included. The mod-k reduction identifies 0 with 1 on each axis,
/// so sampled colorings are doubly periodic by construction.
pub fn sample_coloring(
    k: u32,
    mut eval: impl FnMut(f64, f64) -> Option<f64>,
) -> Result<Coloring, ColoringError> {
    assert!(k > 0, "sampling needs a positive resolution");
    let n = k as i32 + 1;
    let mut rows = Vec::with_capacity(n as usize);
    for j in 0..n {
        let mut row = Vec::with_capacity(n as usize);
        for i in 0..n {
            let x = (i % k as i32) as f64 / k as f64;
            let y = (j % k as i32) as f64 / k as f64;
            let theta = eval(x, y).ok_or(ColoringError::EvaluationFailure { i, j })?;
            let theta = theta.rem_euclid(1.0);
            row.push(if (0.25..=0.75).contains(&theta) { -1 } else { 1 });
        }
        rows.push(row);
    }
    Coloring::from_rows(k, rows)
}

/// Wire format: `{"k", "values"}` with `values[j][i]` coloring vertex (i, j).
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ColoringDoc {
    pub k: u32,
    pub values: Vec<Vec<i8>>,
}

impl From<&Coloring> for ColoringDoc {
    fn from(c: &Coloring) -> Self {
        ColoringDoc { k: c.k(), values: c.rows() }
    }
}

impl TryFrom<ColoringDoc> for Coloring {
    type Error = ColoringError;

    fn try_from(doc: ColoringDoc) -> Result<Self, Self::Error> {
        Coloring::from_rows(doc.k, doc.values)
    }
}
