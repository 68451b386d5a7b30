//! Uniform grids, dense 2D arrays and the trapezoid/interpolation helpers
//! shared by every transform.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, TomoError};

/// Uniform grid `min, min + h, ..., max` with `n_points` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid1D {
    min: f64,
    max: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n_points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(TomoError::InvalidGrid("bounds must be finite"));
        }
        if max <= min {
            return Err(TomoError::InvalidGrid("max must exceed min"));
        }
        if n_points < 2 {
            return Err(TomoError::InvalidGrid("at least two points required"));
        }
        Ok(Self { min, max, n_points })
    }

    /// `n` nodes spaced `period / n` apart starting at `start`; the endpoint
    /// `start + period` is excluded, so the grid closes on itself.
    pub fn periodic(start: f64, period: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(TomoError::InvalidGrid("at least two points required"));
        }
        Self::new(start, start + period * (n - 1) as f64 / n as f64, n)
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.points().collect()
    }

    /// Trapezoid weights (`h/2` at both ends, `h` inside).
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n_points];
        w[0] *= 0.5;
        w[self.n_points - 1] *= 0.5;
        w
    }

    /// Trapezoid integral of `values` sampled on this grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_points);
        let inner: f64 = values[1..self.n_points - 1].iter().sum();
        self.spacing() * (inner + 0.5 * (values[0] + values[self.n_points - 1]))
    }

    /// Fractional index of `x` (`0.0` at `min`).
    pub fn locate(&self, x: f64) -> f64 {
        (x - self.min) / self.spacing()
    }

    /// Linear interpolation of `values` at `x`; zero outside the grid.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let s = self.locate(x);
        if !(s >= 0.0 && s <= (self.n_points - 1) as f64) {
            return 0.0;
        }
        let i = (s.floor() as usize).min(self.n_points - 2);
        let t = s - i as f64;
        values[i] * (1.0 - t) + values[i + 1] * t
    }

    /// Index of the node within `tol` (in units of the spacing) of `x`.
    pub fn node_of(&self, x: f64, tol: f64) -> Option<usize> {
        let s = self.locate(x);
        let r = s.round();
        if (s - r).abs() <= tol && r >= 0.0 && r <= (self.n_points - 1) as f64 {
            Some(r as usize)
        } else {
            None
        }
    }
}

/// How a uniform angle grid covers the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct AngleCoverage {
    /// Number of distinct columns before the pattern repeats.
    pub distinct: usize,
    /// `PI` when columns span half a turn, `2 PI` for a full turn.
    pub period: f64,
}

impl AngleCoverage {
    /// Classify a grid that covers `[phi0, phi0 + PI)` or `[phi0, phi0 + 2PI)`,
    /// with or without the closing endpoint.
    pub fn of(grid: &Grid1D) -> Option<Self> {
        let n = grid.len();
        let h = grid.spacing();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
        for period in [PI, 2.0 * PI] {
            if close(n as f64 * h, period) {
                return Some(Self { distinct: n, period });
            }
            if close((n - 1) as f64 * h, period) {
                return Some(Self { distinct: n - 1, period });
            }
        }
        None
    }
}

/// `x` reduced to `[0, period)`.
pub(crate) fn wrap(x: f64, period: f64) -> f64 {
    let r = x - period * (x / period).floor();
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Dense row-major 2D array.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Array2<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Array2<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }
}

impl<T> Array2<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(TomoError::ShapeMismatch(alloc::format!(
                "{} values for a {}x{} array",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(TomoError::ShapeMismatch("ragged rows".into()));
        }
        Ok(Self { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> core::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Array2<U> {
        Array2 { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }
}

impl<T> Index<(usize, usize)> for Array2<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Array2<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Bilinear interpolation of `values[(i, j)]` sampled on `rows x cols`
/// grids; zero outside.
pub(crate) fn bilinear(values: &Array2<f64>, rows: &Grid1D, cols: &Grid1D, r: f64, c: f64) -> f64 {
    let s = rows.locate(r);
    let u = cols.locate(c);
    let nr = rows.len() - 1;
    let nc = cols.len() - 1;
    if !(s >= 0.0 && s <= nr as f64 && u >= 0.0 && u <= nc as f64) {
        return 0.0;
    }
    let i = (s as usize).min(nr - 1);
    let j = (u as usize).min(nc - 1);
    let ts = s - i as f64;
    let tu = u - j as f64;
    let v00 = values[(i, j)];
    let v01 = values[(i, j + 1)];
    let v10 = values[(i + 1, j)];
    let v11 = values[(i + 1, j + 1)];
    (1.0 - ts) * ((1.0 - tu) * v00 + tu * v01) + ts * ((1.0 - tu) * v10 + tu * v11)
}

/// Double trapezoid integral over a `rows x cols` sampled field.
pub(crate) fn integrate_2d(values: &Array2<f64>, rows: &Grid1D, cols: &Grid1D) -> f64 {
    let wr = rows.trapezoid_weights();
    let wc = cols.trapezoid_weights();
    let mut total = 0.0;
    for (i, wi) in wr.iter().enumerate() {
        let row = values.row(i);
        let s: f64 = row.iter().zip(&wc).map(|(v, w)| v * w).sum();
        total += wi * s;
    }
    total
}
