use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense real matrix stored column-major, so each column (sample) is a
/// contiguous slice.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "MatrixRepr"))]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        Matrix::from_col_major(r.rows, r.cols, r.data)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} values do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a `d × m` matrix from `m` sample vectors of length `d`.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let mut data = Vec::with_capacity(rows * columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(Error::Shape(format!(
                    "column {j} has length {}, expected {rows}",
                    c.len()
                )));
            }
            data.extend_from_slice(c);
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            data,
        })
    }

    /// Builds a matrix from row-major nested rows (convenient for literals).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {ncols}",
                    r.len()
                )));
            }
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.cols).map(move |j| self.col(j))
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.col(j));
        }
        Matrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Mean of the columns.
    pub fn column_mean(&self) -> Vec<f64> {
        let mut mu = vec![0.0; self.rows];
        for c in self.columns() {
            for (acc, &v) in mu.iter_mut().zip(c) {
                *acc += v;
            }
        }
        if self.cols > 0 {
            let inv = 1.0 / self.cols as f64;
            mu.iter_mut().for_each(|v| *v *= inv);
        }
        mu
    }

    /// Returns the first non-finite entry as `Error::NonFinite`.
    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(p) => Err(Error::NonFinite {
                row: p % self.rows.max(1),
                col: p / self.rows.max(1),
            }),
            None => Ok(()),
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }
}

/// A `d × m` sample matrix with one class id per column.
///
/// Class ids are dense: every id in `0..classes` labels at least one column.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    data: Matrix,
    labels: Vec<usize>,
    classes: usize,
}

impl LabeledMatrix {
    /// Validates shape, finiteness and label coverage. The class count is
    /// `max(label) + 1`.
    pub fn new(data: Matrix, labels: Vec<usize>) -> Result<Self> {
        let classes = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self::with_classes(data, labels, classes)
    }

    pub fn with_classes(data: Matrix, labels: Vec<usize>, classes: usize) -> Result<Self> {
        if labels.len() != data.cols() {
            return Err(Error::LabelCountMismatch {
                expected: data.cols(),
                found: labels.len(),
            });
        }
        if data.cols() < 2 {
            return Err(Error::Shape(format!("need at least 2 samples, got {}", data.cols())));
        }
        if data.rows() < 1 {
            return Err(Error::Shape("need at least 1 feature".into()));
        }
        if classes < 1 {
            return Err(Error::SingleClass);
        }
        data.check_finite()?;
        let mut counts = vec![0usize; classes];
        for (sample, &label) in labels.iter().enumerate() {
            if label >= classes {
                return Err(Error::LabelOutOfRange { sample, label, classes });
            }
            counts[label] += 1;
        }
        if let Some(class) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass { class });
        }
        Ok(Self { data, labels, classes })
    }

    #[inline]
    pub fn data(&self) -> &Matrix {
        &self.data
    }

    #[inline]
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn classes(&self) -> usize {
        self.classes
    }

    /// Feature dimension `d`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.data.rows()
    }

    /// Sample count `m`.
    #[inline]
    pub fn len(&self) -> usize {
        self.data.cols()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.cols() == 0
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Column indices of each class, in column order.
    pub fn class_indices(&self) -> Vec<Vec<usize>> {
        let mut idx = vec![Vec::new(); self.classes];
        for (j, &l) in self.labels.iter().enumerate() {
            idx[l].push(j);
        }
        idx
    }

    /// Per-class sub-matrices `Xʲ`, in class-id order.
    pub fn class_blocks(&self) -> Vec<Matrix> {
        self.class_indices()
            .iter()
            .map(|idx| self.data.select_columns(idx))
            .collect()
    }

    /// Replaces the feature matrix, keeping labels. The new matrix must have
    /// the same number of columns.
    pub fn with_data(&self, data: Matrix) -> Result<Self> {
        Self::with_classes(data, self.labels.clone(), self.classes)
    }

    pub fn into_parts(self) -> (Matrix, Vec<usize>, usize) {
        (self.data, self.labels, self.classes)
    }
}
