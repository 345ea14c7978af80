use crate::error::{Error, Result};

/// A dense partial binary operation `rows × cols -> value`.
///
/// Used for composition tables (keyed by arrow pairs) and action tables
/// (keyed by arrow and carrier element). Which cells must be defined is a
/// validation concern of the owning structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialTable {
    rows: usize,
    cols: usize,
    cells: Vec<Option<usize>>,
}

impl PartialTable {
    pub fn new(rows: usize, cols: usize) -> Self {
        PartialTable {
            rows,
            cols,
            cells: vec![None; rows * cols],
        }
    }

    /// Builds a table from `(row, col, value)` triples, rejecting
    /// out-of-range keys and keys given twice.
    pub fn from_triples(
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let mut table = PartialTable::new(rows, cols);
        for (i, (r, c, v)) in triples.into_iter().enumerate() {
            if r >= rows {
                return Err(Error::out_of_range(format!("entry {i} row"), r, rows));
            }
            if c >= cols {
                return Err(Error::out_of_range(format!("entry {i} column"), c, cols));
            }
            if table.cells[r * cols + c].replace(v).is_some() {
                return Err(Error::shape(format!("entry {i}: key ({r}, {c}) given twice")));
            }
        }
        Ok(table)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        if row < self.rows && col < self.cols {
            self.cells[row * self.cols + col]
        } else {
            None
        }
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: usize) {
        self.cells[row * self.cols + col] = Some(value);
    }

    pub fn clear(&mut self, row: usize, col: usize) {
        self.cells[row * self.cols + col] = None;
    }

    /// Defined cells in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.cells.iter().enumerate().filter_map(move |(i, v)| {
            v.map(|v| (i / self.cols, i % self.cols, v))
        })
    }

    pub fn defined(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn max_value(&self) -> Option<usize> {
        self.cells.iter().flatten().copied().max()
    }

    /// The table with rows and columns exchanged.
    pub fn transposed(&self) -> PartialTable {
        let mut out = PartialTable::new(self.cols, self.rows);
        for (r, c, v) in self.triples() {
            out.set(c, r, v);
        }
        out
    }

    /// Relabels keys and values; `rows_to`, `cols_to` and `values_to` send
    /// old labels to new ones and must be bijections of the right sizes.
    pub fn relabeled(
        &self,
        rows_to: &[usize],
        cols_to: &[usize],
        values_to: impl Fn(usize) -> usize,
    ) -> PartialTable {
        let mut out = PartialTable::new(self.rows, self.cols);
        for (r, c, v) in self.triples() {
            out.set(rows_to[r], cols_to[c], values_to(v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triples_round_trip() {
        let t = PartialTable::from_triples(2, 3, [(1, 2, 7), (0, 1, 4)]).unwrap();
        assert_eq!(t.triples().collect::<Vec<_>>(), vec![(0, 1, 4), (1, 2, 7)]);
        assert_eq!(t.get(1, 2), Some(7));
        assert_eq!(t.get(1, 1), None);
        assert_eq!(t.get(5, 0), None);
        assert_eq!(t.transposed().get(2, 1), Some(7));
    }

    #[test]
    fn rejects_bad_keys() {
        assert!(PartialTable::from_triples(2, 2, [(2, 0, 0)]).is_err());
        assert!(PartialTable::from_triples(2, 2, [(0, 0, 0), (0, 0, 1)]).is_err());
    }
}
