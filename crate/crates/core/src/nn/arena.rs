//! Flat parameter storage with named, shaped views.

/// Handle to one tensor inside a [`ParamArena`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorId(pub(crate) usize);

#[derive(Debug, Clone)]
pub struct ParamEntry {
    pub name: String,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
}

impl ParamEntry {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }
}

/// All parameters of one model as a single contiguous `f64` buffer.
#[derive(Debug, Clone, Default)]
pub struct ParamArena {
    data: Vec<f64>,
    entries: Vec<ParamEntry>,
}

impl ParamArena {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocate a zero-initialized `rows x cols` tensor.
    pub fn alloc(&mut self, name: &str, rows: usize, cols: usize) -> TensorId {
        let offset = self.data.len();
        self.data.resize(offset + rows * cols, 0.0);
        self.entries.push(ParamEntry {
            name: name.to_string(),
            offset,
            rows,
            cols,
        });
        TensorId(self.entries.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn entries(&self) -> &[ParamEntry] {
        &self.entries
    }

    pub fn entry(&self, id: TensorId) -> &ParamEntry {
        &self.entries[id.0]
    }

    pub fn by_name(&self, name: &str) -> Option<TensorId> {
        self.entries.iter().position(|e| e.name == name).map(TensorId)
    }

    pub fn slice(&self, id: TensorId) -> &[f64] {
        let e = &self.entries[id.0];
        &self.data[e.offset..e.offset + e.len()]
    }

    pub fn slice_mut(&mut self, id: TensorId) -> &mut [f64] {
        let e = self.entries[id.0].clone();
        &mut self.data[e.offset..e.offset + e.len()]
    }

    /// Row `r` of a matrix-shaped tensor.
    pub fn row(&self, id: TensorId, r: usize) -> &[f64] {
        let e = &self.entries[id.0];
        debug_assert!(r < e.rows);
        let start = e.offset + r * e.cols;
        &self.data[start..start + e.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Gradient (or moment) buffer aligned with this arena.
    pub fn zeros_like(&self) -> Gradients {
        Gradients {
            data: vec![0.0; self.data.len()],
            entries: self.entries.clone(),
        }
    }
}

/// A buffer of per-parameter values laid out exactly like a [`ParamArena`].
#[derive(Debug, Clone)]
pub struct Gradients {
    data: Vec<f64>,
    entries: Vec<ParamEntry>,
}

impl Gradients {
    pub fn slice(&self, id: TensorId) -> &[f64] {
        let e = &self.entries[id.0];
        &self.data[e.offset..e.offset + e.len()]
    }

    pub fn slice_mut(&mut self, id: TensorId) -> &mut [f64] {
        let e = self.entries[id.0].clone();
        &mut self.data[e.offset..e.offset + e.len()]
    }

    pub fn row_mut(&mut self, id: TensorId, r: usize) -> &mut [f64] {
        let e = self.entries[id.0].clone();
        debug_assert!(r < e.rows);
        let start = e.offset + r * e.cols;
        &mut self.data[start..start + e.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn fill(&mut self, value: f64) {
        self.data.iter_mut().for_each(|g| *g = value);
    }

    /// Accumulate another aligned buffer, in place.
    pub fn add_assign(&mut self, other: &Gradients) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|g| *g *= factor);
    }
}
