//! Incremental sparse row echelon form over a [`Field`].
//!
//! Vectors are inserted one at a time and fully reduced against the stored pivot
//! rows. Columns carry a static priority; the pivot of a new row is its
//! lowest-priority surviving column. With priorities taken from ascending column
//! counts this is a Markowitz-style ordering: rare columns are pivoted first, so
//! few later rows ever touch them.
//!
//! Every stored row has coefficient 1 at its pivot and only columns of strictly
//! higher priority elsewhere, which is what lets reduction walk columns in
//! priority order and terminate.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::field::Field;

const NO_ROW: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct PivotRow<E> {
    pub pivot: usize,
    /// Sorted by column; includes the pivot with coefficient 1.
    pub entries: Vec<(usize, E)>,
    /// Caller-supplied identifier of the inserted vector.
    pub source: usize,
    /// Pivot coefficient before normalisation.
    lead: E,
    /// Reduction steps `(row, coefficient)` taken while inserting, if tracked.
    steps: Vec<(u32, E)>,
}

#[derive(Clone)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    priority: Vec<u32>,
    pivot_row: Vec<u32>,
    rows: Vec<PivotRow<F::Elem>>,
    track: bool,
}

/// Dense scratch space for one reduction.
pub struct Workspace<E> {
    dense: Vec<E>,
    queued: Vec<bool>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
}

impl<E: Clone> Workspace<E> {
    pub fn new(dim: usize, zero: E) -> Self {
        Self {
            dense: vec![zero; dim],
            queued: vec![false; dim],
            heap: BinaryHeap::new(),
        }
    }
}

/// Outcome of reducing a vector against the echelon.
pub struct Reduction<E> {
    /// Surviving entries, in increasing priority order.
    pub residue: Vec<(usize, E)>,
    /// `(row, coefficient)` pairs such that `input = residue + sum coefficient * row`.
    pub steps: Vec<(u32, E)>,
}

impl<F: Field> Echelon<F> {
    /// Empty echelon with the identity column priority.
    pub fn new(field: F, dim: usize, track: bool) -> Self {
        Self::with_priority(field, (0..dim as u32).collect(), track)
    }

    /// `priority[c]` is the pivot rank of column `c`; lower pivots first. Must be a permutation.
    pub fn with_priority(field: F, priority: Vec<u32>, track: bool) -> Self {
        let dim = priority.len();
        Self {
            field,
            dim,
            priority,
            pivot_row: vec![NO_ROW; dim],
            rows: Vec::new(),
            track,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[PivotRow<F::Elem>] {
        &self.rows
    }

    pub fn priority(&self, col: usize) -> u32 {
        self.priority[col]
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NO_ROW
    }

    pub fn workspace(&self) -> Workspace<F::Elem> {
        Workspace::new(self.dim, self.field.zero())
    }

    /// Fully reduces `vector` against the stored rows.
    pub fn reduce(
        &self,
        ws: &mut Workspace<F::Elem>,
        vector: &[(usize, F::Elem)],
        record: bool,
    ) -> Reduction<F::Elem> {
        let f = &self.field;
        for (c, e) in vector {
            if f.is_zero(e) {
                continue;
            }
            ws.dense[*c] = f.add(&ws.dense[*c], e);
            if !ws.queued[*c] {
                ws.queued[*c] = true;
                ws.heap.push(Reverse((self.priority[*c], *c as u32)));
            }
        }
        let mut residue = Vec::new();
        let mut steps = Vec::new();
        while let Some(Reverse((_, c))) = ws.heap.pop() {
            let c = c as usize;
            ws.queued[c] = false;
            let coef = std::mem::replace(&mut ws.dense[c], f.zero());
            if f.is_zero(&coef) {
                continue;
            }
            let r = self.pivot_row[c];
            if r == NO_ROW {
                residue.push((c, coef));
                continue;
            }
            for (cc, e) in &self.rows[r as usize].entries {
                if *cc == c {
                    continue;
                }
                f.sub_mul(&mut ws.dense[*cc], &coef, e);
                if !ws.queued[*cc] {
                    ws.queued[*cc] = true;
                    ws.heap.push(Reverse((self.priority[*cc], *cc as u32)));
                }
            }
            if record {
                steps.push((r, coef));
            }
        }
        Reduction { residue, steps }
    }

    /// Inserts a vector; returns the new pivot column if it was independent.
    pub fn insert(
        &mut self,
        ws: &mut Workspace<F::Elem>,
        source: usize,
        vector: &[(usize, F::Elem)],
    ) -> Option<usize> {
        let Reduction { residue, steps } = self.reduce(ws, vector, self.track);
        let (pivot, lead) = residue.first().cloned()?;
        let inv = self.field.inv(&lead);
        let mut entries: Vec<(usize, F::Elem)> = residue
            .into_iter()
            .map(|(c, e)| {
                let v = if c == pivot {
                    self.field.one()
                } else {
                    self.field.mul(&e, &inv)
                };
                (c, v)
            })
            .collect();
        entries.sort_unstable_by_key(|(c, _)| *c);
        self.pivot_row[pivot] = self.rows.len() as u32;
        self.rows.push(PivotRow {
            pivot,
            entries,
            source,
            lead,
            steps: if self.track { steps } else { Vec::new() },
        });
        Some(pivot)
    }

    /// Expresses a combination of stored rows in terms of the inserted source vectors.
    ///
    /// Requires tracking. The returned pairs `(source, coefficient)` satisfy
    /// `sum coefficient * source_vector = sum step_coefficient * row`.
    pub fn expand_steps(&self, steps: &[(u32, F::Elem)]) -> Vec<(usize, F::Elem)> {
        assert!(self.track, "certificate expansion needs a tracked echelon");
        let f = &self.field;
        let mut coef: Vec<F::Elem> = vec![f.zero(); self.rows.len()];
        for (r, c) in steps {
            coef[*r as usize] = f.add(&coef[*r as usize], c);
        }
        let mut out = Vec::new();
        for k in (0..self.rows.len()).rev() {
            if f.is_zero(&coef[k]) {
                continue;
            }
            let row = &self.rows[k];
            let u = f.mul(&coef[k], &f.inv(&row.lead));
            for (j, t) in &row.steps {
                f.sub_mul(&mut coef[*j as usize], &u, t);
            }
            out.push((row.source, u));
        }
        out.sort_unstable_by_key(|(s, _)| *s);
        out
    }
}

/// Column priorities ordered by ascending occurrence count, ties by column index.
pub fn markowitz_priority<'a, E: 'a>(
    dim: usize,
    vectors: impl Iterator<Item = &'a [(usize, E)]>,
) -> Vec<u32> {
    let mut count = vec![0u32; dim];
    for v in vectors {
        for (c, _) in v {
            count[*c] += 1;
        }
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&c| (count[c], c));
    let mut priority = vec![0u32; dim];
    for (rank, c) in order.into_iter().enumerate() {
        priority[c] = rank as u32;
    }
    priority
}
