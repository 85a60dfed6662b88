//! Unbounded external archive: every mutually non-dominated solution seen in a run.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::pareto::{dominates_unchecked, DecisionVector, ObjectiveVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry<T> {
    /// Insertion sequence number, unique within one archive.
    pub id: u64,
    pub x: DecisionVector<T>,
    pub f: ObjectiveVector<T>,
}

/// Archive with no capacity limit. Entries never dominate one another and no two
/// share an objective vector; an entry leaves only when a dominating point arrives.
#[derive(Debug, Clone, Default)]
pub struct UnboundedArchive<T> {
    entries: Vec<ArchiveEntry<T>>,
    next_id: u64,
}

impl<T: Scalar> UnboundedArchive<T> {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            next_id: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in insertion order (ascending `id`).
    pub fn entries(&self) -> &[ArchiveEntry<T>] {
        &self.entries
    }

    pub fn objectives(&self) -> impl Iterator<Item = &ObjectiveVector<T>> + '_ {
        self.entries.iter().map(|e| &e.f)
    }

    pub fn objective_vectors(&self) -> Vec<ObjectiveVector<T>> {
        self.objectives().cloned().collect()
    }

    /// Offers a candidate; returns whether it was accepted.
    ///
    /// A candidate is rejected when an entry dominates or equals it, or when its
    /// objective count differs from the archive's. On acceptance every entry it
    /// dominates is dropped.
    pub fn insert(&mut self, x: DecisionVector<T>, f: ObjectiveVector<T>) -> bool {
        if let Some(first) = self.entries.first() {
            if first.f.len() != f.len() {
                return false;
            }
        }
        let mut dominated_any = false;
        for e in &self.entries {
            if e.f[..] == f[..] || dominates_unchecked(&e.f, &f) {
                return false;
            }
            if !dominated_any && dominates_unchecked(&f, &e.f) {
                dominated_any = true;
            }
        }
        if dominated_any {
            self.entries.retain(|e| !dominates_unchecked(&f, &e.f));
        }
        self.entries.push(ArchiveEntry {
            id: self.next_id,
            x,
            f,
        });
        self.next_id += 1;
        true
    }

    /// Objective-only copy of the current contents.
    pub fn snapshot(&self) -> ArchiveSnapshot<T> {
        let m = self.entries.first().map_or(0, |e| e.f.len());
        let mut values = Vec::with_capacity(m * self.entries.len());
        let mut ids = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            ids.push(e.id);
            values.extend_from_slice(&e.f);
        }
        ArchiveSnapshot { m, ids, values }
    }

    /// Writes the `f1,...,fm,x1,...,xn` CSV dump, one row per entry.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let Some(first) = self.entries.first() else {
            return Ok(());
        };
        let header: Vec<String> = (1..=first.f.len())
            .map(|i| format!("f{i}"))
            .chain((1..=first.x.len()).map(|i| format!("x{i}")))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for e in &self.entries {
            let row: Vec<String> = e.f.iter().chain(e.x.iter()).map(|v| v.to_string()).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Rebuilds an archive from a CSV dump produced by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut archive = Self::new();
        let header = match lines.next() {
            None => return Ok(archive),
            Some(line) => line.map_err(|e| Error::Parse(e.to_string()))?,
        };
        let columns: Vec<&str> = header.trim().split(',').collect();
        let m = columns.iter().take_while(|c| c.starts_with('f')).count();
        if m == 0 || columns[m..].iter().any(|c| !c.starts_with('x')) {
            return Err(Error::Parse(format!("unexpected header `{header}`")));
        }
        for (row, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let values = line
                .trim()
                .split(',')
                .map(|s| {
                    s.parse::<T>()
                        .map_err(|_| Error::Parse(format!("row {}: bad number `{s}`", row + 1)))
                })
                .collect::<Result<Vec<T>>>()?;
            if values.len() != columns.len() {
                return Err(Error::Parse(format!(
                    "row {}: expected {} fields, found {}",
                    row + 1,
                    columns.len(),
                    values.len()
                )));
            }
            let f = ObjectiveVector::new(values[..m].to_vec())?;
            let x = DecisionVector::new(values[m..].to_vec());
            archive.insert(x, f);
        }
        Ok(archive)
    }
}

/// Objective vectors of an archive at one instant, tagged with entry ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArchiveSnapshot<T> {
    m: usize,
    ids: Vec<u64>,
    values: Vec<T>,
}

impl<T: Scalar> ArchiveSnapshot<T> {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Ascending entry ids.
    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.values.chunks_exact(self.m.max(1))
    }

    pub fn to_vectors(&self) -> Vec<Vec<T>> {
        self.points().map(<[T]>::to_vec).collect()
    }

    /// Number of entries of `self` still present in `later`, a snapshot of the
    /// same archive taken afterwards.
    pub fn survivors_in(&self, later: &ArchiveSnapshot<T>) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.ids.len() && j < later.ids.len() {
            match self.ids[i].cmp(&later.ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}
