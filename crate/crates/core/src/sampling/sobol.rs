//! Sobol low-discrepancy sequence with Joe-Kuo direction numbers.
//!
//! Points are generated in natural index order: the point at raw index `i`
//! is the XOR of the direction vectors selected by the binary digits of `i`,
//! so it is a pure function of the table and the index. Skipping ahead and
//! regenerating always agree.
//!
//! Engines never emit the all-zeros point at raw index 0. The skip jumps
//! past a whole aligned block of 2^16 indices rather than just index 0:
//! dropping only the first point destroys the dyadic balance of the sequence
//! (the remaining 2^m - 1 points plus the next one no longer fill every
//! elementary interval exactly once), while any aligned block keeps it.

use std::path::Path;
use std::sync::{Arc, OnceLock};

use crate::error::ConfigError;

const INDEX_BITS: usize = 32;

/// Region engines stride by this many raw indices so they never share points.
pub const REGION_STRIDE: u32 = 1 << 16;

const EMBEDDED_TABLE: &str = include_str!("joe_kuo_64.txt");

/// Per-dimension direction vectors, 32 bits each.
///
/// Dimension 1 is the built-in van der Corput sequence; dimensions 2 and up
/// come from a Joe-Kuo `d s a m_1..m_s` table (the published text format).
#[derive(Clone, Debug)]
pub struct DirectionTable {
    vectors: Vec<[u32; INDEX_BITS]>,
}

impl DirectionTable {
    /// The embedded table covering the first 64 dimensions.
    pub fn embedded() -> &'static Arc<DirectionTable> {
        static TABLE: OnceLock<Arc<DirectionTable>> = OnceLock::new();
        TABLE.get_or_init(|| {
            Arc::new(DirectionTable::from_text(EMBEDDED_TABLE).expect("embedded table parses"))
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::DirectionTableIo {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_text(&text)
    }

    /// Parses the whitespace-separated `d s a m_1..m_s` rows. A leading
    /// header line (as in the published files) is skipped.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut vectors = vec![van_der_corput()];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if lineno == 0 && fields[0].parse::<u64>().is_err() {
                continue; // header row
            }
            let parse = |s: &str| -> Result<u64, ConfigError> {
                s.parse()
                    .map_err(|_| ConfigError::DirectionTable(format!("bad integer {s:?} on line {}", lineno + 1)))
            };
            if fields.len() < 3 {
                return Err(ConfigError::DirectionTable(format!(
                    "line {} has {} fields, need at least d s a",
                    lineno + 1,
                    fields.len()
                )));
            }
            let d = parse(fields[0])? as usize;
            let s = parse(fields[1])? as usize;
            let a = parse(fields[2])? as u32;
            if d != vectors.len() + 1 {
                return Err(ConfigError::DirectionTable(format!(
                    "expected dimension {}, found {} on line {}",
                    vectors.len() + 1,
                    d,
                    lineno + 1
                )));
            }
            if s == 0 || fields.len() != 3 + s {
                return Err(ConfigError::DirectionTable(format!(
                    "dimension {d}: s = {s} but {} m-values given",
                    fields.len().saturating_sub(3)
                )));
            }
            let mut m = Vec::with_capacity(s);
            for f in &fields[3..] {
                m.push(parse(f)? as u32);
            }
            vectors.push(direction_vector(s, a, &m)?);
        }
        Ok(Self { vectors })
    }

    /// Highest supported dimension.
    pub fn max_dimension(&self) -> usize {
        self.vectors.len()
    }

    fn vector(&self, dim: usize) -> &[u32; INDEX_BITS] {
        &self.vectors[dim]
    }
}

fn van_der_corput() -> [u32; INDEX_BITS] {
    let mut v = [0u32; INDEX_BITS];
    for (j, slot) in v.iter_mut().enumerate() {
        *slot = 1 << (31 - j);
    }
    v
}

fn direction_vector(s: usize, a: u32, m: &[u32]) -> Result<[u32; INDEX_BITS], ConfigError> {
    let mut v = [0u32; INDEX_BITS];
    for j in 0..s.min(INDEX_BITS) {
        let mj = m[j];
        if mj % 2 == 0 || mj >= (1 << (j + 1)) {
            return Err(ConfigError::DirectionTable(format!(
                "m_{} = {} must be odd and below 2^{}",
                j + 1,
                mj,
                j + 1
            )));
        }
        v[j] = mj << (31 - j);
    }
    for j in s..INDEX_BITS {
        let prev = v[j - s];
        let mut next = prev ^ (prev >> s);
        for k in 1..s {
            if (a >> (s - 1 - k)) & 1 == 1 {
                next ^= v[j - k];
            }
        }
        v[j] = next;
    }
    Ok(v)
}

/// A stateful cursor over the Sobol sequence in a fixed dimension.
#[derive(Clone, Debug)]
pub struct SobolEngine {
    table: Arc<DirectionTable>,
    dim: usize,
    next_index: u32,
}

impl SobolEngine {
    /// Engine starting at the first index past the skipped block.
    pub fn new(table: Arc<DirectionTable>, dim: usize) -> Result<Self, ConfigError> {
        Self::for_region(table, dim, 0)
    }

    /// Engine for region `region_id`, starting at `(region_id + 1) * 2^16`.
    /// Regions therefore own disjoint index ranges (no region consumes
    /// anywhere near 2^16 points under realistic budgets).
    pub fn for_region(
        table: Arc<DirectionTable>,
        dim: usize,
        region_id: usize,
    ) -> Result<Self, ConfigError> {
        if dim == 0 {
            return Err(ConfigError::ZeroDimension);
        }
        if dim > table.max_dimension() {
            return Err(ConfigError::SobolDimension {
                dim,
                max: table.max_dimension(),
            });
        }
        let offset = (region_id as u32 + 1)
            .checked_mul(REGION_STRIDE)
            .ok_or_else(|| ConfigError::DirectionTable("region offset overflow".into()))?;
        Ok(Self {
            table,
            dim,
            next_index: offset,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn next_index(&self) -> u32 {
        self.next_index
    }

    /// The point at raw sequence index `raw_index`, independent of cursor state.
    pub fn point_at(&self, raw_index: u32, out: &mut [f64]) {
        assert_eq!(out.len(), self.dim);
        for (d, slot) in out.iter_mut().enumerate() {
            let v = self.table.vector(d);
            let mut acc = 0u32;
            let mut bits = raw_index;
            let mut b = 0;
            while bits != 0 {
                if bits & 1 == 1 {
                    acc ^= v[b];
                }
                bits >>= 1;
                b += 1;
            }
            *slot = acc as f64 / (1u64 << 32) as f64;
        }
    }

    /// Returns the next point in [0, 1)^M and advances the cursor.
    pub fn next_point(&mut self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.point_at(self.next_index, &mut out);
        self.next_index = self.next_index.wrapping_add(1);
        out
    }
}
