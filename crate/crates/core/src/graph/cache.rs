//! On-disk neighbor-graph cache.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic     4 bytes  "GMTG"
//! version   u16      = 1
//! reserved  u16      = 0
//! problem   u64      problem hash
//! n         u32      node count
//! radius    f64
//! model     u8       0 = euclidean, 1 = dubins airplane
//! helical   u8
//! rho       f64      0 for euclidean
//! step      f64      0 for euclidean
//! n times:  u32 count, then count x (u32 target, f64 cost)
//! ```

use std::io::Write;
use std::path::Path;

use super::{Edge, NeighborGraph};
use crate::error::{Error, Result};
use crate::sampling::SampleSet;
use crate::steering::SteeringModel;

pub const MAGIC: &[u8; 4] = b"GMTG";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 2 + 8 + 4 + 8 + 1 + 1 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheKey {
    pub problem_hash: u64,
    pub n: u32,
    pub radius: f64,
    pub model: SteeringModel,
}

/// Decoded cache contents, validated but not yet bound to a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCache {
    pub key: CacheKey,
    pub out: Vec<Vec<Edge>>,
}

impl GraphCache {
    pub fn from_graph(graph: &NeighborGraph, problem_hash: u64, model: SteeringModel) -> Self {
        let out = (0..graph.len()).map(|i| graph.out_neighbors(i).to_vec()).collect::<Vec<_>>();
        Self {
            key: CacheKey { problem_hash, n: out.len() as u32, radius: graph.radius(), model },
            out,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let edges: usize = self.out.iter().map(Vec::len).sum();
        let mut buf = Vec::with_capacity(HEADER_LEN + 4 * self.out.len() + 12 * edges);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&0u16.to_le_bytes());
        buf.extend_from_slice(&self.key.problem_hash.to_le_bytes());
        buf.extend_from_slice(&self.key.n.to_le_bytes());
        buf.extend_from_slice(&self.key.radius.to_le_bytes());
        let (tag, helical, rho, step) = match self.key.model {
            SteeringModel::Euclidean => (0u8, 0u8, 0.0, 0.0),
            m @ SteeringModel::DubinsAirplane { rho, helical, .. } => {
                (1, helical as u8, rho, m.discretization_step().unwrap_or(0.0))
            }
        };
        buf.push(tag);
        buf.push(helical);
        buf.extend_from_slice(&f64::to_le_bytes(rho));
        buf.extend_from_slice(&f64::to_le_bytes(step));
        for row in &self.out {
            buf.extend_from_slice(&(row.len() as u32).to_le_bytes());
            for e in row {
                buf.extend_from_slice(&e.node.to_le_bytes());
                buf.extend_from_slice(&e.cost.to_le_bytes());
            }
        }
        buf
    }

    /// Parses and validates untrusted bytes. Never panics.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Cache(format!("unsupported version {version}")));
        }
        r.u16()?;
        let problem_hash = r.u64()?;
        let n = r.u32()?;
        let radius = r.f64()?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Cache("radius must be positive and finite".into()));
        }
        let tag = r.u8()?;
        let helical = match r.u8()? {
            0 => false,
            1 => true,
            h => return Err(Error::Cache(format!("bad helical flag {h}"))),
        };
        let rho = r.f64()?;
        let step = r.f64()?;
        let model = match tag {
            0 => SteeringModel::Euclidean,
            1 => {
                let m = SteeringModel::DubinsAirplane { rho, discretization_step: Some(step), helical };
                m.validate().map_err(|e| Error::Cache(e.to_string()))?;
                m
            }
            t => return Err(Error::Cache(format!("unknown model tag {t}"))),
        };

        // every row needs at least its count word
        if (n as usize).saturating_mul(4) > r.remaining() {
            return Err(Error::Cache("truncated neighbor lists".into()));
        }
        let mut out = Vec::with_capacity(n as usize);
        for i in 0..n {
            let count = r.u32()? as usize;
            if count.saturating_mul(12) > r.remaining() {
                return Err(Error::Cache(format!("row {i} truncated")));
            }
            let mut row = Vec::with_capacity(count);
            let mut prev: Option<u32> = None;
            for _ in 0..count {
                let node = r.u32()?;
                let cost = r.f64()?;
                if node >= n || node == i {
                    return Err(Error::Cache(format!("row {i}: bad target {node}")));
                }
                if prev.is_some_and(|p| p >= node) {
                    return Err(Error::Cache(format!("row {i}: targets not strictly ascending")));
                }
                if !(cost >= 0.0 && cost <= radius) {
                    return Err(Error::Cache(format!("row {i}: cost {cost} outside [0, radius]")));
                }
                prev = Some(node);
                row.push(Edge { node, cost });
            }
            out.push(row);
        }
        if r.remaining() != 0 {
            return Err(Error::Cache("trailing bytes".into()));
        }
        Ok(Self { key: CacheKey { problem_hash, n, radius, model }, out })
    }

    /// Binds the decoded lists to a sample set, provided the key matches.
    pub fn into_graph(self, expected: &CacheKey, samples: &SampleSet) -> Result<NeighborGraph> {
        let k = &self.key;
        let same_model = match (k.model, expected.model) {
            (SteeringModel::Euclidean, SteeringModel::Euclidean) => true,
            (a @ SteeringModel::DubinsAirplane { .. }, b @ SteeringModel::DubinsAirplane { .. }) => {
                let parts = |m: SteeringModel| match m {
                    SteeringModel::DubinsAirplane { rho, helical, .. } => (rho, helical, m.discretization_step()),
                    _ => unreachable!(),
                };
                parts(a) == parts(b)
            }
            _ => false,
        };
        if k.problem_hash != expected.problem_hash || k.n != expected.n || k.radius != expected.radius || !same_model {
            return Err(Error::Cache("cache key mismatch".into()));
        }
        NeighborGraph::from_out_lists(self.out, self.key.radius, samples, &expected.model)
    }

    /// Writes atomically: a temp file in the target directory, then a rename.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&self.encode())?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::decode(&std::fs::read(path)?)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.remaining() < k {
            return Err(Error::Cache("unexpected end of data".into()));
        }
        let s = &self.bytes[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn array<const K: usize>(&mut self) -> Result<[u8; K]> {
        Ok(self.take(K)?.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        self.array().map(u16::from_le_bytes)
    }

    fn u32(&mut self) -> Result<u32> {
        self.array().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64> {
        self.array().map(u64::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64> {
        self.array().map(f64::from_le_bytes)
    }
}
