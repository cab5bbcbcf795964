//! Genus bounds for 2-cell embeddings of the complete bipartite graph K_{m,n},
//! and the channel C_{m,n} ↔ K_{m,n} correspondence.

use std::fmt;

use thiserror::Error;

use crate::curves::{curve_from_degree, CurveSpec, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("K_{{{m},{n}}}: both sides need at least 2 vertices")]
    BadDimensions { m: u32, n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenusRange {
    pub g_min: u32,
    pub g_max: u32,
}

impl GenusRange {
    pub fn contains(&self, g: u32) -> bool {
        (self.g_min..=self.g_max).contains(&g)
    }
}

impl fmt::Display for GenusRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g_min={} g_max={}", self.g_min, self.g_max)
    }
}

/// Discrete memoryless channel with m inputs and n outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelSpec {
    pub inputs: u32,
    pub outputs: u32,
}

impl ChannelSpec {
    pub fn new(inputs: u32, outputs: u32) -> Result<Self, EmbedError> {
        if inputs < 2 || outputs < 2 {
            return Err(EmbedError::BadDimensions { m: inputs, n: outputs });
        }
        Ok(ChannelSpec { inputs, outputs })
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{{{},{}}}", self.inputs, self.outputs)
    }
}

/// K_{m,n} with vertices 0..m on one side and m..m+n on the other.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompleteBipartite {
    pub m: u32,
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
}

impl CompleteBipartite {
    pub fn vertex_count(&self) -> u32 {
        self.m + self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

impl fmt::Display for CompleteBipartite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K_{{{},{}}}", self.m, self.n)
    }
}

/// ⌈(m−2)(n−2)/4⌉ and ⌊(m−1)(n−1)/2⌋.
pub fn genus_range(m: u32, n: u32) -> Result<GenusRange, EmbedError> {
    if m < 2 || n < 2 {
        return Err(EmbedError::BadDimensions { m, n });
    }
    let (m, n) = (m as u64, n as u64);
    let g_min = ((m - 2) * (n - 2)).div_ceil(4);
    let g_max = (m - 1) * (n - 1) / 2;
    Ok(GenusRange { g_min: g_min as u32, g_max: g_max as u32 })
}

pub fn channel_graph(ch: &ChannelSpec) -> CompleteBipartite {
    let (m, n) = (ch.inputs, ch.outputs);
    let edges = (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect();
    CompleteBipartite { m, n, edges }
}

/// The curves y² = zⁿ − 1 of genus g, n ≥ 5: degrees 2g+1 and 2g+2.
pub fn curves_for_genus(g: u32) -> Vec<CurveSpec> {
    if g < 2 {
        return Vec::new();
    }
    [2 * g + 1, 2 * g + 2].into_iter().filter_map(|n| curve_from_degree(n, Sign::Minus).ok()).collect()
}
