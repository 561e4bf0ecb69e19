use crate::bits::Bitset;
use crate::error::{Error, Result};
use crate::orbitals::{OrbitalDecomposition, PairingBlock};

/// A simple regular graph as bit-packed adjacency rows, remembering which
/// orbital union produced it.
#[derive(Clone)]
pub struct Graph {
    pub n: usize,
    pub rows: Vec<Bitset>,
    /// (action label, orbital indices of the union), when applicable.
    pub provenance: Option<(String, Vec<usize>)>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut rows = vec![Bitset::new(n); n];
        for &(u, v) in edges {
            rows[u].set(v);
            rows[v].set(u);
        }
        Graph {
            n,
            rows,
            provenance: None,
        }
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.rows[v].count_ones()
    }

    pub fn is_regular(&self) -> Option<usize> {
        let k = self.degree_of(0);
        self.rows.iter().all(|r| r.count_ones() == k).then_some(k)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].get(v)
    }

    /// Relabel: vertex v of the result is vertex perm⁻¹(v) of the input,
    /// i.e. input vertex u becomes perm[u].
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        let mut rows = vec![Bitset::new(self.n); self.n];
        for u in 0..self.n {
            for v in self.rows[u].iter_ones() {
                rows[perm[u]].set(perm[v]);
            }
        }
        Graph {
            n: self.n,
            rows,
            provenance: None,
        }
    }

    /// Plain edge-list export: `p graph N M` then one edge per line, 1-based.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p graph {} {}\n", self.n, self.edge_count());
        for u in 0..self.n {
            for v in self.rows[u].iter_ones() {
                if u < v {
                    out.push_str(&format!("{} {}\n", u + 1, v + 1));
                }
            }
        }
        out
    }

    /// graph6 encoding (printable, N ≤ 2048 here; the format allows more).
    pub fn to_graph6(&self) -> Result<String> {
        let n = self.n;
        if n > 2048 {
            return Err(Error::Resource(format!(
                "graph6 export capped at 2048 vertices, got {}",
                n
            )));
        }
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            out.push(((n >> 12) & 63) as u8 + 63);
            out.push(((n >> 6) & 63) as u8 + 63);
            out.push((n & 63) as u8 + 63);
        }
        // upper-triangle bits, column by column
        let mut acc = 0u8;
        let mut nbits = 0;
        for v in 1..n {
            for u in 0..v {
                acc = (acc << 1) | self.has_edge(u, v) as u8;
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        Ok(String::from_utf8(out).unwrap())
    }
}

/// A transpose-closed union of non-diagonal orbitals: a subset of the pairing
/// blocks, neither empty nor everything.
#[derive(Clone, Debug)]
pub struct CandidateSelection {
    pub block_mask: u32,
    pub orbital_indices: Vec<usize>,
    pub degree: usize,
}

/// All 2^B − 2 proper non-empty block subsets, in ascending mask order.
pub fn enumerate_candidates(
    dec: &OrbitalDecomposition,
    max_blocks: usize,
) -> Result<Vec<CandidateSelection>> {
    let blocks = dec.pairing_classes();
    let b = blocks.len();
    if b > max_blocks {
        return Err(Error::Resource(format!(
            "{} pairing blocks exceed the limit {}; candidate count 2^{} is the cost driver",
            b, max_blocks, b
        )));
    }
    let mut out = Vec::new();
    if b == 0 {
        return Ok(out);
    }
    let full: u32 = if b == 32 { u32::MAX } else { (1u32 << b) - 1 };
    for mask in 1..full {
        out.push(selection_from_mask(dec, &blocks, mask));
    }
    Ok(out)
}

pub fn selection_from_mask(
    dec: &OrbitalDecomposition,
    blocks: &[PairingBlock],
    mask: u32,
) -> CandidateSelection {
    let mut orbital_indices = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        if mask >> bi & 1 != 0 {
            orbital_indices.extend_from_slice(block);
        }
    }
    orbital_indices.sort_unstable();
    let degree = orbital_indices
        .iter()
        .map(|&i| dec.orbitals[i].degree)
        .sum();
    CandidateSelection {
        block_mask: mask,
        orbital_indices,
        degree,
    }
}

pub fn build_graph(dec: &OrbitalDecomposition, sel: &CandidateSelection) -> Graph {
    let n = dec.degree;
    let mut rows = vec![Bitset::new(n); n];
    for &i in &sel.orbital_indices {
        for (row, src) in rows.iter_mut().zip(&dec.matrices[i]) {
            row.or_assign(src);
        }
    }
    Graph {
        n,
        rows,
        provenance: Some((dec.label.clone(), sel.orbital_indices.clone())),
    }
}

/// Cheap necessary condition for distance-regularity: the number of common
/// neighbours of vertex 0 and each of its neighbours must be constant (a₁).
/// Never rejects a true DRG; rejects most candidates without materializing
/// the whole adjacency matrix.
pub fn lambda_probe(dec: &OrbitalDecomposition, sel: &CandidateSelection) -> bool {
    let n = dec.degree;
    let mut row0 = Bitset::new(n);
    for &i in &sel.orbital_indices {
        row0.or_assign(&dec.matrices[i][0]);
    }
    let mut expected: Option<usize> = None;
    let mut roww = Bitset::new(n);
    for w in row0.iter_ones() {
        roww.zero();
        for &i in &sel.orbital_indices {
            roww.or_assign(&dec.matrices[i][w]);
        }
        let common = row0.and_count(&roww);
        match expected {
            None => expected = Some(common),
            Some(e) if e != common => return false,
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_known_strings() {
        let single_edge = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(single_edge.to_graph6().unwrap(), "A_");
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(k3.to_graph6().unwrap(), "Bw");
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(k4.to_graph6().unwrap(), "C~");
    }

    #[test]
    fn relabeling_preserves_structure() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let h = g.relabeled(&[3, 2, 1, 0]);
        assert_eq!(h.edge_count(), 3);
        assert!(h.has_edge(3, 2) && h.has_edge(2, 1) && h.has_edge(1, 0));
        assert!(!h.has_edge(0, 3));
    }

    #[test]
    fn degrees_and_regularity() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.degree_of(1), 2);
        assert_eq!(path.is_regular(), None);
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(c4.is_regular(), Some(2));
    }
}
