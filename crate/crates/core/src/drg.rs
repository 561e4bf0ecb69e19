use crate::bits::Bitset;
use crate::error::Error;
use crate::graphs::Graph;
use serde::{Deserialize, Serialize};

/// BFS layers Γ_0(v)..Γ_d(v) from a root vertex.
pub struct DistancePartition {
    pub root: usize,
    pub cells: Vec<Bitset>,
    pub diameter: usize,
    pub connected: bool,
}

pub fn distance_partition(g: &Graph, v: usize) -> DistancePartition {
    let n = g.n;
    let mut visited = Bitset::new(n);
    visited.set(v);
    let mut cur = Bitset::new(n);
    cur.set(v);
    let mut cells = vec![cur.clone()];
    loop {
        let mut next = Bitset::new(n);
        for u in cells.last().unwrap().iter_ones() {
            next.or_assign(&g.rows[u]);
        }
        next.andnot_assign(&visited);
        if next.is_empty() {
            break;
        }
        visited.or_assign(&next);
        cells.push(next);
    }
    DistancePartition {
        root: v,
        diameter: cells.len() - 1,
        connected: visited.count_ones() == n,
        cells,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl IntersectionArray {
    pub fn diameter(&self) -> usize {
        self.c.len()
    }

    /// Layer sizes k_0..k_d implied by the array.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut k = vec![1usize];
        for i in 0..self.c.len() {
            k.push(k[i] * self.b[i] / self.c[i]);
        }
        k
    }
}

impl std::fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bs: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        let cs: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{};{}}}", bs.join(","), cs.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl std::fmt::Display for SrgParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.mu)
    }
}

#[derive(Clone, Debug)]
pub enum Rejection {
    NotConnected,
    /// first violation: root v, witness w, layer i
    NotConstant { v: usize, w: usize, i: usize },
    NotRegular,
}

/// Distance-regularity by the b_i / c_i characterization, checked over every
/// vertex pair. Diameter-1 graphs (complete) are accepted with d = 1.
pub fn drg_check(g: &Graph) -> std::result::Result<IntersectionArray, Rejection> {
    let k = g.is_regular().ok_or(Rejection::NotRegular)?;
    let first = distance_partition(g, 0);
    if !first.connected {
        return Err(Rejection::NotConnected);
    }
    let d = first.diameter;
    let mut b = vec![usize::MAX; d + 1];
    let mut c = vec![usize::MAX; d + 1];
    b[0] = k;
    c[1] = 1;
    let mut dist = vec![0u16; g.n];
    for v in 0..g.n {
        let dp = if v == 0 {
            // reuse the first partition
            DistancePartition {
                root: 0,
                diameter: first.diameter,
                connected: true,
                cells: first.cells.clone(),
            }
        } else {
            distance_partition(g, v)
        };
        if !dp.connected || dp.diameter != d {
            return Err(Rejection::NotConstant { v, w: v, i: 0 });
        }
        for (i, cell) in dp.cells.iter().enumerate() {
            for w in cell.iter_ones() {
                dist[w] = i as u16;
            }
        }
        for w in 0..g.n {
            let i = dist[w] as usize;
            let bi = if i < d {
                g.rows[w].and_count(&dp.cells[i + 1])
            } else {
                0
            };
            let ci = if i > 0 {
                g.rows[w].and_count(&dp.cells[i - 1])
            } else {
                0
            };
            if i < d {
                if b[i] == usize::MAX {
                    b[i] = bi;
                } else if b[i] != bi {
                    return Err(Rejection::NotConstant { v, w, i });
                }
            }
            if i > 0 {
                if c[i] == usize::MAX {
                    c[i] = ci;
                } else if c[i] != ci {
                    return Err(Rejection::NotConstant { v, w, i });
                }
            }
        }
    }
    let arr = IntersectionArray {
        b: b[..d].to_vec(),
        c: c[1..=d].to_vec(),
    };
    debug_assert_eq!(arr.layer_sizes().iter().sum::<usize>(), g.n);
    Ok(arr)
}

/// Strong regularity: constant common-neighbour counts λ on edges and μ on
/// non-edges. Rejects complete and edgeless graphs (no λ or μ to speak of is
/// fine, but diameter-2 with μ ≠ 0 is what the callers want).
pub fn srg_params(g: &Graph) -> std::result::Result<SrgParams, Rejection> {
    let k = g.is_regular().ok_or(Rejection::NotRegular)?;
    let n = g.n;
    let mut lambda: Option<usize> = None;
    let mut mu: Option<usize> = None;
    for u in 0..n {
        for w in u + 1..n {
            let common = g.rows[u].and_count(&g.rows[w]);
            let slot = if g.has_edge(u, w) { &mut lambda } else { &mut mu };
            match slot {
                None => *slot = Some(common),
                Some(e) if *e != common => {
                    return Err(Rejection::NotConstant { v: u, w, i: 0 })
                }
                _ => {}
            }
        }
    }
    match (lambda, mu) {
        (Some(lambda), Some(mu)) => {
            let p = SrgParams { v: n, k, lambda, mu };
            // standard counting identity; failure means a checker bug
            debug_assert_eq!(k * (k - lambda - 1), (n - k - 1) * mu);
            Ok(p)
        }
        _ => Err(Rejection::NotRegular),
    }
}

/// The SRG ↔ diameter-2 DRG translation {k, k−1−λ; 1, μ}.
pub fn srg_to_array(p: &SrgParams) -> IntersectionArray {
    IntersectionArray {
        b: vec![p.k, p.k - 1 - p.lambda],
        c: vec![1, p.mu],
    }
}

/// Brute-force oracle used in tests: a connected regular graph is
/// distance-regular iff all p_ij^k of its distance relations are constant
/// over all vertex pairs. O(N³·d²); only for small N.
pub fn drg_check_bruteforce(g: &Graph) -> std::result::Result<IntersectionArray, Rejection> {
    g.is_regular().ok_or(Rejection::NotRegular)?;
    let n = g.n;
    let dp0 = distance_partition(g, 0);
    if !dp0.connected {
        return Err(Rejection::NotConnected);
    }
    let d = dp0.diameter;
    // all pairwise distances
    let mut dist = vec![vec![0usize; n]; n];
    for v in 0..n {
        let dp = distance_partition(g, v);
        if !dp.connected || dp.diameter != d {
            return Err(Rejection::NotConstant { v, w: v, i: 0 });
        }
        for (i, cell) in dp.cells.iter().enumerate() {
            for w in cell.iter_ones() {
                dist[v][w] = i;
            }
        }
    }
    let mut p = vec![vec![vec![usize::MAX; d + 1]; d + 1]; d + 1];
    for x in 0..n {
        for y in 0..n {
            let k = dist[x][y];
            let mut counts = vec![vec![0usize; d + 1]; d + 1];
            for z in 0..n {
                counts[dist[x][z]][dist[z][y]] += 1;
            }
            for i in 0..=d {
                for j in 0..=d {
                    if p[i][j][k] == usize::MAX {
                        p[i][j][k] = counts[i][j];
                    } else if p[i][j][k] != counts[i][j] {
                        return Err(Rejection::NotConstant { v: x, w: y, i: k });
                    }
                }
            }
        }
    }
    let b: Vec<usize> = (0..d).map(|i| p[1][i + 1][i]).collect();
    let c: Vec<usize> = (1..=d).map(|i| p[1][i - 1][i]).collect();
    Ok(IntersectionArray { b, c })
}

/// Connectivity helper exposed for callers that reject disconnected unions.
pub fn is_connected(g: &Graph) -> bool {
    distance_partition(g, 0).connected
}

impl Rejection {
    pub fn describe(&self) -> String {
        match self {
            Rejection::NotConnected => "not connected".into(),
            Rejection::NotRegular => "not regular".into(),
            Rejection::NotConstant { v, w, i } => {
                format!("non-constant parameter at root {}, witness {}, layer {}", v, w, i)
            }
        }
    }
}

impl From<Rejection> for Error {
    fn from(r: Rejection) -> Error {
        Error::Input(format!("not distance-regular: {}", r.describe()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;

    fn petersen() -> Graph {
        // vertices = 2-subsets of {0..4}, adjacency = disjointness
        let mut pairs = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                pairs.push((a, b));
            }
        }
        let mut edges = Vec::new();
        for i in 0..10 {
            for j in i + 1..10 {
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                if a != c && a != d && b != c && b != d {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(10, &edges)
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn petersen_intersection_array() {
        let arr = drg_check(&petersen()).unwrap();
        assert_eq!(arr.b, vec![3, 2]);
        assert_eq!(arr.c, vec![1, 1]);
        assert_eq!(arr.diameter(), 2);
        assert_eq!(arr.layer_sizes(), vec![1, 3, 6]);
        let p = srg_params(&petersen()).unwrap();
        assert_eq!((p.v, p.k, p.lambda, p.mu), (10, 3, 0, 1));
        let from_srg = srg_to_array(&p);
        assert_eq!((from_srg.b, from_srg.c), (arr.b, arr.c));
    }

    #[test]
    fn cycles_are_distance_regular() {
        let arr = drg_check(&cycle(6)).unwrap();
        assert_eq!(arr.b, vec![2, 1, 1]);
        assert_eq!(arr.c, vec![1, 1, 2]);
    }

    #[test]
    fn disconnected_and_irregular_graphs_are_rejected() {
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(drg_check(&two_edges).is_err());
        assert!(!is_connected(&two_edges));
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(drg_check(&path).is_err());
    }

    #[test]
    fn fast_check_matches_bruteforce() {
        for g in [petersen(), cycle(5), cycle(6), cycle(7), Graph::from_edges(4, &[(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)])] {
            let fast = drg_check(&g);
            let brute = drg_check_bruteforce(&g);
            match (fast, brute) {
                (Ok(a), Ok(b)) => assert_eq!((a.b, a.c), (b.b, b.c)),
                (Err(_), Err(_)) => {}
                (a, b) => panic!("disagreement: {:?} vs {:?}", a.is_ok(), b.is_ok()),
            }
        }
        // a regular connected graph that is NOT distance-regular: 3-prism
        let prism = Graph::from_edges(6, &[(0,1),(1,2),(2,0),(3,4),(4,5),(5,3),(0,3),(1,4),(2,5)]);
        assert!(drg_check(&prism).is_err());
        assert!(drg_check_bruteforce(&prism).is_err());
    }
}
