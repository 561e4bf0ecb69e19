use crate::autiso::{automorphism_group_colored, AutResult, SearchBudget};
use crate::bits::Bitset;
use crate::codes::{words_of_weight, LinearCode};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::perm::Perm;
use rayon::prelude::*;
use std::collections::HashMap;

/// A block design with constant block size, blocks stored as bit-packed
/// point sets. Over GF(2) supports of distinct codewords are distinct, so
/// multiplicities are always 1 (asserted on construction).
pub struct Design {
    pub v: usize,
    pub k: usize,
    pub blocks: Vec<Bitset>,
}

impl Design {
    pub fn new(v: usize, blocks: Vec<Bitset>) -> Result<Design> {
        let k = blocks
            .first()
            .map(|b| b.count_ones())
            .ok_or_else(|| Error::Input("design with no blocks".into()))?;
        if blocks.iter().any(|b| b.count_ones() != k) {
            return Err(Error::Input("blocks have mixed sizes".into()));
        }
        let mut sorted = blocks.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("repeated block".into()));
        }
        Ok(Design { v, k, blocks })
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }
}

/// Blocks are the supports of all weight-w codewords.
pub fn support_design(c: &LinearCode, w: usize) -> Result<Design> {
    let words = words_of_weight(c, w)?;
    if words.is_empty() {
        return Err(Error::Input(format!("no codewords of weight {}", w)));
    }
    Design::new(c.n, words)
}

/// Pair-coverage check: accepts with λ iff every point pair lies in exactly λ
/// blocks; cross-checks b·k(k−1) = λ·v(v−1).
pub fn is_2design(d: &Design) -> Result<usize> {
    let v = d.v;
    let npairs = v * (v - 1) / 2;
    let pair_idx = |a: usize, b: usize| -> usize {
        // a < b
        b * (b - 1) / 2 + a
    };
    let counts = d
        .blocks
        .par_chunks(1024)
        .map(|chunk| {
            let mut local = vec![0u32; npairs];
            let mut pts: Vec<usize> = Vec::with_capacity(d.k);
            for block in chunk {
                pts.clear();
                pts.extend(block.iter_ones());
                for (i, &a) in pts.iter().enumerate() {
                    for &b in &pts[i + 1..] {
                        local[pair_idx(a, b)] += 1;
                    }
                }
            }
            local
        })
        .reduce(
            || vec![0u32; npairs],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(&y) {
                    *a += b;
                }
                x
            },
        );
    let lambda = counts[0];
    if let Some(i) = counts.iter().position(|&c| c != lambda) {
        // recover the two witness points from the triangular index
        let mut b = 1;
        while (b + 1) * b / 2 <= i {
            b += 1;
        }
        let a = i - b * (b - 1) / 2;
        return Err(Error::Input(format!(
            "not a 2-design: pair ({},{}) lies in {} blocks, pair (0,1) in {}",
            a + 1,
            b + 1,
            counts[i],
            lambda
        )));
    }
    let lambda = lambda as usize;
    if d.b() * d.k * (d.k - 1) != lambda * v * (v - 1) {
        return Err(Error::Internal(
            "pair counts are constant but the counting identity fails".into(),
        ));
    }
    Ok(lambda)
}

pub fn complement_design(d: &Design) -> Design {
    Design {
        v: d.v,
        k: d.v - d.k,
        blocks: d.blocks.iter().map(|b| b.complemented()).collect(),
    }
}

/// Same blocks as sets, ignoring order.
pub fn same_blocks(d1: &Design, d2: &Design) -> bool {
    if d1.v != d2.v || d1.b() != d2.b() {
        return false;
    }
    let mut a = d1.blocks.clone();
    let mut b = d2.blocks.clone();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Orbit counts of a point-permutation group on points and on blocks.
/// Errors if some generator does not map blocks to blocks.
pub fn group_orbits_on(d: &Design, gens: &[Perm]) -> Result<(usize, usize)> {
    if gens.iter().any(|g| g.degree() != d.v) {
        return Err(Error::Input("generator degree differs from point count".into()));
    }
    let index: HashMap<&Bitset, usize> = d
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b, i))
        .collect();
    // images of every block under every generator, in parallel
    let block_images: Vec<Vec<usize>> = gens
        .par_iter()
        .map(|g| {
            d.blocks
                .iter()
                .enumerate()
                .map(|(bi, block)| {
                    let mut img = Bitset::new(d.v);
                    for p in block.iter_ones() {
                        img.set(g.apply(p));
                    }
                    index.get(&img).copied().ok_or(bi)
                })
                .collect::<std::result::Result<Vec<usize>, usize>>()
        })
        .collect::<std::result::Result<Vec<_>, usize>>()
        .map_err(|bi| {
            Error::Input(format!(
                "a generator does not preserve the block set (block {})",
                bi
            ))
        })?;

    let mut uf_points = UnionFind::new(d.v);
    for g in gens {
        for p in 0..d.v {
            uf_points.union(p, g.apply(p));
        }
    }
    let mut uf_blocks = UnionFind::new(d.b());
    for imgs in &block_images {
        for (bi, &img) in imgs.iter().enumerate() {
            uf_blocks.union(bi, img);
        }
    }
    Ok((uf_points.count(), uf_blocks.count()))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Automorphism group of the design via the coloured bipartite incidence
/// graph (points one colour class, blocks the other), restricted to the
/// point side.
pub fn design_automorphisms(d: &Design, budget: SearchBudget) -> Result<AutResult> {
    let v = d.v;
    let b = d.b();
    let n = v + b;
    let mut g = Graph::from_edges(n, &[]);
    for (bi, block) in d.blocks.iter().enumerate() {
        for p in block.iter_ones() {
            g.rows[p].set(v + bi);
            g.rows[v + bi].set(p);
        }
    }
    let initial = vec![
        (0..v as u32).collect::<Vec<u32>>(),
        (v as u32..n as u32).collect::<Vec<u32>>(),
    ];
    let full = automorphism_group_colored(&g, initial, budget)?;
    // restrict to points: block images are determined by point images for a
    // design with distinct blocks
    let point_gens: Vec<Perm> = full
        .generators
        .iter()
        .map(|p| Perm::from_images((0..v).map(|u| p.apply(u) as u32).collect()))
        .collect::<Result<Vec<_>>>()?;
    let order = if point_gens.iter().all(|p| p.is_identity()) {
        num_bigint::BigUint::from(1u32)
    } else {
        crate::group::PermGroup::from_generators(point_gens.clone())?
            .order()
            .clone()
    };
    Ok(AutResult {
        generators: point_gens,
        order,
        canonical_labeling: full.canonical_labeling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::code_from_matrix;

    fn fano() -> Design {
        // weight-3 words of the [7,4] Hamming code are the Fano plane lines
        let c = code_from_matrix(
            &[
                vec![1, 0, 0, 0, 0, 1, 1],
                vec![0, 1, 0, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 1, 1, 0],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
            2,
        )
        .unwrap();
        support_design(&c, 3).unwrap()
    }

    #[test]
    fn fano_plane_is_a_2_design() {
        let d = fano();
        assert_eq!((d.v, d.b(), d.k), (7, 7, 3));
        assert_eq!(is_2design(&d).unwrap(), 1);
    }

    #[test]
    fn fano_automorphism_group_has_order_168() {
        let res = design_automorphisms(&fano(), SearchBudget::default()).unwrap();
        assert_eq!(res.order, 168u32.into());
    }

    #[test]
    fn complement_of_fano() {
        let d = fano();
        let c = complement_design(&d);
        assert_eq!((c.v, c.b(), c.k), (7, 7, 4));
        assert_eq!(is_2design(&c).unwrap(), 2);
        assert!(!same_blocks(&d, &c));
        assert!(same_blocks(&d, &complement_design(&c)));
    }

    #[test]
    fn degenerate_designs_are_rejected() {
        let mut b1 = crate::bits::Bitset::new(4);
        b1.set(0);
        b1.set(1);
        let mut b2 = crate::bits::Bitset::new(4);
        b2.set(2);
        // blocks of unequal size
        assert!(Design::new(4, vec![b1.clone(), b2]).is_err());
        // repeated blocks
        assert!(Design::new(4, vec![b1.clone(), b1.clone()]).is_err());
        // not point-pair balanced
        let mut b3 = crate::bits::Bitset::new(4);
        b3.set(0);
        b3.set(2);
        let d = Design::new(4, vec![b1, b3]).unwrap();
        assert!(is_2design(&d).is_err());
    }

    #[test]
    fn orbit_counts_under_a_design_automorphism() {
        let d = fano();
        let res = design_automorphisms(&d, SearchBudget::default()).unwrap();
        let (pts, blks) = group_orbits_on(&d, &res.generators).unwrap();
        // the full automorphism group is flag-transitive
        assert_eq!((pts, blks), (1, 1));
        let id = crate::perm::Perm::identity(7);
        let (pts, blks) = group_orbits_on(&d, &[id]).unwrap();
        assert_eq!((pts, blks), (7, 7));
    }
}
