use crate::action::PermAction;
use crate::bits::Bitset;
use crate::error::{Error, Result};
use rayon::prelude::*;

/// One orbital Δ_i of the action on ordered pairs.
#[derive(Clone, Debug)]
pub struct Orbital {
    pub index: usize,
    /// Lexicographically least pair in the orbital.
    pub representative: (usize, usize),
    /// Constant row sum of A_i.
    pub degree: usize,
    pub paired_index: usize,
    pub self_paired: bool,
}

/// The decomposition of Ω×Ω into orbitals, with bit-packed adjacency
/// matrices. Orbital 0 is the diagonal; the rest are sorted by
/// (degree, representative).
pub struct OrbitalDecomposition {
    pub degree: usize,
    pub orbitals: Vec<Orbital>,
    /// matrices[i] = rows of A_i.
    pub matrices: Vec<Vec<Bitset>>,
    pub label: String,
}

/// A block of the pairing partition: `{i}` for a self-paired orbital,
/// `{i, j}` for a mutually paired one (i < j). The diagonal is excluded.
pub type PairingBlock = Vec<usize>;

pub fn orbital_decomposition(action: &PermAction, max_degree: usize) -> Result<OrbitalDecomposition> {
    let n = action.degree;
    if n > max_degree {
        return Err(Error::Resource(format!(
            "action degree {} exceeds limit {}",
            n, max_degree
        )));
    }
    if !action.is_transitive() {
        return Err(Error::Input("action is not transitive".into()));
    }

    // Label every ordered pair by BFS; scanning cells in lex order makes each
    // seed the lex-least representative of its orbital.
    let mut label_of = vec![u16::MAX; n * n];
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut queue: Vec<u32> = Vec::new();
    for seed in 0..n * n {
        if label_of[seed] != u16::MAX {
            continue;
        }
        let id = reps.len() as u16;
        if id == u16::MAX {
            return Err(Error::Resource("orbital count overflow".into()));
        }
        reps.push((seed / n, seed % n));
        label_of[seed] = id;
        queue.clear();
        queue.push(seed as u32);
        let mut head = 0;
        while head < queue.len() {
            let cell = queue[head] as usize;
            head += 1;
            let (a, b) = (cell / n, cell % n);
            for g in &action.gens {
                let cell2 = g.apply(a) * n + g.apply(b);
                if label_of[cell2] == u16::MAX {
                    label_of[cell2] = id;
                    queue.push(cell2 as u32);
                }
            }
        }
        sizes.push(head);
    }
    let raw_rank = reps.len();

    // Canonical order: diagonal first, then by (degree, representative).
    let mut order: Vec<usize> = (0..raw_rank).collect();
    let diag = label_of[0] as usize; // pair (0,0)
    order.sort_by_key(|&i| (i != diag, sizes[i] / n, reps[i]));
    let mut new_id = vec![0usize; raw_rank];
    for (pos, &old) in order.iter().enumerate() {
        new_id[old] = pos;
    }

    let mut matrices: Vec<Vec<Bitset>> = (0..raw_rank)
        .map(|_| (0..n).map(|_| Bitset::new(n)).collect())
        .collect();
    for a in 0..n {
        for b in 0..n {
            let i = new_id[label_of[a * n + b] as usize];
            matrices[i][a].set(b);
        }
    }

    let mut orbitals = Vec::with_capacity(raw_rank);
    for pos in 0..raw_rank {
        let old = order[pos];
        let (a, b) = reps[old];
        // the paired orbital contains the transposed representative
        let paired = new_id[label_of[b * n + a] as usize];
        orbitals.push(Orbital {
            index: pos,
            representative: (a, b),
            degree: sizes[old] / n,
            paired_index: paired,
            self_paired: paired == pos,
        });
    }

    let dec = OrbitalDecomposition {
        degree: n,
        orbitals,
        matrices,
        label: action.label.clone(),
    };
    dec.sanity_check()?;
    Ok(dec)
}

impl OrbitalDecomposition {
    pub fn rank(&self) -> usize {
        self.orbitals.len()
    }

    /// A_0 = I, Σ A_i = J, transpose-closure and constant row sums.
    fn sanity_check(&self) -> Result<()> {
        let n = self.degree;
        for a in 0..n {
            if self.matrices[0][a].count_ones() != 1 || !self.matrices[0][a].get(a) {
                return Err(Error::Internal("orbital 0 is not the diagonal".into()));
            }
            let mut acc = Bitset::new(n);
            for m in &self.matrices {
                if acc.intersects(&m[a]) {
                    return Err(Error::Internal("orbitals overlap".into()));
                }
                acc.or_assign(&m[a]);
            }
            if acc.count_ones() != n {
                return Err(Error::Internal("orbitals do not cover Ω×Ω".into()));
            }
        }
        for orb in &self.orbitals {
            let m = &self.matrices[orb.index];
            if m.iter().any(|row| row.count_ones() != orb.degree) {
                return Err(Error::Internal(format!(
                    "orbital {} has non-constant row sum",
                    orb.index
                )));
            }
            let mt = &self.matrices[orb.paired_index];
            let (a, b) = orb.representative;
            if !mt[b].get(a) {
                return Err(Error::Internal("pairing indices are inconsistent".into()));
            }
        }
        Ok(())
    }

    pub fn pairing_classes(&self) -> Vec<PairingBlock> {
        let mut blocks = Vec::new();
        for orb in self.orbitals.iter().skip(1) {
            if orb.self_paired {
                blocks.push(vec![orb.index]);
            } else if orb.index < orb.paired_index {
                blocks.push(vec![orb.index, orb.paired_index]);
            }
        }
        blocks
    }
}

/// The intersection numbers p_ij^k of a coherent configuration.
pub struct IntersectionTensor {
    pub rank: usize,
    /// p[(i*rank + j)*rank + k]
    pub p: Vec<u32>,
}

impl IntersectionTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.p[(i * self.rank + j) * self.rank + k]
    }
}

/// Verify the coherent-configuration axioms by checking every p_ij^k is
/// constant over all pairs of R_k; returns the tensor. A failure names the
/// first violating (i,j,k) with witnesses — it can only mean an upstream bug.
pub fn verify_coherent_axioms(dec: &OrbitalDecomposition) -> Result<IntersectionTensor> {
    let n = dec.degree;
    if n > 512 {
        return Err(Error::Resource(format!(
            "axiom verification capped at degree 512, got {}",
            n
        )));
    }
    let rank = dec.rank();

    // reference values from each orbital's representative pair
    let mut p = vec![0u32; rank * rank * rank];
    for k in 0..rank {
        let (x, y) = dec.orbitals[k].representative;
        for i in 0..rank {
            for j in 0..rank {
                let jt = dec.orbitals[j].paired_index;
                let cnt = dec.matrices[i][x].and_count(&dec.matrices[jt][y]) as u32;
                p[(i * rank + j) * rank + k] = cnt;
            }
        }
    }

    // full constancy check, parallel over rows; lowest violating triple wins
    let violation = (0..n)
        .into_par_iter()
        .filter_map(|x| {
            let mut best: Option<(usize, usize, usize, (usize, usize), u32)> = None;
            for y in 0..n {
                let k = (0..rank).find(|&k| dec.matrices[k][x].get(y)).unwrap();
                for i in 0..rank {
                    for j in 0..rank {
                        let jt = dec.orbitals[j].paired_index;
                        let cnt = dec.matrices[i][x].and_count(&dec.matrices[jt][y]) as u32;
                        if cnt != p[(i * rank + j) * rank + k] {
                            let this = (i, j, k, (x, y), cnt);
                            if best.map_or(true, |b| (this.0, this.1, this.2, this.3) < (b.0, b.1, b.2, b.3)) {
                                best = Some(this);
                            }
                        }
                    }
                }
            }
            best
        })
        .min_by_key(|&(i, j, k, xy, _)| (i, j, k, xy));

    if let Some((i, j, k, (x, y), cnt)) = violation {
        let (rx, ry) = dec.orbitals[k].representative;
        return Err(Error::Internal(format!(
            "p_{{{},{}}}^{} is not constant: pair ({},{}) gives {}, representative ({},{}) gives {}",
            i, j, k, x, y, cnt, rx, ry,
            p[(i * rank + j) * rank + k]
        )));
    }
    Ok(IntersectionTensor { rank, p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{ksubset_action, PermAction};
    use crate::group::PermGroup;
    use crate::perm::Perm;

    fn s5_on_pairs() -> PermAction {
        let g = PermGroup::from_generators(vec![
            Perm::from_images(vec![1, 0, 2, 3, 4]).unwrap(),
            Perm::from_images(vec![1, 2, 3, 4, 0]).unwrap(),
        ])
        .unwrap();
        ksubset_action(&g, 2, 100, "s5 on pairs").unwrap()
    }

    #[test]
    fn petersen_action_has_rank_three() {
        // S5 on 2-subsets: diagonal + "disjoint pairs" (Petersen) + "meeting pairs"
        let dec = orbital_decomposition(&s5_on_pairs(), 100).unwrap();
        assert_eq!(dec.rank(), 3);
        let mut degs: Vec<usize> = dec.orbitals.iter().map(|o| o.degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 3, 6]);
        assert!(dec.orbitals.iter().all(|o| o.self_paired));
        assert_eq!(dec.pairing_classes(), vec![vec![1], vec![2]]);
    }

    #[test]
    fn tensor_matches_brute_force_triple_count() {
        let dec = orbital_decomposition(&s5_on_pairs(), 100).unwrap();
        let t = verify_coherent_axioms(&dec).unwrap();
        let n = dec.degree;
        // p_{ij}^k counts z with (x,z) ∈ Δ_i and (z,y) ∈ Δ_j, for any (x,y) ∈ Δ_k
        for k in 0..dec.rank() {
            let (x, y) = dec.orbitals[k].representative;
            for i in 0..dec.rank() {
                for j in 0..dec.rank() {
                    let brute = (0..n)
                        .filter(|&z| dec.matrices[i][x].get(z) && dec.matrices[j][z].get(y))
                        .count() as u32;
                    assert_eq!(t.get(i, j, k), brute, "p_{{{},{}}}^{}", i, j, k);
                }
            }
        }
    }

    #[test]
    fn regular_action_of_c3_has_mutually_paired_orbitals() {
        let g = PermGroup::from_generators(vec![Perm::from_images(vec![1, 2, 0]).unwrap()])
            .unwrap();
        let act = PermAction::natural(&g, "c3");
        let dec = orbital_decomposition(&act, 100).unwrap();
        assert_eq!(dec.rank(), 3);
        let o1 = &dec.orbitals[1];
        assert!(!o1.self_paired);
        assert_eq!(o1.paired_index, 2);
        assert_eq!(dec.pairing_classes(), vec![vec![1, 2]]);
    }
}
