use crate::bits::Bitset;
use crate::codes::{is_code_automorphism, LinearCode};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// t = ⌊(d−1)/2⌋ errors are correctable at minimum distance d.
pub fn error_capacity(d: usize) -> usize {
    d.saturating_sub(1) / 2
}

/// The nested-ceiling lower bound on PD-set size, evaluated innermost-out
/// with exact integer arithmetic.
pub fn gordon_bound(n: usize, k: usize, t: usize) -> Result<u128> {
    let r = n - k;
    if t >= r {
        return Err(Error::Input(format!(
            "t = {} ≥ r = {}: no PD-set can exist",
            t, r
        )));
    }
    let mut acc: u128 = 1;
    for j in (1..=t).rev() {
        let num = (n - j + 1) as u128 * acc;
        let den = (r - j + 1) as u128;
        acc = (num + den - 1) / den;
    }
    Ok(acc.max(1))
}

#[derive(Clone, Debug)]
pub struct PDSet {
    pub perms: Vec<Perm>,
    pub info_set: Vec<usize>,
    pub t: usize,
}

#[derive(Clone, Copy, Debug)]
pub enum VerifyMode {
    Exhaustive,
    Hitting,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// A t-set no permutation moves out of the information set.
    Invalid { witness: Vec<usize> },
    /// Sampling found no failure; this never certifies validity.
    NoFailureFound,
}

/// The translated family {I·s⁻¹ : s ∈ S}: S is a valid PD-set iff no t-set
/// hits every member.
fn translated_family(n: usize, perms: &[Perm], info_set: &[usize]) -> Vec<Bitset> {
    perms
        .iter()
        .map(|s| {
            let inv = s.inverse();
            let mut b = Bitset::new(n);
            for &i in info_set {
                b.set(inv.apply(i));
            }
            b
        })
        .collect()
}

pub fn verify_pdset(
    n: usize,
    perms: &[Perm],
    info_set: &[usize],
    t: usize,
    mode: VerifyMode,
) -> Result<Verdict> {
    if perms.is_empty() {
        return Err(Error::Input("empty permutation set".into()));
    }
    if t == 0 {
        return Ok(Verdict::Valid);
    }
    let family = translated_family(n, perms, info_set);
    match mode {
        VerifyMode::Exhaustive => {
            let total = crate::action::binomial(n, t).unwrap_or(u128::MAX);
            if total > 100_000_000 {
                return Err(Error::Resource(format!(
                    "C({},{}) = {} t-sets exceed the exhaustive budget",
                    n, t, total
                )));
            }
            Ok(exhaustive_verdict(n, &family, t))
        }
        VerifyMode::Hitting => Ok(match min_hitting_set_upto(&family, t) {
            Some(witness) => Verdict::Invalid { witness },
            None => Verdict::Valid,
        }),
        VerifyMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let tset = sample_subset(&mut rng, n, t);
                if uncorrectable(&family, &tset) {
                    return Ok(Verdict::Invalid { witness: tset });
                }
            }
            Ok(Verdict::NoFailureFound)
        }
    }
}

fn uncorrectable(family: &[Bitset], tset: &[usize]) -> bool {
    family
        .iter()
        .all(|f| tset.iter().any(|&x| f.get(x)))
}

fn sample_subset(rng: &mut ChaCha8Rng, n: usize, t: usize) -> Vec<usize> {
    use rand::Rng;
    let mut out = Vec::with_capacity(t);
    while out.len() < t {
        let x = rng.gen_range(0..n);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out.sort_unstable();
    out
}

fn exhaustive_verdict(n: usize, family: &[Bitset], t: usize) -> Verdict {
    // parallel over the first element; the least witness wins for determinism
    let witness = (0..n)
        .into_par_iter()
        .filter_map(|first| {
            let mut tset = vec![first];
            let mut found: Option<Vec<usize>> = None;
            exhaustive_rec(n, family, t, &mut tset, &mut found);
            found
        })
        .min();
    match witness {
        Some(w) => Verdict::Invalid { witness: w },
        None => Verdict::Valid,
    }
}

fn exhaustive_rec(
    n: usize,
    family: &[Bitset],
    t: usize,
    tset: &mut Vec<usize>,
    found: &mut Option<Vec<usize>>,
) {
    if found.is_some() {
        return;
    }
    if tset.len() == t {
        if uncorrectable(family, tset) {
            *found = Some(tset.clone());
        }
        return;
    }
    let start = tset.last().unwrap() + 1;
    for x in start..n {
        tset.push(x);
        exhaustive_rec(n, family, t, tset, found);
        tset.pop();
        if found.is_some() {
            return;
        }
    }
}

/// Branch-and-bound for a hitting set of size ≤ t, or None if the minimum
/// hitting set is larger. Branches on an unhit set; prunes with a greedy
/// disjoint-packing lower bound.
fn min_hitting_set_upto(family: &[Bitset], t: usize) -> Option<Vec<usize>> {
    let mut chosen = Vec::new();
    hitting_rec(family, t, &mut chosen)
}

fn hitting_rec(family: &[Bitset], t: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
    let n = family.first().map_or(0, |f| f.len());
    let mut chosen_bits = Bitset::new(n);
    for &x in chosen.iter() {
        chosen_bits.set(x);
    }
    let unhit: Vec<&Bitset> = family
        .iter()
        .filter(|f| !f.intersects(&chosen_bits))
        .collect();
    if unhit.is_empty() {
        return Some(chosen.clone());
    }
    let remaining = t - chosen.len();
    if remaining == 0 {
        return None;
    }
    // packing bound: pairwise disjoint unhit sets each need their own point
    let mut packed = Bitset::new(n);
    let mut packing = 0usize;
    for f in &unhit {
        if !f.intersects(&packed) {
            packed.or_assign(f);
            packing += 1;
            if packing > remaining {
                return None;
            }
        }
    }
    let branch = unhit[0];
    for v in branch.iter_ones() {
        chosen.push(v);
        if let Some(w) = hitting_rec(family, t, chosen) {
            chosen.pop();
            return Some(w);
        }
        chosen.pop();
    }
    None
}

/// Randomized-greedy PD-set search over the group generated by `candidates`.
///
/// Coverage is scored exactly when C(n,t) is small, otherwise on a seeded
/// sample of t-sets (and every accepted set is still verified exactly with
/// the hitting-set test; a failure witness re-enters the scoring pool).
pub fn find_pdset(
    code: &LinearCode,
    info_set: &[usize],
    t: usize,
    candidates: &[Perm],
    target_size: usize,
    seed: u64,
) -> Result<PDSet> {
    let n = code.n;
    if info_set.len() != code.k {
        return Err(Error::Input("information set size differs from dimension".into()));
    }
    let gordon = gordon_bound(n, code.k, t)?;
    if (target_size as u128) < gordon {
        return Err(Error::Input(format!(
            "target size {} is below the Gordon bound {}",
            target_size, gordon
        )));
    }
    for c in candidates {
        if !is_code_automorphism(code, c)? {
            return Err(Error::Input(
                "a candidate permutation is not a code automorphism".into(),
            ));
        }
    }
    let group = PermGroup::from_generators(candidates.to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // scoring space: all t-sets exactly, or a seeded pool
    let exact = crate::action::binomial(n, t).map_or(false, |c| c <= 10_000_000);
    let mut pool: Vec<Vec<usize>> = if exact {
        let mut all = Vec::new();
        for s in crate::action::k_subsets_lex(n, t) {
            all.push(s.iter().map(|&x| x as usize).collect());
        }
        all
    } else {
        (0..1_000_000)
            .map(|_| sample_subset(&mut rng, n, t))
            .collect()
    };
    let mut covered = vec![false; pool.len()];
    let mut uncovered = pool.len();
    let mut chosen: Vec<Perm> = Vec::new();

    let info_bits = {
        let mut b = Bitset::new(n);
        for &i in info_set {
            b.set(i);
        }
        b
    };
    // T·s ∩ I = ∅ ⇔ T ∩ I·s⁻¹ = ∅; checking forward avoids inverses
    let covers_fast = |s: &Perm, tset: &[usize]| -> bool {
        tset.iter().all(|&x| !info_bits.get(s.apply(x)))
    };

    let mut stale_rounds = 0usize;
    while uncovered > 0 {
        if chosen.len() >= target_size {
            return Err(Error::Resource(format!(
                "no valid PD-set within target size {} ({} t-sets uncovered)",
                target_size, uncovered
            )));
        }
        // batch of candidates: the generators early on, then random elements
        let mut batch: Vec<Perm> = Vec::new();
        batch.push(Perm::identity(n));
        batch.extend(candidates.iter().cloned());
        for _ in 0..48 {
            batch.push(group.random_element(&mut rng));
        }
        let scored: Vec<(usize, usize)> = batch
            .par_iter()
            .enumerate()
            .map(|(bi, s)| {
                let new = pool
                    .iter()
                    .zip(&covered)
                    .filter(|(tset, &cov)| !cov && covers_fast(s, tset))
                    .count();
                (new, bi)
            })
            .collect();
        let &(best_new, best_idx) = scored
            .iter()
            .max_by_key(|&&(new, bi)| (new, std::cmp::Reverse(bi)))
            .unwrap();
        if best_new == 0 {
            stale_rounds += 1;
            if stale_rounds > 50 {
                return Err(Error::Resource(
                    "PD-set search stalled: no candidate covers new t-sets".into(),
                ));
            }
            continue;
        }
        stale_rounds = 0;
        let s = batch[best_idx].clone();
        for (tset, cov) in pool.iter().zip(covered.iter_mut()) {
            if !*cov && covers_fast(&s, tset) {
                *cov = true;
                uncovered -= 1;
            }
        }
        chosen.push(s);

        // exact verification once the pool is covered
        if uncovered == 0 {
            match verify_pdset(n, &chosen, info_set, t, VerifyMode::Hitting)? {
                Verdict::Valid => break,
                Verdict::Invalid { witness } => {
                    // exact check beat the sampled pool: learn the witness
                    pool.push(witness);
                    covered.push(false);
                    uncovered += 1;
                }
                Verdict::NoFailureFound => unreachable!(),
            }
        }
    }
    Ok(PDSet {
        perms: chosen,
        info_set: info_set.to_vec(),
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{code_from_matrix, is_code_automorphism, LinearCode};

    /// Cyclic [7,4,3] Hamming code: generator polynomial x³ + x + 1.
    fn cyclic_hamming() -> LinearCode {
        code_from_matrix(
            &[
                vec![1, 1, 0, 1, 0, 0, 0],
                vec![0, 1, 1, 0, 1, 0, 0],
                vec![0, 0, 1, 1, 0, 1, 0],
                vec![0, 0, 0, 1, 1, 0, 1],
            ],
            2,
        )
        .unwrap()
    }

    fn shift7() -> Perm {
        Perm::from_images(vec![1, 2, 3, 4, 5, 6, 0]).unwrap()
    }

    #[test]
    fn gordon_bound_values() {
        assert_eq!(gordon_bound(7, 4, 1).unwrap(), 3);
        assert_eq!(gordon_bound(55, 10, 4).unwrap(), 5);
        assert_eq!(gordon_bound(66, 10, 9).unwrap(), 15);
        assert_eq!(gordon_bound(330, 286, 2).unwrap(), 60);
        assert_eq!(gordon_bound(165, 120, 1).unwrap(), 4);
        assert_eq!(gordon_bound(330, 120, 3).unwrap(), 7);
        assert_eq!(gordon_bound(77, 20, 7).unwrap(), 19);
        assert_eq!(gordon_bound(1771, 1540, 1).unwrap(), 8);
        assert_eq!(error_capacity(3), 1);
        assert_eq!(error_capacity(10), 4);
    }

    #[test]
    fn found_pdset_verifies_in_every_mode() {
        let c = cyclic_hamming();
        let s = shift7();
        assert!(is_code_automorphism(&c, &s).unwrap());
        let pd = find_pdset(&c, &c.pivots.clone(), 1, &[s], 7, 11).unwrap();
        assert_eq!(pd.t, 1);
        assert_eq!(verify_pdset(c.n, &pd.perms, &pd.info_set, pd.t, VerifyMode::Exhaustive).unwrap(), Verdict::Valid);
        assert_eq!(verify_pdset(c.n, &pd.perms, &pd.info_set, pd.t, VerifyMode::Hitting).unwrap(), Verdict::Valid);
        assert_eq!(
            verify_pdset(c.n, &pd.perms, &pd.info_set, pd.t, VerifyMode::Sampled { samples: 200, seed: 3 }).unwrap(),
            Verdict::NoFailureFound
        );
    }

    #[test]
    fn invalid_sets_are_caught_with_a_witness() {
        let c = cyclic_hamming();
        // the identity alone never moves an error out of the information set
        let pd = PDSet {
            perms: vec![Perm::identity(7)],
            info_set: c.pivots.clone(),
            t: 1,
        };
        for mode in [VerifyMode::Exhaustive, VerifyMode::Hitting] {
            match verify_pdset(c.n, &pd.perms, &pd.info_set, pd.t, mode).unwrap() {
                Verdict::Invalid { witness } => {
                    assert_eq!(witness.len(), 1);
                    assert!(c.pivots.contains(&witness[0]));
                }
                v => panic!("expected Invalid, got {:?}", v),
            }
        }
    }

    #[test]
    fn exhaustive_and_hitting_agree_on_random_families() {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let c = cyclic_hamming();
        let s = shift7();
        let mut pool: Vec<Perm> = Vec::new();
        let mut acc = Perm::identity(7);
        for _ in 0..7 {
            pool.push(acc.clone());
            acc = acc.compose(&s);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for t in 1..=2 {
            for _ in 0..10 {
                let take = rng.gen_range(1..=pool.len());
                let mut perms = pool.clone();
                perms.shuffle(&mut rng);
                perms.truncate(take);
                let pd = PDSet { perms, info_set: c.pivots.clone(), t };
                let a = verify_pdset(c.n, &pd.perms, &pd.info_set, pd.t, VerifyMode::Exhaustive).unwrap();
                let b = verify_pdset(c.n, &pd.perms, &pd.info_set, pd.t, VerifyMode::Hitting).unwrap();
                assert_eq!(
                    matches!(a, Verdict::Valid),
                    matches!(b, Verdict::Valid),
                    "t={} family disagreement",
                    t
                );
            }
        }
    }
}
