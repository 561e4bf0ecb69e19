use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionSource {
    Coset,
    KSubset,
    Natural,
}

/// A transitive action of a group on {0..degree-1}, given by the images of
/// the original generators.
pub struct PermAction {
    pub degree: usize,
    pub gens: Vec<Perm>,
    pub source: ActionSource,
    /// Human-readable tag carried into reports ("m11/h3", "m12 3-subsets", ...).
    pub label: String,
}

impl PermAction {
    pub fn natural(group: &PermGroup, label: &str) -> PermAction {
        PermAction {
            degree: group.degree(),
            gens: group.generators().to_vec(),
            source: ActionSource::Natural,
            label: label.to_string(),
        }
    }

    pub fn is_transitive(&self) -> bool {
        orbit_count(self.degree, &self.gens) == 1
    }
}

fn orbit_count(degree: usize, gens: &[Perm]) -> usize {
    let mut seen = vec![false; degree];
    let mut count = 0;
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            for g in gens {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    count
}

/// Orbits of a generator set on {0..degree-1}, each sorted ascending.
pub fn point_orbits(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut orbits = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            for g in gens {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// The action of `g` on the right cosets of `h` in `g`, by breadth-first
/// enumeration from the coset H·1.
///
/// Coset equality Hg₁ = Hg₂ is g₁g₂⁻¹ ∈ H; to avoid O(N²) sifts, cosets are
/// bucketed by an H-invariant signature first (the sorted images of each
/// H-orbit under the representative), and sifting only resolves collisions
/// within a bucket.
pub fn coset_action(g: &PermGroup, h: &PermGroup, max_index: usize, label: &str) -> Result<PermAction> {
    if g.degree() != h.degree() {
        return Err(Error::Input("subgroup degree differs from group degree".into()));
    }
    for x in h.generators() {
        if !g.is_member(x)? {
            return Err(Error::Input(
                "H is not a subgroup: a generator fails membership in G".into(),
            ));
        }
    }
    let (index, rem) = {
        let go = g.order();
        let ho = h.order();
        ((go / ho).clone(), go % ho)
    };
    if rem != num_bigint::BigUint::from(0u32) {
        return Err(Error::Internal("|H| does not divide |G|".into()));
    }
    let index = usize::try_from(&index)
        .map_err(|_| Error::Resource("coset index overflows usize".into()))?;
    if index > max_index {
        return Err(Error::Resource(format!(
            "index {} exceeds limit {}",
            index, max_index
        )));
    }

    let h_orbits = point_orbits(h.degree(), h.generators());
    let signature = |rep: &Perm| -> Vec<u32> {
        let mut sig = Vec::with_capacity(rep.degree());
        for orbit in &h_orbits {
            let mut imgs: Vec<u32> = orbit.iter().map(|&p| rep.apply(p) as u32).collect();
            imgs.sort_unstable();
            sig.extend(imgs);
        }
        sig
    };

    let mut reps: Vec<Perm> = vec![Perm::identity(g.degree())];
    let mut buckets: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    buckets.insert(signature(&reps[0]), vec![0]);

    let lookup = |reps: &[Perm],
                  buckets: &HashMap<Vec<u32>, Vec<usize>>,
                  cand: &Perm,
                  sig: &Vec<u32>|
     -> Result<Option<usize>> {
        if let Some(ids) = buckets.get(sig) {
            for &i in ids {
                let q = cand.compose(&reps[i].inverse());
                if h.is_member(&q)? {
                    return Ok(Some(i));
                }
            }
        }
        Ok(None)
    };

    // BFS over cosets; record the image of every coset under every generator.
    let gens = g.generators().to_vec();
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut frontier = 0usize;
    while frontier < reps.len() {
        let rep = reps[frontier].clone();
        for (gi, x) in gens.iter().enumerate() {
            let cand = rep.compose(x);
            let sig = signature(&cand);
            let idx = match lookup(&reps, &buckets, &cand, &sig)? {
                Some(i) => i,
                None => {
                    let i = reps.len();
                    if i >= max_index {
                        return Err(Error::Resource(format!(
                            "coset enumeration exceeded limit {}",
                            max_index
                        )));
                    }
                    reps.push(cand);
                    buckets.entry(sig).or_default().push(i);
                    i
                }
            };
            images[gi].push(idx as u32);
        }
        frontier += 1;
    }
    if reps.len() != index {
        return Err(Error::Internal(format!(
            "coset enumeration found {} cosets, expected index {}",
            reps.len(),
            index
        )));
    }
    let gens_on_cosets = images
        .into_iter()
        .map(Perm::from_images)
        .collect::<Result<Vec<_>>>()?;
    Ok(PermAction {
        degree: index,
        gens: gens_on_cosets,
        source: ActionSource::Coset,
        label: label.to_string(),
    })
}

/// The action of `g` on k-subsets of {0..degree-1}, in lexicographic order of
/// the sorted subsets. Errors when the result is intransitive.
pub fn ksubset_action(g: &PermGroup, k: usize, max_degree: usize, label: &str) -> Result<PermAction> {
    let n = g.degree();
    if k == 0 || k > n {
        return Err(Error::Input(format!("k = {} out of range 1..={}", k, n)));
    }
    let count = binomial(n, k)
        .ok_or_else(|| Error::Resource("C(n,k) overflows".into()))?;
    if count > max_degree as u128 {
        return Err(Error::Resource(format!(
            "C({},{}) = {} exceeds degree limit {}",
            n, k, count, max_degree
        )));
    }
    let subsets = k_subsets_lex(n, k);
    let mut index: HashMap<Vec<u32>, u32> = HashMap::with_capacity(subsets.len());
    for (i, s) in subsets.iter().enumerate() {
        index.insert(s.clone(), i as u32);
    }
    let mut gens = Vec::with_capacity(g.generators().len());
    for x in g.generators() {
        let mut img = Vec::with_capacity(subsets.len());
        for s in &subsets {
            let mut t: Vec<u32> = s.iter().map(|&p| x.apply(p as usize) as u32).collect();
            t.sort_unstable();
            img.push(index[&t]);
        }
        gens.push(Perm::from_images(img)?);
    }
    let action = PermAction {
        degree: subsets.len(),
        gens,
        source: ActionSource::KSubset,
        label: label.to_string(),
    };
    let orbits = orbit_count(action.degree, &action.gens);
    if orbits != 1 {
        return Err(Error::Input(format!(
            "k-subset action is intransitive ({} orbits): the group is not {}-homogeneous",
            orbits, k
        )));
    }
    Ok(action)
}

pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

pub fn k_subsets_lex(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(cur.clone());
        // next combination in lex order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - k + i) as u32 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
