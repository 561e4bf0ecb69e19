use crate::bits::{words_for, Bitset};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::group::PermGroup;
use crate::perm::Perm;
use num_bigint::BigUint;
use std::collections::HashMap;

/// An ordered partition of the vertex set: a list of disjoint cells.
pub type Cells = Vec<Vec<u32>>;

pub fn unit_partition(n: usize) -> Cells {
    vec![(0..n as u32).collect()]
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    // splitmix64 step folded into a running hash
    let mut z = h ^ x.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Coarsest equitable refinement of `cells`, with a trace hash that depends
/// only on the isomorphism-invariant split history (splitter position, cell
/// position, multiset of neighbour counts). Subcells are ordered by count.
pub fn refine(g: &Graph, mut cells: Cells) -> (Cells, u64) {
    let mut h = 0xcbf29ce484222325u64;
    loop {
        let mut changed = false;
        let splitters: Vec<Bitset> = cells
            .iter()
            .map(|c| {
                let mut b = Bitset::new(g.n);
                for &v in c {
                    b.set(v as usize);
                }
                b
            })
            .collect();
        for (si, s) in splitters.iter().enumerate() {
            let mut ci = 0;
            while ci < cells.len() {
                if cells[ci].len() <= 1 {
                    ci += 1;
                    continue;
                }
                let counts: Vec<usize> = cells[ci]
                    .iter()
                    .map(|&v| g.rows[v as usize].and_count(s))
                    .collect();
                if counts.iter().all(|&c| c == counts[0]) {
                    ci += 1;
                    continue;
                }
                // split by count, ascending
                let mut order: Vec<usize> = (0..counts.len()).collect();
                order.sort_by_key(|&i| counts[i]);
                let cell = std::mem::take(&mut cells[ci]);
                let mut groups: Vec<Vec<u32>> = Vec::new();
                let mut last = usize::MAX;
                for &i in &order {
                    if counts[i] != last {
                        last = counts[i];
                        groups.push(Vec::new());
                        h = mix(h, ((si as u64) << 40) ^ ((ci as u64) << 20) ^ last as u64);
                    }
                    groups.last_mut().unwrap().push(cell[i]);
                }
                for grp in &groups {
                    h = mix(h, grp.len() as u64);
                }
                let tail = cells.split_off(ci + 1);
                cells.pop();
                cells.extend(groups);
                let advance = cells.len() - ci;
                cells.extend(tail);
                changed = true;
                ci += advance;
            }
        }
        if !changed {
            break;
        }
    }
    for c in &cells {
        h = mix(h, c.len() as u64);
    }
    (cells, h)
}

fn individualize(cells: &Cells, target: usize, v: u32) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (i, c) in cells.iter().enumerate() {
        if i == target {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&u| u != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    out
}

fn target_cell(cells: &Cells) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, c) in cells.iter().enumerate() {
        if c.len() > 1 && best.map_or(true, |(s, _)| c.len() < s) {
            best = Some((c.len(), i));
        }
    }
    best.map(|(_, i)| i)
}

pub fn is_automorphism(g: &Graph, p: &Perm) -> bool {
    if p.degree() != g.n {
        return false;
    }
    for u in 0..g.n {
        let pu = p.apply(u);
        for v in g.rows[u].iter_ones() {
            if !g.has_edge(pu, p.apply(v)) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 5_000_000 }
    }
}

pub struct AutResult {
    pub generators: Vec<Perm>,
    pub order: BigUint,
    /// Maps input vertex → canonical position.
    pub canonical_labeling: Perm,
}

struct Leaf {
    trace: Vec<u64>,
    cert: Vec<u64>,
    lab: Vec<u32>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    nodes: u64,
    max_nodes: u64,
    first: Option<Leaf>,
    best: Option<Leaf>,
    auts: Vec<Perm>,
    auts_inv: Vec<Perm>,
    /// group generated by auts so far, with the first leaf's path as base so
    /// pointwise stabilizers along that path are available for pruning
    aut_group: Option<PermGroup>,
    first_path: Vec<usize>,
    /// cert hash → labeling of the first leaf with that certificate; repeat
    /// hits yield (verified) automorphisms.
    leaf_store: HashMap<u128, Vec<u32>>,
    path_trace: Vec<u64>,
    path_verts: Vec<usize>,
    /// pending backjump: unwind the recursion to this depth after a leaf
    /// proved equivalent to an already-explored one
    unwind_to: Option<usize>,
}

fn common_prefix_len(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn cert_of(g: &Graph, lab: &[u32]) -> Vec<u64> {
    let n = g.n;
    let w = words_for(n);
    let mut cert = vec![0u64; n * w];
    for u in 0..n {
        let pu = lab[u] as usize;
        for v in g.rows[u].iter_ones() {
            let pv = lab[v] as usize;
            cert[pu * w + (pv >> 6)] |= 1u64 << (pv & 63);
        }
    }
    cert
}

fn cert_hash(cert: &[u64]) -> u128 {
    let mut a = 0x6a09e667f3bcc908u64;
    let mut b = 0xbb67ae8584caa73bu64;
    for &x in cert {
        a = mix(a, x);
        b = mix(b, x ^ 0x3c6ef372fe94f82bu64);
    }
    ((a as u128) << 64) | b as u128
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, budget: SearchBudget) -> Self {
        Search {
            g,
            nodes: 0,
            max_nodes: budget.max_nodes,
            first: None,
            best: None,
            auts: Vec::new(),
            auts_inv: Vec::new(),
            aut_group: None,
            first_path: Vec::new(),
            leaf_store: HashMap::new(),
            path_trace: Vec::new(),
            path_verts: Vec::new(),
            unwind_to: None,
        }
    }

    /// Lexicographic comparison of the current path trace against a leaf's.
    fn cmp_prefix(path: &[u64], leaf: &Leaf) -> std::cmp::Ordering {
        // Only the common prefix is comparable: equal prefixes must never
        // prune (the leaf tuple comparison settles ties at the bottom).
        let l = path.len().min(leaf.trace.len());
        path[..l].cmp(&leaf.trace[..l])
    }

    fn explore(&mut self, cells: Cells) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Resource(format!(
                "refinement search exceeded {} nodes",
                self.max_nodes
            )));
        }
        let (cells, t) = refine(self.g, cells);
        self.path_trace.push(t);

        let cand_first = match &self.first {
            None => true,
            Some(f) => {
                let l = self.path_trace.len().min(f.trace.len());
                self.path_trace[..l] == f.trace[..l]
            }
        };
        let cmp_best = self
            .best
            .as_ref()
            .map(|b| Self::cmp_prefix(&self.path_trace, b))
            .unwrap_or(std::cmp::Ordering::Less);
        if cmp_best == std::cmp::Ordering::Greater && !cand_first {
            self.path_trace.pop();
            return Ok(());
        }

        match target_cell(&cells) {
            None => {
                // discrete: a leaf
                let mut lab = vec![0u32; self.g.n];
                for (pos, c) in cells.iter().enumerate() {
                    lab[c[0] as usize] = pos as u32;
                }
                let cert = cert_of(self.g, &lab);
                let h = cert_hash(&cert);
                if let Some(prev) = self.leaf_store.get(&h) {
                    // candidate automorphism u → prev⁻¹(lab(u))
                    let mut inv_prev = vec![0u32; self.g.n];
                    for (u, &p) in prev.iter().enumerate() {
                        inv_prev[p as usize] = u as u32;
                    }
                    let img: Vec<u32> = lab.iter().map(|&p| inv_prev[p as usize]).collect();
                    if let Ok(gamma) = Perm::from_images(img) {
                        if !gamma.is_identity() && is_automorphism(self.g, &gamma) {
                            self.record_automorphism(gamma)?;
                            // this subtree is an image of an explored one:
                            // backjump to where it can still matter
                            let t = common_prefix_len(&self.path_verts, &self.first_path).max(
                                self.best
                                    .as_ref()
                                    .map_or(0, |b| common_prefix_len(&self.path_verts, &b.path)),
                            );
                            self.unwind_to = Some(t);
                        }
                    }
                } else if self.leaf_store.len() < 100_000 {
                    self.leaf_store.insert(h, lab.clone());
                }
                let leaf = Leaf {
                    trace: self.path_trace.clone(),
                    cert,
                    lab,
                    path: self.path_verts.clone(),
                };
                let better = match &self.best {
                    None => true,
                    Some(b) => (&leaf.trace, &leaf.cert) < (&b.trace, &b.cert),
                };
                if better {
                    self.best = Some(Leaf {
                        trace: leaf.trace.clone(),
                        cert: leaf.cert.clone(),
                        lab: leaf.lab.clone(),
                        path: leaf.path.clone(),
                    });
                }
                if self.first.is_none() {
                    self.first = Some(leaf);
                    self.first_path = self.path_verts.clone();
                }
            }
            Some(target) => {
                let cell = cells[target].clone();
                let mut tried: Vec<u32> = Vec::new();
                for &v in &cell {
                    if self.in_tried_orbit(v, &tried) {
                        continue;
                    }
                    tried.push(v);
                    let child = individualize(&cells, target, v);
                    self.path_verts.push(v as usize);
                    let r = self.explore(child);
                    self.path_verts.pop();
                    r?;
                    if let Some(t) = self.unwind_to {
                        if t < self.path_verts.len() {
                            // still unwinding past this node
                            self.path_trace.pop();
                            return Ok(());
                        }
                        self.unwind_to = None;
                    }
                }
            }
        }
        self.path_trace.pop();
        Ok(())
    }

    /// Keep only generators that grow the group; redundant automorphisms
    /// would bloat every orbit computation in `in_tried_orbit`.
    fn record_automorphism(&mut self, gamma: Perm) -> Result<()> {
        if let Some(grp) = &self.aut_group {
            if grp.is_member(&gamma)? {
                return Ok(());
            }
        }
        self.auts_inv.push(gamma.inverse());
        self.auts.push(gamma);
        self.aut_group = Some(PermGroup::from_generators_with_base(
            self.auts.clone(),
            &self.first_path,
        )?);
        Ok(())
    }

    /// Is v in the orbit of an already-tried vertex under the pointwise
    /// stabilizer of the current individualization path? Exact along the
    /// first path (the group's base); elsewhere a generator-filter heuristic.
    fn in_tried_orbit(&self, v: u32, tried: &[u32]) -> bool {
        if tried.is_empty() || self.auts.is_empty() {
            return false;
        }
        let mut fixing: Vec<(Perm, Perm)> = Vec::new();
        let on_base = self.path_verts.len() <= self.first_path.len()
            && self.path_verts == self.first_path[..self.path_verts.len()];
        if on_base {
            let grp = self.aut_group.as_ref().unwrap();
            for g in grp.stabilizer_generators(self.path_verts.len()) {
                fixing.push((g.clone(), g.inverse()));
            }
        } else {
            for (a, ai) in self.auts.iter().zip(&self.auts_inv) {
                if self.path_verts.iter().all(|&p| a.apply(p) == p) {
                    fixing.push((a.clone(), ai.clone()));
                }
            }
        }
        if fixing.is_empty() {
            return false;
        }
        // orbit of v under the fixing generators
        let n = self.g.n;
        let mut seen = Bitset::new(n);
        let mut stack = vec![v as usize];
        seen.set(v as usize);
        while let Some(p) = stack.pop() {
            for (a, ai) in &fixing {
                for q in [a.apply(p), ai.apply(p)] {
                    if !seen.get(q) {
                        seen.set(q);
                        stack.push(q);
                    }
                }
            }
        }
        tried.iter().any(|&u| seen.get(u as usize))
    }
}

/// Automorphism group of a (possibly vertex-coloured) graph by
/// individualization–refinement with orbit and invariant pruning.
pub fn automorphism_group_colored(
    g: &Graph,
    initial: Cells,
    budget: SearchBudget,
) -> Result<AutResult> {
    let mut search = Search::new(g, budget);
    search.explore(initial)?;
    let best = search
        .best
        .take()
        .ok_or_else(|| Error::Internal("no leaf reached".into()))?;
    let order = search
        .aut_group
        .as_ref()
        .map(|g| g.order().clone())
        .unwrap_or_else(|| BigUint::from(1u32));
    let generators = search.auts;
    let lab = Perm::from_images(best.lab)?;
    Ok(AutResult {
        generators,
        order,
        canonical_labeling: lab,
    })
}

pub fn automorphism_group(g: &Graph, budget: SearchBudget) -> Result<AutResult> {
    automorphism_group_colored(g, unit_partition(g.n), budget)
}

/// Canonical certificate: the graph6 string of the canonically relabeled
/// graph. Equal for isomorphic inputs, relabel-invariant.
pub fn canonical_form(g: &Graph) -> Result<String> {
    canonical_form_budgeted(g, SearchBudget::default())
}

pub fn canonical_form_budgeted(g: &Graph, budget: SearchBudget) -> Result<String> {
    if g.n > 1024 {
        return Err(Error::Resource(format!(
            "canonical form capped at 1024 vertices, got {}",
            g.n
        )));
    }
    let res = automorphism_group(g, budget)?;
    let lab: Vec<usize> = (0..g.n).map(|u| res.canonical_labeling.apply(u)).collect();
    g.relabeled(&lab).to_graph6()
}

/// Isomorphism with an explicit witness mapping (g1 vertex → g2 vertex),
/// found by simultaneous refinement with matched traces. The witness is
/// verified edge-by-edge before being returned.
pub fn are_isomorphic(g1: &Graph, g2: &Graph, budget: SearchBudget) -> Result<Option<Vec<usize>>> {
    if g1.n != g2.n {
        return Ok(None);
    }
    if g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let mut nodes = 0u64;
    let r = iso_rec(
        g1,
        g2,
        unit_partition(g1.n),
        unit_partition(g2.n),
        &mut nodes,
        budget.max_nodes,
    )?;
    if let Some(m) = &r {
        for u in 0..g1.n {
            for v in g1.rows[u].iter_ones() {
                if !g2.has_edge(m[u], m[v]) {
                    return Err(Error::Internal("isomorphism witness failed verification".into()));
                }
            }
        }
    }
    Ok(r)
}

fn iso_rec(
    g1: &Graph,
    g2: &Graph,
    cells1: Cells,
    cells2: Cells,
    nodes: &mut u64,
    max_nodes: u64,
) -> Result<Option<Vec<usize>>> {
    *nodes += 1;
    if *nodes > max_nodes {
        return Err(Error::Resource(format!(
            "isomorphism search exceeded {} nodes",
            max_nodes
        )));
    }
    let (cells1, t1) = refine(g1, cells1);
    let (cells2, t2) = refine(g2, cells2);
    if t1 != t2 {
        return Ok(None);
    }
    if cells1.len() != cells2.len()
        || cells1
            .iter()
            .zip(&cells2)
            .any(|(a, b)| a.len() != b.len())
    {
        return Ok(None);
    }
    match target_cell(&cells1) {
        None => {
            let mut m = vec![0usize; g1.n];
            for (c1, c2) in cells1.iter().zip(&cells2) {
                m[c1[0] as usize] = c2[0] as usize;
            }
            // full check here; the caller re-verifies the returned witness
            for u in 0..g1.n {
                for v in g1.rows[u].iter_ones() {
                    if !g2.has_edge(m[u], m[v]) {
                        return Ok(None);
                    }
                }
            }
            Ok(Some(m))
        }
        Some(target) => {
            let v = cells1[target][0];
            let cells1v = individualize(&cells1, target, v);
            for &w in &cells2[target] {
                let cells2w = individualize(&cells2, target, w);
                if let Some(m) = iso_rec(g1, g2, cells1v.clone(), cells2w, nodes, max_nodes)? {
                    return Ok(Some(m));
                }
            }
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn petersen() -> Graph {
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
    fn automorphism_group_orders() {
        let budget = SearchBudget::default();
        let res = automorphism_group(&petersen(), budget).unwrap();
        assert_eq!(res.order, 120u32.into());
        for g in &res.generators {
            assert!(is_automorphism(&petersen(), g));
        }
        assert_eq!(automorphism_group(&cycle(5), budget).unwrap().order, 10u32.into());
        // K_{3,3}: wreath-type group of order 2 * 3! * 3! = 72
        let k33 = Graph::from_edges(6, &[(0,3),(0,4),(0,5),(1,3),(1,4),(1,5),(2,3),(2,4),(2,5)]);
        assert_eq!(automorphism_group(&k33, budget).unwrap().order, 72u32.into());
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let g = petersen();
        let base = canonical_form(&g).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..25 {
            let mut perm: Vec<usize> = (0..g.n).collect();
            perm.shuffle(&mut rng);
            let h = g.relabeled(&perm);
            assert_eq!(canonical_form(&h).unwrap(), base);
        }
        // and it separates non-isomorphic graphs of the same degree sequence
        assert_ne!(canonical_form(&cycle(6)).unwrap(), {
            let two_triangles = Graph::from_edges(6, &[(0,1),(1,2),(2,0),(3,4),(4,5),(5,3)]);
            canonical_form(&two_triangles).unwrap()
        });
    }

    #[test]
    fn isomorphism_witnesses() {
        let budget = SearchBudget::default();
        let g = petersen();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut perm: Vec<usize> = (0..g.n).collect();
        perm.shuffle(&mut rng);
        let h = g.relabeled(&perm);
        let w = are_isomorphic(&g, &h, budget).unwrap().expect("isomorphic");
        for u in 0..g.n {
            for v in 0..g.n {
                assert_eq!(g.has_edge(u, v), h.has_edge(w[u], w[v]));
            }
        }
        let two_triangles = Graph::from_edges(6, &[(0,1),(1,2),(2,0),(3,4),(4,5),(5,3)]);
        assert!(are_isomorphic(&cycle(6), &two_triangles, budget).unwrap().is_none());
    }
}
