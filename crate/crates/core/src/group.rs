use crate::error::{Error, Result};
use crate::perm::Perm;
use num_bigint::BigUint;
use rand::Rng;

/// One level of the stabilizer chain: the fundamental orbit of `point` under
/// the strong generators fixing all earlier base points, with transversal
/// representatives `rep[p]` mapping `point` to `p`.
struct Level {
    point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    rep: Vec<Option<Perm>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            rep: vec![None; degree],
        }
    }

    fn rebuild(&mut self, degree: usize) {
        self.orbit.clear();
        self.rep = vec![None; degree];
        self.rep[self.point] = Some(Perm::identity(degree));
        self.orbit.push(self.point);
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for g in &self.gens {
                let q = g.apply(p);
                if self.rep[q].is_none() {
                    let u = self.rep[p].as_ref().unwrap().compose(g);
                    self.rep[q] = Some(u);
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group with a base and strong generating set, built by the
/// deterministic Schreier–Sims algorithm. Orders are exact; membership is a
/// sift through the stabilizer chain.
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    pub fn from_generators(gens: Vec<Perm>) -> Result<Self> {
        Self::from_generators_with_base(gens, &[])
    }

    /// Build a BSGS whose base starts with `base_hint` (in order); useful when
    /// the caller needs pointwise stabilizers of a known point sequence.
    pub fn from_generators_with_base(gens: Vec<Perm>, base_hint: &[usize]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Input("empty generator list".into()));
        }
        let degree = gens[0].degree();
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(Error::Input("generators have mixed degrees".into()));
        }
        let mut grp = PermGroup {
            degree,
            gens: gens.clone(),
            levels: Vec::new(),
            order: BigUint::from(1u32),
        };
        let mut seen = vec![false; degree];
        for &pt in base_hint {
            if pt < degree && !seen[pt] {
                seen[pt] = true;
                grp.levels.push(Level::new(pt, degree));
            }
        }
        for g in gens {
            if g.is_identity() {
                continue;
            }
            grp.install(g);
        }
        let mut i = grp.levels.len();
        while i > 0 {
            i -= 1;
            grp.complete_level(i);
        }
        grp.order = grp
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product();
        Ok(grp)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            gens: vec![Perm::identity(degree)],
            levels: Vec::new(),
            order: BigUint::from(1u32),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u128(&self) -> Option<u128> {
        u128::try_from(&self.order).ok()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Generators of the pointwise stabilizer of the first `k` base points
    /// (the strong generators installed at level `k`). Empty for `k` past the
    /// end of the chain: the stabilizer is trivial.
    pub fn stabilizer_generators(&self, k: usize) -> &[Perm] {
        match self.levels.get(k) {
            Some(l) => &l.gens,
            None => &[],
        }
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn is_member(&self, g: &Perm) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::Input(format!(
                "degree mismatch: group degree {}, element degree {}",
                self.degree,
                g.degree()
            )));
        }
        let (res, _) = self.sift_from(0, g.clone());
        Ok(res.is_identity())
    }

    /// Sift `g` through levels `from..`; returns the residue and the first
    /// level index where it got stuck (levels.len() if it passed them all).
    fn sift_from(&self, from: usize, mut g: Perm) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let p = g.apply(level.point);
            match &level.rep[p] {
                None => return (g, l),
                Some(u) => g = g.compose(&u.inverse()),
            }
        }
        (g, self.levels.len())
    }

    /// Register a new strong generator: extend the base if it fixes every
    /// current base point, then add it to every level it stabilizes up to.
    fn install(&mut self, g: Perm) {
        debug_assert!(!g.is_identity());
        if self
            .levels
            .iter()
            .all(|l| g.apply(l.point) == l.point)
        {
            let pt = g.min_moved().expect("non-identity moves a point");
            self.levels.push(Level::new(pt, self.degree));
        }
        for l in 0..self.levels.len() {
            self.levels[l].gens.push(g.clone());
            if g.apply(self.levels[l].point) != self.levels[l].point {
                break;
            }
        }
    }

    /// Verify (and repair) level `i`: every Schreier generator of the level
    /// must sift to the identity through the deeper levels.
    fn complete_level(&mut self, i: usize) {
        self.levels[i].rebuild(self.degree);
        let mut oi = 0;
        loop {
            if oi >= self.levels[i].orbit.len() {
                break;
            }
            let p = self.levels[i].orbit[oi];
            let mut gi = 0;
            while gi < self.levels[i].gens.len() {
                let (schreier, ok) = {
                    let level = &self.levels[i];
                    let x = &level.gens[gi];
                    let u = level.rep[p].as_ref().unwrap();
                    let q = x.apply(p);
                    let v = level.rep[q].as_ref().unwrap();
                    let s = u.compose(x).compose(&v.inverse());
                    let ok = s.is_identity();
                    (s, ok)
                };
                if !ok {
                    let (res, j) = self.sift_from(i + 1, schreier);
                    if !res.is_identity() {
                        self.install_at(res, i + 1);
                        let upto = self.levels.len();
                        let mut l = upto;
                        while l > i + 1 {
                            l -= 1;
                            self.complete_level(l);
                        }
                    }
                    let _ = j;
                }
                gi += 1;
            }
            oi += 1;
        }
    }

    /// Like `install`, but the generator is already known to fix the base
    /// points of levels `< from`; only levels `>= from` receive it.
    fn install_at(&mut self, g: Perm, from: usize) {
        if self
            .levels
            .iter()
            .skip(from)
            .all(|l| g.apply(l.point) == l.point)
        {
            let pt = g.min_moved().expect("non-identity moves a point");
            self.levels.push(Level::new(pt, self.degree));
        }
        for l in from..self.levels.len() {
            self.levels[l].gens.push(g.clone());
            if g.apply(self.levels[l].point) != self.levels[l].point {
                break;
            }
        }
    }

    /// Uniformly random element: one random transversal representative per
    /// level, composed deepest level first.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for level in self.levels.iter().rev() {
            let p = level.orbit[rng.gen_range(0..level.orbit.len())];
            acc = acc.compose(level.rep[p].as_ref().unwrap());
        }
        acc
    }

    /// Stream every element exactly once (transversal products, deepest level
    /// first). Errors if the order exceeds `cap`.
    pub fn elements(&self, cap: u128) -> Result<ElementsIter<'_>> {
        match self.order_u128() {
            Some(o) if o <= cap => Ok(ElementsIter {
                group: self,
                idx: vec![0; self.levels.len()],
                done: false,
            }),
            _ => Err(Error::Resource(format!(
                "group order {} exceeds enumeration cap {}",
                self.order, cap
            ))),
        }
    }
}

pub struct ElementsIter<'a> {
    group: &'a PermGroup,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for ElementsIter<'_> {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        if self.done {
            return None;
        }
        let mut acc = Perm::identity(self.group.degree);
        for (l, level) in self.group.levels.iter().enumerate().rev() {
            let p = level.orbit[self.idx[l]];
            acc = acc.compose(level.rep[p].as_ref().unwrap());
        }
        // odometer increment
        let mut carry = true;
        for (l, level) in self.group.levels.iter().enumerate() {
            if carry {
                self.idx[l] += 1;
                if self.idx[l] == level.orbit.len() {
                    self.idx[l] = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            self.done = true;
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn s4() -> Vec<Perm> {
        vec![
            Perm::from_images(vec![1, 0, 2, 3]).unwrap(),
            Perm::from_images(vec![1, 2, 3, 0]).unwrap(),
        ]
    }

    /// Brute-force closure of a generating set, as an independent oracle.
    fn closure(gens: &[Perm]) -> BTreeSet<Vec<u32>> {
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut queue: Vec<Perm> = vec![Perm::identity(gens[0].degree())];
        seen.insert(queue[0].images().to_vec());
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.compose(g);
                if seen.insert(y.images().to_vec()) {
                    queue.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn s4_order_and_elements_match_closure() {
        let gens = s4();
        let grp = PermGroup::from_generators(gens.clone()).unwrap();
        assert_eq!(grp.order_u128(), Some(24));
        let brute = closure(&gens);
        let streamed: BTreeSet<Vec<u32>> = grp
            .elements(1000)
            .unwrap()
            .map(|p| p.images().to_vec())
            .collect();
        assert_eq!(streamed.len(), 24);
        assert_eq!(streamed, brute);
    }

    #[test]
    fn membership() {
        let grp = PermGroup::from_generators(vec![
            // A4 = even permutations of 4 points
            Perm::from_images(vec![1, 2, 0, 3]).unwrap(),
            Perm::from_images(vec![1, 0, 3, 2]).unwrap(),
        ])
        .unwrap();
        assert_eq!(grp.order_u128(), Some(12));
        assert!(grp.is_member(&Perm::identity(4)).unwrap());
        assert!(grp.is_member(&Perm::from_images(vec![2, 3, 0, 1]).unwrap()).unwrap());
        // a transposition is odd, hence outside A4
        assert!(!grp.is_member(&Perm::from_images(vec![1, 0, 2, 3]).unwrap()).unwrap());
    }

    #[test]
    fn stabilizer_generators_generate_the_point_stabilizer() {
        let base = [0usize, 1];
        let grp = PermGroup::from_generators_with_base(s4(), &base).unwrap();
        assert_eq!(&grp.base()[..2], &base);
        for k in 0..=2 {
            let brute: BTreeSet<Vec<u32>> = closure(&s4())
                .into_iter()
                .filter(|im| (0..k).all(|i| im[base[i]] as usize == base[i]))
                .collect();
            let gens = grp.stabilizer_generators(k);
            let sub: BTreeSet<Vec<u32>> = if gens.is_empty() {
                std::iter::once(Perm::identity(4).images().to_vec()).collect()
            } else {
                closure(gens)
            };
            assert_eq!(sub, brute, "stabilizer of first {} base points", k);
        }
    }

    #[test]
    fn random_elements_are_members() {
        let grp = PermGroup::from_generators(s4()).unwrap();
        let mut rng = rand::rngs::mock::StepRng::new(7, 13);
        for _ in 0..20 {
            let g = grp.random_element(&mut rng);
            assert!(grp.is_member(&g).unwrap());
        }
    }
}
