/// Fixed-size bit set over u64 words. Used for adjacency rows, vertex sets,
/// design blocks and GF(2) codewords, so the hot operations (and-popcount,
/// or-assign, iteration) stay word-parallel.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitset {
    n: usize,
    w: Vec<u64>,
}

pub fn words_for(n: usize) -> usize {
    (n + 63) / 64
}

impl Bitset {
    pub fn new(n: usize) -> Self {
        Bitset {
            n,
            w: vec![0u64; words_for(n)],
        }
    }

    pub fn from_words(n: usize, w: Vec<u64>) -> Self {
        debug_assert_eq!(w.len(), words_for(n));
        Bitset { n, w }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.w
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.w[i >> 6] >> (i & 63)) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.w[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        self.w[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.w[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn zero(&mut self) {
        self.w.iter_mut().for_each(|x| *x = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.w.iter().map(|x| x.count_ones() as usize).sum()
    }

    pub fn and_count(&self, other: &Bitset) -> usize {
        self.w
            .iter()
            .zip(&other.w)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &Bitset) -> bool {
        self.w.iter().zip(&other.w).any(|(a, b)| a & b != 0)
    }

    pub fn or_assign(&mut self, other: &Bitset) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a |= b;
        }
    }

    pub fn and_assign(&mut self, other: &Bitset) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a &= b;
        }
    }

    pub fn xor_assign(&mut self, other: &Bitset) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a ^= b;
        }
    }

    pub fn andnot_assign(&mut self, other: &Bitset) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a &= !b;
        }
    }

    /// Complement within the universe {0..n-1}.
    pub fn complemented(&self) -> Bitset {
        let mut out = self.clone();
        for x in out.w.iter_mut() {
            *x = !*x;
        }
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let rem = self.n & 63;
        if rem != 0 {
            if let Some(last) = self.w.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn iter_ones(&self) -> OnesIter<'_> {
        OnesIter {
            words: &self.w,
            word_idx: 0,
            cur: self.w.first().copied().unwrap_or(0),
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        for (i, &x) in self.w.iter().enumerate() {
            if x != 0 {
                return Some(i * 64 + x.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl std::fmt::Debug for Bitset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

pub struct OnesIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    cur: u64,
}

impl Iterator for OnesIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.word_idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops_match_a_boolean_model() {
        let n = 131; // crosses two word boundaries
        let mut b = Bitset::new(n);
        let mut model = vec![false; n];
        for i in [0, 1, 63, 64, 65, 127, 128, 130] {
            b.set(i);
            model[i] = true;
        }
        b.clear(64);
        model[64] = false;
        b.flip(65);
        model[65] = !model[65];
        for i in 0..n {
            assert_eq!(b.get(i), model[i], "bit {}", i);
        }
        assert_eq!(b.count_ones(), model.iter().filter(|&&x| x).count());
        let ones: Vec<usize> = b.iter_ones().collect();
        let expect: Vec<usize> = (0..n).filter(|&i| model[i]).collect();
        assert_eq!(ones, expect);
        assert_eq!(b.first_one(), expect.first().copied());
    }

    #[test]
    fn complement_masks_the_tail() {
        let mut b = Bitset::new(70);
        b.set(3);
        let c = b.complemented();
        assert_eq!(c.count_ones(), 69);
        assert!(!c.get(3));
        assert!(c.get(69));
        // no stray bits past n
        assert_eq!(c.words()[1] >> 6, 0);
    }

    #[test]
    fn word_ops() {
        let mut a = Bitset::new(100);
        let mut b = Bitset::new(100);
        a.set(5);
        a.set(80);
        b.set(80);
        b.set(99);
        assert_eq!(a.and_count(&b), 1);
        assert!(a.intersects(&b));
        let mut o = a.clone();
        o.or_assign(&b);
        assert_eq!(o.count_ones(), 3);
        let mut x = a.clone();
        x.xor_assign(&b);
        assert_eq!(x.count_ones(), 2);
        let mut d = a.clone();
        d.andnot_assign(&b);
        assert_eq!(d.count_ones(), 1);
        assert!(d.get(5));
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ops_match_the_boolean_model(
            xs in proptest::collection::vec(any::<bool>(), 100),
            ys in proptest::collection::vec(any::<bool>(), 100),
        ) {
            let n = xs.len();
            let mut a = Bitset::new(n);
            let mut b = Bitset::new(n);
            for i in 0..n {
                if xs[i] { a.set(i); }
                if ys[i] { b.set(i); }
            }
            prop_assert_eq!(a.count_ones(), xs.iter().filter(|&&x| x).count());
            prop_assert_eq!(
                a.and_count(&b),
                (0..n).filter(|&i| xs[i] && ys[i]).count()
            );
            let mut o = a.clone();
            o.or_assign(&b);
            let mut x = a.clone();
            x.xor_assign(&b);
            for i in 0..n {
                prop_assert_eq!(o.get(i), xs[i] | ys[i]);
                prop_assert_eq!(x.get(i), xs[i] ^ ys[i]);
            }
            let c = a.complemented();
            prop_assert_eq!(c.count_ones(), n - a.count_ones());
        }
    }
}
