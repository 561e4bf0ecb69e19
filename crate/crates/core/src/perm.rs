use crate::error::{Error, Result};

/// A permutation of {0..degree-1} stored as an image array.
///
/// External formats are 1-based; everything internal is 0-based.
/// `compose(a, b)` means "apply `a` first, then `b`", so points act on the
/// right: `x^(ab) = (x^a)^b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u32>,
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.img)
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            img: (0..degree as u32).collect(),
        }
    }

    /// Build from 0-based images, validating bijectivity.
    pub fn from_images(img: Vec<u32>) -> Result<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &x in &img {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::Input(format!(
                    "image array of length {} is not a bijection",
                    n
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { img })
    }

    /// Build from 1-based images (the external file convention).
    pub fn from_images_1based(img: &[u32]) -> Result<Self> {
        for &x in img {
            if x == 0 {
                return Err(Error::Input("1-based image contains 0".into()));
            }
        }
        Perm::from_images(img.iter().map(|&x| x - 1).collect())
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.img[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    pub fn images_1based(&self) -> Vec<u32> {
        self.img.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            img: self.img.iter().map(|&x| other.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u32; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            img[x as usize] = i as u32;
        }
        Perm { img }
    }

    /// Smallest point moved, if any.
    pub fn min_moved(&self) -> Option<usize> {
        self.img
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_left_then_right() {
        // a: 0→1→2→0, b: swap 0,1
        let a = Perm::from_images(vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(vec![1, 0, 2]).unwrap();
        let ab = a.compose(&b);
        // (a then b)(0) = b(a(0)) = b(1) = 0
        assert_eq!(ab.apply(0), 0);
        assert_eq!(ab.apply(1), 2);
        assert_eq!(ab.apply(2), 1);
    }

    #[test]
    fn inverse_round_trips() {
        let a = Perm::from_images(vec![3, 0, 2, 4, 1]).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(a.inverse().compose(&a).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3]).is_err());
        assert!(Perm::from_images_1based(&[0, 1]).is_err());
    }

    #[test]
    fn one_based_round_trip() {
        let a = Perm::from_images_1based(&[2, 3, 1]).unwrap();
        assert_eq!(a.images(), &[1, 2, 0]);
        assert_eq!(a.images_1based(), vec![2, 3, 1]);
    }

    #[test]
    fn min_moved() {
        assert_eq!(Perm::identity(4).min_moved(), None);
        assert_eq!(Perm::from_images(vec![0, 2, 1]).unwrap().min_moved(), Some(1));
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n as u32).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|im| Perm::from_images(im).unwrap())
    }

    proptest! {
        #[test]
        fn composition_is_associative(a in arb_perm(9), b in arb_perm(9), c in arb_perm(9)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn inverse_cancels(a in arb_perm(9)) {
            prop_assert!(a.compose(&a.inverse()).is_identity());
        }

        #[test]
        fn apply_matches_composition(a in arb_perm(9), b in arb_perm(9), x in 0usize..9) {
            prop_assert_eq!(a.compose(&b).apply(x), b.apply(a.apply(x)));
        }
    }
}
