//! Permutations of `{0, .., d-1}` used as sheet transitions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of 1..={0}: {1:?}")]
    NotBijective(usize, Vec<usize>),
}

/// Stored as images: `p[i]` is where sheet `i` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation((0..d).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(PermError::NotBijective(d, images.iter().map(|x| x + 1).collect()));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// One-line notation with 1-based entries, e.g. `[2, 3, 1]`.
    pub fn from_one_line(one_based: &[usize]) -> Result<Self, PermError> {
        if one_based.contains(&0) {
            return Err(PermError::NotBijective(one_based.len(), one_based.to_vec()));
        }
        Self::from_images(one_based.iter().map(|x| x - 1).collect())
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    /// Transposition of sheets `a` and `b` (0-based).
    pub fn swap(d: usize, a: usize, b: usize) -> Self {
        let mut p: Vec<usize> = (0..d).collect();
        p.swap(a, b);
        Permutation(p)
    }

    /// The cycle `0 -> 1 -> .. -> d-1 -> 0`.
    pub fn rotation(d: usize) -> Self {
        Permutation((0..d).map(|i| (i + 1) % d).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Self {
        Permutation(self.0.iter().map(|&i| next.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i);
                i = self.0[i];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths, largest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Every permutation of degree `d` in lexicographic order of images.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..d).collect();
        let mut out = vec![Permutation(cur.clone())];
        loop {
            let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation(cur.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basics() {
        let r = Permutation::rotation(3);
        assert_eq!(r.one_line(), vec![2, 3, 1]);
        assert_eq!(r.cycle_type(), vec![3]);
        assert!(r.then(&r.inverse()).is_identity());
        assert_eq!(Permutation::swap(3, 0, 2).cycle_type(), vec![2, 1]);
        assert!(Permutation::from_one_line(&[1, 1, 2]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
        assert_eq!(Permutation::all(4).len(), 24);
        assert!(Permutation::all(3).windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn cycle_type_partitions_degree(seed in proptest::collection::vec(0usize..1000, 1..8)) {
            let d = seed.len();
            let mut imgs: Vec<usize> = (0..d).collect();
            for (i, s) in seed.iter().enumerate() {
                imgs.swap(i, s % d);
            }
            let p = Permutation::from_images(imgs).unwrap();
            prop_assert_eq!(p.cycle_type().iter().sum::<usize>(), d);
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert_eq!(p.inverse().cycle_type(), p.cycle_type());
        }
    }
}
