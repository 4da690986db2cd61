use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of 1..={0}: {1:?}")]
    NotBijective(usize, Vec<usize>),
    #[error("cycle entry {0} out of range 1..={1}")]
    OutOfRange(usize, usize),
}

/// A permutation of `{1, ..., d}` in one-line notation.
///
/// `images[i - 1]` is the image of `i`. The derived ordering is lexicographic
/// on the one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        Self {
            images: (1..=d as u8).collect(),
        }
    }

    /// From one-line notation with 1-based entries.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let d = images.len();
        let mut seen = vec![false; d + 1];
        for &v in images {
            if v == 0 || v > d || seen[v] {
                return Err(PermError::NotBijective(d, images.to_vec()));
            }
            seen[v] = true;
        }
        Ok(Self {
            images: images.iter().map(|&v| v as u8).collect(),
        })
    }

    /// Product of the given cycles (applied right to left, which is
    /// irrelevant for disjoint cycles).
    pub fn from_cycles(d: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (1..=d).collect();
        for cycle in cycles.iter().rev() {
            for &c in cycle.iter() {
                if c == 0 || c > d {
                    return Err(PermError::OutOfRange(c, d));
                }
            }
            let mut step: Vec<usize> = (1..=d).collect();
            for (k, &c) in cycle.iter().enumerate() {
                step[c - 1] = cycle[(k + 1) % cycle.len()];
            }
            images = images.iter().map(|&v| step[v - 1]).collect();
        }
        Self::from_images(&images)
    }

    pub fn transposition(d: usize, a: usize, b: usize) -> Result<Self, PermError> {
        Self::from_cycles(d, &[&[a, b]])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `sigma(i)` for `i` in `1..=d`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: other.images.iter().map(|&v| self.images[v as usize - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = (i + 1) as u8;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Disjoint cycle decomposition, fixed points included, each cycle
    /// starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d + 1];
        let mut out = Vec::new();
        for start in 1..=d {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    /// Parity from the cycle decomposition: `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All permutations of `{1..d}` in lexicographic one-line order.
    pub fn all(d: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=d as u8).collect();
        loop {
            out.push(Self { images: cur.clone() });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation without fixed points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all = Perm::all(4);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all[0].is_identity());
        assert_eq!(Perm::all(1).len(), 1);
    }

    #[test]
    fn signs() {
        assert_eq!(Perm::identity(3).sign(), 1);
        assert_eq!(Perm::transposition(3, 1, 2).unwrap().sign(), -1);
        assert_eq!(Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap().sign(), 1);
        assert_eq!(Perm::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap().sign(), -1);
        let plus = Perm::all(4).iter().filter(|p| p.sign() == 1).count();
        assert_eq!(plus, 12);
    }

    #[test]
    fn cycle_notation_matches_one_line() {
        let p = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(p.images(), vec![2, 3, 1]);
        assert_eq!(p.to_string(), "(1 2 3)");
        assert!(Perm::from_images(&[1, 1, 2]).is_err());
        assert!(Perm::from_cycles(3, &[&[1, 4]]).is_err());
    }

    #[test]
    fn group_laws() {
        let all = Perm::all(4);
        for a in &all {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in all.iter().step_by(5) {
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
            }
        }
    }
}
