//! Indexing of the antisymmetric N-particle basis.
//!
//! A basis determinant `a†_{t_0} … a†_{t_{N-1}} |0⟩` is labelled by its
//! strictly increasing orbital tuple `t`. Tuples are ranked in lexicographic
//! order, so for `D = 4, N = 2` the ranks run
//! `(0,1) (0,2) (0,3) (1,2) (1,3) (2,3)` → `0..6`.
//!
//! Sign convention: annihilating orbital `t_m` (0-based position `m`) from
//! the ascending product picks up `(-1)^m`.

use crate::error::{Error, Result};

/// Bijection between sorted N-subsets of `0..D` and dense ranks `0..C(D, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalBasisIndex {
    d: usize,
    n: usize,
    size: usize,
    // binom[a * (n + 1) + b] = C(a, b) for a <= d, b <= n
    binom: Vec<usize>,
}

/// Binomial coefficient, `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

impl OrbitalBasisIndex {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Dimension(format!(
                "need d >= 1 and n >= 1, got d = {d}, n = {n}"
            )));
        }
        if n > d {
            return Err(Error::Dimension(format!(
                "cannot place {n} fermions in {d} orbitals"
            )));
        }
        let size =
            binomial(d, n).ok_or_else(|| Error::Dimension(format!("C({d}, {n}) overflows")))?;
        let mut binom = vec![0usize; (d + 1) * (n + 1)];
        for a in 0..=d {
            for b in 0..=n.min(a) {
                binom[a * (n + 1) + b] = binomial(a, b).unwrap_or(usize::MAX);
            }
        }
        Ok(Self { d, n, size, binom })
    }

    /// Single-particle dimension D.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Particle count N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of basis determinants, C(D, N).
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn choose(&self, a: usize, b: usize) -> usize {
        if b > a {
            0
        } else {
            self.binom[a * (self.n + 1) + b]
        }
    }

    /// Checks that `tuple` is a strictly increasing list of N orbitals in `0..D`.
    pub fn validate(&self, tuple: &[usize]) -> Result<()> {
        let invalid = |reason: String| Error::InvalidTuple {
            tuple: tuple.to_vec(),
            reason,
        };
        if tuple.len() != self.n {
            return Err(invalid(format!(
                "expected {} orbitals, found {}",
                self.n,
                tuple.len()
            )));
        }
        if let Some(&bad) = tuple.iter().find(|&&o| o >= self.d) {
            return Err(invalid(format!("orbital {bad} out of range 0..{}", self.d)));
        }
        if tuple.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("orbitals must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Lexicographic rank of a sorted tuple.
    pub fn rank(&self, tuple: &[usize]) -> Result<usize> {
        self.validate(tuple)?;
        Ok(self.rank_unchecked(tuple))
    }

    /// Rank without validation. `tuple` must already be a valid sorted tuple.
    ///
    /// The number of tuples lexicographically after `t` is
    /// `Σ_m C(D - 1 - t_m, N - m)`.
    #[inline]
    pub(crate) fn rank_unchecked(&self, tuple: &[usize]) -> usize {
        let after: usize = tuple
            .iter()
            .enumerate()
            .map(|(m, &t)| self.choose(self.d - 1 - t, self.n - m))
            .sum();
        self.size - 1 - after
    }

    /// Sorted tuple at lexicographic position `index`.
    pub fn unrank(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        let mut remaining = self.size - 1 - index;
        let mut tuple = Vec::with_capacity(self.n);
        let mut next = 0;
        for m in 0..self.n {
            let slots = self.n - m;
            let mut t = next;
            while self.choose(self.d - 1 - t, slots) > remaining {
                t += 1;
            }
            remaining -= self.choose(self.d - 1 - t, slots);
            tuple.push(t);
            next = t + 1;
        }
        Ok(tuple)
    }

    /// All tuples in rank order.
    pub fn tuples(&self) -> Tuples {
        Tuples {
            d: self.d,
            current: Some((0..self.n).collect()),
        }
    }

    /// Removes `orbital` from `tuple`, returning the shorter tuple and the
    /// fermionic sign, or `None` when the orbital is unoccupied.
    pub fn annihilate(&self, tuple: &[usize], orbital: usize) -> Result<Option<(Vec<usize>, i32)>> {
        self.validate(tuple)?;
        self.check_orbital(orbital)?;
        Ok(annihilate_sorted(tuple, orbital))
    }

    /// Inserts `orbital` into a sorted tuple of length N - 1, returning the
    /// N-tuple and the sign `(-1)^(number of occupied orbitals below it)`,
    /// or `None` when the orbital is already occupied.
    pub fn create(&self, tuple: &[usize], orbital: usize) -> Result<Option<(Vec<usize>, i32)>> {
        if tuple.len() + 1 != self.n {
            return Err(Error::InvalidTuple {
                tuple: tuple.to_vec(),
                reason: format!("expected {} orbitals before creation", self.n - 1),
            });
        }
        if tuple.iter().any(|&o| o >= self.d) || tuple.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTuple {
                tuple: tuple.to_vec(),
                reason: "orbitals must be strictly increasing and in range".into(),
            });
        }
        self.check_orbital(orbital)?;
        Ok(create_sorted(tuple, orbital))
    }

    fn check_orbital(&self, orbital: usize) -> Result<()> {
        if orbital >= self.d {
            return Err(Error::InvalidParameter(format!(
                "orbital {orbital} out of range 0..{}",
                self.d
            )));
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn parity(count: usize) -> i32 {
    if count.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn annihilate_sorted(tuple: &[usize], orbital: usize) -> Option<(Vec<usize>, i32)> {
    let pos = tuple.binary_search(&orbital).ok()?;
    let mut rest = Vec::with_capacity(tuple.len() - 1);
    rest.extend_from_slice(&tuple[..pos]);
    rest.extend_from_slice(&tuple[pos + 1..]);
    Some((rest, parity(pos)))
}

pub(crate) fn create_sorted(tuple: &[usize], orbital: usize) -> Option<(Vec<usize>, i32)> {
    match tuple.binary_search(&orbital) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = Vec::with_capacity(tuple.len() + 1);
            out.extend_from_slice(&tuple[..pos]);
            out.push(orbital);
            out.extend_from_slice(&tuple[pos..]);
            Some((out, parity(pos)))
        }
    }
}

/// Iterator over sorted tuples in lexicographic order.
#[derive(Debug, Clone)]
pub struct Tuples {
    d: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let n = out.len();
        let mut next = out.clone();
        // rightmost position that can still be advanced
        let mut m = n;
        while m > 0 {
            m -= 1;
            if next[m] < self.d - n + m {
                next[m] += 1;
                for k in m + 1..n {
                    next[k] = next[k - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
