use serde::{Deserialize, Serialize};

/// Ball counts of boxes `1..=K_n*` for one realization; zero parts allowed,
/// the last part is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakComposition {
    counts: Vec<u64>,
    n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompositionError {
    #[error("counts sum to {sum}, expected {n}")]
    WrongTotal { sum: u64, n: u64 },
    #[error("last part must be positive")]
    TrailingZero,
}

impl WeakComposition {
    pub fn new(counts: Vec<u64>) -> Result<Self, CompositionError> {
        let n = counts.iter().sum();
        Self::with_total(counts, n)
    }

    pub fn with_total(counts: Vec<u64>, n: u64) -> Result<Self, CompositionError> {
        let sum: u64 = counts.iter().sum();
        if sum != n {
            return Err(CompositionError::WrongTotal { sum, n });
        }
        if counts.last() == Some(&0) {
            return Err(CompositionError::TrailingZero);
        }
        Ok(WeakComposition { counts, n })
    }

    pub(crate) fn from_parts_unchecked(counts: Vec<u64>, n: u64) -> Self {
        debug_assert_eq!(counts.iter().sum::<u64>(), n);
        debug_assert!(counts.last() != Some(&0));
        WeakComposition { counts, n }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `K_{n,r}` for `r = 0..=max count`.
    pub fn occupancy_histogram(&self) -> Vec<u64> {
        let top = self.counts.iter().copied().max().unwrap_or(0) as usize;
        let mut h = vec![0; top + 1];
        for &c in &self.counts {
            h[c as usize] += 1;
        }
        h
    }

    /// Remove the `j`-th ball (0-based, in box order) and drop trailing empty boxes.
    pub fn remove_ball(&self, j: u64) -> WeakComposition {
        assert!(j < self.n, "ball index out of range");
        let mut counts = self.counts.clone();
        let mut acc = 0;
        for c in counts.iter_mut() {
            if j < acc + *c {
                *c -= 1;
                break;
            }
            acc += *c;
        }
        while counts.last() == Some(&0) {
            counts.pop();
        }
        WeakComposition {
            counts,
            n: self.n - 1,
        }
    }

    pub fn stats(&self) -> SieveStats {
        SieveStats::from_composition(self)
    }
}

/// The per-realization functionals of a weak composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SieveStats {
    /// Occupied boxes.
    pub k: u64,
    /// Index of the last occupied box.
    pub kstar: u64,
    /// Empty boxes before the last occupied one.
    pub k0: u64,
    /// Singleton boxes.
    pub k1: u64,
    /// Index of the first empty box; `kstar + 1` when there is none.
    pub w: u64,
    /// Balls in the last occupied box.
    pub z: u64,
    /// Balls strictly to the right of the first empty box.
    pub v: u64,
}

impl SieveStats {
    pub fn from_composition(comp: &WeakComposition) -> Self {
        let counts = comp.counts();
        let kstar = counts.len() as u64;
        let k0 = counts.iter().filter(|&&c| c == 0).count() as u64;
        let k1 = counts.iter().filter(|&&c| c == 1).count() as u64;
        let first_zero = counts.iter().position(|&c| c == 0);
        let w = first_zero.map_or(kstar + 1, |i| i as u64 + 1);
        let v = first_zero.map_or(0, |i| counts[i + 1..].iter().sum());
        SieveStats {
            k: kstar - k0,
            kstar,
            k0,
            k1,
            w,
            z: counts.last().copied().unwrap_or(0),
            v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(c: &[u64]) -> SieveStats {
        WeakComposition::new(c.to_vec()).unwrap().stats()
    }

    #[test]
    fn worked_triples() {
        let s = stats(&[1, 2, 1, 0, 2, 0, 0, 3]);
        assert_eq!((s.v, s.w, s.kstar, s.k, s.k0, s.z), (5, 4, 8, 5, 3, 3));
        let s = stats(&[1, 2, 1, 2, 3]);
        assert_eq!((s.v, s.w), (0, 6));
        let s = stats(&[0, 1, 2, 1, 2, 3]);
        assert_eq!((s.v, s.w), (9, 1));
    }

    #[test]
    fn empty_composition() {
        let c = WeakComposition::new(vec![]).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.stats(), SieveStats { w: 1, ..Default::default() });
    }

    #[test]
    fn rejects_invalid() {
        assert!(WeakComposition::new(vec![1, 0]).is_err());
        assert!(WeakComposition::with_total(vec![1, 2], 4).is_err());
    }

    #[test]
    fn histogram_identities() {
        let c = WeakComposition::new(vec![1, 2, 1, 0, 2, 0, 0, 3]).unwrap();
        let h = c.occupancy_histogram();
        let s = c.stats();
        assert_eq!(h.iter().enumerate().map(|(r, k)| r as u64 * k).sum::<u64>(), c.n());
        assert_eq!(h[1..].iter().sum::<u64>(), s.k);
        assert_eq!(h[0], s.k0);
        assert_eq!(h[1], s.k1);
    }

    #[test]
    fn removing_a_ball() {
        let c = WeakComposition::new(vec![1, 0, 1]).unwrap();
        assert_eq!(c.remove_ball(1).counts(), &[1]);
        assert_eq!(c.remove_ball(0).counts(), &[0, 0, 1]);
    }
}
