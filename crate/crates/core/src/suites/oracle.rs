//! Exhaustive enumeration of sieve outcomes for a finite-atom law of `ξ`.
//!
//! Box by box, every possible catch `c` of the `r` surviving balls is
//! visited with probability `Σ_a w_a C(r,c) (1-x_a)^c x_a^(r-c)`, where `x_a`
//! are the atoms of `ξ̄`. Paths end when no ball is left. Runs of empty
//! boxes make the tree infinite, so branches below `cutoff` are dropped and
//! their mass reported.

/// Laws of the sieve functionals at one `n`, by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Enumerated {
    pub n: usize,
    /// Indexed by value, starting at 0.
    pub kstar: Vec<f64>,
    pub k: Vec<f64>,
    pub k0: Vec<f64>,
    /// `K_{n,0} + K_{n,1}`.
    pub y: Vec<f64>,
    /// Balls in the last occupied box.
    pub z: Vec<f64>,
    /// `visits[m]`: probability that the count of remaining balls takes the value `m ≥ 1`.
    pub visits: Vec<f64>,
    pub pruned: f64,
}

impl Enumerated {
    pub fn mean_k0(&self) -> f64 {
        self.k0.iter().enumerate().map(|(i, p)| i as f64 * p).sum()
    }
}

fn add(v: &mut Vec<f64>, i: usize, p: f64) {
    if v.len() <= i {
        v.resize(i + 1, 0.0);
    }
    v[i] += p;
}

fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct Walk<'a> {
    catch: &'a [Vec<f64>],
    cutoff: f64,
    out: Enumerated,
}

impl Walk<'_> {
    #[allow(clippy::too_many_arguments)]
    fn step(&mut self, r: usize, p: f64, boxes: usize, empty: usize, single: usize, last: usize, seen: u64) {
        if r == 0 {
            let o = &mut self.out;
            add(&mut o.kstar, boxes, p);
            add(&mut o.k, boxes - empty, p);
            add(&mut o.k0, empty, p);
            add(&mut o.y, empty + single, p);
            add(&mut o.z, last, p);
            for m in 1..=o.n {
                if seen & (1 << m) != 0 {
                    o.visits[m] += p;
                }
            }
            return;
        }
        if p < self.cutoff {
            self.out.pruned += p;
            return;
        }
        for c in 0..=r {
            let q = self.catch[r][c];
            let next = r - c;
            let seen = if next > 0 { seen | (1 << next) } else { seen };
            self.step(
                next,
                p * q,
                boxes + 1,
                empty + usize::from(c == 0),
                single + usize::from(c == 1),
                c,
                seen,
            );
        }
    }
}

/// Enumerate all outcomes for `n ≤ 30` balls with `ξ̄` on `xibar` with `weights`.
pub fn enumerate(xibar: &[f64], weights: &[f64], n: usize, cutoff: f64) -> Enumerated {
    assert!(n <= 30, "enumeration is exponential in n");
    let total: f64 = weights.iter().sum();
    let catch: Vec<Vec<f64>> = (0..=n)
        .map(|r| {
            (0..=r)
                .map(|c| {
                    xibar
                        .iter()
                        .zip(weights)
                        .map(|(&x, &w)| w / total * choose(r, c) * (1.0 - x).powi(c as i32) * x.powi((r - c) as i32))
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut walk = Walk {
        catch: &catch,
        cutoff,
        out: Enumerated {
            n,
            kstar: vec![],
            k: vec![],
            k0: vec![],
            y: vec![],
            z: vec![],
            visits: vec![0.0; n + 1],
            pruned: 0.0,
        },
    };
    walk.step(n, 1.0, 0, 0, 0, 0, 1 << n);
    walk.out
}
