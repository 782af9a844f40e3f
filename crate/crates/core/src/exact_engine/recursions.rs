//! Distributional recursions over the first box.

use dashu_int::IBig;
use rayon::prelude::*;

use super::{DecrementRows, ExactError, Pmf};
use crate::numeric::hp::{alternating_sum, binomial_row, hp, HpError, HpFloat, DEFAULT_BITS};
use crate::xi_models::XiModel;

/// A `k_max` for `K_n*` with `P{K_n* > k_max} ≤ n (Eξ̄)^k_max ≤ 1e-13`.
pub fn default_kstar_cap(model: &XiModel, n: usize) -> Result<usize, ExactError> {
    let m1 = model.xibar_moment(1)?;
    let k = ((n.max(1) as f64).ln() + 13.0 * std::f64::consts::LN_10) / -m1.ln();
    Ok(k.ceil() as usize + 1)
}

/// Law of `K_n*` from `K_n* = K*_{A_n*} + 1`, truncated at `k_max`.
///
/// `P_j(k) = Σ_m q*(j:m) P_{j-m}(k-1)`, where the `m = 0` term refers to
/// `P_j(k-1)` computed just before.
pub fn kstar_pmf(model: &XiModel, n: usize, k_max: usize) -> Result<Pmf, ExactError> {
    if n == 0 {
        return Ok(Pmf::point_mass(0));
    }
    let rows = DecrementRows::new(model, n)?;
    // p[j][k] = P{K_j* = k}
    let mut p: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut base = vec![0.0; k_max + 1];
    base[0] = 1.0;
    p.push(base);
    for j in 1..=n {
        let row = rows.qstar(j);
        let mut cur = vec![0.0; k_max + 1];
        for k in 1..=k_max {
            let mut acc = row[0] * cur[k - 1];
            for (m, &q) in row.iter().enumerate().skip(1) {
                acc += q * p[j - m][k - 1];
            }
            cur[k] = acc;
        }
        p.push(cur);
    }
    Ok(Pmf::from_probs(0, p.pop().expect("row n")))
}

/// `P{K_n* > k} = Σ_{i=1}^n (-1)^(i+1) C(n,i) (Eξ̄^i)^k`, in high precision.
pub fn kstar_tail_direct(model: &XiModel, n: usize, k: u64) -> Result<f64, ExactError> {
    kstar_tail_direct_from(model, n, k, DEFAULT_BITS)
}

/// [`kstar_tail_direct`] starting the precision escalation at `start` bits.
pub fn kstar_tail_direct_from(model: &XiModel, n: usize, k: u64, start: usize) -> Result<f64, ExactError> {
    if n == 0 {
        return Ok(0.0);
    }
    if k == 0 {
        return Ok(1.0);
    }
    let table = model.moments(n)?;
    let sum = alternating_sum(start, |bits| {
        let c = binomial_row(n, bits);
        let moments: Vec<HpFloat> = match model.power_moments_hp(n, bits) {
            Some((_, xibar)) => xibar,
            None => table.xibar[..=n].iter().map(|&x| hp(x, bits)).collect(),
        };
        (1..=n)
            .map(|i| {
                let t = &c[i] * moments[i].powi(IBig::from(k));
                if i % 2 == 1 {
                    t
                } else {
                    -t
                }
            })
            .collect()
    })?;
    if !model.has_exact_moments() {
        // (1+ε)^k relative perturbation of each power.
        let bound = sum.abs_sum * model.moment_tolerance() * k as f64;
        if bound > 1e-9 {
            return Err(ExactError::Hp(HpError::InputPrecision {
                input_error: model.moment_tolerance(),
                bound,
                limit: 1e-9,
            }));
        }
    }
    Ok(sum.value.clamp(0.0, 1.0))
}

/// Law of `K_n` from `K_n = K_{A_n} + 1` with strictly decreasing `A_n`.
pub fn k_pmf(model: &XiModel, n: usize) -> Result<Pmf, ExactError> {
    if n == 0 {
        return Ok(Pmf::point_mass(0));
    }
    let rows = DecrementRows::new(model, n)?;
    // p[j][k] = P{K_j = k}, k = 0..=j
    let mut p: Vec<Vec<f64>> = vec![vec![1.0]];
    for j in 1..=n {
        let q = rows.q(j);
        let mut cur = vec![0.0; j + 1];
        for (m, &qm) in q.iter().enumerate().skip(1) {
            for (k, &prev) in p[j - m].iter().enumerate() {
                cur[k + 1] += qm * prev;
            }
        }
        p.push(cur);
    }
    let mut last = p.pop().expect("row n");
    last.remove(0);
    Ok(Pmf::from_probs(1, last))
}

/// Level tables `lev[i][j]` for `j ≤ n`, `i ≤ i_max`, of a count that grows
/// by one when the first box is empty (`m = 0`, the self term) and, when
/// `singletons` is set, also when it catches exactly one ball.
///
/// Level `i` at row `j` needs level `i - 1` at the same row, so rows go
/// outermost; within a row the sums over earlier rows are independent
/// across levels and run in parallel, each in a fixed order.
fn level_tables(rows: &DecrementRows, n: usize, i_max: usize, singletons: bool) -> Vec<Vec<f64>> {
    let mut lev: Vec<Vec<f64>> = (0..=i_max).map(|_| vec![0.0; n + 1]).collect();
    lev[0][0] = 1.0;
    let first_bulk = if singletons { 2 } else { 1 };
    for j in 1..=n {
        let row = rows.qstar(j);
        let bulk: Vec<f64> = lev
            .par_iter()
            .map(|l| {
                let mut acc = 0.0;
                for m in first_bulk..=j {
                    acc += row[m] * l[j - m];
                }
                acc
            })
            .collect();
        for i in 0..=i_max {
            let mut v = bulk[i];
            if i > 0 {
                v += row[0] * lev[i - 1][j];
                if singletons {
                    v += row[1] * lev[i - 1][j - 1];
                }
            }
            lev[i][j] = v;
        }
    }
    lev
}

/// `lev[i][j] = P{K_{j,0} = i}`, from
/// `a_j^(i) = Eξ̄^j a_j^(i-1) + Σ_{m≥1} q*(j:m) a_{j-m}^(i)`.
pub(crate) fn k0_levels(rows: &DecrementRows, n: usize, i_max: usize) -> Vec<Vec<f64>> {
    level_tables(rows, n, i_max, false)
}

/// `lev[i][j] = P{Y_j = i}` for `Y = K_0 + K_1`.
pub(crate) fn y_levels(rows: &DecrementRows, n: usize, i_max: usize) -> Vec<Vec<f64>> {
    level_tables(rows, n, i_max, true)
}

/// Law of `K_{n,0}` from `K_{n,0} = K_{A_n*,0} + 1{A_n* = n}`, truncated at `i_max`.
pub fn k0_pmf(model: &XiModel, n: usize, i_max: usize) -> Result<Pmf, ExactError> {
    if n == 0 {
        return Ok(Pmf::point_mass(0));
    }
    let rows = DecrementRows::new(model, n)?;
    let lev = k0_levels(&rows, n, i_max);
    Ok(Pmf::from_probs(0, lev.iter().map(|l| l[n]).collect()))
}

/// Law of `Y_n = K_{n,0} + K_{n,1}` from `Y_n = Y_{A_n*} + 1{A_n* ≥ n-1}`.
pub fn y_pmf(model: &XiModel, n: usize, i_max: usize) -> Result<Pmf, ExactError> {
    if n == 0 {
        return Ok(Pmf::point_mass(0));
    }
    let rows = DecrementRows::new(model, n)?;
    let lev = y_levels(&rows, n, i_max);
    Ok(Pmf::from_probs(0, lev.iter().map(|l| l[n]).collect()))
}
