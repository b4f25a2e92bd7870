use super::OracleBudget;
use crate::error::{Error, Result};
use crate::probcore::JointPmf;
use crate::regions::MarginalConstraint;

const PIVOT_TOL: f64 = 1e-12;

fn coords(mut i: usize, sizes: &[usize]) -> Vec<usize> {
    let mut c = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        c[k] = i % sizes[k];
        i /= sizes[k];
    }
    c
}

/// Rows `A x = b` for the constraints plus normalization.
fn linear_system(reference: &JointPmf, constraints: &[MarginalConstraint]) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let sizes = reference.sizes();
    let cells = reference.num_cells();
    let mut a = vec![vec![1.0; cells]];
    let mut b = vec![1.0];
    for c in constraints {
        let idx: Vec<usize> = c
            .axes
            .iter()
            .map(|name| reference.axis_index(name))
            .collect::<Result<_>>()?;
        let tsizes = c.target.sizes();
        if idx.iter().zip(&tsizes).any(|(&k, &t)| sizes[k] != t) {
            return Err(Error::ShapeMismatch("constraint target does not match the reference".into()));
        }
        for t in 0..c.target.num_cells() {
            let tc = coords(t, &tsizes);
            let row = (0..cells)
                .map(|x| {
                    let xc = coords(x, &sizes);
                    idx.iter().zip(&tc).all(|(&k, &v)| xc[k] == v) as u8 as f64
                })
                .collect();
            a.push(row);
            b.push(c.target.probs()[t]);
        }
    }
    Ok((a, b))
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<usize>> {
    let (rows, cols) = (a.len(), a[0].len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[best][c].abs() < PIVOT_TOL {
            continue;
        }
        a.swap(r, best);
        b.swap(r, best);
        let p = a[r][c];
        for x in a[r].iter_mut() {
            *x /= p;
        }
        b[r] /= p;
        for i in 0..rows {
            if i != r && a[i][c] != 0.0 {
                let f = a[i][c];
                for k in 0..cols {
                    a[i][k] -= f * a[r][k];
                }
                b[i] -= f * b[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| x.abs() > 1e-9) {
        return Err(Error::Infeasible("marginal constraints are inconsistent".into()));
    }
    Ok(pivots)
}

fn kl(x: &[f64], r: &[f64]) -> f64 {
    let mut d = 0.0;
    for (&p, &q) in x.iter().zip(r) {
        if p > 0.0 {
            if q <= 0.0 {
                return f64::INFINITY;
            }
            d += p * (p / q).ln();
        }
    }
    d
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// RREF with the columns in `free` eliminated last, so every other column
/// ends up a pivot when that choice of free cells is a valid chart.
/// Reduced rows, right-hand side and pivot columns of one chart.
type Chart = (Vec<Vec<f64>>, Vec<f64>, Vec<usize>);

fn chart(a: &[Vec<f64>], b: &[f64], free: &[usize]) -> Result<Option<Chart>> {
    let cells = a[0].len();
    let order: Vec<usize> = (0..cells).filter(|c| !free.contains(c)).chain(free.iter().copied()).collect();
    let mut pa: Vec<Vec<f64>> = a.iter().map(|row| order.iter().map(|&c| row[c]).collect()).collect();
    let mut pb = b.to_vec();
    let piv = rref(&mut pa, &mut pb)?;
    if piv.len() != cells - free.len() || piv.iter().any(|&p| p >= cells - free.len()) {
        return Ok(None);
    }
    // Back to original column labels.
    let mut ua = vec![vec![0.0; cells]; pa.len()];
    for (r, row) in pa.iter().enumerate() {
        for (k, &c) in order.iter().enumerate() {
            ua[r][c] = row[k];
        }
    }
    Ok(Some((ua, pb, piv.iter().map(|&p| order[p]).collect())))
}

/// Minimum of `D(P || reference)` over feasible points whose free cells lie
/// on the grid `{0, 1/steps, ..}`; pivot cells are solved exactly. Every
/// valid choice of free cells is searched, since a thin feasible polytope
/// can miss the grid in one chart and not another. An upper bound on the
/// true minimum.
pub fn grid_min_kl(reference: &JointPmf, constraints: &[MarginalConstraint], budget: &OracleBudget) -> Result<f64> {
    let cells = reference.num_cells();
    if cells > 8 {
        return Err(Error::BudgetExceeded {
            required: cells as f64,
            budget: 8.0,
        });
    }
    let (a, b) = linear_system(reference, constraints)?;
    let rank = rref(&mut a.clone(), &mut b.clone())?.len();
    let charts = subsets(cells, cells - rank);
    let steps = budget.grid_steps;
    let points = charts.len() as f64 * ((steps + 1) as f64).powi((cells - rank) as i32);
    if points > budget.max_joint_cells {
        return Err(Error::BudgetExceeded {
            required: points,
            budget: budget.max_joint_cells,
        });
    }
    let mut best = f64::INFINITY;
    for free in &charts {
        if let Some((a, b, pivots)) = chart(&a, &b, free)? {
            best = best.min(search(&a, &b, &pivots, free, steps, reference.probs()));
        }
    }
    Ok(best)
}

fn search(a: &[Vec<f64>], b: &[f64], pivots: &[usize], free: &[usize], steps: usize, reference: &[f64]) -> f64 {
    let cells = reference.len();
    let mut best = f64::INFINITY;
    let mut g = vec![0usize; free.len()];
    let mut x = vec![0.0; cells];
    loop {
        if g.iter().sum::<usize>() <= steps {
            for (k, &c) in free.iter().enumerate() {
                x[c] = g[k] as f64 / steps as f64;
            }
            let mut ok = true;
            for (r, &pc) in pivots.iter().enumerate() {
                let mut val = b[r];
                for &c in free {
                    val -= a[r][c] * x[c];
                }
                if val < -1e-12 {
                    ok = false;
                    break;
                }
                x[pc] = val.max(0.0);
            }
            if ok {
                best = best.min(kl(&x, reference));
            }
        }
        let mut k = 0;
        loop {
            if k == g.len() {
                return best;
            }
            g[k] += 1;
            if g[k] <= steps {
                break;
            }
            g[k] = 0;
            k += 1;
        }
    }
}
