//! Minimum-divergence couplings under marginal constraints.
//!
//! The linear part is an I-projection computed by iterative proportional
//! fitting. Starting anywhere other than the reference, the same projection
//! is reached by the mirror-descent step `P <- proj(P^(1-eta) R^eta)`. A
//! lower bound on a conditional entropy is handled through its Lagrangian,
//! with the multiplier found by bisection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::probcore::{kl_of, neumaier_sum, ravel, unravel, JointPmf};

/// `P[axes] = target`.
#[derive(Clone, Debug)]
pub struct MarginalConstraint {
    pub axes: Vec<String>,
    pub target: JointPmf,
}

impl MarginalConstraint {
    /// Takes the marginal of `law` on `axes` as the target.
    pub fn from_law(law: &JointPmf, axes: &[&str]) -> Result<Self> {
        Ok(Self {
            axes: axes.iter().map(|s| s.to_string()).collect(),
            target: law.marginal(axes)?,
        })
    }
}

/// `H(target | given) >= lower`.
#[derive(Clone, Debug)]
pub struct EntropyConstraint {
    pub target: String,
    pub given: String,
    pub lower: f64,
}

#[derive(Clone, Debug)]
pub struct CouplingProblem {
    pub reference: JointPmf,
    pub marginals: Vec<MarginalConstraint>,
    pub entropy: Option<EntropyConstraint>,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Sup-norm marginal residual at which projection stops.
    pub residual_tol: f64,
    pub max_projection_sweeps: usize,
    /// Stop outer iterations when the objective moves less than this.
    pub objective_tol: f64,
    pub max_outer: usize,
    /// Mirror step for restarts from arbitrary points.
    pub eta: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-12,
            max_projection_sweeps: 200_000,
            objective_tol: 1e-13,
            max_outer: 20_000,
            eta: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingSolution {
    /// Divergence from the reference, `+inf` when no feasible coupling is
    /// absolutely continuous with respect to it.
    pub value: f64,
    pub coupling: JointPmf,
    /// Largest marginal-constraint violation of `coupling`.
    pub residual: f64,
    /// Multiplier of the entropy constraint (zero when inactive).
    pub multiplier: f64,
}

/// Flattened constraint: per-cell target index plus target masses.
struct Compiled {
    index: Vec<usize>,
    target: Vec<f64>,
}

struct Entropy {
    /// Per-cell index of the `(given, target)` pair and of `given`.
    joint: Vec<usize>,
    cond: Vec<usize>,
    joint_len: usize,
    cond_len: usize,
    lower: f64,
}

pub struct Solver<'a> {
    problem: &'a CouplingProblem,
    cfg: SolverConfig,
    reference: Vec<f64>,
    constraints: Vec<Compiled>,
    entropy: Option<Entropy>,
}

fn projection_index(law: &JointPmf, axes: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
    let pos = axes
        .iter()
        .map(|a| law.axis_index(a))
        .collect::<Result<Vec<_>>>()?;
    let sizes = law.sizes();
    let sub_sizes: Vec<usize> = pos.iter().map(|&p| sizes[p]).collect();
    let mut coords = vec![0; sizes.len()];
    let mut sub = vec![0; pos.len()];
    let index = (0..law.num_cells())
        .map(|i| {
            unravel(i, &sizes, &mut coords);
            for (k, &p) in pos.iter().enumerate() {
                sub[k] = coords[p];
            }
            ravel(&sub, &sub_sizes)
        })
        .collect();
    Ok((index, sub_sizes))
}

impl<'a> Solver<'a> {
    pub fn new(problem: &'a CouplingProblem, cfg: SolverConfig) -> Result<Self> {
        let r = &problem.reference;
        let mut constraints = Vec::new();
        for c in &problem.marginals {
            let axes: Vec<&str> = c.axes.iter().map(String::as_str).collect();
            let target = c.target.permuted(&axes).map_err(|_| {
                Error::ShapeMismatch(format!("constraint target is not a law on {axes:?}"))
            })?;
            let (index, sub_sizes) = projection_index(r, &axes)?;
            if target.sizes() != sub_sizes {
                return Err(Error::ShapeMismatch(format!(
                    "constraint on {axes:?} has shape {:?}, reference implies {sub_sizes:?}",
                    target.sizes()
                )));
            }
            constraints.push(Compiled {
                index,
                target: target.probs().to_vec(),
            });
        }
        let entropy = match &problem.entropy {
            None => None,
            Some(e) => {
                let (joint, js) = projection_index(r, &[&e.given, &e.target])?;
                let (cond, cs) = projection_index(r, &[&e.given])?;
                Some(Entropy {
                    joint,
                    cond,
                    joint_len: js.iter().product(),
                    cond_len: cs.iter().product(),
                    lower: e.lower,
                })
            }
        };
        Ok(Self {
            problem,
            cfg,
            reference: r.probs().to_vec(),
            constraints,
            entropy,
        })
    }

    fn sums(c: &Compiled, p: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0; c.target.len()];
        for (i, &x) in p.iter().enumerate() {
            s[c.index[i]] += x;
        }
        s
    }

    pub fn residual(&self, p: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| {
                Self::sums(c, p)
                    .iter()
                    .zip(&c.target)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// KL projection of the nonnegative weights `p` onto the marginal
    /// constraints, in place.
    fn project(&self, p: &mut [f64]) {
        if self.constraints.is_empty() {
            let t = neumaier_sum(p.iter().copied());
            if t > 0.0 {
                p.iter_mut().for_each(|x| *x /= t);
            }
            return;
        }
        for _ in 0..self.cfg.max_projection_sweeps {
            for c in &self.constraints {
                let s = Self::sums(c, p);
                for (i, x) in p.iter_mut().enumerate() {
                    let k = c.index[i];
                    *x = if s[k] > 0.0 { *x * c.target[k] / s[k] } else { 0.0 };
                }
            }
            if self.residual(p) <= self.cfg.residual_tol {
                break;
            }
        }
    }

    fn entropy_value(&self, p: &[f64]) -> f64 {
        let e = self.entropy.as_ref().expect("entropy constraint present");
        let (j, c) = self.entropy_marginals(e, p);
        crate::probcore::entropy_of(&j) - crate::probcore::entropy_of(&c)
    }

    fn entropy_marginals(&self, e: &Entropy, p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut j = vec![0.0; e.joint_len];
        let mut c = vec![0.0; e.cond_len];
        for (i, &x) in p.iter().enumerate() {
            j[e.joint[i]] += x;
            c[e.cond[i]] += x;
        }
        (j, c)
    }

    fn objective(&self, p: &[f64]) -> f64 {
        kl_of(p, &self.reference)
    }

    /// Checks that the constraints admit a joint law at all, and one
    /// supported inside the reference's support.
    fn probe(&self) -> Result<Option<Vec<f64>>> {
        if self.constraints.len() != 2 {
            return Ok(None);
        }
        let n = self.reference.len();
        let all = vec![true; n];
        let (ok, any) = self.flow(&all);
        if !ok {
            return Err(Error::Infeasible(
                "marginal constraints disagree on their shared axes".into(),
            ));
        }
        let supp: Vec<bool> = self.reference.iter().map(|&r| r > 0.0).collect();
        let (ok_supp, _) = self.flow(&supp);
        Ok(if ok_supp { None } else { Some(any) })
    }

    /// Max flow from the first constraint's cells to the second's through
    /// the allowed joint cells. Returns whether all mass is routed, and the
    /// induced coupling.
    fn flow(&self, allowed: &[bool]) -> (bool, Vec<f64>) {
        let a = &self.constraints[0];
        let b = &self.constraints[1];
        let na = a.target.len();
        let nb = b.target.len();
        let src = na + nb;
        let sink = src + 1;
        let mut g = FlowGraph::new(sink + 1);
        for (k, &t) in a.target.iter().enumerate() {
            g.add(src, k, t);
        }
        for (k, &t) in b.target.iter().enumerate() {
            g.add(na + k, sink, t);
        }
        let mut cell_edge = vec![usize::MAX; allowed.len()];
        for (i, &ok) in allowed.iter().enumerate() {
            if ok {
                cell_edge[i] = g.add(a.index[i], na + b.index[i], f64::INFINITY);
            }
        }
        let total = g.max_flow(src, sink);
        let mut coupling = vec![0.0; allowed.len()];
        for (i, &e) in cell_edge.iter().enumerate() {
            if e != usize::MAX {
                coupling[i] = g.flow_on(e);
            }
        }
        (total >= 1.0 - 1e-9, coupling)
    }

    /// Solves the problem from the reference.
    pub fn solve(&self) -> Result<CouplingSolution> {
        if let Some(any) = self.probe()? {
            return Ok(self.finish(any, f64::INFINITY, 0.0));
        }
        let mut p = self.reference.clone();
        self.project(&mut p);
        if self.constraints.len() != 2 && self.residual(&p) > 1e-6 {
            return Err(Error::Infeasible(
                "projection did not reach the constraint set".into(),
            ));
        }
        let Some(e) = &self.entropy else {
            let v = self.objective(&p);
            return Ok(self.finish(p, v, 0.0));
        };
        if self.entropy_value(&p) >= e.lower - 1e-12 {
            let v = self.objective(&p);
            return Ok(self.finish(p, v, 0.0));
        }
        self.solve_entropy(p, e.lower)
    }

    /// Mirror descent from `start`; reaches the same projection as
    /// [`Solver::solve`] when there is no entropy constraint.
    pub fn solve_from(&self, start: &[f64]) -> Result<CouplingSolution> {
        if self.entropy.is_some() {
            return Err(Error::Unsupported(
                "restarts are only defined for linear constraint sets".into(),
            ));
        }
        if let Some(any) = self.probe()? {
            return Ok(self.finish(any, f64::INFINITY, 0.0));
        }
        let eta = self.cfg.eta;
        let mut p: Vec<f64> = start
            .iter()
            .zip(&self.reference)
            .map(|(&s, &r)| if r > 0.0 { s } else { 0.0 })
            .collect();
        self.project(&mut p);
        let mut prev = self.objective(&p);
        for _ in 0..self.cfg.max_outer {
            for (x, &r) in p.iter_mut().zip(&self.reference) {
                if *x > 0.0 {
                    *x = x.powf(1.0 - eta) * r.powf(eta);
                }
            }
            self.project(&mut p);
            let v = self.objective(&p);
            if (prev - v).abs() < self.cfg.objective_tol {
                break;
            }
            prev = v;
        }
        let v = self.objective(&p);
        Ok(self.finish(p, v, 0.0))
    }

    /// Minimizes `D(P || R) - lambda H(target | given)` over the linear set.
    fn lagrangian_step(&self, start: &[f64], lambda: f64) -> Vec<f64> {
        let e = self.entropy.as_ref().expect("entropy constraint present");
        let f = |p: &[f64]| self.objective(p) - lambda * self.entropy_value(p);
        let mut p = start.to_vec();
        let mut val = f(&p);
        let mut eta = 1.0 / (1.0 + lambda);
        for _ in 0..self.cfg.max_outer {
            let (j, c) = self.entropy_marginals(e, &p);
            let mut next: Vec<f64> = p
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if x <= 0.0 {
                        return 0.0;
                    }
                    let cond = j[e.joint[i]] / c[e.cond[i]];
                    (x.ln() * (1.0 - eta)
                        + self.reference[i].ln() * eta
                        - lambda * eta * cond.ln())
                    .exp()
                })
                .collect();
            let m = next.iter().cloned().fold(0.0, f64::max);
            if m > 0.0 {
                next.iter_mut().for_each(|x| *x /= m);
            }
            self.project(&mut next);
            let v = f(&next);
            if v > val + 1e-15 {
                eta *= 0.5;
                if eta < 1e-6 {
                    break;
                }
                continue;
            }
            p = next;
            let done = val - v < self.cfg.objective_tol;
            val = v;
            if done {
                break;
            }
        }
        p
    }

    fn solve_entropy(&self, start: Vec<f64>, lower: f64) -> Result<CouplingSolution> {
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut p_hi = self.lagrangian_step(&start, hi);
        while self.entropy_value(&p_hi) < lower - 1e-12 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e8 {
                return Err(Error::Infeasible(
                    "entropy lower bound unreachable inside the reference support".into(),
                ));
            }
            p_hi = self.lagrangian_step(&p_hi, hi);
        }
        for _ in 0..60 {
            if hi - lo <= 1e-10 * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let p = self.lagrangian_step(&p_hi, mid);
            if self.entropy_value(&p) >= lower - 1e-12 {
                hi = mid;
                p_hi = p;
            } else {
                lo = mid;
            }
        }
        let v = self.objective(&p_hi);
        Ok(self.finish(p_hi, v, hi))
    }

    fn finish(&self, p: Vec<f64>, value: f64, multiplier: f64) -> CouplingSolution {
        let residual = self.residual(&p);
        let coupling =
            JointPmf::from_parts_unchecked(self.problem.reference.axes().to_vec(), p);
        CouplingSolution {
            value,
            coupling,
            residual,
            multiplier,
        }
    }

    /// Entropy `H(target | given)` of an arbitrary joint law on the
    /// reference's axes.
    pub fn constrained_entropy(&self, p: &[f64]) -> Option<f64> {
        self.entropy.as_ref().map(|_| self.entropy_value(p))
    }
}

impl CouplingProblem {
    pub fn solve(&self) -> Result<CouplingSolution> {
        Solver::new(self, SolverConfig::default())?.solve()
    }

    pub fn solve_with(&self, cfg: SolverConfig) -> Result<CouplingSolution> {
        Solver::new(self, cfg)?.solve()
    }
}

/// Edmonds-Karp on a tiny dense-ish graph with real capacities.
struct FlowGraph {
    to: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl FlowGraph {
    fn new(n: usize) -> Self {
        Self {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: f64) -> usize {
        let e = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.adj[u].push(e);
        self.to.push(u);
        self.cap.push(0.0);
        self.adj[v].push(e + 1);
        e
    }

    fn flow_on(&self, e: usize) -> f64 {
        self.cap[e ^ 1]
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        const EPS: f64 = 1e-15;
        let mut total = 0.0;
        loop {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut queue = std::collections::VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.to[e];
                    if !seen[v] && self.cap[e] > EPS {
                        seen[v] = true;
                        prev[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = f64::INFINITY;
            let mut v = t;
            while v != s {
                let e = prev[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = prev[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.to[e ^ 1];
            }
            total += push;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probcore::{Axis, Pmf};

    fn uv(w: &[f64]) -> JointPmf {
        JointPmf::from_weights(vec![Axis::new("U", 2), Axis::new("V", 2)], w.to_vec()).unwrap()
    }

    fn marginal_problem(reference: JointPmf, pu: &[f64], pv: &[f64]) -> CouplingProblem {
        let pu = JointPmf::from_pmf("U", &Pmf::new(pu.to_vec()).unwrap());
        let pv = JointPmf::from_pmf("V", &Pmf::new(pv.to_vec()).unwrap());
        CouplingProblem {
            reference,
            marginals: vec![
                MarginalConstraint { axes: vec!["U".into()], target: pu },
                MarginalConstraint { axes: vec!["V".into()], target: pv },
            ],
            entropy: None,
        }
    }

    #[test]
    fn product_reference_is_its_own_projection() {
        let r = JointPmf::product(&[
            ("U", &Pmf::new(vec![0.3, 0.7]).unwrap()),
            ("V", &Pmf::new(vec![0.6, 0.4]).unwrap()),
        ])
        .unwrap();
        let sol = marginal_problem(r, &[0.3, 0.7], &[0.6, 0.4]).solve().unwrap();
        assert!(sol.value < 1e-14);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn support_violation_gives_infinity() {
        // Diagonal reference cannot carry marginals (1, 0) and (0, 1).
        let r = uv(&[0.5, 0.0, 0.0, 0.5]);
        let sol = marginal_problem(r, &[1.0, 0.0], &[0.0, 1.0]).solve().unwrap();
        assert_eq!(sol.value, f64::INFINITY);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn inconsistent_constraints_are_errors() {
        let r = uv(&[1.0, 1.0, 1.0, 1.0]);
        let mut prob = marginal_problem(r, &[0.5, 0.5], &[0.5, 0.5]);
        prob.marginals[1] = MarginalConstraint {
            axes: vec!["U".into()],
            target: JointPmf::from_pmf("U", &Pmf::new(vec![0.2, 0.8]).unwrap()),
        };
        assert!(matches!(prob.solve(), Err(Error::Infeasible(_))));
    }

    #[test]
    fn restart_matches_projection() {
        let r = uv(&[0.4, 0.1, 0.2, 0.3]);
        let prob = marginal_problem(r, &[0.5, 0.5], &[0.3, 0.7]);
        let solver = Solver::new(&prob, SolverConfig::default()).unwrap();
        let a = solver.solve().unwrap();
        let b = solver.solve_from(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!((a.value - b.value).abs() < 1e-10, "{} vs {}", a.value, b.value);
    }
}
