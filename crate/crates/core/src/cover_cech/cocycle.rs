use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::atlas::{enclosing_radius, CoverAtlas};
use crate::exact::Coord;
use crate::torus_pic::FlatBundleClass;

/// Constant U(1) transitions t_jk = e^{2πi·turns} on the listed overlaps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatCocycle {
    pub n_charts: usize,
    pub edges: Vec<(usize, usize)>,
    pub turns: Vec<Coord>,
}

impl FlatCocycle {
    pub fn new(n_charts: usize, edges: Vec<(usize, usize)>, turns: Vec<Coord>) -> Self {
        assert_eq!(edges.len(), turns.len());
        FlatCocycle { n_charts, edges, turns }
    }

    pub fn value(&self, e: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.turns[e].to_f64())
    }

    pub fn values(&self) -> Vec<Complex64> {
        (0..self.edges.len()).map(|e| self.value(e)).collect()
    }

    pub fn inverse(&self) -> FlatCocycle {
        FlatCocycle {
            n_charts: self.n_charts,
            edges: self.edges.clone(),
            turns: self.turns.iter().map(Coord::neg).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.turns.iter().all(Coord::is_zero)
    }

    /// max |t_jk·t_k − t_j| for the given unit 0-cochain phases (in radians).
    pub fn gauge_defect(&self, phases: &[f64]) -> f64 {
        self.edges
            .iter()
            .enumerate()
            .map(|(e, &(j, k))| {
                let v = self.value(e) * Complex64::from_polar(1.0, phases[k]) - Complex64::from_polar(1.0, phases[j]);
                v.norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Turns of χ(λ)^n for λ = p + qτ, χ(1) = e^{2πia}, χ(τ) = e^{2πib}.
pub fn character_turns(l: &FlatBundleClass, n: i64, lambda: (i64, i64)) -> Coord {
    l.a.scale(n * lambda.0).add(&l.b.scale(n * lambda.1))
}

pub fn restriction_cocycle(l: &FlatBundleClass, atlas: &CoverAtlas, power: i64) -> FlatCocycle {
    let edges = atlas.overlaps.iter().map(|o| (o.j, o.k)).collect();
    let turns = atlas.overlaps.iter().map(|o| character_turns(l, power, o.lattice_shift)).collect();
    FlatCocycle::new(atlas.n_charts, edges, turns)
}

/// Turns of t on the component (j, k, λ), inverting a stored (k, j, −λ) entry.
fn oriented_turns(atlas: &CoverAtlas, e: &FlatCocycle, j: usize, k: usize, lambda: (i64, i64)) -> Option<Coord> {
    atlas.overlaps.iter().enumerate().find_map(|(idx, o)| {
        if o.j == j && o.k == k && o.lattice_shift == lambda {
            Some(e.turns[idx].clone())
        } else if o.j == k && o.k == j && o.lattice_shift == (-lambda.0, -lambda.1) {
            Some(e.turns[idx].neg())
        } else {
            None
        }
    })
}

/// Largest deviation of t_ij·t_jk·t_ik⁻¹ from 1, in turns, over all triple overlaps.
///
/// Exact zero for rational classes.
pub fn triple_overlap_residual(atlas: &CoverAtlas, e: &FlatCocycle) -> (usize, f64) {
    let mut count = 0;
    let mut worst: f64 = 0.0;
    let n = atlas.n_charts;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                for mu in shifts() {
                    for nu in shifts() {
                        let a = atlas.centers[i];
                        let b = atlas.centers[j] + atlas.lattice_point(mu.0, mu.1);
                        let c = atlas.centers[k] + atlas.lattice_point(nu.0, nu.1);
                        if enclosing_radius(a, b, c) >= atlas.outer_radius {
                            continue;
                        }
                        let tij = oriented_turns(atlas, e, i, j, mu);
                        let tjk = oriented_turns(atlas, e, j, k, (nu.0 - mu.0, nu.1 - mu.1));
                        let tik = oriented_turns(atlas, e, i, k, nu);
                        if let (Some(x), Some(y), Some(z)) = (tij, tjk, tik) {
                            count += 1;
                            let r = x.add(&y).sub(&z).dist_to_integer().to_f64();
                            worst = worst.max(r);
                        }
                    }
                }
            }
        }
    }
    (count, worst)
}

fn shifts() -> impl Iterator<Item = (i64, i64)> {
    (-2..=2).flat_map(|p| (-2..=2).map(move |q| (p, q)))
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

struct Problem {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Problem {
    /// Largest wrapped angle |φ_e + θ_k − θ_j|.
    fn objective(&self, theta: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|&(j, k, phi)| wrap(phi + theta[k] - theta[j]).abs())
            .fold(0.0, f64::max)
    }

    /// Minimizes the max wrapped angle over θ_v with all other phases fixed.
    fn best_single(&self, theta: &[f64], v: usize) -> f64 {
        let mut targets = Vec::new();
        for &(j, k, phi) in &self.edges {
            if j == v && k != v {
                targets.push((phi + theta[k]).rem_euclid(TAU));
            } else if k == v && j != v {
                targets.push((theta[j] - phi).rem_euclid(TAU));
            }
        }
        if targets.is_empty() {
            return theta[v];
        }
        targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut gap = targets[0] + TAU - targets[targets.len() - 1];
        let mut start = targets[0];
        for w in targets.windows(2) {
            if w[1] - w[0] > gap {
                gap = w[1] - w[0];
                start = w[1];
            }
        }
        let arc = TAU - gap;
        start + arc / 2.0
    }

    fn descend(&self, theta: &mut [f64]) {
        let mut current = self.objective(theta);
        for _ in 0..200 {
            let start = current;
            for v in 0..self.n {
                let old = theta[v];
                theta[v] = self.best_single(theta, v);
                let val = self.objective(theta);
                if val > current {
                    theta[v] = old;
                } else {
                    current = val;
                }
            }
            if let Some((p, val)) = self.linear_refine(theta) {
                if val < current {
                    theta.copy_from_slice(&p);
                    current = val;
                }
            }
            if start - current < 1e-13 {
                break;
            }
        }
    }

    /// With windings frozen at their current values, the best θ solves a
    /// system of difference constraints; bisect on the bound.
    fn linear_refine(&self, theta: &[f64]) -> Option<(Vec<f64>, f64)> {
        let c: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .map(|&(j, k, phi)| {
                let raw = phi + theta[k] - theta[j];
                let w = wrap(raw) - raw;
                (j, k, phi + w)
            })
            .collect();
        let mut hi = self.objective(theta);
        let mut lo = 0.0;
        let mut best = None;
        if let Some(p) = feasible(self.n, &c, hi) {
            best = Some(p);
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            match feasible(self.n, &c, mid) {
                Some(p) => {
                    hi = mid;
                    best = Some(p);
                }
                None => lo = mid,
            }
        }
        best.map(|p| {
            let v = self.objective(&p);
            (p, v)
        })
    }
}

/// Potentials θ with |c_e + θ_k − θ_j| ≤ s on every edge, if any exist.
fn feasible(n: usize, c: &[(usize, usize, f64)], s: f64) -> Option<Vec<f64>> {
    let mut arcs = Vec::with_capacity(2 * c.len());
    for &(j, k, ce) in c {
        arcs.push((j, k, s - ce));
        arcs.push((k, j, s + ce));
    }
    let mut dist = vec![0.0; n];
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in &arcs {
            if dist[u] + w < dist[v] - 1e-15 {
                dist[v] = dist[u] + w;
                changed = true;
            }
        }
        if !changed {
            return Some(dist);
        }
    }
    let mut ok = true;
    for &(u, v, w) in &arcs {
        if dist[u] + w < dist[v] - 1e-12 {
            ok = false;
        }
    }
    ok.then_some(dist)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleDistance {
    pub distance: f64,
    pub phases: Vec<f64>,
}

/// min over unit 0-cochains (t_j) of max |t_jk·t_k − t_j|.
pub fn cocycle_distance(e: &FlatCocycle) -> f64 {
    cocycle_distance_detail(e).distance
}

pub fn cocycle_distance_detail(e: &FlatCocycle) -> CocycleDistance {
    let n = e.n_charts;
    let prob = Problem {
        n,
        edges: e.edges.iter().zip(&e.turns).map(|(&(j, k), t)| (j, k, TAU * t.to_f64())).collect(),
    };
    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; n], tree_gauge(&prob)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..12 {
        starts.push((0..n).map(|_| rng.gen_range(0.0..TAU)).collect());
    }
    let grid = 256;
    let mut grid_start = vec![0.0; n];
    for v in 1..n {
        let mut best = (f64::INFINITY, 0.0);
        for g in 0..grid {
            grid_start[v] = TAU * g as f64 / grid as f64;
            let val = prob.objective(&grid_start);
            if val < best.0 {
                best = (val, grid_start[v]);
            }
        }
        grid_start[v] = best.1;
    }
    starts.push(grid_start);
    let mut best = (f64::INFINITY, vec![0.0; n]);
    for mut theta in starts {
        prob.descend(&mut theta);
        let val = prob.objective(&theta);
        if val < best.0 {
            best = (val, theta);
        }
    }
    let phases: Vec<f64> = best.1.iter().map(|t| t.rem_euclid(TAU)).collect();
    CocycleDistance { distance: e.gauge_defect(&phases).min(2.0), phases }
}

/// Phases making the edges of a breadth-first spanning forest exact.
fn tree_gauge(prob: &Problem) -> Vec<f64> {
    let mut theta = vec![0.0; prob.n];
    let mut seen = vec![false; prob.n];
    for root in 0..prob.n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(j, k, phi) in &prob.edges {
                if j == u && !seen[k] {
                    theta[k] = theta[j] - phi;
                    seen[k] = true;
                    queue.push_back(k);
                } else if k == u && !seen[j] {
                    theta[j] = phi + theta[k];
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    theta
}
