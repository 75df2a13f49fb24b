//! Exact 1-Wasserstein distance under an asymmetric hop metric.
//!
//! [`wasserstein`] solves the transportation problem between two sparse
//! measures with successive shortest paths. The solver only adds, subtracts
//! and compares masses, so it runs unchanged over [`Infinitesimal`]
//! scalars; arc costs are integer hop counts and the Dijkstra potentials stay
//! integral throughout.
//!
//! Every solve returns a coupling and a 1-Lipschitz potential whose dual
//! objective equals the primal value, which certifies optimality.
//! [`oracle_wasserstein`] is an independent exhaustive solver over the
//! vertices of the transportation polytope, for small supports.
//!
//! [`Infinitesimal`]: crate::scalar::Infinitesimal

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::TransportError;
use crate::graph::{DistanceOracle, VertexId};
use crate::measure::SparseMeasure;
use crate::scalar::{int, Rational, Scalar};

/// Largest support (on either side) accepted by [`oracle_wasserstein`].
pub const ORACLE_SUPPORT_LIMIT: usize = 6;

/// Transport plan: mass moved from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling<S> {
    flows: BTreeMap<(VertexId, VertexId), S>,
}

impl<S: Scalar> Coupling<S> {
    pub fn flow(&self, from: VertexId, to: VertexId) -> S {
        self.flows.get(&(from, to)).cloned().unwrap_or_else(S::zero)
    }

    /// Positive entries in ascending `(from, to)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((VertexId, VertexId), &S)> + '_ {
        self.flows.iter().map(|(&k, m)| (k, m))
    }

    /// Row sums, i.e. the first marginal.
    pub fn source_marginal(&self) -> SparseMeasure<S> {
        SparseMeasure::from_masses(self.flows.iter().map(|(&(u, _), m)| (u, m.clone())))
            .expect("flows are positive")
    }

    /// Column sums, i.e. the second marginal.
    pub fn target_marginal(&self) -> SparseMeasure<S> {
        SparseMeasure::from_masses(self.flows.iter().map(|(&(_, v), m)| (v, m.clone())))
            .expect("flows are positive")
    }

    /// `Σ flow(u, v)·d(u, v)`; `None` if a used pair is unreachable.
    pub fn cost(&self, distances: &impl DistanceOracle) -> Option<S> {
        self.flows.iter().try_fold(S::zero(), |acc, (&(u, v), m)| {
            let d = distances.distance(u, v)?;
            Some(acc + m.mul_int(d as i64))
        })
    }
}

/// Function on vertices with `f(u) − f(v) ≤ d(u, v)` on the joint support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzPotential {
    values: BTreeMap<VertexId, Rational>,
}

impl LipschitzPotential {
    /// Wraps raw values; feasibility is checked by [`lipschitz_objective`].
    pub fn new(values: impl IntoIterator<Item = (VertexId, Rational)>) -> Self {
        Self { values: values.into_iter().collect() }
    }

    pub fn get(&self, vertex: VertexId) -> Option<&Rational> {
        self.values.get(&vertex)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Rational)> + '_ {
        self.values.iter().map(|(&v, f)| (v, f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportResult<S> {
    pub value: S,
    pub coupling: Coupling<S>,
    pub potential: LipschitzPotential,
}

/// Returns the joint support after checking both measures carry equal mass.
fn joint_support<S: Scalar>(
    mu: &SparseMeasure<S>,
    nu: &SparseMeasure<S>,
) -> Result<Vec<VertexId>, TransportError> {
    let (a, b) = (mu.total(), nu.total());
    if a != b {
        return Err(TransportError::MassMismatch(a.to_string(), b.to_string()));
    }
    let mut joint: Vec<_> = mu.support().chain(nu.support()).collect();
    joint.sort_unstable();
    joint.dedup();
    Ok(joint)
}

fn cost_table(
    sources: &[VertexId],
    sinks: &[VertexId],
    distances: &impl DistanceOracle,
) -> Result<Vec<Vec<i64>>, TransportError> {
    sources
        .iter()
        .map(|&u| {
            sinks
                .iter()
                .map(|&v| {
                    distances
                        .distance(u, v)
                        .map(i64::from)
                        .ok_or(TransportError::InfiniteRequiredDistance(u, v))
                })
                .collect()
        })
        .collect()
}

/// Exact optimal transport between `mu` and `nu` with costs `d(u, v)`.
pub fn wasserstein<S: Scalar>(
    mu: &SparseMeasure<S>,
    nu: &SparseMeasure<S>,
    distances: &impl DistanceOracle,
) -> Result<TransportResult<S>, TransportError> {
    joint_support(mu, nu)?;
    let sources: Vec<_> = mu.support().collect();
    let sinks: Vec<_> = nu.support().collect();
    let cost = cost_table(&sources, &sinks, distances)?;

    if mu == nu {
        let flows = mu.iter().map(|(v, m)| ((v, v), m.clone())).collect();
        let potential = LipschitzPotential::new(sources.iter().map(|&v| (v, int(0))));
        return Ok(TransportResult {
            value: S::zero(),
            coupling: Coupling { flows },
            potential,
        });
    }

    let supply: Vec<S> = mu.iter().map(|(_, m)| m.clone()).collect();
    let demand: Vec<S> = nu.iter().map(|(_, m)| m.clone()).collect();
    let mut network = FlowNetwork::new(supply, demand, cost);
    network.solve();

    let mut flows = BTreeMap::new();
    let mut value = S::zero();
    for (i, &u) in sources.iter().enumerate() {
        for (j, &v) in sinks.iter().enumerate() {
            let f = &network.flow[i][j];
            if f.is_positive() {
                value = value + f.mul_int(network.cost[i][j]);
                flows.insert((u, v), f.clone());
            }
        }
    }

    let sink_duals = network.sink_duals();
    let potential = unify_potential(&sources, &sinks, &sink_duals, distances);
    let result = TransportResult { value, coupling: Coupling { flows }, potential };
    debug_assert_eq!(
        lipschitz_objective(&result.potential, mu, nu, distances).as_ref(),
        Ok(&result.value)
    );
    Ok(result)
}

/// Collapses the bipartite dual `(φ, ψ)` into one potential on the joint
/// support via `f(z) = min_j d(z, v_j) + ψ_j`, then shifts so the first
/// source vertex has value zero.
///
/// The triangle inequality makes `f` 1-Lipschitz; `f ≥ φ` on sources and
/// `f ≤ ψ` on sinks keep the dual objective at the optimum.
fn unify_potential(
    sources: &[VertexId],
    sinks: &[VertexId],
    sink_duals: &[i64],
    distances: &impl DistanceOracle,
) -> LipschitzPotential {
    let mut joint: Vec<_> = sources.iter().chain(sinks).copied().collect();
    joint.sort_unstable();
    joint.dedup();
    let values: BTreeMap<VertexId, i64> = joint
        .iter()
        .map(|&z| {
            let best = sinks
                .iter()
                .zip(sink_duals)
                .filter_map(|(&v, psi)| distances.distance(z, v).map(|d| i64::from(d) + psi))
                .min()
                .expect("every support vertex reaches some sink");
            (z, best)
        })
        .collect();
    let anchor = values[&sources[0]];
    LipschitzPotential::new(values.into_iter().map(|(z, f)| (z, int(f - anchor))))
}

/// Dual objective `Σ_z f(z)(μ(z) − ν(z))` of a potential, after checking
/// that it is defined and 1-Lipschitz on the joint support.
pub fn lipschitz_objective<S: Scalar>(
    potential: &LipschitzPotential,
    mu: &SparseMeasure<S>,
    nu: &SparseMeasure<S>,
    distances: &impl DistanceOracle,
) -> Result<S, TransportError> {
    let joint = joint_support(mu, nu)?;
    let values = joint
        .iter()
        .map(|&z| potential.get(z).ok_or(TransportError::PotentialUndefined(z)))
        .collect::<Result<Vec<_>, _>>()?;
    for (a, &u) in joint.iter().enumerate() {
        for (b, &v) in joint.iter().enumerate() {
            if let Some(d) = distances.distance(u, v) {
                if values[a] - values[b] > int(i64::from(d)) {
                    return Err(TransportError::LipschitzViolation(u, v));
                }
            }
        }
    }
    Ok(joint.iter().zip(values).fold(S::zero(), |acc, (&z, f)| {
        acc + (mu.mass(z) - nu.mass(z)).scale(f)
    }))
}

/// Residual network of the bipartite transportation problem.
///
/// Node 0 is the super source, `1..=m` the supply vertices, `m+1..=m+k` the
/// demand vertices and `m+k+1` the super sink.
struct FlowNetwork<S> {
    supply: Vec<S>,
    demand: Vec<S>,
    cost: Vec<Vec<i64>>,
    shipped: Vec<S>,
    received: Vec<S>,
    flow: Vec<Vec<S>>,
    open: Residual,
}

/// Which bounded residual arcs currently have positive capacity.
#[derive(Default)]
struct Residual {
    supply_left: Vec<bool>,
    shipped: Vec<bool>,
    flow: Vec<Vec<bool>>,
    demand_left: Vec<bool>,
}

#[derive(Clone, Copy)]
struct Arc {
    to: usize,
    cost: i64,
}

impl<S: Scalar> FlowNetwork<S> {
    fn new(supply: Vec<S>, demand: Vec<S>, cost: Vec<Vec<i64>>) -> Self {
        let (m, k) = (supply.len(), demand.len());
        let mut network = Self {
            shipped: vec![S::zero(); m],
            received: vec![S::zero(); k],
            flow: vec![vec![S::zero(); k]; m],
            supply,
            demand,
            cost,
            open: Residual::default(),
        };
        network.refresh();
        network
    }

    fn refresh(&mut self) {
        self.open = Residual {
            supply_left: self.shipped.iter().zip(&self.supply).map(|(s, t)| s < t).collect(),
            shipped: self.shipped.iter().map(S::is_positive).collect(),
            flow: self.flow.iter().map(|row| row.iter().map(S::is_positive).collect()).collect(),
            demand_left: self.received.iter().zip(&self.demand).map(|(r, d)| r < d).collect(),
        };
    }

    fn m(&self) -> usize {
        self.supply.len()
    }

    fn k(&self) -> usize {
        self.demand.len()
    }

    fn node_count(&self) -> usize {
        self.m() + self.k() + 2
    }

    fn sink_node(&self) -> usize {
        self.m() + self.k() + 1
    }

    /// Residual arcs leaving `node`, in ascending head order.
    fn arcs(&self, node: usize) -> Vec<Arc> {
        let (m, k) = (self.m(), self.k());
        let open = &self.open;
        if node == 0 {
            (0..m).filter(|&i| open.supply_left[i]).map(|i| Arc { to: 1 + i, cost: 0 }).collect()
        } else if node <= m {
            let i = node - 1;
            let back = open.shipped[i].then_some(Arc { to: 0, cost: 0 });
            back.into_iter()
                .chain((0..k).map(|j| Arc { to: 1 + m + j, cost: self.cost[i][j] }))
                .collect()
        } else if node <= m + k {
            let j = node - 1 - m;
            let forward = open.demand_left[j].then_some(Arc { to: self.sink_node(), cost: 0 });
            (0..m)
                .filter(|&i| open.flow[i][j])
                .map(|i| Arc { to: 1 + i, cost: -self.cost[i][j] })
                .chain(forward)
                .collect()
        } else {
            Vec::new()
        }
    }

    /// Residual capacity of arc `(u, v)`; `None` if unbounded.
    fn capacity(&self, u: usize, v: usize) -> Option<S> {
        let m = self.m();
        match (u, v) {
            (0, i) => Some(self.supply[i - 1].clone() - &self.shipped[i - 1]),
            (i, 0) => Some(self.shipped[i - 1].clone()),
            (i, _) if i <= m => None,
            (j, t) if t == self.sink_node() => Some(self.demand[j - 1 - m].clone() - &self.received[j - 1 - m]),
            (j, i) => Some(self.flow[i - 1][j - 1 - m].clone()),
        }
    }

    fn solve(&mut self) {
        let n = self.node_count();
        let target = self.sink_node();
        let mut potential = vec![0i64; n];
        while self.open.supply_left.iter().any(|&open| open) {
            let dist = self.reduced_distances(&potential);
            let reach = dist[target].expect("balanced complete bipartite network");
            let path = self.lexicographic_path(&potential, &dist);
            self.augment(&path);
            for (p, d) in potential.iter_mut().zip(&dist) {
                *p += d.map_or(reach, |d| d.min(reach));
            }
        }
    }

    /// Dijkstra on reduced costs `c(u, v) + π(u) − π(v) ≥ 0`.
    fn reduced_distances(&self, potential: &[i64]) -> Vec<Option<i64>> {
        let n = self.node_count();
        let mut dist: Vec<Option<i64>> = vec![None; n];
        let mut done = vec![false; n];
        dist[0] = Some(0);
        loop {
            let next = (0..n)
                .filter(|&u| !done[u])
                .filter_map(|u| dist[u].map(|d| (d, u)))
                .min();
            let Some((du, u)) = next else { break };
            done[u] = true;
            for arc in self.arcs(u) {
                let reduced = arc.cost + potential[u] - potential[arc.to];
                debug_assert!(reduced >= 0, "negative reduced cost");
                let candidate = du + reduced;
                if dist[arc.to].is_none_or(|d| candidate < d) {
                    dist[arc.to] = Some(candidate);
                }
            }
        }
        dist
    }

    fn is_tight(&self, potential: &[i64], dist: &[Option<i64>], from: usize, arc: &Arc) -> bool {
        match (dist[from], dist[arc.to]) {
            (Some(a), Some(b)) => a + arc.cost + potential[from] - potential[arc.to] == b,
            _ => false,
        }
    }

    /// Lexicographically smallest simple source-to-sink path among the
    /// shortest ones.
    fn lexicographic_path(&self, potential: &[i64], dist: &[Option<i64>]) -> Vec<usize> {
        let target = self.sink_node();
        let mut on_path = vec![false; self.node_count()];
        let mut path = vec![0];
        on_path[0] = true;
        while let Some(&last) = path.last().filter(|&&u| u != target) {
            let next = self
                .arcs(last)
                .into_iter()
                .filter(|arc| !on_path[arc.to] && self.is_tight(potential, dist, last, arc))
                .map(|arc| arc.to)
                .find(|&v| self.reaches_target(v, potential, dist, &on_path))
                .expect("a shortest path exists");
            on_path[next] = true;
            path.push(next);
        }
        path
    }

    fn reaches_target(
        &self,
        start: usize,
        potential: &[i64],
        dist: &[Option<i64>],
        blocked: &[bool],
    ) -> bool {
        let target = self.sink_node();
        let mut seen = blocked.to_vec();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            if u == target {
                return true;
            }
            for arc in self.arcs(u) {
                if !seen[arc.to] && self.is_tight(potential, dist, u, &arc) {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        false
    }

    fn augment(&mut self, path: &[usize]) {
        let m = self.m();
        let bottleneck = path
            .windows(2)
            .filter_map(|w| self.capacity(w[0], w[1]))
            .min()
            .expect("path crosses a bounded arc");
        for w in path.windows(2) {
            let (u, v) = (w[0], w[1]);
            match (u, v) {
                (0, i) => add(&mut self.shipped[i - 1], &bottleneck),
                (i, j) if (1..=m).contains(&i) && j > m => add(&mut self.flow[i - 1][j - 1 - m], &bottleneck),
                (j, t) if t == self.sink_node() => add(&mut self.received[j - 1 - m], &bottleneck),
                (j, i) if j > m && (1..=m).contains(&i) => {
                    sub(&mut self.flow[i - 1][j - 1 - m], &bottleneck)
                }
                (i, 0) => sub(&mut self.shipped[i - 1], &bottleneck),
                _ => unreachable!("arc ({u}, {v}) is not in the residual network"),
            }
        }
        self.refresh();
    }

    /// Sink-side dual values `ψ_j` of an optimal flow.
    ///
    /// Bellman–Ford from a virtual root over the final residual graph
    /// gives distances `π` with `π(j) ≤ π(i) + c(i, j)` everywhere and
    /// equality on used arcs; `φ = −π` on supply vertices and `ψ = −π` on
    /// demand vertices form an optimal dual pair.
    fn sink_duals(&self) -> Vec<i64> {
        let (m, k) = (self.m(), self.k());
        let mut pi = vec![0i64; m + k];
        for _ in 0..=m + k {
            let mut changed = false;
            for i in 0..m {
                for j in 0..k {
                    let c = self.cost[i][j];
                    if pi[i] + c < pi[m + j] {
                        pi[m + j] = pi[i] + c;
                        changed = true;
                    }
                    if self.open.flow[i][j] && pi[m + j] - c < pi[i] {
                        pi[i] = pi[m + j] - c;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        pi[m..].iter().map(|p| -p).collect()
    }
}

fn add<S: Scalar>(slot: &mut S, amount: &S) {
    *slot = slot.clone() + amount;
}

fn sub<S: Scalar>(slot: &mut S, amount: &S) {
    *slot = slot.clone() - amount;
}

/// Exhaustive optimum over the vertices of the transportation polytope.
///
/// Each vertex has a cycle-free support, so every spanning tree of the
/// complete bipartite graph between the two supports is enumerated, its
/// unique flow solved by leaf elimination, and the cheapest nonnegative one
/// kept. Masses are scaled to a common denominator and handled as
/// fixed-width integers in the lexicographic `(real, ε)` order.
pub fn oracle_wasserstein<S: Scalar>(
    mu: &SparseMeasure<S>,
    nu: &SparseMeasure<S>,
    distances: &impl DistanceOracle,
) -> Result<S, TransportError> {
    for size in [mu.support_len(), nu.support_len()] {
        if size > ORACLE_SUPPORT_LIMIT {
            return Err(TransportError::SupportTooLarge { size, limit: ORACLE_SUPPORT_LIMIT });
        }
    }
    joint_support(mu, nu)?;
    let sources: Vec<_> = mu.support().collect();
    let sinks: Vec<_> = nu.support().collect();
    let cost = cost_table(&sources, &sinks, distances)?;

    let parts: Vec<[Rational; 2]> =
        mu.iter().chain(nu.iter()).map(|(_, mass)| mass.parts()).collect();
    let denominator = parts
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let lattice = parts
        .iter()
        .map(|p| -> Option<Lattice> {
            let scale = |r: &Rational| (r.numer() * (&denominator / r.denom())).to_i128();
            Some([scale(&p[0])?, scale(&p[1])?])
        })
        .collect::<Option<Vec<_>>>()
        .ok_or(TransportError::OracleOverflow)?;
    let (supply, demand) = lattice.split_at(sources.len());

    let mut search = TreeSearch::new(supply, demand, &cost);
    search.run();
    let best = search.best.expect("the product coupling's support contains a spanning tree");
    let unscale = |x: i128| Rational::new(BigInt::from(x), denominator.clone());
    Ok(S::from_parts([unscale(best[0]), unscale(best[1])]).expect("costs stay in the scalar's field"))
}

/// `(real, ε)` coordinates scaled by a common denominator.
type Lattice = [i128; 2];

fn lattice_is_negative(x: &Lattice) -> bool {
    x[0] < 0 || (x[0] == 0 && x[1] < 0)
}

/// Upper bound on `m + k` nodes in the oracle's bipartite graph.
const MAX_NODES: usize = 2 * ORACLE_SUPPORT_LIMIT;

struct TreeSearch<'a> {
    supply: &'a [Lattice],
    demand: &'a [Lattice],
    cost: &'a [Vec<i64>],
    chosen: Vec<(usize, usize)>,
    best: Option<Lattice>,
}

impl<'a> TreeSearch<'a> {
    fn new(supply: &'a [Lattice], demand: &'a [Lattice], cost: &'a [Vec<i64>]) -> Self {
        Self { supply, demand, cost, chosen: Vec::with_capacity(MAX_NODES), best: None }
    }

    fn run(&mut self) {
        let mut components = [0u8; MAX_NODES];
        for (v, c) in components.iter_mut().enumerate() {
            *c = v as u8;
        }
        self.extend(0, components, false);
    }

    /// Chooses cells `(i, j)` in row-major order, skipping any that would
    /// close a cycle, until a spanning tree is formed. `row_used` records
    /// whether the current row already has a cell; a row left empty cannot
    /// be spanned.
    fn extend(&mut self, cell: usize, components: [u8; MAX_NODES], row_used: bool) {
        let (m, k) = (self.supply.len(), self.demand.len());
        let needed = m + k - 1;
        if self.chosen.len() == needed {
            self.evaluate();
            return;
        }
        if m * k - cell < needed - self.chosen.len() {
            return;
        }
        let (i, j) = (cell / k, cell % k);
        let last_in_row = j + 1 == k;
        let (a, b) = (components[i], components[m + j]);
        if a != b {
            let mut merged = components;
            for c in merged.iter_mut() {
                if *c == b {
                    *c = a;
                }
            }
            self.chosen.push((i, j));
            self.extend(cell + 1, merged, !last_in_row);
            self.chosen.pop();
        }
        if !(last_in_row && !row_used) {
            self.extend(cell + 1, components, row_used && !last_in_row);
        }
    }

    fn evaluate(&mut self) {
        let m = self.supply.len();
        let edges = self.chosen.len();
        let mut residual = [[0i128; 2]; MAX_NODES];
        for (slot, mass) in residual.iter_mut().zip(self.supply.iter().chain(self.demand)) {
            *slot = *mass;
        }
        let mut degree = [0u8; MAX_NODES];
        for &(i, j) in &self.chosen {
            degree[i] += 1;
            degree[m + j] += 1;
        }
        let mut alive = [true; MAX_NODES];
        let mut total: Lattice = [0, 0];
        for _ in 0..edges {
            // Peel any leaf: its single edge carries all of its residual mass.
            let Some((e, leaf, other)) = self.chosen.iter().enumerate().find_map(|(e, &(i, j))| {
                if !alive[e] {
                    None
                } else if degree[i] == 1 {
                    Some((e, i, m + j))
                } else if degree[m + j] == 1 {
                    Some((e, m + j, i))
                } else {
                    None
                }
            }) else {
                return;
            };
            let flow = residual[leaf];
            if lattice_is_negative(&flow) {
                return;
            }
            alive[e] = false;
            degree[leaf] -= 1;
            degree[other] -= 1;
            residual[other][0] -= flow[0];
            residual[other][1] -= flow[1];
            residual[leaf] = [0, 0];
            let (i, j) = self.chosen[e];
            let c = i128::from(self.cost[i][j]);
            total[0] += c * flow[0];
            total[1] += c * flow[1];
            // Costs and feasible flows are nonnegative, so the total only grows.
            if self.best.is_some_and(|best| total >= best) {
                return;
            }
        }
        if self.best.is_none_or(|best| total < best) {
            self.best = Some(total);
        }
    }
}
