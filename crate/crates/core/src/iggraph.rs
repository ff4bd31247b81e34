//! Invariably generating graphs of PSL(2, q) and of its direct powers.
//!
//! Vertices of the power graph are tuples of non-identity class labels. A
//! tuple with an identity coordinate cannot meet the first condition below
//! and would be isolated, so such tuples are never built. Two tuples are
//! adjacent iff every column is a generating pair and no two columns lie in
//! the same Aut-orbit.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::autorbits::{OrbitPartition, UnionFind};
use crate::error::{Error, Result};
use crate::psl2::ClassLabel;
use crate::structure::{verify_2covering, CoveringReport, Method, Psi2Table, StructuralModel, SubgroupKind};

pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;
/// Largest graph handed to the bipartite shortcut for clique and colouring.
pub const BIPARTITE_SHORTCUT_CAP: usize = 10_000;
/// Largest non-bipartite graph handed to the exact solvers.
pub const EXACT_SOLVER_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct IgGraph {
    q: u32,
    t: usize,
    method: Option<Method>,
    labels: Vec<ClassLabel>,
    /// Inventory indices per vertex; one entry for `t = 1`.
    tuples: Vec<Vec<usize>>,
    names: Vec<String>,
    adj: Vec<Vec<usize>>,
    parts: Option<Vec<u8>>,
}

impl IgGraph {
    /// A plain graph on `n` vertices, for solver and traversal tests.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        IgGraph {
            q: 0,
            t: 1,
            method: None,
            labels: vec![],
            tuples: vec![],
            names: (0..n).map(|i| format!("v{i}")).collect(),
            adj,
            parts: None,
        }
    }

    fn labelled(q: u32, t: usize, method: Method, labels: Vec<ClassLabel>, tuples: Vec<Vec<usize>>, adj: Vec<Vec<usize>>) -> Self {
        let names = tuples
            .iter()
            .map(|tu| {
                if tu.len() == 1 {
                    labels[tu[0]].to_string()
                } else {
                    let parts: Vec<String> = tu.iter().map(|&i| labels[i].to_string()).collect();
                    format!("({})", parts.join(","))
                }
            })
            .collect();
        IgGraph { q, t, method: Some(method), labels, tuples, names, adj, parts: None }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn power(&self) -> usize {
        self.t
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    /// Inventory indices of a vertex's coordinates.
    pub fn tuple(&self, v: usize) -> &[usize] {
        &self.tuples[v]
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.adj.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn isolated(&self) -> Vec<usize> {
        (0..self.adj.len()).filter(|&v| self.adj[v].is_empty()).collect()
    }

    /// Part annotation (1 or 2 per vertex) used by the exports.
    pub fn set_parts(&mut self, parts: Vec<u8>) {
        assert_eq!(parts.len(), self.vertex_count());
        self.parts = Some(parts);
    }

    pub fn parts(&self) -> Option<&[u8]> {
        self.parts.as_deref()
    }

    /// Drops isolated vertices.
    pub fn without_isolated(&self) -> IgGraph {
        let keep: Vec<usize> = (0..self.adj.len()).filter(|&v| !self.adj[v].is_empty()).collect();
        self.induced(&keep)
    }

    fn induced(&self, keep: &[usize]) -> IgGraph {
        let mut new_id = vec![usize::MAX; self.adj.len()];
        for (n, &v) in keep.iter().enumerate() {
            new_id[v] = n;
        }
        let adj = keep
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&w| new_id[w] != usize::MAX).map(|&w| new_id[w]).collect())
            .collect();
        IgGraph {
            q: self.q,
            t: self.t,
            method: self.method,
            labels: self.labels.clone(),
            tuples: keep.iter().filter_map(|&v| self.tuples.get(v).cloned()).collect(),
            names: keep.iter().map(|&v| self.names[v].clone()).collect(),
            adj,
            parts: self.parts.as_ref().map(|p| keep.iter().map(|&v| p[v]).collect()),
        }
    }

    /// Component id per vertex and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.adj.len());
        for (a, b) in self.edges() {
            uf.union(a, b);
        }
        uf.blocks()
    }

    /// A proper 2-colouring (parts 1 and 2), if one exists. Each component
    /// colours its lowest vertex 1.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut colour = vec![0u8; self.adj.len()];
        let mut queue = VecDeque::new();
        for s in 0..self.adj.len() {
            if colour[s] != 0 {
                continue;
            }
            colour[s] = 1;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if colour[w] == 0 {
                        colour[w] = 3 - colour[v];
                        queue.push_back(w);
                    } else if colour[w] == colour[v] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    fn eccentricities(&self) -> Vec<usize> {
        (0..self.adj.len())
            .into_par_iter()
            .map(|s| {
                let mut dist = vec![usize::MAX; self.adj.len()];
                dist[s] = 0;
                let mut queue = VecDeque::from([s]);
                let mut far = 0;
                while let Some(v) = queue.pop_front() {
                    far = dist[v];
                    for &w in &self.adj[v] {
                        if dist[w] == usize::MAX {
                            dist[w] = dist[v] + 1;
                            queue.push_back(w);
                        }
                    }
                }
                far
            })
            .collect()
    }

    /// Largest distance inside any component, by breadth-first search from
    /// every vertex.
    pub fn diameter_bfs(&self) -> usize {
        self.eccentricities().into_iter().max().unwrap_or(0)
    }

    /// Largest distance inside any component. Vertices with equal
    /// neighbourhoods are merged first; two such vertices are at distance 2.
    pub fn diameter(&self) -> usize {
        let mut groups: HashMap<&[usize], Vec<usize>> = HashMap::new();
        for v in 0..self.adj.len() {
            groups.entry(self.adj[v].as_slice()).or_default().push(v);
        }
        let twins = groups.iter().any(|(n, vs)| !n.is_empty() && vs.len() > 1);
        let mut reps: Vec<usize> = groups.values().map(|vs| vs[0]).collect();
        reps.sort_unstable();
        let quotient = self.induced(&reps);
        let d = quotient.diameter_bfs();
        if twins {
            d.max(2)
        } else {
            d
        }
    }

    fn adjacency_bits(&self) -> Vec<u64> {
        self.adj.iter().map(|row| row.iter().fold(0u64, |m, &w| m | 1 << w)).collect()
    }

    /// Clique number.
    pub fn clique_number(&self) -> Result<usize> {
        if let Some(k) = self.trivial_invariant()? {
            return Ok(k);
        }
        let bits = self.adjacency_bits();
        let mut best = 0;
        max_clique(&bits, 0, (1u64 << self.adj.len()) - 1, &mut best);
        Ok(best)
    }

    /// Chromatic number.
    pub fn chromatic_number(&self) -> Result<usize> {
        if let Some(k) = self.trivial_invariant()? {
            return Ok(k);
        }
        let n = self.adj.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.adj[v].len()));
        (1..=n)
            .find(|&k| colourable(&self.adj, &order, &mut vec![usize::MAX; n], 0, k))
            .ok_or(Error::SolverCap { vertices: n, cap: EXACT_SOLVER_CAP })
    }

    /// Shared answer of both solvers for empty, edgeless and bipartite
    /// graphs; enforces the caps otherwise.
    fn trivial_invariant(&self) -> Result<Option<usize>> {
        let n = self.adj.len();
        if n == 0 {
            return Ok(Some(0));
        }
        if self.edge_count() == 0 {
            return Ok(Some(1));
        }
        if n <= BIPARTITE_SHORTCUT_CAP && self.is_bipartite() {
            return Ok(Some(2));
        }
        if n > EXACT_SOLVER_CAP {
            return Err(Error::SolverCap { vertices: n, cap: EXACT_SOLVER_CAP });
        }
        Ok(None)
    }

    pub fn summary(&self) -> GraphSummary {
        let (_, components) = self.components();
        GraphSummary {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            components,
            bipartite: self.is_bipartite(),
            diameter: self.diameter(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph invgen {\n");
        for v in 0..self.adj.len() {
            match &self.parts {
                Some(p) => writeln!(s, "  \"{}\" [part={}];", self.names[v], p[v]),
                None => writeln!(s, "  \"{}\";", self.names[v]),
            }
            .expect("string write");
        }
        for (a, b) in self.edges() {
            writeln!(s, "  \"{}\" -- \"{}\";", self.names[a], self.names[b]).expect("string write");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (component_of, components) = self.components();
        serde_json::json!({
            "q": self.q,
            "power": self.t,
            "method": self.method,
            "vertices": self.names,
            "edges": self.edges(),
            "parts": self.parts,
            "components": components,
            "component_of": component_of,
        })
    }
}

fn max_clique(bits: &[u64], size: usize, candidates: u64, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    let mut rest = candidates;
    while rest != 0 {
        if size + rest.count_ones() as usize <= *best {
            return;
        }
        let v = rest.trailing_zeros() as usize;
        rest &= !(1 << v);
        max_clique(bits, size + 1, rest & bits[v], best);
    }
}

fn colourable(adj: &[Vec<usize>], order: &[usize], colour: &mut [usize], at: usize, k: usize) -> bool {
    if at == order.len() {
        return true;
    }
    let v = order[at];
    // colours above the largest in use are interchangeable
    let used = order[..at].iter().map(|&u| colour[u] + 1).max().unwrap_or(0);
    for c in 0..k.min(used + 1) {
        if adj[v].iter().all(|&w| colour[w] != c) {
            colour[v] = c;
            if colourable(adj, order, colour, at + 1, k) {
                return true;
            }
        }
    }
    colour[v] = usize::MAX;
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub bipartite: bool,
    pub diameter: usize,
}

impl std::fmt::Display for GraphSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertices={} edges={} components={} bipartite={} diameter={}",
            self.vertices, self.edges, self.components, self.bipartite, self.diameter
        )
    }
}

/// The graph on non-identity classes with the table's pairs as edges;
/// `plus` drops isolated classes.
pub fn lambda_graph(psi2: &Psi2Table, plus: bool) -> IgGraph {
    let labels = psi2.labels().to_vec();
    let verts: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i].is_identity()).collect();
    let mut pos = vec![usize::MAX; labels.len()];
    for (n, &i) in verts.iter().enumerate() {
        pos[i] = n;
    }
    let mut adj = vec![Vec::new(); verts.len()];
    for &(i, j) in psi2.pairs() {
        adj[pos[i]].push(pos[j]);
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    let tuples = verts.iter().map(|&i| vec![i]).collect();
    let g = IgGraph::labelled(psi2.q(), 1, psi2.method(), labels, tuples, adj);
    if plus {
        g.without_isolated()
    } else {
        g
    }
}

/// The graph of the `t`-th direct power. Requires `t <= beta` and at most
/// `cap` tuples.
pub fn lambda_power(psi2: &Psi2Table, orbits: &OrbitPartition, t: usize, plus: bool, cap: usize) -> Result<IgGraph> {
    let beta = orbits.count();
    if t == 0 || t > beta {
        return Err(Error::PowerTooLarge { t, beta });
    }
    let labels = psi2.labels().to_vec();
    let base: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i].is_identity()).collect();
    let b = base.len();
    let needed = (b as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(Error::VertexCap { needed, cap });
    }
    let n = needed as usize;
    let mut pos = vec![usize::MAX; labels.len()];
    for (k, &i) in base.iter().enumerate() {
        pos[i] = k;
    }
    // partners[c] = (d, orbit) over base positions
    let partners: Vec<Vec<(usize, usize)>> = base
        .iter()
        .map(|&c| {
            psi2.pairs()
                .iter()
                .enumerate()
                .filter(|(_, &(i, _))| i == c)
                .map(|(m, &(_, j))| (pos[j], orbits.orbit_of[m]))
                .collect()
        })
        .collect();
    let decode = |mut v: usize| -> Vec<usize> {
        let mut digits = vec![0; t];
        for d in digits.iter_mut().rev() {
            *d = v % b;
            v /= b;
        }
        digits
    };
    let adj: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let digits = decode(v);
            let mut out = Vec::new();
            let mut used = Vec::with_capacity(t);
            neighbours(&partners, &digits, 0, 0, b, &mut used, &mut out);
            out.sort_unstable();
            out
        })
        .collect();
    let tuples = (0..n).map(|v| decode(v).into_iter().map(|d| base[d]).collect()).collect();
    let g = IgGraph::labelled(psi2.q(), t, psi2.method(), labels, tuples, adj);
    Ok(if plus { g.without_isolated() } else { g })
}

fn neighbours(
    partners: &[Vec<(usize, usize)>],
    digits: &[usize],
    col: usize,
    acc: usize,
    b: usize,
    used: &mut Vec<usize>,
    out: &mut Vec<usize>,
) {
    if col == digits.len() {
        out.push(acc);
        return;
    }
    for &(d, orbit) in &partners[digits[col]] {
        if used.contains(&orbit) {
            continue;
        }
        used.push(orbit);
        neighbours(partners, digits, col + 1, acc * b + d, b, used, out);
        used.pop();
    }
}

/// Part 1 for classes only in conjugates of the Borel subgroup, part 2 for
/// classes only in conjugates of the nonsplit dihedral subgroup, 0 for
/// anything else. Only meaningful for `t = 1`.
pub fn covering_parts(graph: &IgGraph, covering: &CoveringReport) -> Vec<u8> {
    (0..graph.vertex_count())
        .map(|v| {
            let l = graph.tuple(v)[0];
            if covering.only_borel.contains(&l) {
                1
            } else if covering.only_dihedral.contains(&l) {
                2
            } else {
                0
            }
        })
        .collect()
}

/// Every edge joins part 1 to part 2.
pub fn edges_cross_parts(graph: &IgGraph, parts: &[u8]) -> bool {
    graph.edges().iter().all(|&(a, b)| parts[a] * parts[b] == 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GammaWitness {
    pub gamma: usize,
    pub witness: [SubgroupKind; 2],
}

/// Two proper subgroups whose conjugates cover the group; no group is a
/// union of conjugates of a single proper subgroup, so this is optimal.
pub fn gamma_upper(model: &StructuralModel) -> Result<GammaWitness> {
    if !verify_2covering(model).covers {
        return Err(Error::CoveringFailed(model.q()));
    }
    Ok(GammaWitness { gamma: 2, witness: [SubgroupKind::Borel, SubgroupKind::DihedralNonsplit] })
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `log2` of a big integer from its top 64 bits.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        let small: u64 = x.try_into().expect("fits");
        return (small as f64).log2();
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).try_into().expect("64 bits");
    shift as f64 + (top as f64).log2()
}

fn as_decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Half the central binomial coefficient, as a certified lower bound on
/// component counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub q: Option<u32>,
    pub psi2: Option<usize>,
    pub out_order: Option<u64>,
    /// Exact orbit count, when computed.
    pub beta: Option<u64>,
    pub beta_lower: u64,
    pub beta_upper: Option<u64>,
    /// The even value the bound is evaluated at.
    pub beta_used: u64,
    #[serde(serialize_with = "as_decimal")]
    pub bound: BigUint,
    pub log2: f64,
}

/// `C(beta, beta/2) / 2`.
pub fn component_bound(beta: u64) -> Result<BoundReport> {
    let bound = half_central(beta)?;
    Ok(BoundReport {
        q: None,
        psi2: None,
        out_order: None,
        beta: Some(beta),
        beta_lower: beta,
        beta_upper: Some(beta),
        beta_used: beta,
        log2: log2_big(&bound),
        bound,
    })
}

fn half_central(beta: u64) -> Result<BigUint> {
    if beta % 2 == 1 {
        return Err(Error::OddBeta(beta));
    }
    if beta < 2 {
        return Err(Error::BetaTooSmall);
    }
    Ok(binomial(beta, beta / 2) / 2u32)
}

/// Lower bound from the pair table alone: every orbit has at most `d f`
/// pairs, so `beta >= ceil(|Psi2| / (d f))`, rounded down to even.
pub fn n_lower_bound_report(model: &StructuralModel, psi2: &Psi2Table) -> Result<BoundReport> {
    let n = psi2.len() as u64;
    let out = model.group().out_order();
    let beta_lower = n.div_ceil(out);
    let beta_used = beta_lower - beta_lower % 2;
    let bound = half_central(beta_used)?;
    Ok(BoundReport {
        q: Some(model.q()),
        psi2: Some(psi2.len()),
        out_order: Some(out),
        beta: None,
        beta_lower,
        beta_upper: Some(n),
        beta_used,
        log2: log2_big(&bound),
        bound,
    })
}
