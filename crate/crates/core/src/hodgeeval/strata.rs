//! Boundary strata families and their lambda_g pairings with kappa
//! monomials.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::partitions::Partition;

use super::graph::{socle_dim, DualGraph, Vertex};
use super::integrals::{socle_integral, SocleIntegrand};

/// A stratum class decorated with psi powers at markings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub label: String,
    pub graph: DualGraph,
    /// marking label -> psi exponent
    pub psi: BTreeMap<u32, u32>,
}

impl Stratum {
    pub fn plain(label: String, graph: DualGraph) -> Self {
        Stratum {
            label,
            graph,
            psi: BTreeMap::new(),
        }
    }

    /// Degree of the kappa monomials this class pairs with.
    pub fn pairing_degree(&self) -> u32 {
        self.graph.socle_dims().iter().sum::<u32>() - self.psi.values().sum::<u32>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StratumFamily {
    /// Elliptic chains in `M_{g,1}` indexed by `P(g-1)`.
    S,
    /// Elliptic chains in `M_{g,2}` indexed by `P(g)`.
    T,
    /// Genus-2 headed chains in `M_g` indexed by `P(g-1)` minus `(1,...,1)`.
    U,
    /// Elliptic chains in `M_g` indexed by `P(g-2)`.
    UPrime,
    /// Rational chains in `M_{0,n}` indexed by `P(d, n-2-d)`.
    V,
    /// Classes `psi_1^{2 delta} [W_p]` in `M_{g,1}`, `p` in `P(d, 2g-1-d)`.
    W,
    /// Classes `psi_1^{2 delta} [W~_p]` in `M_{g,2}`, `p` in `P(d, 2g-d)`.
    WTilde,
}

impl StratumFamily {
    pub fn name(self) -> &'static str {
        match self {
            StratumFamily::S => "S",
            StratumFamily::T => "T",
            StratumFamily::U => "U",
            StratumFamily::UPrime => "U'",
            StratumFamily::V => "V",
            StratumFamily::W => "W",
            StratumFamily::WTilde => "W~",
        }
    }
}

fn invalid(family: StratumFamily, p: &Partition, reason: impl Into<String>) -> Error {
    Error::InvalidPartition {
        family: family.name(),
        partition: p.to_string(),
        reason: reason.into(),
    }
}

// Builds a graph from a spine of (genus, elliptic tail count, markings).
struct Builder {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn vertex(&mut self, genus: u32, markings: Vec<u32>) -> usize {
        self.vertices.push(Vertex::new(genus, markings));
        self.vertices.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    fn tails(&mut self, v: usize, count: u32) {
        for _ in 0..count {
            let t = self.vertex(1, vec![]);
            self.edge(v, t);
        }
    }

    fn chain(&mut self, genera: &[u32]) -> Vec<usize> {
        let ids: Vec<usize> = genera.iter().map(|&g| self.vertex(g, vec![])).collect();
        for w in ids.windows(2) {
            self.edge(w[0], w[1]);
        }
        ids
    }

    fn finish(self) -> Result<DualGraph> {
        DualGraph::new(self.vertices, self.edges)
    }
}

/// `S_p` in `M_{g,1}` for `p` in `P(g-1)`.
pub fn stratum_s(g: u32, p: &Partition) -> Result<Stratum> {
    let fam = StratumFamily::S;
    if g == 0 || p.weight() + 1 != g {
        return Err(invalid(
            fam,
            p,
            format!("not a partition of g - 1 = {}", g as i64 - 1),
        ));
    }
    let l = p.len();
    let mut b = Builder::new();
    let chain = b.chain(&vec![1; l + 1]);
    b.vertices[chain[0]].markings.push(1);
    for (i, &part) in p.parts().iter().enumerate() {
        b.tails(chain[i], part - 1);
    }
    Ok(Stratum::plain(format!("S{p}"), b.finish()?))
}

/// `T_p` in `M_{g,2}` for `p` in `P(g)`.
pub fn stratum_t(g: u32, p: &Partition) -> Result<Stratum> {
    let fam = StratumFamily::T;
    if g == 0 || p.weight() != g {
        return Err(invalid(fam, p, format!("not a partition of g = {g}")));
    }
    let l = p.len();
    let mut b = Builder::new();
    let chain = b.chain(&vec![1; l]);
    b.vertices[chain[0]].markings.push(1);
    b.vertices[chain[l - 1]].markings.push(2);
    for (i, &part) in p.parts().iter().enumerate() {
        b.tails(chain[i], part - 1);
    }
    Ok(Stratum::plain(format!("T{p}"), b.finish()?))
}

/// `U_p` in `M_g` for `p` in `P(g-1)` other than `(1,...,1)`.
pub fn stratum_u(g: u32, p: &Partition) -> Result<Stratum> {
    let fam = StratumFamily::U;
    if g < 2 || p.weight() + 1 != g {
        return Err(invalid(
            fam,
            p,
            format!("not a partition of g - 1 = {}", g as i64 - 1),
        ));
    }
    if p.parts()[0] < 2 {
        return Err(invalid(fam, p, "the longest partition is excluded"));
    }
    let l = p.len();
    let mut genera = vec![2];
    genera.extend(std::iter::repeat_n(1, l));
    let mut b = Builder::new();
    let chain = b.chain(&genera);
    b.tails(chain[0], p.parts()[0] - 2);
    for i in 1..l {
        b.tails(chain[i], p.parts()[i] - 1);
    }
    Ok(Stratum::plain(format!("U{p}"), b.finish()?))
}

/// `U'_p` in `M_g` for `p` in `P(g-2)`.
pub fn stratum_u_prime(g: u32, p: &Partition) -> Result<Stratum> {
    let fam = StratumFamily::UPrime;
    if g < 2 || p.weight() + 2 != g {
        return Err(invalid(
            fam,
            p,
            format!("not a partition of g - 2 = {}", g as i64 - 2),
        ));
    }
    let l = p.len();
    let mut b = Builder::new();
    let chain = b.chain(&vec![1; l + 2]);
    for (i, &part) in p.parts().iter().enumerate() {
        b.tails(chain[i + 1], part - 1);
    }
    Ok(Stratum::plain(format!("U'{p}"), b.finish()?))
}

/// `V_q` in `M_{0,n}` for `q` in `P(d, n-2-d)`: a rational chain of length
/// `L = n - d - 2` carrying `q_1 + 2, q_2 + 1, ..., q_L + 2` markings, with
/// labels handed out left to right.
pub fn stratum_v(n: u32, q: &Partition) -> Result<Stratum> {
    let fam = StratumFamily::V;
    let d = q.weight();
    if n < 3 || d > n - 3 {
        return Err(invalid(
            fam,
            q,
            format!("degree {d} outside 0..={}", n as i64 - 3),
        ));
    }
    let len = (n - d - 2) as usize;
    if q.len() > len {
        return Err(invalid(fam, q, format!("longer than n - 2 - d = {len}")));
    }
    let mut parts = q.parts().to_vec();
    parts.resize(len, 0);
    let counts: Vec<u32> = if len == 1 {
        vec![n]
    } else {
        (0..len)
            .map(|i| {
                if i == 0 || i == len - 1 {
                    parts[i] + 2
                } else {
                    parts[i] + 1
                }
            })
            .collect()
    };
    let mut b = Builder::new();
    let chain = b.chain(&vec![0; len]);
    let mut next = 1;
    for (i, &c) in counts.iter().enumerate() {
        b.vertices[chain[i]].markings = (next..next + c).collect();
        next += c;
    }
    Ok(Stratum::plain(format!("V{q}"), b.finish()?))
}

/// Split `p` into odd parts and even parts, both descending.
fn odd_even(p: &Partition) -> (Vec<u32>, Vec<u32>) {
    let odd = p.parts().iter().copied().filter(|x| x % 2 == 1).collect();
    let even = p.parts().iter().copied().filter(|x| x % 2 == 0).collect();
    (odd, even)
}

// Chain A((p_i + 1)/2) of valence-2 vertices; returns (first, last).
fn chain_a(b: &mut Builder, odd: &[u32]) -> Option<(usize, usize)> {
    if odd.is_empty() {
        return None;
    }
    let genera: Vec<u32> = odd.iter().map(|p| p.div_ceil(2)).collect();
    let ids = b.chain(&genera);
    Some((ids[0], ids[ids.len() - 1]))
}

// Comb B or B~ built from the first 2r-1 even parts; returns (first spine
// vertex, last spine vertex).
fn comb(b: &mut Builder, even: &[u32], r: usize, tilde: bool) -> (usize, usize) {
    let mut spine: Vec<u32> = even[..r - 1].iter().map(|p| p / 2).collect();
    spine.push(if tilde {
        even[r - 1] / 2
    } else {
        even[r - 1] / 2 + 1
    });
    let ids = b.chain(&spine);
    for (k, &p) in even[r..2 * r - 1].iter().enumerate() {
        let t = b.vertex(p / 2 + 1, vec![]);
        b.edge(ids[k], t);
    }
    (ids[0], ids[r - 1])
}

/// The graph `Gamma_p` (one marking, label 1) and its marked vertex.
pub fn gamma_graph(p: &Partition) -> Result<(DualGraph, usize)> {
    let fam = StratumFamily::W;
    if p.is_empty() {
        return Err(invalid(fam, p, "the empty partition has no graph"));
    }
    let (odd, even) = odd_even(p);
    let mut b = Builder::new();
    let a = chain_a(&mut b, &odd);
    let v_star;
    if (p.weight() as usize + p.len()) % 2 == 1 {
        let r = even.len().div_ceil(2);
        let (head, _) = comb(&mut b, &even, r, false);
        match a {
            Some((first, last)) => {
                b.edge(first, head);
                v_star = last;
            }
            None => v_star = head,
        }
    } else if !even.is_empty() {
        let r = even.len() / 2;
        let (head, _) = comb(&mut b, &even[..2 * r - 1], r, false);
        let c = b.vertex(even[2 * r - 1] / 2, vec![]);
        let e = b.vertex(1, vec![]);
        b.edge(c, e);
        match a {
            Some((first, last)) => {
                b.edge(first, head);
                b.edge(last, c);
            }
            None => b.edge(head, c),
        }
        v_star = c;
    } else {
        let (first, last) = a.expect("nonempty partition with no even parts");
        let e = b.vertex(1, vec![]);
        b.edge(last, e);
        v_star = first;
    }
    b.vertices[v_star].markings.push(1);
    Ok((b.finish()?, v_star))
}

/// The graph `Gamma~_p` (markings 1 and 2) and the vertex carrying
/// marking 1.
pub fn gamma_tilde_graph(p: &Partition) -> Result<(DualGraph, usize)> {
    let fam = StratumFamily::WTilde;
    if p.is_empty() {
        return Err(invalid(fam, p, "the empty partition has no graph"));
    }
    let (odd, even) = odd_even(p);
    let mut b = Builder::new();
    let a = chain_a(&mut b, &odd);
    let v_star;
    if (p.weight() as usize + p.len()).is_multiple_of(2) && !even.is_empty() {
        let r = even.len() / 2;
        let (head, tail) = comb(&mut b, &even[..2 * r - 1], r, true);
        let c = b.vertex(even[2 * r - 1] / 2 + 1, vec![]);
        match a {
            Some((first, last)) => {
                b.edge(first, head);
                b.edge(last, c);
            }
            None => b.edge(head, c),
        }
        v_star = tail;
        b.vertices[tail].markings.extend([1, 2]);
    } else if (p.weight() as usize + p.len()).is_multiple_of(2) {
        let (first, last) = a.expect("nonempty partition with no even parts");
        b.vertices[first].markings.push(1);
        b.vertices[last].markings.push(2);
        v_star = first;
    } else {
        let r = even.len().div_ceil(2);
        let (head, tail) = comb(&mut b, &even, r, true);
        let e = b.vertex(1, vec![]);
        match a {
            Some((first, last)) => {
                b.edge(first, head);
                b.edge(last, e);
            }
            None => b.edge(head, e),
        }
        v_star = tail;
        b.vertices[tail].markings.extend([1, 2]);
    }
    Ok((b.finish()?, v_star))
}

/// `psi_1^{2 delta} [W_p]` in `M_{g,1}` for `p` in `P(d, 2g-1-d)`, `d > 0`.
pub fn stratum_w(g: u32, p: &Partition) -> Result<Stratum> {
    let fam = StratumFamily::W;
    let d = p.weight() as i64;
    if d == 0 || p.len() as i64 > 2 * g as i64 - 1 - d {
        return Err(invalid(fam, p, format!("not in P(d, 2g-1-d) for g = {g}")));
    }
    let (graph, v_star) = gamma_graph(p)?;
    raise_genus(fam, p, graph, v_star, g, format!("W{p}"))
}

/// `psi_1^{2 delta} [W~_p]` in `M_{g,2}` for `p` in `P(d, 2g-d)`, `d > 0`.
pub fn stratum_w_tilde(g: u32, p: &Partition) -> Result<Stratum> {
    let fam = StratumFamily::WTilde;
    let d = p.weight() as i64;
    if d == 0 || p.len() as i64 > 2 * g as i64 - d {
        return Err(invalid(fam, p, format!("not in P(d, 2g-d) for g = {g}")));
    }
    let (graph, v_star) = gamma_tilde_graph(p)?;
    raise_genus(fam, p, graph, v_star, g, format!("W~{p}"))
}

fn raise_genus(
    fam: StratumFamily,
    p: &Partition,
    mut graph: DualGraph,
    v_star: usize,
    g: u32,
    label: String,
) -> Result<Stratum> {
    let base = graph.genus();
    if base > g {
        return Err(invalid(fam, p, format!("graph genus {base} exceeds {g}")));
    }
    let delta = g - base;
    graph.vertex_mut(v_star).genus += delta;
    let mut psi = BTreeMap::new();
    if delta > 0 {
        psi.insert(1, 2 * delta);
    }
    Ok(Stratum { label, graph, psi })
}

/// Trades `count` units of genus for pairs of new markings, starting at
/// vertex `first` and then in vertex order. Socle dimensions are unchanged.
pub fn trade_genus(s: &Stratum, count: u32, first: usize) -> Result<Stratum> {
    let mut graph = s.graph.clone();
    let mut next_label = graph.num_markings() as u32 + 1;
    let n = graph.vertices().len();
    let order = std::iter::once(first).chain((0..n).filter(|&v| v != first));
    let mut left = count;
    for v in order {
        while left > 0 && graph.vertices()[v].genus > 0 {
            let vert = graph.vertex_mut(v);
            vert.genus -= 1;
            vert.markings.extend([next_label, next_label + 1]);
            next_label += 2;
            left -= 1;
        }
    }
    if left > 0 {
        return Err(Error::InvalidGraph(format!(
            "not enough genus to trade {count} units"
        )));
    }
    Ok(Stratum {
        label: format!("{}+{}pts", s.label, 2 * count),
        graph: graph.checked()?,
        psi: s.psi.clone(),
    })
}

/// `int kappa_p * [graph] * prod psi^{insertions} * lambda_g`, summing over
/// all assignments of the parts of `p` to vertices; each vertex contributes
/// its own lambda_{g_v} socle integral (`lambda_0 = 1`).
pub fn stratum_pairing(p: &Partition, graph: &DualGraph, psi: &BTreeMap<u32, u32>) -> Rational {
    let nv = graph.vertices().len();
    let mut psi_at: Vec<Vec<u32>> = Vec::with_capacity(nv);
    let mut capacity: Vec<i64> = Vec::with_capacity(nv);
    for v in 0..nv {
        let val = graph.valence(v);
        let mut exps = vec![0u32; val];
        for (k, label) in graph.vertices()[v].markings.iter().enumerate() {
            if let Some(&e) = psi.get(label) {
                exps[k] = e;
            }
        }
        let used: u32 = exps.iter().sum();
        capacity.push(socle_dim(graph.vertices()[v].genus, val) as i64 - used as i64);
        psi_at.push(exps);
    }
    if capacity.iter().any(|&c| c < 0) || capacity.iter().sum::<i64>() != p.weight() as i64 {
        return Rational::zero();
    }
    let mut assigned: Vec<Vec<u32>> = vec![Vec::new(); nv];
    let mut total = Rational::zero();
    assign(
        p.parts(),
        0,
        &mut capacity,
        &mut assigned,
        &mut |assigned| {
            let mut term = Rational::one();
            for v in 0..nv {
                let itg = SocleIntegrand::new(
                    graph.vertices()[v].genus,
                    psi_at[v].clone(),
                    Partition::new(assigned[v].clone()),
                );
                let val = socle_integral(&itg);
                if val.is_zero() {
                    return;
                }
                term *= val;
            }
            total += term;
        },
    );
    total
}

fn assign(
    parts: &[u32],
    k: usize,
    capacity: &mut [i64],
    assigned: &mut [Vec<u32>],
    f: &mut impl FnMut(&[Vec<u32>]),
) {
    if k == parts.len() {
        if capacity.iter().all(|&c| c == 0) {
            f(assigned);
        }
        return;
    }
    let part = parts[k] as i64;
    for v in 0..capacity.len() {
        if capacity[v] >= part {
            capacity[v] -= part;
            assigned[v].push(parts[k]);
            assign(parts, k + 1, capacity, assigned, f);
            assigned[v].pop();
            capacity[v] += part;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::partitions::partitions;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn s_genus_two() {
        let s = stratum_s(2, &p(&[1])).unwrap();
        assert_eq!(s.graph.vertices().len(), 2);
        assert_eq!(s.graph.codimension(), 1);
        assert_eq!(s.graph.marking_vertex(1), Some(0));
        assert_eq!(stratum_pairing(&p(&[1]), &s.graph, &s.psi), rat(1, 576));
    }

    #[test]
    fn family_bookkeeping() {
        for g in 1..=7u32 {
            for q in partitions(g - 1, None) {
                let s = stratum_s(g, &q).unwrap();
                assert_eq!(s.graph.genus(), g);
                assert_eq!(s.graph.codimension() as u32, g - 1);
                assert_eq!(s.pairing_degree(), g - 1);
            }
            for q in partitions(g, None) {
                let t = stratum_t(g, &q).unwrap();
                assert_eq!(t.graph.genus(), g);
                assert_eq!(t.graph.codimension() as u32, g - 1);
                assert_eq!(t.pairing_degree(), g);
            }
            if g >= 2 {
                for q in partitions(g - 1, None) {
                    if q.parts()[0] >= 2 {
                        let u = stratum_u(g, &q).unwrap();
                        assert_eq!(u.graph.genus(), g);
                        assert_eq!(u.graph.codimension() as u32, g - 2);
                        assert_eq!(u.pairing_degree(), g - 1);
                    } else {
                        assert!(stratum_u(g, &q).is_err());
                    }
                }
                for q in partitions(g - 2, None) {
                    let u = stratum_u_prime(g, &q).unwrap();
                    assert_eq!(u.graph.genus(), g);
                    assert_eq!(u.graph.codimension() as u32, g - 1);
                    assert_eq!(u.pairing_degree(), g - 2);
                }
            }
        }
    }

    #[test]
    fn v_strata() {
        let v = stratum_v(10, &p(&[6])).unwrap();
        assert_eq!(v.graph.vertices().len(), 2);
        assert_eq!(v.graph.vertices()[0].markings.len(), 8);
        assert_eq!(v.graph.vertices()[1].markings.len(), 2);
        for n in 3..=10u32 {
            for d in 0..=n - 3 {
                for q in partitions(d, Some((n - 2 - d) as usize)) {
                    let v = stratum_v(n, &q).unwrap();
                    assert_eq!(v.graph.num_markings() as u32, n);
                    assert_eq!(v.graph.codimension() as u32, n - 3 - d);
                    let mut dims = v.graph.socle_dims();
                    dims.sort_unstable_by(|a, b| b.cmp(a));
                    dims.retain(|&x| x > 0);
                    assert_eq!(dims, q.parts());
                }
            }
        }
        assert!(stratum_v(10, &p(&[2, 2, 1, 1])).is_err());
    }

    fn twice_genus_w(q: &Partition) -> u32 {
        2 * gamma_graph(q).unwrap().0.genus()
    }

    #[test]
    fn w_genus_equations() {
        for d in 1..=8u32 {
            for q in partitions(d, None) {
                let dl = d + q.len() as u32;
                let (graph, _) = gamma_graph(&q).unwrap();
                if dl % 2 == 1 {
                    assert_eq!(twice_genus_w(&q) - 1, dl, "{q}");
                } else {
                    assert_eq!(twice_genus_w(&q) - 1, dl + 1, "{q}");
                }
                let mut dims = graph.socle_dims();
                dims.sort_unstable_by(|a, b| b.cmp(a));
                dims.retain(|&x| x > 0);
                assert_eq!(dims, q.parts(), "{q}");
                assert_eq!(graph.num_markings(), 1);

                let (tg, _) = gamma_tilde_graph(&q).unwrap();
                if dl.is_multiple_of(2) {
                    assert_eq!(2 * tg.genus(), dl, "{q}");
                } else {
                    assert_eq!(2 * tg.genus(), dl + 1, "{q}");
                }
                let mut dims = tg.socle_dims();
                dims.sort_unstable_by(|a, b| b.cmp(a));
                dims.retain(|&x| x > 0);
                assert_eq!(dims, q.parts(), "{q}");
                assert_eq!(tg.num_markings(), 2);
            }
        }
    }

    #[test]
    fn w_classes() {
        for g in 1..=5u32 {
            for d in 1..=2 * g - 1 {
                for q in partitions(d, Some((2 * g - 1 - d) as usize)) {
                    let w = stratum_w(g, &q).unwrap();
                    assert_eq!(w.graph.genus(), g);
                    assert_eq!(w.pairing_degree(), d);
                    assert_eq!(
                        w.graph.codimension() as u32 + w.psi.values().sum::<u32>(),
                        2 * g - 2 - d
                    );
                }
            }
        }
    }

    #[test]
    fn genus0_reduction_to_v() {
        // a star: centre with 1 marking and three rational arms of 3 markings
        let graph = DualGraph::new(
            vec![
                Vertex::new(0, vec![1]),
                Vertex::new(0, vec![2, 3, 4]),
                Vertex::new(0, vec![5, 6, 7]),
                Vertex::new(0, vec![8, 9, 10]),
            ],
            vec![(0, 1), (0, 2), (0, 3)],
        )
        .unwrap();
        // q(Gamma) = (1, 1, 1, 1), d = 4
        let v = stratum_v(10, &p(&[1, 1, 1, 1])).unwrap();
        for k in partitions(4, None) {
            assert_eq!(
                stratum_pairing(&k, &graph, &BTreeMap::new()),
                stratum_pairing(&k, &v.graph, &v.psi),
                "{k}"
            );
        }
    }

    #[test]
    fn trade_keeps_dims() {
        let s = stratum_s(3, &p(&[1, 1])).unwrap();
        let t = trade_genus(&s, 2, 0).unwrap();
        assert_eq!(t.graph.genus(), 1);
        assert_eq!(t.graph.num_markings(), 5);
        assert_eq!(t.graph.socle_dims(), s.graph.socle_dims());
    }
}
