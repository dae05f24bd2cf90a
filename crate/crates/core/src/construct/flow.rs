//! Integral maximum flow (Dinic) on small networks.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    cap: u64,
}

/// A directed network with integral capacities. Edges are stored in pairs
/// (forward, residual) so edge `e` has its reverse at `e ^ 1`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    source: usize,
    sink: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

/// Result of [`max_flow`]: total value and the flow on every edge, indexed by
/// the id returned from [`FlowNetwork::add_edge`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: u64,
    pub edge_flows: Vec<u64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < nodes && sink < nodes, "terminal out of range");
        Self {
            source,
            sink,
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    /// Adds `from → to` with capacity `cap`; returns the edge id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.edges.len() / 2;
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0 });
        id
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn capacity(&self, id: usize) -> u64 {
        self.edges[2 * id].cap
    }
}

/// Maximum integral s–t flow.
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let mut residual: Vec<u64> = net.edges.iter().map(|e| e.cap).collect();
    let n = net.nodes();
    let mut value = 0u64;
    if net.source != net.sink {
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        while bfs(net, &residual, &mut level) {
            next.iter_mut().for_each(|x| *x = 0);
            loop {
                let pushed = dfs(net, &mut residual, &level, &mut next, net.source, u64::MAX);
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }
    }
    let edge_flows = (0..net.edge_count())
        .map(|id| net.edges[2 * id].cap - residual[2 * id])
        .collect();
    MaxFlow { value, edge_flows }
}

fn bfs(net: &FlowNetwork, residual: &[u64], level: &mut [usize]) -> bool {
    level.iter_mut().for_each(|l| *l = usize::MAX);
    level[net.source] = 0;
    let mut queue = VecDeque::from([net.source]);
    while let Some(u) = queue.pop_front() {
        for &e in &net.adj[u] {
            let v = net.edges[e].to;
            if residual[e] > 0 && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    level[net.sink] != usize::MAX
}

fn dfs(
    net: &FlowNetwork,
    residual: &mut [u64],
    level: &[usize],
    next: &mut [usize],
    u: usize,
    limit: u64,
) -> u64 {
    if u == net.sink {
        return limit;
    }
    while next[u] < net.adj[u].len() {
        let e = net.adj[u][next[u]];
        let v = net.edges[e].to;
        if residual[e] > 0 && level[v] == level[u] + 1 {
            let pushed = dfs(net, residual, level, next, v, limit.min(residual[e]));
            if pushed > 0 {
                residual[e] -= pushed;
                residual[e ^ 1] += pushed;
                return pushed;
            }
        }
        next[u] += 1;
    }
    0
}
