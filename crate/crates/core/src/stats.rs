use std::time::Duration;

use serde::Serialize;

/// Where a cluster-solver leaf sat in its search tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LeafRecord {
    /// `|S'|` of the guess this leaf belongs to.
    pub guess_size: usize,
    pub depth: usize,
    /// `comp(G[X])` when the leaf was reached.
    pub components: usize,
}

/// Counters gathered by the exact solvers.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub guesses_enumerated: u64,
    pub guesses_surviving: u64,
    pub steiner_calls: u64,
    pub steiner_terminal_counts: Vec<usize>,
    pub steiner_work: u64,
    pub branch_nodes: u64,
    pub leaves: u64,
    pub leaf_records: Vec<LeafRecord>,
    /// `(|S'|, leaves)` per surviving cluster guess.
    pub leaves_per_guess: Vec<(usize, u64)>,
    /// Split solver: for each `Y` candidate, the sum of `2^|terminals|` over
    /// its Steiner calls.
    pub terminal_weight_per_y: Vec<u128>,
    /// Times an internal invariant check failed (always expected to be 0).
    pub invariant_violations: u64,
    pub triangle_branchings: u64,
    pub edge_branchings: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    /// Associative merge of counters from independent sub-searches.
    pub fn merge(&mut self, other: SearchStats) {
        self.guesses_enumerated += other.guesses_enumerated;
        self.guesses_surviving += other.guesses_surviving;
        self.steiner_calls += other.steiner_calls;
        self.steiner_terminal_counts
            .extend(other.steiner_terminal_counts);
        self.steiner_work += other.steiner_work;
        self.branch_nodes += other.branch_nodes;
        self.leaves += other.leaves;
        self.leaf_records.extend(other.leaf_records);
        self.leaves_per_guess.extend(other.leaves_per_guess);
        if self.terminal_weight_per_y.len() < other.terminal_weight_per_y.len() {
            self.terminal_weight_per_y
                .resize(other.terminal_weight_per_y.len(), 0);
        }
        for (a, b) in self
            .terminal_weight_per_y
            .iter_mut()
            .zip(other.terminal_weight_per_y)
        {
            *a += b;
        }
        self.invariant_violations += other.invariant_violations;
        self.triangle_branchings += other.triangle_branchings;
        self.edge_branchings += other.edge_branchings;
        self.elapsed += other.elapsed;
    }
}
