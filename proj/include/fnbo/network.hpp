#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fnbo/gp.hpp"

namespace fnbo {

/// A node function acting on its assembled input z = (parent outputs, x_{I(k)}).
using NodeFn = std::function<double(const Vec&)>;
using Truth = std::vector<NodeFn>;

struct NodeSpec {
    std::vector<int> parents;  // parent node indices, all < own index
    std::vector<int> inputs;   // controllable component indices into x (0-based)
    double cost = 1.0;
    bool known = false;        // deterministic combiner: no GP, never selectable, cost 0
    NodeFn known_fn;           // set when known
    bool free_parents = false; // may be probed anywhere in [parent_lo, parent_hi] (setting 2)
    Vec parent_lo, parent_hi;
};

struct NetworkSpec {
    std::string name;
    int d = 0;
    Vec lower, upper;  // bounds of x, size d
    std::vector<NodeSpec> nodes;

    int K() const { return static_cast<int>(nodes.size()); }
    int input_dim(int k) const {
        return static_cast<int>(nodes[k].parents.size() + nodes[k].inputs.size());
    }
    /// z_k assembled from explicit parent outputs and the full design vector x.
    Vec assemble(int k, const Vec& parent_vals, const Vec& x) const;
    Vec controllable_lo(int k) const;
    Vec controllable_hi(int k) const;
    std::vector<int> children(int k) const;
    bool is_descendant(int anc, int node) const;
    /// Summed per-node cost of one full network evaluation.
    double full_cost() const;
    /// Throws invalid_argument_error when structural invariants fail.
    void validate() const;
    std::string to_toml() const;
};

struct NetworkHistory {
    std::vector<NodeDataset> data;             // one per node; known nodes stay empty
    std::vector<std::vector<std::vector<int>>> provenance;  // [node][row] -> parent row ids
    std::vector<int> counts;                   // evaluations per node (incl. initial design)
    double spent = 0.0;
    int n_evals = 0;

    explicit NetworkHistory(int K = 0) : data(K), provenance(K), counts(K, 0) {}
    /// Parent-output block of every stored node input matches a stored parent row.
    bool consistent(const NetworkSpec& spec) const;
};

struct CandidateInput {
    int node = 0;
    Vec parent_outputs;  // one value per parent, in parent order
    Vec controllable;    // values for inputs[], in listed order
    Vec z() const;
};

/// Distinct parent-output tuples Y_{n,J(k)} (exact-equality dedup, insertion
/// order, odometer cross product). One empty tuple for root nodes; empty for
/// free_parents nodes (their candidate space is the continuous parent box).
std::vector<Vec> enumerate_candidates(const NetworkSpec& spec, const NetworkHistory& hist, int k);

/// Evaluates every node at x in topological order, feeding observed (possibly
/// noisy) outputs forward. Records GP-node observations + provenance, charges
/// the summed node costs. Returns all K observed values.
Vec full_evaluate(const NetworkSpec& spec, const Truth& truth, const Vec& x,
                  NetworkHistory* hist = nullptr, Rng* noise_rng = nullptr,
                  double noise_std = 0.0);
/// Per-node noise variant.
Vec full_evaluate(const NetworkSpec& spec, const Truth& truth, const Vec& x, NetworkHistory* hist,
                  Rng* noise_rng, const Vec& noise_std);

/// Evaluates one node at an assembled candidate, enforcing the setting-1
/// stored-parent-output precondition (or the setting-2 box), records and
/// charges c_k.
double partial_evaluate(const NetworkSpec& spec, const Truth& truth, const CandidateInput& c,
                        NetworkHistory& hist, Rng* noise_rng = nullptr, double noise_std = 0.0);

/// Noise-free composite value y_K(x) (the ground-truth metric).
double true_composite(const NetworkSpec& spec, const Truth& truth, const Vec& x);

}  // namespace fnbo
