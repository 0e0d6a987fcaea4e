#include "fnbo/network.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace fnbo {

Vec NetworkSpec::assemble(int k, const Vec& parent_vals, const Vec& x) const {
    const NodeSpec& n = nodes[k];
    require(parent_vals.size() == static_cast<Eigen::Index>(n.parents.size()),
            "assemble: parent value count mismatch");
    Vec z(input_dim(k));
    for (Eigen::Index i = 0; i < parent_vals.size(); ++i) z[i] = parent_vals[i];
    for (size_t i = 0; i < n.inputs.size(); ++i)
        z[static_cast<Eigen::Index>(n.parents.size() + i)] = x[n.inputs[i]];
    return z;
}

Vec NetworkSpec::controllable_lo(int k) const {
    const NodeSpec& n = nodes[k];
    Vec lo(n.inputs.size());
    for (size_t i = 0; i < n.inputs.size(); ++i) lo[static_cast<Eigen::Index>(i)] = lower[n.inputs[i]];
    return lo;
}

Vec NetworkSpec::controllable_hi(int k) const {
    const NodeSpec& n = nodes[k];
    Vec hi(n.inputs.size());
    for (size_t i = 0; i < n.inputs.size(); ++i) hi[static_cast<Eigen::Index>(i)] = upper[n.inputs[i]];
    return hi;
}

std::vector<int> NetworkSpec::children(int k) const {
    std::vector<int> out;
    for (int j = 0; j < K(); ++j)
        for (int p : nodes[j].parents)
            if (p == k) { out.push_back(j); break; }
    return out;
}

bool NetworkSpec::is_descendant(int anc, int node) const {
    if (node == anc) return false;
    std::vector<char> seen(nodes.size(), 0);
    std::vector<int> stack = children(anc);
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        if (seen[c]) continue;
        seen[c] = 1;
        if (c == node) return true;
        for (int g : children(c)) stack.push_back(g);
    }
    return false;
}

double NetworkSpec::full_cost() const {
    double c = 0.0;
    for (const NodeSpec& n : nodes)
        if (!n.known) c += n.cost;
    return c;
}

void NetworkSpec::validate() const {
    require(!nodes.empty(), "network: needs at least one node");
    require(d >= 1, "network: d must be positive");
    require(lower.size() == d && upper.size() == d, "network: bounds must have size d");
    for (int i = 0; i < d; ++i)
        require(lower[i] < upper[i], "network: lower must be strictly below upper");
    const int k = K();
    for (int j = 0; j < k; ++j) {
        const NodeSpec& n = nodes[j];
        for (int p : n.parents)
            require(p >= 0 && p < j, "network: parents must precede their node");
        std::set<int> ps(n.parents.begin(), n.parents.end());
        require(ps.size() == n.parents.size(), "network: duplicate parent");
        for (int c : n.inputs)
            require(c >= 0 && c < d, "network: input component out of range");
        std::set<int> is(n.inputs.begin(), n.inputs.end());
        require(is.size() == n.inputs.size(), "network: duplicate input component");
        require(input_dim(j) >= 1, "network: node with empty input");
        if (n.known) {
            require(static_cast<bool>(n.known_fn), "network: known node needs its function");
            require(!n.parents.empty(), "network: known node must combine parents");
            require(n.cost == 0.0, "network: known node must be free");
        } else {
            require(n.cost > 0.0, "network: node cost must be positive");
        }
        if (n.free_parents) {
            require(!n.known, "network: free-parent node cannot be known");
            require(n.parent_lo.size() == static_cast<Eigen::Index>(n.parents.size()) &&
                        n.parent_hi.size() == static_cast<Eigen::Index>(n.parents.size()),
                    "network: free-parent box must match parent count");
            for (Eigen::Index i = 0; i < n.parent_lo.size(); ++i)
                require(n.parent_lo[i] < n.parent_hi[i], "network: empty free-parent box");
        }
    }
    // exactly one sink and it is the last node
    int sinks = 0;
    for (int j = 0; j < k; ++j)
        if (children(j).empty()) ++sinks;
    require(sinks == 1, "network: needs exactly one sink node");
    require(children(k - 1).empty(), "network: sink must be the last node");
    // known nodes may only feed known nodes (their outputs are derived, not stored)
    for (int j = 0; j < k; ++j)
        if (nodes[j].known)
            for (int c : children(j))
                require(nodes[c].known, "network: known node may only feed known nodes");
    // a controllable component shared across nodes breaks per-node candidate
    // assembly unless everything downstream of the sharing nodes is known
    for (int comp = 0; comp < d; ++comp) {
        std::vector<int> users;
        for (int j = 0; j < k; ++j)
            if (std::find(nodes[j].inputs.begin(), nodes[j].inputs.end(), comp) !=
                nodes[j].inputs.end())
                users.push_back(j);
        if (users.size() <= 1) continue;
        for (int u : users)
            for (int c = 0; c < k; ++c)
                if (is_descendant(u, c))
                    require(nodes[c].known,
                            "network: component shared across nodes whose descendants are not all known");
    }
}

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEinfa") == std::string::npos) s += ".0";
    return s;
}

std::string fmt_vec(const Vec& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt_num(v[i]);
    }
    return s + "]";
}

std::string fmt_ints(const std::vector<int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

}  // namespace

std::string NetworkSpec::to_toml() const {
    std::ostringstream os;
    os << "name = \"" << name << "\"\n";
    os << "d = " << d << "\n";
    os << "lower = " << fmt_vec(lower) << "\n";
    os << "upper = " << fmt_vec(upper) << "\n";
    for (const NodeSpec& n : nodes) {
        os << "\n[[node]]\n";
        os << "parents = " << fmt_ints(n.parents) << "\n";
        os << "inputs = " << fmt_ints(n.inputs) << "\n";
        os << "cost = " << fmt_num(n.cost) << "\n";
        os << "known = " << (n.known ? "true" : "false") << "\n";
        if (n.free_parents) {
            os << "free_parents = true\n";
            os << "parent_lo = " << fmt_vec(n.parent_lo) << "\n";
            os << "parent_hi = " << fmt_vec(n.parent_hi) << "\n";
        }
    }
    return os.str();
}

Vec CandidateInput::z() const {
    Vec out(parent_outputs.size() + controllable.size());
    out.head(parent_outputs.size()) = parent_outputs;
    out.tail(controllable.size()) = controllable;
    return out;
}

bool NetworkHistory::consistent(const NetworkSpec& spec) const {
    const int k = spec.K();
    if (static_cast<int>(data.size()) != k || static_cast<int>(provenance.size()) != k)
        return false;
    for (int j = 0; j < k; ++j) {
        if (spec.nodes[j].known) {
            if (data[j].count() != 0) return false;
            continue;
        }
        const NodeSpec& n = spec.nodes[j];
        if (provenance[j].size() != static_cast<size_t>(data[j].count())) return false;
        for (int r = 0; r < data[j].count(); ++r) {
            const std::vector<int>& link = provenance[j][r];
            if (link.size() != n.parents.size()) return false;
            for (size_t s = 0; s < n.parents.size(); ++s) {
                const double stored = data[j].inputs(r, static_cast<Eigen::Index>(s));
                if (link[s] < 0) {
                    if (!n.free_parents) return false;
                    if (stored < n.parent_lo[static_cast<Eigen::Index>(s)] ||
                        stored > n.parent_hi[static_cast<Eigen::Index>(s)])
                        return false;
                    continue;
                }
                const int p = n.parents[s];
                if (link[s] >= data[p].count()) return false;
                if (data[p].outputs[link[s]] != stored) return false;
            }
        }
    }
    return true;
}

std::vector<Vec> enumerate_candidates(const NetworkSpec& spec, const NetworkHistory& hist, int k) {
    require(k >= 0 && k < spec.K(), "enumerate_candidates: node out of range");
    const NodeSpec& n = spec.nodes[k];
    require(!n.known, "enumerate_candidates: known nodes are not evaluated");
    if (n.free_parents) return {};  // continuous parent box instead
    if (n.parents.empty()) return {Vec(0)};
    std::vector<std::vector<double>> pools;
    for (int p : n.parents) {
        std::vector<double> pool;
        for (int r = 0; r < hist.data[p].count(); ++r) {
            const double v = hist.data[p].outputs[r];
            if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
        }
        if (pool.empty()) return {};
        pools.push_back(std::move(pool));
    }
    std::vector<Vec> out;
    std::vector<size_t> idx(pools.size(), 0);
    while (true) {
        Vec tup(pools.size());
        for (size_t s = 0; s < pools.size(); ++s)
            tup[static_cast<Eigen::Index>(s)] = pools[s][idx[s]];
        out.push_back(std::move(tup));
        size_t s = pools.size();
        while (s > 0) {
            --s;
            if (++idx[s] < pools[s].size()) break;
            idx[s] = 0;
            if (s == 0) return out;
        }
    }
}

namespace {

double observe(const Truth& truth, int k, const Vec& z, bool known, Rng* noise_rng,
               double noise_std) {
    double y = truth[k](z);
    if (!known && noise_rng != nullptr && noise_std > 0.0) y += noise_std * noise_rng->normal();
    return y;
}

}  // namespace

Vec full_evaluate(const NetworkSpec& spec, const Truth& truth, const Vec& x, NetworkHistory* hist,
                  Rng* noise_rng, double noise_std) {
    return full_evaluate(spec, truth, x, hist, noise_rng,
                         Vec(Vec::Constant(spec.K(), noise_std)));
}

Vec full_evaluate(const NetworkSpec& spec, const Truth& truth, const Vec& x, NetworkHistory* hist,
                  Rng* noise_rng, const Vec& noise_std) {
    require(x.size() == spec.d, "full_evaluate: x has wrong dimension");
    require(noise_std.size() == spec.K(), "full_evaluate: noise vector size mismatch");
    require(truth.size() == static_cast<size_t>(spec.K()), "full_evaluate: truth size mismatch");
    const int K = spec.K();
    Vec y(K);
    std::vector<int> row(K, -1);
    for (int k = 0; k < K; ++k) {
        const NodeSpec& n = spec.nodes[k];
        Vec pv(n.parents.size());
        for (size_t s = 0; s < n.parents.size(); ++s)
            pv[static_cast<Eigen::Index>(s)] = y[n.parents[s]];
        const Vec z = spec.assemble(k, pv, x);
        y[k] = observe(truth, k, z, n.known, noise_rng, noise_std[k]);
        if (n.known) continue;
        if (hist != nullptr) {
            hist->data[k].append(z, y[k]);
            row[k] = hist->data[k].count() - 1;
            std::vector<int> link(n.parents.size());
            for (size_t s = 0; s < n.parents.size(); ++s) link[s] = row[n.parents[s]];
            hist->provenance[k].push_back(std::move(link));
            hist->counts[k] += 1;
        }
    }
    if (hist != nullptr) {
        hist->spent += spec.full_cost();
        hist->n_evals += 1;
    }
    return y;
}

double partial_evaluate(const NetworkSpec& spec, const Truth& truth, const CandidateInput& c,
                        NetworkHistory& hist, Rng* noise_rng, double noise_std) {
    require(c.node >= 0 && c.node < spec.K(), "partial_evaluate: node out of range");
    const NodeSpec& n = spec.nodes[c.node];
    require(!n.known, "partial_evaluate: known nodes cannot be evaluated");
    require(c.parent_outputs.size() == static_cast<Eigen::Index>(n.parents.size()),
            "partial_evaluate: parent tuple has wrong size");
    require(c.controllable.size() == static_cast<Eigen::Index>(n.inputs.size()),
            "partial_evaluate: controllable part has wrong size");
    const Vec lo = spec.controllable_lo(c.node), hi = spec.controllable_hi(c.node);
    for (Eigen::Index i = 0; i < c.controllable.size(); ++i)
        require(c.controllable[i] >= lo[i] - 1e-12 && c.controllable[i] <= hi[i] + 1e-12,
                "partial_evaluate: controllable input outside the box");
    std::vector<int> link(n.parents.size(), -1);
    if (n.free_parents) {
        for (Eigen::Index s = 0; s < c.parent_outputs.size(); ++s)
            require(c.parent_outputs[s] >= n.parent_lo[s] && c.parent_outputs[s] <= n.parent_hi[s],
                    "partial_evaluate: probed parent value outside its box");
    } else {
        for (size_t s = 0; s < n.parents.size(); ++s) {
            const int p = n.parents[s];
            const double want = c.parent_outputs[static_cast<Eigen::Index>(s)];
            int found = -1;
            for (int r = 0; r < hist.data[p].count(); ++r)
                if (hist.data[p].outputs[r] == want) { found = r; break; }
            require(found >= 0, "partial_evaluate: parent output was never observed");
            link[s] = found;
        }
    }
    const Vec z = c.z();
    const double y = observe(truth, c.node, z, false, noise_rng, noise_std);
    hist.data[c.node].append(z, y);
    hist.provenance[c.node].push_back(std::move(link));
    hist.counts[c.node] += 1;
    hist.spent += n.cost;
    return y;
}

double true_composite(const NetworkSpec& spec, const Truth& truth, const Vec& x) {
    const int K = spec.K();
    Vec y(K);
    for (int k = 0; k < K; ++k) {
        const NodeSpec& n = spec.nodes[k];
        Vec pv(n.parents.size());
        for (size_t s = 0; s < n.parents.size(); ++s)
            pv[static_cast<Eigen::Index>(s)] = y[n.parents[s]];
        y[k] = truth[k](spec.assemble(k, pv, x));
    }
    return y[K - 1];
}

}  // namespace fnbo
