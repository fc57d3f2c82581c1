#include "dpor/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

StochasticMatrix StochasticMatrix::from_links(std::size_t size, std::span<const WeightedLink> links) {
    std::vector<std::map<std::size_t, double>> acc(size);
    for (const auto& l : links) {
        if (l.from >= size || l.to >= size) throw DataError("link index out of range");
        if (l.weight < 0.0) throw DataError("link weights must be nonnegative");
        if (l.weight > 0.0) acc[l.from][l.to] += l.weight;
    }
    StochasticMatrix a;
    a.rows_.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        double total = 0.0;
        for (const auto& [j, w] : acc[i]) total += w;
        for (const auto& [j, w] : acc[i]) a.rows_[i].emplace_back(j, w / total);
    }
    return a;
}

StochasticMatrix StochasticMatrix::from_graph(const TransferGraph& graph) {
    std::vector<WeightedLink> links;
    links.reserve(graph.entries.size());
    for (const auto& e : graph.entries) links.push_back({e.from, e.to, e.weight});
    return from_links(graph.size(), links);
}

double StochasticMatrix::operator()(std::size_t i, std::size_t j) const {
    const auto& r = rows_[i];
    if (r.empty()) return 1.0 / static_cast<double>(rows_.size());
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t c) { return e.first < c; });
    return it != r.end() && it->first == j ? it->second : 0.0;
}

OutLinks StochasticMatrix::out_links() const {
    OutLinks out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (const auto& [j, v] : rows_[i]) out[i].push_back(j);
    return out;
}

void StochasticMatrix::left_multiply(std::span<const double> x, std::vector<double>& y) const {
    const std::size_t m = rows_.size();
    y.assign(m, 0.0);
    double dangling = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (rows_[i].empty()) {
            dangling += x[i];
            continue;
        }
        for (const auto& [j, v] : rows_[i]) y[j] += x[i] * v;
    }
    if (dangling != 0.0) {
        const double spread = dangling / static_cast<double>(m);
        for (auto& v : y) v += spread;
    }
}

namespace {

// Iterates x <- step(x) from the uniform vector, renormalizing to unit L1.
template <typename Step>
RankVector power_iterate(std::size_t m, const PowerIterationOptions& options, const char* name, Step&& step) {
    RankVector r;
    if (m == 0) return r;
    std::vector<double> x(m, 1.0 / static_cast<double>(m)), y;
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        step(x, y);
        double total = 0.0;
        for (double v : y) total += v;
        for (auto& v : y) v /= total;
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) change += std::abs(y[i] - x[i]);
        x.swap(y);
        if (change < options.tol) {
            r.scores = std::move(x);
            r.iterations = it;
            return r;
        }
    }
    throw NumericalError(fmt::format("{} did not converge after {} iterations", name, options.max_iter));
}

}  // namespace

RankVector pagerank(const StochasticMatrix& a, double alpha, const PowerIterationOptions& options) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError(fmt::format("pagerank damping must lie in (0,1) (got {})", alpha));
    const std::size_t m = a.size();
    const double teleport = (1.0 - alpha) / static_cast<double>(m);
    std::vector<double> xa;
    return power_iterate(m, options, "pagerank", [&](const std::vector<double>& x, std::vector<double>& y) {
        a.left_multiply(x, xa);
        y.resize(m);
        for (std::size_t j = 0; j < m; ++j) y[j] = alpha * xa[j] + teleport;
    });
}

BlockPartition BlockPartition::singletons(std::size_t size) {
    BlockPartition p;
    p.block_of_.resize(size);
    p.members_.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        p.block_of_[i] = i;
        p.members_[i] = {i};
    }
    return p;
}

BlockPartition BlockPartition::from_blocks(std::size_t size, const std::vector<std::vector<std::size_t>>& blocks) {
    BlockPartition p;
    p.block_of_.assign(size, size);
    for (const auto& members : blocks) {
        if (members.empty()) continue;
        const std::size_t id = p.members_.size();
        auto sorted = members;
        std::sort(sorted.begin(), sorted.end());
        for (auto u : sorted) {
            if (u >= size) throw DataError("partition member out of range");
            if (p.block_of_[u] != size) throw DataError(fmt::format("account {} appears in two partition blocks", u));
            p.block_of_[u] = id;
        }
        p.members_.push_back(std::move(sorted));
    }
    for (std::size_t u = 0; u < size; ++u)
        if (p.block_of_[u] == size) throw DataError(fmt::format("account {} missing from partition", u));
    return p;
}

BlockPartition BlockPartition::from_assignment(std::span<const AccountId> accounts,
                                               const std::map<AccountId, std::string>& assignment) {
    std::map<std::string, std::vector<std::size_t>> by_block;
    for (std::size_t i = 0; i < accounts.size(); ++i) {
        auto it = assignment.find(accounts[i]);
        if (it == assignment.end()) throw DataError("account '" + accounts[i] + "' missing from partition");
        by_block[it->second].push_back(i);
    }
    std::vector<std::vector<std::size_t>> blocks;
    for (auto& [id, members] : by_block) blocks.push_back(std::move(members));
    return from_blocks(accounts.size(), blocks);
}

ProximityMatrix ncd_proximity(const BlockPartition& partition, const OutLinks& links) {
    const std::size_t m = partition.size();
    if (links.size() != m) throw DataError("out-link list does not match partition size");
    ProximityMatrix p(m);
    for (std::size_t u = 0; u < m; ++u) {
        std::set<std::size_t> blocks{partition.block_of(u)};
        for (auto v : links[u]) blocks.insert(partition.block_of(v));
        const double n_blocks = static_cast<double>(blocks.size());
        for (auto b : blocks) {
            const auto& members = partition.members(b);
            const double value = 1.0 / (n_blocks * static_cast<double>(members.size()));
            for (auto v : members) p[u].emplace_back(v, value);
        }
        std::sort(p[u].begin(), p[u].end());
    }
    return p;
}

RankVector ncdawarerank(const StochasticMatrix& a, const BlockPartition& partition, double alpha, double mu,
                        const PowerIterationOptions& options) {
    if (!(alpha > 0.0) || !(mu >= 0.0) || !(alpha + mu < 1.0))
        throw UsageError(fmt::format("ncdawarerank requires alpha > 0, mu >= 0, alpha + mu < 1 (alpha={}, mu={})", alpha, mu));
    const std::size_t m = a.size();
    if (partition.size() != m) throw DataError("partition size does not match matrix size");
    const auto proximity = ncd_proximity(partition, a.out_links());
    const double teleport = (1.0 - alpha - mu) / static_cast<double>(m);
    std::vector<double> xa, xp(m);
    return power_iterate(m, options, "ncdawarerank", [&](const std::vector<double>& x, std::vector<double>& y) {
        a.left_multiply(x, xa);
        std::fill(xp.begin(), xp.end(), 0.0);
        if (mu > 0.0)
            for (std::size_t u = 0; u < m; ++u)
                for (const auto& [v, value] : proximity[u]) xp[v] += x[u] * value;
        y.resize(m);
        for (std::size_t j = 0; j < m; ++j) y[j] = alpha * xa[j] + mu * xp[j] + teleport;
    });
}

double NetFlowMatrix::net(std::size_t i, std::size_t j) const {
    for (const auto& e : entries)
        if (e.from == i && e.to == j) return e.net;
    return 0.0;
}

double NetFlowMatrix::outlink(std::size_t i, std::size_t j) const {
    for (const auto& e : entries)
        if (e.from == i && e.to == j) return e.outlink;
    return 0.0;
}

NetFlowMatrix nem_netflow_matrix(const TransferGraph& graph) {
    NetFlowMatrix o;
    o.size = graph.size();
    std::map<std::pair<std::size_t, std::size_t>, double> net;
    for (const auto& e : graph.entries) {
        // Entry (i, j) carries W_ji - W_ij when positive.
        const double diff = e.weight - graph.weight(e.to, e.from);
        if (diff > 0.0) net[{e.to, e.from}] = diff;
    }
    std::vector<double> row_total(o.size, 0.0);
    for (const auto& [key, v] : net) row_total[key.first] += v;
    for (const auto& [key, v] : net) o.entries.push_back({key.first, key.second, v, v / row_total[key.first]});
    return o;
}

RankVector volume_pagerank(const TransferGraph& graph, double alpha, const PowerIterationOptions& options) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError(fmt::format("pagerank damping must lie in (0,1) (got {})", alpha));
    const std::size_t m = graph.size();
    const double teleport = (1.0 - alpha) / static_cast<double>(m);
    std::vector<double> row_norm(m, 1.0 - alpha);
    for (const auto& e : graph.entries) row_norm[e.from] += alpha * e.share;
    std::vector<double> scaled(m);
    return power_iterate(m, options, "volume pagerank", [&](const std::vector<double>& x, std::vector<double>& y) {
        double teleport_mass = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            scaled[i] = x[i] / row_norm[i];
            teleport_mass += scaled[i];
        }
        y.assign(m, teleport * teleport_mass);
        for (const auto& e : graph.entries) y[e.to] += alpha * e.share * scaled[e.from];
    });
}

}  // namespace dpor
