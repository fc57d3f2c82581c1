#include "dpor/flowrank.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

MarkovChain MarkovChain::from_dense(const std::vector<std::vector<double>>& m) {
    std::vector<Row> rows(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != m.size()) throw DataError("Markov matrix must be square");
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (!(m[i][j] > 0.0)) throw DataError(fmt::format("Markov entry ({},{}) must be positive", i, j));
            rows[i].links.emplace_back(j, m[i][j]);
        }
    }
    return MarkovChain(0.0, std::move(rows));
}

double MarkovChain::operator()(std::size_t i, std::size_t j) const {
    const auto& r = rows_[i];
    auto it = std::lower_bound(r.links.begin(), r.links.end(), j, [](const auto& link, std::size_t col) { return link.first < col; });
    if (it != r.links.end() && it->first == j) return r.base + it->second;
    return r.base;
}

double MarkovChain::row_sum(std::size_t i) const {
    const auto& r = rows_[i];
    double sum = r.base * static_cast<double>(rows_.size());
    for (const auto& [j, v] : r.links) sum += v;
    return sum;
}

MarkovChain markov_chain(const TransferGraph& graph, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError(fmt::format("rank.alpha must lie in (0,1) (got {})", alpha));
    if (graph.degenerate || graph.entries.empty() || graph.size() == 0) throw DataError("degenerate round: no positive transfer volume");

    const std::size_t m = graph.size();
    const double teleport = (1.0 - alpha) / static_cast<double>(m);
    std::vector<MarkovChain::Row> rows(m);
    std::vector<double> out_share(m, 0.0);  // a_i
    for (const auto& e : graph.entries) out_share[e.from] += e.share;

    for (auto& r : rows) r.base = 1.0 / static_cast<double>(m);
    for (const auto& e : graph.entries) rows[e.from].links.emplace_back(e.to, alpha * (e.share / out_share[e.from]));

    for (std::size_t i = 0; i < m; ++i) {
        auto& r = rows[i];
        if (r.links.empty()) continue;  // receive-only: uniform row
        r.base = teleport;
        double sum = r.base * static_cast<double>(m);
        for (const auto& [j, v] : r.links) sum += v;
        r.base /= sum;
        for (auto& [j, v] : r.links) v /= sum;
    }
    return MarkovChain(alpha, std::move(rows));
}

std::vector<Edge> support_edges(const TransferGraph& graph) {
    std::vector<Edge> edges;
    for (const auto& e : graph.entries) {
        if (e.from == e.to || !(e.share > 0.0)) continue;
        edges.push_back({std::min(e.from, e.to), std::max(e.from, e.to)});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::ptrdiff_t EdgeFlow::edge_index(std::size_t i, std::size_t j) const {
    const Edge key{std::min(i, j), std::max(i, j)};
    auto it = std::lower_bound(edges.begin(), edges.end(), key);
    if (it == edges.end() || *it != key) return -1;
    return it - edges.begin();
}

double EdgeFlow::value(std::size_t i, std::size_t j) const {
    const auto e = edge_index(i, j);
    if (e < 0) return 0.0;
    const double y = values[static_cast<std::size_t>(e)];
    return i < j ? y : -y;
}

EdgeFlow edge_flow(const MarkovChain& chain, std::span<const Edge> edges, std::vector<AccountId> accounts) {
    if (accounts.size() != chain.size()) throw DataError("edge flow: account list does not match chain size");
    EdgeFlow flow;
    flow.accounts = std::move(accounts);
    flow.edges.assign(edges.begin(), edges.end());
    flow.values.reserve(edges.size());
    for (const auto& e : edges) flow.values.push_back(std::log(chain(e.tail, e.head)) - std::log(chain(e.head, e.tail)));
    return flow;
}

}  // namespace dpor
