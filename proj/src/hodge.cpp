#include "dpor/flowrank.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "conjugate_gradient.hpp"
#include "dpor/error.hpp"

namespace dpor {

namespace {

std::vector<std::size_t> connected_components(std::size_t n, std::span<const Edge> edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges) {
        const auto a = find(e.tail), b = find(e.head);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    // Relabel roots densely in order of first appearance.
    std::vector<std::size_t> label(n, n), component(n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = find(i);
        if (label[r] == n) label[r] = next++;
        component[i] = label[r];
    }
    return component;
}

double squared_norm(const std::vector<double>& v) { return detail::dot(v, v); }

}  // namespace

std::vector<Triangle> enumerate_triangles(std::size_t node_count, std::span<const Edge> edges) {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> upper(node_count);  // (neighbour, edge index)
    for (std::size_t e = 0; e < edges.size(); ++e) upper[edges[e].tail].emplace_back(edges[e].head, e);
    for (auto& list : upper) std::sort(list.begin(), list.end());

    auto lookup = [&](std::size_t a, std::size_t b) -> std::ptrdiff_t {
        const auto& list = upper[a];
        auto it = std::lower_bound(list.begin(), list.end(), std::pair{b, std::size_t{0}});
        if (it == list.end() || it->first != b) return -1;
        return static_cast<std::ptrdiff_t>(it->second);
    };

    std::vector<Triangle> triangles;
    for (std::size_t a = 0; a < node_count; ++a)
        for (const auto& [b, ab] : upper[a])
            for (const auto& [c, bc] : upper[b]) {
                const auto ac = lookup(a, c);
                if (ac >= 0) triangles.push_back({a, b, c, ab, bc, static_cast<std::size_t>(ac)});
            }
    return triangles;
}

HodgeResult hodge_decompose(const EdgeFlow& flow, const SolveOptions& options) {
    const std::size_t n = flow.node_count();
    const std::size_t m = flow.edges.size();
    if (m == 0) throw DataError("hodge decomposition needs at least one edge");
    if (flow.values.size() != m) throw DataError("edge flow values do not match edge count");
    for (std::size_t e = 0; e < m; ++e) {
        const auto& edge = flow.edges[e];
        if (edge.tail >= edge.head || edge.head >= n) throw DataError(fmt::format("malformed edge ({},{})", edge.tail, edge.head));
        if (e > 0 && !(flow.edges[e - 1] < edge)) throw DataError("edges must be sorted and unique");
    }

    HodgeResult r;
    r.accounts = flow.accounts;
    r.edges = flow.edges;
    r.flow = flow.values;
    r.component = connected_components(n, flow.edges);

    // Gradient part: graph Laplacian normal equations  B^T B s = B^T Y.
    std::vector<double> degree(n, 0.0), rhs(n, 0.0);
    for (std::size_t e = 0; e < m; ++e) {
        const auto& edge = flow.edges[e];
        degree[edge.tail] += 1.0;
        degree[edge.head] += 1.0;
        rhs[edge.head] += flow.values[e];
        rhs[edge.tail] -= flow.values[e];
    }
    auto laplacian = [&](const std::vector<double>& s, std::vector<double>& out) {
        out.assign(n, 0.0);
        for (const auto& edge : flow.edges) {
            const double d = s[edge.head] - s[edge.tail];
            out[edge.head] += d;
            out[edge.tail] -= d;
        }
    };
    const std::size_t grad_iters = options.max_iter ? options.max_iter : 10 * n;
    const auto grad_solve = detail::conjugate_gradient(laplacian, degree, rhs, r.score, options.tol, grad_iters);
    if (!grad_solve.converged)
        throw NumericalError(fmt::format("Laplacian solve did not converge after {} iterations (residual {:.3g})",
                                         grad_solve.iterations, grad_solve.residual_norm));
    r.gradient_iterations = grad_solve.iterations;

    // Gauge: mean zero on each connected component.
    const std::size_t components = n ? *std::max_element(r.component.begin(), r.component.end()) + 1 : 0;
    std::vector<double> sum(components, 0.0), count(components, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[r.component[i]] += r.score[i];
        count[r.component[i]] += 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) r.score[i] -= sum[r.component[i]] / count[r.component[i]];

    r.gradient.resize(m);
    r.residual.resize(m);
    for (std::size_t e = 0; e < m; ++e) {
        const auto& edge = flow.edges[e];
        r.gradient[e] = r.score[edge.head] - r.score[edge.tail];
        r.residual[e] = flow.values[e] - r.gradient[e];
    }

    // Curl part: project the residual onto the span of triangle boundaries,
    // (C C^T) z = C residual, curl = C^T z.
    r.triangles = enumerate_triangles(n, flow.edges);
    r.curl.assign(m, 0.0);
    if (!r.triangles.empty()) {
        const std::size_t t_count = r.triangles.size();
        auto curl_of = [&](const std::vector<double>& x, std::vector<double>& out) {
            out.resize(t_count);
            for (std::size_t t = 0; t < t_count; ++t) {
                const auto& tri = r.triangles[t];
                out[t] = x[tri.ab] + x[tri.bc] - x[tri.ac];
            }
        };
        auto adjoint = [&](const std::vector<double>& z, std::vector<double>& out) {
            out.assign(m, 0.0);
            for (std::size_t t = 0; t < t_count; ++t) {
                const auto& tri = r.triangles[t];
                out[tri.ab] += z[t];
                out[tri.bc] += z[t];
                out[tri.ac] -= z[t];
            }
        };
        std::vector<double> scratch;
        auto up_laplacian = [&](const std::vector<double>& z, std::vector<double>& out) {
            adjoint(z, scratch);
            curl_of(scratch, out);
        };
        std::vector<double> curl_rhs, z;
        curl_of(r.residual, curl_rhs);
        const std::vector<double> diag(t_count, 3.0);
        const std::size_t curl_iters = options.max_iter ? options.max_iter : 10 * t_count;
        const auto curl_solve = detail::conjugate_gradient(up_laplacian, diag, curl_rhs, z, options.tol, curl_iters);
        if (!curl_solve.converged)
            throw NumericalError(fmt::format("curl projection did not converge after {} iterations (residual {:.3g})",
                                             curl_solve.iterations, curl_solve.residual_norm));
        r.curl_iterations = curl_solve.iterations;
        adjoint(z, r.curl);
    }

    r.harmonic.resize(m);
    for (std::size_t e = 0; e < m; ++e) r.harmonic[e] = r.residual[e] - r.curl[e];

    r.energies.total = squared_norm(r.flow);
    r.energies.gradient = squared_norm(r.gradient);
    r.energies.curl = squared_norm(r.curl);
    r.energies.harmonic = squared_norm(r.harmonic);
    r.consistency_ratio = r.energies.total > 0.0 ? r.energies.gradient / r.energies.total : 1.0;
    return r;
}

GlobalRanking global_ranking(std::vector<AccountId> accounts, std::vector<double> scores) {
    GlobalRanking g;
    g.accounts = std::move(accounts);
    g.scores = std::move(scores);
    g.order.resize(g.accounts.size());
    std::iota(g.order.begin(), g.order.end(), std::size_t{0});
    std::sort(g.order.begin(), g.order.end(), [&](std::size_t a, std::size_t b) {
        if (g.scores[a] != g.scores[b]) return g.scores[a] > g.scores[b];
        return g.accounts[a] < g.accounts[b];
    });
    return g;
}

GlobalRanking global_ranking(const HodgeResult& result) { return global_ranking(result.accounts, result.score); }

}  // namespace dpor
