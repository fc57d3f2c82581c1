#include "dpor/flowrank.hpp"

namespace dpor {

namespace {
// Inconsistent energy below this fraction of |Y|^2 is solver noise.
constexpr double kInconsistencyFloor = 1e-14;
}

LoopReport detect_loops(const HodgeResult& result, double tau) {
    LoopReport report;
    report.accounts = result.accounts;
    report.tau = tau;
    const std::size_t n = result.accounts.size();
    report.energy.assign(n, 0.0);
    report.shares.assign(n, 0.0);

    for (std::size_t e = 0; e < result.edges.size(); ++e) {
        const double h = result.harmonic[e];
        const double c = result.curl[e];
        const double energy = h * h + c * c;
        report.energy[result.edges[e].tail] += 0.5 * energy;
        report.energy[result.edges[e].head] += 0.5 * energy;
        report.total_inconsistent += energy;
    }
    for (const auto& t : result.triangles)
        report.triangles.push_back({t.a, t.b, t.c, result.flow[t.ab] + result.flow[t.bc] - result.flow[t.ac]});

    if (report.total_inconsistent <= kInconsistencyFloor * result.energies.total) {
        report.energy.assign(n, 0.0);
        report.total_inconsistent = 0.0;
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        report.shares[i] = report.energy[i] / report.total_inconsistent;
        if (report.shares[i] > tau) report.flagged.push_back(i);
    }
    return report;
}

}  // namespace dpor
