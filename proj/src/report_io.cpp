#include "dpor/report_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& s, std::size_t line, const char* field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) throw ParseError(line, field, "not a number: '" + s + "'");
    return v;
}

bool next_record(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() != '#') return true;
    }
    return false;
}

void write_delegates(const ElectionResult& result, std::size_t first, std::size_t count, std::ostream& out) {
    out << "rank,account,total,votes\n";
    for (std::size_t i = first; i < first + count; ++i) {
        const auto& t = result.ordering[i];
        out << (i + 1) << ',' << t.delegate << ',' << format_real(t.total) << ',' << t.votes << '\n';
    }
}

}  // namespace

std::string format_real(double value) {
    if (value == 0.0) value = 0.0;  // folds -0
    return fmt::format("{:.12g}", value);
}

void write_reputation_csv(const ReputationReport& report, std::ostream& out) {
    out << "account,P,U,R_raw,R_norm,Rep\n";
    for (const auto& r : report.rows)
        out << r.account << ',' << format_real(r.stake_power) << ',' << format_real(r.usage_score) << ','
            << format_real(r.ranking_raw) << ',' << format_real(r.ranking_norm) << ',' << format_real(r.reputation) << '\n';
}

ReputationReport read_reputation_csv(std::istream& in) {
    ReputationReport report;
    std::string line;
    std::size_t line_no = 0;
    if (!next_record(in, line, line_no) || line != "account,P,U,R_raw,R_norm,Rep")
        throw ParseError(line_no, "header", "expected 'account,P,U,R_raw,R_norm,Rep'");
    while (next_record(in, line, line_no)) {
        const auto f = split(line);
        if (f.size() != 6) throw ParseError(line_no, "row", fmt::format("expected 6 fields, found {}", f.size()));
        report.rows.push_back({f[0], parse_double(f[1], line_no, "P"), parse_double(f[2], line_no, "U"),
                               parse_double(f[3], line_no, "R_raw"), parse_double(f[4], line_no, "R_norm"),
                               parse_double(f[5], line_no, "Rep")});
        if (report.rows.size() > 1 && !(report.rows[report.rows.size() - 2].account < report.rows.back().account))
            throw ParseError(line_no, "account", "rows must be sorted by account without duplicates");
    }
    return report;
}

void write_producers_csv(const ElectionResult& result, std::ostream& out) {
    write_delegates(result, 0, result.producers.size(), out);
}

void write_standby_csv(const ElectionResult& result, std::ostream& out) {
    write_delegates(result, result.producers.size(), result.standby.size(), out);
}

void write_loop_report_csv(const LoopReport& report, std::ostream& out) {
    out << "account,energy,share,flagged\n";
    for (std::size_t i = 0; i < report.accounts.size(); ++i)
        out << report.accounts[i] << ',' << format_real(report.energy[i]) << ',' << format_real(report.shares[i]) << ','
            << (report.shares[i] > report.tau && report.total_inconsistent > 0.0 ? 1 : 0) << '\n';
}

void write_experiment_csv(const ExperimentResult& result, std::ostream& out) {
    out << "multiplicity,attacker_s,attacker_rank,ring_energy_share,ring_top_shares,pagerank_rank,"
           "volume_pagerank_rank,score_range,consistency_ratio,loop_netflow_zero\n";
    for (const auto& r : result.rows)
        out << r.multiplicity << ',' << format_real(r.attacker_score) << ',' << r.attacker_rank << ','
            << format_real(r.ring_energy_share) << ',' << (r.ring_top_shares ? 1 : 0) << ',' << r.pagerank_rank << ','
            << r.volume_pagerank_rank << ',' << format_real(r.score_range) << ',' << format_real(r.consistency_ratio) << ','
            << (r.loop_netflow_zero ? 1 : 0) << '\n';
}

void write_rankers_csv(const RankerComparison& cmp, std::ostream& out) {
    out << "account,pagerank,ncdawarerank,volume_pagerank,hodge_s\n";
    for (std::size_t i = 0; i < cmp.accounts.size(); ++i)
        out << cmp.accounts[i] << ',' << format_real(cmp.pagerank[i]) << ',' << format_real(cmp.ncdawarerank[i]) << ','
            << format_real(cmp.volume_pagerank[i]) << ',' << format_real(cmp.hodge_score[i]) << '\n';
}

std::vector<Ballot> parse_ballots(std::istream& in) {
    std::vector<Ballot> ballots;
    std::string line;
    std::size_t line_no = 0;
    while (next_record(in, line, line_no)) {
        const auto f = split(line);
        if (f[0] != "vote") throw ParseError(line_no, "tag", "unknown record tag '" + f[0] + "'");
        if (f.size() < 3) throw ParseError(line_no, "vote", "a ballot needs a voter and at least one choice");
        Ballot b{f[1], {f.begin() + 2, f.end()}};
        if (b.voter.empty()) throw ParseError(line_no, "voter", "empty voter id");
        for (const auto& c : b.choices)
            if (c.empty()) throw ParseError(line_no, "choice", "empty delegate id");
        ballots.push_back(std::move(b));
    }
    return ballots;
}

void write_ballots(const std::vector<Ballot>& ballots, std::ostream& out) {
    for (const auto& b : ballots) {
        out << "vote," << b.voter;
        for (const auto& c : b.choices) out << ',' << c;
        out << '\n';
    }
}

std::map<AccountId, std::string> parse_partition(std::istream& in) {
    std::map<AccountId, std::string> assignment;
    std::string line;
    std::size_t line_no = 0;
    while (next_record(in, line, line_no)) {
        const auto f = split(line);
        if (f.size() != 3 || f[0] != "block") throw ParseError(line_no, "block", "expected block,<block_id>,<account>");
        if (!assignment.emplace(f[2], f[1]).second) throw ParseError(line_no, "account", "account '" + f[2] + "' assigned twice");
    }
    return assignment;
}

std::vector<CurvePoint> stake_curve(double staked, double theta, std::int64_t last_day) {
    std::vector<CurvePoint> curve;
    for (std::int64_t d = 0; d <= last_day; ++d) curve.push_back({d, convertible_amount(staked, theta, d)});
    return curve;
}

std::vector<CurvePoint> shrink_curve(double amount, const ShrinkParams& params, std::int64_t first_day, std::int64_t last_day) {
    std::vector<CurvePoint> curve;
    for (std::int64_t d = first_day; d <= last_day; ++d) curve.push_back({d, transaction_weight(amount, d, params)});
    return curve;
}

void write_curve_csv(const std::vector<CurvePoint>& curve, const std::string& value_column, std::ostream& out) {
    out << "day," << value_column << '\n';
    for (const auto& p : curve) out << p.day << ',' << format_real(p.value) << '\n';
}

}  // namespace dpor
