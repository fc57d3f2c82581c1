#pragma once

// CSV exports and the small line formats for ballots and partitions.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dpor/baselines.hpp"
#include "dpor/consensus.hpp"
#include "dpor/flowrank.hpp"
#include "dpor/pipeline.hpp"

namespace dpor {

/// 12 significant digits, never "-0".
std::string format_real(double value);

void write_reputation_csv(const ReputationReport& report, std::ostream& out);
ReputationReport read_reputation_csv(std::istream& in);

/// rank,account,total,votes for the producer or standby slice.
void write_producers_csv(const ElectionResult& result, std::ostream& out);
void write_standby_csv(const ElectionResult& result, std::ostream& out);

void write_loop_report_csv(const LoopReport& report, std::ostream& out);
void write_experiment_csv(const ExperimentResult& result, std::ostream& out);

struct RankerComparison {
    std::vector<AccountId> accounts;
    std::vector<double> pagerank;
    std::vector<double> ncdawarerank;
    std::vector<double> volume_pagerank;
    std::vector<double> hodge_score;
};
void write_rankers_csv(const RankerComparison& cmp, std::ostream& out);

/// `vote,<voter>,<choice1>[,<choice2>...]`
std::vector<Ballot> parse_ballots(std::istream& in);
void write_ballots(const std::vector<Ballot>& ballots, std::ostream& out);

/// `block,<block_id>,<account>`; returns account -> block id.
std::map<AccountId, std::string> parse_partition(std::istream& in);

struct CurvePoint {
    std::int64_t day = 0;
    double value = 0.0;
};
std::vector<CurvePoint> stake_curve(double staked, double theta, std::int64_t last_day);
std::vector<CurvePoint> shrink_curve(double amount, const ShrinkParams& params, std::int64_t first_day, std::int64_t last_day);
void write_curve_csv(const std::vector<CurvePoint>& curve, const std::string& value_column, std::ostream& out);

}  // namespace dpor
