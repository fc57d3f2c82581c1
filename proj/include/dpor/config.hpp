#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "dpor/baselines.hpp"
#include "dpor/consensus.hpp"
#include "dpor/flowrank.hpp"
#include "dpor/resource.hpp"
#include "dpor/stake.hpp"
#include "dpor/txgraph.hpp"

namespace dpor {

/// `key=value` lines; `#` starts a comment. Later keys override earlier ones.
class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config load(const std::string& path);

    bool contains(const std::string& key) const { return values_.contains(key); }
    const std::map<std::string, std::string>& values() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void merge(const Config& other);

    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

private:
    std::map<std::string, std::string> values_;
};

/// Every tunable of a scoring round, with defaults.
struct Params {
    StakeParams stake;
    UsageParams usage;
    ShrinkParams graph;
    double alpha = 0.85;
    double tau = 0.2;
    SolveOptions solve;
    double mu = 0.1;
    PowerIterationOptions power;
    RepWeights weights;
    ElectionParams election;

    /// Rejects unknown keys outside the `scenario.` namespace.
    static Params from_config(const Config& config);
    void validate() const;
    std::map<std::string, std::string> snapshot() const;
};

}  // namespace dpor
