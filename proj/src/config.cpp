#include "dpor/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "stake.theta",       "usage.lo",         "usage.hi",          "graph.phi",
        "graph.eta",         "graph.preset",     "graph.shrunk_normalizer",
        "rank.alpha",        "loops.tau",        "solve.tol",         "solve.max_iter",
        "baseline.mu",       "baseline.tol",     "baseline.max_iter", "rep.w1",
        "rep.w2",            "rep.w3",           "election.vmax",     "election.producers",
        "election.standby_through",
    };
    return keys;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(fmt::format("{}:{}: expected key=value", source, line_no));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw UsageError(fmt::format("{}:{}: empty key", source, line_no));
        c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    return parse(in, path);
}

void Config::merge(const Config& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    double v = 0.0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw UsageError(fmt::format("config key {}: '{}' is not a number", key, s));
    return v;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::int64_t v = 0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw UsageError(fmt::format("config key {}: '{}' is not an integer", key, s));
    return v;
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
    const auto v = get_int(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw UsageError(fmt::format("config key {} must be nonnegative", key));
    return static_cast<std::size_t>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "on") return true;
    if (it->second == "false" || it->second == "0" || it->second == "off") return false;
    throw UsageError(fmt::format("config key {}: '{}' is not a boolean", key, it->second));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

Params Params::from_config(const Config& config) {
    for (const auto& [key, value] : config.values())
        if (!key.starts_with("scenario.") && !known_keys().contains(key)) throw UsageError("unknown config key '" + key + "'");

    Params p;
    p.stake.theta = config.get_double("stake.theta", p.stake.theta);
    p.usage.lo = config.get_double("usage.lo", p.usage.lo);
    p.usage.hi = config.get_double("usage.hi", p.usage.hi);

    const auto preset = config.get_string("graph.preset", "default");
    if (preset == "nem")
        p.graph = ShrinkParams::nem();
    else if (preset != "default")
        throw UsageError("graph.preset must be 'default' or 'nem'");
    p.graph.phi = config.get_double("graph.phi", p.graph.phi);
    p.graph.eta = config.get_double("graph.eta", p.graph.eta);
    const auto norm = config.get_string("graph.shrunk_normalizer", "auto");
    if (norm == "auto")
        p.graph.normalizer = Normalizer::automatic;
    else
        p.graph.normalizer = config.get_bool("graph.shrunk_normalizer", false) ? Normalizer::shrunk : Normalizer::raw;

    p.alpha = config.get_double("rank.alpha", p.alpha);
    p.tau = config.get_double("loops.tau", p.tau);
    p.solve.tol = config.get_double("solve.tol", p.solve.tol);
    p.solve.max_iter = config.get_size("solve.max_iter", p.solve.max_iter);
    p.mu = config.get_double("baseline.mu", p.mu);
    p.power.tol = config.get_double("baseline.tol", p.power.tol);
    p.power.max_iter = config.get_size("baseline.max_iter", p.power.max_iter);
    p.weights.stake = config.get_double("rep.w1", p.weights.stake);
    p.weights.usage = config.get_double("rep.w2", p.weights.usage);
    p.weights.ranking = config.get_double("rep.w3", p.weights.ranking);
    p.election.max_choices = config.get_size("election.vmax", p.election.max_choices);
    p.election.producers = config.get_size("election.producers", p.election.producers);
    p.election.standby_through = config.get_size("election.standby_through", p.election.standby_through);
    p.validate();
    return p;
}

void Params::validate() const {
    stake.validate();
    usage.validate();
    graph.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("rank.alpha must lie in (0,1)");
    if (!(tau >= 0.0)) throw UsageError("loops.tau must be nonnegative");
    if (!(solve.tol > 0.0)) throw UsageError("solve.tol must be positive");
    if (!(mu >= 0.0 && alpha + mu < 1.0)) throw UsageError("baseline.mu must be >= 0 with rank.alpha + baseline.mu < 1");
    if (!(power.tol > 0.0) || power.max_iter == 0) throw UsageError("baseline.tol and baseline.max_iter must be positive");
    weights.validate();
    election.validate();
}

std::map<std::string, std::string> Params::snapshot() const {
    const char* norm = graph.normalizer == Normalizer::automatic ? "auto" : graph.normalizer == Normalizer::shrunk ? "true" : "false";
    return {
        {"stake.theta", fmt::format("{}", stake.theta)},
        {"usage.lo", fmt::format("{}", usage.lo)},
        {"usage.hi", fmt::format("{}", usage.hi)},
        {"graph.phi", fmt::format("{}", graph.phi)},
        {"graph.eta", fmt::format("{}", graph.eta)},
        {"graph.shrunk_normalizer", norm},
        {"rank.alpha", fmt::format("{}", alpha)},
        {"loops.tau", fmt::format("{}", tau)},
        {"solve.tol", fmt::format("{}", solve.tol)},
        {"solve.max_iter", fmt::format("{}", solve.max_iter)},
        {"baseline.mu", fmt::format("{}", mu)},
        {"baseline.tol", fmt::format("{}", power.tol)},
        {"baseline.max_iter", fmt::format("{}", power.max_iter)},
        {"rep.w1", fmt::format("{}", weights.stake)},
        {"rep.w2", fmt::format("{}", weights.usage)},
        {"rep.w3", fmt::format("{}", weights.ranking)},
        {"election.vmax", fmt::format("{}", election.max_choices)},
        {"election.producers", fmt::format("{}", election.producers)},
        {"election.standby_through", fmt::format("{}", election.standby_through)},
    };
}

}  // namespace dpor
