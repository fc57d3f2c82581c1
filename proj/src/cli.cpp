#include "dpor/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "dpor/error.hpp"
#include "dpor/pipeline.hpp"
#include "dpor/report_io.hpp"

namespace dpor {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "' for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buffer[1 << 14];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(in.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx, digest, &length);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    for (unsigned i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

namespace {

struct Manifest {
    std::string command;
    std::vector<std::string> arguments;
    std::map<std::string, std::string> config;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["tool"] = "dpor-cli";
        j["version"] = kToolVersion;
        j["command"] = command;
        j["arguments"] = arguments;
        j["config"] = config;
        auto files = [](const std::vector<std::string>& paths) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& p : paths) arr.push_back({{"path", p}, {"sha256", file_digest(p)}});
            return arr;
        };
        j["inputs"] = files(inputs);
        j["outputs"] = files(outputs);
        return j;
    }
};

std::ofstream open_output(const std::string& path) {
    if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    return out;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
    auto out = open_output(path);
    writer(out);
    if (!out) throw UsageError("failed writing '" + path + "'");
}

Params load_params(const std::string& config_path, Config* raw = nullptr) {
    Config config;
    if (!config_path.empty()) config = Config::load(config_path);
    if (raw) *raw = config;
    return Params::from_config(config);
}

std::vector<Ballot> load_ballots(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open ballot file '" + path + "'");
    return parse_ballots(in);
}

std::vector<std::int64_t> parse_sweep(const std::string& text) {
    std::vector<std::int64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty() || v < 0)
            throw UsageError("--sweep expects comma-separated nonnegative integers, got '" + text + "'");
        values.push_back(v);
    }
    if (values.empty()) throw UsageError("--sweep needs at least one multiplicity");
    return values;
}

void emit_manifest(const Manifest& m, const std::string& path, std::ostream& out) {
    const auto text = m.to_json().dump(2) + "\n";
    if (path == "-") {
        out << text;
        return;
    }
    write_file(path, [&](std::ostream& o) { o << text; });
}

std::string manifest_path(const std::string& requested, const std::string& primary_output) {
    if (!requested.empty()) return requested;
    return primary_output.empty() ? "-" : primary_output + ".manifest.json";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Delegated proof-of-reputation scoring, election and loop-attack simulation", "dpor-cli"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string ledger, config_path, output, loops_out, ballots_path, report_path, out_dir = ".", scenario_path, sweep,
        partition_path, curve, manifest, emit_ledger, emit_ballots;
    double stake_amount = 1000.0, theta = 100.0, amount = 1000.0, phi = 2.0, eta = 0.02;
    std::int64_t last_day = -1;

    auto* ingest = app.add_subcommand("ingest", "Parse and validate a ledger");
    ingest->add_option("--ledger", ledger, "Ledger file")->required();

    auto* score = app.add_subcommand("score", "Compute per-account reputation");
    score->add_option("--ledger", ledger, "Ledger file")->required();
    score->add_option("--out", output, "Reputation CSV")->required();
    score->add_option("--loops", loops_out, "Also write the loop report CSV");

    auto* elect = app.add_subcommand("elect", "Tally reputation-weighted ballots");
    elect->add_option("--ballots", ballots_path, "Ballot file")->required();
    elect->add_option("--report", report_path, "Reputation CSV from `score`")->required();
    elect->add_option("--out-dir", out_dir, "Directory for producers.csv and standby.csv");

    auto* simulate = app.add_subcommand("simulate", "Run the loop-attack multiplicity sweep");
    simulate->add_option("--scenario", scenario_path, "Scenario config (scenario.* keys, optional scoring keys)")->required();
    simulate->add_option("--sweep", sweep, "Comma-separated multiplicities")->required();
    simulate->add_option("--out", output, "Experiment CSV")->required();
    simulate->add_option("--emit-ledger", emit_ledger, "Also write the scenario ledger at its configured multiplicity");
    simulate->add_option("--emit-ballots", emit_ballots, "Also write the scenario ballots");

    auto* detect = app.add_subcommand("detect-loops", "Report inconsistent-flow energy per account");
    detect->add_option("--ledger", ledger, "Ledger file")->required();
    detect->add_option("--out", output, "Loop report CSV")->required();

    auto* compare = app.add_subcommand("compare-rankers", "PageRank, NCDawareRank and HodgeRank side by side");
    compare->add_option("--ledger", ledger, "Ledger file")->required();
    compare->add_option("--out", output, "Comparison CSV")->required();
    compare->add_option("--partition", partition_path, "Block partition file (default: singleton blocks)");

    auto* plot = app.add_subcommand("export-plot", "Stake-converter or shrinkage curve as CSV");
    plot->add_option("--curve", curve, "stake | shrink")->required()->check(CLI::IsMember({"stake", "shrink"}));
    plot->add_option("--out", output, "Curve CSV")->required();
    plot->add_option("--stake", stake_amount, "Staked amount S (stake curve)");
    plot->add_option("--theta", theta, "Threshold (stake curve)");
    plot->add_option("--amount", amount, "Transaction amount (shrink curve)");
    plot->add_option("--phi", phi, "Shrinkage base (shrink curve)");
    plot->add_option("--eta", eta, "Shrinkage coefficient (shrink curve)");
    plot->add_option("--last-day", last_day, "Last day of the curve (default 30 for stake, 365 for shrink)");

    for (auto* sub : {ingest, score, elect, simulate, detect, compare, plot}) {
        sub->add_option("--manifest", manifest, "Run manifest path ('-' for stdout)");
        if (sub != ingest && sub != plot) sub->add_option("--config", config_path, "Config file (key=value)");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::usage);
    }

    Manifest m;
    m.arguments = args;
    try {
        if (ingest->parsed()) {
            m.command = "ingest";
            const auto round = load_ledger(ledger);
            m.inputs = {ledger};
            const auto violations = validate_ledger(round);
            out << fmt::format("blocks={} transactions={} stakes={} usage={} accounts={} days={} dropped_self_transfers={}\n",
                               round.block_count(), round.transaction_count(), round.stakes.size(), round.usage.size(),
                               round.accounts.size(), round.round_days, round.dropped_self_transfers);
            for (const auto& v : violations) out << "violation: " << v.record << ": " << v.rule << '\n';
            emit_manifest(m, manifest_path(manifest, ""), out);
            return violations.empty() ? 0 : static_cast<int>(ErrorKind::data);
        }
        if (score->parsed()) {
            m.command = "score";
            const auto params = load_params(config_path);
            m.config = params.snapshot();
            const auto round = load_ledger(ledger);
            m.inputs = {ledger};
            if (!config_path.empty()) m.inputs.push_back(config_path);
            const auto outcome = run_round(round, params);
            write_file(output, [&](std::ostream& o) { write_reputation_csv(outcome.report, o); });
            m.outputs = {output};
            if (!loops_out.empty()) {
                write_file(loops_out, [&](std::ostream& o) { write_loop_report_csv(outcome.loops, o); });
                m.outputs.push_back(loops_out);
            }
            emit_manifest(m, manifest_path(manifest, output), out);
            return 0;
        }
        if (elect->parsed()) {
            m.command = "elect";
            const auto params = load_params(config_path);
            m.config = params.snapshot();
            std::ifstream report_in(report_path);
            if (!report_in) throw UsageError("cannot open report '" + report_path + "'");
            const auto report = read_reputation_csv(report_in);
            const auto ballots = load_ballots(ballots_path);
            m.inputs = {ballots_path, report_path};
            if (!config_path.empty()) m.inputs.push_back(config_path);
            const auto result = tally_votes(ballots, report, params.election);
            const auto dir = std::filesystem::path(out_dir);
            const auto producers = (dir / "producers.csv").string(), standby = (dir / "standby.csv").string();
            write_file(producers, [&](std::ostream& o) { write_producers_csv(result, o); });
            write_file(standby, [&](std::ostream& o) { write_standby_csv(result, o); });
            m.outputs = {producers, standby};
            emit_manifest(m, manifest_path(manifest, producers), out);
            return 0;
        }
        if (simulate->parsed()) {
            m.command = "simulate";
            Config config = Config::load(scenario_path);
            if (!config_path.empty()) config.merge(Config::load(config_path));
            const auto params = Params::from_config(config);
            const auto scenario = ScenarioConfig::from_config(config);
            m.config = params.snapshot();
            for (const auto& [k, v] : scenario.snapshot()) m.config[k] = v;
            m.inputs = {scenario_path};
            if (!config_path.empty()) m.inputs.push_back(config_path);
            const auto sweep_values = parse_sweep(sweep);
            const auto result = loop_attack_experiment(scenario, sweep_values, params);
            write_file(output, [&](std::ostream& o) { write_experiment_csv(result, o); });
            m.outputs = {output};
            if (!emit_ledger.empty() || !emit_ballots.empty()) {
                const auto generated = generate_scenario(scenario);
                if (!emit_ledger.empty()) {
                    write_file(emit_ledger, [&](std::ostream& o) { write_ledger(generated.round, o); });
                    m.outputs.push_back(emit_ledger);
                }
                if (!emit_ballots.empty()) {
                    write_file(emit_ballots, [&](std::ostream& o) { write_ballots(generated.ballots, o); });
                    m.outputs.push_back(emit_ballots);
                }
            }
            emit_manifest(m, manifest_path(manifest, output), out);
            return 0;
        }
        if (detect->parsed()) {
            m.command = "detect-loops";
            const auto params = load_params(config_path);
            m.config = params.snapshot();
            const auto round = load_ledger(ledger);
            m.inputs = {ledger};
            if (!config_path.empty()) m.inputs.push_back(config_path);
            const auto outcome = run_round(round, params);
            write_file(output, [&](std::ostream& o) { write_loop_report_csv(outcome.loops, o); });
            m.outputs = {output};
            emit_manifest(m, manifest_path(manifest, output), out);
            return 0;
        }
        if (compare->parsed()) {
            m.command = "compare-rankers";
            const auto params = load_params(config_path);
            m.config = params.snapshot();
            const auto round = load_ledger(ledger);
            m.inputs = {ledger};
            if (!config_path.empty()) m.inputs.push_back(config_path);
            const auto outcome = run_round(round, params);
            const auto& g = outcome.graph;
            if (g.degenerate) throw DataError("degenerate round: no positive transfer volume to rank");
            BlockPartition partition = BlockPartition::singletons(g.size());
            if (!partition_path.empty()) {
                std::ifstream pin(partition_path);
                if (!pin) throw UsageError("cannot open partition file '" + partition_path + "'");
                partition = BlockPartition::from_assignment(g.accounts, parse_partition(pin));
                m.inputs.push_back(partition_path);
            }
            const auto a = StochasticMatrix::from_graph(g);
            RankerComparison cmp;
            cmp.accounts = g.accounts;
            cmp.pagerank = pagerank(a, params.alpha, params.power).scores;
            cmp.ncdawarerank = ncdawarerank(a, partition, params.alpha, params.mu, params.power).scores;
            cmp.volume_pagerank = volume_pagerank(g, params.alpha, params.power).scores;
            cmp.hodge_score = outcome.hodge->score;
            write_file(output, [&](std::ostream& o) { write_rankers_csv(cmp, o); });
            m.outputs = {output};
            emit_manifest(m, manifest_path(manifest, output), out);
            return 0;
        }
        if (plot->parsed()) {
            m.command = "export-plot";
            if (curve == "stake") {
                if (!(stake_amount > 0.0)) throw UsageError("--stake must be positive");
                StakeParams{theta}.validate();
                m.config = {{"curve", "stake"}, {"stake", fmt::format("{}", stake_amount)}, {"theta", fmt::format("{}", theta)}};
                const auto points = stake_curve(stake_amount, theta, last_day < 0 ? 30 : last_day);
                write_file(output, [&](std::ostream& o) { write_curve_csv(points, "convertible", o); });
            } else {
                ShrinkParams sp;
                sp.phi = phi;
                sp.eta = eta;
                sp.validate();
                m.config = {{"curve", "shrink"}, {"amount", fmt::format("{}", amount)}, {"phi", fmt::format("{}", phi)},
                            {"eta", fmt::format("{}", eta)}};
                const auto points = shrink_curve(amount, sp, 1, last_day < 0 ? 365 : last_day);
                write_file(output, [&](std::ostream& o) { write_curve_csv(points, "weight", o); });
            }
            m.outputs = {output};
            emit_manifest(m, manifest_path(manifest, output), out);
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::data);
    }
    return static_cast<int>(ErrorKind::usage);
}

}  // namespace dpor
