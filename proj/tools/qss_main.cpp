#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qss/scenario.hpp"
#include "qss/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;     // usage / config error, nothing written
constexpr int kExitDetected = 2;  // protocol aborted: eavesdropping detected

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// write-then-rename so a failed run never leaves a partial document
void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write file: " + path);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

struct RunFlags {
    std::string config_path;
    std::string protocol, memory, transmission, adversary, ordering, table;
    std::string out, metrics_out, csv_out, name;
    int parties = 2, rounds = 1000, threads = 1;
    std::uint64_t seed = 1;
    double check_fraction = 0.25, qber_threshold = 0.02, noise = 0.0;
    double attack_fraction = 1.0;
};

void add_scenario_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--config", f.config_path,
                    "scenario JSON file; explicit flags override its values");
    cmd->add_option("--protocol", f.protocol, "product | ghz | two-bb84");
    cmd->add_option("--parties", f.parties, "number of shareholders (product)");
    cmd->add_option("--rounds", f.rounds, "number of rounds");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--memory", f.memory, "on | off (quantum memory)");
    cmd->add_option("--transmission", f.transmission,
                    "simultaneous | sequential");
    cmd->add_option("--adversary", f.adversary,
                    "none | intercept:<b|c> | bell-joint | ghz-cheat");
    cmd->add_option("--ordering", f.ordering,
                    "fixed | random announcement ordering");
    cmd->add_option("--check-fraction", f.check_fraction,
                    "fraction of kept rounds sacrificed as checks");
    cmd->add_option("--qber-threshold", f.qber_threshold,
                    "abort when the check error rate exceeds this");
    cmd->add_option("--noise", f.noise, "per-share flip probability");
    cmd->add_option("--table", f.table, "encoding table: parity | <json path>");
    cmd->add_option("--attack-fraction", f.attack_fraction,
                    "fraction of rounds the adversary acts on");
    cmd->add_option("--threads", f.threads,
                    "round-evaluation workers (output is identical for any value)");
    cmd->add_option("--out", f.out, "transcript JSON output path");
    cmd->add_option("--metrics-out", f.metrics_out, "metrics JSON output path");
    cmd->add_option("--csv-out", f.csv_out, "per-round CSV output path");
    cmd->add_option("--name", f.name, "scenario name used in reports");
}

qss::Scenario build_scenario(const CLI::App* cmd, const RunFlags& f) {
    qss::Scenario sc;
    if (!f.config_path.empty())
        sc = qss::scenario_from_json(read_file(f.config_path));
    auto given = [&](const std::string& flag) { return cmd->count(flag) > 0; };
    if (given("--protocol"))
        sc.config.protocol = qss::protocol_from_string(f.protocol);
    if (given("--parties")) sc.config.num_shareholders = f.parties;
    if (given("--rounds")) sc.config.rounds = f.rounds;
    if (given("--seed")) sc.config.master_seed = f.seed;
    if (given("--memory")) {
        if (f.memory != "on" && f.memory != "off")
            throw std::invalid_argument("--memory takes on or off");
        sc.config.quantum_memory = f.memory == "on";
    }
    if (given("--transmission")) {
        if (f.transmission == "simultaneous")
            sc.config.transmission = qss::TransmissionMode::Simultaneous;
        else if (f.transmission == "sequential")
            sc.config.transmission = qss::TransmissionMode::Sequential;
        else
            throw std::invalid_argument(
                "--transmission takes simultaneous or sequential");
    }
    if (given("--adversary")) {
        const double keep_fraction = sc.attack.attack_fraction;
        sc.attack = qss::attack_from_string(f.adversary);
        sc.attack.attack_fraction = keep_fraction;
    }
    if (given("--ordering")) {
        if (f.ordering == "fixed")
            sc.config.ordering_policy = qss::OrderingPolicy::FixedBobLast;
        else if (f.ordering == "random")
            sc.config.ordering_policy = qss::OrderingPolicy::Random;
        else
            throw std::invalid_argument("--ordering takes fixed or random");
    }
    if (given("--check-fraction")) sc.config.check_fraction = f.check_fraction;
    if (given("--qber-threshold"))
        sc.config.abort_qber_threshold = f.qber_threshold;
    if (given("--noise")) sc.config.noise_flip_prob = f.noise;
    if (given("--table")) sc.table_ref = f.table;
    if (given("--attack-fraction"))
        sc.attack.attack_fraction = f.attack_fraction;
    if (given("--threads")) sc.threads = f.threads;
    if (given("--out")) sc.out_path = f.out;
    if (given("--metrics-out")) sc.metrics_path = f.metrics_out;
    if (given("--csv-out")) sc.csv_path = f.csv_out;
    if (given("--name")) sc.name = f.name;
    qss::finish_scenario(sc);
    return sc;
}

int cmd_run(const CLI::App* cmd, const RunFlags& f) {
    const qss::Scenario sc = build_scenario(cmd, f);
    const qss::ScenarioResult res = qss::run_scenario(sc);
    if (!sc.out_path.empty())
        write_file(sc.out_path, qss::transcript_to_json(res.transcript));
    if (!sc.metrics_path.empty()) write_file(sc.metrics_path, res.metrics_json);
    if (!sc.csv_path.empty())
        write_file(sc.csv_path, qss::transcript_to_csv(res.transcript));
    std::cout << res.summary_text;
    return res.transcript.aborted ? kExitDetected : kExitOk;
}

int cmd_compare(const std::vector<std::string>& scenario_files,
                const std::string& out_path) {
    // resolve everything first: an invalid list executes nothing
    std::vector<qss::Scenario> scenarios;
    scenarios.reserve(scenario_files.size());
    for (const auto& path : scenario_files) {
        qss::Scenario sc = qss::scenario_from_json(read_file(path));
        if (sc.name == "scenario")
            sc.name = std::filesystem::path(path).stem().string();
        scenarios.push_back(std::move(sc));
    }
    std::vector<qss::ResourceRow> rows;
    for (const auto& sc : scenarios) {
        const qss::ScenarioResult res = qss::run_scenario(sc);
        qss::ResourceRow row;
        row.name = sc.name;
        row.protocol = qss::to_string(sc.config.protocol);
        if (res.transcript.aborted) {
            row.efficiency = "aborted";
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f",
                          qss::efficiency(res.transcript));
            row.efficiency = buf;
            row.ledger = qss::resources(res.transcript, qss::Accounting::Ideal);
        }
        rows.push_back(std::move(row));
    }
    qss::ResourceRow epr;
    epr.name = "epr-reference";
    epr.protocol = "(static)";
    epr.efficiency = "-";
    epr.ledger = qss::epr_reference_row();
    rows.push_back(std::move(epr));
    const std::string table = qss::render_resource_table(rows);
    std::cout << table;
    if (!out_path.empty()) write_file(out_path, table);
    return kExitOk;
}

int cmd_leakage(const std::string& table_ref, int parties,
                const std::string& conditioning) {
    qss::EncodingTable table;
    if (table_ref == "parity" || table_ref == "builtin") {
        table = qss::parity_table(parties);
    } else {
        table = qss::load_table_file(table_ref);
        const auto violations = qss::validate(table);
        if (!violations.empty())
            throw std::invalid_argument("table '" + table_ref +
                                        "' is invalid: " + violations.front());
    }
    std::vector<qss::Conditioning> conds;
    if (conditioning == "known")
        conds = {qss::Conditioning::BasisKnown};
    else if (conditioning == "unknown")
        conds = {qss::Conditioning::BasisUnknown};
    else if (conditioning == "both")
        conds = {qss::Conditioning::BasisKnown, qss::Conditioning::BasisUnknown};
    else
        throw std::invalid_argument("--conditioning takes known, unknown or both");
    for (const auto c : conds)
        std::cout << qss::leakage_to_json(qss::leakage(table, c)) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator and analysis toolkit for product-state quantum "
                 "secret sharing, the GHZ-correlation scheme and their "
                 "adversaries"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand(
        "run", "run one protocol scenario and write transcript/metrics");
    add_scenario_flags(run, run_flags);

    std::vector<std::string> compare_files;
    std::string compare_out;
    CLI::App* compare = app.add_subcommand(
        "compare", "run several scenario files and print a side-by-side "
                   "efficiency/resource table (plus the static EPR row)");
    compare->add_option("scenarios", compare_files, "scenario JSON files")
        ->required()
        ->expected(-2);
    compare->add_option("--out", compare_out, "also write the table to a file");

    std::string leak_table = "parity", leak_conditioning = "both";
    int leak_parties = 2;
    CLI::App* leak = app.add_subcommand(
        "leakage", "exact joint-measurement leakage of an encoding table");
    leak->add_option("--table", leak_table, "parity | <json path>");
    leak->add_option("--parties", leak_parties, "share count for built-ins");
    leak->add_option("--conditioning", leak_conditioning, "known | unknown | both");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (run->parsed()) return cmd_run(run, run_flags);
        if (compare->parsed()) return cmd_compare(compare_files, compare_out);
        if (leak->parsed())
            return cmd_leakage(leak_table, leak_parties, leak_conditioning);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
