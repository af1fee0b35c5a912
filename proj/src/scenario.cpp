#include "qss/scenario.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qss/serialize.hpp"

namespace qss {

namespace {

using Json = nlohmann::json;

void resolve_table(Scenario& sc) {
    if (sc.table_ref == "parity" || sc.table_ref == "builtin") {
        sc.table = parity_table(sc.config.num_shareholders);
        return;
    }
    sc.table = load_table_file(sc.table_ref);
    const auto violations = validate(sc.table);
    if (!violations.empty())
        throw std::invalid_argument("table '" + sc.table_ref +
                                    "' is invalid: " + violations.front());
}

// Engine-level compatibility checks, replicated here so cmd_compare can
// reject a bad scenario list before executing anything.
void check_compatibility(const Scenario& sc) {
    validate_config(sc.config);
    const AttackKind k = sc.attack.kind;
    switch (sc.config.protocol) {
        case ProtocolKind::Product:
            if (k == AttackKind::GhzCheat)
                throw std::invalid_argument("ghz_cheat applies only to the ghz protocol");
            if (k == AttackKind::BellJoint &&
                sc.config.transmission != TransmissionMode::Simultaneous)
                throw std::invalid_argument(
                    "bell-joint requires --transmission simultaneous");
            if (k == AttackKind::BellJoint && sc.config.num_shareholders != 2)
                throw std::invalid_argument("bell-joint needs exactly two shares");
            if (k == AttackKind::InterceptResend &&
                sc.attack.channel >= sc.config.num_shareholders)
                throw std::invalid_argument("attack channel out of range");
            if (sc.table.num_shares != sc.config.num_shareholders)
                throw std::invalid_argument(
                    "table share count does not match --parties");
            break;
        case ProtocolKind::Ghz:
            if (k != AttackKind::None && k != AttackKind::GhzCheat)
                throw std::invalid_argument("only ghz-cheat targets the ghz protocol");
            break;
        case ProtocolKind::TwoBb84:
            if (k == AttackKind::BellJoint || k == AttackKind::GhzCheat)
                throw std::invalid_argument(
                    "two_bb84 supports none or intercept:<b|c> adversaries");
            if (k == AttackKind::InterceptResend && sc.attack.channel >= 2)
                throw std::invalid_argument("attack channel out of range");
            break;
    }
}

}  // namespace

ProtocolKind protocol_from_string(const std::string& s) {
    if (s == "product") return ProtocolKind::Product;
    if (s == "ghz") return ProtocolKind::Ghz;
    if (s == "two_bb84" || s == "two-bb84") return ProtocolKind::TwoBb84;
    throw std::invalid_argument("unknown protocol: " + s);
}

AttackStrategy attack_from_string(const std::string& s) {
    if (s == "none" || s.empty()) return no_attack();
    if (s == "bell-joint" || s == "bell_joint") return bell_joint();
    if (s == "ghz-cheat" || s == "ghz_cheat") return ghz_cheat();
    if (s.rfind("intercept:", 0) == 0) {
        const std::string ch = s.substr(10);
        if (ch == "b") return intercept_resend(0);
        if (ch == "c") return intercept_resend(1);
        try {
            return intercept_resend(std::stoi(ch));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad intercept channel: " + ch);
        }
    }
    throw std::invalid_argument("unknown adversary: " + s);
}

std::string attack_to_cli_string(const AttackStrategy& a) {
    switch (a.kind) {
        case AttackKind::None: return "none";
        case AttackKind::BellJoint: return "bell-joint";
        case AttackKind::GhzCheat: return "ghz-cheat";
        case AttackKind::InterceptResend:
            if (a.channel == 0) return "intercept:b";
            if (a.channel == 1) return "intercept:c";
            return "intercept:" + std::to_string(a.channel);
    }
    return "none";
}

Scenario scenario_from_json(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario JSON parse error: ") +
                                    e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("scenario document must be a JSON object");
    static const std::set<std::string> known = {
        "name",          "protocol",    "parties",        "rounds",
        "seed",          "memory",      "transmission",   "adversary",
        "ordering",      "check_fraction", "qber_threshold", "noise",
        "attack_fraction", "table",     "out",            "metrics_out",
        "csv_out",       "threads"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("unknown scenario key: " + it.key());
    Scenario sc;
    sc.name = j.value("name", "scenario");
    ProtocolConfig& c = sc.config;
    if (j.contains("protocol"))
        c.protocol = protocol_from_string(j.at("protocol").get<std::string>());
    c.num_shareholders = j.value("parties", c.num_shareholders);
    c.rounds = j.value("rounds", c.rounds);
    c.master_seed = j.value("seed", c.master_seed);
    if (j.contains("memory")) {
        const std::string m = j.at("memory").get<std::string>();
        if (m != "on" && m != "off")
            throw std::invalid_argument("memory must be on or off");
        c.quantum_memory = m == "on";
    }
    if (j.contains("transmission")) {
        const std::string t = j.at("transmission").get<std::string>();
        if (t == "simultaneous")
            c.transmission = TransmissionMode::Simultaneous;
        else if (t == "sequential")
            c.transmission = TransmissionMode::Sequential;
        else
            throw std::invalid_argument("transmission must be simultaneous or sequential");
    }
    c.check_fraction = j.value("check_fraction", c.check_fraction);
    c.abort_qber_threshold = j.value("qber_threshold", c.abort_qber_threshold);
    c.noise_flip_prob = j.value("noise", c.noise_flip_prob);
    if (j.contains("ordering")) {
        const std::string o = j.at("ordering").get<std::string>();
        if (o == "fixed")
            c.ordering_policy = OrderingPolicy::FixedBobLast;
        else if (o == "random")
            c.ordering_policy = OrderingPolicy::Random;
        else
            throw std::invalid_argument("ordering must be fixed or random");
    }
    if (j.contains("adversary"))
        sc.attack = attack_from_string(j.at("adversary").get<std::string>());
    sc.attack.attack_fraction = j.value("attack_fraction", sc.attack.attack_fraction);
    sc.table_ref = j.value("table", sc.table_ref);
    sc.out_path = j.value("out", sc.out_path);
    sc.metrics_path = j.value("metrics_out", sc.metrics_path);
    sc.csv_path = j.value("csv_out", sc.csv_path);
    sc.threads = j.value("threads", sc.threads);
    finish_scenario(sc);
    return sc;
}

void finish_scenario(Scenario& scenario) {
    if (!(scenario.attack.attack_fraction >= 0.0 &&
          scenario.attack.attack_fraction <= 1.0))
        throw std::invalid_argument("attack_fraction must lie in [0,1]");
    if (scenario.threads < 1) scenario.threads = 1;
    resolve_table(scenario);
    check_compatibility(scenario);
}

ScenarioResult run_scenario(const Scenario& sc) {
    ScenarioResult result;
    switch (sc.config.protocol) {
        case ProtocolKind::Product:
            result.transcript =
                run_product(sc.config, sc.table, sc.attack, sc.threads);
            break;
        case ProtocolKind::Ghz:
            result.transcript = run_ghz(sc.config, sc.attack, sc.threads);
            break;
        case ProtocolKind::TwoBb84:
            result.transcript = run_two_bb84(sc.config, sc.attack, sc.threads);
            break;
    }
    const Transcript& t = result.transcript;

    nlohmann::ordered_json m;
    m["scenario"] = sc.name;
    m["protocol"] = to_string(sc.config.protocol);
    m["rounds"] = sc.config.rounds;
    m["seed"] = sc.config.master_seed;
    m["adversary"] = attack_to_cli_string(sc.attack);
    m["aborted"] = t.aborted;
    m["efficiency"] = efficiency(t);
    m["key_bits"] = static_cast<int>(t.alice_key.size());
    m["qber"] = nlohmann::json::parse(qber_to_json(qber_summary(t)));
    if (!t.aborted) {
        m["resources_ideal"] =
            nlohmann::json::parse(ledger_to_json(resources(t, Accounting::Ideal)));
        m["resources_actual"] =
            nlohmann::json::parse(ledger_to_json(resources(t, Accounting::Actual)));
    }
    if (t.attack_report) {
        nlohmann::ordered_json a;
        a["rounds_attacked"] = t.attack_report->rounds_attacked;
        a["leak_rate"] = t.attack_report->leak_rate
                             ? nlohmann::json(*t.attack_report->leak_rate)
                             : nlohmann::json(nullptr);
        a["induced_check_qber"] =
            t.attack_report->induced_check_qber
                ? nlohmann::json(*t.attack_report->induced_check_qber)
                : nlohmann::json(nullptr);
        m["attack"] = a;
    }
    result.metrics_json = m.dump(2) + "\n";

    std::ostringstream s;
    const QberSummary q = qber_summary(t);
    s << "scenario=" << sc.name << " protocol=" << to_string(sc.config.protocol)
      << " rounds=" << sc.config.rounds << " seed=" << sc.config.master_seed
      << "\n";
    s << "efficiency=" << efficiency(t) << "\n";
    s << "qber=" << (q.aggregate ? std::to_string(*q.aggregate) : "undefined")
      << "\n";
    s << "key_bits=" << t.alice_key.size() << "\n";
    if (t.attack_report && t.attack_report->leak_rate)
        s << "leak_rate=" << *t.attack_report->leak_rate << "\n";
    s << "aborted=" << (t.aborted ? "true" : "false") << "\n";
    result.summary_text = s.str();
    return result;
}

}  // namespace qss
