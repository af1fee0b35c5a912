#include "qss/serialize.hpp"

#include <sstream>

#include <json.hpp>

namespace qss {

namespace {

using Json = nlohmann::ordered_json;

Json config_json(const ProtocolConfig& c) {
    Json j;
    j["protocol"] = to_string(c.protocol);
    j["num_shareholders"] = c.num_shareholders;
    j["rounds"] = c.rounds;
    j["quantum_memory"] = c.quantum_memory;
    j["transmission"] = to_string(c.transmission);
    j["check_fraction"] = c.check_fraction;
    j["abort_qber_threshold"] = c.abort_qber_threshold;
    j["noise_flip_prob"] = c.noise_flip_prob;
    j["ordering_policy"] = to_string(c.ordering_policy);
    j["master_seed"] = c.master_seed;
    return j;
}

Json record_json(const RoundRecord& r) {
    Json j;
    j["index"] = r.index;
    j["basis_bit"] = r.basis_bit;
    j["secret_bit"] = r.secret_bit;
    j["prepared_pattern"] = r.prepared_pattern;
    j["ghz_bases"] = r.ghz_bases;
    j["ghz_outcomes"] = r.ghz_outcomes;
    Json tr = Json::array();
    for (const auto& t : r.transmissions)
        tr.push_back(Json{{"share", t.share}, {"intercepted", t.intercepted}});
    j["transmissions"] = tr;
    Json an = Json::array();
    for (const auto& a : r.announcements)
        an.push_back(Json{{"party", a.party}, {"kind", a.kind}, {"value", a.value}});
    j["announcements"] = an;
    j["shareholder_bases"] = r.shareholder_bases;
    j["shareholder_outcomes"] = r.shareholder_outcomes;
    j["alice_bases"] = r.alice_bases;
    j["kept"] = r.kept;
    j["is_check"] = r.is_check;
    j["check_error"] = r.check_error;
    j["adversary_note"] = r.adversary_note;
    return j;
}

Json attack_json(const AttackReport& rep) {
    Json j;
    Json strat;
    strat["kind"] = to_string(rep.strategy.kind);
    strat["channel"] = rep.strategy.channel;
    strat["attack_fraction"] = rep.strategy.attack_fraction;
    j["strategy"] = strat;
    j["rounds_attacked"] = rep.rounds_attacked;
    if (rep.leak_rate)
        j["leak_rate"] = *rep.leak_rate;
    else
        j["leak_rate"] = nullptr;
    if (rep.induced_check_qber)
        j["induced_check_qber"] = *rep.induced_check_qber;
    else
        j["induced_check_qber"] = nullptr;
    Json guesses = Json::array();
    for (const auto& g : rep.eve_key_guesses) {
        if (g)
            guesses.push_back(*g);
        else
            guesses.push_back(nullptr);
    }
    j["eve_key_guesses"] = guesses;
    return j;
}

Json rational_json(const Rational& r) {
    return Json{{"num", r.num}, {"den", r.den}, {"value", r.value()}};
}

}  // namespace

std::string transcript_to_json(const Transcript& t, int indent) {
    Json j;
    j["config"] = config_json(t.config);
    j["aborted"] = t.aborted;
    j["alice_key"] = t.alice_key;
    j["shareholder_keys"] = t.shareholder_keys;
    if (t.attack_report)
        j["attack_report"] = attack_json(*t.attack_report);
    else
        j["attack_report"] = nullptr;
    Json recs = Json::array();
    for (const auto& r : t.records) recs.push_back(record_json(r));
    j["records"] = recs;
    return j.dump(indent) + "\n";
}

std::string transcript_to_csv(const Transcript& t) {
    std::ostringstream out;
    out << "index,basis,kept,is_check,check_error\n";
    for (const auto& r : t.records) {
        std::string basis;
        switch (t.config.protocol) {
            case ProtocolKind::Product:
                basis = r.basis_bit ? "X" : "Z";
                break;
            case ProtocolKind::Ghz:
                for (const auto& b : r.ghz_bases) basis += b;
                break;
            case ProtocolKind::TwoBb84:
                for (int b : r.alice_bases) basis += b ? 'X' : 'Z';
                break;
        }
        out << r.index << ',' << basis << ',' << int(r.kept) << ','
            << int(r.is_check) << ',' << int(r.check_error) << '\n';
    }
    return out.str();
}

std::string ledger_to_json(const ResourceLedger& led) {
    Json j;
    j["accounting"] = led.accounting == Accounting::Ideal ? "ideal" : "actual";
    j["qubits_sent"] = led.qubits_sent;
    j["classical_announce_bits"] = led.classical_announce_bits;
    j["ebits_consumed"] = led.ebits_consumed;
    j["retained_key_bits"] = led.retained_key_bits;
    j["per_bit_qubits"] = rational_json(led.per_bit_qubits);
    j["per_bit_cbits"] = rational_json(led.per_bit_cbits);
    j["per_bit_ebits"] = rational_json(led.per_bit_ebits);
    return j.dump();
}

std::string leakage_to_json(const LeakageReport& rep) {
    Json j;
    j["conditioning"] = to_string(rep.conditioning);
    j["mutual_information_bits"] = rep.mutual_information_bits;
    Json post;
    for (const auto& [k, v] : rep.per_outcome_posterior) post[k] = v;
    j["per_outcome_posterior"] = post;
    return j.dump();
}

std::string qber_to_json(const QberSummary& q) {
    Json j;
    j["check_rounds"] = q.check_rounds;
    j["aggregate"] = q.aggregate ? Json(*q.aggregate) : Json(nullptr);
    Json per = Json::array();
    for (const auto& r : q.per_share) per.push_back(r ? Json(*r) : Json(nullptr));
    j["per_share"] = per;
    j["parity_error_rate"] =
        q.parity_error_rate ? Json(*q.parity_error_rate) : Json(nullptr);
    return j.dump();
}

std::string render_resource_table(const std::vector<ResourceRow>& rows) {
    std::vector<std::array<std::string, 6>> cells;
    cells.push_back({"scenario", "protocol", "efficiency", "qubits/bit",
                     "cbits/bit", "ebits/bit"});
    for (const auto& r : rows)
        cells.push_back({r.name, r.protocol, r.efficiency,
                         r.ledger.per_bit_qubits.str(),
                         r.ledger.per_bit_cbits.str(),
                         r.ledger.per_bit_ebits.str()});
    std::array<std::size_t, 6> width{};
    for (const auto& row : cells)
        for (int c = 0; c < 6; ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    for (const auto& row : cells) {
        for (int c = 0; c < 6; ++c) {
            out << row[c];
            if (c + 1 < 6)
                out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace qss
