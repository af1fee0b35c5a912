#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "qss/analysis.hpp"
#include "qss/encoding.hpp"
#include "qss/protocol.hpp"
#include "qss/qcore.hpp"
#include "qss/scenario.hpp"
#include "qss/serialize.hpp"

namespace py = pybind11;
using namespace qss;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::json::value_t::string:
            return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(json_to_py(e));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

py::object json_str_to_py(const std::string& text) {
    return json_to_py(nlohmann::json::parse(text));
}

std::vector<Basis> to_bases(const std::vector<std::string>& labels) {
    std::vector<Basis> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(basis_from_string(l));
    return out;
}

}  // namespace

PYBIND11_MODULE(qss_sim, m) {
    m.doc() = "simulator for product-state quantum secret sharing, the "
              "GHZ-correlation scheme and their adversaries";

    // ---- state vectors -----------------------------------------------------
    py::class_<StateVector>(m, "StateVector")
        .def_property_readonly("num_qubits", &StateVector::num_qubits)
        .def_property_readonly("amplitudes",
                               [](const StateVector& s) { return s.amplitudes(); })
        .def("norm", &StateVector::norm)
        .def("__repr__", [](const StateVector& s) {
            return "<StateVector of " + std::to_string(s.num_qubits()) +
                   " qubit(s)>";
        });

    m.def("prep_product",
          [](const std::vector<std::string>& labels, const std::vector<int>& bits) {
              return prep_product(to_bases(labels), bits);
          },
          py::arg("labels"), py::arg("bits"));
    m.def("prep_ghz", [](int n) { return prep_ghz(n); }, py::arg("n"));
    m.def("measure_qubit",
          [](const StateVector& s, int index, const std::string& basis,
             double rand) {
              auto [out, state] =
                  measure_qubit(s, index, basis_from_string(basis), rand);
              return py::make_tuple(out.eigenvalue, out.bit, state);
          },
          py::arg("state"), py::arg("index"), py::arg("basis"), py::arg("rand"),
          "returns (eigenvalue, bit, collapsed_state)");
    m.def("measure_bell",
          [](const StateVector& s, int i, int j, double rand) {
              auto [out, state] = measure_bell(s, i, j, rand);
              return py::make_tuple(to_string(out), state);
          },
          py::arg("state"), py::arg("i"), py::arg("j"), py::arg("rand"),
          "returns (outcome_name, collapsed_state)");
    m.def("outcome_distribution",
          [](const StateVector& s, const py::list& plan) {
              std::vector<PlanStep> steps;
              for (const auto& item : plan) {
                  const auto t = item.cast<py::tuple>();
                  const std::string tag = t[0].cast<std::string>();
                  if (tag == "bell")
                      steps.push_back(BellStep{t[1].cast<int>(), t[2].cast<int>()});
                  else
                      steps.push_back(SingleStep{t[1].cast<int>(),
                                                 basis_from_string(tag)});
              }
              py::dict out;
              for (const auto& [key, p] : outcome_distribution(s, steps))
                  out[py::tuple(py::cast(key))] = p;
              return out;
          },
          py::arg("state"), py::arg("plan"),
          "plan entries: ('Z'|'X'|'Y', qubit) or ('bell', i, j)");

    // ---- encoding tables ---------------------------------------------------
    py::class_<EncodingTable>(m, "EncodingTable")
        .def_readonly("name", &EncodingTable::name)
        .def_readonly("num_shares", &EncodingTable::num_shares)
        .def("cell",
             [](const EncodingTable& t, int basis_bit, int secret_bit) {
                 return t.cell(basis_bit, secret_bit);
             },
             py::arg("basis_bit"), py::arg("secret_bit"))
        .def("to_json", &table_to_json);
    m.def("parity_table", &parity_table, py::arg("num_shares"));
    m.def("encode", &encode, py::arg("table"), py::arg("basis_bit"),
          py::arg("secret_bit"), py::arg("rand"));
    m.def("decode",
          [](const EncodingTable& t, int basis_bit, const std::string& pattern)
              -> py::object {
              const auto s = decode(t, basis_bit, pattern);
              return s ? py::cast(*s) : py::none();
          },
          py::arg("table"), py::arg("basis_bit"), py::arg("pattern"));
    m.def("validate_table", &validate, py::arg("table"));
    m.def("table_from_json", &table_from_json, py::arg("json_text"));

    // ---- protocol runs -----------------------------------------------------
    py::class_<ProtocolConfig>(m, "ProtocolConfig")
        .def(py::init([](const std::string& protocol, int parties, int rounds,
                         bool quantum_memory, const std::string& transmission,
                         double check_fraction, double qber_threshold,
                         double noise, const std::string& ordering,
                         std::uint64_t seed) {
                 ProtocolConfig c;
                 c.protocol = protocol_from_string(protocol);
                 c.num_shareholders = parties;
                 c.rounds = rounds;
                 c.quantum_memory = quantum_memory;
                 c.transmission = transmission == "simultaneous"
                                      ? TransmissionMode::Simultaneous
                                      : TransmissionMode::Sequential;
                 c.check_fraction = check_fraction;
                 c.abort_qber_threshold = qber_threshold;
                 c.noise_flip_prob = noise;
                 c.ordering_policy = ordering == "random"
                                         ? OrderingPolicy::Random
                                         : OrderingPolicy::FixedBobLast;
                 c.master_seed = seed;
                 return c;
             }),
             py::arg("protocol") = "product", py::arg("parties") = 2,
             py::arg("rounds") = 1000, py::arg("quantum_memory") = true,
             py::arg("transmission") = "sequential",
             py::arg("check_fraction") = 0.25,
             py::arg("qber_threshold") = 0.02, py::arg("noise") = 0.0,
             py::arg("ordering") = "fixed", py::arg("seed") = 1)
        .def_readwrite("rounds", &ProtocolConfig::rounds)
        .def_readwrite("num_shareholders", &ProtocolConfig::num_shareholders)
        .def_readwrite("quantum_memory", &ProtocolConfig::quantum_memory)
        .def_readwrite("check_fraction", &ProtocolConfig::check_fraction)
        .def_readwrite("abort_qber_threshold", &ProtocolConfig::abort_qber_threshold)
        .def_readwrite("noise_flip_prob", &ProtocolConfig::noise_flip_prob)
        .def_readwrite("master_seed", &ProtocolConfig::master_seed);

    py::class_<AttackStrategy>(m, "AttackStrategy")
        .def_readwrite("attack_fraction", &AttackStrategy::attack_fraction)
        .def("__repr__", [](const AttackStrategy& a) {
            return "<AttackStrategy " + to_string(a.kind) + ">";
        });
    m.def("no_attack", &no_attack);
    m.def("intercept_resend",
          [](int channel, const std::string& rule) {
              EveBasisRule r = EveBasisRule::UniformZX;
              if (rule == "always_z") r = EveBasisRule::AlwaysZ;
              else if (rule == "always_x") r = EveBasisRule::AlwaysX;
              else if (rule != "uniform")
                  throw std::invalid_argument("rule: uniform | always_z | always_x");
              return intercept_resend(channel, r);
          },
          py::arg("channel"), py::arg("rule") = "uniform");
    m.def("bell_joint", &bell_joint);
    m.def("ghz_cheat", &ghz_cheat);

    py::class_<Transcript>(m, "Transcript")
        .def_readonly("aborted", &Transcript::aborted)
        .def_readonly("alice_key", &Transcript::alice_key)
        .def_readonly("shareholder_keys", &Transcript::shareholder_keys)
        .def_property_readonly("rounds",
                               [](const Transcript& t) {
                                   return static_cast<int>(t.records.size());
                               })
        .def_property_readonly("attack_report",
                               [](const Transcript& t) -> py::object {
                                   if (!t.attack_report) return py::none();
                                   py::dict d;
                                   const auto& r = *t.attack_report;
                                   d["rounds_attacked"] = r.rounds_attacked;
                                   d["leak_rate"] = r.leak_rate
                                                        ? py::cast(*r.leak_rate)
                                                        : py::object(py::none());
                                   d["induced_check_qber"] =
                                       r.induced_check_qber
                                           ? py::cast(*r.induced_check_qber)
                                           : py::object(py::none());
                                   return d;
                               })
        .def("to_json", [](const Transcript& t) { return transcript_to_json(t); })
        .def("to_csv", &transcript_to_csv);

    m.def("run_product", &run_product, py::arg("config"), py::arg("table"),
          py::arg("attack") = no_attack(), py::arg("threads") = 1);
    m.def("run_ghz", &run_ghz, py::arg("config"),
          py::arg("attack") = no_attack(), py::arg("threads") = 1);
    m.def("run_two_bb84", &run_two_bb84, py::arg("config"),
          py::arg("attack") = no_attack(), py::arg("threads") = 1);

    // ---- analysis ----------------------------------------------------------
    m.def("efficiency", &efficiency, py::arg("transcript"));
    m.def("resources",
          [](const Transcript& t, const std::string& accounting) {
              const Accounting a = accounting == "actual" ? Accounting::Actual
                                                          : Accounting::Ideal;
              return json_str_to_py(ledger_to_json(resources(t, a)));
          },
          py::arg("transcript"), py::arg("accounting") = "ideal");
    m.def("epr_reference_row",
          [] { return json_str_to_py(ledger_to_json(epr_reference_row())); });
    m.def("leakage",
          [](const EncodingTable& t, const std::string& conditioning) {
              const Conditioning c = conditioning == "basis_unknown"
                                         ? Conditioning::BasisUnknown
                                         : Conditioning::BasisKnown;
              return json_str_to_py(leakage_to_json(leakage(t, c)));
          },
          py::arg("table"), py::arg("conditioning") = "basis_known");
    m.def("qber_summary", [](const Transcript& t) {
        return json_str_to_py(qber_to_json(qber_summary(t)));
    });
}
