#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qss/encoding.hpp"
#include "qss/protocol.hpp"

namespace qss {

struct Rational {
    long long num = 0;
    long long den = 1;
    void reduce();
    double value() const;
    std::string str() const;  // "2", "1/2", "0"
};

// Ideal accounting normalizes by the kept rounds (the asymptotic convention
// that ignores the check sacrifice); actual accounting normalizes by the
// final key length.
enum class Accounting { Ideal, Actual };

struct ResourceLedger {
    Accounting accounting = Accounting::Ideal;
    long long qubits_sent = 0;
    long long classical_announce_bits = 0;
    long long ebits_consumed = 0;
    long long retained_key_bits = 0;
    Rational per_bit_qubits, per_bit_cbits, per_bit_ebits;
};

/// kept rounds / total rounds.
double efficiency(const Transcript& transcript);

/// Exact integer resource totals recomputed from the records alone. Classical
/// bits follow the protocol definition: one L bit per round (product), one
/// basis bit per channel per round (two_bb84), three basis bits per round
/// (ghz, raw count). ebits are 0 for every implemented protocol.
ResourceLedger resources(const Transcript& transcript,
                         Accounting accounting = Accounting::Ideal);

/// Static reference row for the EPR-pair sharing scheme: 4 qubits, 1 cbit,
/// 2 ebits per key bit. Not simulated.
ResourceLedger epr_reference_row();

enum class Conditioning { BasisKnown, BasisUnknown };
enum class JointObservable { BellBasis };

std::string to_string(Conditioning c);

struct LeakageReport {
    Conditioning conditioning = Conditioning::BasisKnown;
    double mutual_information_bits = 0.0;
    // P(secret = 1 | outcome); keys are "PhiPlus"... for basis_unknown and
    // "Z:PhiPlus"... for basis_known
    std::map<std::string, double> per_outcome_posterior;
};

/// Exact information an eavesdropper measuring both shares jointly gains
/// about the secret, for a 2-share table: uniform prior over basis, secret
/// and cell pattern; outcome probabilities via the exact distribution oracle;
/// mutual information in bits (log2, zero-probability terms contribute zero).
LeakageReport leakage(const EncodingTable& table, Conditioning conditioning,
                      JointObservable observable = JointObservable::BellBasis);

struct QberSummary {
    int check_rounds = 0;
    std::optional<double> aggregate;          // errored checks / checks
    std::vector<std::optional<double>> per_share;
    std::optional<double> parity_error_rate;  // product only: XOR vs A bit
};

/// Per-share and aggregate check error rates. All rates are undefined
/// (nullopt) when the transcript has no check rounds, which is distinct
/// from measuring zero.
QberSummary qber_summary(const Transcript& transcript);

}  // namespace qss
