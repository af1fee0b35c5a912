#include "qss/analysis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qss/qcore.hpp"

namespace qss {

void Rational::reduce() {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

double Rational::value() const { return static_cast<double>(num) / den; }

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::string to_string(Conditioning c) {
    return c == Conditioning::BasisKnown ? "basis_known" : "basis_unknown";
}

double efficiency(const Transcript& transcript) {
    if (transcript.records.empty())
        throw std::invalid_argument("efficiency of an empty transcript");
    long long kept = 0;
    for (const auto& r : transcript.records) kept += r.kept;
    return static_cast<double>(kept) / transcript.records.size();
}

ResourceLedger resources(const Transcript& transcript, Accounting accounting) {
    if (transcript.aborted)
        throw std::invalid_argument("resource ledger of an aborted transcript");
    if (transcript.records.empty())
        throw std::invalid_argument("resource ledger of an empty transcript");
    ResourceLedger led;
    led.accounting = accounting;
    long long kept = 0;
    for (const auto& r : transcript.records) {
        led.qubits_sent += static_cast<long long>(r.transmissions.size());
        kept += r.kept;
    }
    const long long rounds = static_cast<long long>(transcript.records.size());
    switch (transcript.config.protocol) {
        case ProtocolKind::Product: led.classical_announce_bits = rounds; break;
        case ProtocolKind::TwoBb84: led.classical_announce_bits = 2 * rounds; break;
        case ProtocolKind::Ghz: led.classical_announce_bits = 3 * rounds; break;
    }
    led.ebits_consumed = 0;
    led.retained_key_bits =
        accounting == Accounting::Ideal
            ? kept
            : static_cast<long long>(transcript.alice_key.size());
    if (led.retained_key_bits > 0) {
        led.per_bit_qubits = {led.qubits_sent, led.retained_key_bits};
        led.per_bit_cbits = {led.classical_announce_bits, led.retained_key_bits};
        led.per_bit_ebits = {led.ebits_consumed, led.retained_key_bits};
        led.per_bit_qubits.reduce();
        led.per_bit_cbits.reduce();
        led.per_bit_ebits.reduce();
    }
    return led;
}

ResourceLedger epr_reference_row() {
    ResourceLedger led;
    led.qubits_sent = 4;
    led.classical_announce_bits = 1;
    led.ebits_consumed = 2;
    led.retained_key_bits = 1;
    led.per_bit_qubits = {4, 1};
    led.per_bit_cbits = {1, 1};
    led.per_bit_ebits = {2, 1};
    return led;
}

namespace {

// I(S;O) in bits from a joint table p[s][o], skipping zero terms.
double mutual_information(const std::vector<std::array<double, 2>>& joint) {
    double ps[2] = {0, 0};
    double total = 0;
    std::vector<double> po(joint.size(), 0.0);
    for (std::size_t o = 0; o < joint.size(); ++o)
        for (int s = 0; s < 2; ++s) {
            ps[s] += joint[o][s];
            po[o] += joint[o][s];
            total += joint[o][s];
        }
    double mi = 0;
    for (std::size_t o = 0; o < joint.size(); ++o)
        for (int s = 0; s < 2; ++s) {
            const double p = joint[o][s];
            if (p <= 0) continue;
            mi += p / total * std::log2(p * total / (ps[s] * po[o]));
        }
    return mi;
}

}  // namespace

LeakageReport leakage(const EncodingTable& table, Conditioning conditioning,
                      JointObservable observable) {
    if (observable != JointObservable::BellBasis)
        throw std::invalid_argument("unsupported joint observable");
    if (table.num_shares != 2)
        throw std::invalid_argument("the Bell observable needs a 2-share table");

    // p_cond[b][o][s] = P(o | basis=b, secret=s), uniform over the cell
    double p_cond[2][4][2] = {};
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 2; ++s) {
            const auto& cell = table.cell(b, s);
            if (cell.empty()) continue;
            for (const auto& pattern : cell) {
                const StateVector state = prep_product(
                    std::vector<Basis>(2, basis_from_bit(b)),
                    pattern_bits(pattern));
                const auto dist =
                    outcome_distribution(state, {BellStep{0, 1}});
                for (const auto& [key, p] : dist)
                    p_cond[b][key[0]][s] += p / cell.size();
            }
        }

    LeakageReport rep;
    rep.conditioning = conditioning;
    const double quarter = 0.25;  // uniform prior over (basis, secret)
    if (conditioning == Conditioning::BasisUnknown) {
        std::vector<std::array<double, 2>> joint(4, {0, 0});
        for (int o = 0; o < 4; ++o)
            for (int s = 0; s < 2; ++s)
                for (int b = 0; b < 2; ++b)
                    joint[o][s] += quarter * p_cond[b][o][s];
        rep.mutual_information_bits = mutual_information(joint);
        for (int o = 0; o < 4; ++o) {
            const double po = joint[o][0] + joint[o][1];
            if (po > 0)
                rep.per_outcome_posterior[to_string(
                    static_cast<BellOutcome>(o))] = joint[o][1] / po;
        }
    } else {
        double mi = 0;
        for (int b = 0; b < 2; ++b) {
            std::vector<std::array<double, 2>> joint(4, {0, 0});
            for (int o = 0; o < 4; ++o)
                for (int s = 0; s < 2; ++s) joint[o][s] = 0.5 * p_cond[b][o][s];
            mi += 0.5 * mutual_information(joint);
            for (int o = 0; o < 4; ++o) {
                const double po = joint[o][0] + joint[o][1];
                if (po > 0)
                    rep.per_outcome_posterior
                        [to_string(basis_from_bit(b)) + ":" +
                         to_string(static_cast<BellOutcome>(o))] =
                            joint[o][1] / po;
            }
        }
        rep.mutual_information_bits = mi;
    }
    return rep;
}

QberSummary qber_summary(const Transcript& transcript) {
    QberSummary q;
    int errors = 0;
    const ProtocolKind proto = transcript.config.protocol;
    const int shares = proto == ProtocolKind::Product
                           ? transcript.config.num_shareholders
                           : 2;
    std::vector<int> share_errors(shares, 0);
    int parity_errors = 0;
    for (const auto& r : transcript.records) {
        if (!r.is_check) continue;
        ++q.check_rounds;
        errors += r.check_error;
        if (proto == ProtocolKind::Ghz) continue;
        const std::vector<int> sent = pattern_bits(r.prepared_pattern);
        int xr = 0;
        for (int k = 0; k < shares; ++k) {
            share_errors[k] += r.shareholder_outcomes[k] != sent[k];
            xr ^= r.shareholder_outcomes[k];
        }
        if (proto == ProtocolKind::Product) parity_errors += xr != r.secret_bit;
    }
    if (q.check_rounds == 0) return q;
    q.aggregate = static_cast<double>(errors) / q.check_rounds;
    if (proto != ProtocolKind::Ghz) {
        q.per_share.resize(shares);
        for (int k = 0; k < shares; ++k)
            q.per_share[k] = static_cast<double>(share_errors[k]) / q.check_rounds;
        if (proto == ProtocolKind::Product)
            q.parity_error_rate =
                static_cast<double>(parity_errors) / q.check_rounds;
    }
    return q;
}

}  // namespace qss
