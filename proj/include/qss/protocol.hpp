#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/encoding.hpp"
#include "qss/qcore.hpp"
#include "qss/rng.hpp"

namespace qss {

enum class ProtocolKind { Product, Ghz, TwoBb84 };
enum class TransmissionMode { Simultaneous, Sequential };
enum class OrderingPolicy { FixedBobLast, Random };

std::string to_string(ProtocolKind p);
std::string to_string(TransmissionMode t);
std::string to_string(OrderingPolicy o);

struct ProtocolConfig {
    ProtocolKind protocol = ProtocolKind::Product;
    int num_shareholders = 2;   // product only; ghz and two_bb84 use 2
    int rounds = 1000;
    bool quantum_memory = true;
    // Sequential is the shipped default: with one share in flight at a time
    // joint two-share measurements are never offered to an adversary.
    TransmissionMode transmission = TransmissionMode::Sequential;
    double check_fraction = 0.25;
    double abort_qber_threshold = 0.02;
    double noise_flip_prob = 0.0;
    OrderingPolicy ordering_policy = OrderingPolicy::FixedBobLast;
    std::uint64_t master_seed = 1;
};

void validate_config(const ProtocolConfig& config);

struct TransitEvent {
    int share = 0;
    bool intercepted = false;
};

struct Announcement {
    std::string party;
    std::string kind;
    std::string value;
};

/// Complete audit trail of one round. Product rounds leave the ghz_* fields
/// empty and vice versa; two-BB84 rounds additionally carry Alice's
/// per-channel preparation bases in alice_bases.
struct RoundRecord {
    int index = 0;
    int basis_bit = 0;                      // L bit
    int secret_bit = 0;                     // A bit (product, two_bb84)
    std::string prepared_pattern;           // share values, share 0 first
    std::vector<std::string> ghz_bases;     // announced bases (alice, bob, charlie)
    std::vector<int> ghz_outcomes;          // eigenvalues (alice, bob, charlie)
    std::vector<TransitEvent> transmissions;
    std::vector<Announcement> announcements;
    std::vector<int> shareholder_bases;     // basis bit each shareholder measured in
    std::vector<int> shareholder_outcomes;  // measured bit per shareholder
    std::vector<int> alice_bases;           // two_bb84: per-channel prep basis
    bool kept = false;
    bool is_check = false;
    bool check_error = false;
    std::string adversary_note;
};

struct Transcript {
    ProtocolConfig config;
    std::vector<RoundRecord> records;
    bool aborted = false;
    std::string alice_key;                   // empty if aborted
    std::vector<std::string> shareholder_keys;
    std::optional<AttackReport> attack_report;
};

/// Product-state secret sharing. Per round Alice draws an L bit and an A bit,
/// encodes a pattern from the table, prepares the product state and transmits
/// the shares (attack and noise hooks apply). With quantum memory the
/// shareholders measure in the announced basis; without it each measures on
/// receipt in an independent random basis and the round is kept only on a
/// full basis match. A check_fraction of kept rounds is compared per share
/// value; the run aborts when the check error rate exceeds the threshold.
Transcript run_product(const ProtocolConfig& config, const EncodingTable& table,
                       const AttackStrategy& attack = no_attack(),
                       int threads = 1);

/// GHZ-correlation secret sharing with two shareholders. Round kept iff the
/// announced basis triple lies in {XXX, XYY, YXY, YYX}; on check rounds the
/// shareholders reveal eigenvalues and Alice verifies the product rule
/// (+1 for XXX, -1 otherwise). Announcement order in both the basis phase and
/// the check phase follows ordering_policy, with independent draws.
Transcript run_ghz(const ProtocolConfig& config,
                   const AttackStrategy& attack = no_attack(), int threads = 1);

/// Baseline: two independent BB84 sessions (Alice-Bob, Alice-Charlie), with
/// the sharing done classically afterwards: Bob's share is his channel key r,
/// Charlie's share is s XOR r delivered under his channel key.
Transcript run_two_bb84(const ProtocolConfig& config,
                        const AttackStrategy& attack = no_attack(),
                        int threads = 1);

// ---- post-pass pieces, exposed for tests and diagnostics -------------------

// Marks kept according to the protocol's sifting rule; decidable from the
// record contents alone.
void sift(std::vector<RoundRecord>& records, const ProtocolConfig& config);

// Uniform selection without replacement of floor(fraction * kept) check
// rounds among the kept ones (clamped so at least one key round survives).
void select_check_rounds(std::vector<RoundRecord>& records, double fraction,
                         Rng& rng);

// Fraction of check rounds with any value mismatch; 0 when there are none.
double estimate_qber(const std::vector<RoundRecord>& records);

// Shareholder display names: bob, charlie, shareholder3, ...
std::string party_name(int shareholder_index);

// +1 for XXX, -1 for XYY/YXY/YYX, 0 when the combo is not kept.
int ghz_combo_sign(const std::vector<std::string>& bases);

}  // namespace qss
