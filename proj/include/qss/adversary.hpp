#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qss/qcore.hpp"
#include "qss/rng.hpp"

namespace qss {

enum class AttackKind { None, InterceptResend, BellJoint, GhzCheat };

// Basis rule for intercept-resend: what Eve measures the tapped share in.
enum class EveBasisRule { UniformZX, AlwaysZ, AlwaysX };

/// Value description of an adversary. Engines interpret it through the
/// per-round hooks below; the description itself carries no state.
struct AttackStrategy {
    AttackKind kind = AttackKind::None;
    int channel = 1;                       // InterceptResend: share index to tap
    EveBasisRule basis_rule = EveBasisRule::UniformZX;
    double attack_fraction = 1.0;          // fraction of rounds attacked
};

AttackStrategy no_attack();
AttackStrategy intercept_resend(int channel,
                                EveBasisRule rule = EveBasisRule::UniformZX);
AttackStrategy bell_joint();
AttackStrategy ghz_cheat();

std::string to_string(AttackKind k);

/// Per-round adversary. Engines construct one per round with that round's
/// attack stream; hooks mutate in-flight state and remember what Eve saw.
/// Nothing survives across rounds, which keeps round evaluation parallel.
class RoundAdversary {
public:
    RoundAdversary(const AttackStrategy& spec, std::uint64_t seed);

    const AttackStrategy& spec() const { return spec_; }
    bool active() const { return active_; }
    const std::string& note() const { return note_; }

    // ---- product / two-BB84 hooks ----------------------------------------
    // Intercept-resend on one in-flight share: measure in the rule's basis
    // and forward the collapsed eigenstate.
    void intercept_share(StateVector& state, int qubit_index);

    // Joint Bell measurement of two simultaneously in-flight shares.
    void intercept_pair(StateVector& state, int qubit_a, int qubit_b);

    // Secret guess before any basis announcement: certain outcomes only.
    std::optional<int> product_guess_blind() const;
    // Refined guess once the preparation basis is public: parity classes.
    std::optional<int> product_guess(int basis_bit) const;

    // ---- GHZ hooks --------------------------------------------------------
    // Bob captures both transmitted qubits (1 = his, 2 = Charlie's), measures
    // both in Y, and forwards a fresh |0> to Charlie.
    void ghz_capture(StateVector& state);

    // Bob's basis announcement; charlie_basis is present iff Charlie spoke
    // first. Echoing Charlie keeps the round exactly when Alice chose X.
    Basis ghz_announce_basis(std::optional<Basis> charlie_basis) const;

    // Bob's check value for a kept combo with the given product sign.
    // charlie_value is present iff Charlie announced first. Bob always stands
    // in -beta*gamma for Alice's value, which is exact when she measured X.
    int ghz_check_value(int combo_sign, std::optional<int> charlie_value) const;

    // Bob's guess of Alice's key bit once her basis is public.
    std::optional<int> ghz_guess(Basis alice_basis) const;

private:
    AttackStrategy spec_;
    Rng rng_;
    bool active_ = false;
    std::optional<BellOutcome> bell_;
    std::optional<int> beta_, gamma_;  // Bob's Y eigenvalues on qubits b, c
    std::string note_;
};

/// Post-run summary of what the adversary achieved.
struct AttackReport {
    AttackStrategy strategy;
    int rounds_attacked = 0;
    // one entry per round; nullopt = no definite guess that round
    std::vector<std::optional<int>> eve_key_guesses;
    // over kept key rounds that carry a definite guess; nullopt if none do
    std::optional<double> leak_rate;
    // error rate over attacked check rounds; nullopt if there were none
    std::optional<double> induced_check_qber;
};

}  // namespace qss
