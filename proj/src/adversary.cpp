#include "qss/adversary.hpp"

#include <stdexcept>

namespace qss {

AttackStrategy no_attack() { return {}; }

AttackStrategy intercept_resend(int channel, EveBasisRule rule) {
    if (channel < 0) throw std::invalid_argument("invalid channel index");
    AttackStrategy a;
    a.kind = AttackKind::InterceptResend;
    a.channel = channel;
    a.basis_rule = rule;
    return a;
}

AttackStrategy bell_joint() {
    AttackStrategy a;
    a.kind = AttackKind::BellJoint;
    return a;
}

AttackStrategy ghz_cheat() {
    AttackStrategy a;
    a.kind = AttackKind::GhzCheat;
    return a;
}

std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::None: return "none";
        case AttackKind::InterceptResend: return "intercept_resend";
        case AttackKind::BellJoint: return "bell_joint";
        case AttackKind::GhzCheat: return "ghz_cheat";
    }
    return "?";
}

RoundAdversary::RoundAdversary(const AttackStrategy& spec, std::uint64_t seed)
    : spec_(spec), rng_(seed) {
    if (spec_.kind != AttackKind::None)
        active_ = rng_.uniform() < spec_.attack_fraction;
}

void RoundAdversary::intercept_share(StateVector& state, int qubit_index) {
    Basis b = Basis::Z;
    switch (spec_.basis_rule) {
        case EveBasisRule::UniformZX:
            b = rng_.coin() ? Basis::X : Basis::Z;
            break;
        case EveBasisRule::AlwaysZ: b = Basis::Z; break;
        case EveBasisRule::AlwaysX: b = Basis::X; break;
    }
    auto [out, collapsed] = measure_qubit(state, qubit_index, b, rng_.uniform());
    // the collapsed eigenstate is exactly the fresh share Eve forwards
    state = collapsed;
    note_ = "intercept share " + std::to_string(qubit_index) + ": basis=" +
            to_string(b) + " bit=" + std::to_string(out.bit);
}

void RoundAdversary::intercept_pair(StateVector& state, int qubit_a,
                                    int qubit_b) {
    auto [out, collapsed] = measure_bell(state, qubit_a, qubit_b, rng_.uniform());
    state = collapsed;
    bell_ = out;
    note_ = "bell joint: outcome=" + to_string(out);
}

std::optional<int> RoundAdversary::product_guess_blind() const {
    if (!bell_) return std::nullopt;
    // Certain regardless of basis: PhiPlus fixes both parities to 0,
    // PsiMinus fixes both to 1.
    if (*bell_ == BellOutcome::PhiPlus) return 0;
    if (*bell_ == BellOutcome::PsiMinus) return 1;
    return std::nullopt;
}

std::optional<int> RoundAdversary::product_guess(int basis_bit) const {
    if (!bell_) return std::nullopt;
    // Z-basis secret is the Z(x)Z parity bit of the outcome, X-basis secret
    // the X(x)X parity bit.
    const bool psi = *bell_ == BellOutcome::PsiPlus || *bell_ == BellOutcome::PsiMinus;
    const bool minus = *bell_ == BellOutcome::PhiMinus || *bell_ == BellOutcome::PsiMinus;
    return basis_bit == 0 ? (psi ? 1 : 0) : (minus ? 1 : 0);
}

void RoundAdversary::ghz_capture(StateVector& state) {
    auto [ob, s1] = measure_qubit(state, 1, Basis::Y, rng_.uniform());
    auto [oc, s2] = measure_qubit(s1, 2, Basis::Y, rng_.uniform());
    beta_ = ob.eigenvalue;
    gamma_ = oc.eigenvalue;
    // Forward a fresh |0> to Charlie. Qubit 2 is unentangled after the
    // measurement, so projecting it onto |0> and renormalizing replaces it.
    auto [oz, s3] = measure_qubit(s2, 2, Basis::Z, 0.0);
    state = oz.bit == 0 ? s3 : apply_pauli(s3, 2, Basis::X);
    note_ = "ghz capture: beta=" + std::to_string(*beta_) +
            " gamma=" + std::to_string(*gamma_);
}

Basis RoundAdversary::ghz_announce_basis(std::optional<Basis> charlie_basis) const {
    if (charlie_basis) return *charlie_basis;
    return Basis::X;  // committed fallback when forced to speak first
}

int RoundAdversary::ghz_check_value(int combo_sign,
                                    std::optional<int> charlie_value) const {
    const int alice_stand_in = -(*beta_) * (*gamma_);
    return combo_sign * alice_stand_in * charlie_value.value_or(+1);
}

std::optional<int> RoundAdversary::ghz_guess(Basis alice_basis) const {
    if (!beta_ || alice_basis != Basis::X) return std::nullopt;
    const int eig = -(*beta_) * (*gamma_);
    return (1 - eig) / 2;
}

}  // namespace qss
