#include "qss/qcore.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qss {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Eigenvector of the single-qubit observable, as (|0>, |1>) components.
std::array<Complex, 2> eigenvector(Basis b, int eigenvalue) {
    const bool plus = eigenvalue > 0;
    switch (b) {
        case Basis::Z:
            return plus ? std::array<Complex, 2>{1.0, 0.0}
                        : std::array<Complex, 2>{0.0, 1.0};
        case Basis::X:
            return plus ? std::array<Complex, 2>{kInvSqrt2, kInvSqrt2}
                        : std::array<Complex, 2>{kInvSqrt2, -kInvSqrt2};
        case Basis::Y:
            return plus ? std::array<Complex, 2>{kInvSqrt2, Complex{0, kInvSqrt2}}
                        : std::array<Complex, 2>{kInvSqrt2, Complex{0, -kInvSqrt2}};
    }
    throw std::logic_error("unreachable basis");
}

// Bell coefficients over the two-qubit pattern (bit of i, bit of j) in the
// order 00, 01, 10, 11; rows follow the BellOutcome enum.
constexpr double s2 = 1.0 / std::numbers::sqrt2;
const std::array<std::array<Complex, 4>, 4> kBellCoeff = {{
    {{s2, 0.0, 0.0, s2}},    // PhiPlus
    {{s2, 0.0, 0.0, -s2}},   // PhiMinus
    {{0.0, s2, s2, 0.0}},    // PsiPlus
    {{0.0, s2, -s2, 0.0}},   // PsiMinus
}};

// Projects `amps` onto the given eigenvector of qubit `mask` without
// renormalizing; returns the squared norm of the projection.
double project_single(std::vector<Complex>& amps, std::uint64_t mask,
                      const std::array<Complex, 2>& v) {
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | mask];
        const Complex c = std::conj(v[0]) * a0 + std::conj(v[1]) * a1;
        amps[i] = v[0] * c;
        amps[i | mask] = v[1] * c;
        p += std::norm(c);
    }
    return p;
}

double project_bell(std::vector<Complex>& amps, std::uint64_t mi,
                    std::uint64_t mj, const std::array<Complex, 4>& coeff) {
    double p = 0.0;
    for (std::uint64_t g = 0; g < amps.size(); ++g) {
        if ((g & mi) || (g & mj)) continue;
        const std::array<std::uint64_t, 4> idx = {g, g | mj, g | mi,
                                                  g | mi | mj};
        Complex c = 0.0;
        for (int k = 0; k < 4; ++k) c += std::conj(coeff[k]) * amps[idx[k]];
        for (int k = 0; k < 4; ++k) amps[idx[k]] = coeff[k] * c;
        p += std::norm(c);
    }
    return p;
}

void scale(std::vector<Complex>& amps, double f) {
    for (auto& a : amps) a *= f;
}

}  // namespace

std::string to_string(Basis b) {
    switch (b) {
        case Basis::Z: return "Z";
        case Basis::X: return "X";
        case Basis::Y: return "Y";
    }
    return "?";
}

Basis basis_from_string(const std::string& s) {
    if (s == "Z" || s == "z") return Basis::Z;
    if (s == "X" || s == "x") return Basis::X;
    if (s == "Y" || s == "y") return Basis::Y;
    throw std::invalid_argument("unknown basis label: " + s);
}

std::string to_string(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus: return "PhiPlus";
        case BellOutcome::PhiMinus: return "PhiMinus";
        case BellOutcome::PsiPlus: return "PsiPlus";
        case BellOutcome::PsiMinus: return "PsiMinus";
    }
    return "?";
}

StateVector::StateVector(int num_qubits, int cap) {
    if (num_qubits < 1)
        throw std::invalid_argument("state needs at least one qubit");
    if (num_qubits > cap)
        throw std::invalid_argument("qubit count exceeds cap");
    num_qubits_ = num_qubits;
    amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps, int cap) {
    std::size_t n = amps.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    int q = 0;
    while ((std::size_t{1} << q) < n) ++q;
    if (q > cap) throw std::invalid_argument("qubit count exceeds cap");
    StateVector out;
    out.num_qubits_ = q;
    out.amps_ = std::move(amps);
    const double nn = out.norm();
    if (std::abs(nn - 1.0) > 1e-6)
        throw std::invalid_argument("amplitudes are not normalized");
    out.renormalize();
    return out;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::renormalize() {
    const double n = norm();
    if (n <= 0.0) throw std::logic_error("cannot renormalize a zero vector");
    scale(amps_, 1.0 / n);
}

Complex StateVector::inner_product(const StateVector& other) const {
    if (num_qubits_ != other.num_qubits_)
        throw std::invalid_argument("qubit count mismatch");
    Complex r = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        r += std::conj(amps_[i]) * other.amps_[i];
    return r;
}

std::uint64_t StateVector::qubit_mask(int index) const {
    if (index < 0 || index >= num_qubits_)
        throw std::out_of_range("qubit index out of range");
    return std::uint64_t{1} << (num_qubits_ - 1 - index);
}

StateVector prep_product(const std::vector<Basis>& labels,
                         const std::vector<int>& bits, int cap) {
    if (labels.size() != bits.size())
        throw std::invalid_argument("labels and bits must have equal length");
    if (labels.empty()) throw std::invalid_argument("empty preparation");
    const int n = static_cast<int>(labels.size());
    StateVector out(n, cap);
    std::vector<std::array<Complex, 2>> factors(n);
    for (int k = 0; k < n; ++k) {
        if (labels[k] == Basis::Y)
            throw std::invalid_argument("product preparation in Y is not supported");
        if (bits[k] != 0 && bits[k] != 1)
            throw std::invalid_argument("bits must be 0 or 1");
        factors[k] = eigenvector(labels[k], bits[k] == 0 ? +1 : -1);
    }
    for (std::uint64_t i = 0; i < out.dim(); ++i) {
        Complex a = 1.0;
        for (int k = 0; k < n; ++k) {
            const int bit = static_cast<int>((i >> (n - 1 - k)) & 1);
            a *= factors[k][bit];
        }
        out[i] = a;
    }
    return out;
}

StateVector prep_ghz(int n, int cap) {
    if (n < 2) throw std::invalid_argument("GHZ needs at least two qubits");
    StateVector out(n, cap);
    out[0] = kInvSqrt2;
    out[out.dim() - 1] = kInvSqrt2;
    return out;
}

std::pair<MeasOutcome, StateVector> measure_qubit(const StateVector& state,
                                                  int index, Basis basis,
                                                  double rand) {
    const std::uint64_t mask = state.qubit_mask(index);
    // P(+1) without touching the input
    std::vector<Complex> probe = state.amplitudes();
    const double p_plus = project_single(probe, mask, eigenvector(basis, +1));
    int eig = rand < p_plus ? +1 : -1;
    std::vector<Complex> amps = state.amplitudes();
    double p = project_single(amps, mask, eigenvector(basis, eig));
    if (p <= 0.0) {
        // rand slipped past the cumulative mass by rounding; the other
        // branch is the only possible one
        eig = -eig;
        amps = state.amplitudes();
        p = project_single(amps, mask, eigenvector(basis, eig));
    }
    scale(amps, 1.0 / std::sqrt(p));
    return {MeasOutcome{eig, (1 - eig) / 2},
            StateVector::from_amplitudes(std::move(amps))};
}

std::pair<BellOutcome, StateVector> measure_bell(const StateVector& state,
                                                 int i, int j, double rand) {
    if (i == j) throw std::invalid_argument("Bell measurement needs two distinct qubits");
    const std::uint64_t mi = state.qubit_mask(i);
    const std::uint64_t mj = state.qubit_mask(j);
    std::array<double, 4> p{};
    for (int o = 0; o < 4; ++o) {
        std::vector<Complex> probe = state.amplitudes();
        p[o] = project_bell(probe, mi, mj, kBellCoeff[o]);
    }
    // cumulative rule in enum order; if rand slips past the rounded total,
    // fall back to the last outcome that actually carries mass
    int pick = -1;
    double cum = 0.0;
    for (int o = 0; o < 4; ++o) {
        cum += p[o];
        if (rand < cum) {
            pick = o;
            break;
        }
    }
    if (pick < 0)
        for (int o = 3; o >= 0; --o)
            if (p[o] > 0.0) {
                pick = o;
                break;
            }
    std::vector<Complex> amps = state.amplitudes();
    const double pp = project_bell(amps, mi, mj, kBellCoeff[pick]);
    scale(amps, 1.0 / std::sqrt(pp));
    return {static_cast<BellOutcome>(pick),
            StateVector::from_amplitudes(std::move(amps))};
}

StateVector apply_pauli(const StateVector& state, int index, Basis axis) {
    const std::uint64_t mask = state.qubit_mask(index);
    StateVector out = state;
    for (std::uint64_t i = 0; i < out.dim(); ++i) {
        if (i & mask) continue;
        const Complex a0 = out[i];
        const Complex a1 = out[i | mask];
        switch (axis) {
            case Basis::X:
                out[i] = a1;
                out[i | mask] = a0;
                break;
            case Basis::Y:
                out[i] = Complex{0, -1} * a1;
                out[i | mask] = Complex{0, 1} * a0;
                break;
            case Basis::Z:
                out[i | mask] = -a1;
                break;
        }
    }
    return out;
}

std::map<std::vector<int>, double> outcome_distribution(
    const StateVector& state, const std::vector<PlanStep>& plan) {
    if (plan.empty()) throw std::invalid_argument("empty measurement plan");
    std::set<int> used;
    auto claim = [&](int q) {
        if (q < 0 || q >= state.num_qubits())
            throw std::invalid_argument("plan qubit index out of range");
        if (!used.insert(q).second)
            throw std::invalid_argument("plan qubit indices must be disjoint");
    };
    for (const auto& step : plan) {
        if (const auto* s = std::get_if<SingleStep>(&step)) {
            claim(s->index);
        } else {
            const auto& b = std::get<BellStep>(step);
            claim(b.i);
            claim(b.j);
        }
    }

    std::map<std::vector<int>, double> dist;
    std::vector<int> key;
    // depth-first over outcome combinations on unnormalized projections
    auto walk = [&](auto&& self, const std::vector<Complex>& amps,
                    std::size_t k) -> void {
        if (k == plan.size()) {
            double p = 0.0;
            for (const auto& a : amps) p += std::norm(a);
            dist[key] = p;
            return;
        }
        if (const auto* s = std::get_if<SingleStep>(&plan[k])) {
            const std::uint64_t mask = state.qubit_mask(s->index);
            for (int eig : {+1, -1}) {
                std::vector<Complex> next = amps;
                project_single(next, mask, eigenvector(s->basis, eig));
                key.push_back(eig);
                self(self, next, k + 1);
                key.pop_back();
            }
        } else {
            const auto& b = std::get<BellStep>(plan[k]);
            const std::uint64_t mi = state.qubit_mask(b.i);
            const std::uint64_t mj = state.qubit_mask(b.j);
            for (int o = 0; o < 4; ++o) {
                std::vector<Complex> next = amps;
                project_bell(next, mi, mj, kBellCoeff[o]);
                key.push_back(o);
                self(self, next, k + 1);
                key.pop_back();
            }
        }
    };
    walk(walk, state.amplitudes(), 0);
    return dist;
}

}  // namespace qss
