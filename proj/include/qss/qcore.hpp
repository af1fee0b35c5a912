#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qss {

using Complex = std::complex<double>;

inline constexpr int kDefaultQubitCap = 16;
inline constexpr double kNormTol = 1e-9;

// Z is the computational basis, X the Hadamard basis, Y the circular one.
enum class Basis { Z, X, Y };

std::string to_string(Basis b);
Basis basis_from_string(const std::string& s);

// 0 -> Z, 1 -> X (the two preparation bases of the product protocols).
inline Basis basis_from_bit(int bit) { return bit ? Basis::X : Basis::Z; }

/// Single-qubit measurement result. bit = (1 - eigenvalue) / 2, so the +1
/// eigenstate reads as bit 0.
struct MeasOutcome {
    int eigenvalue = +1;
    int bit = 0;
};

enum class BellOutcome { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

std::string to_string(BellOutcome o);

/// Exact complex-amplitude register over 1..cap qubits.
///
/// Amplitude index i encodes the computational basis ket whose binary
/// expansion is i, with qubit 0 in the most significant position. States stay
/// unit-norm (within 1e-9) after every public operation. Operations never
/// mutate their input; they return collapsed copies, so distinct values are
/// safe to use from concurrent contexts.
class StateVector {
public:
    explicit StateVector(int num_qubits, int cap = kDefaultQubitCap);

    // Builds a state from raw amplitudes (size must be a power of two).
    // The norm must already be 1 within 1e-6; it is then snapped exactly.
    static StateVector from_amplitudes(std::vector<Complex> amps,
                                       int cap = kDefaultQubitCap);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(std::size_t i) const { return amps_.at(i); }
    Complex& operator[](std::size_t i) { return amps_[i]; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;
    void renormalize();

    // <this|other>; global phase is unobservable, so equality up to phase is
    // |inner_product| == 1 within tolerance.
    Complex inner_product(const StateVector& other) const;

    // bit position of qubit `index` inside an amplitude index
    std::uint64_t qubit_mask(int index) const;

private:
    StateVector() = default;
    int num_qubits_ = 0;
    std::vector<Complex> amps_;
};

/// Tensor product of single-qubit states: qubit k is |bits[k]> when
/// labels[k] == Z, and |+> / |-> for bit 0 / 1 when labels[k] == X.
/// Y labels are rejected; no protocol prepares in Y.
StateVector prep_product(const std::vector<Basis>& labels,
                         const std::vector<int>& bits,
                         int cap = kDefaultQubitCap);

/// n-qubit GHZ state: 1/sqrt(2) at |0...0> and |1...1>, n >= 2.
StateVector prep_ghz(int n, int cap = kDefaultQubitCap);

/// Projective measurement of one qubit. The outcome is sampled from the Born
/// distribution with the single uniform `rand` in [0,1): +1 iff
/// rand < P(+1). Returns the outcome and the renormalized collapsed state.
std::pair<MeasOutcome, StateVector> measure_qubit(const StateVector& state,
                                                  int index, Basis basis,
                                                  double rand);

/// Joint measurement of qubits (i, j) in the canonical Bell basis
/// Phi+- = (|00> +- |11>)/sqrt(2), Psi+- = (|01> +- |10>)/sqrt(2), where the
/// first ket slot is qubit i. Outcome order for the cumulative rule is
/// PhiPlus, PhiMinus, PsiPlus, PsiMinus.
std::pair<BellOutcome, StateVector> measure_bell(const StateVector& state,
                                                 int i, int j, double rand);

/// Applies the named Pauli to one qubit (the flip-noise primitive).
StateVector apply_pauli(const StateVector& state, int index, Basis axis);

struct SingleStep {
    int index = 0;
    Basis basis = Basis::Z;
};
struct BellStep {
    int i = 0;
    int j = 1;
};
using PlanStep = std::variant<SingleStep, BellStep>;

/// Exact Born probabilities for a measurement plan over disjoint qubits.
/// No sampling and no collapse of the input. The outcome key holds one entry
/// per plan step: the eigenvalue (+1/-1) for a SingleStep, the BellOutcome
/// as an integer 0..3 for a BellStep. Probabilities sum to 1 within 1e-9;
/// zero-probability outcomes are included.
std::map<std::vector<int>, double> outcome_distribution(
    const StateVector& state, const std::vector<PlanStep>& plan);

}  // namespace qss
