#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qtk/circuit.hpp"
#include "qtk/errors.hpp"
#include "qtk/oracle.hpp"

namespace qtk {

// ---------------------------------------------------------------------------
// Quantum Fourier transform

inline constexpr int kMaxQftQubits = 12;

/// QFT on n qubits: |j> -> 2^{-n/2} sum_k e^{2 pi i j k / 2^n} |k>, with j and
/// k read big-endian. Each qubit gets H then cphase(pi / 2^d) from every later
/// qubit at distance d, followed by the bit-reversal swaps. Throws CapacityError outside [1, kMaxQftQubits].
Circuit qft_circuit(int n_qubits);
Circuit inverse_qft_circuit(int n_qubits);

/// The QFT circuit placed on qubits [first, first + width) of a larger register.
Circuit qft_on(int n_qubits, int first, int width, bool inverse = false);

// ---------------------------------------------------------------------------
// Deutsch-Jozsa

enum class DjClass { constant, balanced };

std::string to_string(DjClass c);

struct DjVerdict {
    DjClass verdict = DjClass::constant;
    uint64_t quantum_queries = 0;
    double zero_probability = 0;  ///< probability of reading all-zeros on the inputs
};

/// One oracle query on H^n|0> (|0> - |1>)/sqrt2, then H^n and a measurement
/// of the input register drawn with `rng_seed`. Under the promise the outcome
/// is deterministic; for other oracles the verdict is whatever was measured.
DjVerdict deutsch_jozsa(const Oracle &oracle, uint64_t rng_seed = 0);

// ---------------------------------------------------------------------------
// Order finding and factoring

inline constexpr uint64_t kMaxShorModulus = 32;
inline constexpr int kMaxPrecisionQubits = 11;

struct OrderFindingResult {
    std::optional<uint64_t> order;  ///< set only when a^r = 1 (mod n) was verified
    uint64_t measured = 0;          ///< counting-register readout y (phase ~ y / 2^t)
    int precision_qubits = 0;
};

/// Work-register width used for modulus n.
int work_qubits(uint64_t n);

/// Default counting-register width: 2 * work_qubits(n) + 1, capped at kMaxPrecisionQubits.
int default_precision(uint64_t n);

/// Phase estimation of x -> a x mod n with an inverse QFT readout, then
/// continued-fraction convergents of y / 2^t with denominators <= n, keeping
/// the first q with a^q = 1 (mod n). Throws PreconditionError if gcd(a, n) != 1
/// and CapacityError past kMaxShorModulus or kMaxPrecisionQubits.
OrderFindingResult order_finding(uint64_t a, uint64_t n, int precision_qubits, uint64_t rng_seed);

/// Circuit used by order_finding: counting register on qubits [0, t), work
/// register on [t, t + w) prepared in |1>.
Circuit order_finding_circuit(uint64_t a, uint64_t n, int precision_qubits);

/// Denominators of the continued-fraction convergents of num / den, in order.
std::vector<uint64_t> convergent_denominators(uint64_t num, uint64_t den);

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t mod);

struct FactorResult {
    uint64_t n = 0;
    uint64_t factor = 0;
    uint64_t a = 0;      ///< base of the successful attempt
    uint64_t order = 0;  ///< 0 when the factor came from gcd(a, n) directly
    int attempts = 0;
    uint64_t seed = 0;
};

enum class ShorRejection { too_small, too_large, even, prime, prime_power };

std::string to_string(ShorRejection r);

/// Raised by shor_factor for inputs the algorithm does not apply to.
class ShorInputError : public PreconditionError {
   public:
    ShorInputError(uint64_t n, ShorRejection reason)
        : PreconditionError(std::to_string(n) + " rejected: " + to_string(reason)), reason_(reason) {
    }
    ShorRejection reason() const {
        return reason_;
    }

   private:
    ShorRejection reason_;
};

/// Random base a, gcd shortcut, order finding, then gcd(a^(r/2) +- 1, n), until
/// a verified nontrivial factor appears or max_attempts is spent (nullopt).
std::optional<FactorResult> shor_factor(uint64_t n, uint64_t rng_seed, int max_attempts = 10);

// ---------------------------------------------------------------------------
// Bounded-error decision

struct BoundedErrorVerdict {
    bool accept = false;
    int runs = 0;
    int accepting_runs = 0;
    double frequency = 0;  ///< accepting_runs / runs
};

/// Simulates `circuit` from |0...0>, then measures `accept_qubit` in `runs`
/// independent trials (child seeds of rng_seed) and takes the majority.
/// Throws ParameterError unless runs is odd and >= 1.
BoundedErrorVerdict decide_bounded_error(const Circuit &circuit, int accept_qubit, int runs, uint64_t rng_seed,
                                         const OracleTable &oracles = {});

/// Exact probability that the majority of `runs` independent trials is wrong
/// when each trial is right with probability p_correct: P[Bin(runs, p) <= runs/2].
double majority_error_probability(double p_correct, int runs);

}  // namespace qtk
