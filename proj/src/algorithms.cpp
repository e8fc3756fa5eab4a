#include "qtk/algorithms.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qtk/rng.hpp"

namespace qtk {

Circuit qft_on(int n_qubits, int first, int width, bool inverse_order) {
    if (width < 1 || width > kMaxQftQubits) {
        throw CapacityError("QFT width must be in [1, " + std::to_string(kMaxQftQubits) + "], got " +
                            std::to_string(width));
    }
    if (first < 0 || first + width > n_qubits) {
        throw IndexError("QFT register does not fit in the circuit");
    }
    Circuit c(n_qubits, inverse_order ? "iqft" : "qft");
    for (int q = 0; q < width; ++q) {
        c.h(first + q);
        for (int m = q + 1; m < width; ++m) {
            c.gate(GateName::cphase, {first + m, first + q}, std::numbers::pi / std::ldexp(1.0, m - q));
        }
    }
    for (int q = 0; q < width / 2; ++q) {
        c.gate(GateName::swap, {first + q, first + width - 1 - q});
    }
    return inverse_order ? inverse(c) : c;
}

Circuit qft_circuit(int n_qubits) {
    return qft_on(n_qubits, 0, n_qubits);
}

Circuit inverse_qft_circuit(int n_qubits) {
    Circuit c = qft_on(n_qubits, 0, n_qubits, true);
    c.name = "iqft";
    return c;
}

std::string to_string(DjClass c) {
    return c == DjClass::constant ? "constant" : "balanced";
}

DjVerdict deutsch_jozsa(const Oracle &oracle, uint64_t rng_seed) {
    const int n = oracle.n_inputs();
    const int ancilla = n;
    Circuit c(n + 1, "deutsch_jozsa");
    c.x(ancilla);
    for (int q = 0; q <= n; ++q) {
        c.h(q);
    }
    std::vector<int> targets(n + 1);
    std::iota(targets.begin(), targets.end(), 0);
    c.oracle("f", targets);
    for (int q = 0; q < n; ++q) {
        c.h(q);
    }

    OracleTable table{{"f", oracle}};
    QueryCounter counter;
    StateVector out = simulate(c, StateVector(n + 1), table, counter);

    // Inputs all zero <=> basis index 0 or 1 (ancilla is the low bit).
    DjVerdict v;
    v.zero_probability = std::norm(out[0]) + std::norm(out[1]);
    v.quantum_queries = counter.quantum_queries;
    Rng rng(rng_seed);
    v.verdict = rng.uniform() < v.zero_probability ? DjClass::constant : DjClass::balanced;
    return v;
}

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t mod) {
    if (mod == 1) {
        return 0;
    }
    unsigned __int128 result = 1, b = base % mod;
    while (exp > 0) {
        if (exp & 1) {
            result = result * b % mod;
        }
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<uint64_t>(result);
}

int work_qubits(uint64_t n) {
    return std::max(1, static_cast<int>(std::bit_width(n - 1)));
}

int default_precision(uint64_t n) {
    return std::min(kMaxPrecisionQubits, 2 * work_qubits(n) + 1);
}

namespace {

void check_order_inputs(uint64_t a, uint64_t n, int precision_qubits) {
    if (n < 2 || n > kMaxShorModulus) {
        throw CapacityError("modulus must be in [2, " + std::to_string(kMaxShorModulus) + "], got " +
                            std::to_string(n));
    }
    if (precision_qubits < 1 || precision_qubits > kMaxPrecisionQubits) {
        throw CapacityError("precision qubits must be in [1, " + std::to_string(kMaxPrecisionQubits) + "], got " +
                            std::to_string(precision_qubits));
    }
    if (std::gcd(a, n) != 1) {
        throw PreconditionError("gcd(" + std::to_string(a) + ", " + std::to_string(n) + ") = " +
                                std::to_string(std::gcd(a, n)) + " != 1");
    }
}

// Controlled x -> m x mod n on (control, work register); values >= n are fixed.
UnitaryMatrix controlled_mod_mult(uint64_t m, uint64_t n, int w) {
    const size_t half = size_t{1} << w;
    Matrix u(2 * half);
    for (size_t x = 0; x < half; ++x) {
        u(x, x) = 1;
        size_t y = x < n ? (m * x) % n : x;
        u(half + y, half + x) = 1;
    }
    return UnitaryMatrix(std::move(u));
}

}  // namespace

Circuit order_finding_circuit(uint64_t a, uint64_t n, int precision_qubits) {
    check_order_inputs(a, n, precision_qubits);
    const int t = precision_qubits;
    const int w = work_qubits(n);
    Circuit c(t + w, "order_finding");
    for (int q = 0; q < t; ++q) {
        c.h(q);
    }
    c.x(t + w - 1);
    std::vector<int> targets(w + 1);
    for (int k = 0; k < t; ++k) {
        // Counting qubit k carries weight 2^(t-1-k).
        uint64_t m = mod_pow(a, uint64_t{1} << (t - 1 - k), n);
        targets[0] = k;
        std::iota(targets.begin() + 1, targets.end(), t);
        c.unitary(controlled_mod_mult(m, n, w), targets);
    }
    c.append(qft_on(t + w, 0, t, true));
    return c;
}

std::vector<uint64_t> convergent_denominators(uint64_t num, uint64_t den) {
    if (den == 0) {
        throw ParameterError("continued fraction of x / 0");
    }
    std::vector<uint64_t> out;
    uint64_t q_prev = 0, q = 1;  // q_{-1}, q_0
    out.push_back(q);
    uint64_t rem = num % den;
    while (rem != 0) {
        num = den;
        den = rem;
        uint64_t term = num / den;
        rem = num % den;
        uint64_t q_next = term * q + q_prev;
        q_prev = q;
        q = q_next;
        out.push_back(q);
    }
    return out;
}

OrderFindingResult order_finding(uint64_t a, uint64_t n, int precision_qubits, uint64_t rng_seed) {
    Circuit c = order_finding_circuit(a, n, precision_qubits);
    const int w = work_qubits(n);
    StateVector out = simulate(c, StateVector(c.n_qubits));
    MeasurementRecord m = measure_all(out, rng_seed);

    OrderFindingResult result;
    result.precision_qubits = precision_qubits;
    result.measured = m.index >> w;
    for (uint64_t q : convergent_denominators(result.measured, uint64_t{1} << precision_qubits)) {
        if (q > n) {
            break;
        }
        if (mod_pow(a, q, n) == 1) {
            result.order = q;
            break;
        }
    }
    return result;
}

std::string to_string(ShorRejection r) {
    switch (r) {
        case ShorRejection::too_small:
            return "too small";
        case ShorRejection::too_large:
            return "too large";
        case ShorRejection::even:
            return "even";
        case ShorRejection::prime:
            return "prime";
        case ShorRejection::prime_power:
            return "prime power";
    }
    return "unknown";
}

namespace {

bool is_prime(uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

bool is_prime_power(uint64_t n) {
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            return n == 1 && is_prime(p);
        }
    }
    return false;
}

}  // namespace

std::optional<FactorResult> shor_factor(uint64_t n, uint64_t rng_seed, int max_attempts) {
    if (n < 2) {
        throw ShorInputError(n, ShorRejection::too_small);
    }
    if (n > kMaxShorModulus) {
        throw ShorInputError(n, ShorRejection::too_large);
    }
    if (n % 2 == 0) {
        throw ShorInputError(n, ShorRejection::even);
    }
    if (is_prime(n)) {
        throw ShorInputError(n, ShorRejection::prime);
    }
    if (is_prime_power(n)) {
        throw ShorInputError(n, ShorRejection::prime_power);
    }

    Rng rng(rng_seed);
    const int t = default_precision(n);
    auto verified = [n](uint64_t f) { return f > 1 && f < n && n % f == 0; };
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        uint64_t a = rng.uniform_int(2, n - 1);
        if (uint64_t g = std::gcd(a, n); g != 1) {
            if (verified(g)) {
                return FactorResult{n, g, a, 0, attempt, rng_seed};
            }
            continue;
        }
        OrderFindingResult of = order_finding(a, n, t, Rng::split_seed(rng_seed, static_cast<uint64_t>(attempt)));
        if (!of.order || *of.order % 2 != 0) {
            continue;
        }
        uint64_t half = mod_pow(a, *of.order / 2, n);
        if (half == n - 1) {
            continue;
        }
        for (uint64_t f : {std::gcd(half + n - 1, n), std::gcd(half + 1, n)}) {
            if (verified(f)) {
                return FactorResult{n, f, a, *of.order, attempt, rng_seed};
            }
        }
    }
    return std::nullopt;
}

BoundedErrorVerdict decide_bounded_error(const Circuit &circuit, int accept_qubit, int runs, uint64_t rng_seed,
                                         const OracleTable &oracles) {
    if (runs < 1 || runs % 2 == 0) {
        throw ParameterError("run count must be odd and positive, got " + std::to_string(runs));
    }
    if (accept_qubit < 0 || accept_qubit >= circuit.n_qubits) {
        throw IndexError("accept qubit " + std::to_string(accept_qubit) + " out of range");
    }
    StateVector out = simulate(circuit, StateVector(circuit.n_qubits), oracles);
    const double p1 = probability_one(out, accept_qubit) / (out.norm() * out.norm());

    BoundedErrorVerdict v;
    v.runs = runs;
    for (int k = 0; k < runs; ++k) {
        // Same draw measure_qubit(out, accept_qubit, seed_k) would make.
        Rng trial(Rng::split_seed(rng_seed, static_cast<uint64_t>(k)));
        if (trial.uniform() < p1) {
            ++v.accepting_runs;
        }
    }
    v.frequency = static_cast<double>(v.accepting_runs) / runs;
    v.accept = 2 * v.accepting_runs > runs;
    return v;
}

double majority_error_probability(double p_correct, int runs) {
    if (runs < 1 || runs % 2 == 0) {
        throw ParameterError("run count must be odd and positive, got " + std::to_string(runs));
    }
    if (p_correct < 0 || p_correct > 1) {
        throw ParameterError("probability must be in [0, 1]");
    }
    if (p_correct == 0) {
        return 1.0;
    }
    if (p_correct == 1) {
        return 0.0;
    }
    // Sum of C(runs, k) p^k q^(runs-k) for k <= runs / 2, terms in log space.
    const double lp = std::log(p_correct), lq = std::log1p(-p_correct);
    double total = 0;
    for (int k = 0; k <= runs / 2; ++k) {
        double log_binom = std::lgamma(runs + 1.0) - std::lgamma(k + 1.0) - std::lgamma(runs - k + 1.0);
        total += std::exp(log_binom + k * lp + (runs - k) * lq);
    }
    return total;
}

}  // namespace qtk
