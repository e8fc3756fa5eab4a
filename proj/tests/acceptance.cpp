// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qtk/algorithms.hpp"
#include "qtk/compiler.hpp"
#include "qtk/errors.hpp"
#include "qtk/qtm.hpp"
#include "random_circuit.hpp"
#include "support.hpp"

using namespace qtk;
using qtk::testing::max_diff;
using qtk::testing::random_amps;
using qtk::testing::random_state;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

QtmDef load_machine(const std::string &name) {
    std::ifstream in(std::string(QTK_TEST_DATA) + "/" + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_qtm(buf.str());
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Oracle oracle_from_code(int n, uint64_t code) {
    std::vector<uint8_t> table(size_t{1} << n);
    for (size_t x = 0; x < table.size(); ++x) {
        table[x] = (code >> x) & 1;
    }
    return Oracle(n, table);
}

Check oracle_semantics() {
    Check c;
    auto t0 = Clock::now();
    Rng rng(1001);
    double worst_inv = 0, worst_lin = 0;
    for (int n = 1; n <= 3; ++n) {
        const size_t len = size_t{1} << n, dim = 2 * len;
        for (uint64_t code = 0; code < (uint64_t{1} << len); ++code) {
            Oracle o = oracle_from_code(n, code);
            UnitaryMatrix g = oracle_gate(o);
            for (uint64_t x = 0; x < len; ++x) {
                for (uint64_t b = 0; b < 2; ++b) {
                    uint64_t target = 2 * x + (b ^ o(x));
                    for (uint64_t r = 0; r < dim; ++r) {
                        c.require(g(r, 2 * x + b) == (r == target ? Amp{1} : Amp{0}),
                                  "basis map wrong for n=" + std::to_string(n));
                    }
                }
            }
            std::vector<int> all(n + 1), xs(n);
            for (int q = 0; q <= n; ++q) {
                all[q] = q;
            }
            for (int q = 0; q < n; ++q) {
                xs[q] = q;
            }
            for (int trial = 0; trial < 100; ++trial) {
                StateVector psi = random_state(n + 1, rng);
                std::vector<Amp> mapped(dim);
                for (uint64_t i = 0; i < dim; ++i) {
                    mapped[(i & ~uint64_t{1}) | ((i & 1) ^ o(i >> 1))] += psi[i];
                }
                StateVector once = psi;
                apply_unitary(once, g, all);
                StateVector strided = psi;
                QueryCounter counter;
                apply_oracle(strided, o, xs, n, counter);
                worst_lin = std::max({worst_lin, max_diff(once.amplitudes(), mapped),
                                      max_diff(strided.amplitudes(), mapped)});
                apply_unitary(once, g, all);
                worst_inv = std::max(worst_inv, max_diff(once.amplitudes(), psi.amplitudes()));
            }
        }
    }
    double secs = seconds_since(t0);
    c.require(worst_inv < 1e-12, "involution deviation " + fmt(worst_inv));
    c.require(worst_lin < 1e-12, "linearity deviation " + fmt(worst_lin));
    c.require(secs < 10, "runtime " + fmt(secs) + " s");
    if (c.ok) {
        c.detail = "278 oracles; involution " + fmt(worst_inv) + ", linearity " + fmt(worst_lin) + "; " +
                   fmt(secs) + " s";
    }
    return c;
}

Check deutsch_jozsa_exhaustive() {
    Check c;
    auto t0 = Clock::now();
    int correct = 0;
    std::vector<std::pair<Oracle, DjClass>> cases = {{Oracle::from_bits("00000000"), DjClass::constant},
                                                     {Oracle::from_bits("11111111"), DjClass::constant}};
    for (const Oracle &o : all_balanced_oracles(3)) {
        cases.emplace_back(o, DjClass::balanced);
    }
    c.require(cases.size() == 72, "expected 72 promise oracles");
    for (uint64_t k = 0; k < cases.size(); ++k) {
        const auto &[o, expect] = cases[k];
        DjVerdict v = deutsch_jozsa(o, k);
        double ideal = expect == DjClass::constant ? 1.0 : 0.0;
        c.require(v.quantum_queries == 1, "query count " + std::to_string(v.quantum_queries));
        c.require(std::abs(v.zero_probability - ideal) < 1e-12, "zero probability off for " + o.bits());
        correct += v.verdict == expect;
    }
    c.require(correct == 72, std::to_string(correct) + "/72 correct");
    int d1 = min_deterministic_queries_dj(1), d2 = min_deterministic_queries_dj(2), d3 = min_deterministic_queries_dj(3);
    c.require(d1 == 2 && d2 == 3 && d3 == 5,
              "classical bounds " + std::to_string(d1) + "," + std::to_string(d2) + "," + std::to_string(d3));
    double secs = seconds_since(t0);
    c.require(secs < 30, "runtime " + fmt(secs) + " s");
    if (c.ok) {
        c.detail = "72/72 correct with 1 query each; classical 2,3,5; " + fmt(secs) + " s";
    }
    return c;
}

Check qft_properties() {
    Check c;
    double worst_unit = 0, worst_entry = 0, worst_round = 0;
    for (int n = 1; n <= 6; ++n) {
        Matrix f = circuit_unitary(qft_circuit(n)).matrix();
        worst_unit = std::max(worst_unit, f.unitarity_deviation());
        const size_t dim = size_t{1} << n;
        for (size_t j = 0; j < dim; ++j) {
            for (size_t k = 0; k < dim; ++k) {
                Amp expect = std::polar(1 / std::sqrt(static_cast<double>(dim)),
                                        2 * std::numbers::pi * static_cast<double>(j * k % dim) / dim);
                worst_entry = std::max(worst_entry, std::abs(f(k, j) - expect));
            }
        }
    }
    Rng rng(1003);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + trial % 6;
        StateVector s = random_state(n, rng);
        StateVector back = simulate(inverse_qft_circuit(n), simulate(qft_circuit(n), s));
        worst_round = std::max(worst_round, max_diff(back.amplitudes(), s.amplitudes()));
    }
    c.require(worst_unit < 1e-9, "unitarity " + fmt(worst_unit));
    c.require(worst_entry < 1e-10, "closed form " + fmt(worst_entry));
    c.require(worst_round < 1e-9, "round trip " + fmt(worst_round));
    if (c.ok) {
        c.detail = "unitarity " + fmt(worst_unit) + ", entries " + fmt(worst_entry) + ", round trip " +
                   fmt(worst_round);
    }
    return c;
}

Check toy_shor() {
    Check c;
    auto t0 = Clock::now();
    int ok15 = 0, ok21 = 0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        for (uint64_t n : {15u, 21u}) {
            auto r = shor_factor(n, seed, 10);
            bool good = r && r->factor > 1 && r->factor < n && n % r->factor == 0 && r->attempts <= 10;
            (n == 15 ? ok15 : ok21) += good;
        }
    }
    int hits = 0;
    for (uint64_t seed = 0; seed < 200; ++seed) {
        hits += order_finding(7, 15, default_precision(15), seed).order == 4u;
    }
    double secs = seconds_since(t0);
    c.require(ok15 >= 95, "n=15 factored for " + std::to_string(ok15) + "/100 seeds");
    c.require(ok21 >= 95, "n=21 factored for " + std::to_string(ok21) + "/100 seeds");
    c.require(hits >= 80, "order_finding(7,15)=4 on " + std::to_string(hits) + "/200 seeds");
    c.require(secs < 300, "runtime " + fmt(secs) + " s");
    if (c.ok) {
        c.detail = "15: " + std::to_string(ok15) + "/100, 21: " + std::to_string(ok21) +
                   "/100, r=4 on " + std::to_string(hits) + "/200; " + fmt(secs) + " s";
    }
    return c;
}

Check qtm_model() {
    Check c;
    struct Expect {
        const char *file;
        bool well_formed;
    };
    double worst_norm = 0;
    for (Expect e : {Expect{"move_right.qtm", true}, Expect{"coin.qtm", true}, Expect{"broken_double.qtm", false},
                     Expect{"broken_partial.qtm", false}}) {
        QtmDef qtm = load_machine(e.file);
        for (int t = 2; t <= 4; ++t) {
            WellFormedness wf = check_well_formed(qtm, t);
            c.require(wf.well_formed == e.well_formed, std::string(e.file) + " verdict wrong at T=" +
                                                           std::to_string(t));
            c.require(e.well_formed || wf.violation_count > 0, std::string(e.file) + " reports no violations");
            if (e.well_formed) {
                for (const char *input : {"", "0", "1", "01"}) {
                    QtmState s = run_qtm(qtm, input, 50, t);
                    worst_norm = std::max(worst_norm, std::abs(s.norm() - 1.0));
                }
            }
        }
    }
    c.require(worst_norm < 1e-8, "norm drift " + fmt(worst_norm));
    if (c.ok) {
        c.detail = "4 machines x T in {2,3,4}; 50-step norm drift " + fmt(worst_norm);
    }
    return c;
}

Check model_equivalence() {
    Check c;
    double worst_op = 0, worst_state = 0;
    Rng rng(1006);
    for (const char *name : {"move_right.qtm", "coin.qtm"}) {
        QtmDef qtm = load_machine(name);
        const int cells = 2;
        Compilation comp = compile_qtm_step(qtm, cells);
        StepOperator op = step_operator(qtm, cells);
        const size_t padded = size_t{1} << comp.circuit.n_qubits;
        Matrix expect = Matrix::identity(padded);
        for (size_t col = 0; col < op.space.size(); ++col) {
            expect(col, col) = 0;
            for (const auto &[row, amp] : op.columns[col]) {
                expect(row, col) += amp;
            }
        }
        worst_op = std::max(worst_op, Matrix::max_abs_diff(circuit_unitary(comp.circuit).matrix(), expect));

        auto compare = [&](const QtmState &start, const QtmState &stepped) {
            std::vector<Amp> reg = start.amps;
            reg.resize(padded);
            StateVector out = simulate(comp.circuit, StateVector::from_amplitudes(reg));
            std::vector<Amp> want = stepped.amps;
            want.resize(padded);
            worst_state = std::max(worst_state, max_diff(out.amplitudes(), want));
        };
        for (const char *input : {"", "0", "1", "00", "01", "10", "11"}) {
            compare(run_qtm(qtm, input, 0, cells), run_qtm(qtm, input, 1, cells));
        }
        for (int trial = 0; trial < 10; ++trial) {
            QtmState s{op.space, random_amps(op.space.size(), rng)};
            compare(s, evolve(op, s, 1));
        }
    }
    c.require(worst_op < 1e-8, "operator deviation " + fmt(worst_op));
    c.require(worst_state < 1e-8, "state deviation " + fmt(worst_state));
    if (c.ok) {
        c.detail = "operator " + fmt(worst_op) + ", one-step states " + fmt(worst_state);
    }
    return c;
}

Check bounded_error() {
    Check c;
    const double a = std::sqrt(1.0 / 3), b = std::sqrt(2.0 / 3);
    Circuit circuit(1);
    circuit.unitary(UnitaryMatrix(Matrix{{a, -b}, {b, a}}), {0});
    const int runs = 45;
    double analytic = majority_error_probability(2.0 / 3, runs);
    int wrong = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        wrong += !decide_bounded_error(circuit, 0, runs, Rng::split_seed(1007, t)).accept;
    }
    double empirical = static_cast<double>(wrong) / trials;
    c.require(analytic < 0.01, "exact majority error " + fmt(analytic) + " is not < 0.01");
    c.require(std::abs(empirical - analytic) <= 0.005,
              "empirical " + fmt(empirical) + " vs exact " + fmt(analytic));
    std::string numbers = "exact " + std::to_string(analytic) + ", empirical " + std::to_string(empirical) +
                          " over " + std::to_string(trials) + " trials";
    c.detail = c.ok ? numbers : c.detail + "; " + numbers;
    return c;
}

Check simulator_soundness() {
    Check c;
    Rng rng(1008);
    double worst_norm = 0, worst_col = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Circuit circuit = qtk::testing::random_circuit(10, 100, rng);
        StateVector s = simulate(circuit, random_state(10, rng));
        worst_norm = std::max(worst_norm, std::abs(s.norm() - 1.0));
    }
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            Circuit circuit = qtk::testing::random_circuit(n, 30, rng, true);
            UnitaryMatrix u = circuit_unitary(circuit);
            for (uint64_t j = 0; j < (uint64_t{1} << n); ++j) {
                StateVector col = simulate(circuit, StateVector::basis(n, j));
                for (uint64_t r = 0; r < col.size(); ++r) {
                    worst_col = std::max(worst_col, std::abs(col[r] - u(r, j)));
                }
            }
        }
    }
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::string text(rng.uniform_int(0, 200), '\0');
        for (char &ch : text) {
            ch = static_cast<char>(rng.uniform_int(0, 255));
        }
        if (trial % 2) {
            text = "qubits 4\n" + text;
        }
        try {
            parse_circuit(text);
            ++parsed;
        } catch (const ParseError &e) {
            ++rejected;
            c.require(e.line() >= 1, "unpositioned parse error");
        } catch (const std::exception &e) {
            c.require(false, std::string("parser threw a non-parse error: ") + e.what());
        }
    }
    c.require(worst_norm < 1e-8, "norm drift " + fmt(worst_norm));
    c.require(worst_col < 1e-9, "column mismatch " + fmt(worst_col));
    if (c.ok) {
        c.detail = "norm drift " + fmt(worst_norm) + ", columns " + fmt(worst_col) + ", fuzz " +
                   std::to_string(parsed + rejected) + " inputs without a crash";
    }
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Check()>>> criteria = {
        {"oracle_gate_semantics", oracle_semantics},
        {"deutsch_jozsa_exhaustive", deutsch_jozsa_exhaustive},
        {"qft_properties", qft_properties},
        {"toy_shor", toy_shor},
        {"qtm_model", qtm_model},
        {"model_equivalence", model_equivalence},
        {"bounded_error_harness", bounded_error},
        {"simulator_soundness", simulator_soundness},
    };
    int failed = 0;
    for (const auto &[name, run] : criteria) {
        Check c;
        try {
            c = run();
        } catch (const std::exception &e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failed += !c.ok;
        std::printf("%s %s: %s\n", c.ok ? "PASS" : "FAIL", name, c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
