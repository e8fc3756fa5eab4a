#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qtk/circuit.hpp"
#include "qtk/errors.hpp"
#include "random_circuit.hpp"
#include "support.hpp"

using namespace qtk;
using qtk::testing::max_diff;
using qtk::testing::random_circuit;
using qtk::testing::random_state;

namespace {

const double kInvSqrt2 = 1 / std::numbers::sqrt2;

double spectral_norm_diff(const Matrix &a, const Matrix &b) {
    Eigen::MatrixXcd d(a.dim(), a.dim());
    for (size_t r = 0; r < a.dim(); ++r) {
        for (size_t c = 0; c < a.dim(); ++c) {
            d(r, c) = a(r, c) - b(r, c);
        }
    }
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(d).singularValues()(0);
}

int parse_error_line(std::string_view text) {
    try {
        parse_circuit(text);
    } catch (const ParseError &e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(gate_matrix, hadamard) {
    Matrix expect{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
    EXPECT_LT(Matrix::max_abs_diff(standard_gate_matrix("H").matrix(), expect), 1e-15);
    EXPECT_EQ(standard_gate_matrix("h"), standard_gate_matrix(GateName::h));
}

TEST(gate_matrix, phase_zero_is_identity) {
    EXPECT_LT(Matrix::max_abs_diff(standard_gate_matrix("phase", 0.0).matrix(), Matrix::identity(2)), 1e-15);
}

TEST(gate_matrix, cphase_pi) {
    Matrix expect{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}};
    EXPECT_LT(Matrix::max_abs_diff(standard_gate_matrix("cphase", std::numbers::pi).matrix(), expect), 1e-15);
}

TEST(gate_matrix, fixed_gates) {
    const Amp i{0, 1};
    EXPECT_EQ(standard_gate_matrix("x").matrix(), (Matrix{{0, 1}, {1, 0}}));
    EXPECT_EQ(standard_gate_matrix("y").matrix(), (Matrix{{0, -i}, {i, 0}}));
    EXPECT_EQ(standard_gate_matrix("z").matrix(), (Matrix{{1, 0}, {0, -1}}));
    EXPECT_EQ(standard_gate_matrix("s").matrix(), (Matrix{{1, 0}, {0, i}}));
    EXPECT_LT(Matrix::max_abs_diff(standard_gate_matrix("t").matrix(),
                                   Matrix{{1, 0}, {0, std::polar(1.0, std::numbers::pi / 4)}}),
              1e-15);
    EXPECT_EQ(standard_gate_matrix("cx").matrix(),
              (Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}));
    EXPECT_EQ(standard_gate_matrix("swap").matrix(),
              (Matrix{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
    Matrix ccx = Matrix::identity(8);
    ccx(6, 6) = ccx(7, 7) = 0;
    ccx(6, 7) = ccx(7, 6) = 1;
    EXPECT_EQ(standard_gate_matrix("ccx").matrix(), ccx);
    EXPECT_EQ(standard_gate_matrix("mcx", std::nullopt, 3), standard_gate_matrix("ccx"));
    EXPECT_EQ(standard_gate_matrix("mcx", std::nullopt, 2), standard_gate_matrix("cx"));
}

TEST(gate_matrix, all_unitary) {
    for (int k = 0; k <= static_cast<int>(GateName::mcx); ++k) {
        auto g = static_cast<GateName>(k);
        std::optional<double> angle;
        if (is_parametric(g)) {
            angle = 0.7;
        }
        int arity = g == GateName::mcx ? 4 : 0;
        EXPECT_LT(standard_gate_matrix(g, angle, arity).matrix().unitarity_deviation(), 1e-12) << to_string(g);
    }
}

TEST(gate_matrix, errors) {
    EXPECT_THROW(standard_gate_matrix("foo"), ParameterError);
    EXPECT_THROW(standard_gate_matrix("phase"), ParameterError);
    EXPECT_THROW(standard_gate_matrix("h", 1.0), ParameterError);
}

TEST(simulate, empty_circuit) {
    Rng rng(1);
    StateVector s = random_state(3, rng);
    EXPECT_EQ(simulate(Circuit(3), s), s);
}

TEST(simulate, bell_pair) {
    Circuit c(2);
    c.h(0).cx(0, 1);
    StateVector out = simulate(c, StateVector(2));
    std::vector<Amp> expect{kInvSqrt2, 0, 0, kInvSqrt2};
    EXPECT_LT(max_diff(out.amplitudes(), expect), 1e-12);
}

TEST(simulate, unresolved_oracle) {
    Circuit c(2);
    c.oracle("f", {0, 1});
    EXPECT_THROW(simulate(c, StateVector(2)), OracleError);
}

TEST(simulate, dimension_mismatch) {
    EXPECT_THROW(simulate(Circuit(2), StateVector(3)), DimensionError);
}

TEST(simulate, oracle_arity_checked) {
    Circuit c(3);
    c.oracle("f", {0, 1, 2});
    OracleTable t{{"f", Oracle::from_bits("01")}};
    EXPECT_THROW(simulate(c, StateVector(3), t), Error);
}

TEST(circuit_unitary, examples) {
    EXPECT_EQ(circuit_unitary(Circuit(1)).matrix(), Matrix::identity(2));
    Circuit h(1);
    h.h(0);
    EXPECT_LT(Matrix::max_abs_diff(circuit_unitary(h).matrix(), standard_gate_matrix("h").matrix()), 1e-15);
    h.h(0);
    EXPECT_LT(Matrix::max_abs_diff(circuit_unitary(h).matrix(), Matrix::identity(2)), 1e-12);
    EXPECT_THROW(circuit_unitary(Circuit(11)), CapacityError);
}

TEST(circuit_unitary, composition) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform_int(0, 3));
        Circuit a = random_circuit(n, 8, rng, true);
        Circuit b = random_circuit(n, 8, rng, true);
        Circuit ab = a;
        ab.append(b);
        Matrix expect = circuit_unitary(b).matrix() * circuit_unitary(a).matrix();
        EXPECT_LT(spectral_norm_diff(circuit_unitary(ab).matrix(), expect), 1e-9);
    }
}

TEST(circuit_unitary, columns_match_simulation) {
    Rng rng(13);
    for (int n = 1; n <= 4; ++n) {
        Circuit c = random_circuit(n, 20, rng, true);
        UnitaryMatrix u = circuit_unitary(c);
        EXPECT_LT(u.matrix().unitarity_deviation(), 1e-9);
        for (uint64_t j = 0; j < (uint64_t{1} << n); ++j) {
            StateVector col = simulate(c, StateVector::basis(n, j));
            for (uint64_t r = 0; r < col.size(); ++r) {
                EXPECT_LT(std::abs(col[r] - u(r, j)), 1e-9);
            }
        }
    }
}

TEST(inverse, undoes_circuit) {
    Rng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        Circuit c = random_circuit(4, 30, rng, true);
        Circuit round = c;
        round.append(inverse(c));
        EXPECT_LT(Matrix::max_abs_diff(circuit_unitary(round).matrix(), Matrix::identity(16)), 1e-9);
    }
}

TEST(parse_circuit, example) {
    Circuit c = parse_circuit("qubits 2\nh 0\ncx 0 1\n");
    Circuit expect(2);
    expect.h(0).cx(0, 1);
    EXPECT_EQ(c, expect);
}

TEST(parse_circuit, unknown_gate_line) {
    EXPECT_EQ(parse_error_line("qubits 1\nfoo 0\n"), 2);
}

TEST(parse_circuit, comments_and_blanks) {
    Circuit c = parse_circuit("# header\n\nqubits 3  # three\n\n  h 2 # hadamard\noracle f 0 1 2\nphase(0.5) 1\n");
    ASSERT_EQ(c.ops.size(), 3u);
    EXPECT_EQ(c.ops[1].kind(), "oracle");
    EXPECT_EQ(std::get<NamedGate>(c.ops[2].op).angle, 0.5);
}

TEST(parse_circuit, angle_spacing) {
    Circuit a = parse_circuit("qubits 2\ncphase ( 1.5 ) 0 1\n");
    Circuit b = parse_circuit("qubits 2\ncphase(1.5) 0 1\n");
    EXPECT_EQ(a, b);
}

TEST(parse_circuit, positioned_errors) {
    EXPECT_EQ(parse_error_line(""), 1);
    EXPECT_EQ(parse_error_line("qubit 2\n"), 1);
    EXPECT_EQ(parse_error_line("qubits 0\n"), 1);
    EXPECT_EQ(parse_error_line("qubits 2\nh 0\ncx 0 2\n"), 3);
    EXPECT_EQ(parse_error_line("qubits 2\n\n\ncx 0 0\n"), 4);
    EXPECT_EQ(parse_error_line("qubits 2\nphase 0\n"), 2);
    EXPECT_EQ(parse_error_line("qubits 2\nh(1) 0\n"), 2);
    EXPECT_EQ(parse_error_line("qubits 2\nphase(nan) 0\n"), 2);
    EXPECT_EQ(parse_error_line("qubits 2\nh 0 1\n"), 2);
    EXPECT_EQ(parse_error_line("qubits 2\nmcx 0\n"), 2);
    EXPECT_EQ(parse_error_line("qubits 2\noracle f 0\n"), 2);
    EXPECT_EQ(parse_error_line("qubits 1\nmcu(1 0 0 0 0 0 2 0) 0\n"), 2);
    EXPECT_EQ(parse_error_line("qubits 1\nh x\n"), 2);
}

TEST(serialize_circuit, examples) {
    EXPECT_EQ(serialize_circuit(Circuit(1)), "qubits 1\n");
    Circuit h(1);
    h.h(0);
    EXPECT_EQ(serialize_circuit(h), "qubits 1\nh 0\n");
}

TEST(serialize_circuit, round_trip_random) {
    Rng rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform_int(0, 5));
        Circuit c = random_circuit(n, 25, rng, true);
        if (n >= 2 && rng.uniform() < 0.5) {
            c.oracle("g", {0, n - 1});
        }
        std::string text = serialize_circuit(c);
        Circuit back = parse_circuit(text);
        EXPECT_EQ(back, c);
        EXPECT_EQ(serialize_circuit(back), text);
    }
}

TEST(serialize_circuit, round_trip_corpus) {
    const std::vector<std::string> corpus = {
        "qubits 2\nh 0\ncx 0 1\n",
        "qubits 3\nx 2\nh 0\nh 1\nh 2\noracle f 0 1 2\nh 0\nh 1\n",
        "qubits 4\nmcx 0 1 2 3\nccx 3 2 1\nswap 0 3\ni 1\ny 2\nz 0\ns 1\nt 3\n",
        "qubits 2\nphase(-3.14159) 0\ncphase(0.125) 1 0\n",
        "qubits 2\nmcu(0 0 1 0 1 0 0 0) 0 1\n",
    };
    for (const auto &t : corpus) {
        Circuit c = parse_circuit(t);
        EXPECT_EQ(parse_circuit(serialize_circuit(c)), c) << t;
    }
}

TEST(parse_circuit, fuzz_never_crashes) {
    Rng rng(16);
    const std::string alphabet = "qubits 0123456789 hxyzstcpaswmuorcle()#\n\t.-+e,";
    int parsed = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text;
        size_t len = rng.uniform_int(0, 80);
        bool bytes = trial % 2 == 0;
        if (trial % 3 == 0) {
            text = "qubits 3\n";
        }
        for (size_t k = 0; k < len; ++k) {
            text.push_back(bytes ? static_cast<char>(rng.uniform_int(0, 255))
                                 : alphabet[rng.uniform_int(0, alphabet.size() - 1)]);
        }
        try {
            Circuit c = parse_circuit(text);
            validate(c);
            ++parsed;
        } catch (const ParseError &e) {
            EXPECT_GE(e.line(), 1);
        }
    }
    EXPECT_GE(parsed, 0);
}

TEST(gate_counts, tally_by_kind) {
    Circuit c(3);
    c.h(0).h(1).cx(0, 1).oracle("f", {0, 1, 2});
    c.unitary(standard_gate_matrix("x"), {0, 2}, 1);
    auto counts = gate_counts(c);
    EXPECT_EQ(counts["h"], 2);
    EXPECT_EQ(counts["cx"], 1);
    EXPECT_EQ(counts["oracle"], 1);
    EXPECT_EQ(counts["mcu"], 1);
}
