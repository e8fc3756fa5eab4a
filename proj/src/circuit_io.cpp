#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>

#include "qtk/circuit.hpp"
#include "qtk/errors.hpp"
#include "text_util.hpp"

namespace qtk {

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
            return false;
        }
    }
    return true;
}

struct GateLine {
    std::string_view name;
    std::optional<std::vector<std::string_view>> params;
    std::vector<std::string_view> operands;
};

// "<name> [ '(' params ')' ] operands..."
GateLine split_gate_line(const text::Line &line) {
    std::string_view s = line.content;
    size_t end = 0;
    while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_')) {
        ++end;
    }
    if (end == 0) {
        throw ParseError(line.number, "expected a gate name");
    }
    GateLine out;
    out.name = s.substr(0, end);
    std::string_view rest = s.substr(end);
    size_t open = rest.find_first_not_of(" \t\r\f\v");
    if (open != std::string_view::npos && rest[open] == '(') {
        size_t close = rest.find(')', open);
        if (close == std::string_view::npos) {
            throw ParseError(line.number, "unterminated '('");
        }
        // Parameters may be separated by whitespace or commas.
        std::vector<std::string_view> params;
        std::string_view inner_view = rest.substr(open + 1, close - open - 1);
        size_t pos = 0;
        while (pos < inner_view.size()) {
            size_t start = inner_view.find_first_not_of(" \t\r\f\v,", pos);
            if (start == std::string_view::npos) {
                break;
            }
            size_t stop = inner_view.find_first_of(" \t\r\f\v,", start);
            if (stop == std::string_view::npos) {
                stop = inner_view.size();
            }
            params.push_back(inner_view.substr(start, stop - start));
            pos = stop;
        }
        out.params = std::move(params);
        rest = rest.substr(close + 1);
        if (!rest.empty() && !std::isspace(static_cast<unsigned char>(rest[0]))) {
            throw ParseError(line.number, "expected whitespace after ')'");
        }
    } else if (!rest.empty() && !std::isspace(static_cast<unsigned char>(rest[0]))) {
        throw ParseError(line.number, "unexpected character after gate name");
    }
    out.operands = text::split_ws(rest);
    return out;
}

std::vector<int> parse_targets(const text::Line &line, std::span<const std::string_view> tokens, int n_qubits) {
    std::vector<int> targets;
    for (auto tok : tokens) {
        auto v = text::parse_int(tok);
        if (!v) {
            throw ParseError(line.number, "target '" + std::string(tok) + "' is not an integer");
        }
        if (*v < 0 || *v >= n_qubits) {
            throw ParseError(line.number, "target " + std::string(tok) + " out of range for " +
                                              std::to_string(n_qubits) + " qubits");
        }
        targets.push_back(static_cast<int>(*v));
    }
    return targets;
}

UnitaryMatrix parse_matrix(const text::Line &line, const std::vector<std::string_view> &params) {
    // Entries are (re, im) pairs, row-major.
    size_t pairs = params.size() / 2;
    size_t dim = static_cast<size_t>(std::sqrt(static_cast<double>(pairs)) + 0.5);
    if (params.size() % 2 != 0 || dim * dim != pairs || dim < 2 || !std::has_single_bit(dim) || dim > 1024) {
        throw ParseError(line.number, "matrix needs 2*d*d numbers with d a power of two, got " +
                                          std::to_string(params.size()));
    }
    Matrix m(dim);
    for (size_t k = 0; k < pairs; ++k) {
        auto re = text::parse_double(params[2 * k]);
        auto im = text::parse_double(params[2 * k + 1]);
        if (!re || !im) {
            throw ParseError(line.number, "matrix entry " + std::to_string(k) + " is not a finite number");
        }
        m(k / dim, k % dim) = Amp(*re, *im);
    }
    try {
        return UnitaryMatrix(std::move(m), UnitaryMatrix::Verify::yes, kPreconditionTol);
    } catch (const Error &e) {
        throw ParseError(line.number, e.what());
    }
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    auto lines = text::significant_lines(text);
    if (lines.empty()) {
        throw ParseError(1, "missing 'qubits N' header");
    }
    auto head = text::split_ws(lines[0].content);
    if (head.size() != 2 || head[0] != "qubits") {
        throw ParseError(lines[0].number, "expected 'qubits N'");
    }
    auto n = text::parse_int(head[1]);
    if (!n || *n < 1 || *n > kMaxQubits) {
        throw ParseError(lines[0].number, "qubit count must be an integer in [1, " + std::to_string(kMaxQubits) + "]");
    }
    Circuit circuit(static_cast<int>(*n));

    for (size_t k = 1; k < lines.size(); ++k) {
        const text::Line &line = lines[k];
        GateLine g = split_gate_line(line);

        if (g.name == "oracle") {
            if (g.params) {
                throw ParseError(line.number, "oracle takes no parameters");
            }
            if (g.operands.size() < 3) {
                throw ParseError(line.number, "expected 'oracle <name> <x-targets...> <ancilla>'");
            }
            if (!is_identifier(g.operands[0])) {
                throw ParseError(line.number, "invalid oracle name '" + std::string(g.operands[0]) + "'");
            }
            auto targets = parse_targets(line, std::span(g.operands).subspan(1), circuit.n_qubits);
            circuit.oracle(std::string(g.operands[0]), std::move(targets));
        } else if (g.name == "mcu" || g.name == "unitary") {
            if (!g.params) {
                throw ParseError(line.number, std::string(g.name) + " requires a parenthesized matrix");
            }
            UnitaryMatrix u = parse_matrix(line, *g.params);
            auto targets = parse_targets(line, g.operands, circuit.n_qubits);
            int controls = 0;
            if (g.name == "mcu") {
                if (u.dim() != 2) {
                    throw ParseError(line.number, "mcu takes a 2x2 matrix");
                }
                if (targets.empty()) {
                    throw ParseError(line.number, "mcu needs a target");
                }
                controls = static_cast<int>(targets.size()) - 1;
            }
            circuit.unitary(std::move(u), std::move(targets), controls);
        } else {
            auto name = gate_name_from_string(g.name);
            if (!name) {
                throw ParseError(line.number, "unknown gate '" + std::string(g.name) + "'");
            }
            std::optional<double> angle;
            if (is_parametric(*name)) {
                if (!g.params || g.params->size() != 1) {
                    throw ParseError(line.number, std::string(g.name) + " requires one angle '(theta)'");
                }
                angle = text::parse_double((*g.params)[0]);
                if (!angle) {
                    throw ParseError(line.number, "angle '" + std::string((*g.params)[0]) + "' is not a finite number");
                }
            } else if (g.params) {
                throw ParseError(line.number, std::string(g.name) + " takes no angle");
            }
            auto targets = parse_targets(line, g.operands, circuit.n_qubits);
            circuit.gate(*name, std::move(targets), angle);
        }

        try {
            Circuit probe(circuit.n_qubits);
            probe.ops.push_back(circuit.ops.back());
            validate(probe);
        } catch (const Error &e) {
            std::string msg = e.what();
            if (auto colon = msg.find(": "); colon != std::string::npos && msg.rfind("gate 0", 0) == 0) {
                msg = msg.substr(colon + 2);
            }
            throw ParseError(line.number, msg);
        }
    }
    return circuit;
}

std::string serialize_circuit(const Circuit &circuit) {
    std::ostringstream out;
    if (!circuit.name.empty()) {
        std::string name = circuit.name;
        std::replace_if(
            name.begin(), name.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
        out << "# " << name << "\n";
    }
    out << "qubits " << circuit.n_qubits << "\n";
    for (const GateApp &g : circuit.ops) {
        out << g.kind();
        if (const auto *n = std::get_if<NamedGate>(&g.op)) {
            if (n->angle) {
                out << "(" << text::format_double(*n->angle) << ")";
            }
        } else if (const auto *o = std::get_if<OracleCall>(&g.op)) {
            out << " " << o->name;
        } else {
            const auto &m = std::get<RawUnitary>(g.op).u.matrix();
            out << "(";
            bool first = true;
            for (const Amp &v : m.data()) {
                out << (first ? "" : " ") << text::format_double(v.real()) << " " << text::format_double(v.imag());
                first = false;
            }
            out << ")";
        }
        for (int q : g.targets) {
            out << " " << q;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace qtk
