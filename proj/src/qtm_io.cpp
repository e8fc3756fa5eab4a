#include <sstream>

#include "qtk/errors.hpp"
#include "qtk/qtm.hpp"
#include "text_util.hpp"

namespace qtk {

namespace {

struct Clause {
    int line;
    std::vector<std::string_view> tokens;
};

std::vector<Clause> clauses(std::string_view text) {
    std::vector<Clause> out;
    for (const auto &line : text::significant_lines(text)) {
        std::string_view rest = line.content;
        while (true) {
            size_t semi = rest.find(';');
            auto tokens = text::split_ws(rest.substr(0, semi));
            if (!tokens.empty()) {
                out.push_back({line.number, std::move(tokens)});
            }
            if (semi == std::string_view::npos) {
                break;
            }
            rest = rest.substr(semi + 1);
        }
    }
    return out;
}

std::vector<std::string> names(const Clause &c) {
    std::vector<std::string> out;
    for (size_t k = 1; k < c.tokens.size(); ++k) {
        out.emplace_back(c.tokens[k]);
    }
    return out;
}

}  // namespace

QtmDef parse_qtm(std::string_view text) {
    std::vector<std::string> states, alphabet;
    std::optional<std::string> initial, final_state;
    int header_line = 1, initial_line = 1, final_line = 1;
    std::vector<Clause> transitions;

    for (const Clause &c : clauses(text)) {
        std::string_view key = c.tokens[0];
        if (key == "states" || key == "alphabet") {
            if (!transitions.empty()) {
                throw ParseError(c.line, std::string(key) + " must precede transitions");
            }
            auto &target = key == "states" ? states : alphabet;
            if (!target.empty()) {
                throw ParseError(c.line, "duplicate '" + std::string(key) + "' clause");
            }
            if (c.tokens.size() < 2) {
                throw ParseError(c.line, "'" + std::string(key) + "' needs at least one name");
            }
            target = names(c);
            header_line = c.line;
        } else if (key == "initial" || key == "final") {
            if (c.tokens.size() != 2) {
                throw ParseError(c.line, "expected '" + std::string(key) + " <state>'");
            }
            auto &target = key == "initial" ? initial : final_state;
            if (target) {
                throw ParseError(c.line, "duplicate '" + std::string(key) + "' clause");
            }
            target = std::string(c.tokens[1]);
            (key == "initial" ? initial_line : final_line) = c.line;
        } else {
            transitions.push_back(c);
        }
    }

    if (states.empty()) {
        throw ParseError(header_line, "missing 'states' clause");
    }
    if (alphabet.empty()) {
        throw ParseError(header_line, "missing 'alphabet' clause");
    }
    if (!initial) {
        throw ParseError(header_line, "missing 'initial' clause");
    }
    auto find = [](const std::vector<std::string> &v, std::string_view s) -> std::optional<int> {
        for (size_t k = 0; k < v.size(); ++k) {
            if (v[k] == s) {
                return static_cast<int>(k);
            }
        }
        return std::nullopt;
    };
    auto init_idx = find(states, *initial);
    if (!init_idx) {
        throw ParseError(initial_line, "initial state '" + *initial + "' is not declared");
    }
    std::optional<int> final_idx;
    if (final_state) {
        final_idx = find(states, *final_state);
        if (!final_idx) {
            throw ParseError(final_line, "final state '" + *final_state + "' is not declared");
        }
    }

    std::optional<QtmDef> qtm;
    try {
        qtm.emplace(states, *init_idx, final_idx, alphabet);
    } catch (const MachineError &e) {
        throw ParseError(header_line, e.what());
    }

    for (const Clause &c : transitions) {
        // q sym -> q' sym' L|R re im
        const auto &t = c.tokens;
        if (t.size() != 8 || t[2] != "->") {
            throw ParseError(c.line, "expected '<state> <symbol> -> <state> <symbol> L|R <re> <im>'");
        }
        auto from = find(states, t[0]);
        auto to = find(states, t[3]);
        auto read = find(alphabet, t[1]);
        auto write = find(alphabet, t[4]);
        if (!from || !to) {
            throw ParseError(c.line, "undeclared state '" + std::string(!from ? t[0] : t[3]) + "'");
        }
        if (!read || !write) {
            throw ParseError(c.line, "undeclared symbol '" + std::string(!read ? t[1] : t[4]) + "'");
        }
        if (t[5] != "L" && t[5] != "R") {
            throw ParseError(c.line, "direction must be L or R");
        }
        auto re = text::parse_double(t[6]);
        auto im = text::parse_double(t[7]);
        if (!re || !im) {
            throw ParseError(c.line, "amplitude must be two finite numbers");
        }
        try {
            qtm->add(*from, *read, Branch{*to, *write, t[5] == "L" ? Move::left : Move::right, Amp(*re, *im)});
        } catch (const MachineError &e) {
            throw ParseError(c.line, e.what());
        }
    }
    return std::move(*qtm);
}

std::string serialize_qtm(const QtmDef &qtm) {
    std::ostringstream out;
    out << "states";
    for (const auto &s : qtm.states()) {
        out << " " << s;
    }
    out << " ; initial " << qtm.states()[qtm.initial()];
    if (qtm.final_state()) {
        out << " ; final " << qtm.states()[*qtm.final_state()];
    }
    out << "\nalphabet";
    for (const auto &a : qtm.alphabet()) {
        out << " " << a;
    }
    out << "\n";
    const int ns = static_cast<int>(qtm.states().size());
    const int na = static_cast<int>(qtm.alphabet().size());
    for (int q = 0; q < ns; ++q) {
        for (int s = 0; s < na; ++s) {
            for (const Branch &b : qtm.branches(q, s)) {
                out << qtm.states()[q] << " " << qtm.alphabet()[s] << " -> " << qtm.states()[b.state] << " "
                    << qtm.alphabet()[b.symbol] << " " << (b.move == Move::left ? "L" : "R") << " "
                    << text::format_double(b.amp.real()) << " " << text::format_double(b.amp.imag()) << "\n";
            }
        }
    }
    return out.str();
}

}  // namespace qtk
