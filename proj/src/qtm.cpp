#include "qtk/qtm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtk/errors.hpp"

namespace qtk {

QtmDef::QtmDef(std::vector<std::string> states, int initial, std::optional<int> final_state,
               std::vector<std::string> alphabet)
    : states_(std::move(states)), initial_(initial), final_(final_state), alphabet_(std::move(alphabet)) {
    if (states_.empty()) {
        throw MachineError("machine needs at least one state");
    }
    if (alphabet_.empty()) {
        throw MachineError("alphabet needs at least the blank symbol");
    }
    auto unique = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!unique(states_)) {
        throw MachineError("duplicate state name");
    }
    if (!unique(alphabet_)) {
        throw MachineError("duplicate alphabet symbol");
    }
    int n = static_cast<int>(states_.size());
    if (initial_ < 0 || initial_ >= n) {
        throw MachineError("initial state index out of range");
    }
    if (final_ && (*final_ < 0 || *final_ >= n)) {
        throw MachineError("final state index out of range");
    }
}

void QtmDef::add(int state, int symbol, Branch branch) {
    int ns = static_cast<int>(states_.size());
    int na = static_cast<int>(alphabet_.size());
    if (state < 0 || state >= ns || branch.state < 0 || branch.state >= ns) {
        throw MachineError("transition references an undeclared state");
    }
    if (symbol < 0 || symbol >= na || branch.symbol < 0 || branch.symbol >= na) {
        throw MachineError("transition references an undeclared symbol");
    }
    if (!std::isfinite(branch.amp.real()) || !std::isfinite(branch.amp.imag())) {
        throw MachineError("transition amplitude must be finite");
    }
    if (final_ && state == *final_) {
        throw MachineError("final state '" + states_[state] + "' cannot have outgoing transitions");
    }
    delta_[{state, symbol}].push_back(branch);
}

std::span<const Branch> QtmDef::branches(int state, int symbol) const {
    auto it = delta_.find({state, symbol});
    if (it == delta_.end()) {
        return {};
    }
    return it->second;
}

std::optional<int> QtmDef::state_index(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) {
        return std::nullopt;
    }
    return static_cast<int>(it - states_.begin());
}

std::optional<int> QtmDef::symbol_index(std::string_view name) const {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
    if (it == alphabet_.end()) {
        return std::nullopt;
    }
    return static_cast<int>(it - alphabet_.begin());
}

QtmDef QtmDef::scaled(Amp factor) const {
    QtmDef out = *this;
    for (auto &[key, list] : out.delta_) {
        for (auto &b : list) {
            b.amp *= factor;
        }
    }
    return out;
}

ConfigSpace::ConfigSpace(int n_states, int n_symbols, int tape_cells)
    : n_states_(n_states), n_symbols_(n_symbols), cells_(tape_cells) {
    if (tape_cells < 1) {
        throw ParameterError("tape window needs at least one cell");
    }
    if (n_states < 1 || n_symbols < 1) {
        throw ParameterError("configuration space needs states and symbols");
    }
    // Grow |alphabet|^T with an overflow-safe cap check.
    place_.assign(tape_cells, 1);
    size_t words = 1;
    for (int k = 0; k < tape_cells; ++k) {
        if (words > kMaxConfigurations / static_cast<size_t>(n_symbols)) {
            throw CapacityError("configuration space exceeds " + std::to_string(kMaxConfigurations));
        }
        words *= static_cast<size_t>(n_symbols);
    }
    for (int k = tape_cells - 1, p = 1; k >= 0; --k, p *= n_symbols) {
        place_[k] = static_cast<size_t>(p);
    }
    words_ = words;
    size_ = static_cast<size_t>(n_states) * static_cast<size_t>(tape_cells) * words;
    if (size_ > kMaxConfigurations) {
        throw CapacityError("configuration space of " + std::to_string(size_) + " exceeds " +
                            std::to_string(kMaxConfigurations));
    }
}

size_t ConfigSpace::index(const Config &c) const {
    size_t word = 0;
    for (int k = 0; k < cells_; ++k) {
        word += static_cast<size_t>(c.tape[k]) * place_[k];
    }
    return (static_cast<size_t>(c.state) * cells_ + c.head) * words_ + word;
}

ConfigSpace::Config ConfigSpace::decode(size_t index) const {
    Config c;
    size_t word = index % words_;
    size_t rest = index / words_;
    c.head = static_cast<int>(rest % cells_);
    c.state = static_cast<int>(rest / cells_);
    c.tape.resize(cells_);
    for (int k = 0; k < cells_; ++k) {
        c.tape[k] = static_cast<int>((word / place_[k]) % n_symbols_);
    }
    return c;
}

int ConfigSpace::symbol_at(size_t index, int cell) const {
    return static_cast<int>((index % words_) / place_[cell] % n_symbols_);
}

size_t ConfigSpace::with_symbol(size_t index, int cell, int symbol) const {
    int old = symbol_at(index, cell);
    return index - static_cast<size_t>(old) * place_[cell] + static_cast<size_t>(symbol) * place_[cell];
}

Matrix StepOperator::dense() const {
    Matrix m(space.size());
    for (size_t c = 0; c < columns.size(); ++c) {
        for (const auto &[row, amp] : columns[c]) {
            m(row, c) += amp;
        }
    }
    return m;
}

StepOperator step_operator(const QtmDef &qtm, int tape_cells) {
    ConfigSpace space(static_cast<int>(qtm.states().size()), static_cast<int>(qtm.alphabet().size()), tape_cells);
    StepOperator op{space, std::vector<std::vector<std::pair<size_t, Amp>>>(space.size())};
    const int cells = space.tape_cells();
    for (size_t c = 0; c < space.size(); ++c) {
        ConfigSpace::Config cfg = space.decode(c);
        auto &column = op.columns[c];
        if (qtm.final_state() && cfg.state == *qtm.final_state()) {
            // Normal form: the final state re-enters the initial state and moves right.
            ConfigSpace::Config next = cfg;
            next.state = qtm.initial();
            next.head = (cfg.head + 1) % cells;
            column.emplace_back(space.index(next), Amp{1.0});
            continue;
        }
        int read = cfg.tape[cfg.head];
        for (const Branch &b : qtm.branches(cfg.state, read)) {
            ConfigSpace::Config next = cfg;
            next.state = b.state;
            next.tape[cfg.head] = b.symbol;
            next.head = (cfg.head + (b.move == Move::right ? 1 : cells - 1)) % cells;
            size_t r = space.index(next);
            auto hit = std::find_if(column.begin(), column.end(), [r](const auto &e) { return e.first == r; });
            if (hit == column.end()) {
                column.emplace_back(r, b.amp);
            } else {
                hit->second += b.amp;
            }
        }
        std::sort(column.begin(), column.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    }
    return op;
}

std::string describe_config(const QtmDef &qtm, const ConfigSpace &space, size_t index) {
    ConfigSpace::Config c = space.decode(index);
    std::ostringstream out;
    out << "(" << qtm.states()[c.state] << ", head " << c.head << ", [";
    for (int k = 0; k < space.tape_cells(); ++k) {
        out << (k ? " " : "") << qtm.alphabet()[c.tape[k]];
    }
    out << "])";
    return out.str();
}

WellFormedness check_well_formed(const QtmDef &qtm, int tape_cells, double tol) {
    StepOperator op = step_operator(qtm, tape_cells);
    const size_t n = op.space.size();

    // Transpose to rows so each Gram entry is a sum over shared rows.
    std::vector<std::vector<std::pair<size_t, Amp>>> rows(n);
    for (size_t c = 0; c < n; ++c) {
        for (const auto &[r, v] : op.columns[c]) {
            rows[r].emplace_back(c, v);
        }
    }
    std::map<std::pair<size_t, size_t>, Amp> gram;
    for (const auto &row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            for (size_t j = i; j < row.size(); ++j) {
                auto [a, va] = row[i];
                auto [b, vb] = row[j];
                if (a <= b) {
                    gram[{a, b}] += std::conj(va) * vb;
                } else {
                    gram[{b, a}] += std::conj(vb) * va;
                }
            }
        }
    }
    for (size_t a = 0; a < n; ++a) {
        gram.try_emplace({a, a}, Amp{});
    }

    WellFormedness result;
    for (const auto &[key, g] : gram) {
        auto [a, b] = key;
        double dev = std::abs(a == b ? g - 1.0 : g);
        result.max_deviation = std::max(result.max_deviation, dev);
        if (!(dev < tol)) {
            ++result.violation_count;
            if (result.violations.size() < kMaxReportedViolations) {
                std::ostringstream msg;
                if (a == b) {
                    msg << "column " << describe_config(qtm, op.space, a) << " has squared norm " << g.real();
                } else {
                    msg << "columns " << describe_config(qtm, op.space, a) << " and "
                        << describe_config(qtm, op.space, b) << " overlap by " << std::abs(g);
                }
                result.violations.push_back({a, b, g, msg.str()});
            }
        }
    }
    result.well_formed = result.violation_count == 0;
    return result;
}

double QtmState::norm() const {
    double total = 0;
    for (const auto &a : amps) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

double QtmState::state_mass(int state) const {
    double total = 0;
    for (size_t c = 0; c < amps.size(); ++c) {
        if (space.decode(c).state == state) {
            total += std::norm(amps[c]);
        }
    }
    return total;
}

QtmState initial_state(const QtmDef &qtm, std::span<const int> input, int tape_cells) {
    ConfigSpace space(static_cast<int>(qtm.states().size()), static_cast<int>(qtm.alphabet().size()), tape_cells);
    if (static_cast<int>(input.size()) > tape_cells) {
        throw ParameterError("input of length " + std::to_string(input.size()) + " does not fit " +
                             std::to_string(tape_cells) + " tape cells");
    }
    ConfigSpace::Config c{qtm.initial(), 0, std::vector<int>(tape_cells, 0)};
    for (size_t k = 0; k < input.size(); ++k) {
        if (input[k] < 0 || input[k] >= static_cast<int>(qtm.alphabet().size())) {
            throw ParameterError("input symbol index " + std::to_string(input[k]) + " not in alphabet");
        }
        c.tape[k] = input[k];
    }
    QtmState s{space, std::vector<Amp>(space.size())};
    s.amps[space.index(c)] = 1.0;
    return s;
}

QtmState evolve(const StepOperator &op, QtmState state, int steps) {
    if (!(state.space == op.space)) {
        throw DimensionError("state and step operator live on different configuration spaces");
    }
    if (steps < 0) {
        throw ParameterError("step count must be non-negative");
    }
    std::vector<Amp> next(state.amps.size());
    for (int s = 0; s < steps; ++s) {
        std::fill(next.begin(), next.end(), Amp{});
        for (size_t c = 0; c < state.amps.size(); ++c) {
            const Amp a = state.amps[c];
            if (a == Amp{}) {
                continue;
            }
            for (const auto &[r, v] : op.columns[c]) {
                next[r] += v * a;
            }
        }
        state.amps.swap(next);
    }
    return state;
}

QtmState run_qtm(const QtmDef &qtm, std::span<const int> input, int steps, int tape_cells) {
    WellFormedness wf = check_well_formed(qtm, tape_cells);
    if (!wf.well_formed) {
        throw MachineError("machine is not well-formed on " + std::to_string(tape_cells) + " cells (" +
                           std::to_string(wf.violation_count) + " violations)");
    }
    return evolve(step_operator(qtm, tape_cells), initial_state(qtm, input, tape_cells), steps);
}

QtmState run_qtm(const QtmDef &qtm, std::string_view input, int steps, int tape_cells) {
    std::vector<int> symbols;
    for (char ch : input) {
        auto idx = qtm.symbol_index(std::string_view(&ch, 1));
        if (!idx) {
            throw ParameterError(std::string("input symbol '") + ch + "' not in alphabet");
        }
        symbols.push_back(*idx);
    }
    return run_qtm(qtm, symbols, steps, tape_cells);
}

QtmState oracle_step(const QtmDef &qtm, QtmState state, const Oracle &oracle, std::span<const int> x_cells,
                     int b_cell, QueryCounter &counter) {
    const ConfigSpace &space = state.space;
    auto zero = qtm.symbol_index("0");
    auto one = qtm.symbol_index("1");
    if (!zero || !one) {
        throw MachineError("oracle calls need symbols '0' and '1' in the alphabet");
    }
    if (static_cast<int>(x_cells.size()) != oracle.n_inputs()) {
        throw DimensionError("oracle takes " + std::to_string(oracle.n_inputs()) + " inputs, given " +
                             std::to_string(x_cells.size()) + " cells");
    }
    std::vector<int> all(x_cells.begin(), x_cells.end());
    all.push_back(b_cell);
    for (int cell : all) {
        if (cell < 0 || cell >= space.tape_cells()) {
            throw IndexError("oracle cell " + std::to_string(cell) + " outside the tape window");
        }
    }
    std::vector<int> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw IndexError("oracle cells must be distinct");
    }

    std::vector<Amp> out(state.amps.size());
    for (size_t c = 0; c < state.amps.size(); ++c) {
        bool binary = true;
        uint64_t x = 0;
        for (int cell : x_cells) {
            int s = space.symbol_at(c, cell);
            binary = binary && (s == *zero || s == *one);
            x = (x << 1) | (s == *one ? 1 : 0);
        }
        int b = space.symbol_at(c, b_cell);
        binary = binary && (b == *zero || b == *one);
        if (!binary) {
            if (state.amps[c] != Amp{}) {
                throw MachineError("oracle query on non-binary tape content in " + describe_config(qtm, space, c));
            }
            out[c] += state.amps[c];
            continue;
        }
        size_t target = c;
        if (oracle(x)) {
            target = space.with_symbol(c, b_cell, b == *zero ? *one : *zero);
        }
        out[target] += state.amps[c];
    }
    state.amps = std::move(out);
    ++counter.quantum_queries;
    return state;
}

}  // namespace qtk
