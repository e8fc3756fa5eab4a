#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qtk/algorithms.hpp"
#include "qtk/circuit.hpp"
#include "qtk/compiler.hpp"
#include "qtk/errors.hpp"
#include "qtk/oracle.hpp"
#include "qtk/qtm.hpp"
#include "qtk/rng.hpp"

namespace qtk::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Input error already carrying its file position.
class InputError : public Error {
   public:
    using Error::Error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Runs a parser and rewrites its ParseError as "path:line: message".
template <typename Parse>
auto parse_file(const std::string &path, Parse &&parse) {
    std::string text = read_file(path);
    try {
        return parse(text);
    } catch (const ParseError &e) {
        throw InputError(path + ":" + std::to_string(e.line()) + ": " + e.detail());
    }
}

Json amplitude_list(const std::vector<Amp> &amps) {
    Json list = Json::array();
    for (const auto &a : amps) {
        list.push_back({a.real(), a.imag()});
    }
    return list;
}

Json violations_json(const WellFormedness &wf) {
    Json list = Json::array();
    for (const auto &v : wf.violations) {
        list.push_back({{"config_a", v.config_a},
                        {"config_b", v.config_b},
                        {"gram", {v.gram.real(), v.gram.imag()}},
                        {"description", v.description}});
    }
    return list;
}

struct Options {
    uint64_t seed = 0;
    bool json_only = false;
    std::vector<std::string> command;
};

class Commands {
   public:
    Commands(Options opts, std::ostream &out, std::ostream &err) : opts_(std::move(opts)), out_(out), err_(err) {
    }

    void run(const std::string &circuit_path, const std::vector<std::string> &bindings, int64_t shots) {
        auto start = std::chrono::steady_clock::now();
        if (shots < 0) {
            throw ParameterError("--shots must be non-negative");
        }
        Circuit circuit = parse_file(circuit_path, [](const std::string &t) { return parse_circuit(t); });
        OracleTable oracles;
        for (const auto &b : bindings) {
            auto eq = b.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == b.size()) {
                throw ParameterError("--oracle expects <name>=<path>, got '" + b + "'");
            }
            std::string name = b.substr(0, eq);
            std::string path = b.substr(eq + 1);
            oracles.insert_or_assign(name,
                                     parse_file(path, [&](const std::string &t) { return parse_oracle(t, name); }));
        }

        QueryCounter counter;
        StateVector final_state = simulate(circuit, StateVector(circuit.n_qubits), oracles, counter);
        double nrm = final_state.norm();
        if (std::abs(nrm - 1.0) > kPreconditionTol) {
            throw StateError("final state is not normalized (norm " + std::to_string(nrm) + ")");
        }
        std::map<std::string, int64_t> counts;
        Rng rng(opts_.seed);
        for (int64_t s = 0; s < shots; ++s) {
            ++counts[final_state.bitstring(sample_index(final_state, rng.uniform()))];
        }

        Json report = header();
        report["circuit"] = circuit_path;
        report["qubits"] = circuit.n_qubits;
        report["shots"] = shots;
        report["counts"] = Json::object();
        for (const auto &[k, v] : counts) {
            report["counts"][k] = v;
        }
        report["queries"] = {{"quantum", counter.quantum_queries}, {"classical", counter.classical_queries}};
        finish(report, start);
        summary("run: " + std::to_string(shots) + " shots over " + std::to_string(counts.size()) + " outcomes");
    }

    void dj(const std::string &oracle_path) {
        auto start = std::chrono::steady_clock::now();
        Oracle oracle = parse_file(oracle_path, [](const std::string &t) { return parse_oracle(t, "f"); });
        DjVerdict v = deutsch_jozsa(oracle, opts_.seed);
        Json report = header();
        report["oracle"] = oracle_path;
        report["inputs"] = oracle.n_inputs();
        report["verdict"] = to_string(v.verdict);
        report["quantum_queries"] = v.quantum_queries;
        report["zero_probability"] = v.zero_probability;
        finish(report, start);
        summary(to_string(v.verdict));
    }

    void shor(uint64_t n, int max_attempts) {
        auto start = std::chrono::steady_clock::now();
        auto result = shor_factor(n, opts_.seed, max_attempts);
        Json report = header();
        report["n"] = n;
        report["success"] = result.has_value();
        if (result) {
            report["factor"] = result->factor;
            report["cofactor"] = n / result->factor;
            report["a"] = result->a;
            report["order"] = result->order;
            report["attempts"] = result->attempts;
        } else {
            report["factor"] = nullptr;
            report["attempts"] = max_attempts;
        }
        finish(report, start);
        summary(result ? std::to_string(n) + " = " + std::to_string(result->factor) + " x " +
                             std::to_string(n / result->factor)
                       : "no factor found in " + std::to_string(max_attempts) + " attempts");
    }

    void qtm_check(const std::string &path, int tape_cells, double tol) {
        auto start = std::chrono::steady_clock::now();
        QtmDef qtm = parse_file(path, [](const std::string &t) { return parse_qtm(t); });
        WellFormedness wf = check_well_formed(qtm, tape_cells, tol);
        ConfigSpace space(static_cast<int>(qtm.states().size()), static_cast<int>(qtm.alphabet().size()), tape_cells);
        Json report = header();
        report["machine"] = path;
        report["tape_cells"] = tape_cells;
        report["configurations"] = space.size();
        report["well_formed"] = wf.well_formed;
        report["max_deviation"] = wf.max_deviation;
        report["violation_count"] = wf.violation_count;
        report["violations"] = violations_json(wf);
        finish(report, start);
        summary(wf.well_formed ? "well-formed" : "not well-formed (" + std::to_string(wf.violation_count) +
                                                     " violations)");
    }

    void compile(const std::string &path, int tape_cells, double tol, const std::string &output) {
        auto start = std::chrono::steady_clock::now();
        QtmDef qtm = parse_file(path, [](const std::string &t) { return parse_qtm(t); });
        Compilation comp = compile_qtm_step(qtm, tape_cells, tol);
        std::string text = serialize_circuit(comp.circuit);
        if (!output.empty()) {
            std::ofstream f(output, std::ios::binary);
            if (!f || !(f << text)) {
                throw InputError(output + ": cannot write file");
            }
        }
        const CompilationReport &r = comp.report;
        Json report = header();
        report["machine"] = path;
        report["tape_cells"] = r.tape_cells;
        report["qubits"] = r.qubits;
        report["configurations"] = r.configurations;
        report["padded_dim"] = r.padded_dim;
        report["two_level_factors"] = r.two_level_factors;
        report["gate_counts"] = Json::object();
        for (const auto &[k, v] : r.gate_counts) {
            report["gate_counts"][k] = v;
        }
        report["max_deviation"] = r.max_deviation;
        report["tolerance"] = r.tolerance;
        if (output.empty()) {
            report["circuit"] = text;
        } else {
            report["circuit_file"] = output;
        }
        finish(report, start);
        summary("compiled to " + std::to_string(r.qubits) + " qubits, " + std::to_string(comp.circuit.ops.size()) +
                " gates, deviation " + std::to_string(r.max_deviation));
    }

    void qft(int n, uint64_t basis_index) {
        auto start = std::chrono::steady_clock::now();
        Circuit c = qft_circuit(n);
        StateVector in = StateVector::basis(n, basis_index);
        StateVector result = simulate(c, in);
        Json report = header();
        report["n"] = n;
        report["basis_index"] = basis_index;
        report["amplitudes"] = amplitude_list(result.amplitudes());
        finish(report, start);
        summary("qft of |" + std::to_string(basis_index) + "> on " + std::to_string(n) + " qubits");
    }

   private:
    Json header() const {
        Json j;
        j["command"] = opts_.command;
        j["seed"] = opts_.seed;
        return j;
    }

    void finish(Json &report, std::chrono::steady_clock::time_point start) {
        auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
        report["wall_time_ms"] = elapsed.count();
        out_ << report.dump() << "\n";
    }

    void summary(const std::string &line) {
        if (!opts_.json_only) {
            err_ << line << "\n";
        }
    }

    Options opts_;
    std::ostream &out_;
    std::ostream &err_;
};

std::string one_line(std::string s) {
    for (char &c : s) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qtk: quantum circuit, oracle and quantum Turing machine toolkit", "qtk"};
    app.require_subcommand(1);

    Options opts;
    std::string path, output;
    std::vector<std::string> bindings;
    int64_t shots = 1024;
    int tape_cells = 2;
    double tol = kAlgebraTol;
    double compile_tol = 1e-8;
    uint64_t shor_n = 0;
    int max_attempts = 10;
    int qft_n = 0;
    uint64_t basis_index = 0;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--seed", opts.seed, "Random seed");
        sub->add_flag("--json", opts.json_only, "Write only JSON (no summary on stderr)");
    };

    auto *run = app.add_subcommand("run", "Simulate a circuit file and sample measurements");
    run->add_option("circuit", path, "Circuit file")->required();
    run->add_option("--shots", shots, "Number of measurement samples");
    run->add_option("--oracle", bindings, "Oracle binding <name>=<path> (repeatable)");
    common(run);

    auto *dj = app.add_subcommand("dj", "Deutsch-Jozsa on an oracle file");
    dj->add_option("oracle", path, "Oracle file")->required();
    common(dj);

    auto *shor = app.add_subcommand("shor", "Factor a small odd composite");
    shor->add_option("n", shor_n, "Number to factor")->required();
    shor->add_option("--max-attempts", max_attempts, "Attempts before giving up");
    common(shor);

    auto *check = app.add_subcommand("qtm-check", "Check well-formedness of a QTM on a tape window");
    check->add_option("machine", path, "QTM file")->required();
    check->add_option("--tape-cells", tape_cells, "Cyclic tape window size");
    check->add_option("--tol", tol, "Unitarity tolerance");
    common(check);

    auto *compile = app.add_subcommand("compile", "Compile one QTM step into a circuit");
    compile->add_option("machine", path, "QTM file")->required();
    compile->add_option("--tape-cells", tape_cells, "Cyclic tape window size");
    compile->add_option("--tol", compile_tol, "Equivalence tolerance");
    compile->add_option("-o,--output", output, "Write the circuit file here instead of into the JSON");
    common(compile);

    auto *qft = app.add_subcommand("qft", "Apply the QFT to a basis state");
    qft->add_option("n", qft_n, "Qubits")->required();
    qft->add_option("basis_index", basis_index, "Input basis state")->required();
    common(qft);

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << one_line(e.what()) << "\n";
        return 2;
    }

    opts.command.assign(args.begin() + (args.empty() ? 0 : 1), args.end());
    Commands cmd(opts, out, err);
    try {
        if (run->parsed()) {
            cmd.run(path, bindings, shots);
        } else if (dj->parsed()) {
            cmd.dj(path);
        } else if (shor->parsed()) {
            cmd.shor(shor_n, max_attempts);
        } else if (check->parsed()) {
            cmd.qtm_check(path, tape_cells, tol);
        } else if (compile->parsed()) {
            cmd.compile(path, tape_cells, compile_tol, output);
        } else if (qft->parsed()) {
            cmd.qft(qft_n, basis_index);
        }
    } catch (const Error &e) {
        err << "error: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: internal: " << one_line(e.what()) << "\n";
        return 1;
    }
    return 0;
}

}  // namespace qtk::cli
