// Copyright 2026 The tqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tqec/analysis.h"
#include "tqec/lattice.h"
#include "tqec/montecarlo.h"

namespace {

using nlohmann::json;

enum ExitCode { kOk = 0, kFailure = 1, kBadInput = 2, kStructural = 3 };

struct CodeArgs {
    std::string code = "surface";
    int d = 3;
    int rounds = 0;
    std::string basis = "z";
    std::string models = "depolarizing";
    std::string circuit_file;

    void add(CLI::App *app) {
        app->add_option("--code", code, "surface or cluster")->check(CLI::IsMember({"surface", "cluster"}));
        app->add_option("--d", d, "code distance")->check(CLI::PositiveNumber);
        app->add_option("--rounds", rounds, "rounds (default 2 d)");
        app->add_option("--basis", basis, "memory basis")->check(CLI::IsMember({"z", "x"}));
        app->add_option("--models", models, "depolarizing, asymmetric or a model directory");
        app->add_option("--circuit", circuit_file, "circuit file instead of a built-in code");
    }

    tqec::Basis memory_basis() const { return basis == "x" ? tqec::Basis::X : tqec::Basis::Z; }
    int rounds_or_default() const { return rounds > 0 ? rounds : 2 * d; }

    tqec::Circuit circuit() const {
        if (circuit_file.empty()) return tqec::build_code(code, d, rounds_or_default(), memory_basis());
        std::ifstream in(circuit_file);
        if (!in) throw std::invalid_argument("cannot open circuit file " + circuit_file);
        std::stringstream text;
        text << in.rdbuf();
        return tqec::parse_circuit(text.str());
    }
};

// Opens `path` for writing, or returns std::cout for "" and "-".
class Output {
   public:
    explicit Output(const std::string &path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot write " + path);
        }
    }
    std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

   private:
    std::ofstream file_;
};

std::vector<double> split_list(const std::vector<std::string> &items) {
    std::vector<double> out;
    for (const auto &item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part.empty()) continue;
            std::size_t used = 0;
            const double v = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument("bad number '" + part + "'");
            out.push_back(v);
        }
    }
    if (out.empty()) throw std::invalid_argument("no values of p given");
    return out;
}

int run_analyze(const CodeArgs &args, double p, const std::string &out_path, const std::string &format,
                bool provenance) {
    const tqec::Circuit circuit = args.circuit();
    const auto report = tqec::validate(circuit);
    if (!report.ok()) throw tqec::StructuralError("invalid circuit: " + report.summary());
    const tqec::ModelLibrary models = tqec::ModelLibrary::named(args.models);
    const tqec::AnalysisResult result = tqec::analyze(circuit, models, p);

    std::string what = format;
    if (what.empty()) what = out_path.find("lattice") != std::string::npos ? "lattice" : "nest";
    if (!out_path.empty()) {
        Output out(out_path);
        if (what == "lattice") {
            tqec::export_lattice(tqec::nest_to_lattice(result.nest), out.stream());
        } else {
            tqec::export_nest(result.nest, out.stream(), {provenance});
        }
    }
    const auto &s = result.stats;
    json summary{{"qubits", circuit.num_qubits()},
                 {"sets", circuit.sets.size()},
                 {"labels", s.labels},
                 {"events", s.events},
                 {"balls", result.nest.balls().size()},
                 {"sticks", result.nest.num_sticks()},
                 {"pair_sticks", s.pair_sticks},
                 {"boundary_sticks", s.boundary_sticks},
                 {"max_pair_gap", s.max_pair_gap},
                 {"undetectable_logicals", s.undetectable_logicals}};
    std::cout << summary.dump(1) << "\n";
    return kOk;
}

int run_simulate(tqec::RunConfig config, const std::vector<std::string> &p_items, const std::string &out_path) {
    const std::vector<double> ps = split_list(p_items);
    Output out(out_path);
    tqec::write_csv_header(out.stream());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        config.p = ps[k];
        config.stream = static_cast<int>(k);
        const tqec::RunStats stats = tqec::run(config);
        tqec::write_csv_row(out.stream(), stats);
        out.stream().flush();
    }
    return kOk;
}

json fault_json(const tqec::ForcedFault &f) { return {{"step", f.step}, {"gate", f.gate}, {"entry", f.entry}}; }

int run_inject(const tqec::InjectConfig &config) {
    const tqec::InjectReport r = tqec::inject_exhaustive(config);
    json examples = json::array();
    for (const auto &e : r.examples) {
        json faults = json::array();
        for (const auto &f : e.faults) faults.push_back(fault_json(f));
        examples.push_back({{"faults", faults}, {"events", e.events}});
    }
    json doc{{"code", config.code},
             {"d", config.d},
             {"k", config.k},
             {"lattice", tqec::lattice_mode_name(config.lattice)},
             {"fault_entries", r.fault_entries},
             {"unique_signatures", r.unique_signatures},
             {"combinations", r.combinations},
             {"failing_signatures", r.failing_signatures},
             {"failing_combinations", r.failing_combinations},
             {"examples", examples},
             {"seconds", r.seconds}};
    std::cout << doc.dump(1) << "\n";
    return kOk;
}

int run_recipe(const CodeArgs &args, double p, bool dump, const std::string &out_path) {
    const tqec::Circuit circuit = args.circuit();
    const tqec::ModelLibrary models = tqec::ModelLibrary::named(args.models);
    const tqec::Recipe recipe = tqec::bootup(circuit, models, p);
    if (dump) {
        Output out(out_path);
        tqec::export_recipe(recipe, out.stream());
        return kOk;
    }
    json summary{{"status", recipe.status == tqec::RecipeStatus::Converged ? "converged" : "finite"},
                 {"source_layers", recipe.source_layers},
                 {"min_layers", recipe.min_layers()},
                 {"offsets", recipe.offsets.size()},
                 {"blocks", recipe.blocks.size()},
                 {"layers", recipe.layers.size()}};
    std::cout << summary.dump(1) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Error propagation analysis, lattice tuning and Monte Carlo for topological codes"};
    app.require_subcommand(1);

    CodeArgs analyze_args;
    double analyze_p = 1e-3;
    std::string analyze_out;
    std::string analyze_format;
    bool provenance = false;
    auto *analyze = app.add_subcommand("analyze", "propagate every gate error and export the nest or lattice");
    analyze_args.add(analyze);
    analyze->add_option("-p", analyze_p, "physical error rate");
    analyze->add_option("--out", analyze_out, "output JSON file");
    analyze->add_option("--format", analyze_format, "nest or lattice (default from the file name)")
        ->check(CLI::IsMember({"nest", "lattice"}));
    analyze->add_flag("--provenance", provenance, "list the contributing errors of every stick");

    tqec::RunConfig run;
    std::vector<std::string> p_items;
    std::string lattice = "autotuned";
    std::string simulate_out;
    auto *simulate = app.add_subcommand("simulate", "Monte Carlo logical error rates");
    simulate->add_option("--code", run.code)->check(CLI::IsMember({"surface", "cluster"}));
    simulate->add_option("--d", run.d)->check(CLI::PositiveNumber);
    simulate->add_option("--lattice", lattice)->check(CLI::IsMember({"manhattan", "autotuned"}));
    simulate->add_option("-p", p_items, "comma separated list of physical error rates")->required();
    simulate->add_option("--max-failures", run.max_failures);
    simulate->add_option("--max-rounds", run.max_rounds, "stop after this many rounds per point");
    simulate->add_option("--seed", run.seed);
    simulate->add_option("--rounds-per-block", run.rounds_per_block, "default 10 d");
    simulate->add_option("--models", run.models);
    simulate->add_option("--threads", run.threads)->check(CLI::PositiveNumber);
    simulate->add_flag("--measure-z", run.measure_z, "also count logical Z changes");
    simulate->add_option("--out", simulate_out, "CSV file (default stdout)");

    tqec::InjectConfig inject;
    std::string inject_lattice = "autotuned";
    std::string inject_basis = "z";
    auto *inject_cmd = app.add_subcommand("inject", "exhaustive single and double fault injection");
    inject_cmd->add_option("--k", inject.k)->check(CLI::IsMember({1, 2}));
    inject_cmd->add_option("--code", inject.code)->check(CLI::IsMember({"surface", "cluster"}));
    inject_cmd->add_option("--d", inject.d)->check(CLI::PositiveNumber);
    inject_cmd->add_option("--rounds", inject.rounds, "default 2 d");
    inject_cmd->add_option("--lattice", inject_lattice)->check(CLI::IsMember({"manhattan", "autotuned"}));
    inject_cmd->add_option("--basis", inject_basis)->check(CLI::IsMember({"z", "x"}));
    inject_cmd->add_option("--models", inject.models);
    inject_cmd->add_option("--max-combinations", inject.max_combinations);

    CodeArgs recipe_args;
    double recipe_p = 1e-3;
    bool dump = false;
    std::string recipe_out;
    auto *recipe = app.add_subcommand("recipe", "compile the lattice recipe of a circuit");
    recipe_args.add(recipe);
    recipe->add_option("-p", recipe_p);
    recipe->add_flag("--dump", dump, "write the whole recipe as JSON");
    recipe->add_option("--out", recipe_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*analyze) return run_analyze(analyze_args, analyze_p, analyze_out, analyze_format, provenance);
        if (*simulate) {
            run.lattice = tqec::parse_lattice_mode(lattice);
            return run_simulate(run, p_items, simulate_out);
        }
        if (*inject_cmd) {
            inject.lattice = tqec::parse_lattice_mode(inject_lattice);
            inject.basis = inject_basis == "x" ? tqec::Basis::X : tqec::Basis::Z;
            return run_inject(inject);
        }
        if (*recipe) return run_recipe(recipe_args, recipe_p, dump, recipe_out);
    } catch (const tqec::StructuralError &e) {
        std::cerr << "structural error: " << e.what() << "\n";
        return kStructural;
    } catch (const tqec::ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
