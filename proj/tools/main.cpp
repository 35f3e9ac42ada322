// entrolab CLI: compute conditional entropies and overlap constants, verify
// uncertainty relations on problem files, and run seeded fuzz campaigns.
//
// Exit codes: 0 success / relation holds; 1 relation violated; 2 parse,
// validation or configuration failure (stderr names the violated invariant);
// 3 optimizer failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entrolab/campaign.hpp"
#include "entrolab/entropy.hpp"
#include "entrolab/problem_io.hpp"
#include "entrolab/relations.hpp"
#include "entrolab/report.hpp"

namespace {

using namespace entrolab;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write file '" + out_path + "'");
    out << text;
}

struct SpecFlags {
    std::string family = "vonneumann";
    double alpha = 0.0;
    bool alpha_set = false;
    std::string conditioning;  // empty = family default
};

EntropySpec spec_from_flags(const SpecFlags& f) {
    Family family;
    Conditioning cond;
    if (f.family == "vonneumann") {
        family = Family::von_neumann;
        cond = Conditioning::fixed_marginal;
    } else if (f.family == "renyi") {
        family = Family::renyi;
        cond = Conditioning::fixed_marginal;
    } else if (f.family == "renyi0") {
        family = Family::renyi0;
        cond = Conditioning::optimized;
    } else if (f.family == "min") {
        family = Family::min_rel;
        cond = Conditioning::optimized;
    } else if (f.family == "max") {
        family = Family::max_rel;
        cond = Conditioning::optimized;
    } else if (f.family == "tsallis") {
        family = Family::tsallis;
        cond = Conditioning::fixed_marginal;
    } else {
        throw ParseError("unknown entropy spec '" + f.family + "'");
    }
    if ((family == Family::renyi || family == Family::tsallis) && !f.alpha_set)
        throw ParseError("--alpha is required for the " + f.family + " family");
    if (!f.conditioning.empty()) {
        if (f.conditioning == "fixed") cond = Conditioning::fixed_marginal;
        else if (f.conditioning == "optimized") cond = Conditioning::optimized;
        else throw ParseError("--conditioning must be 'fixed' or 'optimized'");
    }
    return EntropySpec(family, cond, f.alpha_set ? f.alpha : 1.0);
}

std::vector<std::string> split_labels(const std::string& csv) {
    std::vector<std::string> labels;
    std::string current;
    for (char c : csv) {
        if (c == ',') {
            if (!current.empty()) labels.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) labels.push_back(current);
    return labels;
}

const DensityOperator& named_state(const ProblemFile& p, const std::string& name) {
    auto it = p.states.find(name);
    if (it == p.states.end()) throw ParseError("no state named '" + name + "'");
    return it->second;
}

const Povm& named_povm(const ProblemFile& p, const std::string& name) {
    auto it = p.povms.find(name);
    if (it == p.povms.end()) throw ParseError("no POVM named '" + name + "'");
    return it->second;
}

std::optional<Matrix> named_projector(const ProblemFile& p, const std::string& name) {
    if (name.empty()) return std::nullopt;
    auto it = p.projectors.find(name);
    if (it == p.projectors.end()) throw ParseError("no projector named '" + name + "'");
    return it->second;
}

int run(int argc, char** argv) {
    CLI::App app{"entrolab: quantum conditional entropies and entropic uncertainty relations"};
    app.require_subcommand(1);

    std::string problem_path, state_name, x_name, z_name, pi_name, out_path;
    std::string condition = "B", format = "json", relation;
    bool z_identity = false;
    SpecFlags spec_flags;
    OptimizerConfig opt;
    std::uint64_t seed = 42;
    int trials = 100;
    double tolerance = 1e-6;
    std::vector<Index> dims = {2};
    std::vector<std::string> suites = {"all"};
    std::vector<double> alphas = {0.3, 0.5, 0.999, 1.001, 1.5, 2.0};
    int threads = 0;

    auto add_spec_flags = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_flags.family,
                        "entropy family: vonneumann|renyi|renyi0|min|max|tsallis");
        cmd->add_option("--alpha", spec_flags.alpha, "order for renyi/tsallis, in (0,1) u (1,2]")
            ->each([&](const std::string&) { spec_flags.alpha_set = true; });
        cmd->add_option("--conditioning", spec_flags.conditioning,
                        "fixed | optimized (default depends on the family)");
    };
    auto add_optimizer_flags = [&](CLI::App* cmd) {
        cmd->add_option("--restarts", opt.restarts, "optimizer restarts");
        cmd->add_option("--seed", seed, "random seed");
    };

    auto* entropy_cmd =
        app.add_subcommand("entropy", "conditional entropy of a named state, in bits");
    entropy_cmd->add_option("--problem", problem_path, "problem JSON file")->required();
    entropy_cmd->add_option("--state", state_name, "state name")->required();
    entropy_cmd->add_option("--condition", condition, "conditioning labels, comma separated");
    add_spec_flags(entropy_cmd);
    add_optimizer_flags(entropy_cmd);

    auto* overlap_cmd =
        app.add_subcommand("overlap", "overlap constants c, c' and the entropic bound");
    overlap_cmd->add_option("--problem", problem_path, "problem JSON file")->required();
    overlap_cmd->add_option("--x", x_name, "X POVM name")->required();
    overlap_cmd->add_option("--z", z_name, "Z POVM name");
    overlap_cmd->add_flag("--identity", z_identity, "use Z = {1}");
    overlap_cmd->add_option("--pi", pi_name, "projector name for the restricted constants");

    auto* verify_cmd = app.add_subcommand("verify", "verify one uncertainty-relation instance");
    verify_cmd->add_option("--problem", problem_path, "problem JSON file")->required();
    verify_cmd
        ->add_option("--relation", relation,
                     "eq1|eq2|eq3|eq1-generalized|eq2-generalized|eq3-generalized")
        ->required();
    verify_cmd->add_option("--state", state_name, "state name")->required();
    verify_cmd->add_option("--x", x_name, "X POVM name")->required();
    verify_cmd->add_option("--z", z_name, "Z POVM name (tripartite relations)");
    verify_cmd->add_option("--pi", pi_name, "projector name");
    verify_cmd->add_option("--tolerance", tolerance, "slack tolerance");
    verify_cmd->add_option("--format", format, "json | csv");
    verify_cmd->add_option("--out", out_path, "write the report here instead of stdout");
    add_spec_flags(verify_cmd);
    add_optimizer_flags(verify_cmd);

    auto* fuzz_cmd = app.add_subcommand("fuzz", "seeded randomized verification campaign");
    fuzz_cmd
        ->add_option("--suite", suites,
                     "axioms|duality|eq1|eq2|eq3|generalized|lemmas|petz|all")
        ->delimiter(',');
    fuzz_cmd->add_option("--trials", trials, "instances per suite");
    fuzz_cmd->add_option("--seed", seed, "campaign seed");
    fuzz_cmd->add_option("--dims", dims, "allowed subsystem dimensions")->delimiter(',');
    fuzz_cmd->add_option("--tolerance", tolerance, "relation-slack tolerance");
    fuzz_cmd->add_option("--alphas", alphas, "alpha grid for the axiom suite")->delimiter(',');
    fuzz_cmd->add_option("--format", format, "json | csv");
    fuzz_cmd->add_option("--out", out_path, "write the report here instead of stdout");
    fuzz_cmd->add_option("--restarts", opt.restarts, "optimizer restarts");
    fuzz_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (entropy_cmd->parsed()) {
        const ProblemFile problem = parse_problem_text(read_file(problem_path));
        const DensityOperator& rho = named_state(problem, state_name);
        const EntropySpec spec = spec_from_flags(spec_flags);
        opt.seed = seed;
        const double value = conditional_entropy(spec, rho, split_labels(condition), opt);
        std::printf("%.9f\n", value);
        return 0;
    }

    if (overlap_cmd->parsed()) {
        const ProblemFile problem = parse_problem_text(read_file(problem_path));
        const Povm& x = named_povm(problem, x_name);
        const std::optional<Matrix> pi = named_projector(problem, pi_name);
        Povm z{{Matrix::Identity(x.dim(), x.dim())}, x.subsystem};
        if (!z_identity) {
            if (z_name.empty()) throw ParseError("overlap needs --z NAME or --identity");
            z = named_povm(problem, z_name);
        }
        const OverlapWitness c = overlap_c_witness(x, z, pi);
        const TraceWitness cp = overlap_c_prime_witness(x, pi);
        std::printf("c = %.12f (witness j=%zu, k=%zu)\n", c.value, c.j, c.k);
        std::printf("c' = %.12f (witness j=%zu)\n", cp.value, cp.j);
        std::printf("bound = %.12f bits\n", std::log2(1.0 / c.value));
        return 0;
    }

    if (verify_cmd->parsed()) {
        const ProblemFile problem = parse_problem_text(read_file(problem_path));
        const DensityOperator& rho = named_state(problem, state_name);
        const Povm& x = named_povm(problem, x_name);
        const std::optional<Matrix> pi = named_projector(problem, pi_name);
        const EntropySpec spec = spec_from_flags(spec_flags);
        opt.seed = seed;

        RelationReport report;
        if (relation == "eq1" || relation == "eq1-generalized") {
            if (z_name.empty()) throw ParseError(relation + " needs --z NAME");
            const Povm& z = named_povm(problem, z_name);
            report = relation == "eq1"
                         ? verify_tripartite(DualPair::of(spec), rho, x, z, pi, opt)
                         : verify_generalized_tripartite(spec, rho, x, z, pi, opt);
        } else if (relation == "eq2") {
            report = verify_bipartite(spec, rho, x, pi, opt);
        } else if (relation == "eq2-generalized") {
            report = verify_generalized_bipartite(spec, rho, x, pi, opt);
        } else if (relation == "eq3") {
            report = verify_state_dependent(spec, rho, x, pi, opt);
        } else if (relation == "eq3-generalized") {
            report = verify_generalized_state_dependent(spec, rho, x, pi, opt);
        } else {
            throw ParseError("unknown relation '" + relation + "'");
        }

        if (format == "json") {
            write_output(relation_json(report, tolerance).dump(2) + "\n", out_path);
        } else if (format == "csv") {
            std::string csv = "relation,spec,lhs,rhs,slack,constant,tolerance,inputs\n";
            csv += report.relation + "," + io::csv_escape(report.spec) + "," +
                   io::csv_number(report.lhs) + "," + io::csv_number(report.rhs) + "," +
                   io::csv_number(report.slack) + "," + io::csv_number(report.constant) + "," +
                   io::csv_number(tolerance) + "," + io::csv_escape(report.inputs) + "\n";
            write_output(csv, out_path);
        } else {
            throw ParseError("--format must be json or csv");
        }
        return report.slack >= -tolerance ? 0 : 1;
    }

    if (fuzz_cmd->parsed()) {
        CampaignConfig config;
        config.seed = seed;
        config.trials = trials;
        config.dims = dims;
        config.tolerance = tolerance;
        config.suites = suites;
        config.alphas = alphas;
        config.optimizer = opt;
        config.threads = threads;

        const auto t0 = std::chrono::steady_clock::now();
        const CampaignResult result = run_campaign(config);
        const auto t1 = std::chrono::steady_clock::now();

        if (format == "json") {
            write_output(report_to_json(result), out_path);
        } else if (format == "csv") {
            write_output(report_to_csv(result), out_path);
        } else {
            throw ParseError("--format must be json or csv");
        }
        std::fprintf(stderr, "records=%zu violations=%d min_slack=%.3e runtime=%.2fs\n",
                     result.records.size(), result.violations, result.min_slack,
                     std::chrono::duration<double>(t1 - t0).count());
        return result.violations > 0 ? 1 : 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const OptimizerFailure& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
