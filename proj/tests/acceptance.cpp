// Acceptance suite: every criterion of the verification campaign run at its
// stated tolerance, one pass/fail line each. Exits with the number of failed
// criteria. An optional integer argument restricts the run to one criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "entrolab/campaign.hpp"
#include "entrolab/relations.hpp"
#include "entrolab/report.hpp"
#include "test_helpers.hpp"

namespace {

using namespace entrolab;

struct CheckFailure {
    std::string detail;
};

void require(bool ok, const std::string& why) {
    if (!ok) throw CheckFailure{why};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

CampaignResult run_suite(const std::string& suite, int trials, std::vector<Index> dims,
                         std::uint64_t seed, double tolerance = 1e-6) {
    CampaignConfig config;
    config.seed = seed;
    config.trials = trials;
    config.dims = std::move(dims);
    config.tolerance = tolerance;
    config.suites = {suite};
    return run_campaign(config);
}

void summarize(const CampaignResult& r, std::string& info) {
    info += " records=" + std::to_string(r.records.size()) +
              " min_slack=" + fmt(r.min_slack);
    require(r.violations == 0, "violations=" + std::to_string(r.violations) +
                                   " min_slack=" + fmt(r.min_slack));
}

// 1. Divergence axioms, isometry invariance, and second-argument
//    monotonicity over 1000 instances per family, dims 2-4, slack >= -1e-8.
void criterion_axioms(std::string& info) {
    const CampaignResult r = run_suite("axioms", 1000, {2, 3, 4}, 0xa510);
    require(r.min_slack >= -1e-8, "min_slack=" + fmt(r.min_slack));
    summarize(r, info);
}

// 2. Duality identities within 1e-6 on 300 random pure tripartite states per
//    dual pair.
void criterion_duality(std::string& info) {
    const CampaignResult r = run_suite("duality", 300, {2, 3}, 0xd0a1);
    for (const DualPair& pair : canonical_dual_pairs()) {
        int count = 0;
        for (const auto& rec : r.records)
            if (rec.report.spec == pair.name()) ++count;
        require(count == 300, pair.name() + " ran " + std::to_string(count) + " instances");
    }
    summarize(r, info);
}

// 3. The tripartite relation over 500 instances per dual pair plus exact
//    saturation on the Bell + qubit-MUB instance.
void criterion_eq1(std::string& info) {
    const DensityOperator bell = testing::bell_with_trivial_c();
    const auto [mub_x, mub_z] = mub_pair(2);
    const RelationReport saturated =
        verify_tripartite(DualPair::of(EntropySpec::von_neumann()), bell, mub_x, mub_z);
    require(std::abs(saturated.slack) <= 1e-6,
            "Bell+MUB slack=" + fmt(saturated.slack));
    info += " bell_slack=" + fmt(saturated.slack);

    const CampaignResult r = run_suite("eq1", 500, {2, 3}, 0xe101);
    for (const DualPair& pair : tripartite_dual_pairs()) {
        int count = 0;
        for (const auto& rec : r.records)
            if (rec.report.spec == pair.name()) ++count;
        require(count == 500, pair.name() + " ran " + std::to_string(count) + " instances");
    }
    summarize(r, info);
}

// 4. Bipartite relation: exact equality for the coin POVM and 500 random
//    instances per entropy spec.
void criterion_eq2(std::string& info) {
    Rng rng(0xe202);
    const DensityOperator rho = random_state(DimSignature{{"A", 2}, {"B", 2}}, 3, rng);
    const Matrix half = 0.5 * Matrix::Identity(2, 2);
    const Povm coin{{half, half}, "A"};
    double worst = 0.0;
    for (const EntropySpec& spec : relation_specs()) {
        const RelationReport r = verify_bipartite(spec, rho, coin);
        worst = std::max({worst, std::abs(r.lhs - 1.0), std::abs(r.rhs - 1.0),
                          std::abs(r.slack)});
    }
    require(worst <= 1e-9, "coin-POVM equality error=" + fmt(worst));
    info += " coin_err=" + fmt(worst);

    const CampaignResult r = run_suite("eq2", 500, {2, 3}, 0xe2f2);
    summarize(r, info);
}

// 5. State-dependent relation: Bell/computational slack = 1, maximally-mixed
//    equality, and 500 random instances per entropy spec.
void criterion_eq3(std::string& info) {
    const DensityOperator bell = maximally_entangled(2);
    const Povm comp = projective_povm(Matrix::Identity(2, 2));
    const RelationReport bell_report =
        verify_state_dependent(EntropySpec::von_neumann(), bell, comp);
    require(std::abs(bell_report.slack - 1.0) <= 1e-6,
            "Bell eq3 slack=" + fmt(bell_report.slack));

    Rng rng(0xe303);
    const DensityOperator rho_b = random_state(DimSignature::single("B", 2), 2, rng);
    const DensityOperator mixed{
        tensor(Matrix(0.5 * Matrix::Identity(2, 2)), rho_b.matrix),
        DimSignature{{"A", 2}, {"B", 2}}};
    const RelationReport eq = verify_state_dependent(EntropySpec::von_neumann(), mixed, comp);
    require(std::abs(eq.slack) <= 1e-6, "mixed-A equality slack=" + fmt(eq.slack));
    info += " bell_slack=" + fmt(bell_report.slack) + " mixed_slack=" + fmt(eq.slack);

    const CampaignResult r = run_suite("eq3", 500, {2, 3}, 0xe3f3);
    summarize(r, info);
}

// 6. Supporting-lemma suite: product-state zero, dimension bounds, support
//    restriction, local-isometry invariance, measured nonnegativity and the
//    orthogonal-support equality case.
void criterion_lemmas(std::string& info) {
    const CampaignResult r = run_suite("lemmas", 200, {2, 3}, 0x1e3a);
    summarize(r, info);
}

// 7. Optimized entropies against the Bloch-grid brute force on 200 random
//    qubit-conditioned states, plus the Bell min/max values.
void criterion_oracle(std::string& info) {
    const DensityOperator bell = maximally_entangled(2);
    const double hmin = conditional_entropy(EntropySpec::min_rel(), bell, {"B"});
    const double hmax = conditional_entropy(EntropySpec::max_rel(), bell, {"B"});
    require(std::abs(hmin + 1.0) <= 1e-3, "Bell H_min=" + fmt(hmin));
    require(std::abs(hmax + 1.0) <= 1e-3, "Bell H_max=" + fmt(hmax));

    OptimizerConfig cfg;
    double worst = 0.0;
    const auto specs = testing::optimized_specs();
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng(Rng::derive(0x0acc, static_cast<std::uint64_t>(trial)));
        const Index da = 2 + static_cast<Index>(rng.below(2));
        const DensityOperator rho = random_state(DimSignature{{"A", da}, {"B", 2}},
                                                 1 + static_cast<Index>(rng.below(3)), rng);
        const EntropySpec spec = specs[static_cast<std::size_t>(trial) % specs.size()];
        const double value = conditional_entropy(spec, rho, {"B"}, cfg);
        const detail::ConditionalObjective objective(spec, rho, {"B"}, false);
        const double grid = testing::zoomed_bloch_maximum(
            [&](const Matrix& sigma) { return objective(sigma); });
        worst = std::max(worst, std::abs(value - grid));
        require(std::abs(value - grid) <= 1e-3,
                spec.name() + " trial " + std::to_string(trial) + " optimizer-grid=" +
                    fmt(value - grid));
    }
    info += " worst_vs_grid=" + fmt(worst) + " bell_hmin=" + fmt(hmin) +
              " bell_hmax=" + fmt(hmax);
}

// 8. The three Tsallis-generalized relations at alpha in {0.5, 2.0} over 200
//    instances each, plus bridge-identity consistency.
void criterion_generalized(std::string& info) {
    const CampaignResult r = run_suite("generalized", 400, {2, 3}, 0x9e4e);
    int tripartite = 0, bridge = 0;
    for (const auto& rec : r.records) {
        if (rec.report.relation == "eq1-generalized") ++tripartite;
        if (rec.report.relation == "tsallis-renyi-bridge") ++bridge;
    }
    require(tripartite == 400, "generalized tripartite instances=" + std::to_string(tripartite));
    require(bridge == 400, "bridge records=" + std::to_string(bridge));
    summarize(r, info);
}

// 9. Petz explorer on the saturating Bell + MUB instance: recovery deviations
//    and the relation slack vanish together.
void criterion_petz(std::string& info) {
    const DensityOperator bell = testing::bell_with_trivial_c();
    const auto [mub_x, mub_z] = mub_pair(2);
    const PetzDiagnostics diag = equality_explorer(bell, mub_x, mub_z);
    require(diag.recovered_s_deviation <= 1e-6, "S deviation=" + fmt(diag.recovered_s_deviation));
    require(diag.recovered_t_deviation <= 1e-6, "T deviation=" + fmt(diag.recovered_t_deviation));
    require(std::abs(diag.saturation_gap) <= 1e-6, "gap=" + fmt(diag.saturation_gap));
    info += " devS=" + fmt(diag.recovered_s_deviation) +
              " devT=" + fmt(diag.recovered_t_deviation) + " gap=" + fmt(diag.saturation_gap);
}

// 10. cmd_fuzz determinism: byte-identical reports across two consecutive
//     runs with a fixed seed.
void criterion_determinism(std::string& info) {
    const std::string base = "acceptance_fuzz_";
    const std::string cmd = std::string(ENTROLAB_CLI_PATH) +
                            " fuzz --suite duality,generalized,axioms --trials 25 --seed 20260808"
                            " --dims 2,3 --format json --out " +
                            base;
    require(std::system((cmd + "a.json 2>/dev/null").c_str()) == 0, "first fuzz run failed");
    require(std::system((cmd + "b.json 2>/dev/null").c_str()) == 0, "second fuzz run failed");
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(base + "a.json");
    const std::string b = slurp(base + "b.json");
    require(!a.empty(), "empty report");
    require(a == b, "reports differ (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + " bytes)");
    info += " bytes=" + std::to_string(a.size());
    std::remove((base + "a.json").c_str());
    std::remove((base + "b.json").c_str());
}

}  // namespace

int main(int argc, char** argv) {
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    const std::vector<std::pair<std::string, std::function<void(std::string&)>>> criteria = {
        {"divergence axiom suite with isometry invariance and monotonicity", criterion_axioms},
        {"duality suite on pure tripartite states", criterion_duality},
        {"tripartite relation with Bell+MUB saturation", criterion_eq1},
        {"bipartite relation with coin-POVM equality", criterion_eq2},
        {"state-dependent relation with engineered instances", criterion_eq3},
        {"supporting-lemma suite", criterion_lemmas},
        {"optimizer vs Bloch-grid oracle", criterion_oracle},
        {"Tsallis-generalized relations and the Renyi bridge", criterion_generalized},
        {"Petz recovery at the saturating instance", criterion_petz},
        {"fuzz report determinism", criterion_determinism},
    };

    int failures = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (only != 0 && only != id) continue;
        std::string detail;
        const auto c0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(detail);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
            std::printf("[PASS] criterion %2d: %s (%.1fs)%s\n", id, criteria[i].first.c_str(),
                        secs, detail.c_str());
        } catch (const CheckFailure& f) {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s -- %s\n", id, criteria[i].first.c_str(),
                        f.detail.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s -- exception: %s\n", id,
                        criteria[i].first.c_str(), e.what());
        }
        std::fflush(stdout);
    }
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d criteria failed (%.1fs total)\n", failures, total);
    return failures;
}
