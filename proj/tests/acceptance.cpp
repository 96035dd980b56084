// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Criterion 5 needs the heavy tier; it is skipped (exit 77 when run alone)
// unless ZNREC_HEAVY=1.

#include "znrec/attack.hpp"
#include "znrec/campaign.hpp"
#include "znrec/generators.hpp"
#include "znrec/io.hpp"
#include "znrec/stats.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace znrec;
namespace fs = std::filesystem;

namespace {

struct CriterionResult {
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

bool heavy_enabled() {
    const char* env = std::getenv("ZNREC_HEAVY");
    return env && *env != '\0' && std::strcmp(env, "0") != 0;
}

// --------------------------------------------------------------- criterion 1

CriterionResult criterion_unimodularity() {
    const int seeds = 50;
    long checked = 0;
    auto check_det = [&](const GenerationRecord& rec, bool want_plus_one) -> bool {
        Integer d = det_exact(rec.matrix);
        ++checked;
        return want_plus_one ? d == 1 : abs(d) == 1;
    };
    for (int s = 0; s < seeds; ++s) {
        for (long long t : {1LL, 2LL}) {
            {
                RngStream rng(10000 + s);  // box: n = 4 is the feasible size
                if (!check_det(gen_box_rejection(4, t, rng), false))
                    return {false, false, "box determinant"};
            }
            for (int n : {4, 8, 16}) {
                {
                    RngStream rng(20000 + 97 * s + n + static_cast<int>(t));
                    if (!check_det(gen_silverman(n, t, rng), false))
                        return {false, false, "silverman determinant"};
                }
                {
                    RngStream rng(30000 + 97 * s + n + static_cast<int>(t));
                    if (!check_det(gen_hnf(n, n, t, rng), false))
                        return {false, false, "hnf determinant"};
                }
                for (long long ell : {0LL, 1LL, 10LL}) {
                    RngStream r1(40000 + 997 * s + 17 * n + static_cast<int>(3 * ell + t));
                    if (!check_det(gen_unipotent_product(n, t, ell, r1), true))
                        return {false, false, "unipotent determinant"};
                    for (int d = 2; d <= 4 && d < n; ++d) {
                        RngStream r2(50000 + 997 * s + 17 * n + 5 * d +
                                     static_cast<int>(3 * ell + t));
                        if (!check_det(gen_embedded_product(n, d, t, ell, r2), false))
                            return {false, false, "embedded determinant"};
                    }
                }
            }
        }
        for (int n : {4, 8, 16}) {
            for (int r : {1, 4}) {
                RngStream rng(60000 + 997 * s + 17 * n + r);
                if (!check_det(gen_drs(n, r, rng), true))
                    return {false, false, "drs determinant"};
            }
        }
    }
    return {true, false, std::to_string(checked) + " matrices, det = +-1 exactly"};
}

// --------------------------------------------------------------- criterion 2

CriterionResult criterion_reduction_contracts() {
    int lll_checked = 0, bkz_checked = 0;
    for (int i = 0; i < 200; ++i) {
        int n = 4 + (i % 17);  // 4..20
        RngStream rng(70000 + i);
        IntegerMatrix m;
        switch (i % 4) {
            case 0: m = gen_silverman(n, 2, rng).matrix; break;
            case 1: m = gen_unipotent_product(n, 2, 3 * n, rng).matrix; break;
            case 2: m = gen_drs(n % 2 == 0 ? n : n + 1, 2, rng).matrix; break;
            default: m = gen_hnf(n, n, 3, rng).matrix; break;
        }
        GramMatrix g = GramMatrix::from_basis(m);
        ReductionResult res = lll_reduce_gram(g);
        IntegerMatrix check = res.transform * g.matrix() * res.transform.transposed();
        if (check != res.reduced.matrix())
            return {false, false, "transform consistency broke at instance " +
                                      std::to_string(i)};
        if (!oracle::lll_reduced(res.reduced.matrix(), Rational(99, 100)))
            return {false, false,
                    "independent LLL checker rejected instance " + std::to_string(i)};
        ++lll_checked;

        if (g.n() <= 8) {
            ReductionResult bres = bkz_reduce_gram(g, 5);
            IntegerMatrix bcheck =
                bres.transform * g.matrix() * bres.transform.transposed();
            if (bcheck != bres.reduced.matrix())
                return {false, false, "bkz transform consistency broke"};
            if (!bres.converged)
                return {false, false, "bkz failed to converge on a tiny instance"};
            oracle::RationalGs gs = oracle::gs_from_gram(bres.reduced.matrix());
            if (!gs.positive_definite)
                return {false, false, "bkz output lost positive definiteness"};
            for (int kappa = 0; kappa + 2 <= g.n(); ++kappa) {
                int e = std::min(kappa + 5, g.n());
                Rational minimum = oracle::shortest_projected_norm(gs, kappa, e);
                if (minimum != gs.r[kappa])
                    return {false, false,
                            "bkz block [" + std::to_string(kappa) + "," +
                                std::to_string(e) + ") not minimal at instance " +
                                std::to_string(i)};
            }
            ++bkz_checked;
        }
    }
    return {true, false,
            std::to_string(lll_checked) + " LLL certificates, " +
                std::to_string(bkz_checked) + " exhaustive BKZ block checks"};
}

// --------------------------------------------------------------- criterion 3

CriterionResult criterion_tiny_oracle_equivalence() {
    int solved = 0;
    for (int s = 0; s < 20; ++s) {
        std::vector<std::pair<std::string, IntegerMatrix>> instances;
        {
            RngStream rng(80000 + s);
            instances.emplace_back("box", gen_box_rejection(4, 1, rng).matrix);
        }
        {
            RngStream rng(81000 + s);
            instances.emplace_back("unipotent",
                                   gen_unipotent_product(5, 1, 10, rng).matrix);
        }
        {
            RngStream rng(82000 + s);
            instances.emplace_back("embedded",
                                   gen_embedded_product(5, 2, 1, 10, rng).matrix);
        }
        {
            RngStream rng(83000 + s);
            instances.emplace_back("silverman", gen_silverman(5, 1, rng).matrix);
        }
        {
            RngStream rng(84000 + s);
            instances.emplace_back("hnf", gen_hnf(5, 5, 1, rng).matrix);
        }
        {
            RngStream rng(85000 + s);
            instances.emplace_back("drs", gen_drs(4, 2, rng).matrix);
        }
        for (auto& [name, m] : instances) {
            AttackReport rep = run_attack_pipeline(GramMatrix::from_basis(m), {}, &m);
            if (!rep.success)
                return {false, false, name + " instance unsolved at seed " +
                                          std::to_string(s)};
            if (!rep.equivalence_verified.has_value() || !*rep.equivalence_verified)
                return {false, false, name + " equivalence failed at seed " +
                                          std::to_string(s)};
            ++solved;
        }
    }
    {
        AttackReport rep = run_attack_pipeline(GramMatrix(e8_gram()));
        if (rep.success) return {false, false, "E8 negative control reported success"};
    }
    {
        IntegerMatrix two_i = IntegerMatrix::identity(6);
        for (int i = 0; i < 6; ++i) two_i(i, i) = 2;
        AttackReport rep = run_attack_pipeline(GramMatrix(gram_of(two_i)));
        if (rep.success) return {false, false, "2*I negative control reported success"};
    }
    return {true, false,
            std::to_string(solved) + " instances solved and equivalent; negatives held"};
}

// --------------------------------------------------------------- criterion 4

CriterionResult criterion_silverman_table() {
    std::ostringstream detail;
    for (long long t : {1LL, 3LL, 10LL}) {
        for (int s = 0; s < 3; ++s) {
            RngStream rng(90000 + 31 * s + static_cast<int>(t));
            GenerationRecord rec = gen_silverman(100, t, rng);
            RowLengthSummary bits = row_norm_bits(rec.matrix);
            if (t == 1) {
                if (std::abs(bits.min_bits - 2.92) > 0.5 ||
                    std::abs(bits.max_bits - 4.66) > 0.5)
                    return {false, false,
                            "row bits off the reference values at T=1: [" +
                                std::to_string(bits.min_bits) + ", " +
                                std::to_string(bits.max_bits) + "]"};
            }
            AttackReport rep =
                run_attack_pipeline(GramMatrix::from_basis(rec.matrix), {}, &rec.matrix);
            if (!rep.success || !rep.equivalence_verified.value_or(false))
                return {false, false, "attack failed at T=" + std::to_string(t) +
                                          " seed " + std::to_string(s)};
            detail << "T=" << t << "/s" << s << ":" << rep.stage_of_success << " ";
        }
    }
    return {true, false, "9/9 recovered; " + detail.str()};
}

// --------------------------------------------------------------- criterion 5

CriterionResult criterion_silverman_failure_heavy() {
    if (!heavy_enabled())
        return {false, true, "heavy tier (set ZNREC_HEAVY=1): n=200 failure reproduction"};
    RngStream rng(95000);
    GenerationRecord rec = gen_silverman(200, 1, rng);
    AttackOptions opts;
    opts.timeout_seconds = 24.0 * 3600.0;
    AttackReport rep = run_attack_pipeline(GramMatrix::from_basis(rec.matrix), opts);
    if (rep.success)
        return {false, false, "n=200 T=1 unexpectedly solved at " + rep.stage_of_success};
    std::string how = rep.outcome == AttackOutcome::Timeout ? "timeout" : "exhausted";
    return {true, false, "not solved within budget (" + how + ", " +
                             std::to_string(rep.total_seconds) + "s)"};
}

// --------------------------------------------------------------- criterion 6

CriterionResult criterion_unipotent_weakness() {
    std::ostringstream detail;
    for (int s = 0; s < 3; ++s) {
        RngStream rng(96000 + s);
        GenerationRecord rec = gen_unipotent_product(128, 1, 3000, rng);
        AttackReport rep =
            run_attack_pipeline(GramMatrix::from_basis(rec.matrix), {}, &rec.matrix);
        if (!rep.success || rep.stage_of_success != "lll")
            return {false, false,
                    "seed " + std::to_string(s) + ": outcome " +
                        std::string(to_string(rep.outcome)) + " stage " +
                        (rep.success ? rep.stage_of_success : std::string("-"))};
        detail << "s" << s << ":" << rep.total_seconds << "s ";
    }
    return {true, false, "LLL alone solved all 3 seeds; " + detail.str()};
}

// --------------------------------------------------------------- criterion 7

CriterionResult criterion_embedded_trend() {
    std::ostringstream detail;
    // every-row-touched cells at n = 64: l = 4n succeeds
    for (int d : {2, 3}) {
        RngStream rng(97000 + d);
        GenerationRecord rec = gen_embedded_product(64, d, 1, 256, rng);
        AttackReport rep =
            run_attack_pipeline(GramMatrix::from_basis(rec.matrix), {}, &rec.matrix);
        if (!rep.success)
            return {false, false, "d=" + std::to_string(d) + ", l=256 unsolved"};
        detail << "d" << d << "/l256:" << rep.stage_of_success << " ";
    }
    // eventually-fails trend at the (d=2, T=1) cell. At n = 64 the attack
    // keeps succeeding beyond l = 8192 (entries past 140 bits), so the trend
    // is demonstrated at n = 200, where long products genuinely resist the
    // 3-4-5 schedule.
    const long long trend_l[3] = {800, 2000, 4000};
    bool outcomes[3];
    for (int i = 0; i < 3; ++i) {
        RngStream rng(97500 + i);
        GenerationRecord rec = gen_embedded_product(200, 2, 1, trend_l[i], rng);
        AttackOptions opts;
        opts.timeout_seconds = 3.0 * 3600.0;
        AttackReport rep = run_attack_pipeline(GramMatrix::from_basis(rec.matrix), opts);
        outcomes[i] = rep.success;
        detail << "n200/l" << trend_l[i] << ":" << (rep.success ? "ok" : "fail") << " ";
    }
    if (!outcomes[0]) return {false, false, "trend: smallest l failed; " + detail.str()};
    if (outcomes[2]) return {false, false, "trend: largest l still solved; " + detail.str()};
    return {true, false, detail.str()};
}

// --------------------------------------------------------------- criterion 8

CriterionResult criterion_drs_sweep() {
    std::vector<double> rs, times;
    std::ostringstream detail;
    for (int r = 1; r <= 12; ++r) {
        RngStream rng(98000 + r);
        GenerationRecord rec = gen_drs(128, r, rng);
        AttackReport rep =
            run_attack_pipeline(GramMatrix::from_basis(rec.matrix), {}, &rec.matrix);
        if (!rep.success)
            return {false, false, "R=" + std::to_string(r) + " unsolved"};
        if (r <= 8 && rep.stage_of_success != "lll")
            return {false, false, "R=" + std::to_string(r) + " needed stage " +
                                      rep.stage_of_success};
        rs.push_back(r);
        times.push_back(rep.total_seconds);
        detail << "R" << r << ":" << static_cast<long>(rep.total_seconds) << "s ";
    }
    double rho = spearman_rank_correlation(rs, times);
    detail << "spearman=" << rho;
    if (rho < 0.8) return {false, false, detail.str()};
    return {true, false, detail.str()};
}

// --------------------------------------------------------------- criterion 9

CriterionResult criterion_band_structure() {
    // Run the stated comparison literally. Measurement and the permutation
    // argument both say the diagonal-band metric cannot separate these
    // generators (the construction conjugates by a uniform permutation), so
    // this criterion reports its honest failure; the row-norm spread shown in
    // the detail line is the signal that does separate them.
    std::ostringstream detail;
    bool all_strictly_greater = true;
    for (int s = 0; s < 5; ++s) {
        RngStream r1(99000 + s), r2(99500 + s);
        GramMatrix drs = GramMatrix::from_basis(gen_drs(128, 8, r1).matrix);
        GramMatrix silv = GramMatrix::from_basis(gen_silverman(128, 1, r2).matrix);
        double rd = band_ratio(drs, 16);
        double rsv = band_ratio(silv, 16);
        auto spread = [](const GramMatrix& g) {
            auto [mn, mx] = g.diag_range();
            return log2_abs(mx) - log2_abs(mn);
        };
        if (!(rd > rsv)) all_strictly_greater = false;
        detail << "s" << s << ": band " << rd << " vs " << rsv << " (diag spread "
               << spread(drs) << " vs " << spread(silv) << ") ";
    }
    if (!all_strictly_greater)
        return {false, false,
                "band_ratio(drs) did not exceed band_ratio(silverman): " + detail.str()};
    return {true, false, detail.str()};
}

// -------------------------------------------------------------- criterion 10

CriterionResult criterion_determinism() {
    fs::path dir = fs::temp_directory_path() / "znrec_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto bytes_of = [](const fs::path& p) {
        std::ifstream f(p);
        return std::string((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
    };
    std::vector<std::pair<std::string, std::map<std::string, long long>>> cases = {
        {"box", {{"n", 4}, {"T", 2}}},
        {"unipotent", {{"n", 8}, {"b", 1}, {"ell", 12}}},
        {"embedded", {{"n", 8}, {"d", 2}, {"T", 1}, {"ell", 6}}},
        {"silverman", {{"n", 8}, {"T", 2}}},
        {"hnf", {{"n", 8}, {"m", 8}, {"T", 2}}},
        {"drs", {{"n", 8}, {"R", 3}}},
        {"ntru", {{"n", 8}, {"q", 64}}},
    };
    for (const auto& [name, params] : cases) {
        fs::path a = dir / (name + "_a.json"), b = dir / (name + "_b.json");
        save_matrix(a, generate_by_name(name, params, 777).matrix);
        save_matrix(b, generate_by_name(name, params, 777).matrix);
        if (bytes_of(a) != bytes_of(b) || bytes_of(a).empty())
            return {false, false, name + " output files differ between runs"};
    }

    ExperimentConfig config;
    config.campaign_seed = 5;
    config.generator = "silverman";
    config.grid["n"] = {4, 6};
    config.grid["T"] = {1};
    config.trials_per_cell = 2;
    config.output_dir = (dir / "campaign").string();
    CampaignSummary first = run_campaign(config);
    CampaignSummary second = run_campaign(config);
    if (first.completed != 4 || first.failed != 0)
        return {false, false, "campaign first run incomplete"};
    if (second.completed != 0 || second.skipped != 4)
        return {false, false, "campaign resume recomputed cells"};
    return {true, false, "byte-identical outputs for 7 generators; resume recomputed 0"};
}

struct Criterion {
    int index;
    const char* name;
    std::function<CriterionResult()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "unimodularity across all generators", criterion_unimodularity},
        {2, "reduction contracts (LLL certificates, exhaustive BKZ blocks)",
         criterion_reduction_contracts},
        {3, "tiny-scale attack equivalence with negative controls",
         criterion_tiny_oracle_equivalence},
        {4, "algorithm-4 table at n=100 (row bits and full recovery)",
         criterion_silverman_table},
        {5, "algorithm-4 failure reproduction at n=200 (heavy)",
         criterion_silverman_failure_heavy},
        {6, "unipotent products at n=128 fall to LLL alone", criterion_unipotent_weakness},
        {7, "embedded products: solved when every row is touched, failing for long words",
         criterion_embedded_trend},
        {8, "drs sweep R=1..12: nondecreasing solve time, LLL alone through R=8",
         criterion_drs_sweep},
        {9, "band structure: drs vs silverman band ratios", criterion_band_structure},
        {10, "byte-identical generation and no-recompute campaign resume",
         criterion_determinism},
    };

    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }

    int failures = 0, skips = 0, ran = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.index != only) continue;
        auto start = std::chrono::steady_clock::now();
        CriterionResult res = c.run();
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        ++ran;
        if (res.skipped) {
            ++skips;
            std::printf("SKIP criterion %d: %s — %s\n", c.index, c.name,
                        res.detail.c_str());
        } else if (res.pass) {
            std::printf("PASS criterion %d: %s — %s (%.1fs)\n", c.index, c.name,
                        res.detail.c_str(), secs);
        } else {
            ++failures;
            std::printf("FAIL criterion %d: %s — %s (%.1fs)\n", c.index, c.name,
                        res.detail.c_str(), secs);
        }
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion\n");
        return 64;
    }
    if (failures > 0) return 1;
    if (skips == ran) return 77;
    return 0;
}
