// Command-line front end: generate unimodular bases, form Gram matrices,
// attack them, compute statistics, and run experiment campaigns.

#include "znrec/attack.hpp"
#include "znrec/campaign.hpp"
#include "znrec/generators.hpp"
#include "znrec/io.hpp"
#include "znrec/stats.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

namespace {

using namespace znrec;

struct GenArgs {
    std::string alg;
    long long n = 0, t = 1, b = 1, ell = 0, d = 2, big_r = 1, q = 2048, m = 0;
    std::uint64_t seed = 1;
    std::string out = "matrix";
    bool heavy = false;
    bool skip_det_check = false;
};

std::map<std::string, long long> gen_params(const GenArgs& a) {
    std::map<std::string, long long> p{{"n", a.n}};
    if (a.alg == "box" || a.alg == "silverman") p["T"] = a.t;
    if (a.alg == "unipotent") {
        p["b"] = a.b;
        p["ell"] = a.ell;
    }
    if (a.alg == "embedded") {
        p["d"] = a.d;
        p["T"] = a.t;
        p["ell"] = a.ell;
    }
    if (a.alg == "hnf") {
        p["T"] = a.t;
        p["m"] = a.m > 0 ? a.m : a.n;
    }
    if (a.alg == "drs") p["R"] = a.big_r;
    if (a.alg == "ntru") p["q"] = a.q;
    return p;
}

int cmd_gen(const GenArgs& a) {
    auto params = gen_params(a);
    double est = estimate_gen_seconds(a.alg, params);
    if (!a.heavy && est > kHeavySeconds) {
        std::cerr << "refused: projected " << static_cast<long>(est)
                  << "s exceeds the 1 CPU-hour desk tier; rerun with --heavy\n";
        return 1;
    }
    GenerationRecord rec = generate_by_name(a.alg, params, a.seed);
    save_matrix(a.out + ".json", rec.matrix);
    save_json(a.out + ".record.json", record_to_json(rec));

    RowLengthSummary bits = row_norm_bits(rec.matrix);
    std::cout << "generator: " << rec.generator << "\nseed: " << a.seed
              << "\nentropy_bits: " << rec.entropy_bits << "\nrow_bits: ["
              << bits.min_bits << ", " << bits.max_bits << "]\n";
    if (!a.skip_det_check && a.alg != "ntru") {
        Integer d = det_exact(rec.matrix);
        std::cout << "det: " << d.get_str() << "\n";
        if (abs(d) != 1) {
            std::cerr << "determinant check failed\n";
            return 1;
        }
    }
    std::cout << "wrote " << a.out << ".json and " << a.out << ".record.json\n";
    return 0;
}

struct AttackArgs {
    std::string gram_path;
    std::string basis_path;
    std::string out = "report.json";
    double delta = 0.99;
    int bkz_max = 5;
    double timeout = 0.0;
    int deep_depth = 8;
    bool heavy = false;
};

int cmd_attack(const AttackArgs& a) {
    IntegerMatrix basis;
    GramMatrix gram;
    bool have_basis = false;
    if (!a.basis_path.empty()) {
        basis = load_matrix(a.basis_path);
        gram = GramMatrix::from_basis(basis);
        have_basis = true;
    } else {
        gram = GramMatrix(load_matrix(a.gram_path));
    }

    AttackOptions opts;
    opts.schedule.clear();
    for (int beta = 3; beta <= a.bkz_max; ++beta) opts.schedule.push_back(beta);
    opts.delta = a.delta;
    opts.timeout_seconds = a.timeout;
    opts.deep_depth = a.deep_depth;
    opts.enum_cap = std::max(30, a.bkz_max);

    double est = estimate_attack_seconds(
        gram.n(), static_cast<double>(gram.matrix().max_entry_bits()), opts.schedule);
    if (!a.heavy && est > kHeavySeconds) {
        std::cerr << "refused: projected " << static_cast<long>(est)
                  << "s exceeds the 1 CPU-hour desk tier; rerun with --heavy\n";
        return 1;
    }

    AttackReport rep = run_attack_pipeline(gram, opts, have_basis ? &basis : nullptr);
    save_json(a.out, report_to_json(rep));
    std::cout << "outcome: " << to_string(rep.outcome);
    if (rep.success) std::cout << " at stage " << rep.stage_of_success;
    std::cout << " in " << rep.total_seconds << "s; report written to " << a.out << "\n";
    return exit_code_for(rep);
}

struct StatsArgs {
    std::string matrix_path;
    std::string heatmap_out;
    std::string summary_out;
    int band_w = 0;
    bool svd = false;
};

int cmd_stats(const StatsArgs& a) {
    IntegerMatrix m = load_matrix(a.matrix_path);
    RowLengthSummary bits = row_norm_bits(m);
    std::cout << "rows: " << m.rows() << " cols: " << m.cols() << "\nrow_bits: ["
              << bits.min_bits << ", " << bits.max_bits << "]\n";
    Json summary{{"rows", m.rows()},
                 {"cols", m.cols()},
                 {"shortest_bits", bits.min_bits},
                 {"longest_bits", bits.max_bits},
                 {"nonzero_fraction", nonzero_fraction(m)}};
    if (a.band_w > 0) {
        // a symmetric input is taken as a Gram matrix; a basis is Gram'd first
        GramMatrix g = m.is_symmetric() ? GramMatrix(m) : GramMatrix::from_basis(m);
        double ratio = band_ratio(g, a.band_w);
        summary["band_ratio"] = ratio;
        summary["band_w"] = a.band_w;
        std::cout << "band_ratio(w=" << a.band_w << "): " << ratio << "\n";
    }
    if (a.svd) {
        auto sv = near_rank_profile(m);
        summary["sigma_ratio"] = sv.size() > 1 && sv[0] > 0 ? sv[1] / sv[0] : 0.0;
        std::cout << "sigma2/sigma1: " << (sv.size() > 1 ? sv[1] / sv[0] : 0.0) << "\n";
    }
    if (!a.heatmap_out.empty()) {
        std::ofstream f(a.heatmap_out);
        f << heatmap_to_csv(log_heatmap(m));
        std::cout << "heatmap written to " << a.heatmap_out << "\n";
    }
    if (!a.summary_out.empty()) save_json(a.summary_out, summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random unimodular basis generation and Z^n recognition attacks"};
    app.require_subcommand(1);

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a random unimodular basis");
    gen->add_option("--alg", ga.alg,
                    "generator: box|unipotent|embedded|silverman|hnf|drs|ntru")
        ->required();
    gen->add_option("--n", ga.n, "dimension")->required();
    gen->add_option("--T", ga.t, "entry bound");
    gen->add_option("--b", ga.b, "unipotent coefficient bound");
    gen->add_option("--l,--ell", ga.ell, "product length");
    gen->add_option("--d", ga.d, "embedded block dimension");
    gen->add_option("--R", ga.big_r, "drs round count");
    gen->add_option("--q", ga.q, "ntru modulus");
    gen->add_option("--m", ga.m, "row count for hnf sampling (default n)");
    gen->add_option("--seed", ga.seed, "64-bit seed");
    gen->add_option("--out", ga.out, "output path prefix");
    gen->add_flag("--heavy", ga.heavy, "allow jobs projected over 1 CPU-hour");
    gen->add_flag("--skip-det-check", ga.skip_det_check,
                  "skip the exact determinant verification");

    AttackArgs aa;
    auto* attack = app.add_subcommand("attack", "run the recognition pipeline on a Gram");
    auto* gopt = attack->add_option("--gram", aa.gram_path, "Gram matrix JSON");
    attack->add_option("--basis", aa.basis_path, "basis JSON (Gram is formed internally)")
        ->excludes(gopt);
    attack->add_option("--out", aa.out, "report path");
    attack->add_option("--delta", aa.delta, "LLL/BKZ delta");
    attack->add_option("--bkz-max", aa.bkz_max, "largest BKZ block size (schedule 3..max)");
    attack->add_option("--timeout", aa.timeout, "wall-clock budget in seconds (0 = none)");
    attack->add_option("--deep-depth", aa.deep_depth, "LLL deep-insertion window");
    attack->add_flag("--heavy", aa.heavy, "allow jobs projected over 1 CPU-hour");

    std::string gram_in, gram_out = "gram.json";
    auto* gramc = app.add_subcommand("gram", "form the Gram matrix of a basis file");
    gramc->add_option("--basis", gram_in, "basis JSON")->required();
    gramc->add_option("--out", gram_out, "output path");

    StatsArgs sa;
    auto* stats = app.add_subcommand("stats", "row lengths, heatmaps, band ratios");
    stats->add_option("--matrix", sa.matrix_path, "matrix JSON")->required();
    stats->add_option("--heatmap-out", sa.heatmap_out, "write log2(1+|entry|) CSV grid");
    stats->add_option("--summary-out", sa.summary_out, "write summary JSON");
    stats->add_option("--band-w", sa.band_w, "band ratio width");
    stats->add_flag("--svd", sa.svd, "report the singular value ratio");

    std::string campaign_config;
    auto* camp = app.add_subcommand("campaign", "run a grid of experiments from a config");
    camp->add_option("config", campaign_config, "campaign config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_gen(ga);
        if (*attack) {
            if (aa.gram_path.empty() && aa.basis_path.empty()) {
                std::cerr << "attack: need --gram or --basis\n";
                return 1;
            }
            return cmd_attack(aa);
        }
        if (*gramc) {
            IntegerMatrix b = znrec::load_matrix(gram_in);
            znrec::save_matrix(gram_out, znrec::gram_of(b));
            std::cout << "gram written to " << gram_out << "\n";
            return 0;
        }
        if (*stats) return cmd_stats(sa);
        if (*camp) {
            auto config = znrec::config_from_json(znrec::load_json(campaign_config));
            auto summary = znrec::run_campaign(config);
            std::cout << "completed " << summary.completed << ", skipped "
                      << summary.skipped << ", failed " << summary.failed
                      << "; results in " << config.output_dir << "\n";
            return summary.failed == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
