#pragma once

#include "znrec/attack.hpp"
#include "znrec/generators.hpp"
#include "znrec/io.hpp"
#include "znrec/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace znrec {

// ---------------------------------------------------------------------------
// generation dispatch

inline long long param_or(const std::map<std::string, long long>& p, const std::string& k,
                          long long fallback) {
    auto it = p.find(k);
    return it == p.end() ? fallback : it->second;
}

inline long long require_param(const std::map<std::string, long long>& p,
                               const std::string& k) {
    auto it = p.find(k);
    if (it == p.end()) throw std::invalid_argument("missing parameter: " + k);
    return it->second;
}

inline GenerationRecord generate_by_name(const std::string& name,
                                         const std::map<std::string, long long>& params,
                                         std::uint64_t seed) {
    RngStream rng(seed);
    if (name == "box") {
        return gen_box_rejection(static_cast<int>(require_param(params, "n")),
                                 require_param(params, "T"), rng);
    }
    if (name == "unipotent") {
        return gen_unipotent_product(static_cast<int>(require_param(params, "n")),
                                     require_param(params, "b"),
                                     require_param(params, "ell"), rng);
    }
    if (name == "embedded") {
        return gen_embedded_product(static_cast<int>(require_param(params, "n")),
                                    static_cast<int>(require_param(params, "d")),
                                    require_param(params, "T"),
                                    require_param(params, "ell"), rng);
    }
    if (name == "silverman") {
        return gen_silverman(static_cast<int>(require_param(params, "n")),
                             require_param(params, "T"), rng);
    }
    if (name == "hnf") {
        int n = static_cast<int>(require_param(params, "n"));
        int m = static_cast<int>(param_or(params, "m", n));
        return gen_hnf(n, m, require_param(params, "T"), rng);
    }
    if (name == "drs") {
        return gen_drs(static_cast<int>(require_param(params, "n")),
                       static_cast<int>(require_param(params, "R")), rng);
    }
    if (name == "ntru") {
        return gen_ntru_reference(static_cast<int>(require_param(params, "n")),
                                  require_param(params, "q"), rng);
    }
    throw std::invalid_argument("unknown generator: " + name);
}

// ---------------------------------------------------------------------------
// cost model for the heavy tier
//
// Generation cost is dominated by the exact determinant check: Bareiss does
// ~n^3 multiplications whose operands grow to ~n*bits/2 bits, so
//   gen_seconds ~= n^3 * (n*bits/64)^1.6 / 2e9.
// Attack cost is the deep LLL plus enumeration across scheduled blocks:
//   attack_seconds ~= 1.5e-6 * n^3 * bits + sum_beta 4e-7 * n * 2^beta.
// Constants calibrated once on the development machine; anything projected
// over one CPU-hour is refused without the heavy flag.

constexpr double kHeavySeconds = 3600.0;

inline double estimated_entry_bits(const std::string& name,
                                   const std::map<std::string, long long>& params) {
    double n = static_cast<double>(param_or(params, "n", 2));
    if (name == "box" || name == "silverman" || name == "hnf")
        return std::log2(2.0 * param_or(params, "T", 1) + 1) + 6.0;
    if (name == "unipotent")
        return 1.5 * param_or(params, "ell", 0) / n +
               std::log2(param_or(params, "b", 1) + 1.0) + 1.0;
    if (name == "embedded")
        return 1.2 * param_or(params, "ell", 0) * param_or(params, "d", 2) / n *
                   std::log2(param_or(params, "T", 1) + 1.0) +
               2.0;
    if (name == "drs") return 1.4 * param_or(params, "R", 1) + 1.0;
    if (name == "ntru") return std::log2(param_or(params, "q", 2) + 1.0);
    return 8.0;
}

inline double estimate_gen_seconds(const std::string& name,
                                   const std::map<std::string, long long>& params) {
    double n = static_cast<double>(param_or(params, "n", 2));
    double bits = estimated_entry_bits(name, params);
    return n * n * n * std::pow(std::max(1.0, n * bits / 64.0), 1.6) / 2e9;
}

inline double estimate_attack_seconds(int n, double gram_bits,
                                      const std::vector<int>& blocks) {
    double est = 1.5e-6 * double(n) * n * n * std::max(1.0, gram_bits);
    for (int beta : blocks) est += 4e-7 * n * std::pow(2.0, beta);
    return est;
}

// ---------------------------------------------------------------------------
// campaign configuration and runner

struct AttackSettings {
    std::vector<int> blocks = {3, 4, 5};
    double delta = 0.99;
    double timeout_seconds = 0.0;
    int deep_depth = 8;
};

struct ExperimentConfig {
    std::uint64_t campaign_seed = 1;
    std::string generator;
    std::map<std::string, std::vector<long long>> grid;  // param -> values
    int trials_per_cell = 3;
    AttackSettings attack;
    bool run_attack = true;
    bool heavy = false;
    std::string output_dir;
};

inline ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    c.campaign_seed = j.value("campaign_seed", 1ULL);
    c.generator = j.at("generator").get<std::string>();
    for (const auto& [k, v] : j.at("grid").items()) {
        std::vector<long long> vals;
        if (v.is_array())
            for (const auto& x : v) vals.push_back(x.get<long long>());
        else
            vals.push_back(v.get<long long>());
        c.grid[k] = vals;
    }
    c.trials_per_cell = j.value("trials_per_cell", 3);
    if (j.contains("attack")) {
        const auto& a = j.at("attack");
        if (a.contains("blocks")) c.attack.blocks = a.at("blocks").get<std::vector<int>>();
        c.attack.delta = a.value("delta", 0.99);
        c.attack.timeout_seconds = a.value("timeout_seconds", 0.0);
        c.attack.deep_depth = a.value("deep_depth", 8);
    }
    c.run_attack = j.value("run_attack", true);
    c.heavy = j.value("heavy", false);
    c.output_dir = j.value("output_dir", std::string("campaign_out"));
    return c;
}

inline std::vector<std::map<std::string, long long>> expand_grid(
    const ExperimentConfig& c) {
    std::vector<std::map<std::string, long long>> cells = {{}};
    for (const auto& [key, values] : c.grid) {  // std::map: deterministic order
        std::vector<std::map<std::string, long long>> next;
        for (const auto& cell : cells)
            for (long long v : values) {
                auto copy = cell;
                copy[key] = v;
                next.push_back(std::move(copy));
            }
        cells = std::move(next);
    }
    return cells;
}

inline std::string params_label(const std::map<std::string, long long>& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (k == "n") continue;
        if (!out.empty()) out += ';';
        out += k + "=" + std::to_string(v);
    }
    return out;
}

struct CampaignSummary {
    long completed = 0;
    long skipped = 0;
    long failed = 0;
};

inline int worker_count() {
    if (const char* env = std::getenv("ZNREC_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) return w;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs every (cell, trial) not already present in results.jsonl, appending one
// JSON line per finished trial under a single-writer lock, then rewrites the
// CSV from the full journal. Interrupting leaves at most unfinished trials
// missing from the journal; a rerun recomputes exactly those.
inline CampaignSummary run_campaign(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path journal_path = fs::path(config.output_dir) / "results.jsonl";
    const fs::path csv_path = fs::path(config.output_dir) / "results.csv";

    std::map<std::pair<int, int>, Json> done;
    if (fs::exists(journal_path)) {
        std::ifstream in(journal_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            Json j = Json::parse(line);
            done[{j.at("cell").get<int>(), j.at("trial").get<int>()}] = j;
        }
    }

    auto cells = expand_grid(config);
    struct Job {
        int cell;
        int trial;
    };
    std::vector<Job> jobs;
    CampaignSummary summary;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c)
        for (int t = 0; t < config.trials_per_cell; ++t) {
            if (done.count({c, t}))
                ++summary.skipped;
            else
                jobs.push_back({c, t});
        }

    std::mutex io_mutex;
    std::ofstream journal(journal_path, std::ios::app);
    std::atomic<std::size_t> next{0};
    std::atomic<long> completed{0}, failed{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            const Job job = jobs[idx];
            const auto& params = cells[job.cell];
            std::uint64_t seed =
                RngStream::derive_seed(config.campaign_seed, job.cell, job.trial);
            Json row{{"cell", job.cell},
                     {"trial", job.trial},
                     {"seed", seed},
                     {"generator", config.generator},
                     {"params", params_label(params)},
                     {"n", param_or(params, "n", 0)}};
            try {
                double gen_est = estimate_gen_seconds(config.generator, params);
                std::vector<int> blocks = config.run_attack ? config.attack.blocks
                                                            : std::vector<int>{};
                double attack_est = config.run_attack
                                        ? estimate_attack_seconds(
                                              static_cast<int>(param_or(params, "n", 2)),
                                              estimated_entry_bits(config.generator, params) * 2,
                                              blocks)
                                        : 0.0;
                if (!config.heavy && gen_est + attack_est > kHeavySeconds)
                    throw BudgetExhaustedError(
                        "projected cost exceeds 1 CPU-hour; heavy tier required");

                GenerationRecord rec = generate_by_name(config.generator, params, seed);
                RowLengthSummary bits = row_norm_bits(rec.matrix);
                row["digest"] = matrix_digest(rec.matrix);
                row["entropy_bits"] = rec.entropy_bits;
                row["shortest_bits"] = bits.min_bits;
                row["longest_bits"] = bits.max_bits;
                if (config.run_attack) {
                    AttackOptions aopts;
                    aopts.schedule = config.attack.blocks;
                    aopts.delta = config.attack.delta;
                    aopts.timeout_seconds = config.attack.timeout_seconds;
                    aopts.deep_depth = config.attack.deep_depth;
                    GramMatrix gram = GramMatrix::from_basis(rec.matrix);
                    AttackReport rep = run_attack_pipeline(gram, aopts, &rec.matrix);
                    row["found"] = rep.success ? 1 : 0;
                    row["stage"] = rep.success ? rep.stage_of_success : "-";
                    row["seconds"] = rep.total_seconds;
                    row["outcome"] = to_string(rep.outcome);
                } else {
                    row["found"] = 0;
                    row["stage"] = "-";
                    row["seconds"] = rec.wall_seconds;
                    row["outcome"] = "generated";
                }
                row["status"] = "ok";
                ++completed;
            } catch (const std::exception& e) {
                row["status"] = std::string("error: ") + e.what();
                row["found"] = 0;
                row["stage"] = "-";
                row["seconds"] = 0.0;
                ++failed;
            }
            std::lock_guard<std::mutex> lock(io_mutex);
            journal << row.dump() << '\n';
            journal.flush();
            done[{job.cell, job.trial}] = row;
        }
    };

    const int workers = std::max(1, std::min<int>(worker_count(),
                                                  static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    summary.completed = completed.load();
    summary.failed = failed.load();

    // regenerate the CSV from the journal, ordered by (cell, trial)
    std::ofstream csv(csv_path);
    csv << "n,params,shortest_bits,longest_bits,found,stage,seconds\n";
    csv.precision(6);
    csv << std::fixed;
    for (const auto& [key, row] : done) {
        if (row.value("status", "") != "ok") continue;
        csv << row.value("n", 0LL) << ',' << row.value("params", std::string())
            << ',' << row.value("shortest_bits", 0.0) << ','
            << row.value("longest_bits", 0.0) << ',' << row.value("found", 0) << ','
            << row.value("stage", std::string("-")) << ','
            << row.value("seconds", 0.0) << '\n';
    }
    return summary;
}

}  // namespace znrec
