#pragma once

#include "znrec/bkz.hpp"
#include "znrec/gram.hpp"
#include "znrec/linalg.hpp"
#include "znrec/lll.hpp"
#include "znrec/matrix.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace znrec {

// True iff every diagonal entry of the reduced Gram is 1. A positive-definite
// integral Gram with unit diagonal is the identity (Cauchy-Schwarz forces
// |G_ij| < 1 off the diagonal), so a nonzero off-diagonal entry here means the
// input was not a valid reduction output.
inline bool check_zn_success(const GramMatrix& reduced) {
    const int n = reduced.n();
    for (int i = 0; i < n; ++i)
        if (reduced(i, i) != 1) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && sgn(reduced(i, j)) != 0)
                throw std::invalid_argument(
                    "check_zn_success: unit diagonal with nonzero off-diagonal entry");
    return true;
}

inline bool check_zn_success(const ReductionResult& r) {
    return check_zn_success(r.reduced);
}

// True iff original^{-1} * recovered is a signed permutation matrix.
inline bool verify_signed_perm_equivalence(const IntegerMatrix& original,
                                           const IntegerMatrix& recovered) {
    if (!original.is_square() || !recovered.is_square() ||
        original.rows() != recovered.rows())
        throw DimensionError("verify_signed_perm_equivalence: shape mismatch");
    if (abs(det_exact(recovered)) != 1)
        throw NotUnimodularError("verify_signed_perm_equivalence: recovered not unimodular");
    IntegerMatrix q = unimodular_inverse(original) * recovered;  // throws if original isn't
    return is_signed_permutation(q);
}

enum class AttackOutcome { Solved, Exhausted, Timeout };

inline const char* to_string(AttackOutcome o) {
    switch (o) {
        case AttackOutcome::Solved: return "solved";
        case AttackOutcome::Exhausted: return "exhausted";
        case AttackOutcome::Timeout: return "timeout";
    }
    return "?";
}

struct AttackReport {
    bool success = false;
    std::string stage_of_success;  // empty unless success
    IntegerMatrix recovered_transform;  // U with U * G * U^t = I on success
    IntegerMatrix recovered_basis;      // U^{-1}; its Gram is the input G
    std::optional<bool> equivalence_verified;
    double total_seconds = 0.0;
    std::vector<StageTrace> trace;
    AttackOutcome outcome = AttackOutcome::Exhausted;
};

struct AttackOptions {
    std::vector<int> schedule = {3, 4, 5};  // BKZ block sizes after LLL
    double delta = 0.99;
    double timeout_seconds = 0.0;  // 0 = no limit
    bool early_exit_per_round = false;
    int enum_cap = 30;
    int max_rounds = 64;
    int deep_depth = 8;   // deep-insertion window for every reduction stage
};

// The testing pipeline: check the input, run LLL, then BKZ at each scheduled
// block size, stopping at the first stage whose output Gram is the identity.
inline AttackReport run_attack_pipeline(const GramMatrix& gram,
                                        const AttackOptions& opts = {},
                                        const IntegerMatrix* original = nullptr) {
    auto start = std::chrono::steady_clock::now();
    Deadline deadline = opts.timeout_seconds > 0
                            ? Deadline::after_seconds(opts.timeout_seconds)
                            : Deadline::never();
    AttackReport report;
    const int n = gram.n();
    GramMatrix current = gram;
    IntegerMatrix u_total = IntegerMatrix::identity(n);

    auto finish = [&](AttackOutcome outcome, const std::string& stage) {
        report.outcome = outcome;
        report.success = outcome == AttackOutcome::Solved;
        report.stage_of_success = report.success ? stage : "";
        report.recovered_transform = u_total;
        if (report.success) {
            report.recovered_basis = unimodular_inverse(u_total);
            if (original)
                report.equivalence_verified =
                    verify_signed_perm_equivalence(*original, report.recovered_basis);
        }
        report.total_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return report;
    };

    if (check_zn_success(current)) return finish(AttackOutcome::Solved, "input");

    ReductionOptions ropts;
    ropts.delta = opts.delta;
    ropts.deadline = deadline;
    ropts.enum_cap = opts.enum_cap;
    ropts.max_rounds = opts.max_rounds;
    ropts.deep_depth = opts.deep_depth;

    {
        ReductionResult res = lll_reduce_gram(current, ropts);
        u_total = res.transform * u_total;
        current = res.reduced;
        for (auto& t : res.trace) report.trace.push_back(t);
        if (res.timed_out) return finish(AttackOutcome::Timeout, "");
        if (check_zn_success(current)) return finish(AttackOutcome::Solved, "lll");
    }

    for (int beta : opts.schedule) {
        const std::string stage = "bkz-" + std::to_string(beta);
        const int chunks = opts.early_exit_per_round ? opts.max_rounds : 1;
        ReductionOptions stage_opts = ropts;
        stage_opts.max_rounds = opts.early_exit_per_round ? 1 : opts.max_rounds;
        bool solved = false, timed_out = false;
        for (int chunk = 0; chunk < chunks; ++chunk) {
            ReductionResult res = bkz_reduce_gram(current, beta, stage_opts);
            u_total = res.transform * u_total;
            current = res.reduced;
            for (auto& t : res.trace) report.trace.push_back(t);
            if (res.timed_out) {
                timed_out = true;
                break;
            }
            if (check_zn_success(current)) {
                solved = true;
                break;
            }
            if (res.converged) break;
        }
        if (timed_out) return finish(AttackOutcome::Timeout, "");
        if (solved) return finish(AttackOutcome::Solved, stage);
    }
    return finish(AttackOutcome::Exhausted, "");
}

// Gram matrix of the E8 root lattice (Cartan matrix): determinant 1, minimum
// norm 2, so no basis of norm-1 vectors exists.
inline IntegerMatrix e8_gram() {
    IntegerMatrix g(8, 8);
    for (int i = 0; i < 8; ++i) g(i, i) = 2;
    auto link = [&](int a, int b) {
        g(a - 1, b - 1) = -1;
        g(b - 1, a - 1) = -1;
    };
    link(1, 3);
    link(3, 4);
    link(4, 5);
    link(5, 6);
    link(6, 7);
    link(7, 8);
    link(2, 4);
    return g;
}

}  // namespace znrec
