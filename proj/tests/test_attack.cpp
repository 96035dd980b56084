#include "znrec/attack.hpp"
#include "znrec/generators.hpp"

#include <catch2/catch.hpp>

#include "oracles.hpp"

#include <numeric>

using namespace znrec;

namespace {

IntegerMatrix random_signed_perm(int n, RngStream& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < n - 1; ++i) {
        int j = i + static_cast<int>(rng.uniform_below(n - i));
        std::swap(perm[i], perm[j]);
    }
    IntegerMatrix q(n, n);
    for (int i = 0; i < n; ++i) q(i, perm[i]) = rng.sign_bit();
    return q;
}

IntegerMatrix generator_instance(int kind, int n, std::uint64_t seed) {
    RngStream rng(seed);
    switch (kind % 6) {
        case 0: return gen_box_rejection(std::min(n, 4), 1, rng).matrix;
        case 1: return gen_unipotent_product(n, 2, 3 * n, rng).matrix;
        case 2: return gen_embedded_product(std::max(n, 4), 2, 1, 2 * n, rng).matrix;
        case 3: return gen_silverman(n, 2, rng).matrix;
        case 4: return gen_hnf(n, n + 1, 3, rng).matrix;
        default: return gen_drs(n % 2 == 0 ? n : n + 1, 2, rng).matrix;
    }
}

}  // namespace

TEST_CASE("check_zn_success") {
    CHECK(check_zn_success(GramMatrix(IntegerMatrix::identity(4))));
    CHECK_FALSE(check_zn_success(GramMatrix(IntegerMatrix{{2, 1}, {1, 1}})));
    // unit diagonal with a nonzero off-diagonal entry cannot come from a
    // positive-definite reduction output
    CHECK_THROWS_AS(check_zn_success(GramMatrix(IntegerMatrix{{1, 2}, {2, 1}})),
                    std::invalid_argument);
}

TEST_CASE("signed permutation Grams succeed at the input check") {
    RngStream rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        IntegerMatrix q = random_signed_perm(6, rng);
        auto rep_out = run_attack_pipeline(GramMatrix::from_basis(q), {}, &q);
        CHECK(rep_out.success);
        CHECK(rep_out.stage_of_success == "input");
        REQUIRE(rep_out.equivalence_verified.has_value());
        CHECK(*rep_out.equivalence_verified);
    }
    auto rep_id = run_attack_pipeline(GramMatrix(IntegerMatrix::identity(5)));
    CHECK(rep_id.success);
    CHECK(rep_id.stage_of_success == "input");
    CHECK(rep_id.recovered_transform.is_identity());
}

TEST_CASE("E8 Gram is a hard negative control") {
    IntegerMatrix e8 = e8_gram();
    CHECK(det_exact(e8) == 1);
    auto rep = run_attack_pipeline(GramMatrix(e8));
    CHECK_FALSE(rep.success);
    CHECK(rep.outcome == AttackOutcome::Exhausted);
    CHECK(rep.stage_of_success.empty());
    // min norm of the root lattice is 2: no stage may claim unit vectors
    for (const auto& t : rep.trace) CHECK(t.min_diag == 2);
}

TEST_CASE("scaled identity never succeeds") {
    IntegerMatrix two_i = IntegerMatrix::identity(6);
    for (int i = 0; i < 6; ++i) two_i(i, i) = 2;
    auto g = gram_of(two_i);  // 4 * I
    auto rep = run_attack_pipeline(GramMatrix(g));
    CHECK_FALSE(rep.success);
    CHECK(rep.outcome == AttackOutcome::Exhausted);
}

TEST_CASE("pipeline soundness: success implies signed-permutation equivalence") {
    for (int s = 0; s < 18; ++s) {
        int n = 4 + (s % 3) * 4;  // 4, 8, 12
        IntegerMatrix m = generator_instance(s, n, 4000 + s);
        GramMatrix g = GramMatrix::from_basis(m);
        AttackReport rep = run_attack_pipeline(g, {}, &m);
        REQUIRE(rep.success);  // desk-scale instances must fall
        REQUIRE(rep.equivalence_verified.has_value());
        CHECK(*rep.equivalence_verified);
        // exact transform consistency
        IntegerMatrix check = rep.recovered_transform * g.matrix() *
                              rep.recovered_transform.transposed();
        CHECK(check.is_identity());
        CHECK(verify_signed_perm_equivalence(m, rep.recovered_basis));
    }
}

TEST_CASE("schedule extension preserves success") {
    for (int s = 0; s < 6; ++s) {
        IntegerMatrix m = generator_instance(s, 8, 6100 + s);
        GramMatrix g = GramMatrix::from_basis(m);
        AttackOptions small;
        small.schedule = {3};
        AttackReport first = run_attack_pipeline(g, small);
        if (!first.success) continue;
        AttackOptions ext;
        ext.schedule = {3, 4, 5};
        AttackReport second = run_attack_pipeline(g, ext);
        CHECK(second.success);
        CHECK(second.stage_of_success == first.stage_of_success);
    }
}

TEST_CASE("timeout is reported distinctly from exhaustion") {
    RngStream rng(31);
    auto rec = gen_drs(32, 4, rng);
    AttackOptions opts;
    opts.timeout_seconds = 1e-9;
    AttackReport rep = run_attack_pipeline(GramMatrix::from_basis(rec.matrix), opts);
    CHECK_FALSE(rep.success);
    CHECK(rep.outcome == AttackOutcome::Timeout);

    AttackOptions no_blocks;
    no_blocks.schedule = {};
    AttackReport rep2 =
        run_attack_pipeline(GramMatrix(e8_gram()), no_blocks);
    CHECK(rep2.outcome == AttackOutcome::Exhausted);
}

TEST_CASE("verify_signed_perm_equivalence") {
    RngStream rng(91);
    for (int rep = 0; rep < 10; ++rep) {
        IntegerMatrix m = gen_silverman(5, 2, rng).matrix;
        IntegerMatrix q = random_signed_perm(5, rng);
        CHECK(verify_signed_perm_equivalence(m, m * q));
        IntegerMatrix shear{{1, 1, 0, 0, 0},
                            {0, 1, 0, 0, 0},
                            {0, 0, 1, 0, 0},
                            {0, 0, 0, 1, 0},
                            {0, 0, 0, 0, 1}};
        CHECK_FALSE(verify_signed_perm_equivalence(m, m * shear));
    }
    IntegerMatrix not_unimodular{{2, 0}, {0, 1}};
    CHECK_THROWS_AS(
        verify_signed_perm_equivalence(IntegerMatrix::identity(2), not_unimodular),
        NotUnimodularError);
}

TEST_CASE("early exit per round finds the same successes") {
    for (int s = 0; s < 4; ++s) {
        IntegerMatrix m = generator_instance(s + 2, 8, 7100 + s);
        GramMatrix g = GramMatrix::from_basis(m);
        AttackOptions eager;
        eager.early_exit_per_round = true;
        AttackReport a = run_attack_pipeline(g, eager);
        AttackReport b = run_attack_pipeline(g);
        CHECK(a.success == b.success);
    }
}
