#include <doctest.h>

#include <memory>

#include <Eigen/Dense>

#include "hdx/complex.hpp"
#include "hdx/error.hpp"
#include "hdx/strips.hpp"
#include "hdx/walks.hpp"

using namespace hdx;

namespace {

ComplexPtr make(Complex cx) { return std::make_shared<Complex>(std::move(cx)); }

} // namespace

TEST_CASE("product formula for canonical down positions") {
    // N^j_k has downs at j+s, giving C(k,l)/C(k+j,l)
    const int k = 3, j = 1;
    std::vector<int> downs = {j + 1};
    const double expected[] = {1.0, 0.75, 0.5, 0.25};
    for (int ell = 0; ell <= 3; ++ell)
        CHECK(pure_walk_lambda(k, downs, ell) == doctest::Approx(expected[ell]).epsilon(1e-14));

    // general j: match the closed form
    for (int kk = 2; kk <= 5; ++kk)
        for (int jj = 0; jj <= 3; ++jj) {
            std::vector<int> dp;
            for (int s = 1; s <= jj; ++s) dp.push_back(jj + s);
            for (int ell = 0; ell <= kk; ++ell)
                CHECK(pure_walk_lambda(kk, dp, ell) ==
                      doctest::Approx(binomial(kk, ell) / binomial(kk + jj, ell)).epsilon(1e-12));
        }
}

TEST_CASE("product formula for the lower walk") {
    // U^k_j D^k_j has downs first: i_s = s; C(j,l)/C(k,l) for l <= j, 0 above
    const int k = 4, j = 2;
    std::vector<int> downs = {1, 2};
    CHECK(pure_walk_lambda(k, downs, 1) == doctest::Approx(0.5).epsilon(1e-14)); // C(2,1)/C(4,1)
    CHECK(pure_walk_lambda(k, downs, j + 1) == doctest::Approx(0.0).epsilon(1e-14));
    for (int ell = 0; ell <= j; ++ell)
        CHECK(pure_walk_lambda(k, downs, ell) ==
              doctest::Approx(binomial(j, ell) / binomial(k, ell)).epsilon(1e-13));
}

TEST_CASE("walk lambdas") {
    auto j125 = make(complete_complex(12, 5));
    HDWalk id = identity_walk(j125, 3);
    CHECK((walk_lambdas(id).array() - 1.0).abs().maxCoeff() < 1e-14);

    // swap closed form: S^2_4 -> (1, 1/2, 1/6, 0, 0)
    HDWalk s24 = swap_walk(make(complete_complex(16, 6)), 4, 2);
    Eigen::VectorXd ls = walk_lambdas(s24);
    const double expected[] = {1.0, 0.5, 1.0 / 6, 0.0, 0.0};
    for (int i = 0; i <= 4; ++i) CHECK(ls[i] == doctest::Approx(expected[i]).epsilon(1e-13));

    // affine combination: 0.5 N^1_3 + 0.5 N^2_3 at l=1 -> 0.675
    Word w1 = word_from_string("UD");
    Word w2 = word_from_string("UUDD");
    HDWalk combo = hd_walk(j125, 3, {{0.5, w1}, {0.5, w2}}, true);
    CHECK(walk_lambdas(combo)[1] == doctest::Approx(0.675).epsilon(1e-13));
    CHECK(walk_lambdas(combo)[0] == doctest::Approx(1.0).epsilon(1e-14));

    // lambdas are complex independent: same spec on a sparsification
    auto sp = make(sparsified_complex(12, 5, 0.8, 6));
    HDWalk combo_sp = hd_walk(sp, 3, {{0.5, w1}, {0.5, w2}}, true);
    CHECK((walk_lambdas(combo) - walk_lambdas(combo_sp)).cwiseAbs().maxCoeff() == 0.0);

    // hypergeometric swap terms sum to the closed form
    auto j105 = make(complete_complex(10, 5));
    HDWalk ajt = swap_walk_ajt(j105, 3, 2);
    Eigen::VectorXd from_terms = Eigen::VectorXd::Zero(4);
    for (const auto& t : ajt.terms())
        for (int ell = 0; ell <= 3; ++ell)
            from_terms[ell] += t.coeff * pure_walk_lambda(3, t.down_positions, ell);
    CHECK((from_terms - walk_lambdas(ajt)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("measured residuals vanish for the identity and for constants") {
    auto j83 = make(complete_complex(8, 3));
    HDWalk id = identity_walk(j83, 2);
    Eigen::VectorXd c = measured_residuals(id, lifted_bases(*j83, 2));
    CHECK(c.maxCoeff() < 1e-12);

    HDWalk n = canonical_walk(j83, 2, 1);
    Eigen::VectorXd cn = measured_residuals(n, lifted_bases(*j83, 2));
    CHECK(cn[0] < 1e-12); // constants are exact eigenvectors
    CHECK(cn.maxCoeff() > 0.0);
}

TEST_CASE("residuals scale with gamma on canonical walks") {
    // J(12,4), N^1_3: residual c_i = |exact - formula| = {0, 1/12, 1/9, 1/12}
    auto j124 = make(complete_complex(12, 4));
    HDWalk n13 = canonical_walk(j124, 3, 1);
    Eigen::VectorXd c = measured_residuals(n13, lifted_bases(*j124, 3));
    CHECK(c[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(c[1] == doctest::Approx(1.0 / 12).epsilon(1e-9));
    CHECK(c[2] == doctest::Approx(1.0 / 9).epsilon(1e-9));
    CHECK(c[3] == doctest::Approx(1.0 / 12).epsilon(1e-9));
}

TEST_CASE("stripping report on J(12,4)") {
    auto j124 = make(complete_complex(12, 4));
    HDWalk n13 = canonical_walk(j124, 3, 1);
    StripReport rep = stripping_report(n13);
    CHECK(rep.lambdas[0] == doctest::Approx(1.0));
    CHECK(static_cast<std::size_t>(rep.spectrum.size()) == j124->level_size(3));
    // exact spectrum {1, 2/3, 7/18, 1/6}; nearest-strip deviation is gamma
    CHECK(rep.max_deviation == doctest::Approx(1.0 / 9).epsilon(1e-9));
    CHECK(rep.bound_zhang == doctest::Approx(2.0 / 9).epsilon(1e-9));
    CHECK(rep.pass);
    // strip multiplicities are the Johnson eigenspace dimensions
    CHECK(rep.strips[0].count == 1);
    CHECK(rep.strips[1].count == 11);   // C(12,1) - C(12,0)
    CHECK(rep.strips[2].count == 54);   // C(12,2) - C(12,1)
    CHECK(rep.strips[3].count == 154);  // C(12,3) - C(12,2)
    int total = 0;
    for (const auto& s : rep.strips) total += s.count;
    CHECK(total == static_cast<int>(j124->level_size(3)));
    CHECK_FALSE(rep.merged);
}

TEST_CASE("lower walk strips at the top level d = k") {
    // J(12,3) leaves no room above level 3; the lower walk still strips,
    // with the Johnson eigenspace dimensions as multiplicities
    auto j123 = make(complete_complex(12, 3));
    StripReport rep = stripping_report(lower_walk_power(j123, 3, 1));
    const double expected[] = {1.0, 2.0 / 3, 1.0 / 3, 0.0};
    for (int i = 0; i <= 3; ++i)
        CHECK(rep.lambdas[i] == doctest::Approx(expected[i]).epsilon(1e-13));
    CHECK(rep.strips[0].count == 1);
    CHECK(rep.strips[1].count == 11);
    CHECK(rep.strips[2].count == 54);
    CHECK(rep.strips[3].count == 154);
    CHECK(rep.pass);
}

TEST_CASE("identity walk strips to a single point") {
    auto j62 = make(complete_complex(6, 2));
    StripReport rep = stripping_report(identity_walk(j62, 2));
    CHECK(rep.max_deviation < 1e-10);
    CHECK(rep.spectrum.minCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.merged); // all strip centers coincide at 1
}

TEST_CASE("stripping on a sparsified complex") {
    auto sp = make(sparsified_complex(10, 4, 0.8, 2));
    HDWalk s13 = swap_walk_ajt(sp, 3, 1);
    StripReport rep = stripping_report(s13);
    CHECK(rep.pass); // deviation within the measured Zhang bound (recorded run)
    CHECK(static_cast<std::size_t>(rep.assignment.size()) == sp->level_size(3));
}

TEST_CASE("st rank") {
    auto j166 = make(complete_complex(16, 6));
    HDWalk s24 = swap_walk(j166, 4, 2);
    // strips at (1, 1/2, 1/6, 0, 0)
    CHECK(st_rank_predicted(s24, 0.4) == 2);
    CHECK(st_rank_predicted(s24, 1.0) == 0);
    CHECK(st_rank_predicted(s24, 1.5) == 0);

    auto j83 = make(complete_complex(8, 3));
    auto r = st_rank(identity_walk(j83, 2), 0.5);
    CHECK(r.rank_predicted == 3);
    CHECK(r.rank_empirical == 1); // all eigenvalues sit in strip 0
}

TEST_CASE("swap depth bound on predicted ranks") {
    // R_delta(S^j_k) <= ln(1/delta)/(j/k) + 1
    auto j166 = make(complete_complex(16, 6));
    for (auto [k, j] : std::vector<std::pair<int, int>>{{4, 1}, {4, 2}, {6, 3}}) {
        HDWalk s = swap_walk(j166, k, j);
        for (double delta : {0.1, 0.3, 0.5}) {
            const double bound = std::log(1.0 / delta) / (static_cast<double>(j) / k) + 1.0;
            CHECK(st_rank_predicted(s, delta) <= bound);
        }
    }
}

TEST_CASE("monotone strip centers for complete walks") {
    auto j125 = make(complete_complex(12, 5));
    CHECK(monotonicity_check(canonical_walk(j125, 3, 2)).monotone);
    CHECK(monotonicity_check(swap_walk(j125, 3, 2)).monotone);
    CHECK(monotonicity_check(identity_walk(j125, 3)).monotone);
    CHECK(monotonicity_check(lower_walk_power(j125, 3, 2)).monotone);

    Word w1 = word_from_string("UD");
    Word w2 = word_from_string("UUDD");
    HDWalk convex = hd_walk(j125, 3, {{0.3, w1}, {0.7, w2}}, true);
    CHECK(monotonicity_check(convex).monotone);

    // 2 N^1_3 - N^2_3 leaves the walk polytope here: N^2 reaches
    // intersection-1 pairs that N^1 cannot, so those entries go negative
    CHECK_THROWS_AS(hd_walk(j125, 3, {{2.0, w1}, {-1.0, w2}}, false), Error);

    // a valid affine (non-convex) combination is checked and reported
    auto j32 = make(complete_complex(3, 2));
    HDWalk stretched = hd_walk(j32, 1, {{2.0, w1}, {-1.0, Word{}}}, false);
    CHECK_THROWS_AS(monotonicity_check(stretched), Error); // not declared complete
    HDWalk declared = hd_walk(j32, 1, {{2.0, w1}, {-1.0, Word{}}}, true);
    CHECK(monotonicity_check(declared).monotone); // (1, 0)
}

TEST_CASE("strip report json shape") {
    auto j62 = make(complete_complex(6, 2));
    StripReport rep = stripping_report(canonical_walk(j62, 1, 1));
    const std::string out = rep.to_json();
    CHECK(out.find("\"lambdas\"") != std::string::npos);
    CHECK(out.find("\"bound_zhang\"") != std::string::npos);
    CHECK(out.find("\"strips\"") != std::string::npos);
}
