#include <doctest.h>

#include <algorithm>
#include <set>

#include "mcone/distance_matrix.hpp"
#include "mcone/rng.hpp"
#include "test_support.hpp"

using namespace mcone;
using mcone_test::oracle_is_distance_matrix;
using mcone_test::random_admissible_row;
using mcone_test::random_chain_metric;
using mcone_test::random_euclidean_metric;

TEST_CASE("validate: zero matrix is a distance matrix") {
    const std::vector<std::vector<double>> zero(3, std::vector<double>(3, 0.0));
    CHECK(validate_full(zero).ok());
    CHECK(DistanceMatrix::from_full(zero).geometric_rank() == 1);
}

TEST_CASE("validate: equilateral unit triangle") {
    const std::vector<std::vector<double>> unit{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    CHECK(validate_full(unit).ok());
}

TEST_CASE("validate: triangle violation is reported with its triple") {
    const std::vector<std::vector<double>> bad{{0, 1, 1}, {1, 0, 3}, {1, 3, 0}};
    ValidationReport report = validate_full(bad);
    CHECK_FALSE(report.ok());
    bool found = false;
    for (const auto& v : report.violations) {
        if (v.kind == ViolationKind::Triangle) {
            // 1 + 1 < 3 for the pair (1,2) through point 0
            CHECK(v.slack == doctest::Approx(1.0));
            if (v.k == 0) found = true;
        }
    }
    CHECK(found);
    CHECK_THROWS_AS(DistanceMatrix::from_full(bad), ConstraintError);
}

TEST_CASE("validate: structural and value errors") {
    CHECK_FALSE(validate_full({{0, 1}, {1, 0, 2}}).ok());
    CHECK_THROWS_AS(DistanceMatrix::from_full({{0, 1}, {1, 0, 2}}), StructuralError);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(DistanceMatrix::from_full({{0, nan}, {nan, 0}}), ValueError);
    CHECK_THROWS_AS(DistanceMatrix::from_full({{0, -1}, {-1, 0}}), ValueError);
    CHECK_FALSE(validate_full({{0, 1}, {2, 0}}).ok());  // asymmetric
}

TEST_CASE("validate agrees with the brute-force oracle on random candidates") {
    Rng rng(12345);
    int valid_seen = 0, invalid_seen = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 2 + rng.uniform_int(5);  // orders 2..6
        // start from a Euclidean metric, then perturb so both verdicts occur
        DistanceMatrix base = random_euclidean_metric(n, rng);
        std::vector<std::vector<double>> full = base.to_full();
        const int edits = rng.uniform_int(3);
        for (int e = 0; e < edits; ++e) {
            const int i = rng.uniform_int(n);
            const int j = rng.uniform_int(n);
            if (i == j) continue;
            const double bump = rng.uniform(-0.4, 0.6);
            full[i][j] = full[j][i] = std::max(0.0, full[i][j] + bump);
        }
        const bool oracle = oracle_is_distance_matrix(full, 1e-9);
        const bool lib = validate_full(full, 1e-9).ok();
        CHECK(lib == oracle);
        (oracle ? valid_seen : invalid_seen)++;
    }
    // the generator must actually exercise both sides
    CHECK(valid_seen > 1000);
    CHECK(invalid_seen > 1000);
}

TEST_CASE("is_admissible: two-point examples") {
    DistanceMatrix r = DistanceMatrix::from_upper(2, {1.0});
    CHECK(is_admissible(r, std::vector<double>{1.0, 1.0}));
    ValidationReport report = check_admissible(r, std::vector<double>{0.2, 0.2});
    CHECK_FALSE(report.ok());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations.front().kind == ViolationKind::SumBound);
}

TEST_CASE("is_admissible: the unit-triangle center vector") {
    DistanceMatrix unit3 = DistanceMatrix::from_upper(3, {1, 1, 1});
    CHECK(is_admissible(unit3, std::vector<double>{0.5, 0.5, 0.5}));
    CHECK(is_admissible(unit3, std::vector<double>{1.5, 0.5, 0.5}));
}

TEST_CASE("is_admissible: length mismatch is structural") {
    DistanceMatrix r = DistanceMatrix::from_upper(2, {1.0});
    ValidationReport report = check_admissible(r, std::vector<double>{1.0});
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations.front().kind == ViolationKind::LengthMismatch);
}

TEST_CASE("extend: examples") {
    DistanceMatrix r = DistanceMatrix::from_upper(2, {1.0});
    DistanceMatrix e = r.extended(std::vector<double>{1.0, 1.0});
    CHECK(e.order() == 3);
    CHECK(e == DistanceMatrix::from_upper(3, {1, 1, 1}));

    DistanceMatrix point = DistanceMatrix::zero(1);
    DistanceMatrix pair = point.extended(std::vector<double>{5.0});
    CHECK(pair(0, 1) == 5.0);

    DistanceMatrix unit3 = DistanceMatrix::from_upper(3, {1, 1, 1});
    DistanceMatrix four = unit3.extended(std::vector<double>{1.5, 0.5, 0.5});
    CHECK(validate_upper(four.order(), four.upper()).ok());

    CHECK_THROWS_AS(r.extended(std::vector<double>{0.2, 0.2}), ConstraintError);
}

TEST_CASE("nw_corner and extend round-trip exactly") {
    Rng rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + rng.uniform_int(6);
        DistanceMatrix r = random_chain_metric(n, rng);
        std::vector<double> a = random_admissible_row(r, rng);
        REQUIRE(is_admissible(r, a));
        DistanceMatrix e = r.extended(a);
        CHECK(e.nw_corner(n) == r);  // bit-exact
        CHECK(validate_upper(e.order(), e.upper()).ok());
    }
    DistanceMatrix m = random_chain_metric(4, rng);
    CHECK(m.nw_corner(4) == m);
    CHECK(m.nw_corner(2).upper() == std::vector<double>{m(0, 1)});
    CHECK_THROWS_AS(m.nw_corner(0), StructuralError);
    CHECK_THROWS_AS(m.nw_corner(5), StructuralError);
}

TEST_CASE("nw_shift: examples and validity") {
    DistanceMatrix unit3 = DistanceMatrix::from_upper(3, {1, 1, 1});
    CHECK(unit3.nw_shift() == DistanceMatrix::from_upper(2, {1.0}));

    DistanceMatrix pair = DistanceMatrix::from_upper(2, {3.5});
    CHECK(pair.nw_shift().order() == 1);

    CHECK_THROWS_AS(DistanceMatrix::zero(1).nw_shift(), StructuralError);

    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        DistanceMatrix r = random_chain_metric(2 + rng.uniform_int(6), rng);
        DistanceMatrix s = r.nw_shift();
        CHECK(s.order() == r.order() - 1);
        CHECK(validate_upper(s.order(), s.upper()).ok());
        for (int j = 2; j < r.order(); ++j)
            for (int i = 1; i < j; ++i) CHECK(s(i - 1, j - 1) == r(i, j));
    }
}

TEST_CASE("geometric_rank: examples and permutation invariance") {
    CHECK(DistanceMatrix::zero(5).geometric_rank() == 1);

    Rng rng(99);
    DistanceMatrix true_metric = random_euclidean_metric(6, rng);
    CHECK(true_metric.geometric_rank() == 6);
    CHECK(true_metric.is_true_metric());

    for (const auto& ray : extremal_rays(4)) {
        CHECK(ray.generator.geometric_rank() == 2);
    }

    // invariance under simultaneous permutation
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + rng.uniform_int(5);
        DistanceMatrix r = (trial % 2 == 0) ? random_chain_metric(n, rng)
                                            : extremal_rays(n)[rng.uniform_int((1 << (n - 1)) - 1)]
                                                  .generator;
        std::vector<int> perm;
        rng.shuffle_indices(perm, n);
        CHECK(r.permuted(perm).geometric_rank() == r.geometric_rank());
    }
}

TEST_CASE("extremal_rays: counts, validity, scaling") {
    CHECK_THROWS_AS(extremal_rays(1), StructuralError);

    auto rays2 = extremal_rays(2);
    REQUIRE(rays2.size() == 1);
    CHECK(rays2[0].generator == DistanceMatrix::from_upper(2, {1.0}));

    CHECK(extremal_rays(3).size() == 3);

    for (int n = 2; n <= 8; ++n) {
        auto rays = extremal_rays(n);
        CHECK(rays.size() == (std::size_t{1} << (n - 1)) - 1);
        std::set<std::vector<double>> distinct;
        for (const auto& ray : rays) {
            distinct.insert(ray.generator.upper());
            CHECK(validate_upper(n, ray.generator.upper()).ok());
            CHECK(ray.generator.geometric_rank() == 2);
            for (double lambda : {0.0, 0.5, 1.0, 10.0}) {
                std::vector<double> scaled = ray.generator.upper();
                for (double& v : scaled) v *= lambda;
                CHECK(validate_upper(n, scaled).ok());
            }
        }
        CHECK(distinct.size() == rays.size());  // pairwise distinct as matrices
    }
}

TEST_CASE("amalgamation_interval: worked examples") {
    DistanceMatrix point = DistanceMatrix::zero(1);
    Interval i1 = amalgamation_interval(std::vector<double>{3.0}, std::vector<double>{4.0}, point);
    CHECK(i1.lo == doctest::Approx(1.0));
    CHECK(i1.hi == doctest::Approx(7.0));

    // identical extensions can be glued at distance zero
    DistanceMatrix unit2 = DistanceMatrix::from_upper(2, {1.0});
    Interval i2 = amalgamation_interval(std::vector<double>{1.0, 1.0},
                                        std::vector<double>{1.0, 1.0}, unit2);
    CHECK(i2.lo == doctest::Approx(0.0));
    CHECK(i2.hi == doctest::Approx(2.0));

    CHECK_THROWS_AS(
        amalgamation_interval(std::vector<double>{0.1, 0.1}, std::vector<double>{1.0, 1.0}, unit2),
        ConstraintError);
}

TEST_CASE("amalgamation: every h in the interval glues to a valid matrix") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + rng.uniform_int(5);
        DistanceMatrix shared = random_chain_metric(n, rng);
        std::vector<double> a = random_admissible_row(shared, rng);
        std::vector<double> b = random_admissible_row(shared, rng);
        Interval iv = amalgamation_interval(a, b, shared);
        REQUIRE(iv.lo <= iv.hi);
        for (int g = 0; g < 100; ++g) {
            const double h = iv.lo + (iv.hi - iv.lo) * g / 99.0;
            DistanceMatrix glued = amalgamate(shared, a, b, h);
            CHECK(glued.order() == n + 2);
            CHECK(validate_upper(glued.order(), glued.upper()).ok());
        }
        // endpoints are included; just outside must fail when the interval is proper
        if (iv.hi - iv.lo > 1e-6) {
            std::vector<double> bad_b = b;
            bad_b.push_back(iv.hi + 1e-3);
            DistanceMatrix first = shared.extended(a);
            CHECK_FALSE(is_admissible(first, bad_b));
        }
    }
}

TEST_CASE("column-major packed storage matches the documented layout") {
    // upper = [r12, r13, r23, r14, r24, r34]
    DistanceMatrix m = DistanceMatrix::from_upper(4, {1, 2, 1.5, 2.5, 1.8, 1.2});
    CHECK(m(0, 1) == 1.0);
    CHECK(m(0, 2) == 2.0);
    CHECK(m(1, 2) == 1.5);
    CHECK(m(0, 3) == 2.5);
    CHECK(m(1, 3) == 1.8);
    CHECK(m(2, 3) == 1.2);
    CHECK(m(3, 2) == 1.2);  // symmetric access
    CHECK(m(2, 2) == 0.0);  // diagonal is implicit
}
