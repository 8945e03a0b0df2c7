#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bdp/boundary.hpp"
#include "bdp/state.hpp"
#include "bdp/triple.hpp"

using namespace bdp;

TEST_CASE("linear rates") {
    BirthDeathRates r = BirthDeathRates::linear();
    CHECK(r.a(0) == 0.0);
    CHECK(r.q(0) == 1.0);
    CHECK(r.q(1) == 2.0);
    CHECK(r.a(5) == 1.0);
}

TEST_CASE("geometric regular rates match the scale and speed closed forms") {
    BirthDeathRates r = BirthDeathRates::geometric_regular(4.0);
    CHECK(r.b(3) == 64.0);
    CHECK(r.a(3) == 32.0);
    ScaleSpeedTable t = scale_speed(r, 40);
    for (std::int64_t k = 0; k <= 40; ++k) {
        CHECK(t.mu[k] == doctest::Approx(std::pow(2.0, -double(k))).epsilon(1e-14));
        CHECK(t.c[k] == doctest::Approx(1.0 - std::pow(2.0, -double(k))).epsilon(1e-14));
    }
    CHECK(t.c_inf.kind == CInfEstimate::Kind::Finite);
    CHECK(t.c_inf.value == 1.0);
}

TEST_CASE("geometric exit rates have unit speed and finite scale limit") {
    BirthDeathRates r = BirthDeathRates::geometric_exit(2.0);
    ScaleSpeedTable t = scale_speed(r, 30);
    for (std::int64_t k = 0; k <= 30; ++k) {
        CHECK(t.mu[k] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(t.c[k] == doctest::Approx(1.0 - std::pow(2.0, -double(k))).epsilon(1e-13));
    }
    CHECK(t.c_inf.kind == CInfEstimate::Kind::Finite);
    CHECK(t.c_inf.value == doctest::Approx(1.0));
}

TEST_CASE("linear scale speed is the constant recursion") {
    ScaleSpeedTable t = scale_speed(BirthDeathRates::linear(), 4);
    for (int k = 0; k <= 4; ++k) {
        CHECK(t.mu[k] == 1.0);
        CHECK(t.c[k] == doctest::Approx(0.5 * k));
    }
    CHECK(t.c_inf.kind == CInfEstimate::Kind::Infinite);
}

TEST_CASE("scale increments satisfy the reciprocal identity on every family") {
    for (const BirthDeathRates& r :
         {BirthDeathRates::linear(), BirthDeathRates::geometric_regular(4.0),
          BirthDeathRates::geometric_exit(2.0),
          BirthDeathRates::table({0.0, 2.0, 3.0}, {1.0, 2.0, 1.5})}) {
        ScaleSpeedTable t = scale_speed(r, 24);
        for (std::int64_t k = 0; k + 1 <= 24; ++k) {
            double inc = t.c[k + 1] - t.c[k];
            CHECK(inc == doctest::Approx(1.0 / (2.0 * r.b(k) * t.mu[k])).epsilon(1e-12));
        }
    }
}

TEST_CASE("custom closed-form rates are probed and evaluated") {
    BirthDeathRates r = BirthDeathRates::custom(
        [](std::int64_t k) { return 1.0 + 0.5 * double(k); },
        [](std::int64_t k) { return 2.0 + double(k); }, "affine");
    CHECK(r.a(0) == 0.0);
    CHECK(r.a(2) == 2.0);
    CHECK(r.q(3) == doctest::Approx(2.5 + 5.0));
    ScaleSpeedTable t = scale_speed(r, 8);
    CHECK(t.mu[1] == doctest::Approx(2.0 / 1.5));

    CHECK_THROWS_AS(BirthDeathRates::custom([](std::int64_t k) { return double(k) - 3.0; },
                                            [](std::int64_t) { return 1.0; }),
                    NonPositiveRate);
}

TEST_CASE("rate table rejects nonpositive entries with the offending index") {
    CHECK_THROWS_AS(BirthDeathRates::table({0.0, 1.0, 1.0}, {1.0, 1.0, 0.0}),
                    NonPositiveRate);
    try {
        BirthDeathRates::table({0.0, 1.0, 1.0}, {1.0, 1.0, 0.0});
    } catch (const NonPositiveRate& e) {
        CHECK(e.k == 2);
        CHECK(e.which == 'b');
    }
    CHECK_THROWS_AS(BirthDeathRates::geometric_regular(1.0), MalformedDescriptor);
}

TEST_CASE("boundary classification of the three canonical families") {
    BoundaryClass reg = classify_boundary(BirthDeathRates::geometric_regular(4.0), 1e-8);
    CHECK(reg.kind == BoundaryKind::Regular);
    BoundaryClass exit = classify_boundary(BirthDeathRates::geometric_exit(2.0), 1e-8);
    CHECK(exit.kind == BoundaryKind::Exit);
    BoundaryClass nat = classify_boundary(BirthDeathRates::linear(), 1e-8);
    CHECK(nat.kind == BoundaryKind::Natural);

    // R for the regular fixture: sum 2^{-(k+1)} (2 - 2^{-k}) = 2 - 2/3
    CHECK(reg.R.value + reg.R.tail_bound ==
          doctest::Approx(2.0 - 2.0 / 3.0).epsilon(1e-8));
    // S: sum (1 - 2^{-k}) 2^{-k} = 2 - 4/3
    CHECK(reg.S.value + reg.S.tail_bound ==
          doctest::Approx(2.0 - 4.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("classification is stable for tolerances down to 1e-6 and below") {
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        CHECK(classify_boundary(BirthDeathRates::geometric_regular(4.0), tol).kind ==
              BoundaryKind::Regular);
        CHECK(classify_boundary(BirthDeathRates::geometric_exit(2.0), tol).kind ==
              BoundaryKind::Exit);
        CHECK(classify_boundary(BirthDeathRates::linear(), tol).kind == BoundaryKind::Natural);
    }
}

TEST_CASE("metric embedding values") {
    CHECK(metric_r(StatePoint::finite(0), StatePoint::finite(1)) == doctest::Approx(0.5));
    CHECK(metric_r(StatePoint::finite(9), StatePoint::infinity()) == doctest::Approx(0.1));
    CHECK(metric_r(StatePoint::finite(0), StatePoint::cemetery()) == doctest::Approx(2.0));
    CHECK(metric_r(StatePoint::infinity(), StatePoint::infinity()) == 0.0);
}

TEST_CASE("metric triangle inequality on sampled triples") {
    std::vector<StatePoint> pts;
    for (std::int64_t k = 0; k < 12; ++k) pts.push_back(StatePoint::finite(k * k));
    pts.push_back(StatePoint::infinity());
    pts.push_back(StatePoint::cemetery());
    for (const StatePoint& x : pts)
        for (const StatePoint& y : pts)
            for (const StatePoint& z : pts)
                CHECK(metric_r(x, z) <= metric_r(x, y) + metric_r(y, z) + 1e-15);
}

TEST_CASE("nu measures: masses and tails") {
    NuMeasure geo = NuMeasure::geometric(1.0, 0.5);
    CHECK(geo.at(3) == doctest::Approx(0.125));
    CHECK(geo.total_mass().value == doctest::Approx(2.0));
    CHECK(geo.tail_mass(4).value == doctest::Approx(0.125));

    NuMeasure table = NuMeasure::finite_table({1.0, 0.5});
    CHECK(table.total_mass().value == 1.5);
    CHECK(table.finite_support_end().has_value());

    NuMeasure heavy = NuMeasure::power_tail(1.0, 1.0);
    CHECK_FALSE(heavy.total_mass().finite);

    NuMeasure light = NuMeasure::power_tail(1.0, 2.0);
    NuMeasure::Mass m = light.total_mass();
    CHECK(m.finite);
    // zeta(2) = pi^2 / 6
    CHECK(std::fabs(m.value - 1.6449340668482264) <= m.bound + 1e-10);
}

TEST_CASE("admissibility on the regular fixture") {
    BirthDeathRates rates = BirthDeathRates::geometric_regular(4.0);
    BoundaryClass bc = classify_boundary(rates, 1e-8);

    ParameterTriple reduced(1.0, 0.0, NuMeasure::zero());
    AdmissibilityReport rep = check_admissible(reduced, rates, bc, 1e-10);
    CHECK_FALSE(rep.mass_beta_nonzero);
    CHECK_FALSE(rep.admissible);
    CHECK(rep.reduced_minimal);

    ParameterTriple reflecting(0.0, 1.0, NuMeasure::zero());
    rep = check_admissible(reflecting, rates, bc, 1e-10);
    CHECK(rep.admissible);
    CHECK(rep.b1_value == 0.0);

    ParameterTriple doob(0.0, 0.0, NuMeasure::geometric(1.0, 0.5));
    rep = check_admissible(doob, rates, bc, 1e-10);
    CHECK(rep.admissible);
    CHECK(rep.b1_finite);
}

TEST_CASE("admissibility rejects reflection on an exit boundary") {
    BirthDeathRates rates = BirthDeathRates::geometric_exit(2.0);
    BoundaryClass bc = classify_boundary(rates, 1e-8);
    ParameterTriple t(0.0, 1.0, NuMeasure::geometric(1.0, 0.5));
    AdmissibilityReport rep = check_admissible(t, rates, bc, 1e-10);
    CHECK_FALSE(rep.b4_ok);
    CHECK_FALSE(rep.admissible);
}

TEST_CASE("infinite-mass nu can still satisfy the double-sum condition") {
    BirthDeathRates rates = BirthDeathRates::geometric_regular(4.0);
    BoundaryClass bc = classify_boundary(rates, 1e-8);
    ParameterTriple t(0.0, 0.0, NuMeasure::power_tail(1.0, 0.5));
    AdmissibilityReport rep = check_admissible(t, rates, bc, 1e-10);
    CHECK(rep.b1_finite);
    CHECK(rep.admissible);
}

TEST_CASE("double sum partials are monotone and bracketed by the bound") {
    BirthDeathRates rates = BirthDeathRates::geometric_regular(4.0);
    BoundaryClass bc = classify_boundary(rates, 1e-8);
    ParameterTriple t(0.5, 0.0, NuMeasure::geometric(1.0, 0.5));
    AdmissibilityReport rep = check_admissible(t, rates, bc, 1e-12);
    for (std::int64_t len : {8, 16, 32, 64}) {
        double lo = b1_partial_sum(t, rates, len);
        double hi = b1_partial_sum(t, rates, 2 * len);
        CHECK(lo <= hi + 1e-15);
        CHECK(hi <= rep.b1_value + rep.b1_bound + 1e-12);
    }
}

TEST_CASE("series certification verdicts") {
    SeriesSum geo = sum_series(
        [](std::int64_t k) { return std::optional<double>(std::pow(0.5, double(k))); }, 1 << 16,
        1e-10);
    CHECK(geo.verdict == SeriesVerdict::Converged);
    CHECK(geo.value + geo.tail_bound == doctest::Approx(2.0).epsilon(1e-9));

    SeriesSum harmonic = sum_series(
        [](std::int64_t k) { return std::optional<double>(1.0 / double(k + 1)); }, 1 << 16,
        1e-10);
    CHECK(harmonic.verdict == SeriesVerdict::Divergent);

    SeriesSum finite = sum_series(
        [](std::int64_t k) -> std::optional<double> {
            if (k >= 3) return std::nullopt;
            return 1.0;
        },
        1 << 16, 1e-10);
    CHECK(finite.verdict == SeriesVerdict::Converged);
    CHECK(finite.value == 3.0);
    CHECK(finite.tail_bound == 0.0);
}
