#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bdp/mc.hpp"

using namespace bdp;

namespace {

BirthDeathRates gr4() { return BirthDeathRates::geometric_regular(4.0); }

ParameterTriple doob_geo(double gamma = 0.0) {
    return ParameterTriple(gamma, 0.0, NuMeasure::geometric(1.0, 0.5));
}

PathGenerator doob_generator(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                             const ParameterTriple& triple, double horizon) {
    return [&rates, &table, triple, horizon](std::uint64_t seed) {
        SimControls ctrl;
        ctrl.horizon = horizon;
        ctrl.rng_seed = seed;
        return simulate_doob(rates, table, triple, StatePoint::finite(0), ctrl);
    };
}

std::string path_csv(const CadlagPath& p) {
    std::ostringstream os;
    p.write_csv(os);
    return os.str();
}

}  // namespace

TEST_CASE("a single-path ensemble equals the direct simulator call") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    PathGenerator gen = doob_generator(rates, table, doob_geo(), 3.0);
    Ensemble e = run_ensemble(gen, 1, 42);
    CadlagPath direct = gen(RngStream::substream_seed(42, 0));
    CHECK(path_csv(e.paths[0]) == path_csv(direct));
}

TEST_CASE("ensembles are reproducible and thread-count independent") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    PathGenerator gen = doob_generator(rates, table, doob_geo(), 3.0);
    Ensemble a = run_ensemble(gen, 24, 7, 1);
    Ensemble b = run_ensemble(gen, 24, 7, 1);
    Ensemble c = run_ensemble(gen, 24, 7, 3);
    Ensemble d = run_ensemble(gen, 24, 7, 8);
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        std::string want = path_csv(a.paths[i]);
        CHECK(path_csv(b.paths[i]) == want);
        CHECK(path_csv(c.paths[i]) == want);
        CHECK(path_csv(d.paths[i]) == want);
    }
}

TEST_CASE("distinct master seeds decorrelate the first jump") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    PathGenerator gen = doob_generator(rates, table, doob_geo(), 3.0);
    int differing = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        Ensemble a = run_ensemble(gen, 1, trial);
        Ensemble b = run_ensemble(gen, 1, trial + 1000);
        double ta = a.paths[0].segments.size() > 1 ? a.paths[0].segments[1].t : -1.0;
        double tb = b.paths[0].segments.size() > 1 ? b.paths[0].segments[1].t : -1.0;
        if (ta != tb) ++differing;
    }
    CHECK(differing > 99 * 100 / 100 - 1);
}

TEST_CASE("constant and indicator statistics at time zero") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    Ensemble e = run_ensemble(doob_generator(rates, table, doob_geo(), 2.0), 64, 5);

    std::vector<double> times = {0.0, 1.0};
    std::vector<StateFunction> ones = {[](StatePoint) { return 1.0; },
                                       [](StatePoint) { return 1.0; }};
    FddEstimate est = empirical_fdd(e, times, ones);
    CHECK(est.estimate == 1.0);
    CHECK(est.halfwidth == 0.0);

    std::vector<double> zero = {0.0};
    std::vector<StateFunction> at_start = {
        [](StatePoint x) { return x.is_finite() && x.index() == 0 ? 1.0 : 0.0; }};
    FddEstimate start = empirical_fdd(e, zero, at_start);
    CHECK(start.estimate == 1.0);

    std::vector<double> beyond = {5.0};
    CHECK_THROWS_AS(empirical_fdd(e, beyond, at_start), HorizonExceeded);
}

TEST_CASE("small-time law agrees with the Laplace inversion oracle") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    ParameterTriple triple(0.0, 0.0, NuMeasure::dirac(0, 1.0));
    SolveControls sc;
    LaplaceCheckReport oracle = transition_laplace_check(rates, table, triple, 0, 0, 1.0, sc);
    double t = oracle.grid[3];

    Ensemble e = run_ensemble(doob_generator(rates, table, triple, 1.0), 2000, 99, 1);
    std::vector<double> times = {t};
    std::vector<StateFunction> fns = {
        [](StatePoint x) { return x.is_finite() && x.index() == 0 ? 1.0 : 0.0; }};
    FddEstimate est = empirical_fdd(e, times, fns);
    CHECK(std::fabs(est.estimate - oracle.phat[3]) < est.halfwidth + 5e-3);
}

TEST_CASE("surgery distances shrink with the return level") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    McOptions opt;
    opt.threads = 2;
    ConvergenceReport rep = dprime_as_convergence_experiment(rates, table, doob_geo(),
                                                             {2, 4, 8, 16}, 60, 10.0, 11, opt);
    CHECK(rep.verdict == Verdict::Pass);
    double prev = 1.0;
    for (const ConvergenceRow& row : rep.rows) {
        if (row.statistic != "median_dprime") continue;
        CHECK(row.estimate <= prev + 1e-12);
        prev = row.estimate;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("a target that dies at its first approach is surgery-invariant") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    ParameterTriple heavy_kill(1e12, 0.0, NuMeasure::dirac(0, 1.0));
    ConvergenceReport rep = dprime_as_convergence_experiment(rates, table, heavy_kill,
                                                             {2, 4, 8}, 40, 6.0, 3);
    CHECK(rep.verdict == Verdict::Pass);
    for (const ConvergenceRow& row : rep.rows)
        if (row.statistic == "median_dprime" || row.statistic == "p90_dprime")
            CHECK(row.estimate == 0.0);
}

TEST_CASE("experiment reports are bit-stable across thread counts") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    std::string base;
    for (int threads : {1, 2, 8}) {
        McOptions opt;
        opt.threads = threads;
        ConvergenceReport rep = dprime_as_convergence_experiment(rates, table, doob_geo(),
                                                                 {2, 8}, 30, 6.0, 17, opt);
        std::ostringstream os;
        rep.write_csv(os);
        if (base.empty()) base = os.str();
        else CHECK(os.str() == base);
    }
}

TEST_CASE("finite-dimensional laws converge along truncation to a finite target") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    ParameterTriple target(0.2, 0.0, NuMeasure::finite_table({1.0, 0.5, 0.25, 0.125, 0.0625}));
    TripleScheme scheme = [&](std::int64_t n) { return truncate_triple(target, n); };
    FddExperimentSpec spec;
    spec.times = {0.0, 0.5, 1.0};
    spec.test_fns = {[](StatePoint x) { return x.embed(); },
                     [](StatePoint x) { return x.embed(); },
                     [](StatePoint x) { return x.embed(); }};
    spec.horizon = 1.5;
    ConvergenceReport rep =
        fdd_convergence_experiment(rates, table, scheme, target, spec, {0, 1, 4}, 600, 23);
    CHECK(rep.verdict == Verdict::Pass);
}

TEST_CASE("the constant scheme always passes the fdd experiment") {
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    ParameterTriple target = doob_geo(0.3);
    TripleScheme constant = [&](std::int64_t) { return target; };
    FddExperimentSpec spec;
    spec.times = {0.0, 0.4};
    spec.test_fns = {[](StatePoint x) { return x.embed(); },
                     [](StatePoint x) { return x.embed(); }};
    spec.horizon = 1.0;
    ConvergenceReport rep =
        fdd_convergence_experiment(rates, table, constant, target, spec, {2, 4}, 500, 29);
    CHECK(rep.verdict == Verdict::Pass);
}

TEST_CASE("excision approximants converge to the purely reflecting process") {
    // the target (0, 1, 0) is not simulable; successive laws are compared and
    // the Laplace-smoothed statistic is checked against the target resolvent
    BirthDeathRates rates = gr4();
    ScaleSpeedTable table = scale_speed(rates, 48);
    ParameterTriple target(0.0, 1.0, NuMeasure::zero());
    TripleScheme scheme = [&](std::int64_t n) { return wang_triple(rates, table, target, n); };
    FddExperimentSpec spec;
    spec.times = {0.0, 0.5};
    spec.test_fns = {[](StatePoint x) { return x.embed(); },
                     [](StatePoint x) { return x.embed(); }};
    spec.horizon = 6.0;
    spec.alpha = 1.0;
    ConvergenceReport rep =
        fdd_convergence_experiment(rates, table, scheme, target, spec, {2, 4, 8}, 400, 31);
    CHECK(rep.verdict != Verdict::Fail);
    bool has_cauchy = false, has_laplace = false;
    for (const ConvergenceRow& row : rep.rows) {
        if (row.statistic == "fdd_cauchy_gap") has_cauchy = true;
        if (row.statistic == "laplace_gap_vs_target") has_laplace = true;
    }
    CHECK(has_cauchy);
    CHECK(has_laplace);
}

TEST_CASE("chi-square quantiles match tabulated values") {
    CHECK(stats::chi_square_quantile(10.0, 0.99) == doctest::Approx(23.209).epsilon(5e-3));
    CHECK(stats::chi_square_quantile(5.0, 0.99) == doctest::Approx(15.086).epsilon(5e-3));
}
