// Acceptance suite: every criterion prints one pass/fail line; the exit code
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bdp/cli.hpp"
#include "bdp/mc.hpp"

using namespace bdp;

namespace {

struct Criterion {
    std::string label;
    double budget_seconds;
    std::function<void(std::vector<std::string>&)> body;  // pushes failure notes
};

BirthDeathRates gr4() { return BirthDeathRates::geometric_regular(4.0); }
BirthDeathRates ge2() { return BirthDeathRates::geometric_exit(2.0); }

ParameterTriple doob_geo(double gamma) {
    return ParameterTriple(gamma, 0.0, NuMeasure::geometric(1.0, 0.5));
}

void expect(std::vector<std::string>& fails, bool ok, const std::string& what) {
    if (!ok) fails.push_back(what);
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// 1. closed forms of the scale and speed prefix on the regular fixture
void criterion_scale_speed(std::vector<std::string>& fails) {
    ScaleSpeedTable t = scale_speed(gr4(), 40);
    for (std::int64_t k = 0; k <= 40; ++k) {
        double mu_exact = std::pow(2.0, -double(k));
        double c_exact = 1.0 - std::pow(2.0, -double(k));
        expect(fails, std::fabs(t.mu[k] - mu_exact) <= 1e-12 * mu_exact,
               "mu[" + std::to_string(k) + "] off by " + fmt(t.mu[k] - mu_exact));
        expect(fails, std::fabs(t.c[k] - c_exact) <= 1e-12,
               "c[" + std::to_string(k) + "] off by " + fmt(t.c[k] - c_exact));
    }
}

// 2. boundary classification of the three canonical families
void criterion_classification(std::vector<std::string>& fails) {
    expect(fails, classify_boundary(gr4(), 1e-8).kind == BoundaryKind::Regular,
           "regular fixture misclassified");
    expect(fails, classify_boundary(ge2(), 1e-8).kind == BoundaryKind::Exit,
           "exit fixture misclassified");
    expect(fails, classify_boundary(BirthDeathRates::linear(), 1e-8).kind ==
                      BoundaryKind::Natural,
           "linear fixture misclassified");
}

// 3. resolvent equation, speed-measure symmetry, and the lifetime identity
void criterion_minimal_identities(std::vector<std::string>& fails) {
    const std::vector<double> alphas = {0.5, 1.0, 2.0};
    for (const BirthDeathRates& rates : {gr4(), ge2()}) {
        ScaleSpeedTable table = scale_speed(rates, 40);
        SolveControls ctrl;
        ctrl.probe = 40;
        ParameterTriple reduced(1.0, 0.0, NuMeasure::zero());

        for (double alpha : alphas) {
            // columns 0..32 once per alpha
            std::vector<MinimalSolveResult> cols;
            for (std::int64_t j = 0; j <= 32; ++j)
                cols.push_back(minimal_resolvent_column(rates, table, alpha, j, ctrl));
            for (std::int64_t i = 0; i <= 32; ++i)
                for (std::int64_t j = i + 1; j <= 32; ++j) {
                    double lhs = table.mu[i] * cols[j].phi_column[i];
                    double rhs = table.mu[j] * cols[i].phi_column[j];
                    expect(fails, std::fabs(lhs - rhs) < 1e-8,
                           "symmetry gap " + fmt(lhs - rhs) + " at (" + std::to_string(i) +
                               "," + std::to_string(j) + ")");
                }

            // lifetime identity against independent row sums
            UMinResult u = u_min(rates, table, alpha, ctrl);
            ResolventField ones =
                full_resolvent_field(rates, table, reduced, alpha, Payload::one(), ctrl);
            for (std::int64_t i = 0; i <= 32; ++i) {
                double gap = std::fabs(alpha * ones.values[i] + u.u[i] - 1.0);
                expect(fails, gap < 1e-8, "lifetime identity gap " + fmt(gap));
            }
        }

        // resolvent equation on minimal fields
        for (auto [alpha, beta] : std::vector<std::pair<double, double>>{
                 {0.5, 1.0}, {1.0, 2.0}, {0.5, 2.0}}) {
            Payload f = Payload::indicator(0);
            ResolventField rb = full_resolvent_field(rates, table, reduced, beta, f, ctrl);
            ResolventField ra = full_resolvent_field(rates, table, reduced, alpha, f, ctrl);
            ResolventField rab =
                full_resolvent_field(rates, table, reduced, alpha, rb.as_payload(), ctrl);
            for (std::int64_t k = 0; k <= 32; ++k) {
                double res = ra.values[k] - rb.values[k] + (alpha - beta) * rab.values[k];
                expect(fails, std::fabs(res) < 1e-8, "resolvent equation gap " + fmt(res));
            }
        }
    }
}

// 4. hand-solved 2x2 truncations
void criterion_hand_fixtures(std::vector<std::string>& fails) {
    BirthDeathRates rates = BirthDeathRates::linear();
    ScaleSpeedTable table = scale_speed(rates, 4);
    SolveControls ctrl;
    ctrl.fixed_n = 1;
    MinimalSolveResult col = minimal_resolvent_column(rates, table, 1.0, 0, ctrl);
    UMinResult u = u_min(rates, table, 1.0, ctrl);
    expect(fails, std::fabs(col.phi_column[0] - 0.6) < 1e-15, "phi00 != 3/5");
    expect(fails, std::fabs(col.phi_column[1] - 0.2) < 1e-15, "phi10 != 1/5");
    expect(fails, std::fabs(u.u[0] - 0.2) < 1e-15, "u0 != 1/5");
    expect(fails, std::fabs(u.u[1] - 0.4) < 1e-15, "u1 != 2/5");
}

// 5. assembled resolvent structure
void criterion_full_structure(std::vector<std::string>& fails) {
    ScaleSpeedTable table = scale_speed(gr4(), 130);
    SolveControls ctrl;
    ParameterTriple reduced(1.0, 0.0, NuMeasure::zero());
    Payload f = Payload::indicator(0);

    ResolventField field = full_resolvent_field(gr4(), table, reduced, 1.0, f, ctrl);
    MinimalSolveResult col = minimal_resolvent_column(gr4(), table, 1.0, 0, ctrl);
    for (std::int64_t i = 0; i <= 32; ++i)
        expect(fails, std::fabs(field.values[i] - col.phi_column[i]) < 1e-10,
               "reduction mismatch at " + std::to_string(i));

    ParameterTriple one(0.5, 1.0, NuMeasure::geometric(1.0, 0.5));
    ParameterTriple two(1.0, 2.0, NuMeasure::geometric(2.0, 0.5));
    ResolventField fa = full_resolvent_field(gr4(), table, one, 1.0, f, ctrl);
    ResolventField fb = full_resolvent_field(gr4(), table, two, 1.0, f, ctrl);
    expect(fails, fa.value_inf == fb.value_inf, "doubled triple changed the boundary value");
    for (std::int64_t i = 0; i <= 64; ++i)
        expect(fails, fa.values[i] == fb.values[i],
               "doubled triple changed the field at " + std::to_string(i));

    // membership residual of assembled fields at probe depth 64; the
    // reflecting derivative term is absent for these beta = 0 fixtures
    struct Case {
        BirthDeathRates rates;
        ParameterTriple triple;
    };
    std::vector<Case> cases = {{gr4(), reduced}, {gr4(), doob_geo(0.5)}, {ge2(), doob_geo(0.3)}};
    for (const Case& c : cases) {
        ScaleSpeedTable t2 = scale_speed(c.rates, 130);
        ResolventField rf = full_resolvent_field(c.rates, t2, c.triple, 1.0, f, ctrl);
        BoundaryResidualResult res =
            boundary_residual(c.rates, t2, c.triple, rf.as_payload(), 64);
        expect(fails, std::fabs(res.value) < 1e-6,
               "membership residual " + fmt(res.value) + " for " + c.triple.describe());
    }
}

// 6. excision limit ratios
void criterion_wang_limits(std::vector<std::string>& fails) {
    ScaleSpeedTable table = scale_speed(gr4(), 48);
    SolveControls ctrl;
    Report rep = wang_limit_checks(gr4(), table, {1.0}, 0, {8, 16, 24}, 0.05, ctrl);
    expect(fails, rep.all_passed(), "relative gap above 5% at n=24");
    for (const char* name : {"phi_ratio_relgap[k=0,alpha=1]", "u_ratio_relgap[alpha=1]"}) {
        double prev = 1.0;
        for (std::int64_t n : {8, 16, 24}) {
            const ReportRow* row = rep.find(double(n), name);
            if (row == nullptr) {
                fails.push_back(std::string("missing row ") + name);
                continue;
            }
            expect(fails, row->value <= prev + 1e-12,
                   std::string(name) + " not decreasing at n=" + std::to_string(n));
            prev = row->value;
        }
    }
}

// 7. scheme convergence: truncation clauses and the reflecting defect
void criterion_scheme_convergence(std::vector<std::string>& fails) {
    ScaleSpeedTable table = scale_speed(gr4(), 48);
    SolveControls ctrl;

    ParameterTriple target = doob_geo(0.5);
    TripleScheme trunc = [&target](std::int64_t n) { return truncate_triple(target, n); };
    Report clauses = triple_convergence_report(gr4(), table, trunc, target, {0.5, 1.0},
                                               {2, 4, 8, 16, 32}, {0, 1, 2, 4}, 1e-6, ctrl);
    expect(fails, clauses.all_passed(), "truncation clause failed");
    Report fields = resolvent_convergence_report(gr4(), table, trunc, target, 1.0,
                                                 Payload::indicator(0), 32, {2, 4, 8, 16, 32},
                                                 1e-6, ctrl);
    const ReportRow* inf_row = fields.find(32.0, "gap_at_inf");
    expect(fails, inf_row != nullptr && inf_row->pass == 1 && inf_row->value < 1e-6,
           "boundary resolvent gap not below 1e-6 at n=32");

    ParameterTriple reflecting(0.5, 1.0, NuMeasure::geometric(1.0, 0.5));
    TripleScheme wang = [&](std::int64_t n) { return wang_triple(gr4(), table, reflecting, n); };
    double alpha = 1.0;
    Report wang_rep = triple_convergence_report(gr4(), table, wang, reflecting, {alpha},
                                                {8, 16, 24}, {0, 1, 2}, 1e-6, ctrl);
    const ReportRow* clause = wang_rep.find(24.0, "nu_one_minus_u_gap[alpha=1]");
    if (clause == nullptr) {
        fails.push_back("missing excision clause row");
        return;
    }
    expect(fails, clause->pass == 0, "the reflecting defect unexpectedly vanished");
    double expected = reflecting.beta * alpha * mu_u(gr4(), table, alpha, ctrl).value;
    double rel = std::fabs(clause->value - expected) / expected;
    expect(fails, rel < 0.02,
           "defect " + fmt(clause->value) + " vs " + fmt(expected) + " (rel " + fmt(rel) + ")");
}

// 8. simulator laws at Monte-Carlo scale
void criterion_simulator_laws(std::vector<std::string>& fails) {
    BirthDeathRates linear = BirthDeathRates::linear();
    ScaleSpeedTable lin_table = scale_speed(linear, 16);
    SimControls ctrl;
    ctrl.horizon = 50.0;

    double hold_sum = 0.0;
    std::int64_t holds = 0;
    std::int64_t ups = 0, jumps = 0;
    for (std::uint64_t seed = 0; holds < 10000 || jumps < 10000; ++seed) {
        ctrl.rng_seed = RngStream::substream_seed(606, seed);
        CadlagPath p = simulate_minimal(linear, lin_table, 0, ctrl);
        for (std::size_t i = 0; i + 1 < p.segments.size(); ++i) {
            if (p.segments[i].state == StatePoint::finite(0) &&
                p.segments[i + 1].t < ctrl.horizon) {
                hold_sum += p.segments[i + 1].t - p.segments[i].t;
                ++holds;
            }
            if (p.segments[i].state == StatePoint::finite(1)) {
                ++jumps;
                if (p.segments[i + 1].state == StatePoint::finite(2)) ++ups;
            }
        }
    }
    double mean = hold_sum / double(holds);
    double sigma_hold = 1.0 / std::sqrt(double(holds));
    expect(fails, std::fabs(mean - 1.0) < 3.0 * sigma_hold,
           "holding mean " + fmt(mean) + " outside 3 sigma");
    double freq = double(ups) / double(jumps);
    double sigma_jump = std::sqrt(0.25 / double(jumps));
    expect(fails, std::fabs(freq - 0.5) < 3.0 * sigma_jump,
           "up-jump frequency " + fmt(freq) + " outside 3 sigma");

    // restart distribution against pi by chi-square at the 1% level
    ScaleSpeedTable table = scale_speed(gr4(), 48);
    ParameterTriple triple = doob_geo(0.0);
    PiDistribution pi = pi_distribution(triple);
    SimControls dctrl;
    dctrl.horizon = 10.0;
    std::vector<double> observed(11, 0.0);
    std::int64_t approaches = 0;
    for (std::uint64_t seed = 0; approaches < 10000; ++seed) {
        dctrl.rng_seed = RngStream::substream_seed(707, seed);
        CadlagPath p = simulate_doob(gr4(), table, triple, StatePoint::finite(0), dctrl);
        for (double t : p.approach_times) {
            ++approaches;
            std::int64_t code = p.at(t).code();
            if (code >= 0 && code < 10) observed[code] += 1.0;
            else observed[10] += 1.0;
        }
    }
    double chi2 = 0.0;
    for (std::int64_t b = 0; b < 10; ++b) {
        double e = pi.pi(b) * double(approaches);
        chi2 += (observed[b] - e) * (observed[b] - e) / e;
    }
    double tail_mass = pi.nu.tail_mass(10).value / pi.norm;
    double e_tail = tail_mass * double(approaches);
    chi2 += (observed[10] - e_tail) * (observed[10] - e_tail) / e_tail;
    double crit = stats::chi_square_quantile(10.0, 0.99);
    expect(fails, chi2 < crit, "restart chi-square " + fmt(chi2) + " above " + fmt(crit));
}

// 9. surgery against the original trajectory in the d' metric
void criterion_surgery_dprime(std::vector<std::string>& fails) {
    ScaleSpeedTable table = scale_speed(gr4(), 48);
    McOptions opt;
    opt.threads = 2;
    opt.final_threshold = 0.02;
    ConvergenceReport rep = dprime_as_convergence_experiment(gr4(), table, doob_geo(0.0),
                                                             {2, 4, 8, 16}, 200, 10.0, 2718,
                                                             opt);
    expect(fails, rep.verdict == Verdict::Pass, "verdict " + rep.verdict_line());
    double prev = 1.0, last = 1.0;
    for (const ConvergenceRow& row : rep.rows) {
        if (row.statistic != "median_dprime") continue;
        expect(fails, row.estimate <= prev + 1e-12, "median increased at n=" + fmt(row.n));
        prev = row.estimate;
        last = row.estimate;
    }
    expect(fails, last < 0.02, "final median " + fmt(last));
}

// 10. finite-dimensional laws along truncation against a simulable target
void criterion_fdd_convergence(std::vector<std::string>& fails) {
    ScaleSpeedTable table = scale_speed(gr4(), 48);
    ParameterTriple target(0.2, 0.0,
                           NuMeasure::finite_table({1.0, 0.5, 0.25, 0.125, 0.0625}));
    TripleScheme scheme = [&](std::int64_t n) { return truncate_triple(target, n); };
    FddExperimentSpec spec;
    spec.times = {0.0, 0.5, 1.0};
    spec.test_fns = {[](StatePoint x) { return x.embed(); },
                     [](StatePoint x) { return x.embed(); },
                     [](StatePoint x) { return x.embed(); }};
    spec.horizon = 1.5;
    McOptions opt;
    opt.threads = 2;
    ConvergenceReport rep =
        fdd_convergence_experiment(gr4(), table, scheme, target, spec, {0, 1, 4}, 2000, 314,
                                   opt);
    expect(fails, rep.verdict == Verdict::Pass, "verdict " + rep.verdict_line());
    for (const ConvergenceRow& row : rep.rows)
        if (row.n == 4.0 && row.statistic == "fdd_gap_vs_target")
            expect(fails, row.estimate <= row.halfwidth,
                   "final gap " + fmt(row.estimate) + " outside overlapping CIs " +
                       fmt(row.halfwidth));
}

// 11. metric sanity
void criterion_metric_sanity(std::vector<std::string>& fails) {
    CadlagPath zero, one;
    zero.segments = {{0.0, StatePoint::finite(0)}};
    zero.horizon = 50.0;
    one.segments = {{0.0, StatePoint::finite(1)}};
    one.horizon = 50.0;
    DprimeResult d = dprime(zero, one, 40);
    expect(fails, std::fabs(d.value - 2.0 / 3.0) <= d.tail_bound,
           "constant-path value " + fmt(d.value) + " outside the tail bound");

    for (std::uint64_t s = 0; s < 100; ++s) {
        RngStream rng(s);
        auto rand_path = [&rng]() {
            CadlagPath p;
            std::int64_t state = static_cast<std::int64_t>(rng.next_u64() % 8);
            p.segments.push_back({0.0, StatePoint::finite(state)});
            double t = 0.0;
            while (true) {
                t += 0.05 + rng.next_exponential(2.0);
                if (t >= 4.0) break;
                std::int64_t next = static_cast<std::int64_t>(rng.next_u64() % 10);
                if (next == state) next = (next + 1) % 10;
                state = next;
                p.segments.push_back({t, StatePoint::finite(state)});
            }
            p.horizon = 4.0;
            return p;
        };
        CadlagPath a = rand_path();
        CadlagPath b = rand_path();
        double j1 = skorohod_j1_upper(a, b, 3.0);
        double lu = local_uniform_distance(a, b, 3.0);
        expect(fails, j1 <= lu + 1e-12,
               "J1 bound " + fmt(j1) + " above local uniform " + fmt(lu));
    }
}

// 12. byte-identical experiment artifacts across worker threads
void criterion_determinism(std::vector<std::string>& fails) {
    auto dir = std::filesystem::temp_directory_path() / "bdp_acceptance";
    std::filesystem::create_directories(dir);
    std::string base =
        "command = mc\n"
        "mc.experiment = dprime\n"
        "mc.count = 100\n"
        "mc.horizon = 8\n"
        "mc.seed = 99\n"
        "n_grid = 2,4,8\n"
        "rates.family = geometric_regular\n"
        "triple.gamma = 0\n"
        "triple.nu.family = geometric\n"
        "out = " + (dir / "out").string() + "\n";
    std::string want;
    for (int threads : {1, 2, 8}) {
        auto cfg_path = dir / ("acc12_t" + std::to_string(threads) + ".cfg");
        {
            std::ofstream out(cfg_path);
            out << base << "mc.threads = " << threads << "\n";
        }
        ExperimentPlan plan = make_plan(read_config_file(cfg_path.string()));
        std::ostringstream sink, err;
        int rc = run_plan(plan, sink, err);
        expect(fails, rc == 0, "mc dispatch failed: " + err.str());
        auto csv = dir / "out" / ("mc_" + plan.config_hash + "_report.csv");
        std::ifstream in(csv, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        if (want.empty()) want = ss.str();
        else expect(fails, ss.str() == want,
                    "artifact bytes differ at " + std::to_string(threads) + " threads");
    }
    expect(fails, !want.empty(), "no artifact produced");
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"scale/speed closed forms on the regular fixture", 1.0, criterion_scale_speed},
        {"boundary classification of the canonical families", 1.0, criterion_classification},
        {"minimal-resolvent identities", 10.0, criterion_minimal_identities},
        {"hand-solved 2x2 truncations", 1.0, criterion_hand_fixtures},
        {"assembled resolvent structure", 10.0, criterion_full_structure},
        {"excision limit ratios", 30.0, criterion_wang_limits},
        {"scheme convergence clauses", 60.0, criterion_scheme_convergence},
        {"simulator laws", 60.0, criterion_simulator_laws},
        {"surgery d-prime convergence", 120.0, criterion_surgery_dprime},
        {"finite-dimensional convergence", 300.0, criterion_fdd_convergence},
        {"metric sanity", 10.0, criterion_metric_sanity},
        {"artifact determinism across threads", 120.0, criterion_determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::vector<std::string> notes;
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].body(notes);
        } catch (const std::exception& e) {
            notes.push_back(std::string("exception: ") + e.what());
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criteria[i].budget_seconds)
            notes.push_back("runtime " + fmt(elapsed) + "s over budget " +
                            fmt(criteria[i].budget_seconds) + "s");
        bool ok = notes.empty();
        std::printf("[%s] %2zu. %s (%.2fs)\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].label.c_str(), elapsed);
        if (!ok) {
            ++failed;
            std::size_t shown = 0;
            for (const std::string& n : notes) {
                std::printf("       - %s\n", n.c_str());
                if (++shown == 5) {
                    std::printf("       - (%zu further notes)\n", notes.size() - shown);
                    break;
                }
            }
        }
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed;
}
