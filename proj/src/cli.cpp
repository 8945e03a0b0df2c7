#include "bdp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "bdp/boundary.hpp"
#include "bdp/format.hpp"
#include "bdp/mc.hpp"

namespace bdp {

namespace {

std::ofstream open_artifact(const ExperimentPlan& plan, const std::string& name) {
    std::filesystem::create_directories(plan.out_dir);
    std::filesystem::path p =
        std::filesystem::path(plan.out_dir) /
        (plan.command + "_" + plan.config_hash + "_" + name + ".csv");
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write artifact " + p.string());
    return out;
}

StateFunction make_state_function(const std::string& token) {
    if (token == "one") return [](StatePoint) { return 1.0; };
    if (token == "embed") return [](StatePoint x) { return x.embed(); };
    if (token.rfind("indicator:", 0) == 0) {
        std::int64_t k = std::stoll(token.substr(10));
        return [k](StatePoint x) { return x.is_finite() && x.index() == k ? 1.0 : 0.0; };
    }
    throw ValidationError("mc.fns", "unknown test function '" + token + "'");
}

const BirthDeathRates& need_rates(const ExperimentPlan& plan) {
    if (!plan.rates) throw ValidationError("rates.family", "this command needs rates");
    return *plan.rates;
}

const ParameterTriple& need_triple(const ExperimentPlan& plan) {
    if (!plan.triple) throw ValidationError("triple.gamma", "this command needs a triple");
    return *plan.triple;
}

TripleScheme make_scheme(const ExperimentPlan& plan, const BirthDeathRates& rates,
                         const ScaleSpeedTable& table, const ParameterTriple& target) {
    if (plan.scheme == "truncation")
        return [target](std::int64_t n) { return truncate_triple(target, n); };
    if (plan.scheme == "tailshift")
        return [target](std::int64_t n) { return tailshift_triple(target, n); };
    return [&rates, &table, target](std::int64_t n) {
        return wang_triple(rates, table, target, n);
    };
}

int cmd_classify(const ExperimentPlan& plan, std::ostream& out) {
    const BirthDeathRates& rates = need_rates(plan);
    ScaleSpeedTable table = scale_speed(rates, std::max<std::int64_t>(plan.depth_k, 2));
    BoundaryClass bc = classify_boundary(rates, plan.tol);
    out << boundary_kind_name(bc.kind) << '\n';

    std::ofstream csv = open_artifact(plan, "boundary");
    csv << "quantity,value,bound,status\n";
    auto series_row = [&csv](const char* name, const SeriesSum& s) {
        csv << name << ',' << fmt_g17(s.value) << ',' << fmt_g17(s.tail_bound) << ','
            << (s.verdict == SeriesVerdict::Converged ? "finite" : "infinite") << '\n';
    };
    series_row("R", bc.R);
    series_row("S", bc.S);
    csv << "c_inf," << fmt_g17(table.c_inf.value) << ',' << fmt_g17(table.c_inf.bound) << ','
        << (table.c_inf.kind == CInfEstimate::Kind::Finite
                ? "finite"
                : (table.c_inf.kind == CInfEstimate::Kind::Infinite ? "infinite" : "unknown"))
        << '\n';
    csv << "kind," << boundary_kind_name(bc.kind) << ",,\n";

    if (plan.triple && (bc.kind == BoundaryKind::Regular || bc.kind == BoundaryKind::Exit)) {
        AdmissibilityReport rep = check_admissible(*plan.triple, rates, bc, plan.tol);
        csv << "b1_sum," << fmt_g17(rep.b1_value) << ',' << fmt_g17(rep.b1_bound) << ','
            << (rep.b1_finite ? "finite" : "infinite") << '\n';
        csv << "mass_beta_nonzero," << (rep.mass_beta_nonzero ? 1 : 0) << ",,\n";
        csv << "b4_exit_ok," << (rep.b4_ok ? 1 : 0) << ",,\n";
        csv << "admissible," << (rep.admissible ? 1 : 0) << ",,"
            << (rep.reduced_minimal ? "reduced_minimal" : "") << '\n';
    }
    return 0;
}

int cmd_resolvent(const ExperimentPlan& plan, std::ostream& out) {
    const BirthDeathRates& rates = need_rates(plan);
    const ParameterTriple& triple = need_triple(plan);
    ScaleSpeedTable table = scale_speed(rates, std::max<std::int64_t>(plan.depth_k, 2));
    Payload f = plan.payload_kind == "one" ? Payload::one()
                                           : Payload::indicator(plan.payload_index);
    SolveControls ctrl;
    ctrl.probe = std::max<std::int64_t>(ctrl.probe, plan.depth_k);

    std::ofstream csv = open_artifact(plan, "field");
    csv << "alpha,state,value,error_bound\n";
    for (double alpha : plan.alphas) {
        ResolventField field = full_resolvent_field(rates, table, triple, alpha, f, ctrl);
        for (std::int64_t k = 0; k <= plan.depth_k; ++k)
            csv << fmt_g17(alpha) << ',' << k << ',' << fmt_g17(field.values[k]) << ','
                << fmt_g17(field.error_bound) << '\n';
        csv << fmt_g17(alpha) << ',' << StatePoint::kInfinityCode << ','
            << fmt_g17(field.value_inf) << ',' << fmt_g17(field.error_bound) << '\n';
        csv << fmt_g17(alpha) << ',' << StatePoint::kCemeteryCode << ",0,0\n";
        out << "alpha=" << fmt_short(alpha) << " R_alpha f(0)=" << fmt_g17(field.values[0])
            << " R_alpha f(inf)=" << fmt_g17(field.value_inf) << '\n';
    }
    return 0;
}

int cmd_approx(const ExperimentPlan& plan, std::ostream& out) {
    const BirthDeathRates& rates = need_rates(plan);
    const ParameterTriple& target = need_triple(plan);
    ScaleSpeedTable table = scale_speed(rates, std::max<std::int64_t>(plan.depth_k, 2));
    SolveControls ctrl;
    TripleScheme scheme = make_scheme(plan, rates, table, target);

    Report triples = triple_convergence_report(rates, table, scheme, target, plan.alphas,
                                               plan.n_grid, plan.probe_k, plan.threshold, ctrl);
    {
        std::ofstream csv = open_artifact(plan, "triples");
        triples.write_csv(csv);
    }
    Payload f = plan.payload_kind == "one" ? Payload::one()
                                           : Payload::indicator(plan.payload_index);
    Report fields = resolvent_convergence_report(rates, table, scheme, target, plan.alphas[0],
                                                 f, plan.depth_k, plan.n_grid, plan.threshold,
                                                 ctrl);
    {
        std::ofstream csv = open_artifact(plan, "resolvents");
        fields.write_csv(csv);
    }
    bool ok = triples.all_passed() && fields.all_passed();
    if (plan.scheme == "wang") {
        Report limits = wang_limit_checks(rates, table, plan.alphas, plan.payload_index,
                                          plan.n_grid, 0.05, ctrl);
        std::ofstream csv = open_artifact(plan, "wang_limits");
        limits.write_csv(csv);
        ok = ok && limits.all_passed();
    }
    out << (ok ? "approx: all asserted clauses passed" : "approx: some clauses failed") << '\n';
    return ok ? 0 : 2;
}

int cmd_simulate(const ExperimentPlan& plan, std::ostream& out) {
    const BirthDeathRates& rates = need_rates(plan);
    ScaleSpeedTable table = scale_speed(rates, 64);
    SimControls ctrl;
    ctrl.cap = plan.sim_cap;
    ctrl.horizon = plan.sim_horizon;
    ctrl.max_events = plan.sim_max_events;

    std::filesystem::create_directories(plan.out_dir);
    for (std::int64_t i = 0; i < plan.sim_count; ++i) {
        ctrl.rng_seed = RngStream::substream_seed(plan.mc_seed, i);
        CadlagPath path;
        if (plan.sim_kind == "minimal") {
            path = simulate_minimal(rates, table, plan.sim_i0, ctrl);
        } else if (plan.sim_kind == "doob") {
            path = simulate_doob(rates, table, need_triple(plan),
                                 StatePoint::finite(plan.sim_i0), ctrl);
        } else {
            path = simulate_wang_approximant(rates, table, need_triple(plan), plan.sim_n,
                                             plan.sim_i0, ctrl);
        }
        std::filesystem::path p = std::filesystem::path(plan.out_dir) /
                                  (plan.command + "_" + plan.config_hash + "_path" +
                                   std::to_string(i) + ".csv");
        std::ofstream csv(p, std::ios::binary);
        path.write_csv(csv);
    }
    out << "simulate: wrote " << plan.sim_count << " path(s)\n";
    return 0;
}

int cmd_distance(const ExperimentPlan& plan, std::ostream& out) {
    if (plan.distance_a.empty() || plan.distance_b.empty())
        throw ValidationError("distance.a", "distance needs two path files");
    std::ifstream fa(plan.distance_a), fb(plan.distance_b);
    if (!fa) throw Error("cannot read " + plan.distance_a);
    if (!fb) throw Error("cannot read " + plan.distance_b);
    CadlagPath a = CadlagPath::read_csv(fa);
    CadlagPath b = CadlagPath::read_csv(fb);

    DprimeResult d = dprime(a, b, plan.distance_jmax);
    double j1 = skorohod_j1_upper(a, b, plan.distance_t);
    double lu = local_uniform_distance(a, b, plan.distance_t);

    std::ofstream csv = open_artifact(plan, "distances");
    csv << "metric,value,bound\n";
    csv << "dprime," << fmt_g17(d.value) << ',' << fmt_g17(d.tail_bound) << '\n';
    csv << "j1_upper," << fmt_g17(j1) << ",\n";
    csv << "local_uniform," << fmt_g17(lu) << ",\n";
    out << "dprime=" << fmt_g17(d.value) << " j1_upper=" << fmt_g17(j1)
        << " local_uniform=" << fmt_g17(lu) << '\n';
    return 0;
}

int cmd_mc(const ExperimentPlan& plan, std::ostream& out) {
    const BirthDeathRates& rates = need_rates(plan);
    const ParameterTriple& target = need_triple(plan);
    ScaleSpeedTable table = scale_speed(rates, 64);
    McOptions options;
    options.threads = plan.mc_threads;
    options.cap = plan.sim_cap;
    options.max_events = plan.sim_max_events;

    ConvergenceReport rep;
    if (plan.mc_experiment == "dprime") {
        rep = dprime_as_convergence_experiment(rates, table, target, plan.n_grid, plan.mc_count,
                                               plan.mc_horizon, plan.mc_seed, options);
    } else {
        FddExperimentSpec spec;
        spec.times = plan.mc_times;
        for (const std::string& token : plan.mc_fns)
            spec.test_fns.push_back(make_state_function(token));
        while (spec.test_fns.size() < spec.times.size())
            spec.test_fns.push_back(spec.test_fns.back());
        spec.i0 = plan.sim_i0;
        spec.horizon = plan.mc_horizon;
        spec.alpha = plan.alphas[0];
        TripleScheme scheme = make_scheme(plan, rates, table, target);
        rep = fdd_convergence_experiment(rates, table, scheme, target, spec, plan.n_grid,
                                         plan.mc_count, plan.mc_seed, options);
    }
    std::ofstream csv = open_artifact(plan, "report");
    rep.write_csv(csv);
    out << rep.verdict_line() << '\n';
    switch (rep.verdict) {
        case Verdict::Pass: return 0;
        case Verdict::Fail: return 2;
        case Verdict::Inconclusive: return 3;
    }
    return 1;
}

}  // namespace

int run_plan(const ExperimentPlan& plan, std::ostream& out, std::ostream& err) {
    try {
        if (plan.command == "classify") return cmd_classify(plan, out);
        if (plan.command == "resolvent") return cmd_resolvent(plan, out);
        if (plan.command == "approx") return cmd_approx(plan, out);
        if (plan.command == "simulate") return cmd_simulate(plan, out);
        if (plan.command == "distance") return cmd_distance(plan, out);
        if (plan.command == "mc") return cmd_mc(plan, out);
        err << "bdp: unknown subcommand '" << plan.command << "'\n";
        return 1;
    } catch (const Inconclusive& e) {
        err << "bdp " << plan.command << ": inconclusive: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "bdp " << plan.command << ": error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace bdp
