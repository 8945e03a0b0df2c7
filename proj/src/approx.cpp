#include "bdp/approx.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "bdp/format.hpp"

namespace bdp {

ParameterTriple truncate_triple(const ParameterTriple& triple, std::int64_t n) {
    if (n < 0) throw MalformedDescriptor("truncation index must be nonnegative");
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (std::int64_t k = 0; k <= n; ++k) w[k] = triple.nu.at(k);
    return ParameterTriple(triple.gamma, triple.beta, NuMeasure::finite_table(std::move(w)));
}

ParameterTriple tailshift_triple(const ParameterTriple& triple, std::int64_t n) {
    if (n < 0) throw MalformedDescriptor("shift index must be nonnegative");
    switch (triple.nu.family()) {
        case NuMeasure::Family::FiniteTable: {
            auto end = *triple.nu.finite_support_end();
            std::vector<double> w(static_cast<std::size_t>(std::max(end, n + 1)), 0.0);
            for (std::int64_t k = n + 1; k < end; ++k) w[k] = triple.nu.at(k);
            return ParameterTriple(triple.gamma, triple.beta,
                                   NuMeasure::finite_table(std::move(w)));
        }
        case NuMeasure::Family::Geometric:
        case NuMeasure::Family::PowerTail: {
            std::vector<double> zeros(static_cast<std::size_t>(n) + 1, 0.0);
            return ParameterTriple(triple.gamma, triple.beta,
                                   NuMeasure::table_with_tail(std::move(zeros), triple.nu));
        }
        case NuMeasure::Family::TableWithTail: {
            std::int64_t plen = triple.nu.table_prefix_len();
            std::vector<double> prefix(static_cast<std::size_t>(std::max(plen, n + 1)), 0.0);
            for (std::int64_t k = n + 1; k < plen; ++k) prefix[k] = triple.nu.at(k);
            return ParameterTriple(
                triple.gamma, triple.beta,
                NuMeasure::table_with_tail(std::move(prefix), triple.nu.analytic_tail_measure()));
        }
    }
    throw MalformedDescriptor("tail shift needs an analytic tail descriptor");
}

ParameterTriple wang_triple(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                            const ParameterTriple& triple, std::int64_t n) {
    if (n < 0) throw MalformedDescriptor("approximation index must be nonnegative");
    if (table.c_inf.kind != CInfEstimate::Kind::Finite) throw CInfUnavailable();
    double cinf = table.c_inf.value;
    double cn = scale_c_at(rates, table, n);
    if (!(cinf - cn > 0.0)) throw CInfUnavailable();

    // weighted tail sum_{k>=n} (c_inf - c_k) nu_k with a certified bound;
    // finitely supported measures are summed exactly
    double tail_value = 0.0;
    if (auto end = triple.nu.finite_support_end()) {
        ScaleSpeedStream s(rates);
        for (std::int64_t i = 0; i < n; ++i) s.advance();
        for (std::int64_t k = n; k < *end; ++k) {
            tail_value += (cinf - s.c()) * triple.nu.at(k);
            s.advance();
        }
    } else {
        ScaleSpeedStream s(rates);
        for (std::int64_t i = 0; i < n; ++i) s.advance();
        bool first = true;
        std::int64_t evaluated = n;
        SeriesSum tail = sum_series(
            [&](std::int64_t) -> std::optional<double> {
                if (!first) s.advance();
                first = false;
                evaluated = s.k() + 1;
                double gap = cinf - s.c();
                // once the scale gap rounds to zero every later term is below
                // double resolution of the accumulated sum
                if (!(gap > 0.0)) return std::nullopt;
                return gap * triple.nu.at(s.k());
            },
            1 << 14, 1e-14);
        if (tail.verdict == SeriesVerdict::Converged) {
            tail_value = tail.value + 0.5 * tail.tail_bound;
        } else if (tail.verdict == SeriesVerdict::Inconclusive) {
            NuMeasure::Mass m = triple.nu.tail_mass(evaluated);
            if (!m.finite) throw TailUnbounded("excision weighted tail");
            tail_value = tail.value + 0.5 * (m.value + m.bound) * (cinf - s.c());
        } else {
            throw TailUnbounded("excision weighted tail");
        }
    }

    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t k = 0; k < n; ++k) w[k] = triple.nu.at(k);
    w[n] = (0.5 * triple.beta + tail_value) / (cinf - cn);
    return ParameterTriple(triple.gamma, 0.0, NuMeasure::finite_table(std::move(w)));
}

bool Report::all_passed() const {
    for (const ReportRow& r : rows)
        if (r.pass == 0) return false;
    return true;
}

const ReportRow* Report::find(double n, const std::string& name) const {
    for (const ReportRow& r : rows)
        if (r.n == n && r.name == name) return &r;
    return nullptr;
}

void Report::write_csv(std::ostream& os) const {
    os << "n,name,value,bound,pass\n";
    for (const ReportRow& r : rows) {
        os << fmt_g17(r.n) << ',' << r.name << ',' << fmt_g17(r.value) << ','
           << fmt_g17(r.bound) << ',' << r.pass << '\n';
    }
}

Report Report::read_csv(std::istream& is) {
    Report rep;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line.rfind("n,", 0) == 0) continue;
        std::istringstream row(line);
        std::string n_s, name, value_s, bound_s, pass_s;
        if (!std::getline(row, n_s, ',') || !std::getline(row, name, ',') ||
            !std::getline(row, value_s, ',') || !std::getline(row, bound_s, ',') ||
            !std::getline(row, pass_s))
            throw ParseError(lineno, "expected n,name,value,bound,pass");
        ReportRow r;
        r.n = std::stod(n_s);
        r.name = name;
        r.value = std::stod(value_s);
        r.bound = std::stod(bound_s);
        r.pass = std::stoi(pass_s);
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

Report triple_convergence_report(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                 const TripleScheme& scheme, const ParameterTriple& target,
                                 const std::vector<double>& alphas,
                                 const std::vector<std::int64_t>& n_grid,
                                 const std::vector<std::int64_t>& probe_k,
                                 double threshold, const SolveControls& ctrl) {
    Report rep;
    std::vector<double> target_series(alphas.size());
    for (std::size_t a = 0; a < alphas.size(); ++a)
        target_series[a] = nu_one_minus_u(rates, table, target.nu, alphas[a], ctrl).value;

    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        std::int64_t n = n_grid[gi];
        bool last = gi + 1 == n_grid.size();
        ParameterTriple tn = scheme(n);
        auto push = [&](const std::string& name, double gap) {
            ReportRow row;
            row.n = static_cast<double>(n);
            row.name = name;
            row.value = gap;
            row.bound = threshold;
            row.pass = last ? (gap < threshold ? 1 : 0) : -1;
            rep.rows.push_back(std::move(row));
        };
        push("gamma_gap", std::fabs(tn.gamma - target.gamma));
        push("beta_gap", std::fabs(tn.beta - target.beta));
        for (std::int64_t k : probe_k)
            push("nu_gap[k=" + std::to_string(k) + "]",
                 std::fabs(tn.nu.at(k) - target.nu.at(k)));
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            double v = nu_one_minus_u(rates, table, tn.nu, alphas[a], ctrl).value;
            push("nu_one_minus_u_gap[alpha=" + fmt_short(alphas[a]) + "]",
                 std::fabs(v - target_series[a]));
        }
    }
    return rep;
}

Report resolvent_convergence_report(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                    const TripleScheme& scheme, const ParameterTriple& target,
                                    double alpha, const Payload& f, std::int64_t K,
                                    const std::vector<std::int64_t>& n_grid, double threshold,
                                    const SolveControls& ctrl) {
    SolveControls c = ctrl;
    c.probe = std::max(c.probe, K);

    BoundaryClass bc = classify_boundary(rates, 1e-8);
    auto prepared = [&](ParameterTriple t) {
        if (!t.is_reduced_minimal())
            t.cached_admissibility =
                std::make_shared<AdmissibilityReport>(check_admissible(t, rates, bc, 1e-10));
        return t;
    };

    ParameterTriple tgt = prepared(target);
    ResolventField target_field = full_resolvent_field(rates, table, tgt, alpha, f, c);
    ResolventField target_ones = full_resolvent_field(rates, table, tgt, alpha, Payload::one(), c);

    Report rep;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        std::int64_t n = n_grid[gi];
        bool last = gi + 1 == n_grid.size();
        ParameterTriple tn = prepared(scheme(n));
        ResolventField fn = full_resolvent_field(rates, table, tn, alpha, f, c);
        ResolventField fn_ones = full_resolvent_field(rates, table, tn, alpha, Payload::one(), c);

        double sup_gap = 0.0, sup_u_gap = 0.0;
        for (std::int64_t k = 0; k <= K; ++k) {
            StatePoint x = StatePoint::finite(k);
            sup_gap = std::max(sup_gap, std::fabs(fn.value(x) - target_field.value(x)));
            double u_n = 1.0 - alpha * fn_ones.value(x);
            double u_t = 1.0 - alpha * target_ones.value(x);
            sup_u_gap = std::max(sup_u_gap, std::fabs(u_n - u_t));
        }
        double inf_gap = std::fabs(fn.value_inf - target_field.value_inf);

        auto push = [&](const std::string& name, double gap) {
            ReportRow row;
            row.n = static_cast<double>(n);
            row.name = name;
            row.value = gap;
            row.bound = threshold;
            row.pass = last ? (gap < threshold ? 1 : 0) : -1;
            rep.rows.push_back(std::move(row));
        };
        push("sup_gap", sup_gap);
        push("gap_at_inf", inf_gap);
        push("sup_u_gap", sup_u_gap);
    }
    return rep;
}

Report wang_limit_checks(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                         const std::vector<double>& alphas, std::int64_t k_probe,
                         const std::vector<std::int64_t>& n_grid, double rel_threshold,
                         const SolveControls& ctrl) {
    if (table.c_inf.kind != CInfEstimate::Kind::Finite) throw CInfUnavailable();
    double cinf = table.c_inf.value;
    BoundaryClass bc = classify_boundary(rates, 1e-8);
    bool exit_boundary = bc.kind == BoundaryKind::Exit;

    std::int64_t n_top = *std::max_element(n_grid.begin(), n_grid.end());
    SolveControls c = ctrl;
    c.probe = std::max(c.probe, n_top + 1);

    Report rep;
    for (double alpha : alphas) {
        MinimalSolveResult col = minimal_resolvent_column(rates, table, alpha, k_probe, c);
        UMinResult u = u_min(rates, table, alpha, c);
        double target1 = 2.0 * u.u[k_probe] * speed_mu_at(rates, table, k_probe);
        double target2 = 0.0;
        if (!exit_boundary) target2 = 2.0 * alpha * mu_u(rates, table, alpha, c).value;

        for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
            std::int64_t n = n_grid[gi];
            bool last = gi + 1 == n_grid.size();
            double cgap = cinf - scale_c_at(rates, table, n);
            double ratio1 = col.phi_column[n] / cgap;
            double ratio2 = (1.0 - u.u[n]) / cgap;

            auto push = [&](const std::string& name, double value, bool assert_pass) {
                ReportRow row;
                row.n = static_cast<double>(n);
                row.name = name;
                row.value = value;
                row.bound = rel_threshold;
                row.pass = (assert_pass && last) ? (value < rel_threshold ? 1 : 0) : -1;
                rep.rows.push_back(std::move(row));
            };
            std::string suffix = "[k=" + std::to_string(k_probe) + ",alpha=" + fmt_short(alpha) + "]";
            push("phi_ratio" + suffix, ratio1, false);
            push("phi_ratio_relgap" + suffix, std::fabs(ratio1 - target1) / std::fabs(target1),
                 true);
            push("u_ratio[alpha=" + fmt_short(alpha) + "]", ratio2, false);
            if (!exit_boundary)
                push("u_ratio_relgap[alpha=" + fmt_short(alpha) + "]",
                     std::fabs(ratio2 - target2) / std::fabs(target2), true);
        }
    }
    return rep;
}

Projection project_to_Cn(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                         const ParameterTriple& triple_n, const Payload& g, std::int64_t N) {
    (void)rates;
    (void)table;
    if (!triple_n.is_doob_form()) throw NotDoob("projection target must be Doob-form");
    double ginf = g.at_inf;

    // sum_k (g(inf) - g(k)) nu_k; Doob-form measures have finite mass, so the
    // remainder beyond the evaluated prefix is mass-bounded
    std::int64_t limit = 1 << 14;
    if (auto end = triple_n.nu.finite_support_end()) limit = std::min(limit, *end);
    double num = 0.0;
    for (std::int64_t k = 0; k < limit; ++k) num += (ginf - g.at(k)) * triple_n.nu.at(k);
    num += triple_n.gamma * ginf;

    double denom = triple_n.nu.partial_sum(N);
    Projection out;
    if (denom > 0.0) {
        double chi = num / denom;
        auto base = g.at;
        out.chi = chi;
        out.g_n.at = [base, chi, N](std::int64_t k) {
            return base(k) + (k <= N ? chi : 0.0);
        };
        out.g_n.at_inf = ginf;
        out.g_n.sup_abs = g.sup_abs + std::fabs(chi);
        return out;
    }

    // atom branch: all mass at a single index beyond N
    std::int64_t atom = -1;
    for (std::int64_t k = 0; k < limit; ++k) {
        if (triple_n.nu.at(k) > 0.0) {
            if (atom >= 0) throw ZeroDenominator("projection prefix mass");
            atom = k;
        }
    }
    if (atom < 0) throw ZeroDenominator("projection prefix mass");
    double adjusted = ginf + triple_n.gamma * ginf / triple_n.nu.at(atom);
    auto base = g.at;
    out.chi = adjusted - base(atom);
    out.g_n.at = [base, adjusted, atom](std::int64_t k) {
        return k == atom ? adjusted : base(k);
    };
    out.g_n.at_inf = ginf;
    out.g_n.sup_abs = std::max(g.sup_abs, std::fabs(adjusted));
    return out;
}

}  // namespace bdp
