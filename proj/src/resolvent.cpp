#include "bdp/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "bdp/tridiag.hpp"

namespace bdp {

namespace {

// Highest truncation level with representable coefficients.
std::int64_t finite_row_limit(const BirthDeathRates& rates, double alpha, std::int64_t want) {
    for (std::int64_t k = want; k >= 1; --k) {
        // probe the last row only; rates grow monotonically for all families here
        if (std::isfinite(alpha + rates.q(k)) && std::isfinite(rates.b(k))) return k;
    }
    return 1;
}

struct TruncatedSystem {
    std::vector<double> lower, diag, upper;

    void assemble(const BirthDeathRates& rates, double alpha, std::int64_t N) {
        lower.resize(N + 1);
        diag.resize(N + 1);
        upper.resize(N + 1);
        for (std::int64_t k = 0; k <= N; ++k) {
            lower[k] = -rates.a(k);
            diag[k] = alpha + rates.q(k);
            upper[k] = -rates.b(k);
        }
    }
};

struct PairSolve {
    std::vector<double> u;  // boundary solve of (alpha - Q) u = 0, u(N+1) = 1
    std::vector<double> x;  // Dirichlet solve of (alpha I - Q) x = rhs
    std::int64_t N = 0;
    bool converged = false;
    double rel_change = 0.0;
};

// Doubling truncation solve for one right-hand side together with the
// boundary solution at the same level. Convergence is measured on states
// 0..probe: per-entry relative for x, absolute for u (whose values may sink
// to zero under a natural boundary).
PairSolve adaptive_pair_solve(const BirthDeathRates& rates, double alpha,
                              const std::function<double(std::int64_t)>& rhs_at,
                              const SolveControls& ctrl, bool monotone_rhs) {
    if (!(alpha > 0.0)) throw MalformedDescriptor("resolvent solves require alpha > 0");
    TridiagonalSolver thomas;
    TruncatedSystem sys;
    PairSolve out;

    auto solve_at = [&](std::int64_t N, std::vector<double>& u, std::vector<double>& x) {
        sys.assemble(rates, alpha, N);
        std::vector<double> rhs(N + 1);
        for (std::int64_t k = 0; k <= N; ++k) rhs[k] = rhs_at(k);
        thomas.solve(sys.lower, sys.diag, sys.upper, rhs, x);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        rhs[N] = rates.b(N);
        thomas.solve(sys.lower, sys.diag, sys.upper, rhs, u);
    };

    if (ctrl.fixed_n.has_value()) {
        out.N = *ctrl.fixed_n;
        solve_at(out.N, out.u, out.x);
        out.converged = true;
        return out;
    }

    std::int64_t N = std::max({ctrl.n0, ctrl.probe + 1, std::int64_t(2)});
    N = std::min(N, finite_row_limit(rates, alpha, N));
    std::vector<double> u_prev, x_prev;
    solve_at(N, u_prev, x_prev);

    while (true) {
        std::int64_t N2 = std::min(2 * N, finite_row_limit(rates, alpha, 2 * N));
        if (N2 <= N) {
            // representable range exhausted; the absorbing wall beyond is inert
            out.N = N;
            out.u = std::move(u_prev);
            out.x = std::move(x_prev);
            out.converged = true;
            out.rel_change = 0.0;
            return out;
        }
        std::vector<double> u2, x2;
        solve_at(N2, u2, x2);

        double change = 0.0;
        std::int64_t upto = std::min(ctrl.probe, N);
        for (std::int64_t i = 0; i <= upto; ++i) {
            double dx = std::fabs(x2[i] - x_prev[i]) / std::max(std::fabs(x2[i]), 1e-30);
            double du = std::fabs(u2[i] - u_prev[i]);
            change = std::max({change, dx, du});
            if (monotone_rhs && x2[i] < x_prev[i] * (1.0 - 1e-9) - 1e-300)
                throw Error("truncation monotonicity violated at state " + std::to_string(i));
        }
        out.rel_change = change;
        if (change < ctrl.tol) {
            out.N = N2;
            out.u = std::move(u2);
            out.x = std::move(x2);
            out.converged = true;
            return out;
        }
        if (N2 >= ctrl.n_max) throw NoConvergence(ctrl.n_max);
        N = N2;
        u_prev = std::move(u2);
        x_prev = std::move(x2);
    }
}

// Positive series evaluated on at most `limit` terms with a certified tail;
// `beyond_bound` supplies a rigorous bound on the unevaluated remainder when
// the windowed ratio test does not fire within the limit.
SeriesValue certified_prefix_series(const std::function<double(std::int64_t)>& term,
                                    std::int64_t limit, double tol,
                                    const std::function<std::optional<double>(std::int64_t)>&
                                        beyond_bound,
                                    const char* label, std::int64_t& terms_used) {
    SeriesSum s = sum_series([&](std::int64_t k) { return std::optional<double>(term(k)); },
                             limit, tol);
    terms_used = s.terms;
    if (s.verdict == SeriesVerdict::Divergent) throw DivergentSeries(label);
    if (s.verdict == SeriesVerdict::Converged) return {s.value, s.tail_bound};
    std::optional<double> extra = beyond_bound(s.terms);
    if (!extra.has_value()) throw DivergentSeries(label);
    return {s.value, *extra};
}

double payload_sup(const Payload& f) { return std::max(f.sup_abs, std::fabs(f.at_inf)); }

std::vector<double> stehfest_weights(int order) {
    if (order < 2 || order > 16 || order % 2 != 0)
        throw InversionUnstable("order must be even and between 2 and 16");
    int m = order / 2;
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    std::vector<double> V(order + 1, 0.0);
    for (int k = 1; k <= order; ++k) {
        double sum = 0.0;
        for (int j = (k + 1) / 2; j <= std::min(k, m); ++j) {
            sum += std::pow(static_cast<double>(j), m) * fact(2 * j) /
                   (fact(m - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
        }
        V[k] = ((m + k) % 2 == 0 ? 1.0 : -1.0) * sum;
    }
    return V;
}

}  // namespace

MinimalSolveResult minimal_resolvent_column(const BirthDeathRates& rates,
                                            const ScaleSpeedTable& table, double alpha,
                                            std::int64_t j, const SolveControls& ctrl) {
    (void)table;
    if (j < 0) throw MalformedDescriptor("column index must be nonnegative");
    SolveControls c = ctrl;
    c.n0 = std::max(c.n0, j + 8);
    c.probe = std::max(c.probe, j);
    if (c.fixed_n && *c.fixed_n < j)
        throw MalformedDescriptor("fixed truncation below column index");
    PairSolve p = adaptive_pair_solve(
        rates, alpha, [j](std::int64_t k) { return k == j ? 1.0 : 0.0; }, c, true);
    MinimalSolveResult out;
    out.phi_column = std::move(p.x);
    out.u_min = std::move(p.u);
    out.truncation_level = p.N;
    out.converged = p.converged;
    out.rel_change = p.rel_change;
    return out;
}

UMinResult u_min(const BirthDeathRates& rates, const ScaleSpeedTable& table, double alpha,
                 const SolveControls& ctrl) {
    (void)table;
    PairSolve p = adaptive_pair_solve(
        rates, alpha, [](std::int64_t) { return 1.0; }, ctrl, true);
    // x solved the row-sum system, so alpha * x + u = 1 must hold exactly;
    // at deep states 1 - u sinks below machine epsilon and u rounds to 1
    std::int64_t upto = ctrl.fixed_n ? p.N : std::min(ctrl.probe, p.N);
    for (std::int64_t i = 0; i <= upto; ++i) {
        double gap = std::fabs(alpha * p.x[i] + p.u[i] - 1.0);
        if (gap > 10.0 * ctrl.tol) throw CrossCheckFailed(i, gap);
        if (!(p.u[i] > 0.0) || p.u[i] > 1.0) throw CrossCheckFailed(i, p.u[i]);
    }
    UMinResult out;
    out.u = std::move(p.u);
    out.truncation_level = p.N;
    out.converged = p.converged;
    out.rel_change = p.rel_change;
    return out;
}

Payload Payload::indicator(std::int64_t j) {
    Payload f;
    f.at = [j](std::int64_t k) { return k == j ? 1.0 : 0.0; };
    f.at_inf = 0.0;
    f.sup_abs = 1.0;
    return f;
}

Payload Payload::one() {
    Payload f;
    f.at = [](std::int64_t) { return 1.0; };
    f.at_inf = 1.0;
    f.sup_abs = 1.0;
    return f;
}

double ResolventField::value(StatePoint x) const {
    if (x.is_cemetery()) return 0.0;
    if (x.is_infinity()) return value_inf;
    std::int64_t k = x.index();
    if (k <= truncation_level) return values[k];
    return value_inf;
}

Payload ResolventField::as_payload() const {
    auto vals = std::make_shared<std::vector<double>>(values);
    double vinf = value_inf;
    std::int64_t N = truncation_level;
    Payload f;
    f.at = [vals, vinf, N](std::int64_t k) {
        return k <= N ? (*vals)[k] : vinf;
    };
    f.at_inf = vinf;
    f.sup_abs = 0.0;
    for (double v : values) f.sup_abs = std::max(f.sup_abs, std::fabs(v));
    f.sup_abs = std::max(f.sup_abs, std::fabs(vinf));
    return f;
}

ResolventField full_resolvent_field(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                    const ParameterTriple& triple, double alpha,
                                    const Payload& f, const SolveControls& ctrl) {
    (void)table;
    bool reduced = triple.is_reduced_minimal();
    if (!reduced) {
        const AdmissibilityReport* rep = triple.cached_admissibility.get();
        AdmissibilityReport local;
        if (rep == nullptr) {
            BoundaryClass bc = classify_boundary(rates, 1e-8);
            local = check_admissible(triple, rates, bc, 1e-10);
            rep = &local;
        }
        if (!rep->admissible) throw InadmissibleTriple(triple.describe());
    }

    PairSolve p = adaptive_pair_solve(rates, alpha, f.at, ctrl, false);
    ResolventField out;
    out.alpha = alpha;
    out.truncation_level = p.N;

    double lam = 0.0;
    double lam_bound = 0.0;
    if (!reduced) {
        const std::vector<double>& u = p.u;
        const std::vector<double>& x = p.x;
        std::int64_t limit = std::min(ctrl.series_budget, p.N + 1);
        double supf = payload_sup(f);

        std::int64_t used1 = 0;
        SeriesValue nu1mu = certified_prefix_series(
            [&](std::int64_t k) { return triple.nu.at(k) * (1.0 - u[k]); }, limit,
            ctrl.series_tol,
            [&](std::int64_t P) -> std::optional<double> {
                NuMeasure::Mass m = triple.nu.tail_mass(P);
                if (!m.finite) return std::nullopt;
                // 1 - u is nonincreasing, so the remainder is bounded by the mass
                return (m.value + m.bound) * (P > 0 ? (1.0 - u[P - 1]) : 1.0);
            },
            "nu(1-u)", used1);

        double nu_rf = 0.0;
        for (std::int64_t k = 0; k < used1; ++k) nu_rf += triple.nu.at(k) * x[k];
        double nu_rf_bound = supf / alpha * nu1mu.bound;

        double mu_u_val = 0.0, mu_u_bound = 0.0, mu_uf_val = 0.0, mu_uf_bound = 0.0;
        if (triple.beta > 0.0) {
            ScaleSpeedStream s(rates);
            std::vector<double> mu_prefix;
            mu_prefix.reserve(limit);
            for (std::int64_t k = 0; k < limit; ++k) {
                mu_prefix.push_back(s.mu());
                if (k + 1 < limit) s.advance();
            }
            std::int64_t used2 = 0;
            SeriesValue muu = certified_prefix_series(
                [&](std::int64_t k) { return mu_prefix[k] * u[k]; }, limit, ctrl.series_tol,
                [&](std::int64_t) -> std::optional<double> { return std::nullopt; },
                "mu(u)", used2);
            mu_u_val = muu.value;
            mu_u_bound = muu.bound;
            for (std::int64_t k = 0; k < used2; ++k)
                mu_uf_val += mu_prefix[k] * u[k] * f.at(k);
            mu_uf_bound = f.sup_abs * muu.bound;
        }

        double num = nu_rf + triple.beta * mu_uf_val;
        double den = triple.gamma + nu1mu.value + triple.beta * alpha * mu_u_val;
        if (!(den > 0.0)) throw ZeroDenominator("resolvent boundary weight");
        lam = num / den;
        double num_bound = nu_rf_bound + triple.beta * mu_uf_bound;
        double den_bound = nu1mu.bound + triple.beta * alpha * mu_u_bound;
        lam_bound = (num_bound + std::fabs(lam) * den_bound) / den;
    }

    out.values.resize(p.N + 1);
    double vmax = 0.0;
    for (std::int64_t i = 0; i <= p.N; ++i) {
        out.values[i] = p.x[i] + p.u[i] * lam;
        vmax = std::max(vmax, std::fabs(out.values[i]));
    }
    out.value_inf = lam;
    out.error_bound = lam_bound + ctrl.tol * (vmax + std::fabs(lam));
    return out;
}

StatePoint PiDistribution::sample(double u) const {
    double slice = p_cemetery;
    if (u < slice) return StatePoint::cemetery();
    for (std::int64_t k = 0; k < (1 << 24); ++k) {
        slice += pi(k);
        if (u < slice) return StatePoint::finite(k);
    }
    throw Error("instantaneous distribution sampling walked off the support");
}

std::vector<std::pair<StatePoint, double>> PiDistribution::prefix_table(std::int64_t K) const {
    std::vector<std::pair<StatePoint, double>> rows;
    double finite_sum = 0.0;
    for (std::int64_t k = 0; k <= K; ++k) {
        double w = pi(k);
        rows.emplace_back(StatePoint::finite(k), w);
        finite_sum += w;
    }
    auto end = nu.finite_support_end();
    double pd = (end && *end <= K + 1) ? 1.0 - finite_sum : p_cemetery;
    rows.emplace_back(StatePoint::cemetery(), pd);
    return rows;
}

PiDistribution pi_distribution(const ParameterTriple& triple) {
    if (triple.beta != 0.0) throw NotDoob("beta must be 0");
    NuMeasure::Mass m = triple.nu.total_mass();
    if (!m.finite || !(m.value > 0.0)) throw NotDoob("nu must have positive finite mass");
    PiDistribution pi;
    pi.norm = triple.gamma + m.value;
    pi.p_cemetery = triple.gamma / pi.norm;
    pi.nu = triple.nu;
    return pi;
}

std::vector<double> apply_Q(const BirthDeathRates& rates, std::span<const double> F) {
    if (F.size() < 2) throw MalformedDescriptor("apply_Q needs at least two values");
    std::vector<double> out(F.size() - 1);
    for (std::size_t k = 0; k + 1 < F.size(); ++k) {
        double left = k == 0 ? 0.0 : rates.a(k) * F[k - 1];
        out[k] = left - rates.q(k) * F[k] + rates.b(k) * F[k + 1];
    }
    return out;
}

BoundaryResidualResult boundary_residual(const BirthDeathRates& rates,
                                         const ScaleSpeedTable& table,
                                         const ParameterTriple& triple, const Payload& F,
                                         std::int64_t K) {
    if (K < 1) throw MalformedDescriptor("probe depth must be positive");
    BoundaryResidualResult out;
    double finf = F.at_inf;

    if (triple.beta > 0.0) {
        if (table.c_inf.kind != CInfEstimate::Kind::Finite) throw CInfUnavailable();
        double cinf = table.c_inf.value;
        auto c_at = [&](std::int64_t k) {
            if (k < table.prefix_len) return table.c[k];
            ScaleSpeedStream s(rates);
            for (std::int64_t i = 0; i < k; ++i) s.advance();
            return s.c();
        };
        double est_k = (finf - F.at(K)) / (cinf - c_at(K));
        double est_2k = (finf - F.at(2 * K)) / (cinf - c_at(2 * K));
        out.fplus_estimate = est_2k;
        out.fplus_spread = std::fabs(est_k - est_2k);
    }

    // nu-series sum_k (F(inf) - F(k)) nu_k over a prefix with a certified tail
    std::int64_t limit = 1 << 14;
    if (auto end = triple.nu.finite_support_end()) limit = std::min(limit, *end);
    double signed_sum = 0.0;
    std::int64_t used = 0;
    SeriesSum cert = sum_series(
        [&](std::int64_t k) {
            return std::optional<double>(std::fabs((finf - F.at(k)) * triple.nu.at(k)));
        },
        limit, 1e-12);
    double tail = 0.0;
    if (cert.verdict == SeriesVerdict::Converged) {
        used = cert.terms;
        tail = cert.tail_bound;
    } else if (cert.verdict == SeriesVerdict::Inconclusive) {
        NuMeasure::Mass m = triple.nu.tail_mass(cert.terms);
        if (!m.finite) throw TailUnbounded("boundary residual nu-series");
        used = cert.terms;
        double sup = 2.0 * payload_sup(F);
        tail = (m.value + m.bound) * sup;
    } else {
        throw TailUnbounded("boundary residual nu-series");
    }
    for (std::int64_t k = 0; k < used; ++k) signed_sum += (finf - F.at(k)) * triple.nu.at(k);

    out.series_tail = tail;
    out.value = 0.5 * triple.beta * out.fplus_estimate + signed_sum + triple.gamma * finf;
    return out;
}

std::vector<double> semigroup_minimal(const BirthDeathRates& rates, double t, std::int64_t N,
                                      std::span<const double> f) {
    if (t < 0.0) throw MalformedDescriptor("time must be nonnegative");
    if (static_cast<std::int64_t>(f.size()) < N + 1)
        throw MalformedDescriptor("payload prefix shorter than truncation");
    std::vector<double> v(f.begin(), f.begin() + N + 1);
    if (t == 0.0) return v;

    double rate = 0.0;
    for (std::int64_t k = 0; k <= N; ++k) rate = std::max(rate, rates.q(k));
    double x = rate * t;

    std::vector<double> acc(N + 1, 0.0), next(N + 1, 0.0);
    double cum = 0.0;
    std::int64_t m_cap = static_cast<std::int64_t>(x + 60.0 * std::sqrt(x + 1.0) + 100.0);
    for (std::int64_t m = 0; m <= m_cap; ++m) {
        double logw = -x + m * std::log(x) - std::lgamma(m + 1.0);
        double w = (m == 0) ? std::exp(-x) : std::exp(logw);
        for (std::int64_t k = 0; k <= N; ++k) acc[k] += w * v[k];
        cum += w;
        if (cum >= 1.0 - 1e-12) break;
        // one step of the uniformized sub-stochastic kernel
        for (std::int64_t k = 0; k <= N; ++k) {
            double up = k < N ? rates.b(k) * v[k + 1] : 0.0;
            double down = k > 0 ? rates.a(k) * v[k - 1] : 0.0;
            next[k] = v[k] + (down + up - rates.q(k) * v[k]) / rate;
        }
        std::swap(v, next);
    }
    return acc;
}

LaplaceCheckReport transition_laplace_check(const BirthDeathRates& rates,
                                            const ScaleSpeedTable& table,
                                            const ParameterTriple& triple, std::int64_t i,
                                            std::int64_t j, double alpha,
                                            const SolveControls& ctrl, int order) {
    std::vector<double> V = stehfest_weights(order);
    const double ln2 = std::log(2.0);

    ParameterTriple local = triple;
    if (!local.is_reduced_minimal() && !local.cached_admissibility) {
        BoundaryClass bc = classify_boundary(rates, 1e-8);
        local.cached_admissibility =
            std::make_shared<AdmissibilityReport>(check_admissible(local, rates, bc, 1e-10));
    }

    auto phi = [&](double s, const Payload& pay) {
        return full_resolvent_field(rates, table, local, s, pay, ctrl).value(
            StatePoint::finite(i));
    };
    Payload e_j = Payload::indicator(j);
    Payload ones = Payload::one();

    auto invert = [&](double t, const Payload& pay) {
        double sum = 0.0;
        for (int k = 1; k <= order; ++k) sum += V[k] * phi(k * ln2 / t, pay);
        double val = ln2 / t * sum;
        if (!std::isfinite(val) || std::fabs(val) > 2.0)
            throw InversionUnstable("reconstructed value " + std::to_string(val));
        return val;
    };

    LaplaceCheckReport rep;
    rep.alpha = alpha;
    rep.phi_value = phi(alpha, e_j);

    rep.grid.push_back(1e-3);
    for (int g = 1; g <= 50; ++g) rep.grid.push_back(0.1 * g);
    for (double t : rep.grid) {
        rep.phat.push_back(invert(t, e_j));
        rep.max_row_sum = std::max(rep.max_row_sum, invert(t, ones));
    }
    rep.phat_at_zero = rep.phat.front();

    // re-transform: Simpson over [eps, T] plus a flat patch on [0, eps]
    double T = std::max(12.0, 12.0 / alpha);
    double eps = 1e-4;
    int nseg = 480;
    double h = (T - eps) / nseg;
    double integral = 0.0;
    std::vector<double> node(nseg + 1);
    for (int s = 0; s <= nseg; ++s) {
        double t = eps + h * s;
        node[s] = std::exp(-alpha * t) * invert(t, e_j);
    }
    for (int s = 0; s + 2 <= nseg; s += 2)
        integral += h / 3.0 * (node[s] + 4.0 * node[s + 1] + node[s + 2]);
    integral += eps * std::exp(-alpha * eps * 0.5) * rep.phat_at_zero;
    rep.integral = integral;
    rep.gap = std::fabs(rep.integral - rep.phi_value);
    return rep;
}

SeriesValue nu_one_minus_u(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                           const NuMeasure& nu, double alpha, const SolveControls& ctrl) {
    (void)table;
    PairSolve p = adaptive_pair_solve(
        rates, alpha, [](std::int64_t) { return 0.0; }, ctrl, false);
    std::int64_t limit = std::min(ctrl.series_budget, p.N + 1);
    std::int64_t used = 0;
    return certified_prefix_series(
        [&](std::int64_t k) { return nu.at(k) * (1.0 - p.u[k]); }, limit, ctrl.series_tol,
        [&](std::int64_t P) -> std::optional<double> {
            NuMeasure::Mass m = nu.tail_mass(P);
            if (!m.finite) return std::nullopt;
            return (m.value + m.bound) * (P > 0 ? (1.0 - p.u[P - 1]) : 1.0);
        },
        "nu(1-u)", used);
}

SeriesValue mu_u(const BirthDeathRates& rates, const ScaleSpeedTable& table, double alpha,
                 const SolveControls& ctrl) {
    (void)table;
    PairSolve p = adaptive_pair_solve(
        rates, alpha, [](std::int64_t) { return 0.0; }, ctrl, false);
    std::int64_t limit = std::min(ctrl.series_budget, p.N + 1);
    ScaleSpeedStream s(rates);
    std::vector<double> mu_prefix;
    mu_prefix.reserve(limit);
    for (std::int64_t k = 0; k < limit; ++k) {
        mu_prefix.push_back(s.mu());
        if (k + 1 < limit) s.advance();
    }
    std::int64_t used = 0;
    return certified_prefix_series(
        [&](std::int64_t k) { return mu_prefix[k] * p.u[k]; }, limit, ctrl.series_tol,
        [&](std::int64_t) -> std::optional<double> { return std::nullopt; }, "mu(u)", used);
}

}  // namespace bdp
