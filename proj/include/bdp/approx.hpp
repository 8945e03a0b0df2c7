#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bdp/resolvent.hpp"

namespace bdp {

/// Restriction of nu to {0..n}; gamma and beta unchanged.
ParameterTriple truncate_triple(const ParameterTriple& triple, std::int64_t n);

/// Zeroes nu on {0..n} and keeps the tail; requires an analytic tail
/// descriptor so the result still carries certified mass bounds.
ParameterTriple tailshift_triple(const ParameterTriple& triple, std::int64_t n);

/// The excision approximant: gamma unchanged, beta dropped to 0, nu kept
/// below n and the mass
///   (beta/2 + sum_{k>=n} (c_inf - c_k) nu_k) / (c_inf - c_n)
/// placed at n. Always Doob-form.
ParameterTriple wang_triple(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                            const ParameterTriple& triple, std::int64_t n);

/// Generator of approximating triples indexed by n.
using TripleScheme = std::function<ParameterTriple(std::int64_t)>;

struct ReportRow {
    double n = 0.0;
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    int pass = -1;  ///< 1 pass, 0 fail, -1 not asserted
};

struct Report {
    std::vector<ReportRow> rows;
    bool all_passed() const;
    const ReportRow* find(double n, const std::string& name) const;
    void write_csv(std::ostream& os) const;  // columns n,name,value,bound,pass
    static Report read_csv(std::istream& is);
};

/// Tabulates the four convergence clauses for a scheme against its target:
/// gamma, beta, nu_k pointwise on probed indices, and nu(1 - u_alpha) per
/// alpha. Pass/fail is asserted on the last n of the grid against
/// `threshold`.
Report triple_convergence_report(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                 const TripleScheme& scheme, const ParameterTriple& target,
                                 const std::vector<double>& alphas,
                                 const std::vector<std::int64_t>& n_grid,
                                 const std::vector<std::int64_t>& probe_k,
                                 double threshold, const SolveControls& ctrl);

/// Gaps of the scheme resolvents against the target resolvent:
/// sup over k <= K, the value at infinity, and the lifetime transforms.
Report resolvent_convergence_report(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                    const TripleScheme& scheme, const ParameterTriple& target,
                                    double alpha, const Payload& f, std::int64_t K,
                                    const std::vector<std::int64_t>& n_grid, double threshold,
                                    const SolveControls& ctrl);

/// Numerical check of the two excision limit ratios
///   Phi_{n k}(alpha) / (c_inf - c_n) -> 2 u_alpha(k) mu_k,
///   (1 - u_alpha(n)) / (c_inf - c_n) -> 2 alpha mu(u_alpha),
/// reported as relative gaps per n. On an exit boundary mu(u_alpha) diverges,
/// so the second family of rows is reported raw without pass/fail.
Report wang_limit_checks(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                         const std::vector<double>& alphas, std::int64_t k_probe,
                         const std::vector<std::int64_t>& n_grid, double rel_threshold,
                         const SolveControls& ctrl);

struct Projection {
    Payload g_n;
    double chi = 0.0;
};

/// Uniform-norm projection of g onto the boundary space of a Doob-form
/// triple: g_n = g + chi * 1_{0..N} with
///   chi = [sum_k (g(inf) - g(k)) nu_k + gamma g(inf)] / sum_{k<=N} nu_k.
/// When the prefix mass vanishes and nu is a single atom beyond N (the
/// excision source with zero target measure), only the atom position is
/// adjusted instead.
Projection project_to_Cn(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                         const ParameterTriple& triple_n, const Payload& g, std::int64_t N);

}  // namespace bdp
