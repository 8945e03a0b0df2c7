#include "bdp/config.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace bdp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "command", "rates.family", "rates.ratio", "rates.params", "rates.a", "rates.b",
        "triple.gamma", "triple.beta", "triple.nu.family", "triple.nu.values",
        "triple.nu.params", "triple.nu.c", "triple.nu.rho", "triple.nu.p",
        "alpha", "n_grid", "probe_k", "scheme", "payload.kind", "payload.index",
        "k", "tol", "threshold",
        "sim.kind", "sim.i0", "sim.cap", "sim.horizon", "sim.count", "sim.n",
        "sim.max_events",
        "mc.experiment", "mc.count", "mc.seed", "mc.threads", "mc.horizon",
        "mc.times", "mc.fns",
        "distance.a", "distance.b", "distance.t", "distance.jmax",
        "out"};
    return keys;
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggest(const std::string& key) {
    int best = 1 << 30;
    std::string who;
    for (const std::string& k : known_keys()) {
        int d = edit_distance(key, k);
        if (d < best) {
            best = d;
            who = k;
        }
    }
    return best <= 3 ? "; did you mean '" + who + "'?" : "";
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key, "not a real number: '" + v + "'");
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::int64_t x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key, "not an integer: '" + v + "'");
    }
}

std::vector<std::string> split_list(const std::string& v, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& tok : split_list(v, ',')) out.push_back(to_double(key, tok));
    if (out.empty()) throw ValidationError(key, "empty list");
    return out;
}

std::vector<std::int64_t> to_ints(const std::string& key, const std::string& v) {
    std::vector<std::int64_t> out;
    for (const std::string& tok : split_list(v, ',')) out.push_back(to_int(key, tok));
    if (out.empty()) throw ValidationError(key, "empty list");
    return out;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

ConfigMap read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    ConfigMap cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError(lineno, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ParseError(lineno, "empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError(lineno, "empty key");
        if (!section.empty()) key = section + "." + key;
        if (cfg.values.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
        cfg.values[key] = value;
        cfg.lines[key] = lineno;
    }
    return cfg;
}

ExperimentPlan make_plan(const ConfigMap& config, const std::string& command_override) {
    for (const auto& [key, value] : config.values) {
        (void)value;
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
            throw ValidationError(key, "unknown key" + suggest(key));
    }

    auto get = [&config](const std::string& key) -> std::optional<std::string> {
        auto it = config.values.find(key);
        if (it == config.values.end()) return std::nullopt;
        return it->second;
    };

    ExperimentPlan plan;
    if (auto v = get("command")) plan.command = *v;
    if (!command_override.empty()) plan.command = command_override;
    if (plan.command.empty()) throw ValidationError("command", "missing subcommand");

    if (auto fam = get("rates.family")) {
        // rates.params is the positional spelling of the family parameter
        auto ratio_of = [&](double fallback) {
            if (auto v = get("rates.ratio")) return to_double("rates.ratio", *v);
            if (auto v = get("rates.params")) return to_doubles("rates.params", *v).front();
            return fallback;
        };
        try {
            if (*fam == "linear") {
                plan.rates = BirthDeathRates::linear();
            } else if (*fam == "geometric_regular") {
                plan.rates = BirthDeathRates::geometric_regular(ratio_of(4.0));
            } else if (*fam == "geometric_exit") {
                plan.rates = BirthDeathRates::geometric_exit(ratio_of(2.0));
            } else if (*fam == "table") {
                if (!get("rates.a") || !get("rates.b"))
                    throw ValidationError("rates.a", "table rates need rates.a and rates.b");
                plan.rates = BirthDeathRates::table(to_doubles("rates.a", *get("rates.a")),
                                                    to_doubles("rates.b", *get("rates.b")));
            } else {
                throw ValidationError("rates.family", "unknown family '" + *fam + "'");
            }
        } catch (const NonPositiveRate& e) {
            throw ValidationError("rates", e.what());
        } catch (const MalformedDescriptor& e) {
            throw ValidationError("rates", e.what());
        }
    }

    if (get("triple.gamma") || get("triple.beta") || get("triple.nu.family")) {
        double gamma = get("triple.gamma") ? to_double("triple.gamma", *get("triple.gamma")) : 0.0;
        double beta = get("triple.beta") ? to_double("triple.beta", *get("triple.beta")) : 0.0;
        NuMeasure nu = NuMeasure::zero();
        std::string fam = get("triple.nu.family") ? *get("triple.nu.family") : "none";
        // triple.nu.params carries the family parameters positionally
        std::vector<double> params;
        if (auto v = get("triple.nu.params")) params = to_doubles("triple.nu.params", *v);
        auto param = [&](const char* key, std::size_t pos, double fallback) {
            if (auto v = get(key)) return to_double(key, *v);
            if (pos < params.size()) return params[pos];
            return fallback;
        };
        try {
            if (fam == "none") {
                nu = NuMeasure::zero();
            } else if (fam == "finite_table") {
                if (auto v = get("triple.nu.values"))
                    nu = NuMeasure::finite_table(to_doubles("triple.nu.values", *v));
                else if (!params.empty())
                    nu = NuMeasure::finite_table(params);
                else
                    throw ValidationError("triple.nu.values", "finite table needs values");
            } else if (fam == "geometric") {
                nu = NuMeasure::geometric(param("triple.nu.c", 0, 1.0),
                                          param("triple.nu.rho", 1, 0.5));
            } else if (fam == "power_tail") {
                nu = NuMeasure::power_tail(param("triple.nu.c", 0, 1.0),
                                           param("triple.nu.p", 1, 2.0));
            } else {
                throw ValidationError("triple.nu.family", "unknown family '" + fam + "'");
            }
            plan.triple = ParameterTriple(gamma, beta, std::move(nu));
        } catch (const MalformedDescriptor& e) {
            throw ValidationError("triple.nu", e.what());
        }
    }

    if (auto v = get("alpha")) plan.alphas = to_doubles("alpha", *v);
    if (auto v = get("n_grid")) plan.n_grid = to_ints("n_grid", *v);
    if (auto v = get("probe_k")) plan.probe_k = to_ints("probe_k", *v);
    if (auto v = get("scheme")) {
        if (*v != "truncation" && *v != "tailshift" && *v != "wang")
            throw ValidationError("scheme", "unknown scheme '" + *v + "'");
        plan.scheme = *v;
    }
    if (auto v = get("payload.kind")) {
        if (*v != "indicator" && *v != "one")
            throw ValidationError("payload.kind", "unknown payload '" + *v + "'");
        plan.payload_kind = *v;
    }
    if (auto v = get("payload.index")) plan.payload_index = to_int("payload.index", *v);
    if (auto v = get("k")) plan.depth_k = to_int("k", *v);
    if (auto v = get("tol")) plan.tol = to_double("tol", *v);
    if (auto v = get("threshold")) plan.threshold = to_double("threshold", *v);

    if (auto v = get("sim.kind")) {
        if (*v != "minimal" && *v != "doob" && *v != "wang")
            throw ValidationError("sim.kind", "unknown simulator '" + *v + "'");
        plan.sim_kind = *v;
    }
    if (auto v = get("sim.i0")) plan.sim_i0 = to_int("sim.i0", *v);
    if (auto v = get("sim.cap")) plan.sim_cap = to_int("sim.cap", *v);
    if (auto v = get("sim.horizon")) plan.sim_horizon = to_double("sim.horizon", *v);
    if (auto v = get("sim.count")) plan.sim_count = to_int("sim.count", *v);
    if (auto v = get("sim.n")) plan.sim_n = to_int("sim.n", *v);
    if (auto v = get("sim.max_events")) plan.sim_max_events = to_int("sim.max_events", *v);

    if (auto v = get("mc.experiment")) {
        if (*v != "dprime" && *v != "fdd")
            throw ValidationError("mc.experiment", "unknown experiment '" + *v + "'");
        plan.mc_experiment = *v;
    }
    if (auto v = get("mc.count")) plan.mc_count = to_int("mc.count", *v);
    if (auto v = get("mc.seed")) plan.mc_seed = static_cast<std::uint64_t>(to_int("mc.seed", *v));
    if (auto v = get("mc.threads")) plan.mc_threads = static_cast<int>(to_int("mc.threads", *v));
    if (auto v = get("mc.horizon")) plan.mc_horizon = to_double("mc.horizon", *v);
    if (auto v = get("mc.times")) plan.mc_times = to_doubles("mc.times", *v);
    if (auto v = get("mc.fns")) {
        plan.mc_fns = split_list(*v, ' ');
        if (plan.mc_fns.empty()) throw ValidationError("mc.fns", "empty list");
    }

    if (auto v = get("distance.a")) plan.distance_a = *v;
    if (auto v = get("distance.b")) plan.distance_b = *v;
    if (auto v = get("distance.t")) plan.distance_t = to_double("distance.t", *v);
    if (auto v = get("distance.jmax"))
        plan.distance_jmax = static_cast<int>(to_int("distance.jmax", *v));
    if (auto v = get("out")) plan.out_dir = *v;

    // deterministic hash over the canonical keys; the thread count and the
    // output directory are execution details, not experiment identity
    std::uint64_t h = 14695981039346656037ull;
    h = fnv1a("command=" + plan.command + "\n", h);
    for (const auto& [key, value] : config.values) {
        if (key == "mc.threads" || key == "out" || key == "command") continue;
        h = fnv1a(key + "=" + value + "\n", h);
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    plan.config_hash = buf;
    return plan;
}

}  // namespace bdp
