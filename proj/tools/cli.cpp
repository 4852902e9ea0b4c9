#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "rsb/besov.hpp"
#include "rsb/embeddings.hpp"
#include "rsb/numerics.hpp"
#include "rsb/pairing.hpp"
#include "rsb/reconstruction.hpp"
#include "rsb/schauder.hpp"

namespace rsb::cli {

namespace {

const double kTwoPi = 2.0 * std::acos(-1.0);

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    if (t == "inf" || t == "Inf" || t == "INF") return kInf;
    try {
        std::size_t used = 0;
        double x = std::stod(t, &used);
        if (used == t.size() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    throw PreconditionError("config: " + key + " = '" + v + "' is not a number");
}

long parse_int(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    try {
        std::size_t used = 0;
        long x = std::stol(t, &used);
        if (used == t.size()) return x;
    } catch (const std::exception&) {
    }
    throw PreconditionError("config: " + key + " = '" + v + "' is not an integer");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    try {
        std::size_t used = 0;
        if (!t.empty() && t[0] != '-') {
            auto x = std::stoull(t, &used);
            if (used == t.size()) return x;
        }
    } catch (const std::exception&) {
    }
    throw PreconditionError("config: " + key + " = '" + v + "' is not an unsigned integer");
}

std::vector<int> parse_scaling(const std::string& v) {
    std::vector<int> s;
    std::string t = v;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    std::string tok;
    while (is >> tok) s.push_back(static_cast<int>(parse_int("grid.scaling", tok)));
    return s;
}

const std::vector<std::string> kKeys = {
    "grid.scaling",  "grid.d",         "grid.levels",     "wavelet.order", "model.structure", "model.gamma",
    "model.alpha",   "besov.p",        "besov.q",         "schauder.beta", "schauder.kernel", "schauder.gamma",
    "run.seed",      "run.input",      "output.dir",      "output.format"};

bool is_integer(double v) { return std::abs(v - std::round(v)) <= 1e-6; }

// sin(2 pi x_0) and its derivatives
double dsin(const MultiIndex& k, const Point& x, int d) {
    for (int i = 1; i < d; ++i)
        if (k[static_cast<std::size_t>(i)] > 0) return 0.0;
    int m = k[0];
    double a = kTwoPi * x[0], c = std::pow(kTwoPi, m);
    switch (m % 4) {
        case 0: return c * std::sin(a);
        case 1: return c * std::cos(a);
        case 2: return -c * std::sin(a);
        default: return -c * std::cos(a);
    }
}

double sin0(const Point& x) { return std::sin(kTwoPi * x[0]); }

struct Setup {
    Scaling s;
    int N;
    std::shared_ptr<const Wavelet> w;
};

Setup setup(const ExperimentConfig& c) {
    return {Scaling(c.scaling), c.levels, std::make_shared<Wavelet>(Wavelet::build(c.wavelet_order, 0))};
}

Pyramid input_field(const ExperimentConfig& c, const Setup& S, int N) {
    if (c.input == "dirac") {
        Point x0{};
        x0.fill(0.0);
        x0[0] = 0.3;
        return synthesize_dirac(S.s, N, *S.w, x0);
    }
    if (c.input == "random") return synthesize_random_besov(S.s, N, c.alpha, c.seed);
    return analyze(project_smooth(S.s, N, *S.w, sin0), S.s, N, *S.w);
}

double fit_order(const std::vector<double>& ns, const std::vector<double>& errs) {
    std::vector<double> ys;
    for (double e : errs) ys.push_back(-std::log2(e));
    return slope_fit(ns, ys);
}

ModelledDistribution sin_lift(const Model& M, double gamma) {
    int d = M.structure().scaling().dim();
    return taylor_lift(M, gamma, [d](const MultiIndex& k, const Point& x) { return dsin(k, x, d); });
}

// cos(2 pi x_0) Xi on the noise structure
ModelledDistribution noise_md(const Model& M, double gamma) {
    ModelledDistribution f(M, gamma);
    int X = M.structure().find("Xi");
    for (std::int64_t x = 0; x < M.grid().size(); ++x)
        f.at(x)[X] = std::cos(kTwoPi * M.grid().point(M.grid().unflatten(x))[0]);
    return f;
}

bool noise(const ExperimentConfig& c) { return c.structure != "polynomial"; }

Model base_model(const ExperimentConfig& c, const Setup& S, int N, double gamma, Pyramid* xi_out = nullptr) {
    if (!noise(c)) return Model::polynomial(S.s, gamma, S.w, N);
    auto xi = synthesize_random_besov(S.s, N, c.alpha, c.seed);
    if (xi_out) *xi_out = xi;
    return Model::noise(c.alpha, xi, gamma, S.w);
}

Structure base_structure(const ExperimentConfig& c, double gamma) {
    Scaling s(c.scaling);
    return noise(c) ? Structure::noise(s, c.alpha, gamma) : Structure::polynomial(s, gamma);
}

KernelDecomposition kernel(const ExperimentConfig& c) {
    int r = std::max(3, static_cast<int>(std::ceil(c.schauder_gamma)));
    if (c.kernel == "heat") return KernelDecomposition::heat(static_cast<int>(c.scaling.size()), r);
    return KernelDecomposition::riesz(Scaling(c.scaling), c.beta, r);
}

int first_fit_level(int N) { return std::max(1, N / 2); }

// ---- subcommands

void cmd_synthesize(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    auto xi = input_field(c, S, S.N);
    std::filesystem::create_directories(c.out);
    save_rsbf((std::filesystem::path(c.out) / "xi.rsbf").string(), xi);
    R.add("field", "l2", -1, xi.l2());
    R.add("field", "base_l2", -1, weighted_pnorm(xi.base, 1.0, 2.0));
    auto t = unweighted_levels(xi, c.p);
    auto& plot = R.plots["levels"];
    for (int n = 0; n < xi.levels; ++n) {
        R.add("levels", "t_n", n, t[static_cast<std::size_t>(n)]);
        plot.emplace_back(n, t[static_cast<std::size_t>(n)]);
    }
}

void cmd_besov(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    auto xi = input_field(c, S, S.N);
    auto b = besov_norm_wavelet(xi, {c.alpha, c.p, c.q});
    R.add("besov", "value", -1, b.value);
    R.add("besov", "base", -1, b.base);
    auto& plot = R.plots["scale_norm"];
    for (std::size_t n = 0; n < b.level_sup.size(); ++n) {
        R.add("besov", "level_sup", static_cast<long>(n), b.level_sup[n]);
        plot.emplace_back(static_cast<double>(n), b.level_sup[n]);
    }
    int from = std::max(1, S.N / 3);
    for (double p : {1.0, 2.0, kInf}) {
        std::string key = "p=" + fmt(p);
        R.add("critical", key, from, critical_exponent(xi, p, from));
        if (c.input == "dirac") R.add("critical_expected", key, -1, -S.s.total() + (std::isinf(p) ? 0.0 : S.s.total() / p));
    }
}

void add_dnorm(Report& R, const std::string& table, const DNormReport& d) {
    R.add(table, "total", -1, d.total);
    for (std::size_t z = 0; z < d.zetas.size(); ++z) {
        std::string zt = "zeta=" + fmt(d.zetas[z]);
        R.add(table, zt + ":local", -1, d.local[z]);
        for (std::size_t n = 0; n < d.translation[z].size(); ++n)
            R.add(table, zt + ":translation", static_cast<long>(n), d.translation[z][n]);
        if (z < d.consistency.size())
            for (std::size_t n = 0; n < d.consistency[z].size(); ++n)
                R.add(table, zt + ":consistency", static_cast<long>(n), d.consistency[z][n]);
        if (z < d.truncation.size()) R.add(table, zt + ":truncation", -1, d.truncation[z]);
    }
}

void cmd_dnorm(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    auto M = base_model(c, S, S.N, c.gamma);
    auto f = noise(c) ? noise_md(M, c.gamma) : sin_lift(M, c.gamma);
    auto d = d_norm(f, M, c.p, c.q);
    add_dnorm(R, "dnorm", d);
    auto db = dbar_norm(average(f, M), M, c.p, c.q);
    R.add("dbar", "total", -1, db.total);
    R.add("dbar", "ratio", -1, db.total / d.total);
    for (std::size_t z = 0; z < d.zetas.size(); ++z) {
        auto& plot = R.plots["translation_" + std::to_string(z)];
        for (std::size_t n = 0; n < d.translation[z].size(); ++n)
            if (d.translation[z][n] > 0) plot.emplace_back(static_cast<double>(n), d.translation[z][n]);
    }
}

void add_certificate(Report& R, const SewingCertificate& cert) {
    R.add("certificate", "germ_sup", -1, cert.germ_sup);
    R.add("certificate", "increment_lq", -1, cert.increment_lq);
    R.add("certificate", "increment_growth", -1, cert.increment_growth);
    for (std::size_t n = 0; n < cert.increment.size(); ++n)
        R.add("certificate", "increment", static_cast<long>(n), cert.increment[n]);
}

void cmd_reconstruct(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    if (noise(c)) {
        Pyramid xi;
        auto M = base_model(c, S, S.N, c.gamma, &xi);
        auto f = constant_md(M, c.gamma, M.structure().find("Xi"));
        auto r = reconstruct(f, M, c.p, c.q);
        double e = 0;
        auto d = r.xi - xi;
        e = std::max(e, weighted_pnorm(d.base, 1.0, kInf));
        for (auto& v : d.details) e = std::max(e, weighted_pnorm(v, 1.0, kInf));
        R.add("noise", "max_coefficient_error", S.N, e);
        R.add("noise", "alpha_target", -1, r.alpha_target);
        R.add("noise", "alpha_bar", -1, r.alpha_bar);
        add_certificate(R, r.cert);
        return;
    }
    std::vector<double> ns, errs;
    const double ref = std::sqrt(0.5);
    SewingCertificate last;
    auto& plot = R.plots["error"];
    // below level 5 the increments are still transient and the growth certificate trips
    for (int N = std::max(5, S.N - 4); N <= S.N; ++N) {
        auto M = Model::polynomial(S.s, c.gamma, S.w, N);
        auto r = reconstruct(sin_lift(M, c.gamma), M, c.p, c.q);
        double e = l2_distance_to_function(r.xi, *S.w, sin0) / ref;
        R.add("error", "rel_l2", N, e);
        plot.emplace_back(N, e);
        ns.push_back(N);
        errs.push_back(e);
        if (N == S.N) last = r.cert;
    }
    if (ns.size() >= 2) R.add("error", "order", -1, fit_order(ns, errs));
    add_certificate(R, last);
}

void cmd_roundtrip(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    auto M = base_model(c, S, S.N, c.gamma);
    auto f = noise(c) ? noise_md(M, c.gamma) : sin_lift(M, c.gamma);
    auto fb = average(f, M);
    auto ua = unaverage(fb, M, c.p, &f);
    R.add("roundtrip", "divergent", -1, ua.divergent ? 1.0 : 0.0);
    auto zetas = M.structure().homogeneities();
    std::sort(zetas.begin(), zetas.end());
    zetas.erase(std::unique(zetas.begin(), zetas.end()), zetas.end());
    int lo = first_fit_level(S.N), hi = S.N - 2;
    for (std::size_t z = 0; z < ua.errors.size(); ++z) {
        std::string zt = "zeta=" + fmt(z < zetas.size() ? zetas[z] : static_cast<double>(z));
        auto& plot = R.plots["error_" + std::to_string(z)];
        std::vector<double> xs, ys;
        for (std::size_t n = 0; n < ua.errors[z].size(); ++n) {
            double e = ua.errors[z][n];
            R.add("error", zt, static_cast<long>(n), e);
            if (e > 0) plot.emplace_back(static_cast<double>(n), e);
            if (static_cast<int>(n) >= lo && static_cast<int>(n) <= hi && e > 0) {
                xs.push_back(static_cast<double>(n));
                ys.push_back(e);
            }
        }
        if (xs.size() >= 2) R.add("order", zt, -1, fit_order(xs, ys));
        if (z < ua.decay.size()) R.add("decay", zt, -1, ua.decay[z]);
    }
    double db = dbar_norm(fb, M, c.p, c.q).total, dn = d_norm(f, M, c.p, c.q).total;
    R.add("equivalence", "dbar_over_d", S.N, db / dn);
}

void cmd_lift(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    auto M = Model::polynomial(S.s, c.gamma, S.w, S.N);
    auto xi = input_field(c, S, S.N);
    auto L = lift(xi, M, c.gamma, c.p, c.q);
    R.add("lift", "roundtrip", S.N, L.roundtrip);
    auto bl = project(xi, std::max(0, S.N - 2), Subspace::V);
    R.add("lift", "roundtrip_band_limited", S.N, lift(bl, M, c.gamma, c.p, c.q).roundtrip);
    const int d = S.s.dim();
    if (c.input == "sin") {
        for (int t = 0; t < M.size(); ++t) {
            const auto& k = M.structure()[t].k;
            double err = 0, ref = 0;
            for (std::int64_t x = 0; x < M.grid().size(); ++x) {
                double want = dsin(k, M.grid().point(M.grid().unflatten(x)), d) / mi_factorial(k, d);
                err = std::max(err, std::abs(L.f.at(x)[t] - want));
                ref = std::max(ref, std::abs(want));
            }
            R.add("taylor", M.structure()[t].name, -1, ref > 0 ? err / ref : err);
        }
    }
    auto dc = derivative_check(L.f, M, L.reconstructed);
    for (std::size_t i = 0; i < dc.k.size(); ++i)
        R.add("derivative", poly_name(dc.k[i], d), -1, dc.rel_error[i]);
    for (std::size_t z = 0; z < L.convergence.decay.size(); ++z) R.add("convergence", "decay", static_cast<long>(z), L.convergence.decay[z]);
}

std::vector<EmbeddingCase> canonical_cases(const ExperimentConfig& c) {
    double g = c.gamma, st = static_cast<double>(Scaling(c.scaling).total());
    return {{1, g, 2, 2, g, 2, kInf},
            {2, g, 2, 2, g - 1.0, 2, 1},
            {3, g, kInf, 2, g, 2, 2},
            {4, g, 2, 2, g - st / 2 - 0.01, kInf, 2}};
}

void cmd_embed(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    auto M = Model::polynomial(S.s, c.gamma, S.w, S.N);
    for (const auto& ec : canonical_cases(c)) {
        std::string key = "case" + std::to_string(ec.id);
        try {
            check_case(ec, M.structure());
            check_gamma(M.structure(), ec.gamma_t);
        } catch (const PreconditionError&) {
            R.add("embed", key + ":skipped", -1, 1.0);
            continue;
        }
        double worst = 0;
        for (std::uint64_t k = 0; k < 4; ++k) {
            auto e = embed_check(random_jet(M, c.gamma, c.seed + k), M, ec);
            R.add("embed", key + ":ratio", static_cast<long>(c.seed + k), e.ratio);
            worst = std::max(worst, e.ratio);
        }
        R.add("embed", key + ":max_ratio", S.N, worst);
    }
}

void cmd_schauder(const ExperimentConfig& c, Report& R) {
    auto S = setup(c);
    const double g = c.schauder_gamma;
    auto K = kernel(c);
    std::vector<double> ns, errs;
    auto& plot = R.plots["identity"];
    for (int N = std::max(1, S.N - 2); N <= S.N; ++N) {
        auto M = base_model(c, S, N, g);
        auto f = noise(c) ? noise_md(M, g) : sin_lift(M, g);
        auto E = extend_structure(M, K, g);
        auto r = convolution_identity_check(f, M, E, K, c.p, c.q);
        R.add("identity", "rel_error", N, r.rel_error);
        plot.emplace_back(N, r.rel_error);
        if (r.rel_error > 0) {
            ns.push_back(N);
            errs.push_back(r.rel_error);
        }
        if (N == S.N) {
            auto P = schauder_apply(f, M, E, K, reconstruct(f, M, c.p, c.q).xi, c.p, c.q);
            R.add("schauder", "output_dnorm", N, P.norm.total);
            R.add("schauder", "input_dnorm", N, d_norm(f, M, c.p, c.q).total);
            R.add("schauder", "extended_size", N, E.model.size());
        }
    }
    if (ns.size() >= 2) R.add("identity", "order", -1, fit_order(ns, errs));
    auto xi = synthesize_random_besov(S.s, S.N, c.alpha, c.seed);
    auto y = convolve_plus(xi, *S.w, K);
    int from = std::max(1, S.N - 4);
    R.add("gain", "measured", from, critical_exponent(y, 2, from) - critical_exponent(xi, 2, from));
    R.add("gain", "beta", -1, K.beta());
}

using Fn = void (*)(const ExperimentConfig&, Report&);

const std::vector<std::pair<std::string, Fn>>& table() {
    static const std::vector<std::pair<std::string, Fn>> t = {
        {"synthesize", cmd_synthesize}, {"besov", cmd_besov},   {"dnorm", cmd_dnorm},
        {"reconstruct", cmd_reconstruct}, {"roundtrip", cmd_roundtrip}, {"lift", cmd_lift},
        {"embed", cmd_embed},           {"schauder", cmd_schauder}};
    return t;
}

std::string usage() {
    std::ostringstream os;
    os << "usage: rsb <command> --config FILE [flags]\n"
       << "commands:";
    for (const auto& c : commands()) os << ' ' << c;
    os << "\nflags: --seed U64 --levels N --gamma R --p R|inf --q R|inf --alpha R --beta R\n"
       << "       --wavelet-order K --out DIR --format csv|jsonl\n"
       << "config: [grid] scaling, levels  [wavelet] order  [model] structure, gamma, alpha\n"
       << "        [besov] p, q  [schauder] beta, kernel  [run] seed, input  [output] dir, format\n";
    return os.str();
}

}  // namespace

std::map<std::string, std::string> ExperimentConfig::resolved() const {
    std::map<std::string, std::string> m;
    std::string sc;
    for (std::size_t i = 0; i < scaling.size(); ++i) sc += (i ? "," : "") + std::to_string(scaling[i]);
    m["grid.scaling"] = sc;
    m["grid.d"] = std::to_string(scaling.size());
    m["grid.levels"] = std::to_string(levels);
    m["wavelet.order"] = std::to_string(wavelet_order);
    m["model.structure"] = structure;
    m["model.gamma"] = fmt(gamma);
    m["model.alpha"] = fmt(alpha);
    m["besov.p"] = fmt(p);
    m["besov.q"] = fmt(q);
    m["schauder.beta"] = fmt(beta);
    m["schauder.kernel"] = kernel;
    m["schauder.gamma"] = fmt(schauder_gamma);
    m["run.seed"] = std::to_string(seed);
    m["run.input"] = input;
    m["output.format"] = format;
    return m;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw PreconditionError("config: line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw PreconditionError("config: line " + std::to_string(lineno) + ": expected key = value under a [section]");
        std::string key = section + "." + trim(line.substr(0, eq));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw PreconditionError("config: unknown key " + key);
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

ExperimentConfig resolve(const std::map<std::string, std::string>& kv) {
    ExperimentConfig c;
    auto get = [&](const char* k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto v = get("grid.scaling")) c.scaling = parse_scaling(*v);
    if (auto v = get("grid.d")) {
        long d = parse_int("grid.d", *v);
        if (!get("grid.scaling")) c.scaling.assign(static_cast<std::size_t>(std::clamp(d, 1L, 4L)), 1);
        if (d != static_cast<long>(c.scaling.size()))
            throw PreconditionError("config: grid.d = " + *v + " does not match grid.scaling");
    }
    if (auto v = get("grid.levels")) c.levels = static_cast<int>(parse_int("grid.levels", *v));
    if (auto v = get("wavelet.order")) c.wavelet_order = static_cast<int>(parse_int("wavelet.order", *v));
    if (auto v = get("model.structure")) c.structure = *v;
    if (auto v = get("model.gamma")) c.gamma = parse_real("model.gamma", *v);
    if (auto v = get("model.alpha")) c.alpha = parse_real("model.alpha", *v);
    if (auto v = get("besov.p")) c.p = parse_real("besov.p", *v);
    if (auto v = get("besov.q")) c.q = parse_real("besov.q", *v);
    if (auto v = get("schauder.beta")) c.beta = parse_real("schauder.beta", *v);
    if (auto v = get("schauder.kernel")) c.kernel = *v;
    c.schauder_gamma = c.gamma;
    if (auto v = get("schauder.gamma")) c.schauder_gamma = parse_real("schauder.gamma", *v);
    if (auto v = get("run.seed")) c.seed = parse_u64("run.seed", *v);
    if (auto v = get("run.input")) c.input = *v;
    if (auto v = get("output.dir")) c.out = *v;
    if (auto v = get("output.format")) c.format = *v;
    return c;
}

void validate(const ExperimentConfig& c, const std::string& command) {
    require(std::find(commands().begin(), commands().end(), command) != commands().end(),
            "unknown command '" + command + "'");
    require(!c.scaling.empty() && c.scaling.size() <= static_cast<std::size_t>(kMaxDim),
            "grid.scaling: need 1 to 4 entries");
    int total = 0;
    for (int si : c.scaling) {
        require(si >= 1, "grid.scaling: entries must be positive integers");
        total += si;
    }
    require(c.levels >= 1, "grid.levels: must be >= 1");
    require(c.levels * total <= 24, "grid.levels: levels * |s| must be <= 24");
    require(c.wavelet_order >= 1 && c.wavelet_order <= 10, "wavelet.order: must be in 1..10");
    require(c.p >= 1, "besov.p: must be >= 1");
    require(c.q >= 1, "besov.q: must be >= 1");
    require(c.structure == "polynomial" || c.structure == "noise" || c.structure == "extended",
            "model.structure: must be polynomial, noise or extended");
    require(c.input == "sin" || c.input == "dirac" || c.input == "random", "run.input: must be sin, dirac or random");
    require(c.format == "csv" || c.format == "jsonl", "output.format: must be csv or jsonl");
    require(c.kernel == "riesz" || c.kernel == "heat", "schauder.kernel: must be riesz or heat");
    if (c.structure == "extended")
        require(command == "schauder" || command == "report",
                "model.structure: extended is produced by schauder only");

    const bool modelled = command != "synthesize" && command != "besov";
    if (modelled) {
        require(c.gamma > 0, "model.gamma: must be positive");
        if (noise(c)) require(c.alpha < 0, "model.alpha: must be negative for the noise structure");
        require(c.levels >= 3, "grid.levels: must be >= 3");
        check_gamma(base_structure(c, c.gamma), c.gamma);
    }
    if (command == "lift" || command == "embed") {
        require(!noise(c), "model.structure: " + command + " needs the polynomial structure");
    }
    if (command == "lift") {
        require(!is_integer(c.gamma), "model.gamma: must not be an integer");
        require(c.levels >= 3, "grid.levels: must be >= 3");
    }
    if (command == "reconstruct" && !noise(c)) require(c.levels >= 5, "grid.levels: reconstruct needs >= 5 levels");
    if (command == "roundtrip") require(c.levels >= 4, "grid.levels: roundtrip needs >= 4 levels");
    if (command == "schauder") {
        require(c.beta > 0, "schauder.beta: must be positive");
        double b = c.kernel == "heat" ? 2.0 : c.beta;
        if (c.kernel == "heat") {
            require(c.scaling[0] == 2 && std::all_of(c.scaling.begin() + 1, c.scaling.end(), [](int v) { return v == 1; }),
                    "schauder.kernel: heat needs grid.scaling = 2,1,...,1");
            require(c.beta == 2.0, "schauder.beta: must be 2 for the heat kernel");
        }
        const double g = c.schauder_gamma;
        require(g > 0 && !is_integer(g), "schauder.gamma: must be positive and not an integer");
        require(!is_integer(g + b), "schauder.beta: gamma + beta must not be an integer");
        check_gamma(base_structure(c, g), g);
        int d = static_cast<int>(c.scaling.size());
        int res = std::min((22 - d) / total, 16);
        require(c.levels <= res, "grid.levels: schauder needs levels <= " + std::to_string(res));
        // every abstract homogeneity below gamma gets an integral; gamma-dependent
        // checks for the extended structure happen inside extend_structure
        auto st = base_structure(c, g);
        for (const auto& sy : st.symbols())
            if (!sy.polynomial())
                require(!is_integer(sy.hom + b), "schauder.beta: |tau| + beta lands on an integer for " + sy.name);
    }
}

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"synthesize", "besov",  "dnorm",    "reconstruct", "roundtrip",
                                               "lift",       "embed",  "schauder", "report"};
    return c;
}

Report run_command(const std::string& command, const ExperimentConfig& c) {
    Report R;
    R.command = command;
    if (command == "report") {
        for (const auto& [name, fn] : table()) {
            try {
                validate(c, name);
            } catch (const PreconditionError& e) {
                R.add("report", "skipped:" + name, -1, 1.0);
                continue;
            }
            Report sub;
            fn(c, sub);
            for (auto& row : sub.rows) R.rows.push_back({name + "." + row.table, row.key, row.n, row.value});
            for (auto& [k, v] : sub.plots) R.plots[name + "_" + k] = v;
        }
        return R;
    }
    for (const auto& [name, fn] : table())
        if (name == command) fn(c, R);
    return R;
}

void write_report(std::ostream& os, const Report& r, const ExperimentConfig& c) {
    auto cfg = c.resolved();
    if (c.format == "jsonl") {
        nlohmann::ordered_json h;
        h["version"] = RSB_VERSION;
        h["rng"] = kRngId;
        h["command"] = r.command;
        nlohmann::ordered_json jc;
        for (const auto& [k, v] : cfg) jc[k] = v;
        h["config"] = jc;
        os << h.dump() << '\n';
        for (const auto& row : r.rows) {
            nlohmann::ordered_json j;
            j["table"] = row.table;
            j["key"] = row.key;
            j["n"] = row.n;
            // %.17g text keeps the payload identical to the csv form
            j["value"] = fmt(row.value);
            os << j.dump() << '\n';
        }
        return;
    }
    os << "# version " << RSB_VERSION << "\n# rng " << kRngId << "\n# command " << r.command << '\n';
    for (const auto& [k, v] : cfg) os << "# " << k << " = " << v << '\n';
    os << "table,key,n,value\n";
    for (const auto& row : r.rows) os << row.table << ',' << row.key << ',' << row.n << ',' << fmt(row.value) << '\n';
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    if (argv.size() <= 1) {
        err << usage();
        return kUsage;
    }
    CLI::App app{"rsb"};
    app.set_help_flag("-h,--help");
    std::string command, config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> levels, order;
    std::optional<std::string> gamma, p, q, alpha, beta, outdir, format;
    app.add_option("command", command)->required();
    app.add_option("--config", config_path);
    app.add_option("--seed", seed);
    app.add_option("--levels", levels);
    app.add_option("--gamma", gamma);
    app.add_option("--p", p);
    app.add_option("--q", q);
    app.add_option("--alpha", alpha);
    app.add_option("--beta", beta);
    app.add_option("--wavelet-order", order);
    app.add_option("--out", outdir);
    app.add_option("--format", format);

    std::vector<std::string> rest(argv.rbegin(), argv.rend() - 1);
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << usage();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << usage();
        return kUsage;
    }

    try {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw PreconditionError("config: cannot open " + config_path);
            std::stringstream ss;
            ss << f.rdbuf();
            kv = parse_config_text(ss.str());
            if (kv.empty()) {
                err << "error: empty config\n" << usage();
                return kUsage;
            }
        }
        if (seed) kv["run.seed"] = std::to_string(*seed);
        if (levels) kv["grid.levels"] = std::to_string(*levels);
        if (order) kv["wavelet.order"] = std::to_string(*order);
        if (gamma) kv["model.gamma"] = *gamma;
        if (p) kv["besov.p"] = *p;
        if (q) kv["besov.q"] = *q;
        if (alpha) kv["model.alpha"] = *alpha;
        if (beta) kv["schauder.beta"] = *beta;
        if (outdir) kv["output.dir"] = *outdir;
        if (format) kv["output.format"] = *format;
        if (kv.empty()) {
            err << "error: no configuration given\n" << usage();
            return kUsage;
        }
        auto c = resolve(kv);
        validate(c, command);

        auto R = run_command(command, c);
        std::filesystem::path dir(c.out);
        std::filesystem::create_directories(dir);
        auto path = dir / (command + (c.format == "jsonl" ? ".jsonl" : ".csv"));
        {
            std::ofstream f(path, std::ios::binary);
            write_report(f, R, c);
        }
        for (const auto& [name, pts] : R.plots) {
            std::ofstream f(dir / (command + "_" + name + ".plot.csv"), std::ios::binary);
            f << "x,y\n";
            for (const auto& [x, y] : pts) f << fmt(x) << ',' << fmt(y) << '\n';
        }
        out << "wrote " << path.string() << " (" << R.rows.size() << " rows)\n";
        return kOk;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return kUsage;
    } catch (const CertificateError& e) {
        err << "certificate failure: " << e.what() << '\n';
        return kCertificate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCertificate;
    }
}

}  // namespace rsb::cli
