#include <prepot/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <prepot/bae_solver.hpp>
#include <prepot/oracle.hpp>
#include <prepot/orthopoly.hpp>
#include <prepot/wavefunction.hpp>

namespace prepot {

namespace {

constexpr double pole_tolerance = 1e-8;
constexpr double pole_control_shift = 1e-3;
constexpr int pole_points = 200;
constexpr double equivalence_tolerance = 1e-9;
constexpr double oracle_tolerance = 1e-3;
constexpr double residual_tolerance = 1e-4;
constexpr double sumrule_tolerance = 1e-10;
constexpr double mirror_tolerance = 1e-10;
constexpr double ratio_low = 3.5, ratio_high = 4.5;
constexpr Eigen::Index wave_points = 8001;
// Residual grids keep this far from singular domain ends.
constexpr double residual_edge = 0.05;

std::string describe(ModelKind kind, const ModelParams<double>& p, int N = -1)
{
    std::ostringstream s;
    s << cli_name(kind) << " A=" << p.A << " B=" << p.B;
    if (N >= 0) s << " N=" << N;
    return s.str();
}

io::json case_json(ModelKind kind, const ModelParams<double>& p, int N)
{
    return {{"model", cli_name(kind)}, {"A", p.A}, {"B", p.B}, {"N", N}};
}

class Tally {
public:
    explicit Tally(SuiteResult& r, double limit) : r_(r) { r_.limit = limit; }

    void record(bool ok, double metric, const std::string& what)
    {
        ++r_.cases;
        if (std::isfinite(metric)) r_.worst = std::max(r_.worst, metric);
        else r_.worst = metric;
        if (!ok) fail(what);
    }

    void fail(const std::string& what)
    {
        ++r_.failures;
        r_.passed = false;
        if (r_.message.empty()) r_.message = what;
    }

private:
    SuiteResult& r_;
};

bool selected(const VerifyOptions& o, ModelKind kind) { return !o.model || *o.model == kind; }

std::mt19937_64 suite_rng(const VerifyOptions& o, int salt) { return std::mt19937_64(o.seed + 7919u * std::uint64_t(salt)); }

RootSet<double> perturbed(RootSet<double> r, double eps)
{
    if (eps <= 0) return r;
    for (Eigen::Index k = 0; k < r.roots.size(); ++k)
        r.roots[k] += eps * (1 + std::abs(r.roots[k])) * (k % 2 ? -1.0 : 1.0);
    return make_root_set(r.roots, r.residual_norm, r.iterations);
}

RootSet<double> level_roots(ModelKind kind, const ModelParams<double>& p, int N, const VerifyOptions& o)
{
    return perturbed(solve(exact_problem(kind, p, N), SeedStrategy::Homotopy), o.perturb_roots);
}

/// Interval where the level lives, kept away from singular ends.
Grid<double> interior_grid(ModelKind kind, const ModelParams<double>& p, int N, Eigen::Index points)
{
    Grid<double> g = default_grid(kind, p, N, points);
    const auto dom = domain<double>(kind);
    if (dom.lower_is_finite()) g.xmin = dom.lower + residual_edge;
    if (dom.upper_is_finite()) g.xmax = dom.upper - residual_edge;
    return g;
}

double max_pole_defect(ModelKind kind, const ModelParams<double>& p, int N, const vec_type<double>& roots,
                       const std::vector<double>& xs)
{
    const double E = eigenvalue(kind, p, N);
    double worst = 0;
    for (double x : xs) {
        const double d = std::abs(vn_from_prepotential(kind, p, N, roots, x) - (potential(kind, p, x) - E));
        worst = std::max(worst, std::isfinite(d) ? d : std::numeric_limits<double>::infinity());
    }
    return worst;
}

struct LevelCase {
    ModelKind kind;
    ModelParams<double> params;
    int N;
};

/// Reference matrix levels 1..nmax plus a few random draws per model.
std::vector<LevelCase> pole_cases(const VerifyOptions& o)
{
    std::vector<LevelCase> out;
    for (const auto& c : reference_cases()) {
        if (!selected(o, c.kind)) continue;
        for (int N = 1; N <= reference_nmax(c); ++N) out.push_back({c.kind, c.params, N});
    }
    auto rng = suite_rng(o, 1);
    for (auto kind : all_models) {
        for (int d = 0; d < 3; ++d) {
            const int nmax = 1 + int(rng() % 5);
            const auto p = random_params(kind, nmax, rng);
            if (!selected(o, kind)) continue;
            for (int N = 1; N <= nmax; ++N) out.push_back({kind, p, N});
        }
    }
    return out;
}

void suite_poles(const VerifyOptions& o, SuiteResult& r)
{
    Tally t(r, pole_tolerance);
    auto rng = suite_rng(o, 2);
    for (const auto& c : pole_cases(o)) {
        const auto roots = level_roots(c.kind, c.params, c.N, o);
        const auto g = interior_grid(c.kind, c.params, c.N, 3);
        std::uniform_real_distribution<double> U(g.xmin, g.xmax);
        std::vector<double> xs(pole_points);
        for (double& x : xs) x = U(rng);

        const double defect = max_pole_defect(c.kind, c.params, c.N, roots.roots, xs);
        const double control =
            max_pole_defect(c.kind, c.params, c.N, perturbed(roots, pole_control_shift).roots, xs);
        const bool ok = defect < pole_tolerance;
        const bool control_ok = !(control < pole_tolerance);
        t.record(ok, defect, "poles: " + describe(c.kind, c.params, c.N) + ": max |W'^2 - W'' - (V - E)| = " +
                                 io::format_real(defect));
        if (!control_ok)
            t.fail("poles: " + describe(c.kind, c.params, c.N) + ": perturbed roots still cancel the poles");
        auto j = case_json(c.kind, c.params, c.N);
        j["defect"] = defect;
        j["perturbed_defect"] = control;
        r.details.push_back(j);
    }
}

void suite_equivalence(const VerifyOptions& o, SuiteResult& r)
{
    Tally t(r, equivalence_tolerance);
    for (auto kind : all_models) {
        auto rng = suite_rng(o, 10 + int(kind));
        if (!selected(o, kind)) continue;
        for (int d = 0; d < 20; ++d) {
            const int nmax = 1 + int(rng() % 10);
            const auto p = random_params(kind, nmax, rng);
            double worst = 0;
            for (int N = 1; N <= nmax; ++N) {
                const auto newton = level_roots(kind, p, N, o);
                const auto poly = bae_roots_via_polynomials(kind, p, N);
                const double diff = max_abs_difference_sorted(newton.roots, poly.roots);
                worst = std::max(worst, diff);
                t.record(diff < equivalence_tolerance, diff,
                         "equivalence: " + describe(kind, p, N) + ": Newton vs polynomial roots differ by " +
                             io::format_real(diff));
            }
            r.details.push_back({{"model", cli_name(kind)}, {"A", p.A}, {"B", p.B}, {"Nmax", nmax}, {"max_diff", worst}});
        }
    }
}

void suite_nodes(const VerifyOptions& o, SuiteResult& r)
{
    Tally t(r, 0);
    for (const auto& c : reference_cases()) {
        if (!selected(o, c.kind)) continue;
        for (int N = 0; N <= reference_nmax(c); ++N) {
            const auto roots = level_roots(c.kind, c.params, N, o);
            const auto s = normalize(sample(c.kind, c.params, N, roots, default_grid(c.kind, c.params, N, wave_points)));
            const int nodes = node_count(s);
            t.record(nodes == N, std::abs(nodes - N),
                     "nodes: " + describe(c.kind, c.params, N) + ": " + std::to_string(nodes) + " nodes");
            auto j = case_json(c.kind, c.params, N);
            j["nodes"] = nodes;
            r.details.push_back(j);
        }
    }
}

void suite_oracle(const VerifyOptions& o, SuiteResult& r)
{
    Tally t(r, oracle_tolerance);
    for (const auto& c : reference_cases()) {
        if (!selected(o, c.kind)) continue;
        const int nmax = reference_nmax(c);
        const auto report = compare(c.kind, c.params, nmax, OracleConfig<double>{c.oracle_grid});
        const auto conv = grid_convergence(c.kind, c.params, nmax, c.oracle_grid);
        const double shift = truncation_sensitivity(c.kind, c.params, nmax, c.oracle_grid);
        const std::string name = "oracle: " + describe(c.kind, c.params);
        t.record(report.max_rel_err() < oracle_tolerance, report.max_rel_err(),
                 name + ": relative error " + io::format_real(report.max_rel_err()));
        io::json levels = io::json::array();
        for (std::size_t i = 0; i < report.levels.size(); ++i) {
            const auto& l = report.levels[i];
            if (!(conv[i].ratio >= ratio_low && conv[i].ratio <= ratio_high))
                t.fail(name + " N=" + std::to_string(l.N) + ": grid-doubling ratio " + io::format_real(conv[i].ratio));
            levels.push_back({{"N", l.N}, {"closed_form", l.closed_form}, {"numeric", l.numeric},
                              {"rel_err", l.rel_err}, {"ratio", conv[i].ratio}});
        }
        if (!(shift < oracle_tolerance / 2))
            t.fail(name + ": truncation sensitivity " + io::format_real(shift));
        r.details.push_back({{"model", cli_name(c.kind)}, {"A", c.params.A}, {"B", c.params.B},
                             {"grid", {{"xmin", c.oracle_grid.xmin}, {"xmax", c.oracle_grid.xmax}, {"points", c.oracle_grid.points}}},
                             {"truncation_shift", shift}, {"levels", levels}});
    }
}

void suite_residual(const VerifyOptions& o, SuiteResult& r)
{
    Tally t(r, residual_tolerance);
    for (const auto& c : reference_cases()) {
        if (!selected(o, c.kind)) continue;
        for (int N = 0; N <= reference_nmax(c); ++N) {
            const auto roots = level_roots(c.kind, c.params, N, o);
            const auto g = interior_grid(c.kind, c.params, N, wave_points);
            const auto five = schrodinger_residual(c.kind, c.params, N, roots, g);
            ResidualOptions<double> three_opt;
            three_opt.stencil = Stencil::ThreePoint;
            const auto three = schrodinger_residual(c.kind, c.params, N, roots, g, three_opt);
            const double worst = std::max(five.residual, five.refined_residual);
            const std::string name = "residual: " + describe(c.kind, c.params, N);
            t.record(worst < residual_tolerance, worst, name + ": residual " + io::format_real(worst));
            if (!(three.ratio >= ratio_low && three.ratio <= ratio_high))
                t.fail(name + ": second-order ratio " + io::format_real(three.ratio));
            auto j = case_json(c.kind, c.params, N);
            j["residual"] = five.residual;
            j["refined_residual"] = five.refined_residual;
            j["three_point_ratio"] = three.ratio;
            r.details.push_back(j);
        }
    }
}

void suite_sumrule(const VerifyOptions& o, SuiteResult& r)
{
    Tally t(r, sumrule_tolerance);
    if (!selected(o, ModelKind::Coulomb)) return;
    std::vector<ModelParams<double>> params;
    for (const auto& c : reference_cases()) {
        if (c.kind == ModelKind::Coulomb) params.push_back(c.params);
    }
    auto rng = suite_rng(o, 3);
    for (int d = 0; d < 3; ++d) params.push_back(random_params(ModelKind::Coulomb, 6, rng));

    for (const auto& p : params) {
        for (int N = 1; N <= 6; ++N) {
            const auto problem = coulomb_sinusoidal_problem(p, N);
            const double b = std::get<CoulombSinusoidalFlavor<double>>(problem.flavor).b;
            const auto x = perturbed(solve(problem, SeedStrategy::Homotopy), o.perturb_roots);
            const double rule = std::abs(p.A * x.roots.cwiseInverse().sum() - b * N) / std::max(1.0, b * N);

            auto z = solve(exact_problem(ModelKind::Coulomb, p, N), SeedStrategy::Polynomial).roots;
            vec_type<double> recip = z.cwiseInverse();
            sort_ascending(recip);
            double diff = 0;
            for (Eigen::Index k = 0; k < recip.size(); ++k)
                diff = std::max(diff, std::abs(x.roots[k] - recip[k]) / std::max(1.0, std::abs(recip[k])));

            const std::string name = "sumrule: " + describe(ModelKind::Coulomb, p, N);
            t.record(rule < sumrule_tolerance, rule, name + ": A sum 1/x_k - bN = " + io::format_real(rule));
            if (!(diff < sumrule_tolerance)) t.fail(name + ": sinusoidal roots differ from 1/z_k by " + io::format_real(diff));
            auto j = case_json(ModelKind::Coulomb, p, N);
            j["sum_rule"] = rule;
            j["reciprocal_diff"] = diff;
            r.details.push_back(j);
        }
    }
}

void suite_symmetry(const VerifyOptions& o, SuiteResult& r)
{
    Tally t(r, mirror_tolerance);
    auto rng = suite_rng(o, 4);

    for (auto kind : all_models) {
        const auto p = random_params(kind, 0, rng);
        if (!selected(o, kind)) continue;
        const double e0 = susy_eigenvalue(kind, p, 0);
        t.record(e0 == 0.0, std::abs(e0), "symmetry: " + describe(kind, p) + ": E_susy_0 = " + io::format_real(e0));
    }

    if (!selected(o, ModelKind::RosenMorseII)) return;
    constexpr auto rm2 = ModelKind::RosenMorseII;
    std::vector<ModelParams<double>> params;
    for (const auto& c : reference_cases()) {
        if (c.kind == rm2) params.push_back(c.params);
    }
    for (int d = 0; d < 3; ++d) params.push_back(random_params(rm2, 3, rng));

    for (const auto& p : params) {
        const ModelParams<double> q{p.A, -p.B};
        const int count = int(bound_state_count(rm2, p).value());
        for (int N = 0; N < std::min(count, 4); ++N) {
            const std::string name = "symmetry: " + describe(rm2, p, N);
            if (eigenvalue(rm2, p, N) != eigenvalue(rm2, q, N)) t.fail(name + ": spectrum not invariant under B -> -B");

            const auto gp = default_grid(rm2, p, N, wave_points);
            const auto gq = default_grid(rm2, q, N, wave_points);
            const double L = std::max({-gp.xmin, gp.xmax, -gq.xmin, gq.xmax});
            const Grid<double> g{-L, L, wave_points};
            const auto sp = normalize(sample(rm2, p, N, level_roots(rm2, p, N, o), g));
            const auto sq = normalize(sample(rm2, q, N, level_roots(rm2, q, N, o), g));
            Eigen::Index peak = 0;
            sp.values.cwiseAbs().maxCoeff(&peak);
            const double sign = sp.values[peak] * sq.values[g.points - 1 - peak] < 0 ? -1.0 : 1.0;
            double diff = 0;
            for (Eigen::Index i = 0; i < g.points; ++i)
                diff = std::max(diff, std::abs(sp.values[i] - sign * sq.values[g.points - 1 - i]));
            t.record(diff < mirror_tolerance, diff, name + ": mirror mismatch " + io::format_real(diff));
            auto j = case_json(rm2, p, N);
            j["mirror_diff"] = diff;
            r.details.push_back(j);
        }
    }
}

using SuiteFn = std::function<void(const VerifyOptions&, SuiteResult&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry()
{
    static const std::vector<std::pair<std::string, SuiteFn>> suites{
        {"poles", suite_poles},       {"equivalence", suite_equivalence}, {"nodes", suite_nodes},
        {"oracle", suite_oracle},     {"residual", suite_residual},       {"sumrule", suite_sumrule},
        {"symmetry", suite_symmetry},
    };
    return suites;
}

} // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : registry()) n.push_back(s.first);
        return n;
    }();
    return names;
}

const std::vector<ReferenceCase>& reference_cases()
{
    const double pi = pi_v<double>;
    static const std::vector<ReferenceCase> cases{
        // A = 1 keeps phi'(0) != 0, so the left wall has to sit much closer to 0.
        {ModelKind::Coulomb, {1, 1}, {1e-6, 120, 16001}},
        {ModelKind::Coulomb, {2.5, 3}, {1e-3, 60, 16001}},
        {ModelKind::Eckart, {2, 16}, {1e-3, 20, 16001}},
        {ModelKind::RosenMorseII, {5, 3}, {-50, 30, 16001}},
        {ModelKind::RosenMorseI, {1.5, 2}, {1e-3, pi - 1e-3, 16001}},
    };
    return cases;
}

int reference_nmax(const ReferenceCase& c)
{
    const auto count = bound_state_count(c.kind, c.params);
    if (count.is_infinite()) return 3;
    return std::min<int>(3, int(count.value()) - 1);
}

ModelParams<double> random_params(ModelKind kind, int nmax, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0, 1);
    ModelParams<double> p;
    switch (kind) {
        case ModelKind::Coulomb:
            p.A = 0.5 + 3.5 * U(rng);
            p.B = 0.5 + 4.5 * U(rng);
            break;
        case ModelKind::Eckart: {
            p.A = 0.5 + 2.5 * U(rng);
            const double t = (p.A + nmax) * (p.A + nmax);
            p.B = t * (1.05 + 1.5 * U(rng));
            break;
        }
        case ModelKind::RosenMorseII: {
            p.A = nmax + 0.3 + 4 * U(rng);
            const double t = (p.A - nmax) * (p.A - nmax);
            p.B = 0.95 * t * (2 * U(rng) - 1);
            break;
        }
        case ModelKind::RosenMorseI:
            p.A = 0.5 + 3.5 * U(rng);
            p.B = -5 + 10 * U(rng);
            break;
    }
    return p;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& options)
{
    const auto& reg = registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& s) { return s.first == name; });
    if (it == reg.end()) throw ValidationError("verify: unknown suite '" + name + "'", {"known suite"});
    SuiteResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        it->second(options, r);
    }
    catch (const std::exception& e) {
        r.passed = false;
        ++r.failures;
        if (r.message.empty()) r.message = name + ": " + e.what();
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

VerifyReport run_verify(const VerifyOptions& options)
{
    for (const auto& s : options.suites) {
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw ValidationError("verify: unknown suite '" + s + "'", {"known suite"});
    }
    VerifyReport report;
    for (const auto& name : suite_names()) {
        if (!options.suites.empty() && std::find(options.suites.begin(), options.suites.end(), name) == options.suites.end())
            continue;
        report.suites.push_back(run_suite(name, options));
    }
    return report;
}

bool VerifyReport::passed() const noexcept { return first_failure() == nullptr; }

const SuiteResult* VerifyReport::first_failure() const noexcept
{
    for (const auto& s : suites) {
        if (!s.passed) return &s;
    }
    return nullptr;
}

io::json VerifyReport::to_json(const VerifyOptions& options) const
{
    io::json suites_json = io::json::array();
    for (const auto& s : suites) {
        suites_json.push_back({{"name", s.name},
                               {"passed", s.passed},
                               {"cases", s.cases},
                               {"failures", s.failures},
                               {"worst", io::real(s.worst)},
                               {"limit", s.limit},
                               {"message", s.message},
                               {"runtime_ms", s.runtime_ms},
                               {"details", s.details}});
    }
    const auto* bad = first_failure();
    io::json results{{"passed", passed()},
                     {"first_failure", bad ? io::json(bad->name) : io::json(nullptr)},
                     {"first_failure_message", bad ? io::json(bad->message) : io::json(nullptr)},
                     {"seed", options.seed},
                     {"perturb_roots", options.perturb_roots},
                     {"model_filter", options.model ? io::json(cli_name(*options.model)) : io::json(nullptr)},
                     {"suites", suites_json}};
    return io::envelope("verify", std::move(results));
}

} // namespace prepot
