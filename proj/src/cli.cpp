#include <prepot/cli.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <prepot/bae_solver.hpp>
#include <prepot/io.hpp>
#include <prepot/models.hpp>
#include <prepot/orthopoly.hpp>
#include <prepot/verify.hpp>
#include <prepot/wavefunction.hpp>

namespace prepot {

namespace {

using io::json;

constexpr const char* output_dir_variable = "PREPOT_OUTPUT_DIR";

const char* models_help = R"(Models (units hbar = 2m = 1):
  coulomb  V = A(A-1)/x^2 - 2B/x            0 < x       A > 0, B > 0
  eckart   V = A(A-1)coth^2 x - 2B coth x   0 < x       A > 0; bound states need B > A^2
  rm2      V = A(A+1)tanh^2 x + 2B tanh x   x real      A > 0, |B| < A^2
  rm1      V = A(A-1)cot^2 x + 2B cot x     0 < x < pi  A > 0
All four come from A(A-1)z^2 - 2Bz with z' = lambda - z^2. rm2 is quoted after
A -> -A, B -> -B and rm1 after B -> -B, so --B for rm2/rm1 is the coefficient
shown above.

Exit codes: 0 ok, 1 verification failed, 2 invalid input, 3 solver did not
converge, 4 grid inadequate (widen the grid).
Config: --config FILE reads `key = value` lines (keys are flag names without
dashes); flags on the command line win. A relative --output is taken relative
to $PREPOT_OUTPUT_DIR when that is set.)";

struct RunConfig {
    std::string model;
    double A = std::numeric_limits<double>::quiet_NaN();
    double B = std::numeric_limits<double>::quiet_NaN();
    int levels = 5;
    int N = 0;
    std::string format = "json";
    std::string output;
    std::optional<double> xmin, xmax;
    long points = 8001;
    std::uint64_t seed = VerifyOptions{}.seed;
    std::vector<std::string> suites;
    std::string verify_model;
    double perturb_roots = 0;
    std::string seed_strategy = "homotopy";
    double tolerance = SolverOptions<double>{}.tolerance;
    std::string config;
};

/// Thrown for grids that cannot hold the requested level.
class GridInadequate : public Error {
public:
    using Error::Error;
};

bool has_flag(const std::vector<std::string>& args, const std::string& flag)
{
    for (const auto& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file '" + path + "'", {"readable --config"});
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value", {"key = value"});
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::string config_path(const std::vector<std::string>& args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

/// Appends config-file values for flags of the chosen subcommand not given
/// on the command line.
void inject_config(CLI::App& app, std::vector<std::string>& args)
{
    const std::string path = config_path(args);
    if (path.empty()) return;
    CLI::App* sub = nullptr;
    for (const auto& a : args) {
        if (auto* s = app.get_subcommand_no_throw(a)) {
            sub = s;
            break;
        }
    }
    if (!sub) return;
    for (const auto& [key, value] : read_config(path)) {
        const std::string flag = "--" + key;
        if (key == "config" || has_flag(args, flag)) continue;
        if (sub->get_option_no_throw(flag)) {
            args.push_back(flag);
            args.push_back(value);
            continue;
        }
        bool elsewhere = false;
        for (const auto* other : app.get_subcommands({})) elsewhere = elsewhere || other->get_option_no_throw(flag);
        if (!elsewhere) throw ValidationError("config file: unknown key '" + key + "'", {"known flag name"});
    }
}

std::filesystem::path output_path(const std::string& output)
{
    std::filesystem::path p(output);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(output_dir_variable); dir && *dir) p = std::filesystem::path(dir) / p;
    }
    return p;
}

void write_text(const RunConfig& cfg, std::ostream& out, const std::string& text)
{
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    const auto p = output_path(cfg.output);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + p.string() + "'", {"writable --output"});
    f << text;
}

std::string csv_text(const io::Table& t)
{
    std::ostringstream s;
    io::write_csv(s, t);
    return s.str();
}

ModelKind model_of(const RunConfig& cfg)
{
    const auto kind = parse_model_kind(cfg.model);
    if (!kind) throw ValidationError("unknown model '" + cfg.model + "'", {"model in {coulomb, eckart, rm1, rm2}"});
    return *kind;
}

ModelParams<double> params_of(const RunConfig& cfg, ModelKind kind)
{
    const ModelParams<double> p{cfg.A, cfg.B};
    require_valid(kind, p);
    return p;
}

json real_vector(const vec_type<double>& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(io::real(v[i] + 0.0));
    return a;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto kind = model_of(cfg);
    const auto p = params_of(cfg, kind);
    const auto count = bound_state_count(kind, p);
    std::vector<io::SpectrumRow> rows;
    json warnings = json::array();
    for (int N = 0; N < cfg.levels; ++N) {
        if (!count.admits(N)) break;
        rows.push_back({N, eigenvalue(kind, p, N), susy_eigenvalue(kind, p, N), true});
    }
    if (!count.is_infinite() && count.value() == 0) {
        warnings.push_back("no bound states");
    }
    else if (int(rows.size()) < cfg.levels) {
        std::ostringstream w;
        w << "only " << rows.size() << " bound states; levels " << rows.size() << ".." << cfg.levels - 1
          << " omitted";
        warnings.push_back(w.str());
    }
    for (const auto& w : warnings) err << "warning: " << w.get<std::string>() << '\n';

    if (cfg.format == "csv") {
        write_text(cfg, out, csv_text(io::spectrum_table(rows)));
        return exit_ok;
    }
    json results;
    results["levels_requested"] = cfg.levels;
    results["bound_state_count"] = count.is_infinite() ? json("inf") : json(count.value());
    results["continuum_threshold"] = io::real(continuum_threshold(kind, p));
    results["rows"] = json::array();
    for (const auto& r : rows) results["rows"].push_back(io::to_json(r));
    results["warnings"] = warnings;
    write_text(cfg, out, io::envelope("spectrum", kind, p, results).dump(2) + "\n");
    return exit_ok;
}

SeedStrategy strategy_of(const RunConfig& cfg)
{
    return cfg.seed_strategy == "polynomial" ? SeedStrategy::Polynomial : SeedStrategy::Homotopy;
}

int cmd_roots(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto kind = model_of(cfg);
    const auto p = params_of(cfg, kind);
    require_level(kind, p, cfg.N);
    SolverOptions<double> options;
    options.tolerance = cfg.tolerance;
    const auto roots = solve(exact_problem(kind, p, cfg.N), strategy_of(cfg), options);

    std::optional<vec_type<double>> poly;
    std::string crosscheck_note;
    try {
        poly = bae_roots_via_polynomials(kind, p, cfg.N).roots;
    }
    catch (const Error& e) {
        crosscheck_note = e.what();
        err << "warning: polynomial cross-check unavailable: " << e.what() << '\n';
    }
    const double diff = poly ? max_abs_difference_sorted(roots.roots, *poly) : std::numeric_limits<double>::quiet_NaN();

    if (cfg.format == "csv") {
        io::Table t{{"k", "z", "z_polynomial", "diff"}, {}};
        for (Eigen::Index k = 0; k < roots.roots.size(); ++k) {
            const double z = roots.roots[k] + 0.0;
            const double zp = poly ? (*poly)[k] + 0.0 : std::numeric_limits<double>::quiet_NaN();
            t.rows.push_back({std::to_string(k + 1), io::format_real(z), io::format_real(zp), io::format_real(std::abs(z - zp))});
        }
        write_text(cfg, out, csv_text(t));
        return exit_ok;
    }
    json results;
    results["N"] = cfg.N;
    results["roots"] = real_vector(roots.roots);
    results["residual_norm"] = roots.residual_norm;
    results["iterations"] = roots.iterations;
    results["seed_strategy"] = cfg.seed_strategy;
    results["polynomial_roots"] = poly ? real_vector(*poly) : json(nullptr);
    results["crosscheck_diff"] = poly ? io::real(diff) : json(nullptr);
    if (!crosscheck_note.empty()) results["crosscheck_note"] = crosscheck_note;
    write_text(cfg, out, io::envelope("roots", kind, p, results).dump(2) + "\n");
    return exit_ok;
}

int cmd_wavefunction(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto kind = model_of(cfg);
    const auto p = params_of(cfg, kind);
    require_level(kind, p, cfg.N);
    SolverOptions<double> options;
    options.tolerance = cfg.tolerance;
    const auto roots = solve(exact_problem(kind, p, cfg.N), strategy_of(cfg), options);

    Grid<double> grid;
    if (cfg.xmin && cfg.xmax) grid = Grid<double>{*cfg.xmin, *cfg.xmax, cfg.points};
    else {
        grid = default_grid(kind, p, cfg.N, cfg.points);
        if (cfg.xmin) grid.xmin = *cfg.xmin;
        if (cfg.xmax) grid.xmax = *cfg.xmax;
    }
    try {
        check_grid(kind, grid);
    }
    catch (const DomainError& e) {
        throw GridInadequate(e.what());
    }
    const auto s = normalize(sample(kind, p, cfg.N, roots, grid));
    const auto report = schrodinger_residual(kind, p, cfg.N, roots, grid);

    json meta;
    meta["N"] = cfg.N;
    meta["energy"] = s.level.energy;
    meta["node_count"] = node_count(s);
    meta["norm_squared"] = s.norm_squared;
    meta["schrodinger_residual"] = {{"residual", io::real(report.residual)},
                                    {"refined_residual", io::real(report.refined_residual)},
                                    {"ratio", io::real(report.ratio)}};
    meta["grid"] = {{"xmin", grid.xmin}, {"xmax", grid.xmax}, {"points", grid.points}};
    meta["roots"] = real_vector(roots.roots);

    std::vector<double> xs(grid.points), phi(grid.points);
    for (Eigen::Index i = 0; i < grid.points; ++i) {
        xs[i] = grid.x(i);
        phi[i] = s.values[i];
    }
    if (cfg.format == "csv") {
        write_text(cfg, out, csv_text(io::column_table("x", xs, "phi", phi)));
        const std::string header = io::envelope("wavefunction", kind, p, meta).dump(2) + "\n";
        if (cfg.output.empty()) {
            err << header;
        }
        else {
            RunConfig side = cfg;
            side.output = cfg.output + ".json";
            write_text(side, out, header);
        }
        return exit_ok;
    }
    meta["samples"] = {{"x", xs}, {"phi", phi}};
    write_text(cfg, out, io::envelope("wavefunction", kind, p, meta).dump(2) + "\n");
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    VerifyOptions options;
    options.suites = cfg.suites;
    options.seed = cfg.seed;
    options.perturb_roots = cfg.perturb_roots;
    if (!cfg.verify_model.empty()) {
        RunConfig m = cfg;
        m.model = cfg.verify_model;
        options.model = model_of(m);
    }
    const auto report = run_verify(options);
    for (const auto& s : report.suites) {
        std::ostringstream line;
        line << (s.passed ? "pass " : "FAIL ") << s.name << ": " << s.cases << " cases, worst " << s.worst << " (limit "
             << s.limit << "), " << int(s.runtime_ms) << " ms\n";
        err << line.str();
    }
    if (cfg.format == "csv") {
        io::Table t{{"suite", "passed", "cases", "failures", "worst", "limit"}, {}};
        for (const auto& s : report.suites)
            t.rows.push_back({s.name, s.passed ? "true" : "false", std::to_string(s.cases), std::to_string(s.failures),
                              io::format_real(s.worst), io::format_real(s.limit)});
        write_text(cfg, out, csv_text(t));
    }
    else {
        write_text(cfg, out, report.to_json(options).dump(2) + "\n");
    }
    if (const auto* bad = report.first_failure()) {
        err << "verify failed in suite " << bad->name << ": " << bad->message << '\n';
        return exit_verification_failed;
    }
    return exit_ok;
}

void add_model_options(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--model", cfg.model, "coulomb, eckart, rm2 or rm1")
        ->required()
        ->check(CLI::IsMember({"coulomb", "eckart", "rm2", "rm1"}));
    sub->add_option("--A", cfg.A, "coupling A")->required();
    sub->add_option("--B", cfg.B, "coupling B (sign convention in --help of the main command)")->required();
}

void add_output_options(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--output", cfg.output, "write results to this file instead of stdout");
    sub->add_option("--config", cfg.config, "key = value defaults file");
}

void add_solver_options(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--seed-strategy", cfg.seed_strategy, "homotopy or polynomial")
        ->check(CLI::IsMember({"homotopy", "polynomial"}))
        ->capture_default_str();
    sub->add_option("--tolerance", cfg.tolerance, "max-abs residual for convergence")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void print_error(std::ostream& err, const std::exception& e)
{
    err << "error: " << e.what() << '\n';
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
        for (const auto& d : v->diagnostics()) err << "  requires: " << d << '\n';
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Bound states of the Coulomb, Eckart and Rosen-Morse I/II potentials from prepotentials "
                 "and Bethe ansatz roots.",
                 "prepot"};
    app.footer(models_help);
    app.set_version_flag("--version", io::version());
    app.require_subcommand(1);

    auto* spectrum = app.add_subcommand("spectrum", "closed-form energies E_N and E_N - E_0");
    add_model_options(spectrum, cfg);
    spectrum->add_option("--levels", cfg.levels, "number of levels N = 0..levels-1")
        ->check(CLI::Range(0, 100000))
        ->capture_default_str();
    add_output_options(spectrum, cfg);

    auto* roots = app.add_subcommand("roots", "Bethe ansatz roots z_k of p_N with a polynomial cross-check");
    add_model_options(roots, cfg);
    roots->add_option("--N", cfg.N, "level")->check(CLI::Range(0, 100000))->capture_default_str();
    add_solver_options(roots, cfg);
    add_output_options(roots, cfg);

    auto* wave = app.add_subcommand("wavefunction", "normalized phi_N sampled on a uniform grid");
    add_model_options(wave, cfg);
    wave->add_option("--N", cfg.N, "level")->check(CLI::Range(0, 100000))->capture_default_str();
    wave->add_option("--xmin", cfg.xmin, "left grid end (default: chosen from the level)");
    wave->add_option("--xmax", cfg.xmax, "right grid end (default: chosen from the level)");
    wave->add_option("--points", cfg.points, "grid points")->check(CLI::Range(3L, 100000000L))->capture_default_str();
    add_solver_options(wave, cfg);
    add_output_options(wave, cfg);

    auto* verify = app.add_subcommand("verify", "run the property suites; exit 1 on the first failing one");
    verify->add_option("--suite", cfg.suites, "suites to run (repeat or comma separate)")
        ->delimiter(',')
        ->check(CLI::IsMember(suite_names()));
    verify->add_option("--model", cfg.verify_model, "restrict to one model")
        ->check(CLI::IsMember({"coulomb", "eckart", "rm2", "rm1"}));
    verify->add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();
    verify->add_option("--perturb-roots", cfg.perturb_roots, "shift every solved root by this relative amount")
        ->check(CLI::NonNegativeNumber);
    add_output_options(verify, cfg);

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        inject_config(app, args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid_input;
    }
    catch (const Error& e) {
        print_error(err, e);
        return exit_invalid_input;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(cfg, out, err);
        if (roots->parsed()) return cmd_roots(cfg, out, err);
        if (wave->parsed()) return cmd_wavefunction(cfg, out, err);
        if (verify->parsed()) return cmd_verify(cfg, out, err);
    }
    catch (const BoundaryLeak& e) {
        print_error(err, e);
        err << "hint: widen the grid with --xmin/--xmax\n";
        return exit_grid_inadequate;
    }
    catch (const GridInadequate& e) {
        print_error(err, e);
        err << "hint: keep --xmin/--xmax strictly inside the domain\n";
        return exit_grid_inadequate;
    }
    catch (const ConvergenceFailureBase& e) {
        print_error(err, e);
        return exit_no_convergence;
    }
    catch (const SingularConfiguration& e) {
        print_error(err, e);
        return exit_no_convergence;
    }
    catch (const NumericalError& e) {
        print_error(err, e);
        return exit_no_convergence;
    }
    catch (const MismatchError& e) {
        print_error(err, e);
        return exit_verification_failed;
    }
    catch (const Error& e) {
        print_error(err, e);
        return exit_invalid_input;
    }
    catch (const std::exception& e) {
        print_error(err, e);
        return exit_verification_failed;
    }
    return exit_invalid_input;
}

} // namespace prepot
