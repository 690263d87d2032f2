#pragma once

// Finite-difference check of the closed-form spectrum. Only the potential and
// the closed-form eigenvalues are used; nothing here knows about prepotentials
// or Bethe ansatz roots.

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <prepot/errors.hpp>
#include <prepot/grid.hpp>
#include <prepot/models.hpp>
#include <prepot/types.hpp>

namespace prepot {

/// -d^2/dx^2 + V on the interior grid points with Dirichlet ends.
template <class Scalar>
struct TridiagonalOperator {
    vec_type<Scalar> diagonal;
    /// off_diagonal[i] couples unknowns i and i+1.
    vec_type<Scalar> off_diagonal;

    Eigen::Index size() const noexcept { return diagonal.size(); }

    mat_type<Scalar> dense() const
    {
        const Eigen::Index n = size();
        mat_type<Scalar> m = mat_type<Scalar>::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, i) = diagonal[i];
            if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = off_diagonal[i];
        }
        return m;
    }
};

template <class Scalar>
TridiagonalOperator<Scalar> discretize(ModelKind kind, const ModelParams<Scalar>& params, const Grid<Scalar>& grid)
{
    check_grid(kind, grid);
    const Eigen::Index n = grid.points - 2;
    const Scalar h = grid.spacing();
    const Scalar inv_h2 = Scalar(1) / (h * h);
    TridiagonalOperator<Scalar> op;
    op.diagonal.resize(n);
    op.off_diagonal = vec_type<Scalar>::Constant(std::max<Eigen::Index>(n - 1, 0), -inv_h2);
    for (Eigen::Index i = 0; i < n; ++i) op.diagonal[i] = 2 * inv_h2 + potential(kind, params, grid.x(i + 1));
    return op;
}

/// Number of eigenvalues strictly below `energy` (Sturm sequence count).
template <class Scalar>
Eigen::Index sturm_count(const TridiagonalOperator<Scalar>& op, Scalar energy)
{
    using std::abs;
    const Eigen::Index n = op.size();
    if (n == 0) return 0;
    const Scalar pivmin = std::numeric_limits<Scalar>::min() * Scalar(1e4);
    Eigen::Index count = 0;
    Scalar q = op.diagonal[0] - energy;
    for (Eigen::Index i = 0;; ++i) {
        if (abs(q) < pivmin) q = -pivmin;
        if (q < 0) ++count;
        if (i + 1 == n) break;
        const Scalar e = op.off_diagonal[i];
        q = op.diagonal[i + 1] - energy - e * e / q;
    }
    return count;
}

template <class Scalar>
std::pair<Scalar, Scalar> gershgorin_bounds(const TridiagonalOperator<Scalar>& op)
{
    using std::abs;
    const Eigen::Index n = op.size();
    Scalar lo = std::numeric_limits<Scalar>::infinity();
    Scalar hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar r{0};
        if (i > 0) r += abs(op.off_diagonal[i - 1]);
        if (i + 1 < n) r += abs(op.off_diagonal[i]);
        lo = std::min(lo, op.diagonal[i] - r);
        hi = std::max(hi, op.diagonal[i] + r);
    }
    return {lo, hi};
}

/// k smallest eigenvalues, ascending, each bisected to relative 1e-12.
template <class Scalar>
vec_type<Scalar> lowest_eigenvalues(const TridiagonalOperator<Scalar>& op, Eigen::Index k,
                                    Scalar relative_tolerance = Scalar(1e-12))
{
    using std::abs;
    if (k < 0 || k > op.size())
        throw ValidationError("lowest_eigenvalues: k exceeds operator size", {"0 <= k <= size"});
    vec_type<Scalar> out(k);
    if (k == 0) return out;
    const auto [glo, ghi] = gershgorin_bounds(op);
    const Scalar floor_tol = std::numeric_limits<Scalar>::epsilon() * std::max(abs(glo), abs(ghi));
    Scalar lo = glo;
    for (Eigen::Index j = 0; j < k; ++j) {
        Scalar a = lo;
        Scalar b = ghi;
        while (b - a > relative_tolerance * std::max(abs(a), abs(b)) + floor_tol) {
            const Scalar mid = a + (b - a) / 2;
            if (mid <= a || mid >= b) break;
            if (sturm_count(op, mid) > j) b = mid;
            else a = mid;
        }
        out[j] = a + (b - a) / 2;
        lo = a;
    }
    return out;
}

template <class Scalar>
struct OracleConfig {
    Grid<Scalar> grid;
    /// Upper limit on levels requested from the eigensolver.
    int max_levels = 12;
    /// Extrapolate with the half-spacing grid: (4 E(h/2) - E(h)) / 3.
    bool richardson = false;
};

template <class Scalar>
struct OracleLevel {
    int N = 0;
    Scalar closed_form{};
    Scalar numeric{};
    Scalar abs_err{};
    Scalar rel_err{};
};

template <class Scalar>
struct OracleReport {
    ModelKind kind;
    ModelParams<Scalar> params;
    Grid<Scalar> grid;
    bool richardson = false;
    Scalar continuum_threshold{};
    std::vector<OracleLevel<Scalar>> levels;
    double runtime_ms = 0;

    Scalar max_rel_err() const noexcept
    {
        Scalar worst{0};
        for (const auto& l : levels) worst = std::max(worst, l.rel_err);
        return worst;
    }
};

/// The `count` lowest numeric eigenvalues, all required below the continuum.
template <class Scalar>
vec_type<Scalar> numeric_bound_levels(ModelKind kind, const ModelParams<Scalar>& params, const Grid<Scalar>& grid,
                                      int count)
{
    const auto op = discretize(kind, params, grid);
    const vec_type<Scalar> numeric = lowest_eigenvalues(op, count);
    const Scalar h = grid.spacing();
    const Scalar threshold = continuum_threshold(kind, params) - 10 * h * h;
    for (int j = 0; j < count; ++j) {
        if (!(numeric[j] < threshold)) {
            std::ostringstream msg;
            msg << display_name(kind) << ": only " << j << " numeric levels below the continuum threshold "
                << threshold << ", expected " << count;
            throw MismatchError(msg.str());
        }
    }
    return numeric;
}

/// Pairs the Nmax+1 lowest numeric levels with E_0..E_Nmax by rank.
template <class Scalar>
OracleReport<Scalar> compare(ModelKind kind, const ModelParams<Scalar>& params, int Nmax,
                             const OracleConfig<Scalar>& config)
{
    using std::abs;
    const auto start = std::chrono::steady_clock::now();
    require_level(kind, params, Nmax);
    const int count = Nmax + 1;
    if (count > config.max_levels || count >= config.grid.points / 10)
        throw ValidationError("oracle: too many levels for the configuration", {"levels <= max_levels", "levels < points/10"});

    vec_type<Scalar> numeric = numeric_bound_levels(kind, params, config.grid, count);
    if (config.richardson) {
        const vec_type<Scalar> fine = numeric_bound_levels(kind, params, config.grid.refined(), count);
        numeric = (4 * fine - numeric) / 3;
    }

    OracleReport<Scalar> report{kind, params, config.grid, config.richardson, continuum_threshold(kind, params), {}, 0};
    for (int N = 0; N < count; ++N) {
        const Scalar exact = eigenvalue(kind, params, N);
        const Scalar err = abs(numeric[N] - exact);
        report.levels.push_back({N, exact, numeric[N], err, err / abs(exact)});
    }
    report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

template <class Scalar>
struct ConvergenceLevel {
    int N = 0;
    /// E(h), E(h/2), E(h/4) on successively halved spacings.
    Scalar coarse{}, medium{}, fine{};
    /// (E(h) - E(h/2)) / (E(h/2) - E(h/4)); 4 for a second-order scheme.
    Scalar ratio{};
};

/// Grid-doubling study ending at `finest`.
template <class Scalar>
std::vector<ConvergenceLevel<Scalar>> grid_convergence(ModelKind kind, const ModelParams<Scalar>& params, int Nmax,
                                                       const Grid<Scalar>& finest)
{
    require_level(kind, params, Nmax);
    const Eigen::Index intervals = finest.points - 1;
    if (intervals % 4 != 0) throw ValidationError("grid_convergence: points - 1 must be divisible by 4", {"(points-1) % 4 == 0"});
    const Grid<Scalar> medium{finest.xmin, finest.xmax, intervals / 2 + 1};
    const Grid<Scalar> coarse{finest.xmin, finest.xmax, intervals / 4 + 1};
    const int count = Nmax + 1;
    const auto e_c = numeric_bound_levels(kind, params, coarse, count);
    const auto e_m = numeric_bound_levels(kind, params, medium, count);
    const auto e_f = numeric_bound_levels(kind, params, finest, count);
    std::vector<ConvergenceLevel<Scalar>> out;
    for (int N = 0; N < count; ++N)
        out.push_back({N, e_c[N], e_m[N], e_f[N], (e_c[N] - e_m[N]) / (e_m[N] - e_f[N])});
    return out;
}

/// Largest relative eigenvalue shift when every truncated end of the grid is
/// moved by 25%: ends standing in for infinity move outward, ends near a
/// singular point have their offset scaled by 1.25. The point count is kept.
template <class Scalar>
Scalar truncation_sensitivity(ModelKind kind, const ModelParams<Scalar>& params, int Nmax, const Grid<Scalar>& grid)
{
    using std::abs;
    const auto dom = domain<Scalar>(kind);
    Grid<Scalar> moved = grid;
    const Scalar f = Scalar(1.25);
    moved.xmin = dom.lower_is_finite() ? dom.lower + f * (grid.xmin - dom.lower) : f * grid.xmin;
    moved.xmax = dom.upper_is_finite() ? dom.upper - f * (dom.upper - grid.xmax) : f * grid.xmax;
    const int count = Nmax + 1;
    const auto base = numeric_bound_levels(kind, params, grid, count);
    const auto shifted = numeric_bound_levels(kind, params, moved, count);
    Scalar worst{0};
    for (int N = 0; N < count; ++N) worst = std::max(worst, abs(shifted[N] - base[N]) / abs(base[N]));
    return worst;
}

} // namespace prepot
