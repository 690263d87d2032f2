#pragma once

// Bound-state wavefunctions phi_N = exp(-W0) p_N(z) and the N-th order
// prepotential W_N = W0 - sum_k ln|z - z_k| with V_N = W_N'^2 - W_N''.
//
// Inside this module W0' = A1 z + A0 with A1 = -(A+N), A0 = B/(A+N) in the
// prepotential couplings, so the four models share one code path:
//   Coulomb        W0 = -(A+N) ln x      + B x/(A+N)
//   Eckart         W0 = -(A+N) ln sinh x + B x/(A+N)
//   Rosen-Morse II W0 =  (A-N) ln cosh x + B x/(A-N)
//   Rosen-Morse I  W0 = -(A+N) ln sin x  - B x/(A+N)

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <prepot/errors.hpp>
#include <prepot/grid.hpp>
#include <prepot/models.hpp>
#include <prepot/root_set.hpp>
#include <prepot/types.hpp>

namespace prepot {

/// W0 for level N.
template <class Scalar>
Scalar ground_prepotential(ModelKind kind, const ModelParams<Scalar>& params, int N, Scalar x)
{
    const auto raw = prepotential_couplings(kind, params);
    const Scalar a = raw.A + Scalar(N);
    return -a * coordinate_integral(kind, x) + raw.B * x / a;
}

template <class Scalar>
Scalar prepotential_w(ModelKind kind, const ModelParams<Scalar>& params, int N, const vec_type<Scalar>& roots,
                      Scalar x)
{
    using std::abs;
    using std::log;
    const Scalar z = coordinate(kind, x);
    Scalar w = ground_prepotential(kind, params, N, x);
    for (Eigen::Index k = 0; k < roots.size(); ++k) {
        const Scalar d = abs(z - roots[k]);
        if (d <= std::numeric_limits<Scalar>::epsilon() * (1 + abs(roots[k]))) {
            std::ostringstream msg;
            msg << "W_N: x = " << x << " maps onto root z_" << k << " = " << roots[k];
            throw PoleError(msg.str());
        }
        w -= log(d);
    }
    return w;
}

/// Un-normalized phi_N(x) = exp(-W0(x)) prod_k (z(x) - z_k).
template <class Scalar>
Scalar evaluate(ModelKind kind, const ModelParams<Scalar>& params, int N, const vec_type<Scalar>& roots, Scalar x)
{
    using std::exp;
    const Scalar z = coordinate(kind, x);
    Scalar poly{1};
    for (Eigen::Index k = 0; k < roots.size(); ++k) poly *= z - roots[k];
    return exp(-ground_prepotential(kind, params, N, x)) * poly;
}

/// W_N'^2 - W_N'' from term-by-term differentiation of W_N.
///
/// With roots solving the exact Bethe ansatz equations this equals
/// V(x) - E_N; otherwise the simple poles at the z_k survive. The double
/// poles of W_N'^2 and W_N'' cancel identically and are dropped before
/// evaluation, which keeps the result accurate close to a root preimage.
template <class Scalar>
Scalar vn_from_prepotential(ModelKind kind, const ModelParams<Scalar>& params, int N,
                            const vec_type<Scalar>& roots, Scalar x)
{
    using std::abs;
    const auto raw = prepotential_couplings(kind, params);
    const Scalar a = raw.A + Scalar(N);
    const Scalar A1 = -a;
    const Scalar A0 = raw.B / a;
    const Scalar z = coordinate(kind, x);
    const Scalar dz = coordinate_derivative(kind, z);
    const Scalar d2z = -2 * z * dz;
    const Scalar w0 = A1 * z + A0;

    const Eigen::Index n = roots.size();
    vec_type<Scalar> inv(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar d = z - roots[k];
        if (abs(d) <= std::numeric_limits<Scalar>::epsilon() * (1 + abs(roots[k])))
            throw PoleError("V_N: evaluation at a root preimage");
        inv[k] = Scalar(1) / d;
    }
    // W_N' = w0 - dz S1,  W_N'' = A1 dz - d2z S1 + dz^2 S2,  S1^2 - S2 = 2 P
    Scalar s1{0}, pairs{0};
    for (Eigen::Index k = 0; k < n; ++k) {
        s1 += inv[k];
        for (Eigen::Index l = k + 1; l < n; ++l) pairs += inv[k] * inv[l];
    }
    return w0 * w0 - A1 * dz + (d2z - 2 * w0 * dz) * s1 + 2 * dz * dz * pairs;
}

/// Composite Simpson rule; the last three intervals use the 3/8 rule when the
/// interval count is odd.
template <class Scalar>
Scalar simpson(const vec_type<Scalar>& f, Scalar h)
{
    const Eigen::Index n = f.size() - 1;
    if (n < 1) return Scalar(0);
    if (n == 1) return h * (f[0] + f[1]) / 2;
    Eigen::Index m = n % 2 == 0 ? n : n - 3;
    Scalar s{0};
    if (m >= 2) {
        s = f[0] + f[m];
        for (Eigen::Index i = 1; i < m; ++i) s += (i % 2 == 1 ? Scalar(4) : Scalar(2)) * f[i];
        s *= h / 3;
    }
    if (m != n) s += Scalar(3) * h / 8 * (f[m] + 3 * f[m + 1] + 3 * f[m + 2] + f[m + 3]);
    return s;
}

template <class Scalar>
struct WaveSample {
    ModelKind kind;
    ModelParams<Scalar> params;
    Grid<Scalar> grid;
    vec_type<Scalar> values;
    Scalar norm_squared{0};
    SpectralLevel<Scalar> level;
    RootSet<Scalar> roots;
};

namespace detail {

/// Sign of p_N as x approaches the left end of the domain.
template <class Scalar>
Scalar left_edge_sign(ModelKind kind, const vec_type<Scalar>& roots)
{
    if (kind != ModelKind::RosenMorseII) return Scalar(1);
    Scalar sign{1};
    for (Eigen::Index k = 0; k < roots.size(); ++k) {
        if (Scalar(-1) - roots[k] < 0) sign = -sign;
    }
    return sign;
}

} // namespace detail

/// phi_N on a grid with the sign fixed so phi > 0 near the left domain edge.
template <class Scalar>
WaveSample<Scalar> sample(ModelKind kind, const ModelParams<Scalar>& params, int N, const RootSet<Scalar>& roots,
                          const Grid<Scalar>& grid)
{
    check_grid(kind, grid);
    if (roots.size() != N) throw ValidationError("wavefunction: need N roots", {"roots.size() == N"});
    WaveSample<Scalar> s{kind, params, grid, vec_type<Scalar>(grid.points), Scalar(0),
                         spectral_level(kind, params, N), roots};
    const Scalar sign = detail::left_edge_sign(kind, roots.roots);
    for (Eigen::Index i = 0; i < grid.points; ++i)
        s.values[i] = sign * evaluate(kind, params, N, roots.roots, grid.x(i));
    s.norm_squared = simpson<Scalar>(s.values.array().square().matrix(), grid.spacing());
    return s;
}

/// Relative size of what the grid cuts off at each end.
///
/// An end standing in for x -> +-inf reports |phi(edge)| / max|phi|. An end near
/// a finite singular point, where phi vanishes like a power, reports the
/// neglected mass bound phi(edge)^2 * distance / norm.
template <class Scalar>
std::pair<Scalar, Scalar> boundary_leak(const WaveSample<Scalar>& s)
{
    using std::abs;
    const auto dom = domain<Scalar>(s.kind);
    const Scalar peak = s.values.cwiseAbs().maxCoeff();
    const Scalar first = s.values[0];
    const Scalar last = s.values[s.values.size() - 1];
    const Scalar left = dom.lower_is_finite() ? first * first * (s.grid.xmin - dom.lower) / s.norm_squared
                                              : abs(first) / peak;
    const Scalar right = dom.upper_is_finite() ? last * last * (dom.upper - s.grid.xmax) / s.norm_squared
                                               : abs(last) / peak;
    return {left, right};
}

template <class Scalar>
WaveSample<Scalar> normalize(WaveSample<Scalar> s, Scalar leak_tolerance = Scalar(1e-8))
{
    using std::sqrt;
    if (!(s.norm_squared > 0)) throw NumericalError("normalize: wavefunction has zero norm on the grid");
    const auto [left, right] = boundary_leak(s);
    if (!(left < leak_tolerance) || !(right < leak_tolerance)) {
        std::ostringstream msg;
        msg << display_name(s.kind) << " N = " << s.level.N << ": wavefunction does not decay inside ["
            << s.grid.xmin << ", " << s.grid.xmax << "] (leak " << left << " left, " << right
            << " right); widen the grid";
        throw BoundaryLeak(msg.str());
    }
    s.values /= sqrt(s.norm_squared);
    s.norm_squared = simpson<Scalar>(s.values.array().square().matrix(), s.grid.spacing());
    return s;
}

/// Strict sign changes across the grid; exact zeros are skipped.
template <class Scalar>
int node_count(const WaveSample<Scalar>& s)
{
    int changes = 0;
    Scalar last_sign{0};
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        const Scalar v = s.values[i];
        if (v == Scalar(0)) continue;
        const Scalar sign = v > 0 ? Scalar(1) : Scalar(-1);
        if (last_sign != Scalar(0) && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

template <class Scalar>
Scalar inner_product(const WaveSample<Scalar>& a, const WaveSample<Scalar>& b)
{
    if (a.values.size() != b.values.size()) throw ValidationError("inner product: grids differ", {"same grid"});
    return simpson<Scalar>(a.values.cwiseProduct(b.values), a.grid.spacing());
}

enum class Stencil { ThreePoint, FivePoint };

template <class Scalar>
struct ResidualOptions {
    Stencil stencil = Stencil::FivePoint;
    /// Replaces E_N in -phi'' + (V - E) phi.
    std::optional<Scalar> energy;
};

template <class Scalar>
struct ResidualReport {
    /// max interior |-phi'' + (V - E) phi| / max|phi| on the given grid.
    Scalar residual{0};
    /// Same on the grid with half the spacing.
    Scalar refined_residual{0};
    /// residual / refined_residual; ~4 for a second-order stencil.
    Scalar ratio{0};
};

namespace detail {

template <class Scalar>
Scalar residual_on_grid(ModelKind kind, const ModelParams<Scalar>& params, int N, const vec_type<Scalar>& roots,
                        const Grid<Scalar>& grid, Scalar energy, Stencil stencil)
{
    using std::abs;
    check_grid(kind, grid);
    const Eigen::Index m = grid.points;
    vec_type<Scalar> phi(m);
    for (Eigen::Index i = 0; i < m; ++i) phi[i] = evaluate(kind, params, N, roots, grid.x(i));
    const Scalar h = grid.spacing();
    const Scalar h2 = h * h;
    const Scalar peak = phi.cwiseAbs().maxCoeff();
    const Eigen::Index reach = stencil == Stencil::FivePoint ? 2 : 1;
    Scalar worst{0};
    for (Eigen::Index i = reach; i < m - reach; ++i) {
        Scalar d2;
        if (stencil == Stencil::FivePoint) {
            d2 = (-phi[i - 2] + 16 * phi[i - 1] - 30 * phi[i] + 16 * phi[i + 1] - phi[i + 2]) / (12 * h2);
        }
        else {
            d2 = (phi[i - 1] - 2 * phi[i] + phi[i + 1]) / h2;
        }
        const Scalar x = grid.x(i);
        worst = std::max(worst, abs(-d2 + (potential(kind, params, x) - energy) * phi[i]));
    }
    return worst / peak;
}

} // namespace detail

/// Residual of H phi = E_N phi with a finite-difference phi''.
///
/// The residual is scale free, so phi is used un-normalized. Points the
/// stencil does not fully cover are left out.
template <class Scalar>
ResidualReport<Scalar> schrodinger_residual(ModelKind kind, const ModelParams<Scalar>& params, int N,
                                            const RootSet<Scalar>& roots, const Grid<Scalar>& grid,
                                            const ResidualOptions<Scalar>& options = {})
{
    const Scalar energy = options.energy ? *options.energy : eigenvalue(kind, params, N);
    ResidualReport<Scalar> report;
    report.residual = detail::residual_on_grid(kind, params, N, roots.roots, grid, energy, options.stencil);
    report.refined_residual =
        detail::residual_on_grid(kind, params, N, roots.roots, grid.refined(), energy, options.stencil);
    report.ratio = report.residual / report.refined_residual;
    return report;
}

/// Grid holding a level's wavefunction: singular ends are cut at `offset` or
/// closer, infinite ends where exp(-W0) has dropped by `decades` from its maximum.
template <class Scalar>
Grid<Scalar> default_grid(ModelKind kind, const ModelParams<Scalar>& params, int N, Eigen::Index points = 8001,
                          Scalar offset = Scalar(1e-3), Scalar decades = Scalar(14))
{
    using std::log;
    const auto dom = domain<Scalar>(kind);
    const Scalar drop = decades * log(Scalar(10));
    auto envelope = [&](Scalar x) { return -ground_prepotential(kind, params, N, x); };

    auto scan = [&](Scalar start, Scalar step) {
        Scalar x = start;
        Scalar peak = envelope(x);
        for (int i = 0; i < 1000000; ++i) {
            x += step;
            const Scalar e = envelope(x);
            peak = std::max(peak, e);
            if (e < peak - drop) return x;
        }
        throw NumericalError("default grid: envelope does not decay");
    };

    Grid<Scalar> grid;
    grid.points = points;
    switch (kind) {
        case ModelKind::Coulomb:
        case ModelKind::Eckart:
            grid.xmin = dom.lower + offset;
            grid.xmax = scan(grid.xmin, Scalar(0.05));
            break;
        case ModelKind::RosenMorseII:
            grid.xmin = scan(Scalar(0), Scalar(-0.05));
            grid.xmax = scan(Scalar(0), Scalar(0.05));
            break;
        case ModelKind::RosenMorseI:
            grid.xmin = dom.lower + offset;
            grid.xmax = dom.upper - offset;
            break;
    }

    // Narrow states need a smaller cut at a singular end: shrink the offset
    // until the estimated cut-off mass is below 1e-10.
    auto edge_leak = [&](const Grid<Scalar>& g, bool left) {
        using std::abs;
        const Eigen::Index m = 4001;
        const Scalar h = (g.xmax - g.xmin) / Scalar(m - 1);
        vec_type<Scalar> e(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const Scalar x = g.xmin + Scalar(i) * h;
            // p_N grows like |z|^N where z has its pole
            e[i] = envelope(x) + Scalar(N) * log(abs(coordinate(kind, x)) + Scalar(1));
        }
        const vec_type<Scalar> f = (2 * (e.array() - e.maxCoeff())).exp().matrix();
        const Scalar norm = simpson<Scalar>(f, h);
        return left ? f[0] * (g.xmin - dom.lower) / norm : f[m - 1] * (dom.upper - g.xmax) / norm;
    };
    const Scalar min_offset = Scalar(1e-12);
    if (dom.lower_is_finite()) {
        for (Scalar o = offset; o > min_offset && edge_leak(grid, true) > Scalar(1e-10);) {
            o /= 10;
            grid.xmin = dom.lower + o;
        }
    }
    if (dom.upper_is_finite()) {
        for (Scalar o = offset; o > min_offset && edge_leak(grid, false) > Scalar(1e-10);) {
            o /= 10;
            grid.xmax = dom.upper - o;
        }
    }
    return grid;
}

} // namespace prepot
