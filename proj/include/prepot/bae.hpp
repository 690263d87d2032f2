#pragma once

// Bethe ansatz equations for the roots of p_N(z).
//
//   exact:       sum_{l!=k} (z_k^2 - lambda)/(z_k - z_l) - (A+N-1) z_k + B/(A+N) = 0
//   general QES: sum_{l!=k} (z_k^2 - lambda)/(z_k - z_l) + (A1+1) z_k + A0     = 0
//   sinusoidal Coulomb (z = x):  sum_{l!=k} 1/(x_k - x_l) + A/x_k - b          = 0
//
// A, B here are the prepotential couplings (see prepotential_couplings), not the
// sign-converted Rosen-Morse ones.

#include <cmath>
#include <optional>
#include <sstream>
#include <variant>

#include <prepot/errors.hpp>
#include <prepot/models.hpp>
#include <prepot/root_set.hpp>
#include <prepot/types.hpp>

namespace prepot {

struct ExactFlavor {};

/// W0' = A1 z + A0 with N-independent constants.
template <class Scalar>
struct GeneralQesFlavor {
    Scalar A1;
    Scalar A0;
};

/// z(x) = x with the modified prepotential W0 - A ln|x| and W0' = b.
template <class Scalar>
struct CoulombSinusoidalFlavor {
    Scalar b;
};

template <class Scalar>
using BaeFlavor = std::variant<ExactFlavor, GeneralQesFlavor<Scalar>, CoulombSinusoidalFlavor<Scalar>>;

template <class Scalar>
struct BaeProblem {
    int lambda = 0;
    Scalar A{1};
    Scalar B{0};
    int N = 0;
    BaeFlavor<Scalar> flavor = ExactFlavor{};
    /// Model whose physical region the roots must lie in, when known.
    std::optional<ModelKind> model;

    bool is_exact() const noexcept { return std::holds_alternative<ExactFlavor>(flavor); }
    bool is_general() const noexcept { return std::holds_alternative<GeneralQesFlavor<Scalar>>(flavor); }
    bool is_coulomb_sinusoidal() const noexcept
    {
        return std::holds_alternative<CoulombSinusoidalFlavor<Scalar>>(flavor);
    }
};

/// Relative gap below which two roots count as coincident.
template <class Scalar>
inline constexpr Scalar coincidence_tolerance = Scalar(1e-12);

template <class Scalar>
void check_problem(const BaeProblem<Scalar>& problem)
{
    if (problem.N < 0) throw ValidationError("BAE: N must be non-negative", {"N >= 0"});
    if (problem.lambda < -1 || problem.lambda > 1)
        throw ValidationError("BAE: lambda must be -1, 0 or 1", {"lambda in {-1, 0, 1}"});
    if (problem.is_exact() && problem.N > 0) {
        const Scalar a = problem.A + Scalar(problem.N);
        if (a == Scalar(0) || a - Scalar(1) == Scalar(0))
            throw ValidationError("BAE: A+N and A+N-1 must be nonzero", {"A+N != 0", "A+N-1 != 0"});
    }
    if (const auto* s = std::get_if<CoulombSinusoidalFlavor<Scalar>>(&problem.flavor)) {
        std::vector<std::string> diag;
        if (!(problem.A > 0)) diag.emplace_back("A > 0");
        if (!(s->b > 0)) diag.emplace_back("b > 0");
        if (!diag.empty()) throw ValidationError("BAE: sinusoidal Coulomb needs A > 0 and b > 0", diag);
    }
}

/// Exact-form problem for level N of a model.
template <class Scalar>
BaeProblem<Scalar> exact_problem(ModelKind kind, const ModelParams<Scalar>& params, int N)
{
    const auto raw = prepotential_couplings(kind, params);
    BaeProblem<Scalar> problem{lambda(kind), raw.A, raw.B, N, ExactFlavor{}, kind};
    check_problem(problem);
    return problem;
}

template <class Scalar>
BaeProblem<Scalar> general_problem(int lambda_, Scalar A1, Scalar A0, int N,
                                   std::optional<ModelKind> model = std::nullopt)
{
    BaeProblem<Scalar> problem;
    problem.lambda = lambda_;
    problem.N = N;
    problem.flavor = GeneralQesFlavor<Scalar>{A1, A0};
    problem.model = model;
    // A, B of the exact problem this one coincides with.
    problem.A = -A1 - Scalar(N);
    problem.B = -A1 * A0;
    check_problem(problem);
    return problem;
}

/// Sinusoidal-coordinate Coulomb problem with b = B/(A+N).
template <class Scalar>
BaeProblem<Scalar> coulomb_sinusoidal_problem(const ModelParams<Scalar>& params, int N)
{
    BaeProblem<Scalar> problem;
    problem.lambda = 0;
    problem.A = params.A;
    problem.B = params.B;
    problem.N = N;
    problem.flavor = CoulombSinusoidalFlavor<Scalar>{params.B / (params.A + Scalar(N))};
    problem.model = ModelKind::Coulomb;
    check_problem(problem);
    return problem;
}

/// (A1, A0) of W0' = A1 z + A0: the stored constants for the general form,
/// A1 = -(A+N), A0 = B/(A+N) for the exact form.
template <class Scalar>
GeneralQesFlavor<Scalar> qes_couplings(const BaeProblem<Scalar>& problem)
{
    if (const auto* g = std::get_if<GeneralQesFlavor<Scalar>>(&problem.flavor)) return *g;
    const Scalar a = problem.A + Scalar(problem.N);
    return {-a, problem.B / a};
}

namespace detail {

template <class Scalar>
void require_distinct(const vec_type<Scalar>& z)
{
    if (z.size() < 2) return;
    if (relative_min_separation(z) <= coincidence_tolerance<Scalar>)
        throw SingularConfiguration("BAE: coincident roots");
}

template <class Scalar>
void require_root_count(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& z)
{
    if (z.size() != problem.N) {
        std::ostringstream msg;
        msg << "BAE: expected " << problem.N << " roots, got " << z.size();
        throw ValidationError(msg.str(), {"roots.size() == N"});
    }
}

template <class Scalar>
vec_type<Scalar> quadratic_pair_sums(int lambda_, const vec_type<Scalar>& z)
{
    const Eigen::Index n = z.size();
    vec_type<Scalar> s = vec_type<Scalar>::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar num = z[k] * z[k] - Scalar(lambda_);
        for (Eigen::Index l = 0; l < n; ++l) {
            if (l != k) s[k] += num / (z[k] - z[l]);
        }
    }
    return s;
}

} // namespace detail

template <class Scalar>
vec_type<Scalar> residual_exact(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& z)
{
    detail::require_root_count(problem, z);
    detail::require_distinct(z);
    const Scalar a = problem.A + Scalar(problem.N);
    vec_type<Scalar> r = detail::quadratic_pair_sums(problem.lambda, z);
    for (Eigen::Index k = 0; k < z.size(); ++k) r[k] += -(a - 1) * z[k] + problem.B / a;
    return r;
}

template <class Scalar>
vec_type<Scalar> residual_general(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& z)
{
    detail::require_root_count(problem, z);
    detail::require_distinct(z);
    const auto c = qes_couplings(problem);
    vec_type<Scalar> r = detail::quadratic_pair_sums(problem.lambda, z);
    for (Eigen::Index k = 0; k < z.size(); ++k) r[k] += (c.A1 + 1) * z[k] + c.A0;
    return r;
}

template <class Scalar>
vec_type<Scalar> residual_coulomb_sinusoidal(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& x)
{
    detail::require_root_count(problem, x);
    detail::require_distinct(x);
    const auto* s = std::get_if<CoulombSinusoidalFlavor<Scalar>>(&problem.flavor);
    if (!s) throw ValidationError("BAE: not a sinusoidal Coulomb problem", {"flavor"});
    if (x.size() > 0 && !(x.minCoeff() > 0))
        throw SingularConfiguration("BAE: sinusoidal Coulomb roots must be positive");
    const Eigen::Index n = x.size();
    vec_type<Scalar> r(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Scalar pair{0};
        for (Eigen::Index l = 0; l < n; ++l) {
            if (l != k) pair += Scalar(1) / (x[k] - x[l]);
        }
        r[k] = pair + problem.A / x[k] - s->b;
    }
    return r;
}

/// Residual of whichever equations the problem's flavor selects.
template <class Scalar>
vec_type<Scalar> residual(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& z)
{
    if (problem.is_coulomb_sinusoidal()) return residual_coulomb_sinusoidal(problem, z);
    if (problem.is_general()) return residual_general(problem, z);
    return residual_exact(problem, z);
}

/// Analytic d residual_k / d z_l.
template <class Scalar>
mat_type<Scalar> jacobian(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& z)
{
    detail::require_root_count(problem, z);
    detail::require_distinct(z);
    const Eigen::Index n = z.size();
    mat_type<Scalar> J = mat_type<Scalar>::Zero(n, n);
    if (const auto* s = std::get_if<CoulombSinusoidalFlavor<Scalar>>(&problem.flavor)) {
        (void)s;
        for (Eigen::Index k = 0; k < n; ++k) {
            Scalar diag = -problem.A / (z[k] * z[k]);
            for (Eigen::Index l = 0; l < n; ++l) {
                if (l == k) continue;
                const Scalar inv2 = Scalar(1) / ((z[k] - z[l]) * (z[k] - z[l]));
                diag -= inv2;
                J(k, l) = inv2;
            }
            J(k, k) = diag;
        }
        return J;
    }
    const Scalar linear = qes_couplings(problem).A1 + 1;
    const Scalar lam = Scalar(problem.lambda);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar num = z[k] * z[k] - lam;
        Scalar diag = linear;
        for (Eigen::Index l = 0; l < n; ++l) {
            if (l == k) continue;
            const Scalar d = z[k] - z[l];
            diag += (2 * z[k] * d - num) / (d * d);
            J(k, l) = num / (d * d);
        }
        J(k, k) = diag;
    }
    return J;
}

/// Whether roots lie where the bound-state roots of the attached model live:
/// Coulomb z > 0, Eckart z > 1, Rosen-Morse II |z| < 1, Rosen-Morse I any
/// real. Sinusoidal Coulomb roots x_k > 0. Always true without a model.
template <class Scalar>
bool admissible(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& z)
{
    using std::abs;
    using std::isfinite;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        if (!isfinite(z[k])) return false;
    }
    if (!problem.model) return true;
    if (problem.is_coulomb_sinusoidal()) return z.size() == 0 || z.minCoeff() > 0;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        switch (*problem.model) {
            case ModelKind::Coulomb:
                if (!(z[k] > 0)) return false;
                break;
            case ModelKind::Eckart:
                if (!(z[k] > 1)) return false;
                break;
            case ModelKind::RosenMorseII:
                if (!(abs(z[k]) < 1)) return false;
                break;
            case ModelKind::RosenMorseI: break;
        }
    }
    return true;
}

} // namespace prepot
