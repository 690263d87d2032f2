#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include <prepot/bae.hpp>
#include <prepot/errors.hpp>
#include <prepot/orthopoly.hpp>
#include <prepot/root_set.hpp>

namespace prepot {

class ConvergenceFailureBase : public Error {
public:
    using Error::Error;
};

/// Newton did not reach the tolerance; carries the best iterate seen.
template <class Scalar>
class ConvergenceFailure : public ConvergenceFailureBase {
public:
    ConvergenceFailure(const std::string& what, RootSet<Scalar> best)
        : ConvergenceFailureBase(what), best_(std::move(best)) {}

    const RootSet<Scalar>& best_iterate() const noexcept { return best_; }

private:
    RootSet<Scalar> best_;
};

enum class SeedStrategy {
    /// Roots of the matching Laguerre/Jacobi polynomial, homotopy as fallback.
    Polynomial,
    /// Continuation in the number of roots at fixed W0' = A1 z + A0.
    Homotopy,
};

template <class Scalar>
struct SolverOptions {
    Scalar tolerance{1e-12};
    int max_iterations = 200;
    int max_halvings = 20;
    int max_degenerate_events = 3;
    Scalar degenerate_perturbation{1e-8};
};

namespace detail {

template <class Scalar>
Scalar max_abs(const vec_type<Scalar>& v)
{
    return v.size() == 0 ? Scalar(0) : v.cwiseAbs().maxCoeff();
}

template <class Scalar>
bool try_residual(const BaeProblem<Scalar>& problem, const vec_type<Scalar>& z, vec_type<Scalar>& out)
{
    if (!admissible(problem, z)) return false;
    if (z.size() > 1 && relative_min_separation(z) <= coincidence_tolerance<Scalar>) return false;
    try {
        out = residual(problem, z);
    }
    catch (const Error&) {
        return false;
    }
    return out.allFinite();
}

/// Model parameters in the conventional form for a problem built from them.
template <class Scalar>
ModelParams<Scalar> model_params_of(const BaeProblem<Scalar>& problem)
{
    // prepotential_couplings is an involution.
    return prepotential_couplings(*problem.model, ModelParams<Scalar>{problem.A, problem.B});
}

/// Keeps a seed inside the model's physical region.
template <class Scalar>
void clamp_into_region(const BaeProblem<Scalar>& problem, vec_type<Scalar>& seed, const vec_type<Scalar>& prev)
{
    if (!problem.model || seed.size() == 0) return;
    const Eigen::Index last = seed.size() - 1;
    const Scalar first_prev = prev[0];
    const Scalar last_prev = prev[prev.size() - 1];
    if (problem.is_coulomb_sinusoidal() || *problem.model == ModelKind::Coulomb) {
        if (!(seed[0] > 0)) seed[0] = first_prev / 2;
    }
    else if (*problem.model == ModelKind::Eckart) {
        if (!(seed[0] > 1)) seed[0] = (1 + first_prev) / 2;
    }
    else if (*problem.model == ModelKind::RosenMorseII) {
        if (!(seed[0] > -1)) seed[0] = (-1 + first_prev) / 2;
        if (!(seed[last] < 1)) seed[last] = (1 + last_prev) / 2;
    }
}

/// Interlacing guess for n+1 roots given the n roots of the previous stage.
template <class Scalar>
vec_type<Scalar> interlaced_seed(const vec_type<Scalar>& prev)
{
    using std::abs;
    const Eigen::Index n = prev.size();
    vec_type<Scalar> seed(n + 1);
    if (n == 1) {
        const Scalar offset = Scalar(0.5) * std::max(Scalar(1), abs(prev[0]));
        seed << prev[0] - offset, prev[0] + offset;
        return seed;
    }
    seed[0] = prev[0] - (prev[1] - prev[0]) / 2;
    for (Eigen::Index i = 1; i < n; ++i) seed[i] = (prev[i - 1] + prev[i]) / 2;
    seed[n] = prev[n - 1] + (prev[n - 1] - prev[n - 2]) / 2;
    return seed;
}

/// Same flavor constants with n roots.
template <class Scalar>
BaeProblem<Scalar> homotopy_stage(const BaeProblem<Scalar>& problem, int n)
{
    BaeProblem<Scalar> stage = problem;
    stage.N = n;
    if (problem.is_coulomb_sinusoidal()) return stage;
    const auto c = qes_couplings(problem);
    stage.flavor = GeneralQesFlavor<Scalar>{c.A1, c.A0};
    stage.A = -c.A1 - Scalar(n);
    stage.B = -c.A1 * c.A0;
    return stage;
}

template <class Scalar>
vec_type<Scalar> single_root(const BaeProblem<Scalar>& problem)
{
    vec_type<Scalar> z(1);
    if (const auto* s = std::get_if<CoulombSinusoidalFlavor<Scalar>>(&problem.flavor)) {
        z[0] = problem.A / s->b;
        return z;
    }
    const auto c = qes_couplings(problem);
    if (c.A1 + 1 == Scalar(0)) throw SingularConfiguration("BAE: A1 = -1 leaves the one-root equation without solution");
    z[0] = -c.A0 / (c.A1 + 1);
    return z;
}

} // namespace detail

/// Damped Newton from a given seed.
///
/// Converges when the max-abs residual is below options.tolerance and the
/// roots are admissible and pairwise distinct. Trial steps leaving the model
/// region are halved like ones that fail to reduce the residual.
template <class Scalar>
RootSet<Scalar> solve(const BaeProblem<Scalar>& problem, const RootSet<Scalar>& seed,
                      const SolverOptions<Scalar>& options = {})
{
    using std::abs;
    check_problem(problem);
    if (problem.N == 0) return RootSet<Scalar>{};
    if (seed.size() != problem.N) throw ValidationError("BAE solve: seed has wrong size", {"seed.size() == N"});

    vec_type<Scalar> z = seed.roots;
    RootSet<Scalar> best{z, std::numeric_limits<Scalar>::infinity(), 0};
    int degenerate_events = 0;
    vec_type<Scalar> F;

    for (int it = 0; it <= options.max_iterations; ++it) {
        if (z.size() > 1 && relative_min_separation(z) <= coincidence_tolerance<Scalar>) {
            if (++degenerate_events > options.max_degenerate_events)
                throw SingularConfiguration("BAE solve: roots collapsed repeatedly");
            const Scalar mid = Scalar(z.size() - 1) / 2;
            for (Eigen::Index k = 0; k < z.size(); ++k)
                z[k] += options.degenerate_perturbation * (Scalar(k) - mid) * (1 + abs(z[k]));
        }
        if (!detail::try_residual(problem, z, F)) {
            throw ConvergenceFailure<Scalar>("BAE solve: iterate is not admissible", make_root_set(best.roots, best.residual_norm, it));
        }
        const Scalar norm = detail::max_abs(F);
        if (norm < best.residual_norm) best = RootSet<Scalar>{z, norm, it};
        if (norm < options.tolerance) {
            if (relative_min_separation(z) <= Scalar(1e-10))
                throw SingularConfiguration("BAE solve: converged roots are not distinct");
            return make_root_set<Scalar>(z, norm, it);
        }
        if (it == options.max_iterations) break;

        const mat_type<Scalar> J = jacobian(problem, z);
        vec_type<Scalar> dz = J.partialPivLu().solve(-F);
        if (!dz.allFinite()) dz = J.fullPivLu().solve(-F);
        if (!dz.allFinite()) break;

        const Scalar merit = F.squaredNorm();
        Scalar t{1};
        bool accepted = false;
        vec_type<Scalar> cand, Fc;
        for (int h = 0; h <= options.max_halvings; ++h, t /= 2) {
            cand = z + t * dz;
            if (detail::try_residual(problem, cand, Fc) && Fc.squaredNorm() < merit) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        z = cand;
    }
    std::ostringstream msg;
    msg << "BAE solve: no convergence (best max-abs residual " << best.residual_norm << ")";
    throw ConvergenceFailure<Scalar>(msg.str(), make_root_set(best.roots, best.residual_norm, best.iterations));
}

/// Initial guess for solve. Deterministic for a given problem and strategy.
template <class Scalar>
RootSet<Scalar> seed_strategy(const BaeProblem<Scalar>& problem, SeedStrategy strategy = SeedStrategy::Polynomial,
                              const SolverOptions<Scalar>& options = {})
{
    check_problem(problem);
    if (problem.N == 0) return RootSet<Scalar>{};

    if (strategy == SeedStrategy::Polynomial && problem.model) {
        try {
            if (problem.is_coulomb_sinusoidal()) {
                const auto* s = std::get_if<CoulombSinusoidalFlavor<Scalar>>(&problem.flavor);
                vec_type<Scalar> x = laguerre_roots(LaguerreParams<Scalar>{problem.N, 2 * problem.A - 1});
                x /= 2 * s->b;
                return make_root_set<Scalar>(std::move(x));
            }
            auto roots = bae_roots_via_polynomials(*problem.model, detail::model_params_of(problem), problem.N);
            roots.residual_norm = 0;
            return roots;
        }
        catch (const Error&) {
            // fall through to continuation
        }
    }

    vec_type<Scalar> prev = detail::single_root(detail::homotopy_stage(problem, 1));
    for (int n = 2; n <= problem.N; ++n) {
        const auto stage = detail::homotopy_stage(problem, n - 1);
        if (n - 1 > 1) prev = solve(stage, make_root_set<Scalar>(prev), options).roots;
        vec_type<Scalar> next = detail::interlaced_seed(prev);
        detail::clamp_into_region(problem, next, prev);
        prev = std::move(next);
    }
    return make_root_set<Scalar>(std::move(prev));
}

template <class Scalar>
RootSet<Scalar> solve(const BaeProblem<Scalar>& problem, SeedStrategy strategy = SeedStrategy::Polynomial,
                      const SolverOptions<Scalar>& options = {})
{
    return solve(problem, seed_strategy(problem, strategy, options), options);
}

} // namespace prepot
