#pragma once

// Laguerre and Jacobi polynomials with their roots.
//
// Evaluation uses the standard three-term recurrences, so P_n^{(a,b)}(1) =
// (a+1)_n / n! and L_n^a(0) = (a+1)_n / n!. Roots come from the eigenvalues of
// the tridiagonal companion matrix of the monic recurrence
//     p_n(x) = (x - b_n) p_{n-1}(x) - c_n p_{n-2}(x),
// followed by Newton polishing on the same recurrence. Complex Jacobi
// parameters are supported; that is what Rosen-Morse I needs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include <prepot/bae.hpp>
#include <prepot/errors.hpp>
#include <prepot/models.hpp>
#include <prepot/root_set.hpp>
#include <prepot/types.hpp>

namespace prepot {

template <class Scalar>
struct LaguerreParams {
    int n = 0;
    Scalar a{0};
};

template <class Scalar>
struct JacobiParams {
    int n = 0;
    complex_type<Scalar> alpha{};
    complex_type<Scalar> beta{};
};

/// L_n^a(y) by (k) L_k = (2k-1+a-y) L_{k-1} - (k-1+a) L_{k-2}.
template <class Scalar>
Scalar laguerre_eval(const LaguerreParams<Scalar>& p, Scalar y)
{
    if (p.n <= 0) return Scalar(1);
    Scalar prev{1};
    Scalar curr = Scalar(1) + p.a - y;
    for (int k = 2; k <= p.n; ++k) {
        const Scalar kk = Scalar(k);
        const Scalar next = ((2 * kk - 1 + p.a - y) * curr - (kk - 1 + p.a) * prev) / kk;
        prev = curr;
        curr = next;
    }
    return curr;
}

namespace detail {

template <class T>
[[noreturn]] void degenerate_recurrence(const char* family, int k, const T& alpha, const T& beta)
{
    std::ostringstream msg;
    msg << family << " recurrence degenerates at k = " << k << " for parameters (" << alpha << ", "
        << beta << ")";
    throw NumericalError(msg.str());
}

template <class T>
bool is_zero(const T& v)
{
    using std::abs;
    return abs(v) == 0;
}

/// Coefficients (A_k, B_k, C_k) of P_k = (A_k z + B_k) P_{k-1} - C_k P_{k-2}.
template <class T>
void jacobi_recurrence_coefficients(int k, const T& a, const T& b, T& Ak, T& Bk, T& Ck)
{
    using R = typename T::value_type;
    const R kk = R(k);
    if (k == 1) {
        Ak = (a + b + R(2)) / R(2);
        Bk = (a - b) / R(2);
        Ck = T(0);
        return;
    }
    const T s = R(2) * kk + a + b;
    const T den = R(2) * kk * (kk + a + b) * (s - R(2));
    if (is_zero(den)) degenerate_recurrence("Jacobi", k, a, b);
    Ak = (s - R(1)) * s * (s - R(2)) / den;
    Bk = (s - R(1)) * (a * a - b * b) / den;
    Ck = R(2) * (kk + a - R(1)) * (kk + b - R(1)) * s / den;
}

} // namespace detail

/// P_n^{(alpha,beta)}(z) in complex arithmetic.
template <class Scalar>
complex_type<Scalar> jacobi_eval(const JacobiParams<Scalar>& p, complex_type<Scalar> z)
{
    using C = complex_type<Scalar>;
    if (p.n <= 0) return C(1);
    C prev(1);
    C Ak, Bk, Ck;
    detail::jacobi_recurrence_coefficients(1, p.alpha, p.beta, Ak, Bk, Ck);
    C curr = Ak * z + Bk;
    for (int k = 2; k <= p.n; ++k) {
        detail::jacobi_recurrence_coefficients(k, p.alpha, p.beta, Ak, Bk, Ck);
        const C next = (Ak * z + Bk) * curr - Ck * prev;
        prev = curr;
        curr = next;
    }
    return curr;
}

/// Monic three-term recurrence p_k = (x - b_k) p_{k-1} - c_k p_{k-2}, k = 1..n.
/// c_1 is unused.
template <class T>
struct MonicRecurrence {
    std::vector<T> b;
    std::vector<T> c;

    int degree() const noexcept { return static_cast<int>(b.size()); }

    /// p_n(x) and p_n'(x).
    std::pair<T, T> evaluate(const T& x) const
    {
        T p_prev(1), p_curr(1), d_prev(0), d_curr(0);
        for (int k = 0; k < degree(); ++k) {
            const T cc = k == 0 ? T(0) : c[k];
            const T p_next = (x - b[k]) * p_curr - cc * p_prev;
            const T d_next = p_curr + (x - b[k]) * d_curr - cc * d_prev;
            p_prev = p_curr;
            p_curr = p_next;
            d_prev = d_curr;
            d_curr = d_next;
        }
        return {p_curr, d_curr};
    }

    /// Tridiagonal matrix whose characteristic polynomial is p_n.
    mat_type<T> companion() const
    {
        const int n = degree();
        mat_type<T> m = mat_type<T>::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            m(k, k) = b[k];
            if (k + 1 < n) {
                m(k + 1, k) = T(1);
                m(k, k + 1) = c[k + 1];
            }
        }
        return m;
    }
};

template <class Scalar>
MonicRecurrence<Scalar> laguerre_monic_recurrence(const LaguerreParams<Scalar>& p)
{
    MonicRecurrence<Scalar> rec;
    for (int k = 1; k <= p.n; ++k) {
        const Scalar kk = Scalar(k);
        rec.b.push_back(2 * kk - 1 + p.a);
        rec.c.push_back((kk - 1) * (kk - 1 + p.a));
    }
    return rec;
}

template <class Scalar>
MonicRecurrence<complex_type<Scalar>> jacobi_monic_recurrence(const JacobiParams<Scalar>& p)
{
    using C = complex_type<Scalar>;
    MonicRecurrence<C> rec;
    C A_prev(1);
    for (int k = 1; k <= p.n; ++k) {
        C Ak, Bk, Ck;
        detail::jacobi_recurrence_coefficients(k, p.alpha, p.beta, Ak, Bk, Ck);
        if (detail::is_zero(Ak)) detail::degenerate_recurrence("Jacobi (leading coefficient)", k, p.alpha, p.beta);
        rec.b.push_back(-Bk / Ak);
        rec.c.push_back(k == 1 ? C(0) : Ck / (Ak * A_prev));
        A_prev = Ak;
    }
    return rec;
}

namespace detail {

template <class T>
T newton_polish(const MonicRecurrence<T>& rec, T x)
{
    using std::abs;
    using R = decltype(abs(x));
    auto [fx, dfx] = rec.evaluate(x);
    for (int it = 0; it < 20; ++it) {
        if (is_zero(dfx)) break;
        const T step = fx / dfx;
        const T cand = x - step;
        auto [fc, dfc] = rec.evaluate(cand);
        if (!(abs(fc) < abs(fx))) break;
        x = cand;
        fx = fc;
        dfx = dfc;
        if (abs(step) <= R(1e-16) * (R(1) + abs(x))) break;
    }
    return x;
}

template <class Scalar>
vec_type<complex_type<Scalar>> recurrence_roots(const MonicRecurrence<complex_type<Scalar>>& rec)
{
    using C = complex_type<Scalar>;
    const int n = rec.degree();
    vec_type<C> roots(n);
    if (n == 0) return roots;
    Eigen::ComplexEigenSolver<mat_type<C>> solver(rec.companion(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericalError("companion-matrix eigenvalue solve failed");
    for (int k = 0; k < n; ++k) roots[k] = newton_polish(rec, C(solver.eigenvalues()[k]));
    std::sort(roots.data(), roots.data() + n, [](const C& u, const C& v) {
        return u.real() < v.real() || (u.real() == v.real() && u.imag() < v.imag());
    });
    return roots;
}

} // namespace detail

/// Ascending real roots of L_n^a; requires a > -1.
template <class Scalar>
vec_type<Scalar> laguerre_roots(const LaguerreParams<Scalar>& p)
{
    using C = complex_type<Scalar>;
    if (p.n <= 0) return vec_type<Scalar>(0);
    if (!(p.a > -1)) throw ValidationError("Laguerre roots need a > -1", {"a > -1"});
    const auto real_rec = laguerre_monic_recurrence(p);
    MonicRecurrence<C> rec;
    for (int k = 0; k < p.n; ++k) {
        rec.b.push_back(C(real_rec.b[k]));
        rec.c.push_back(C(real_rec.c[k]));
    }
    const auto croots = detail::recurrence_roots<Scalar>(rec);
    vec_type<Scalar> roots(p.n);
    for (int k = 0; k < p.n; ++k) roots[k] = detail::newton_polish(real_rec, croots[k].real());
    sort_ascending(roots);
    return roots;
}

/// Roots of P_n^{(alpha,beta)} sorted by real part.
template <class Scalar>
vec_type<complex_type<Scalar>> jacobi_roots(const JacobiParams<Scalar>& p)
{
    if (p.n <= 0) return vec_type<complex_type<Scalar>>(0);
    return detail::recurrence_roots<Scalar>(jacobi_monic_recurrence(p));
}

/// max_k |sum_{l!=k} 1/(y_k-y_l) + ((a+1)/2)/y_k - 1/2|: the Laguerre root relation.
template <class Scalar>
Scalar laguerre_root_relation_residual(const LaguerreParams<Scalar>& p, const vec_type<Scalar>& y)
{
    using std::abs;
    Scalar worst{0};
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        Scalar s = (p.a + 1) / (2 * y[k]) - Scalar(0.5);
        for (Eigen::Index l = 0; l < y.size(); ++l) {
            if (l != k) s += Scalar(1) / (y[k] - y[l]);
        }
        worst = std::max(worst, abs(s));
    }
    return worst;
}

/// max_k |sum_{l!=k} 1/(z_k-z_l) + ((alpha+1)/2)/(z_k-1) + ((beta+1)/2)/(z_k+1)|.
template <class Scalar>
Scalar jacobi_root_relation_residual(const JacobiParams<Scalar>& p, const vec_type<complex_type<Scalar>>& z)
{
    using std::abs;
    using C = complex_type<Scalar>;
    Scalar worst{0};
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        C s = (p.alpha + Scalar(1)) / (Scalar(2) * (z[k] - Scalar(1))) +
              (p.beta + Scalar(1)) / (Scalar(2) * (z[k] + Scalar(1)));
        for (Eigen::Index l = 0; l < z.size(); ++l) {
            if (l != k) s += C(1) / (z[k] - z[l]);
        }
        worst = std::max(worst, abs(s));
    }
    return worst;
}

/// Bethe ansatz roots of level N read off from the classical polynomials.
///
/// Coulomb: z_k = 2B / ((A+N) y_k) with y_k the roots of L_N^{2A-1}.
/// Eckart, Rosen-Morse II: roots of P_N^{(alpha,beta)} directly.
/// Rosen-Morse I: z_k = -i y_k with y_k the roots of P_N^{(alpha,conj alpha)}.
template <class Scalar>
RootSet<Scalar> bae_roots_via_polynomials(ModelKind kind, const ModelParams<Scalar>& params, int N)
{
    using std::abs;
    using C = complex_type<Scalar>;
    require_level(kind, params, N);
    if (N == 0) return RootSet<Scalar>{};
    const auto level = spectral_level(kind, params, N);
    vec_type<Scalar> z(N);
    const Scalar imag_tol = Scalar(1e-10);

    if (kind == ModelKind::Coulomb) {
        const LaguerreParams<Scalar> lp{N, *level.laguerre_gamma - 1};
        const vec_type<Scalar> y = laguerre_roots(lp);
        for (int k = 0; k < N; ++k) z[k] = 2 * params.B / ((params.A + Scalar(N)) * y[k]);
    }
    else {
        const JacobiParams<Scalar> jp{N, *level.jacobi_alpha, *level.jacobi_beta};
        const vec_type<C> roots = jacobi_roots(jp);
        for (int k = 0; k < N; ++k) {
            const C zk = kind == ModelKind::RosenMorseI ? C(0, -1) * roots[k] : roots[k];
            if (abs(zk.imag()) > imag_tol * std::max(Scalar(1), abs(zk))) {
                std::ostringstream msg;
                msg << display_name(kind) << ": polynomial root " << zk << " is not real";
                throw NumericalError(msg.str());
            }
            z[k] = zk.real();
        }
    }
    sort_ascending(z);
    const auto problem = exact_problem(kind, params, N);
    const Scalar norm = residual_exact(problem, z).cwiseAbs().maxCoeff();
    return RootSet<Scalar>{std::move(z), norm, 0};
}

} // namespace prepot
