#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <prepot/types.hpp>

namespace prepot {

/// Roots {z_k} of p_N(z) (or {x_k} for the sinusoidal Coulomb form) with
/// solver metadata. Roots are kept sorted ascending.
template <class Scalar>
struct RootSet {
    vec_type<Scalar> roots;
    Scalar residual_norm{0};
    int iterations = 0;

    Eigen::Index size() const noexcept { return roots.size(); }
    bool empty() const noexcept { return roots.size() == 0; }
};

template <class Scalar>
void sort_ascending(vec_type<Scalar>& v)
{
    std::sort(v.data(), v.data() + v.size());
}

template <class Scalar>
RootSet<Scalar> make_root_set(vec_type<Scalar> roots, Scalar residual_norm = 0, int iterations = 0)
{
    sort_ascending(roots);
    return {std::move(roots), residual_norm, iterations};
}

/// Smallest pairwise gap scaled by 1 + max|z|; +inf for fewer than two roots.
template <class Scalar>
Scalar relative_min_separation(const vec_type<Scalar>& z)
{
    using std::abs;
    Scalar gap = std::numeric_limits<Scalar>::infinity();
    if (z.size() < 2) return gap;
    const Scalar scale = Scalar(1) + z.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        for (Eigen::Index l = k + 1; l < z.size(); ++l) gap = std::min(gap, abs(z[k] - z[l]));
    }
    return gap / scale;
}

/// max_k |a_k - b_k| after sorting both; +inf on size mismatch.
template <class Scalar>
Scalar max_abs_difference_sorted(vec_type<Scalar> a, vec_type<Scalar> b)
{
    if (a.size() != b.size()) return std::numeric_limits<Scalar>::infinity();
    if (a.size() == 0) return Scalar(0);
    sort_ascending(a);
    sort_ascending(b);
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace prepot
