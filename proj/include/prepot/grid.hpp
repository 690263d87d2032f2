#pragma once

#include <sstream>

#include <prepot/errors.hpp>
#include <prepot/models.hpp>
#include <prepot/types.hpp>

namespace prepot {

/// Uniform grid xmin, xmin + h, ..., xmax.
template <class Scalar>
struct Grid {
    Scalar xmin{0};
    Scalar xmax{1};
    Eigen::Index points = 3;

    Scalar spacing() const noexcept { return (xmax - xmin) / Scalar(points - 1); }
    Scalar x(Eigen::Index i) const noexcept
    {
        return i == points - 1 ? xmax : xmin + Scalar(i) * spacing();
    }
    vec_type<Scalar> abscissae() const
    {
        vec_type<Scalar> out(points);
        for (Eigen::Index i = 0; i < points; ++i) out[i] = x(i);
        return out;
    }
    /// Same interval with half the spacing.
    Grid refined() const noexcept { return {xmin, xmax, 2 * (points - 1) + 1}; }
};

template <class Scalar>
void check_grid(ModelKind kind, const Grid<Scalar>& grid)
{
    if (grid.points < 3 || !(grid.xmin < grid.xmax))
        throw ValidationError("grid needs xmin < xmax and at least 3 points", {"points >= 3", "xmin < xmax"});
    const auto dom = domain<Scalar>(kind);
    if (!dom.contains(grid.xmin) || !dom.contains(grid.xmax)) {
        std::ostringstream msg;
        msg << display_name(kind) << ": grid [" << grid.xmin << ", " << grid.xmax
            << "] is not strictly inside the domain";
        throw DomainError(msg.str());
    }
}

} // namespace prepot
