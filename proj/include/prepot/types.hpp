#pragma once

#include <complex>
#include <Eigen/Core>

namespace prepot {

template <class Scalar_, int Rows_ = Eigen::Dynamic>
using vec_type = Eigen::Matrix<Scalar_, Rows_, 1>;

template <class Scalar_, int Rows_ = Eigen::Dynamic, int Cols_ = Eigen::Dynamic>
using mat_type = Eigen::Matrix<Scalar_, Rows_, Cols_>;

template <class Scalar_>
using complex_type = std::complex<Scalar_>;

template <class Scalar_>
inline constexpr Scalar_ pi_v = Scalar_(3.141592653589793238462643383279502884L);

} // namespace prepot
