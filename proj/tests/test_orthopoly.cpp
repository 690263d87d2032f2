#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <prepot/orthopoly.hpp>

using namespace prepot;
using doctest::Approx;
using C = std::complex<double>;

namespace {

double binom_real(double top, int k)
{
    double r = 1;
    for (int i = 0; i < k; ++i) r *= (top - i) / (i + 1);
    return r;
}

C binom(C top, int k)
{
    C r = 1;
    for (int i = 0; i < k; ++i) r *= (top - double(i)) / double(i + 1);
    return r;
}

// Explicit sums, independent of the recurrences under test.
double laguerre_sum(int n, double a, double y)
{
    double s = 0, fact = 1;
    for (int k = 0; k <= n; ++k) {
        if (k) fact *= k;
        s += ((k % 2) ? -1.0 : 1.0) * binom_real(n + a, n - k) * std::pow(y, k) / fact;
    }
    return s;
}

C jacobi_sum(int n, C a, C b, C z)
{
    C s = 0;
    for (int k = 0; k <= n; ++k)
        s += binom(double(n) + a, n - k) * binom(double(n) + b, k) * std::pow((z - 1.0) / 2.0, k) *
             std::pow((z + 1.0) / 2.0, n - k);
    return s;
}

} // namespace

TEST_CASE("laguerre_eval")
{
    CHECK(laguerre_eval(LaguerreParams<double>{0, 3.3}, 7.0) == 1.0);
    CHECK(laguerre_eval(LaguerreParams<double>{1, 1.0}, 2.0) == Approx(0.0));
    CHECK(std::abs(laguerre_eval(LaguerreParams<double>{2, 1.0}, 3 - std::sqrt(3.0))) < 1e-14);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> Ua(-0.9, 4), Uy(0, 10);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const double a = Ua(rng), y = Uy(rng);
        for (int n = 0; n <= 3; ++n) {
            const double ref = laguerre_sum(n, a, y);
            const double got = laguerre_eval(LaguerreParams<double>{n, a}, y);
            worst = std::max(worst, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
        }
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("jacobi_eval")
{
    CHECK(jacobi_eval(JacobiParams<double>{0, C(1.3), C(-0.2)}, C(0.4)) == C(1.0));
    const C a(2.5), b(-1.2);
    const C root = (b - a) / (a + b + 2.0);
    CHECK(std::abs(jacobi_eval(JacobiParams<double>{1, a, b}, root)) < 1e-14);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-3, 3);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const C aa(U(rng), U(rng)), bb(U(rng), U(rng)), z(U(rng), U(rng));
        for (int n = 0; n <= 3; ++n) {
            const C ref = jacobi_sum(n, aa, bb, z);
            const C got = jacobi_eval(JacobiParams<double>{n, aa, bb}, z);
            worst = std::max(worst, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
        }
    }
    CHECK(worst < 1e-12);

    // real parameters and argument give a real value
    CHECK(jacobi_eval(JacobiParams<double>{4, C(0.7), C(1.9)}, C(0.3)).imag() == 0.0);
}

TEST_CASE("jacobi with conjugate parameters has constant phase on the imaginary axis")
{
    const C alpha(-3.5, -0.8);
    const JacobiParams<double> p{3, alpha, std::conj(alpha)};
    const C ref = jacobi_eval(p, C(0, 0));
    for (double z : {-2.0, -0.7, 0.4, 1.3, 3.1}) {
        const C ratio = jacobi_eval(p, C(0, z)) / ref;
        CHECK(std::abs(ratio.imag()) < 1e-12 * std::max(1.0, std::abs(ratio)));
    }
}

TEST_CASE("laguerre_roots")
{
    CHECK(laguerre_roots(LaguerreParams<double>{0, 1.0}).size() == 0);
    const auto r1 = laguerre_roots(LaguerreParams<double>{1, 1.0});
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == Approx(2.0).epsilon(1e-14));
    const auto r2 = laguerre_roots(LaguerreParams<double>{2, 1.0});
    REQUIRE(r2.size() == 2);
    CHECK(r2[0] == Approx(3 - std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2[1] == Approx(3 + std::sqrt(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(laguerre_roots(LaguerreParams<double>{3, -1.5}), ValidationError);

    for (int n = 1; n <= 12; ++n) {
        for (double a : {-0.5, 0.0, 1.0, 4.0}) {
            const LaguerreParams<double> p{n, a};
            const auto y = laguerre_roots(p);
            REQUIRE(y.size() == n);
            for (int k = 1; k < n; ++k) CHECK(y[k] > y[k - 1]);
            CHECK(y.minCoeff() > 0);
            CHECK(laguerre_root_relation_residual(p, y) < 1e-10);
        }
    }
}

TEST_CASE("jacobi_roots")
{
    CHECK(jacobi_roots(JacobiParams<double>{0, C(1), C(1)}).size() == 0);
    const C a(0.4), b(2.2);
    const auto r = jacobi_roots(JacobiParams<double>{1, a, b});
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - (b - a) / (a + b + 2.0)) < 1e-14);

    const C ea(-3 + 16.0 / 3), eb(-3 - 16.0 / 3);
    const auto e = jacobi_roots(JacobiParams<double>{1, ea, eb});
    CHECK(e[0].real() == Approx(8.0 / 3).epsilon(1e-14));

    for (int n = 1; n <= 10; ++n) {
        const JacobiParams<double> p{n, C(0.5, 0.3), C(-0.25, 1.1)};
        const auto z = jacobi_roots(p);
        CHECK(jacobi_root_relation_residual(p, z) < 1e-10);
        for (Eigen::Index k = 0; k < z.size(); ++k) CHECK(std::abs(jacobi_eval(p, z[k])) < 1e-8 * std::abs(jacobi_eval(p, C(3, 0))));
    }
}

TEST_CASE("bae_roots_via_polynomials")
{
    const auto c = bae_roots_via_polynomials(ModelKind::Coulomb, ModelParams<double>{1, 1}, 1);
    CHECK(c.roots[0] == Approx(0.5).epsilon(1e-14));
    const auto e = bae_roots_via_polynomials(ModelKind::Eckart, ModelParams<double>{2, 16}, 1);
    CHECK(e.roots[0] == Approx(8.0 / 3).epsilon(1e-14));
    const auto r = bae_roots_via_polynomials(ModelKind::RosenMorseI, ModelParams<double>{1, 0}, 1);
    CHECK(std::abs(r.roots[0]) < 1e-14);
    CHECK(bae_roots_via_polynomials(ModelKind::Coulomb, ModelParams<double>{1, 1}, 0).empty());
    CHECK_THROWS_AS(bae_roots_via_polynomials(ModelKind::Eckart, ModelParams<double>{2, 16}, 2), LevelError);

    // hydrogen, l = 0, e^2 = 2: x = (N+1) y / e^2 from the L_2^1 roots
    const auto h = bae_roots_via_polynomials(ModelKind::Coulomb, ModelParams<double>{1, 1}, 2);
    const double y0 = 3 - std::sqrt(3.0), y1 = 3 + std::sqrt(3.0);
    CHECK(h.roots[0] == Approx(2 / (3 * y1)).epsilon(1e-13));
    CHECK(h.roots[1] == Approx(2 / (3 * y0)).epsilon(1e-13));

    for (auto kind : all_models) {
        const ModelParams<double> p = kind == ModelKind::Eckart        ? ModelParams<double>{1.5, 80}
                                      : kind == ModelKind::RosenMorseII ? ModelParams<double>{7.5, -4}
                                                                        : ModelParams<double>{1.5, 2};
        for (int N = 1; N <= 5; ++N) CHECK(bae_roots_via_polynomials(kind, p, N).residual_norm < 1e-9);
    }
}

TEST_CASE("Rosen-Morse I p_N has real coefficients")
{
    const ModelParams<double> p{1.5, 2};
    const int N = 4;
    const auto level = spectral_level(ModelKind::RosenMorseI, p, N);
    const JacobiParams<double> jp{N, *level.jacobi_alpha, *level.jacobi_beta};
    const auto y = jacobi_roots(jp);
    for (double z : {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0, -0.3, 1.7, 6.0}) {
        C prod = 1;
        for (Eigen::Index k = 0; k < y.size(); ++k) prod *= C(z, 0) - C(0, -1) * y[k];
        CHECK(std::abs(prod.imag()) < 1e-10 * std::max(1.0, std::abs(prod)));
    }
}
