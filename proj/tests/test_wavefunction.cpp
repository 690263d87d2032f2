#include <doctest.h>

#include <cmath>
#include <random>

#include <prepot/bae_solver.hpp>
#include <prepot/wavefunction.hpp>

using namespace prepot;
using doctest::Approx;

namespace {

RootSet<double> roots_of(ModelKind kind, const ModelParams<double>& p, int N)
{
    return solve(exact_problem(kind, p, N), SeedStrategy::Homotopy);
}

struct Case {
    ModelKind kind;
    ModelParams<double> p;
};

const Case cases[] = {
    {ModelKind::Coulomb, {1, 1}},      {ModelKind::Coulomb, {2.5, 3}}, {ModelKind::Eckart, {1.5, 150}},
    {ModelKind::RosenMorseII, {9.5, 3}}, {ModelKind::RosenMorseI, {1.5, 2}},
};

} // namespace

TEST_CASE("prepotential_w")
{
    const ModelParams<double> c{1, 1};
    CHECK(prepotential_w(ModelKind::Coulomb, c, 0, vec_type<double>(0), 1.0) == Approx(1.0));
    for (auto kind : all_models) {
        const ModelParams<double> p{1.5, kind == ModelKind::Eckart ? 9.0 : 0.5};
        CHECK(prepotential_w(kind, p, 0, vec_type<double>(0), 0.6) == ground_prepotential(kind, p, 0, 0.6));
    }
    const ModelParams<double> e{2, 16};
    const auto r = roots_of(ModelKind::Eckart, e, 1);
    const double xr = std::atanh(3.0 / 8);  // coth x = 8/3
    CHECK_THROWS_AS(prepotential_w(ModelKind::Eckart, e, 1, r.roots, xr), PoleError);
    CHECK_THROWS_AS(vn_from_prepotential(ModelKind::Eckart, e, 1, r.roots, xr), PoleError);
}

TEST_CASE("evaluate")
{
    const ModelParams<double> c{1, 1};
    CHECK(evaluate(ModelKind::Coulomb, c, 0, vec_type<double>(0), 1.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(evaluate(ModelKind::Coulomb, c, 0, vec_type<double>(0), 1.0) == Approx(0.367879).epsilon(1e-6));
    CHECK(evaluate(ModelKind::RosenMorseII, ModelParams<double>{2, 0}, 0, vec_type<double>(0), 0.0) == Approx(1.0));

    const ModelParams<double> e{2, 16};
    const auto r = roots_of(ModelKind::Eckart, e, 1);
    for (double x : {0.2, 0.5, 1.3}) {
        const double expected = std::pow(std::sinh(x), 3) * std::exp(-16 * x / 3) * (1 / std::tanh(x) - 8.0 / 3);
        CHECK(evaluate(ModelKind::Eckart, e, 1, r.roots, x) == Approx(expected).epsilon(1e-13));
    }
    const double x0 = std::atanh(3.0 / 8);
    CHECK(x0 == Approx(0.5 * std::log(2.2)).epsilon(1e-14));
    CHECK(evaluate(ModelKind::Eckart, e, 1, r.roots, x0 - 1e-6) > 0);
    CHECK(evaluate(ModelKind::Eckart, e, 1, r.roots, x0 + 1e-6) < 0);

    // Rosen-Morse closed forms
    const ModelParams<double> m{5, 3};
    CHECK(evaluate(ModelKind::RosenMorseII, m, 0, vec_type<double>(0), 0.7) ==
          Approx(std::pow(std::cosh(0.7), -5) * std::exp(-3 * 0.7 / 5)).epsilon(1e-13));
    const ModelParams<double> s{1.5, 2};
    CHECK(evaluate(ModelKind::RosenMorseI, s, 0, vec_type<double>(0), 1.1) ==
          Approx(std::pow(std::sin(1.1), 1.5) * std::exp(2 * 1.1 / 1.5)).epsilon(1e-13));
    CHECK_THROWS_AS(evaluate(ModelKind::RosenMorseI, s, 0, vec_type<double>(0), 4.0), DomainError);
}

TEST_CASE("normalize")
{
    const ModelParams<double> c{1, 1};
    const Grid<double> g{1e-4, 40, 8001};
    const auto raw = sample(ModelKind::Coulomb, c, 0, RootSet<double>{}, g);
    CHECK(raw.norm_squared == Approx(0.25).epsilon(1e-8));
    const auto n = normalize(raw);
    CHECK(n.norm_squared == Approx(1.0).epsilon(1e-8));
    CHECK(n.values.minCoeff() >= 0);

    CHECK_THROWS_AS(normalize(sample(ModelKind::Coulomb, c, 0, RootSet<double>{}, Grid<double>{1e-3, 2, 2001})), BoundaryLeak);
    CHECK_THROWS_AS(sample(ModelKind::Coulomb, c, 0, RootSet<double>{}, Grid<double>{0, 2, 2001}), DomainError);
    CHECK_THROWS_AS(sample(ModelKind::Coulomb, c, 1, RootSet<double>{}, g), ValidationError);
}

TEST_CASE("simpson")
{
    for (int n : {11, 12, 101, 102}) {
        vec_type<double> f(n);
        const double h = 2.0 / (n - 1);
        for (int i = 0; i < n; ++i) f[i] = std::pow(i * h, 3);
        CHECK(simpson(f, h) == Approx(4.0).epsilon(1e-13));
    }
}

TEST_CASE("node counts and sign convention")
{
    for (const auto& c : cases) {
        const auto count = bound_state_count(c.kind, c.p);
        const int top = count.is_infinite() ? 8 : std::min<int>(8, int(count.value()) - 1);
        for (int N = 0; N <= top; ++N) {
            const auto s = normalize(sample(c.kind, c.p, N, roots_of(c.kind, c.p, N), default_grid(c.kind, c.p, N, 8001)));
            CHECK(node_count(s) == N);
            // first nonzero sample is positive
            Eigen::Index i = 0;
            while (s.values[i] == 0) ++i;
            CHECK(s.values[i] > 0);
        }
    }
    const auto c3 = normalize(sample(ModelKind::Coulomb, ModelParams<double>{1, 1}, 3, roots_of(ModelKind::Coulomb, {1, 1}, 3),
                                     default_grid(ModelKind::Coulomb, ModelParams<double>{1, 1}, 3)));
    CHECK(node_count(c3) == 3);
}

TEST_CASE("orthogonality")
{
    for (const auto& c : cases) {
        const auto count = bound_state_count(c.kind, c.p);
        const int top = count.is_infinite() ? 4 : std::min<int>(4, int(count.value()) - 1);
        Grid<double> g = default_grid(c.kind, c.p, 0, 16001);
        for (int N = 1; N <= top; ++N) {
            const auto gN = default_grid(c.kind, c.p, N, 16001);
            g.xmin = std::min(g.xmin, gN.xmin);
            g.xmax = std::max(g.xmax, gN.xmax);
        }
        std::vector<WaveSample<double>> s;
        for (int N = 0; N <= top; ++N) s.push_back(normalize(sample(c.kind, c.p, N, roots_of(c.kind, c.p, N), g), 1e-6));
        for (int n = 0; n <= top; ++n) {
            for (int m = n + 1; m <= top; ++m) CHECK(std::abs(inner_product(s[n], s[m])) < 1e-6);
        }
    }
}

TEST_CASE("vn_from_prepotential")
{
    std::mt19937_64 rng(17);
    for (const auto& c : cases) {
        const auto raw = prepotential_couplings(c.kind, c.p);
        // N = 0 gives V0 = A1(A1+1) z^2 + 2 A1 A0 z + A0^2 - lambda A1
        const double A1 = -raw.A, A0 = raw.B / raw.A;
        const double x0 = c.kind == ModelKind::RosenMorseII ? -0.4 : 0.9;
        const double z = coordinate(c.kind, x0);
        const double v0 = A1 * (A1 + 1) * z * z + 2 * A1 * A0 * z + A0 * A0 - lambda(c.kind) * A1;
        CHECK(vn_from_prepotential(c.kind, c.p, 0, vec_type<double>(0), x0) == Approx(v0).epsilon(1e-13));
        CHECK(v0 == Approx(potential(c.kind, c.p, x0) - eigenvalue(c.kind, c.p, 0)).epsilon(1e-13));

        for (int N = 1; N <= 4; ++N) {
            if (!bound_state_count(c.kind, c.p).admits(N)) break;
            const auto r = roots_of(c.kind, c.p, N);
            const double E = eigenvalue(c.kind, c.p, N);
            const auto g = default_grid(c.kind, c.p, N, 3);
            std::uniform_real_distribution<double> U(std::max(g.xmin, 0.05), std::min(g.xmax, c.kind == ModelKind::RosenMorseI ? 3.09 : 1e9));
            double good = 0, bad = 0;
            vec_type<double> moved = r.roots;
            moved[0] += 1e-3;
            for (int i = 0; i < 200; ++i) {
                const double x = U(rng);
                const double target = potential(c.kind, c.p, x) - E;
                good = std::max(good, std::abs(vn_from_prepotential(c.kind, c.p, N, r.roots, x) - target));
                bad = std::max(bad, std::abs(vn_from_prepotential(c.kind, c.p, N, moved, x) - target));
            }
            CHECK(good < 1e-8);
            CHECK(bad > 1e-6);
        }
    }
    const ModelParams<double> e{2, 16};
    CHECK(vn_from_prepotential(ModelKind::Eckart, e, 1, roots_of(ModelKind::Eckart, e, 1).roots, 1.0) ==
          Approx(potential(ModelKind::Eckart, e, 1.0) - eigenvalue(ModelKind::Eckart, e, 1)).epsilon(1e-11));
}

TEST_CASE("no pole in Delta V near the roots")
{
    for (const auto& c : cases) {
        for (int N = 1; N <= 3; ++N) {
            if (!bound_state_count(c.kind, c.p).admits(N)) break;
            const auto r = roots_of(c.kind, c.p, N);
            const double E = eigenvalue(c.kind, c.p, N);
            double worst = 0;
            for (Eigen::Index k = 0; k < r.roots.size(); ++k) {
                for (double dz : {1e-2, -1e-2, 1e-3, -1e-3}) {
                    const double z = r.roots[k] + dz;
                    double x;
                    switch (c.kind) {
                        case ModelKind::Coulomb: x = 1 / z; break;
                        case ModelKind::Eckart: x = std::atanh(1 / z); break;
                        case ModelKind::RosenMorseII: x = std::atanh(z); break;
                        default: x = std::atan2(1.0, z); break;
                    }
                    if (!domain<double>(c.kind).contains(x)) continue;
                    worst = std::max(worst, std::abs(vn_from_prepotential(c.kind, c.p, N, r.roots, x) -
                                                     (potential(c.kind, c.p, x) - E)));
                }
            }
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("schrodinger_residual")
{
    const ModelParams<double> c{1, 1};
    const RootSet<double> none;
    const Grid<double> g{0.01, 30, 8001};
    const auto r = schrodinger_residual(ModelKind::Coulomb, c, 0, none, g);
    CHECK(r.residual < 1e-5);
    CHECK(r.refined_residual < 1e-5);

    ResidualOptions<double> three;
    three.stencil = Stencil::ThreePoint;
    const auto r3 = schrodinger_residual(ModelKind::Coulomb, c, 0, none, g, three);
    CHECK(r3.ratio == Approx(4.0).epsilon(0.05));

    // a wrong energy shows up as roughly 0.1 phi at the peak
    ResidualOptions<double> shifted;
    shifted.energy = eigenvalue(ModelKind::Coulomb, c, 0) + 0.1;
    const auto rs = schrodinger_residual(ModelKind::Coulomb, c, 0, none, g, shifted);
    CHECK(rs.residual == Approx(0.1).epsilon(1e-3));

    const ModelParams<double> m{1, 0};
    const auto roots = solve(exact_problem(ModelKind::RosenMorseI, m, 1));
    const Grid<double> gm{0.05, pi_v<double> - 0.05, 16001};
    CHECK(schrodinger_residual(ModelKind::RosenMorseI, m, 1, roots, gm).residual < 1e-4);
}

TEST_CASE("Rosen-Morse II mirror symmetry")
{
    const ModelParams<double> p{5, 3}, q{5, -3};
    for (int N = 0; N < 4; ++N) {
        const Grid<double> g{-40, 40, 8001};
        const auto a = normalize(sample(ModelKind::RosenMorseII, p, N, roots_of(ModelKind::RosenMorseII, p, N), g));
        const auto b = normalize(sample(ModelKind::RosenMorseII, q, N, roots_of(ModelKind::RosenMorseII, q, N), g));
        const double sign = N % 2 ? -1.0 : 1.0;
        double worst = 0;
        for (Eigen::Index i = 0; i < g.points; ++i)
            worst = std::max(worst, std::abs(a.values[i] - sign * b.values[g.points - 1 - i]));
        CHECK(worst < 1e-10);
    }
}
