#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <prepot/errors.hpp>
#include <prepot/types.hpp>

namespace prepot {

/// The four potentials built on a coordinate with z' = lambda - z^2.
///
/// Couplings follow the conventional forms: Coulomb and Eckart use
/// V = A(A-1) z^2 - 2Bz, Rosen-Morse II uses V = A(A+1) tanh^2 x + 2B tanh x and
/// Rosen-Morse I uses V = A(A-1) cot^2 x + 2B cot x. The hbar = 2m = 1 units and
/// unit length scale are fixed.
enum class ModelKind { Coulomb, Eckart, RosenMorseII, RosenMorseI };

inline constexpr ModelKind all_models[] = {ModelKind::Coulomb, ModelKind::Eckart,
                                           ModelKind::RosenMorseII, ModelKind::RosenMorseI};

inline constexpr int lambda(ModelKind kind) noexcept
{
    switch (kind) {
        case ModelKind::Coulomb: return 0;
        case ModelKind::Eckart: return 1;
        case ModelKind::RosenMorseII: return 1;
        case ModelKind::RosenMorseI: return -1;
    }
    return 0;
}

/// Short name used on the command line.
inline std::string_view cli_name(ModelKind kind) noexcept
{
    switch (kind) {
        case ModelKind::Coulomb: return "coulomb";
        case ModelKind::Eckart: return "eckart";
        case ModelKind::RosenMorseII: return "rm2";
        case ModelKind::RosenMorseI: return "rm1";
    }
    return "";
}

inline std::string_view display_name(ModelKind kind) noexcept
{
    switch (kind) {
        case ModelKind::Coulomb: return "Coulomb";
        case ModelKind::Eckart: return "Eckart";
        case ModelKind::RosenMorseII: return "Rosen-Morse II";
        case ModelKind::RosenMorseI: return "Rosen-Morse I";
    }
    return "";
}

inline std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept
{
    for (auto kind : all_models) {
        if (cli_name(kind) == name) return kind;
    }
    if (name == "rosen-morse-ii" || name == "rmii") return ModelKind::RosenMorseII;
    if (name == "rosen-morse-i" || name == "rmi") return ModelKind::RosenMorseI;
    return std::nullopt;
}

template <class Scalar>
struct ModelParams {
    Scalar A{1};
    Scalar B{0};
};

/// Open interval on which the coordinate is defined.
template <class Scalar>
struct Domain {
    Scalar lower;
    Scalar upper;

    bool contains(Scalar x) const noexcept { return x > lower && x < upper; }
    bool lower_is_finite() const noexcept { return std::isfinite(lower); }
    bool upper_is_finite() const noexcept { return std::isfinite(upper); }
};

template <class Scalar = double>
Domain<Scalar> domain(ModelKind kind) noexcept
{
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
    switch (kind) {
        case ModelKind::Coulomb:
        case ModelKind::Eckart: return {Scalar(0), inf};
        case ModelKind::RosenMorseII: return {-inf, inf};
        case ModelKind::RosenMorseI: return {Scalar(0), pi_v<Scalar>};
    }
    return {-inf, inf};
}

namespace detail {

template <class Scalar>
void require_in_domain(ModelKind kind, Scalar x)
{
    if (!domain<Scalar>(kind).contains(x)) {
        std::ostringstream msg;
        msg << display_name(kind) << ": x = " << x << " is outside the open domain";
        throw DomainError(msg.str());
    }
}

template <class Scalar>
Scalar sq(Scalar v) noexcept
{
    return v * v;
}

} // namespace detail

/// z(x): 1/x, coth x, tanh x or cot x.
template <class Scalar>
Scalar coordinate(ModelKind kind, Scalar x)
{
    using std::tan;
    using std::tanh;
    detail::require_in_domain(kind, x);
    switch (kind) {
        case ModelKind::Coulomb: return Scalar(1) / x;
        case ModelKind::Eckart: return Scalar(1) / tanh(x);
        case ModelKind::RosenMorseII: return tanh(x);
        case ModelKind::RosenMorseI: return Scalar(1) / tan(x);
    }
    return Scalar(0);
}

/// dz/dx expressed through z.
template <class Scalar>
Scalar coordinate_derivative(ModelKind kind, Scalar z) noexcept
{
    return Scalar(lambda(kind)) - z * z;
}

/// Antiderivative of z(x): ln x, ln sinh x, ln cosh x or ln sin x.
///
/// The hyperbolic forms are written so they stay finite for large |x|.
template <class Scalar>
Scalar coordinate_integral(ModelKind kind, Scalar x)
{
    using std::abs;
    using std::exp;
    using std::log;
    using std::log1p;
    using std::sin;
    detail::require_in_domain(kind, x);
    const Scalar ln2 = log(Scalar(2));
    switch (kind) {
        case ModelKind::Coulomb: return log(x);
        case ModelKind::Eckart: return x + log1p(-exp(-2 * x)) - ln2;
        case ModelKind::RosenMorseII: return abs(x) + log1p(exp(-2 * abs(x))) - ln2;
        case ModelKind::RosenMorseI: return log(sin(x));
    }
    return Scalar(0);
}

template <class Scalar>
Scalar potential(ModelKind kind, const ModelParams<Scalar>& p, Scalar x)
{
    const Scalar z = coordinate(kind, x);
    const Scalar A = p.A;
    const Scalar B = p.B;
    switch (kind) {
        case ModelKind::Coulomb:
        case ModelKind::Eckart: return A * (A - 1) * z * z - 2 * B * z;
        case ModelKind::RosenMorseII: return A * (A + 1) * z * z + 2 * B * z;
        case ModelKind::RosenMorseI: return A * (A - 1) * z * z + 2 * B * z;
    }
    return Scalar(0);
}

/// Limit of the potential at an infinite end of the domain, the bottom of the
/// continuum. Unbounded for Rosen-Morse I.
template <class Scalar>
Scalar continuum_threshold(ModelKind kind, const ModelParams<Scalar>& p) noexcept
{
    using std::abs;
    const Scalar A = p.A;
    const Scalar B = p.B;
    switch (kind) {
        case ModelKind::Coulomb: return Scalar(0);
        case ModelKind::Eckart: return A * (A - 1) - 2 * B;
        case ModelKind::RosenMorseII: return A * (A + 1) - 2 * abs(B);
        case ModelKind::RosenMorseI: return std::numeric_limits<Scalar>::infinity();
    }
    return Scalar(0);
}

/// Couplings of the common prepotential W0' = -(A+N) z + B/(A+N).
///
/// Coulomb and Eckart use their A, B directly. Rosen-Morse II is stored with
/// A -> -A and B -> -B and Rosen-Morse I with B -> -B, so this undoes that.
template <class Scalar>
ModelParams<Scalar> prepotential_couplings(ModelKind kind, const ModelParams<Scalar>& p) noexcept
{
    switch (kind) {
        case ModelKind::Coulomb:
        case ModelKind::Eckart: return p;
        case ModelKind::RosenMorseII: return {-p.A, -p.B};
        case ModelKind::RosenMorseI: return {p.A, -p.B};
    }
    return p;
}

/// Number of bound levels; empty optional when unbounded.
class LevelCount {
public:
    static LevelCount infinite() noexcept { return LevelCount{}; }
    static LevelCount finite(std::size_t n) noexcept { return LevelCount{n}; }

    bool is_infinite() const noexcept { return !count_; }
    std::size_t value() const { return count_.value(); }
    bool admits(long long N) const noexcept
    {
        return N >= 0 && (!count_ || static_cast<std::size_t>(N) < *count_);
    }

    friend bool operator==(const LevelCount&, const LevelCount&) = default;

private:
    LevelCount() = default;
    explicit LevelCount(std::size_t n) : count_(n) {}
    std::optional<std::size_t> count_;
};

/// Violated inequalities; empty when the couplings are acceptable.
///
/// For Eckart only A > 0 is required here. B > A^2 decides whether any level
/// exists and is reported through bound_state_count.
template <class Scalar>
std::vector<std::string> validate(ModelKind kind, const ModelParams<Scalar>& p)
{
    using std::abs;
    using std::isfinite;
    std::vector<std::string> out;
    if (!isfinite(p.A) || !isfinite(p.B)) {
        out.emplace_back("A, B finite");
        return out;
    }
    if (!(p.A > 0)) out.emplace_back("A > 0");
    switch (kind) {
        case ModelKind::Coulomb:
            if (!(p.B > 0)) out.emplace_back("B > 0");
            break;
        case ModelKind::Eckart: break;
        case ModelKind::RosenMorseII:
            if (!(abs(p.B) < p.A * p.A)) out.emplace_back("|B| < A^2");
            break;
        case ModelKind::RosenMorseI: break;
    }
    return out;
}

template <class Scalar>
void require_valid(ModelKind kind, const ModelParams<Scalar>& p)
{
    auto diagnostics = validate(kind, p);
    if (!diagnostics.empty()) {
        std::string what = std::string(display_name(kind)) + ": invalid couplings, violated:";
        for (const auto& d : diagnostics) what += " " + d + ";";
        throw ValidationError(what, std::move(diagnostics));
    }
}

/// Eckart: levels with B > (A+N)^2. Rosen-Morse II: levels with N < A and
/// |B| < (A-N)^2. Coulomb and Rosen-Morse I: unbounded.
template <class Scalar>
LevelCount bound_state_count(ModelKind kind, const ModelParams<Scalar>& p)
{
    using std::abs;
    require_valid(kind, p);
    std::size_t n = 0;
    switch (kind) {
        case ModelKind::Coulomb:
        case ModelKind::RosenMorseI: return LevelCount::infinite();
        case ModelKind::Eckart:
            while (p.B > detail::sq(p.A + Scalar(n))) ++n;
            return LevelCount::finite(n);
        case ModelKind::RosenMorseII:
            while (Scalar(n) < p.A && abs(p.B) < detail::sq(p.A - Scalar(n))) ++n;
            return LevelCount::finite(n);
    }
    return LevelCount::finite(0);
}

template <class Scalar>
void require_level(ModelKind kind, const ModelParams<Scalar>& p, long long N)
{
    const auto count = bound_state_count(kind, p);
    if (!count.admits(N)) {
        std::ostringstream msg;
        msg << display_name(kind) << " (A = " << p.A << ", B = " << p.B << "): level N = " << N
            << " does not exist";
        if (!count.is_infinite()) msg << " (" << count.value() << " bound states)";
        throw LevelError(msg.str());
    }
}

/// Closed-form E_N in the per-model conventional form.
template <class Scalar>
Scalar eigenvalue(ModelKind kind, const ModelParams<Scalar>& p, int N)
{
    require_level(kind, p, N);
    const Scalar A = p.A;
    const Scalar B = p.B;
    const Scalar n = Scalar(N);
    switch (kind) {
        case ModelKind::Coulomb: return -B * B / detail::sq(A + n);
        case ModelKind::Eckart: return -B * B / detail::sq(A + n) - A * (2 * n + 1) - n * n;
        case ModelKind::RosenMorseII: return -B * B / detail::sq(A - n) + A * (2 * n + 1) - n * n;
        case ModelKind::RosenMorseI: return -B * B / detail::sq(A + n) + A * (2 * n + 1) + n * n;
    }
    return Scalar(0);
}

/// Zero-point shift that puts the ground level at zero: E_0.
template <class Scalar>
Scalar susy_potential_shift(ModelKind kind, const ModelParams<Scalar>& p)
{
    return eigenvalue(kind, p, 0);
}

template <class Scalar>
Scalar susy_eigenvalue(ModelKind kind, const ModelParams<Scalar>& p, int N)
{
    const Scalar e_n = eigenvalue(kind, p, N);
    return e_n - susy_potential_shift(kind, p);
}

template <class Scalar>
Scalar susy_potential(ModelKind kind, const ModelParams<Scalar>& p, Scalar x)
{
    return potential(kind, p, x) - susy_potential_shift(kind, p);
}

/// Quantum numbers and polynomial parameters of one level.
template <class Scalar>
struct SpectralLevel {
    int N = 0;
    Scalar energy{};
    /// Jacobi parameters in z (Eckart, Rosen-Morse II) or in y = iz (Rosen-Morse I).
    std::optional<complex_type<Scalar>> jacobi_alpha;
    std::optional<complex_type<Scalar>> jacobi_beta;
    /// Coulomb only: Laguerre upper index is gamma - 1.
    std::optional<Scalar> laguerre_gamma;
};

template <class Scalar>
SpectralLevel<Scalar> spectral_level(ModelKind kind, const ModelParams<Scalar>& p, int N)
{
    using C = complex_type<Scalar>;
    SpectralLevel<Scalar> level;
    level.N = N;
    level.energy = eigenvalue(kind, p, N);
    const Scalar A = p.A;
    const Scalar B = p.B;
    const Scalar n = Scalar(N);
    switch (kind) {
        case ModelKind::Coulomb: level.laguerre_gamma = 2 * A; break;
        case ModelKind::Eckart:
            level.jacobi_alpha = C(-A - n + B / (A + n), 0);
            level.jacobi_beta = C(-A - n - B / (A + n), 0);
            break;
        case ModelKind::RosenMorseII:
            level.jacobi_alpha = C(A - n + B / (A - n), 0);
            level.jacobi_beta = C(A - n - B / (A - n), 0);
            break;
        case ModelKind::RosenMorseI:
            level.jacobi_alpha = C(-A - n, -B / (A + n));
            level.jacobi_beta = std::conj(*level.jacobi_alpha);
            break;
    }
    return level;
}

/// Hydrogen-like Coulomb couplings: A = l + 1, B = e^2 / 2.
template <class Scalar>
struct HydrogenMapping {
    int l = 0;
    Scalar e_squared{2};

    ModelParams<Scalar> params() const noexcept { return {Scalar(l + 1), e_squared / 2}; }
    Scalar gamma() const noexcept { return Scalar(2 * (l + 1)); }
    /// y = e^2 x / (N + l + 1), the variable in which the roots are Laguerre roots.
    Scalar scaled_variable(Scalar x, int N) const noexcept { return e_squared * x / Scalar(N + l + 1); }
    Scalar energy(int N) const noexcept
    {
        return -e_squared * e_squared / (4 * detail::sq(Scalar(N + l + 1)));
    }
};

} // namespace prepot
