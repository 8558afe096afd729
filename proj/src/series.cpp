#include "ctmatrix/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "ctmatrix/special.hpp"

namespace ctm {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

void check_omega_domain(double omega) {
    if (!(omega > 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in (0, pi]");
}

// Production path.  Peel the three slowest orders of 1/(n+g) = 1/n - g/n^2 +
// g^2/n^3 - g^3/(n^3(n+g)) into closed forms; the remainder sum W falls off
// like 1/n^4 with the analytic tail bound sum_{m>n} 1/(m^3|m+g|) <= 2/(3n^3)
// valid once n > 2|g|.
SumResult fock_sum_decomposed(double g, double w, const SeriesOptions& opts) {
    const double head = 0.5 * (M_PI - w) - g * sin_over_n2(w) + g * g * sin_over_n3(w);
    const double g3 = g * g * g;
    const double floor_scale = 1e-3 * std::abs(std::sin(w));

    double W = 0.0;
    long n = 0;
    double tail = std::numeric_limits<double>::infinity();
    bool certified = false;
    while (n < opts.max_terms) {
        ++n;
        const double dn = double(n);
        W += std::sin(dn * w) / (dn * dn * dn * (dn + g));
        if (n >= 8 && dn > 2.0 * std::abs(g)) {
            tail = 2.0 / (3.0 * dn * dn * dn);
            const double cur = head - g3 * W;
            if (std::abs(g3) * tail <= opts.target_rel_tol * std::max(std::abs(cur), floor_scale)) {
                certified = true;
                break;
            }
        }
    }
    const double value = head - g3 * W;
    // Rounding model: the Clausen-type pieces are formed from intermediates of
    // magnitude ~w*(1+|ln w|), which dominates near w = pi where their values
    // cancel almost completely.
    const double round_err =
        8.0 * eps * (0.5 * (M_PI - w) + std::abs(g) * 2.5 * w + g * g * 4.0 * w + std::abs(g3 * W) + 1.0);
    SumResult r;
    r.value = value;
    r.abs_err = std::abs(g3) * tail + round_err;
    r.terms = n;
    r.converged = certified;
    return r;
}

// Raw partial sums with the Dirichlet-kernel remainder bound
// |S - S_N| <= 1/((N+1+g) sin(w/2)), valid once the coefficients 1/(n+g) are
// positive and decreasing, i.e. N+1+g > 0.
SumResult fock_sum_direct(double g, double w, const SeriesOptions& opts) {
    const double half_sin = std::sin(0.5 * w);
    const double floor_scale = 1e-3 * std::abs(std::sin(w));
    double S = 0.0;
    long n = 0;
    double bound = std::numeric_limits<double>::infinity();
    bool certified = false;
    while (n < opts.max_terms) {
        ++n;
        const double dn = double(n);
        S += std::sin(dn * w) / (dn + g);
        if (dn + 1.0 + g > 0.0) {
            bound = 1.0 / ((dn + 1.0 + g) * half_sin);
            if (bound <= opts.target_rel_tol * std::max(std::abs(S), floor_scale)) {
                certified = true;
                break;
            }
        }
    }
    SumResult r;
    r.value = S;
    r.abs_err = bound + std::sqrt(double(n)) * eps * (std::abs(S) + 1.0);
    r.terms = n;
    r.converged = certified;
    return r;
}

// Raw terms up to n0, then 63-fold pairwise averaging of a 64-wide window of
// partial sums.  Each averaging stage damps the oscillatory remainder by
// |cos(w/2)|, so the final estimate carries the model error
// envelope * |cos(w/2)|^63 (with a safety factor for envelope curvature).
SumResult fock_sum_averaged(double g, double w, const SeriesOptions& opts) {
    constexpr int window = 64;
    const long n0 = std::max<long>(1, std::min<long>(20000, opts.max_terms - window));
    std::array<double, window> ps{};
    double s = 0.0;
    for (long n = 1; n <= n0 + window; ++n) {
        const double dn = double(n);
        s += std::sin(dn * w) / (dn + g);
        if (n > n0)
            ps[size_t(n - n0 - 1)] = s;
    }
    for (int level = 1; level < window; ++level)
        for (int i = 0; i + level < window; ++i)
            ps[size_t(i)] = 0.5 * (ps[size_t(i)] + ps[size_t(i + 1)]);

    const double env = 1.0 / ((double(n0) + 1.0 + g) * std::sin(0.5 * w));
    const double damp = std::pow(std::abs(std::cos(0.5 * w)), window - 1);
    const double model_err = 4.0 * env * damp + 16.0 * eps * (std::abs(ps[0]) + 1.0);
    const double floor_scale = 1e-3 * std::abs(std::sin(w));
    SumResult r;
    r.value = ps[0];
    r.abs_err = model_err;
    r.terms = n0 + window;
    r.converged = model_err <= opts.target_rel_tol * std::max(std::abs(ps[0]), floor_scale);
    return r;
}

} // namespace

SumResult fock_sum(double gamma, double omega, const SeriesOptions& opts) {
    check_omega_domain(omega);
    if (is_negative_integer(gamma))
        fail(errc::bound_state_pole, "angle sum has a pole at negative integer gamma");
    if (!(opts.target_rel_tol > 0.0) || opts.max_terms < 128)
        fail(errc::out_of_range, "series options: need target_rel_tol > 0 and max_terms >= 128");
    if (omega == M_PI) {
        // Every term sin(n pi) vanishes; the sum is exactly zero.
        return SumResult{0.0, 0.0, 0, true};
    }
    SumResult r;
    switch (opts.acceleration) {
    case Acceleration::none:
        r = fock_sum_decomposed(gamma, omega, opts);
        break;
    case Acceleration::direct_partial_sums:
        r = fock_sum_direct(gamma, omega, opts);
        break;
    case Acceleration::averaged_tail:
        r = fock_sum_averaged(gamma, omega, opts);
        break;
    }
    if (!r.converged)
        fail(errc::convergence_failure, "angle sum could not certify the requested tolerance");
    return r;
}

double half_integer_sum(int sign, double omega) {
    if (sign != 1 && sign != -1)
        fail(errc::out_of_range, "sign must be +1 or -1");
    check_omega_domain(omega);
    const double h = 0.5 * omega;
    return 0.5 * M_PI * std::cos(h) + sign * std::sin(h) * std::log(std::abs(std::tan(0.5 * h)));
}

std::optional<RationalGamma> RationalGamma::from_real(double gamma, long max_den) {
    if (!std::isfinite(gamma) || std::abs(gamma) <= 1e-9)
        return std::nullopt;
    if (max_den < 1)
        return std::nullopt;
    for (long m = 1; m <= max_den; ++m) {
        const double scaled = gamma * double(m);
        const double p = std::round(scaled);
        if (p == 0.0)
            continue;
        if (std::abs(gamma - p / double(m)) <= 1e-9) {
            long num = std::lround(std::abs(p));
            long den = m;
            const long common = std::gcd(num, den);
            return RationalGamma{gamma > 0.0 ? 1 : -1, num / common, den / common};
        }
    }
    return std::nullopt;
}

SumResult rational_sum(const RationalGamma& rg, double omega, RationalLogVariant variant) {
    check_omega_domain(omega);
    if (rg.sign < 0 && rg.den == 1)
        fail(errc::bound_state_pole, "angle sum has a pole at negative integer gamma");
    if (rg.num < 1 || rg.den < 1)
        fail(errc::out_of_range, "rational coupling must have positive numerator and denominator");

    // Roots-of-unity filter: S(+-n/m, w) splits into m log/linear channels at
    // theta_l = (w + 2 pi l)/m plus finitely many low-k correction terms from
    // the poles of 1/(k -+ n/m) that sit below the channel threshold.
    const double n = double(rg.num);
    const double m = double(rg.den);
    const double sgn = double(rg.sign);
    double tot = 0.0;
    double mag = 0.0;
    for (long l = 0; l < rg.den; ++l) {
        const double th = (omega + 2.0 * M_PI * double(l)) / m;
        const double arg = variant == RationalLogVariant::half_angle ? 2.0 * std::abs(std::sin(0.5 * th))
                                                                     : 2.0 * std::abs(std::sin(th));
        const double piece =
            sgn * std::sin(n * th) * std::log(arg) - 0.5 * (th - M_PI) * std::cos(n * th);
        tot += piece;
        mag += std::abs(piece);
    }
    const long K = rg.sign > 0 ? (rg.num - 1) / rg.den : rg.num / rg.den;
    for (long k = 1; k <= K; ++k) {
        const double piece = -sgn * std::sin(double(k) * omega) / (double(k) - n / m);
        tot += piece;
        mag += std::abs(piece);
    }
    SumResult r;
    r.value = tot;
    r.abs_err = 4.0 * eps * (mag + 1.0);
    r.terms = rg.den + K;
    r.converged = true;
    return r;
}

EvalResult bracket_series(double gamma, double omega, const SeriesOptions& opts) {
    if (!(omega >= 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in [0, pi]");
    if (omega == 0.0)
        fail(errc::forward_singularity, "angular factor diverges at omega = 0");

    EvalResult out;
    out.rep = Representation::series;

    if (gamma == 0.0) {
        const double s = std::sin(0.5 * omega);
        out.value = 1.0 / (s * s);
        out.abs_err_est = 2.0 * eps * out.value;
        out.work = 0;
        return out;
    }
    if (is_negative_integer(gamma))
        fail(errc::bound_state_pole, "angular factor has a pole at negative integer gamma");
    if (near_negative_integer(gamma))
        out.flags |= flag_pole_near;

    if (omega == M_PI) {
        // 4 g S / sin w is 0/0 at the backward point; the alternating-sum
        // limit resolves it.
        const double A = alternating_shifted_sum(gamma);
        out.value = 1.0 - 2.0 * gamma + 4.0 * gamma * gamma * A;
        out.abs_err_est = 16.0 * eps * (1.0 + 2.0 * std::abs(gamma) + 4.0 * gamma * gamma * std::abs(A));
        out.flags |= flag_backward_limit;
        out.work = 0;
        return out;
    }

    const SumResult S = fock_sum(gamma, omega, opts);
    const double s = std::sin(0.5 * omega);
    const double sw = std::sin(omega);
    const double born_part = 1.0 / (s * s);
    const double sum_part = 4.0 * gamma / sw * S.value;
    out.value = born_part - sum_part;
    out.abs_err_est = 4.0 * std::abs(gamma) / sw * S.abs_err +
                  2.0 * eps * (born_part + std::abs(sum_part));
    out.work = S.terms;
    if (!std::isfinite(out.value))
        out.flags |= flag_nonfinite;
    return out;
}

EvalResult tmatrix_series(const EnergyState& st, const FockPoint& pt, const SeriesOptions& opts) {
    EvalResult out = bracket_series(st.gamma, pt.omega, opts);
    const double pre = prefactor(st, pt);
    out.value *= pre;
    out.abs_err_est = std::abs(pre) * out.abs_err_est + 2.0 * eps * std::abs(out.value);
    return out;
}

} // namespace ctm
