#include "ctmatrix/special.hpp"

#include <array>
#include <cmath>

#include "ctmatrix/errors.hpp"

namespace ctm {

namespace {

// zeta(s) by Euler-Maclaurin: 64 direct terms, integral + half-term
// correction, then Bernoulli corrections through B_6.  For s >= 2 this is
// accurate to a few ulp, which the table consumers below rely on.
double zeta_em(double s) {
    const int N = 64;
    double tot = 0.0;
    for (int n = 1; n <= N; ++n)
        tot += std::pow(double(n), -s);
    tot += std::pow(double(N), 1.0 - s) / (s - 1.0) - 0.5 * std::pow(double(N), -s);
    tot += s * std::pow(double(N), -s - 1.0) / 12.0;
    tot -= s * (s + 1.0) * (s + 2.0) * std::pow(double(N), -s - 3.0) / 720.0;
    tot += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * std::pow(double(N), -s - 5.0) / 30240.0;
    return tot;
}

// zeta(2m) for m = 1..32, enough for the Clausen power series at theta up
// to pi (ratio (theta/2pi)^2 <= 1/4, so 32 terms reach ~1e-21).
const std::array<double, 32>& zeta_even_table() {
    static const std::array<double, 32> table = [] {
        std::array<double, 32> t{};
        for (int m = 1; m <= 32; ++m)
            t[m - 1] = zeta_em(2.0 * m);
        return t;
    }();
    return table;
}

} // namespace

double sin_over_n(double theta) {
    if (theta == 0.0)
        return 0.0; // every term vanishes; the (pi - t)/2 form is the t > 0 branch
    return 0.5 * (M_PI - theta);
}

double sin_over_n2(double theta) {
    // Cl2(t) = t (1 - ln t + sum_m zeta(2m)/(m(2m+1)) (t/2pi)^(2m)),
    // obtained by integrating the -ln(2 sin(u/2)) series term by term.
    if (theta == 0.0)
        return 0.0;
    const auto& zt = zeta_even_table();
    const double r2 = theta / (2.0 * M_PI) * (theta / (2.0 * M_PI));
    double acc = 0.0;
    double p = r2;
    for (int m = 1; m <= 32; ++m) {
        const double term = zt[m - 1] / (m * (2.0 * m + 1.0)) * p;
        acc += term;
        if (std::abs(term) < 1e-18 * std::max(std::abs(acc), 1.0))
            break;
        p *= r2;
    }
    return theta * (1.0 - std::log(theta) + acc);
}

double sin_over_n3(double theta) {
    return theta * (M_PI * M_PI / 6.0 - M_PI / 4.0 * theta + theta * theta / 12.0);
}

double alternating_shifted_sum(double gamma) {
    if (is_negative_integer(gamma))
        fail(errc::bound_state_pole, "alternating sum has a pole at negative integer gamma");
    // Peel three orders: sum (-1)^(n-1)/(n+g)
    //   = ln 2 - g pi^2/12 + g^2 (3/4) zeta(3) - g^3 sum (-1)^(n-1)/(n^3 (n+g)).
    // The remainder is alternating with n^-4 terms.
    const double g = gamma;
    double tot = M_LN2 - g * M_PI * M_PI / 12.0 + g * g * 0.75 * zeta_em(3.0);
    double rem = 0.0;
    double sign = 1.0;
    for (long n = 1; n <= 1000000; ++n) {
        const double term = sign / (double(n) * double(n) * double(n) * (double(n) + g));
        rem += term;
        sign = -sign;
        if (n > 2.0 * std::abs(g) + 4.0 && std::abs(term) < 1e-18 * std::max(std::abs(tot), 1.0))
            break;
    }
    return tot - g * g * g * rem;
}

double legendre_p(int l, double x) {
    if (l < 0 || l > 64)
        fail(errc::out_of_range, "Legendre degree outside [0, 64]");
    if (!(x >= -1.0 && x <= 1.0))
        fail(errc::out_of_range, "Legendre argument outside [-1, 1]");
    if (l == 0)
        return 1.0;
    double pm1 = 1.0, p = x;
    for (int j = 2; j <= l; ++j) {
        const double pj = ((2.0 * j - 1.0) * x * p - (j - 1.0) * pm1) / j;
        pm1 = p;
        p = pj;
    }
    return p;
}

bool is_negative_integer(double gamma) {
    return gamma <= -0.5 && std::rint(gamma) == gamma;
}

bool near_negative_integer(double gamma) {
    const double m = std::rint(gamma);
    return m <= -1.0 && std::abs(gamma - m) < 1e-6;
}

} // namespace ctm
