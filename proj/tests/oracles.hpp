// Independent numeric oracles for the test suites.  Nothing here shares
// code with the library: the summation uses plain pairwise-averaged partial
// sums, the integrator is adaptive Simpson, and the Legendre values come
// from the standard library.  Slow and simple on purpose.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// sum_{n>=1} sin(n w)/(n + g) by repeated averaging of partial sums.  The
// partial sums oscillate around the limit with decaying envelope; each
// averaging pass gains a factor ~|cos(w/2)|, so the defaults reach residuals
// below ~1e-10 for w >= 0.2 (smaller angles need still more passes).
inline double fock_sum(double gamma, double omega, long burn_in = 20000, int passes = 3000) {
    std::vector<double> ps(static_cast<std::size_t>(passes) + 1);
    double s = 0.0;
    for (long n = 1; n <= burn_in; ++n) s += std::sin(n * omega) / (double(n) + gamma);
    for (int i = 0; i <= passes; ++i) {
        s += std::sin((burn_in + 1 + i) * omega) / (double(burn_in + 1 + i) + gamma);
        ps[static_cast<std::size_t>(i)] = s;
    }
    for (int level = passes; level >= 1; --level)
        for (int i = 0; i < level; ++i)
            ps[static_cast<std::size_t>(i)] =
                0.5 * (ps[static_cast<std::size_t>(i)] + ps[static_cast<std::size_t>(i) + 1]);
    return ps[0];
}

// B(g, w) = 1/sin^2(w/2) - (4 g / sin w) S(g, w) from the oracle sum.
inline double bracket(double gamma, double omega) {
    const double s = std::sin(0.5 * omega);
    return 1.0 / (s * s) - 4.0 * gamma / std::sin(omega) * fock_sum(gamma, omega);
}

// Adaptive Simpson with absolute tolerance; no panel-ordering cleverness.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 48) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

inline double legendre(int l, double x) { return std::legendre(unsigned(l), x); }

} // namespace oracle
