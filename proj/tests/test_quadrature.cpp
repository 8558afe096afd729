#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ctmatrix/quadrature.hpp"
#include "oracles.hpp"

using namespace ctm;

TEST_CASE("elementary integrals") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return x * x * x; }, -1.0, 2.0).value ==
          doctest::Approx(3.75).epsilon(1e-13));
    // strongly peaked integrand: the global refinement must find the spike
    const double w = 1e-4;
    const QuadResult peak = integrate(
        [&](double x) { return w / (x * x + w * w); }, -1.0, 1.0);
    CHECK(peak.value == doctest::Approx(2.0 * std::atan(1.0 / w)).epsilon(1e-11));
    CHECK(peak.converged);
    CHECK(std::abs(peak.value - 2.0 * std::atan(1.0 / w)) <= 10.0 * peak.abs_err + 1e-14);
}

TEST_CASE("error estimate is a bound in practice") {
    for (double p : {0.5, 2.0, 7.0}) {
        const QuadResult r =
            integrate([&](double x) { return std::pow(x, p); }, 0.0, 1.0);
        const double truth = 1.0 / (p + 1.0);
        CHECK(std::abs(r.value - truth) <= 10.0 * r.abs_err + 1e-15);
    }
}

TEST_CASE("log endpoint transform") {
    // int_0^1 ln x dx = -1, singular at the left end
    const QuadResult r = integrate_log_endpoint([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-12));
    // int_0^pi ln(2 sin(t/2)) dt = 0 (log-sine integral over the full half period)
    const QuadResult ls = integrate_log_endpoint(
        [](double t) { return std::log(2.0 * std::sin(0.5 * t)); }, 0.0, M_PI);
    CHECK(std::abs(ls.value) < 1e-11);
}

TEST_CASE("kernel integral spot values") {
    // gamma = 0, omega = pi/2: int_0^1 drho/(rho^2+1) = pi/4 exactly
    CHECK(schwinger_integral(0.0, 0.5 * M_PI).value ==
          doctest::Approx(0.25 * M_PI).epsilon(1e-12));
    // independent adaptive-Simpson oracle at a plain interior point
    const double g = 0.7, om = 2.5;
    const double oracle = oracle::integrate(
        [&](double r) { return std::pow(r, g) / (r * r - 2.0 * r * std::cos(om) + 1.0); },
        0.0, 1.0, 1e-13);
    CHECK(schwinger_integral(g, om).value == doctest::Approx(oracle).epsilon(1e-11));
    // attractive fractional strength: the weight rho^(-1/2) is integrable but
    // unbounded; substitute rho = u^2 by hand so the oracle integrand is smooth
    const double oma = 1.0;
    const double oracle_a = oracle::integrate(
        [&](double u) {
            const double r = u * u;
            return 2.0 / (r * r - 2.0 * r * std::cos(oma) + 1.0);
        },
        0.0, 1.0, 1e-13);
    CHECK(schwinger_integral(-0.5, oma).value == doctest::Approx(oracle_a).epsilon(1e-9));
}

TEST_CASE("kernel bridge to the angle sum") {
    for (double g : {0.5, -0.3, 2.0})
        for (double om : {0.4, 1.5, 2.9}) {
            const double S = oracle::fock_sum(g, om);
            CHECK(schwinger_integral(g, om).value * std::sin(om) ==
                  doctest::Approx(S).epsilon(1e-10));
        }
}

TEST_CASE("near-forward peak stays affordable") {
    const QuadResult r = schwinger_integral(0.5, 1e-3);
    CHECK(r.converged);
    // I ~ pi/(2 w) - ... diverges like 1/w; sanity-check the scale
    CHECK(r.value > 100.0);
    CHECK(r.evals < 200000);
}

TEST_CASE("kernel route matrix element") {
    const EnergyState st = dimensionless_state(0.5);
    const FockPoint pt = make_fock_point(st, 1.2, 0.8, 0.3);
    const double pre = prefactor(st, pt);
    const double s = std::sin(0.5 * pt.omega);
    const double expect =
        pre * (1.0 / (s * s) - 4.0 * st.gamma / std::sin(pt.omega) *
                                   oracle::fock_sum(st.gamma, pt.omega));
    CHECK(tmatrix_schwinger(st, pt).value == doctest::Approx(expect).epsilon(1e-10));
    // regular at the backward point, no flags
    const FockPoint pb = make_fock_point(st, 2.0, 0.5, -1.0);
    const EvalResult rb = tmatrix_schwinger(st, pb);
    CHECK(rb.flags == 0u);
    CHECK(std::isfinite(rb.value));
}

TEST_CASE("kernel route domain") {
    CHECK_THROWS_AS(schwinger_integral(-1.0, 1.0), Error);
    CHECK_THROWS_AS(schwinger_integral(-1.7, 1.0), Error);
    const EnergyState st = dimensionless_state(-1.5);
    CHECK_THROWS_AS(tmatrix_schwinger(st, make_fock_point(st, 1.0, 0.8, 0.2)), Error);
    try {
        schwinger_integral(-1.0, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_integrable);
    }
}

TEST_CASE("options are validated") {
    QuadOptions qo;
    qo.target_rel_tol = 1e-14; // below the supported floor
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, qo), Error);
    QuadOptions qd;
    qd.max_depth = 0;
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, qd), Error);
}

TEST_CASE("determinism") {
    const QuadResult a = schwinger_integral(0.3, 2.2);
    const QuadResult b = schwinger_integral(0.3, 2.2);
    CHECK(a.value == b.value);
    CHECK(a.abs_err == b.abs_err);
    CHECK(a.evals == b.evals);
}
