#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ctmatrix/closed_forms.hpp"
#include "oracles.hpp"

using namespace ctm;

namespace {
const ExplicitForm all_forms[] = {ExplicitForm::half,         ExplicitForm::three_halves,
                                  ExplicitForm::five_halves,  ExplicitForm::seven_halves,
                                  ExplicitForm::one_third,    ExplicitForm::one_quarter};

double coupling_of(ExplicitForm f) {
    switch (f) {
    case ExplicitForm::half: return 0.5;
    case ExplicitForm::three_halves: return 1.5;
    case ExplicitForm::five_halves: return 2.5;
    case ExplicitForm::seven_halves: return 3.5;
    case ExplicitForm::one_third: return 1.0 / 3.0;
    case ExplicitForm::one_quarter: return 0.25;
    }
    return 0.0;
}
} // namespace

TEST_CASE("corrected explicit brackets match the averaged oracle") {
    for (ExplicitForm f : all_forms)
        for (int sign : {1, -1})
            for (double om : {0.5, 1.3, 2.4}) {
                const double g = sign * coupling_of(f);
                const double got = bracket_explicit(f, sign, om, Fidelity::corrected);
                CHECK(got == doctest::Approx(oracle::bracket(g, om)).epsilon(1e-9));
            }
}

TEST_CASE("frozen reference values") {
    // independently computed at 35 significant digits and frozen
    CHECK(bracket_explicit(ExplicitForm::half, 1, 0.5 * M_PI, Fidelity::corrected) ==
          doctest::Approx(1.0250090112012722293).epsilon(1e-14));
    CHECK(bracket_explicit(ExplicitForm::five_halves, 1, 0.5 * M_PI, Fidelity::corrected) ==
          doctest::Approx(0.20828827732694381693).epsilon(1e-12));
    CHECK(half_integer_sum(1, 0.5 * M_PI) ==
          doctest::Approx(0.48749549439936388535).epsilon(1e-14));
    const auto third = RationalGamma::from_real(1.0 / 3.0);
    CHECK(rational_sum(*third, 0.5 * M_PI).value ==
          doctest::Approx(0.56032609183713632052).epsilon(1e-13));
    const auto mth = RationalGamma::from_real(-1.5);
    CHECK(rational_sum(*mth, M_PI / 3.0).value ==
          doctest::Approx(-0.41509291064406317962).epsilon(1e-13));
}

TEST_CASE("verbatim transcriptions: confirmed forms are identical, defective ones are not") {
    const struct {
        ExplicitForm f;
        int sign;
        bool defective;
    } table[] = {
        {ExplicitForm::half, 1, false},          {ExplicitForm::half, -1, true},
        {ExplicitForm::three_halves, 1, true},   {ExplicitForm::three_halves, -1, true},
        {ExplicitForm::five_halves, 1, false},   {ExplicitForm::five_halves, -1, false},
        {ExplicitForm::seven_halves, 1, false},  {ExplicitForm::seven_halves, -1, false},
        {ExplicitForm::one_third, 1, true},      {ExplicitForm::one_third, -1, true},
        {ExplicitForm::one_quarter, 1, false},   {ExplicitForm::one_quarter, -1, false},
    };
    for (const auto& row : table) {
        double worst = 0.0;
        for (double om : {0.4, 1.1, 2.0, 2.9}) {
            const double v = bracket_explicit(row.f, row.sign, om, Fidelity::verbatim);
            const double c = bracket_explicit(row.f, row.sign, om, Fidelity::corrected);
            worst = std::max(worst, std::abs(v - c) / std::max(std::abs(c), 1e-3));
        }
        if (row.defective)
            CHECK(worst > 1e-2); // the defect is macroscopic, not a rounding issue
        else
            CHECK(worst < 1e-12);
    }
}

TEST_CASE("form status sweep") {
    const auto& statuses = all_form_statuses();
    CHECK(statuses.size() == 12);
    int defective = 0;
    for (const auto& fs : statuses) {
        if (fs.discrepant) ++defective;
        CHECK(fs.max_rel_dev_corrected < 1e-8); // every corrected form is usable
        if (fs.discrepant) CHECK(fs.max_rel_dev_verbatim > 1e-2);
    }
    CHECK(defective == 5); // half-, three-halves both signs, one-third both signs
}

TEST_CASE("matrix element through explicit forms") {
    const EnergyState st = dimensionless_state(2.5);
    const FockPoint pt = make_fock_point(st, 1.1, 0.7, -0.2);
    const EvalResult r = tmatrix_explicit(ExplicitForm::five_halves, st, pt);
    const double expect = prefactor(st, pt) * oracle::bracket(2.5, pt.omega);
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-9));
    CHECK(r.rep == Representation::closed);
    CHECK((r.flags & flag_discrepant_form) == 0u);
    // a defective-verbatim form carries the audit flag even when corrected
    const EnergyState st3 = dimensionless_state(1.5);
    const FockPoint p3 = make_fock_point(st3, 1.1, 0.7, -0.2);
    const EvalResult r3 = tmatrix_explicit(ExplicitForm::three_halves, st3, p3, Fidelity::corrected);
    CHECK((r3.flags & flag_discrepant_form) != 0u);
    // the state's strength must match the form
    CHECK_THROWS_AS(tmatrix_explicit(ExplicitForm::half, st, pt), Error);
}

TEST_CASE("closed routing") {
    unsigned fl = 0;
    // explicit form available: no fallback flag
    (void)bracket_closed(0.5, 1.0, &fl);
    CHECK((fl & flag_routed_rational) == 0u);
    // small-denominator rational without a dedicated form: falls back
    fl = 0;
    const double b23 = bracket_closed(2.0 / 3.0, 1.0, &fl);
    CHECK((fl & flag_routed_rational) != 0u);
    CHECK(b23 == doctest::Approx(oracle::bracket(2.0 / 3.0, 1.0)).epsilon(1e-10));
    // unrecognizable strength has no closed expression
    CHECK_THROWS_AS(bracket_closed(0.1234567891, 1.0), Error);
    const EnergyState st = dimensionless_state(-2.0 / 3.0);
    const FockPoint pt = make_fock_point(st, 0.9, 1.4, 0.6);
    const EvalResult r = tmatrix_closed(st, pt);
    CHECK((r.flags & flag_routed_rational) != 0u);
    CHECK(r.value ==
          doctest::Approx(prefactor(st, pt) * oracle::bracket(st.gamma, pt.omega)).epsilon(1e-9));
}

TEST_CASE("backward point policy") {
    // corrected fidelity serves the analytic limit and flags it
    const EnergyState st = dimensionless_state(-0.5);
    const FockPoint pb = make_fock_point(st, 2.0, 0.5, -1.0); // exactly omega = pi
    REQUIRE(pb.omega == M_PI);
    const EvalResult r = tmatrix_explicit(ExplicitForm::half, st, pb, Fidelity::corrected);
    CHECK((r.flags & flag_backward_limit) != 0u);
    CHECK(r.value / prefactor(st, pb) == doctest::Approx(3.5707963267948966192).epsilon(1e-13));
    CHECK(bracket_explicit(ExplicitForm::one_quarter, 1, M_PI) ==
          doctest::Approx(0.63302701266008896243).epsilon(1e-13));
    // a defective verbatim expression has no trustworthy limit there
    CHECK_THROWS_AS(bracket_explicit(ExplicitForm::one_third, 1, M_PI, Fidelity::verbatim), Error);
}

TEST_CASE("auxiliary integrals: frozen values and bundle consistency") {
    CHECK(aux_cot_integral(0.3, 1.0) == doctest::Approx(0.5803231953062573647).epsilon(1e-11));
    CHECK(aux_log_integral(0.3, 1.0) == doctest::Approx(-0.20412741424735713312).epsilon(1e-11));
    CHECK(aux_weight(0.3) == doctest::Approx(0.29837471360298252387).epsilon(1e-11));
    CHECK(aux_cot_integral(1.3, 2.0) == doctest::Approx(3.3208607306950195465).epsilon(1e-11));
    CHECK(aux_log_integral(-0.3, 2.0) == doctest::Approx(0.040474463388039663856).epsilon(1e-10));
    CHECK(aux_weight(-0.3) == doctest::Approx(0.70162528639701747613).epsilon(1e-11));
    // omega = 0 endpoint of the log integral
    CHECK(aux_log_integral(0.5, 0.0) == doctest::Approx(-0.61370563888010938117).epsilon(1e-11));
    const SingularitySeparatedAux b = aux_integrals(0.3, 1.0);
    CHECK(b.x_gamma == aux_cot_integral(0.3, 1.0));
    CHECK(b.y_gamma == aux_log_integral(0.3, 1.0));
    CHECK(b.c_gamma == aux_weight(0.3));
}

TEST_CASE("separated representation") {
    CHECK(bracket_separated(0.3, 1.0) == doctest::Approx(3.1631651001458885732).epsilon(1e-11));
    CHECK(bracket_separated(-0.3, 2.0) == doctest::Approx(2.5945183233695431896).epsilon(1e-11));
    for (double g : {1.3, 2.7, -2.3, 3.9})
        for (double om : {0.6, 1.7, 2.8})
            CHECK(bracket_separated(g, om) ==
                  doctest::Approx(oracle::bracket(g, om)).epsilon(1e-8));
    const EnergyState st = dimensionless_state(0.3);
    const FockPoint pt = make_fock_point(st, 1.0, 1.0, std::cos(1.0));
    CHECK(tmatrix_separated(st, pt).value ==
          doctest::Approx(prefactor(st, pt) * 3.1631651001458885732).epsilon(1e-11));
}

TEST_CASE("separated representation domain") {
    CHECK_THROWS_AS(bracket_separated(2.0, 1.0), Error);  // integer strength
    CHECK_THROWS_AS(bracket_separated(4.5, 1.0), Error);  // beyond the supported band
    CHECK_THROWS_AS(bracket_separated(0.3, M_PI), Error); // indeterminate backward form
    try {
        bracket_separated(2.0, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == errc::degenerate_gamma);
    }
    try {
        bracket_separated(0.3, M_PI);
    } catch (const Error& e) {
        CHECK(e.code() == errc::backward_indeterminate);
    }
}
