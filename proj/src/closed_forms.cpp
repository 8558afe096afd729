#include "ctmatrix/closed_forms.hpp"

#include <cmath>
#include <limits>

#include "ctmatrix/special.hpp"

namespace ctm {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

double form_coupling(ExplicitForm f) {
    switch (f) {
    case ExplicitForm::half: return 0.5;
    case ExplicitForm::three_halves: return 1.5;
    case ExplicitForm::five_halves: return 2.5;
    case ExplicitForm::seven_halves: return 3.5;
    case ExplicitForm::one_third: return 1.0 / 3.0;
    case ExplicitForm::one_quarter: return 0.25;
    }
    fail(errc::internal_failure, "unknown explicit form");
}

// Whether the transcribed expression is literally the same as the repaired
// one.  Where it is, the verbatim route inherits the corrected route's
// validation, including the legitimacy of the backward-limit value.
bool verbatim_matches_corrected(ExplicitForm f, int sign) {
    switch (f) {
    case ExplicitForm::half: return sign > 0; // defect is confined to the negative coupling
    case ExplicitForm::three_halves: return false; // wrong half-angle in the log argument
    case ExplicitForm::one_third: return false;    // two defective log factors
    case ExplicitForm::five_halves:
    case ExplicitForm::seven_halves:
    case ExplicitForm::one_quarter: return true;
    }
    return false;
}

struct BracketPieces {
    double value = 0.0;
    double mag = 0.0;  // sum of |additive piece|, for rounding-error estimates
    long work = 0;     // additive pieces evaluated
};

BracketPieces accumulate(std::initializer_list<double> pieces) {
    BracketPieces r;
    for (double p : pieces) {
        r.value += p;
        r.mag += std::abs(p);
        ++r.work;
    }
    return r;
}

BracketPieces explicit_pieces(ExplicitForm f, int sign, double w, Fidelity fid) {
    const double s2 = std::sin(0.5 * w);
    const double born = 1.0 / (s2 * s2);
    const double sw = std::sin(w);
    const bool corrected = fid == Fidelity::corrected;
    switch (f) {
    case ExplicitForm::half: {
        const double log_t = std::log(std::abs(std::tan(0.25 * w)));
        if (corrected)
            return accumulate({born, -sign * M_PI / (2.0 * s2), -log_t / std::cos(0.5 * w)});
        return accumulate({born, -M_PI / (2.0 * s2), -sign * log_t / std::cos(0.5 * w)});
    }
    case ExplicitForm::three_halves: {
        const double t = corrected ? std::tan(0.25 * w) : std::tan(0.5 * w);
        return accumulate({born, -sign * 3.0 * M_PI * std::cos(1.5 * w) / sw,
                           -6.0 * std::sin(1.5 * w) / sw * std::log(std::abs(t)), -12.0});
    }
    case ExplicitForm::five_halves:
        return accumulate({born, -sign * 5.0 * M_PI * std::cos(2.5 * w) / sw,
                           -10.0 * std::sin(2.5 * w) / sw * std::log(std::abs(std::tan(0.25 * w))),
                           -40.0 * std::cos(w), -20.0 / 3.0});
    case ExplicitForm::seven_halves:
        return accumulate({born, -sign * 7.0 * M_PI * std::cos(3.5 * w) / sw,
                           -14.0 * std::sin(3.5 * w) / sw * std::log(std::abs(std::tan(0.25 * w))),
                           -112.0 * std::cos(w) * std::cos(w), -56.0 / 3.0 * std::cos(w), 112.0 / 5.0});
    case ExplicitForm::one_third: {
        const double s6 = std::sin(w / 6.0);
        const double t6 = std::tan(w / 6.0);
        const double sqrt3 = std::sqrt(3.0);
        const double pi_term =
            -sign * 2.0 * M_PI / 3.0 * (std::cos(w / 3.0) - std::sin(w / 3.0) / sqrt3) / sw;
        double log1, log2;
        if (corrected) {
            log1 = 2.0 * std::sin(w / 3.0) / (3.0 * sw) *
                   std::log(std::abs(std::sin(0.5 * w) / (4.0 * s6 * s6 * s6)));
            log2 = -2.0 * std::cos(w / 3.0) / (sqrt3 * sw) *
                   std::log(std::abs((t6 + sqrt3) / (t6 - sqrt3)));
        } else {
            log1 = 2.0 * std::sin(w / 3.0) / (3.0 * sw) *
                   std::log(std::abs((s6 - 3.0 * std::cos(w / 6.0)) / (4.0 * s6 * s6)));
            log2 = -2.0 * std::cos(w / 3.0) / (3.0 * sqrt3 * sw) *
                   std::log(std::abs((t6 + sqrt3) / (t6 - sqrt3)));
        }
        return accumulate({born, pi_term, log1, log2});
    }
    case ExplicitForm::one_quarter: {
        const double t8 = std::tan(0.125 * w);
        return accumulate({born,
                           -sign * 0.5 * M_PI * (std::cos(0.25 * w) - std::sin(0.25 * w)) / sw,
                           -std::sin(0.25 * w) / sw * std::log(std::abs(t8)),
                           -std::cos(0.25 * w) / sw * std::log(std::abs((1.0 + t8) / (1.0 - t8)))});
    }
    }
    fail(errc::internal_failure, "unknown explicit form");
}

// bracket(g, pi) = 1 - 2g + 4 g^2 A(g), the alternating-sum limit that
// resolves the 0/0 every closed expression develops at the backward point.
BracketPieces backward_limit_pieces(double gamma) {
    const double A = alternating_shifted_sum(gamma);
    return accumulate({1.0, -2.0 * gamma, 4.0 * gamma * gamma * A});
}

BracketPieces explicit_bracket_pieces(ExplicitForm f, int sign, double omega, Fidelity fid) {
    if (sign != 1 && sign != -1)
        fail(errc::out_of_range, "sign must be +1 or -1");
    if (!(omega >= 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in [0, pi]");
    if (omega == 0.0)
        fail(errc::forward_singularity, "angular factor diverges at omega = 0");
    if (omega == M_PI) {
        if (fid == Fidelity::verbatim && !verbatim_matches_corrected(f, sign))
            fail(errc::backward_indeterminate,
                 "defective transcription: its backward limit is not the analytic one");
        if (f == ExplicitForm::half) {
            BracketPieces r;
            r.value = 2.0 - sign * 0.5 * M_PI; // A(+-1/2) in closed form
            r.mag = 2.0 + 0.5 * M_PI;
            r.work = 2;
            return r;
        }
        return backward_limit_pieces(sign * form_coupling(f));
    }
    return explicit_pieces(f, sign, omega, fid);
}

} // namespace

const char* explicit_form_name(ExplicitForm f) {
    switch (f) {
    case ExplicitForm::half: return "half";
    case ExplicitForm::three_halves: return "three_halves";
    case ExplicitForm::five_halves: return "five_halves";
    case ExplicitForm::seven_halves: return "seven_halves";
    case ExplicitForm::one_third: return "one_third";
    case ExplicitForm::one_quarter: return "one_quarter";
    }
    return "unknown";
}

double bracket_explicit(ExplicitForm f, int sign, double omega, Fidelity fidelity) {
    return explicit_bracket_pieces(f, sign, omega, fidelity).value;
}

const std::vector<FormStatus>& all_form_statuses() {
    static const std::vector<FormStatus> cache = [] {
        SeriesOptions ref_opts;
        ref_opts.target_rel_tol = 1e-12;
        std::vector<FormStatus> out;
        const ExplicitForm forms[] = {ExplicitForm::half, ExplicitForm::three_halves,
                                      ExplicitForm::five_halves, ExplicitForm::seven_halves,
                                      ExplicitForm::one_third, ExplicitForm::one_quarter};
        for (ExplicitForm f : forms) {
            for (int sign : {1, -1}) {
                FormStatus st;
                st.form = f;
                st.sign = sign;
                const double gamma = sign * form_coupling(f);
                for (int i = 0; i < 50; ++i) {
                    const double w = 0.05 + double(i) * (M_PI - 0.1) / 49.0;
                    const double ref = bracket_series(gamma, w, ref_opts).value;
                    const double scale = std::max(std::abs(ref), 1e-3);
                    const double dv =
                        std::abs(bracket_explicit(f, sign, w, Fidelity::verbatim) - ref) / scale;
                    const double dc =
                        std::abs(bracket_explicit(f, sign, w, Fidelity::corrected) - ref) / scale;
                    if (dv > st.max_rel_dev_verbatim) {
                        st.max_rel_dev_verbatim = dv;
                        st.argmax_omega = w;
                    }
                    st.max_rel_dev_corrected = std::max(st.max_rel_dev_corrected, dc);
                }
                st.discrepant = st.max_rel_dev_verbatim > 1e-8;
                out.push_back(st);
            }
        }
        return out;
    }();
    return cache;
}

namespace {

bool verbatim_failed_validation(ExplicitForm f, int sign) {
    for (const FormStatus& st : all_form_statuses())
        if (st.form == f && st.sign == sign)
            return st.discrepant;
    return false;
}

int coupling_sign(double gamma, double coupling, const char* what) {
    if (std::abs(gamma - coupling) <= 1e-9)
        return 1;
    if (std::abs(gamma + coupling) <= 1e-9)
        return -1;
    fail(errc::out_of_range, what);
}

EvalResult assemble(const EnergyState& st, const FockPoint& pt, const BracketPieces& b,
                    Representation rep, unsigned flags) {
    const double pre = prefactor(st, pt);
    EvalResult out;
    out.rep = rep;
    out.flags = flags;
    out.value = pre * b.value;
    out.abs_err_est = std::abs(pre) * 8.0 * eps * (b.mag + 1.0) + 2.0 * eps * std::abs(out.value);
    out.work = b.work;
    if (!std::isfinite(out.value))
        out.flags |= flag_nonfinite;
    return out;
}

} // namespace

EvalResult tmatrix_half(const EnergyState& st, const FockPoint& pt) {
    const int sign = coupling_sign(st.gamma, 0.5, "tmatrix_half requires gamma = +-1/2");
    const BracketPieces b = explicit_bracket_pieces(ExplicitForm::half, sign, pt.omega, Fidelity::corrected);
    unsigned flags = pt.omega == M_PI ? flag_backward_limit : 0u;
    return assemble(st, pt, b, Representation::closed, flags);
}

EvalResult tmatrix_explicit(ExplicitForm f, const EnergyState& st, const FockPoint& pt,
                            Fidelity fidelity) {
    const int sign = coupling_sign(st.gamma, form_coupling(f),
                                   "state gamma does not match this explicit form's coupling");
    const BracketPieces b = explicit_bracket_pieces(f, sign, pt.omega, fidelity);
    unsigned flags = 0;
    if (pt.omega == M_PI)
        flags |= flag_backward_limit;
    if (verbatim_failed_validation(f, sign))
        flags |= flag_discrepant_form;
    return assemble(st, pt, b, Representation::closed, flags);
}

namespace {

// Shared by tmatrix_rational and the closed-route fallback.
BracketPieces rational_bracket_pieces(const RationalGamma& rg, double omega, unsigned* flags) {
    const double gamma = rg.value();
    if (omega == M_PI) {
        *flags |= flag_backward_limit;
        return backward_limit_pieces(gamma);
    }
    const SumResult S = rational_sum(rg, omega);
    const double s2 = std::sin(0.5 * omega);
    const double born = 1.0 / (s2 * s2);
    const double sum_part = 4.0 * gamma / std::sin(omega) * S.value;
    BracketPieces b;
    b.value = born - sum_part;
    // fold the summand's own rounding budget (abs_err ~ eps * magnitudes)
    // back into the magnitude that assemble() scales by eps
    b.mag = born + std::abs(sum_part) +
            4.0 * std::abs(gamma) / std::sin(omega) * (S.abs_err / (8.0 * eps));
    b.work = S.terms;
    return b;
}

// Below the rational-recognition floor the closed routes serve the free
// limit 1/sin^2(w/2), with the dropped coupling term folded into the error
// bound: |4 g S / sin w| using |S| <= (pi-w)/2 + 1.1|g| away from the
// backward point and the finite ratio S/(pi-w) -> 1/2 near it.  The bound
// is at most ~4|g|, far below any tolerance this route is asked for, and it
// keeps gamma -> 0 sweeps usable through every representation column.
constexpr double free_coupling_floor = 1e-6;

BracketPieces free_limit_pieces(double gamma, double omega) {
    const double s = std::sin(0.5 * omega);
    const double ag = std::abs(gamma);
    const double delta = M_PI - omega;
    double dropped;
    if (delta < 0.3) {
        const double ratio = delta == 0.0 ? 1.0 : delta / std::sin(delta);
        dropped = 4.0 * ag * 0.6 * ratio;
    } else {
        dropped = 4.0 * ag * (0.5 * delta + 1.1 * ag) / std::sin(omega);
    }
    BracketPieces b;
    b.value = 1.0 / (s * s);
    b.mag = b.value + dropped / (8.0 * eps);
    b.work = 1;
    return b;
}

struct ClosedRouting {
    BracketPieces pieces;
    unsigned flags = 0;
};

ClosedRouting closed_bracket_routed(double gamma, double omega) {
    if (!(omega >= 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in [0, pi]");
    if (omega == 0.0)
        fail(errc::forward_singularity, "angular factor diverges at omega = 0");

    ClosedRouting r;
    if (gamma == 0.0) {
        const double s = std::sin(0.5 * omega);
        r.pieces.value = 1.0 / (s * s);
        r.pieces.mag = r.pieces.value;
        r.pieces.work = 1;
        return r;
    }
    if (std::abs(gamma) <= free_coupling_floor) {
        r.pieces = free_limit_pieces(gamma, omega);
        return r;
    }
    if (is_negative_integer(gamma))
        fail(errc::bound_state_pole, "angular factor has a pole at negative integer gamma");

    const auto rg = RationalGamma::from_real(gamma);
    if (!rg)
        fail(errc::out_of_range,
             "no closed expression: gamma is not a small-denominator rational");

    ExplicitForm form{};
    bool have_form = true;
    if (rg->num == 1 && rg->den == 2) form = ExplicitForm::half;
    else if (rg->num == 3 && rg->den == 2) form = ExplicitForm::three_halves;
    else if (rg->num == 5 && rg->den == 2) form = ExplicitForm::five_halves;
    else if (rg->num == 7 && rg->den == 2) form = ExplicitForm::seven_halves;
    else if (rg->num == 1 && rg->den == 3) form = ExplicitForm::one_third;
    else if (rg->num == 1 && rg->den == 4) form = ExplicitForm::one_quarter;
    else have_form = false;

    if (have_form) {
        r.pieces = explicit_bracket_pieces(form, rg->sign, omega, Fidelity::corrected);
        if (omega == M_PI)
            r.flags |= flag_backward_limit;
        if (verbatim_failed_validation(form, rg->sign))
            r.flags |= flag_discrepant_form;
        return r;
    }
    r.flags |= flag_routed_rational;
    r.pieces = rational_bracket_pieces(*rg, omega, &r.flags);
    return r;
}

} // namespace

EvalResult tmatrix_rational(const EnergyState& st, const FockPoint& pt) {
    if (!(pt.omega >= 0.0 && pt.omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in [0, pi]");
    if (pt.omega == 0.0)
        fail(errc::forward_singularity, "angular factor diverges at omega = 0");
    if (st.gamma == 0.0) {
        const double s = std::sin(0.5 * pt.omega);
        BracketPieces b;
        b.value = 1.0 / (s * s);
        b.mag = b.value;
        b.work = 1;
        return assemble(st, pt, b, Representation::rational, 0);
    }
    if (std::abs(st.gamma) <= free_coupling_floor) {
        const BracketPieces b = free_limit_pieces(st.gamma, pt.omega);
        return assemble(st, pt, b, Representation::rational, 0);
    }
    if (is_negative_integer(st.gamma))
        fail(errc::bound_state_pole, "angular factor has a pole at negative integer gamma");
    const auto rg = RationalGamma::from_real(st.gamma);
    if (!rg)
        fail(errc::out_of_range,
             "rational route requires gamma recognizable as a small-denominator rational");
    unsigned flags = 0;
    const BracketPieces b = rational_bracket_pieces(*rg, pt.omega, &flags);
    return assemble(st, pt, b, Representation::rational, flags);
}

EvalResult tmatrix_closed(const EnergyState& st, const FockPoint& pt) {
    const ClosedRouting r = closed_bracket_routed(st.gamma, pt.omega);
    return assemble(st, pt, r.pieces, Representation::closed, r.flags);
}

double bracket_closed(double gamma, double omega, unsigned* flags_out) {
    const ClosedRouting r = closed_bracket_routed(gamma, omega);
    if (flags_out)
        *flags_out = r.flags;
    return r.pieces.value;
}

// ---- separated representation -------------------------------------------

namespace {

void check_aux_domain(double gamma, double omega) {
    if (!(std::abs(gamma) <= 4.0))
        fail(errc::out_of_range, "auxiliary integrals are supported for |gamma| <= 4");
    if (!(omega >= 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in [0, pi]");
}

QuadResult cot_integral_q(double gamma, double omega, const QuadOptions& opts) {
    if (omega == 0.0)
        return QuadResult{0.0, 0.0, 0, true};
    // sin(g phi) cot(phi/2) -> 2g as phi -> 0: the quotient of two vanishing
    // factors is well conditioned, and no quadrature node touches phi = 0.
    auto f = [gamma](double phi) {
        return std::sin(gamma * phi) * std::cos(0.5 * phi) / std::sin(0.5 * phi);
    };
    return integrate(f, 0.0, omega, opts);
}

QuadResult log_integral_q(double gamma, double omega, const QuadOptions& opts) {
    if (omega == M_PI)
        return QuadResult{0.0, 0.0, 0, true};
    auto f = [gamma](double phi) {
        return std::sin(gamma * phi) * std::log(std::abs(std::sin(0.5 * phi)));
    };
    if (omega == 0.0) {
        // ln|sin(phi/2)| is integrably singular at phi = 0: peel a short
        // leading interval through the log-absorbing substitution.
        const QuadResult head = integrate_log_endpoint(f, 0.0, 0.2, opts);
        const QuadResult rest = integrate(f, 0.2, M_PI, opts);
        QuadResult r;
        r.value = head.value + rest.value;
        r.abs_err = head.abs_err + rest.abs_err;
        r.evals = head.evals + rest.evals;
        r.converged = head.converged && rest.converged;
        return r;
    }
    return integrate(f, omega, M_PI, opts);
}

} // namespace

double aux_cot_integral(double gamma, double omega, const QuadOptions& opts) {
    check_aux_domain(gamma, omega);
    const QuadResult r = cot_integral_q(gamma, omega, opts);
    if (!r.converged)
        fail(errc::quadrature_failure, "cotangent-weight integral did not converge");
    return r.value;
}

double aux_log_integral(double gamma, double omega, const QuadOptions& opts) {
    check_aux_domain(gamma, omega);
    const QuadResult r = log_integral_q(gamma, omega, opts);
    if (!r.converged)
        fail(errc::quadrature_failure, "log-weight integral did not converge");
    return r.value;
}

double aux_weight(double gamma, const QuadOptions& opts) {
    return 0.5 * (1.0 - aux_cot_integral(gamma, M_PI, opts) / M_PI);
}

SingularitySeparatedAux aux_integrals(double gamma, double omega, const QuadOptions& opts) {
    SingularitySeparatedAux out;
    out.x_gamma = aux_cot_integral(gamma, omega, opts);
    out.y_gamma = aux_log_integral(gamma, omega, opts);
    out.c_gamma = aux_weight(gamma, opts);
    return out;
}

namespace {

struct SeparatedBracket {
    double value = 0.0;
    double abs_err = 0.0;
    long work = 0;
    unsigned flags = 0;
};

SeparatedBracket separated_bracket_impl(double gamma, double omega, const QuadOptions& opts) {
    if (!(omega >= 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in [0, pi]");
    if (omega == 0.0)
        fail(errc::forward_singularity, "angular factor diverges at omega = 0");

    SeparatedBracket out;
    if (gamma == 0.0) {
        const double s = std::sin(0.5 * omega);
        out.value = 1.0 / (s * s);
        out.abs_err = 2.0 * eps * out.value;
        return out;
    }
    if (is_negative_integer(gamma))
        fail(errc::bound_state_pole, "angular factor has a pole at negative integer gamma");
    if (!(std::abs(gamma) <= 4.0))
        fail(errc::out_of_range, "separated route is supported for |gamma| <= 4");
    const double nearest = std::rint(gamma);
    if (nearest != 0.0 && std::abs(gamma - nearest) <= 1e-9)
        fail(errc::degenerate_gamma,
             "cot(pi gamma) is singular at integer gamma; the finite limit is not taken here");
    if (omega == M_PI)
        fail(errc::backward_indeterminate,
             "separated assembly is 0/0 at omega = pi; use the angle-sum or kernel route");
    if (near_negative_integer(gamma))
        out.flags |= flag_pole_near;

    const QuadResult xq = cot_integral_q(gamma, omega, opts);
    const QuadResult yq = log_integral_q(gamma, omega, opts);
    const QuadResult xpi = cot_integral_q(gamma, M_PI, opts);
    if (!xq.converged || !yq.converged || !xpi.converged)
        fail(errc::quadrature_failure, "auxiliary integral did not converge");
    const double c = 0.5 * (1.0 - xpi.value / M_PI);
    const double c_err = 0.5 * xpi.abs_err / M_PI;

    const double gw = gamma * omega;
    const double cot_pg = std::cos(gamma * M_PI) / std::sin(gamma * M_PI);
    const double log_s = std::log(std::abs(std::sin(0.5 * omega)));
    const double sum_value = 0.5 * M_PI * std::cos(gw) + 0.5 * std::sin(2.0 * gw) * log_s -
                             M_PI * c * cot_pg * std::sin(gw) - 0.5 * std::cos(gw) * xq.value -
                             gamma * std::sin(gw) * yq.value;
    const double sum_err = M_PI * std::abs(cot_pg * std::sin(gw)) * c_err +
                           0.5 * std::abs(std::cos(gw)) * xq.abs_err +
                           std::abs(gamma * std::sin(gw)) * yq.abs_err +
                           8.0 * eps * (M_PI + std::abs(log_s) + M_PI * std::abs(c * cot_pg) +
                                        0.5 * std::abs(xq.value) + std::abs(gamma * yq.value));

    const double s2 = std::sin(0.5 * omega);
    const double sw = std::sin(omega);
    const double born = 1.0 / (s2 * s2);
    const double factor = 4.0 * gamma / sw;
    out.value = born - factor * sum_value;
    out.abs_err = std::abs(factor) * sum_err + 2.0 * eps * (born + std::abs(factor * sum_value));
    out.work = xq.evals + yq.evals + xpi.evals;
    if (!std::isfinite(out.value))
        out.flags |= flag_nonfinite;
    return out;
}

} // namespace

double bracket_separated(double gamma, double omega, const QuadOptions& opts) {
    return separated_bracket_impl(gamma, omega, opts).value;
}

EvalResult tmatrix_separated(const EnergyState& st, const FockPoint& pt, const QuadOptions& opts) {
    const SeparatedBracket b = separated_bracket_impl(st.gamma, pt.omega, opts);
    const double pre = prefactor(st, pt);
    EvalResult out;
    out.rep = Representation::separated;
    out.flags = b.flags;
    out.value = pre * b.value;
    out.abs_err_est = std::abs(pre) * b.abs_err + 2.0 * eps * std::abs(out.value);
    out.work = b.work;
    if (!std::isfinite(out.value))
        out.flags |= flag_nonfinite;
    return out;
}

} // namespace ctm
