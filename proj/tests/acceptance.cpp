// Acceptance suite: ten end-to-end properties of the library, one printed
// pass/fail line each.  Exits with the number of failed criteria.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "ctmatrix/dispatch.hpp"
#include "ctmatrix/special.hpp"
#include "ctmatrix/validation.hpp"

using namespace ctm;

namespace {

int failures = 0;

void report(int idx, bool pass, const char* title, double metric, const char* metric_name) {
    std::printf("C%02d %s  %s (%s = %.3g)\n", idx, pass ? "PASS" : "FAIL", title, metric_name,
                metric);
    if (!pass) ++failures;
}

double rel_dev(double got, double want, double floor_scale = 0.0) {
    const double scale = std::max(std::abs(want), floor_scale);
    if (scale == 0.0) return std::abs(got - want);
    return std::abs(got - want) / scale;
}

struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    double next() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return double(s >> 11) * 0x1.0p-53;
    }
};

// the standard 50-point interior angle grid used by the validation sweeps
double std_omega(int i) { return 0.05 + double(i) * (M_PI - 0.1) / 49.0; }

FockPoint point_at_omega(const EnergyState& st, double omega) {
    return make_fock_point(st, 1.0, 1.0, std::cos(omega));
}

std::string run_cli_capture(const std::string& args, int* exit_code) {
    static int counter = 0;
    const std::string capture = "/tmp/ctm_acc_" + std::to_string(getpid()) + "_" +
                                std::to_string(counter++) + ".out";
    const std::string cmd =
        std::string(CTM_CLI_PATH) + " " + args + " > " + capture + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    *exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(capture, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::remove(capture.c_str());
    return ss.str();
}

} // namespace

int main() {
    SeriesOptions tight;
    tight.target_rel_tol = 1e-12;

    // 1. The half-strength closed sum equals the angle series on a 100-point
    //    interior grid, and hits the frozen external reference.
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double om = 0.05 + double(i) * (M_PI - 0.1) / 99.0;
            for (int sign : {1, -1})
                worst = std::max(worst, rel_dev(half_integer_sum(sign, om),
                                                fock_sum(sign * 0.5, om, tight).value));
        }
        const double anchor =
            rel_dev(fock_sum(0.5, 0.5 * M_PI).value, 0.48749549439936388535);
        report(1, worst <= 1e-10 && anchor <= 1e-10,
               "half-strength closed sum equals the angle series", worst, "max rel dev");
    }

    // 2. The kernel integral times sin(omega) reproduces the angle series for
    //    1000 pseudo-random strengths in (-0.9, 3); frozen kernel anchors hold.
    {
        double worst = 0.0;
        Lcg rng(0x2545f4914f6cdd1dULL);
        for (int i = 0; i < 1000; ++i) {
            const double g = -0.9 + 3.9 * rng.next();
            const double om = 0.1 + (M_PI - 0.2) * rng.next();
            worst = std::max(worst, rel_dev(schwinger_integral(g, om).value * std::sin(om),
                                            fock_sum(g, om).value, 1e-3));
        }
        const double a1 = rel_dev(schwinger_integral(0.7, 2.5).value, 0.26215549057375450266);
        const double a2 = rel_dev(schwinger_integral(0.0, 0.5 * M_PI).value, 0.25 * M_PI);
        const double a3 = rel_dev(schwinger_integral(-0.5, 1.0).value, 2.4159978434536836961);
        report(2, worst <= 1e-8 && a1 <= 1e-10 && a2 <= 1e-12 && a3 <= 1e-9,
               "kernel integral bridges to the angle series", worst, "max rel dev");
    }

    // 3. Dedicated half-strength route, series route, and kernel route agree
    //    at gamma = +-1/2 on the standard grid (kernel only at +1/2), and the
    //    frozen physical-point value is reproduced.
    {
        double worst = 0.0;
        for (int sign : {1, -1}) {
            const EnergyState st = dimensionless_state(sign * 0.5);
            for (int i = 0; i < 50; ++i) {
                const FockPoint pt = point_at_omega(st, std_omega(i));
                const double ref = tmatrix_series(st, pt, tight).value;
                worst = std::max(worst, rel_dev(tmatrix_half(st, pt).value, ref));
                if (sign > 0)
                    worst = std::max(worst, rel_dev(tmatrix_schwinger(st, pt).value, ref));
            }
        }
        // mu = hbar = 1, E = -2 (kappa = 2), q1q2 = -1 => gamma = -1/2
        const EnergyState phys =
            make_energy_state(TwoBodySystem::make(1.0, -1.0, 1.0), -2.0);
        const FockPoint pp = make_fock_point(phys, 1.2, 0.8, 0.3);
        const double anchor = rel_dev(tmatrix_half(phys, pp).value, -17.830321082295499715);
        report(3, worst <= 1e-9 && anchor <= 1e-10,
               "three routes coincide at half strength", worst, "max rel dev");
    }

    // 4. The auxiliary integrals at gamma = +-1/2 reproduce their closed
    //    forms, and the report records which reading of the log-integrand
    //    ambiguity the numbers selected.
    const ValidationReport vrep = run_validation(1e-8);
    {
        double worst = 0.0;
        for (int sign : {1, -1}) {
            const double g = sign * 0.5;
            for (double om : {0.2, 0.9, 1.7, 2.6}) {
                const SingularitySeparatedAux aux = aux_integrals(g, om);
                worst = std::max(worst,
                                 rel_dev(aux.x_gamma, sign * 2.0 * std::sin(0.5 * om), 1e-3));
                worst = std::max(worst, rel_dev(aux.c_gamma, 0.5 - sign / M_PI));
            }
        }
        bool recorded = false;
        for (const auto& sel : vrep.selections)
            if (sel.first == "aux_y_integrand" && !sel.second.empty()) recorded = true;
        report(4, worst <= 1e-10 && recorded,
               "auxiliary integrals at half strength hit their closed forms", worst,
               "max rel dev");
    }

    // 5. The finite rational reduction agrees with the series at twelve
    //    strengths covering proper fractions and improper ones (where the
    //    integer-part subtraction enters), plus two frozen anchors.
    {
        double worst = 0.0;
        const std::pair<long, long> fracs[] = {{1, 3}, {1, 4}, {2, 3}, {3, 2}, {5, 2}, {7, 2}};
        for (const auto& fr : fracs)
            for (int sign : {1, -1}) {
                const double g = sign * double(fr.first) / double(fr.second);
                const auto rg = RationalGamma::from_real(g);
                if (!rg) {
                    worst = 1.0;
                    continue;
                }
                for (int i = 0; i < 50; ++i) {
                    const double om = std_omega(i);
                    worst = std::max(worst, rel_dev(rational_sum(*rg, om).value,
                                                    fock_sum(g, om, tight).value, 1e-3));
                }
            }
        const double a1 = rel_dev(rational_sum(*RationalGamma::from_real(1.0 / 3.0),
                                               0.5 * M_PI)
                                      .value,
                                  0.56032609183713632052);
        const double a2 = rel_dev(rational_sum(*RationalGamma::from_real(-1.5), M_PI / 3.0)
                                      .value,
                                  -0.41509291064406317962);
        report(5, worst <= 1e-9 && a1 <= 1e-12 && a2 <= 1e-12,
               "finite rational reduction matches the series at twelve strengths", worst,
               "max rel dev");
    }

    // 6. Every transcribed explicit form is either confirmed as printed, or
    //    recorded discrepant with its corrected replacement confirmed.
    {
        bool ok = vrep.forms.size() == 12;
        int discrepant = 0;
        for (const FormAudit& f : vrep.forms) {
            if (f.status == "DISCREPANT") ++discrepant;
            if (!(f.status == "CONFIRMED" ||
                  (f.status == "DISCREPANT" && f.corrected_status == "CONFIRMED")))
                ok = false;
        }
        report(6, ok, "every explicit form confirmed, or corrected and confirmed",
               double(discrepant), "forms needing correction");
    }

    // 7. At vanishing strength every representation approaches the Born term,
    //    which itself equals the direct momentum-transfer expression.
    {
        double worst = 0.0;
        const EnergyState st = dimensionless_state(1e-8);
        const Representation reps[] = {Representation::series, Representation::closed,
                                       Representation::schwinger, Representation::separated,
                                       Representation::rational};
        for (double om : {0.1, 0.7, 1.6, 2.6, M_PI - 0.1}) {
            const FockPoint pt = point_at_omega(st, om);
            const double tb = born_term(st, pt);
            for (Representation r : reps)
                worst = std::max(worst, rel_dev(evaluate(r, st, pt).value, tb));
        }
        double born_dev = 0.0;
        const EnergyState phys =
            make_energy_state(TwoBodySystem::make(1.0, -1.0, 1.0), -2.0);
        for (double k : {0.6, 1.2, 2.1})
            for (double c : {-0.8, 0.3}) {
                const FockPoint pt = make_fock_point(phys, k, 0.8, c);
                const double direct = 4.0 * M_PI * phys.system.charge_product /
                                      momentum_transfer_sq(k, 0.8, c);
                born_dev = std::max(born_dev, rel_dev(born_term(phys, pt), direct));
            }
        const FockPoint pa = make_fock_point(phys, 1.2, 0.8, 0.3);
        const double anchor = rel_dev(born_term(phys, pa), -8.35529961061115223);
        report(7, worst <= 1e-6 && born_dev <= 1e-12 && anchor <= 1e-12,
               "all representations reach the Born limit at vanishing strength", worst,
               "max rel dev");
    }

    // 8. Exchange of k and k' is exact for every representation, and the
    //    command-line exports are byte-identical across runs and threads.
    {
        bool exact = true;
        const EnergyState st = dimensionless_state(-0.5, 1.3);
        const Representation reps[] = {Representation::born,      Representation::series,
                                       Representation::closed,    Representation::schwinger,
                                       Representation::separated, Representation::rational};
        const std::pair<double, double> moms[] = {{0.6, 1.9}, {1.2, 0.8}, {2.5, 0.4}};
        for (const auto& m : moms)
            for (double c : {-0.7, 0.2, 0.9})
                for (Representation r : reps) {
                    const EvalResult e1 = evaluate(r, st, make_fock_point(st, m.first, m.second, c));
                    const EvalResult e2 = evaluate(r, st, make_fock_point(st, m.second, m.first, c));
                    if (e1.value != e2.value || e1.flags != e2.flags) exact = false;
                }
        const std::string args =
            "grid --gamma=0.7 --k-list=0.5,1.5,2.5 --kp-list=0.9,1.9 --cos-list=-1,-0.2,0.6,1 "
            "--reps=series,closed,schwinger,separated,rational";
        int c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
        const std::string r1 = run_cli_capture(args, &c1);
        const std::string r2 = run_cli_capture(args, &c2);
        const std::string r3 = run_cli_capture(args + " --threads=4", &c3);
        const std::string r4 = run_cli_capture(args + " --format=json --threads=9", &c4);
        const std::string r5 = run_cli_capture(args + " --format=json", &c5);
        const bool stable = !r1.empty() && r1 == r2 && r1 == r3 && !r4.empty() && r4 == r5 &&
                            c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0 && c5 == 0;
        report(8, exact && stable,
               "exchange symmetry exact; exports byte-stable across runs and threads",
               exact && stable ? 0.0 : 1.0, "defects");
    }

    // 9. Near a bound-state pole the residue of the angle sum approaches
    //    sin(omega); exactly at negative integers the pole error is raised.
    {
        double worst = 0.0;
        for (double eps : {1e-3, 1e-5}) {
            const double g = -1.0 + eps;
            for (double om : {0.6, 1.5, 2.4}) {
                const double r = std::abs((1.0 + g) * fock_sum(g, om).value / std::sin(om) - 1.0);
                worst = std::max(worst, r / (10.0 * eps));
            }
        }
        bool raised = true;
        for (double g : {-1.0, -2.0, -3.0}) {
            try {
                (void)fock_sum(g, 1.2);
                raised = false;
            } catch (const Error& e) {
                if (e.code() != errc::bound_state_pole) raised = false;
            }
        }
        bool near_ok = true;
        try {
            (void)fock_sum(-1.0 + 1e-3, 1.2); // near misses must still evaluate
        } catch (...) {
            near_ok = false;
        }
        report(9, worst <= 1.0 && raised && near_ok,
               "bound-state pole residue and exact pole rejection", worst,
               "residue dev over 10*eps");
    }

    // 10. Legendre projections up to l = 20 rebuild the matrix element at an
    //     interior angle; the projection rejects the on-shell diagonal; the
    //     low-l projections and the free l = 0 term hit frozen references.
    {
        const EnergyState st = dimensionless_state(0.5);
        const double k = 2.0, kp = 0.5;
        std::vector<double> tl(21);
        for (int l = 0; l <= 20; ++l) tl[size_t(l)] = project_partial_wave(st, k, kp, l).value;
        double recon = 0.0;
        for (int l = 0; l <= 20; ++l)
            recon += (2.0 * l + 1.0) * legendre_p(l, 0.0) * tl[size_t(l)];
        const double direct =
            evaluate(Representation::series, st, make_fock_point(st, k, kp, 0.0)).value;
        const double dev = rel_dev(recon, direct);

        const double frozen[6] = {0.78719295596069040538, 0.16408610154716953049,
                                  0.036133387690458463231, 0.0081909159806418321279,
                                  0.00189047311504420839, 0.00044171988417859182828};
        double anchor = 0.0;
        for (int l = 0; l < 6; ++l)
            anchor = std::max(anchor, rel_dev(tl[size_t(l)], frozen[l]));

        const EnergyState stq = dimensionless_state(1.0); // q1q2 = 1 at kappa = 1
        const double free_l0 =
            project_partial_wave(stq, 2.0, 0.5, 0, Representation::born).value;
        const double free_anchor = rel_dev(free_l0, 3.2096120537773200411);

        bool rejected = false;
        try {
            (void)project_partial_wave(st, 1.3, 1.3, 2);
        } catch (const Error& e) {
            rejected = e.code() == errc::on_shell_diagonal;
        }
        report(10, dev <= 1e-4 && anchor <= 1e-9 && free_anchor <= 1e-10 && rejected,
               "partial waves rebuild the matrix element; on-shell diagonal rejected", dev,
               "reconstruction rel dev");
    }

    std::printf("%d of 10 acceptance criteria passed\n", 10 - failures);
    return failures;
}
