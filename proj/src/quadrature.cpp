#include "ctmatrix/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace ctm {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]; the
// odd-indexed abscissae (and the center) are the Gauss nodes.  No node sits
// on the panel boundary, so integrands may be singular at interval endpoints.
constexpr double xgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double wgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
constexpr double wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
    double a = 0.0, b = 0.0;
    double value = 0.0;
    double err = 0.0;
    int depth = 0;
    bool alive = true;
};

// One Gauss-Kronrod pass over [a, b].  The error estimate follows the
// classic scaling err = resasc * min(1, (200 |K - G| / resasc)^{3/2}) with a
// rounding floor of 50 eps * integral of |f|.
void gk15(const std::function<double(double)>& f, double a, double b, Panel& p) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = wg[3] * fc;
    double resk = wgk[7] * fc;
    double resabs = wgk[7] * std::abs(fc);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        const double fsum = f1 + f2;
        resk += wgk[j] * fsum;
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j & 1)
            resg += wg[j / 2] * fsum;
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
    p.a = a;
    p.b = b;
    p.value = resk * h;
    p.err = err;
}

struct HeapEntry {
    double err = 0.0;
    double a = 0.0;
    size_t idx = 0;
};

struct WorstFirst {
    bool operator()(const HeapEntry& x, const HeapEntry& y) const {
        if (x.err != y.err)
            return x.err < y.err; // larger error on top
        return x.a > y.a;         // tie: leftmost panel on top
    }
};

void check_quad_options(const QuadOptions& opts) {
    if (!(opts.target_rel_tol >= 1e-13))
        fail(errc::out_of_range, "quadrature options: target_rel_tol below 1e-13 is not attainable");
    if (!(opts.target_abs_tol >= 0.0))
        fail(errc::out_of_range, "quadrature options: target_abs_tol must be >= 0");
    if (opts.max_depth < 1 || opts.max_depth > 60)
        fail(errc::out_of_range, "quadrature options: max_depth must lie in [1, 60]");
    if (opts.max_evals < 15)
        fail(errc::out_of_range, "quadrature options: max_evals must be at least 15");
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
    check_quad_options(opts);
    if (!std::isfinite(a) || !std::isfinite(b))
        fail(errc::out_of_range, "integration bounds must be finite");
    if (a == b)
        return QuadResult{0.0, 0.0, 0, true};
    const double flip = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);

    std::vector<Panel> panels;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, WorstFirst> heap;
    panels.emplace_back();
    gk15(f, lo, hi, panels[0]);
    heap.push(HeapEntry{panels[0].err, panels[0].a, 0});
    long evals = 15;

    double tot_val = panels[0].value;
    double tot_err = panels[0].err;
    bool converged = false;
    while (true) {
        if (tot_err <= std::max(opts.target_abs_tol, opts.target_rel_tol * std::abs(tot_val))) {
            converged = true;
            break;
        }
        // worst surviving panel, leftmost among equals
        size_t worst = size_t(-1);
        while (!heap.empty()) {
            const HeapEntry e = heap.top();
            heap.pop();
            if (panels[e.idx].alive) {
                worst = e.idx;
                break;
            }
        }
        if (worst == size_t(-1))
            break;
        if (panels[worst].depth >= opts.max_depth || evals + 30 > opts.max_evals)
            break;

        Panel parent = panels[worst];
        panels[worst].alive = false;
        tot_val -= parent.value;
        tot_err -= parent.err;
        const double mid = 0.5 * (parent.a + parent.b);
        for (int side = 0; side < 2; ++side) {
            Panel child;
            child.depth = parent.depth + 1;
            gk15(f, side == 0 ? parent.a : mid, side == 0 ? mid : parent.b, child);
            tot_val += child.value;
            tot_err += child.err;
            panels.push_back(child);
            heap.push(HeapEntry{child.err, child.a, panels.size() - 1});
        }
        evals += 30;
    }

    // Re-sum the surviving panels in position order so the rounding of the
    // total is a pure function of the panel set.
    std::vector<const Panel*> leaves;
    leaves.reserve(panels.size());
    for (const Panel& p : panels)
        if (p.alive)
            leaves.push_back(&p);
    std::sort(leaves.begin(), leaves.end(),
              [](const Panel* x, const Panel* y) { return x->a < y->a; });
    double value = 0.0, err = 0.0;
    for (const Panel* p : leaves) {
        value += p->value;
        err += p->err;
    }
    QuadResult r;
    r.value = flip * value;
    r.abs_err = std::max(err, 2.0 * eps * std::abs(value));
    r.evals = evals;
    r.converged = converged;
    return r;
}

QuadResult integrate_log_endpoint(const std::function<double(double)>& f, double a, double b,
                                  const QuadOptions& opts) {
    check_quad_options(opts);
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
        fail(errc::out_of_range, "log-endpoint integration requires finite bounds with b > a");
    // phi = a + (b - a) e^{-u} maps u in [0, inf) onto (a, b]; a logarithmic
    // singularity of f at phi = a becomes a factor linear in u, and the
    // truncated tail beyond u_max = 45 is ~1e-18 of the integral scale.
    const double span = b - a;
    const double u_max = 45.0;
    auto g = [&](double u) {
        const double w = span * std::exp(-u);
        return f(a + w) * w;
    };
    return integrate(g, 0.0, u_max, opts);
}

QuadResult schwinger_integral(double gamma, double omega, const QuadOptions& opts) {
    check_quad_options(opts);
    if (!(omega > 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in (0, pi]");
    if (!(gamma > -1.0))
        fail(errc::non_integrable, "rho^gamma is not integrable at rho = 0 for gamma <= -1");

    const double cw = std::cos(omega);
    auto kernel = [&](double rho) { return 1.0 / ((rho - cw) * (rho - cw) + (1.0 - cw * cw)); };

    // The integrand peaks at rho = cos w with height ~1/sin^2 w and width
    // ~sin w; for small w the peak hugs rho = 1, so it is pre-isolated by
    // splitting at rho = 1 - 2w.  For gamma in (-1, 0) the substitution
    // rho = u^{1/(1+gamma)} turns the rho^gamma weight into the constant
    // 1/(1+gamma), removing the endpoint singularity entirely.
    std::function<double(double)> integrand;
    double split = -1.0;
    if (gamma < 0.0) {
        const double s = 1.0 / (1.0 + gamma);
        integrand = [=](double u) {
            const double rho = std::pow(u, s);
            return s * kernel(rho);
        };
        if (omega < 0.5)
            split = std::pow(1.0 - 2.0 * omega, 1.0 + gamma);
    } else {
        integrand = [=](double rho) { return std::pow(rho, gamma) * kernel(rho); };
        if (omega < 0.5)
            split = 1.0 - 2.0 * omega;
    }

    QuadResult total;
    total.converged = true;
    QuadOptions part = opts;
    part.target_abs_tol = 0.5 * opts.target_abs_tol;
    const double edges[3] = {0.0, split > 0.0 && split < 1.0 ? split : 1.0, 1.0};
    for (int i = 0; i < 2; ++i) {
        if (edges[i] == edges[i + 1])
            continue;
        const QuadResult piece = integrate(integrand, edges[i], edges[i + 1], part);
        total.value += piece.value;
        total.abs_err += piece.abs_err;
        total.evals += piece.evals;
        total.converged = total.converged && piece.converged;
    }
    return total;
}

EvalResult bracket_schwinger(double gamma, double omega, const QuadOptions& opts) {
    if (!(omega >= 0.0 && omega <= M_PI))
        fail(errc::out_of_range, "omega must lie in [0, pi]");
    if (omega == 0.0)
        fail(errc::forward_singularity, "angular factor diverges at omega = 0");

    EvalResult out;
    out.rep = Representation::schwinger;
    if (gamma == 0.0) {
        const double s = std::sin(0.5 * omega);
        out.value = 1.0 / (s * s);
        out.abs_err_est = 2.0 * eps * out.value;
        out.work = 0;
        return out;
    }
    if (!(gamma > -1.0))
        fail(errc::attractive_out_of_range,
             "kernel-integral route requires gamma > -1; use the angle-sum route for stronger attraction");

    const QuadResult I = schwinger_integral(gamma, omega, opts);
    if (!I.converged)
        fail(errc::quadrature_failure, "kernel integral did not converge");
    const double s = std::sin(0.5 * omega);
    const double born_part = 1.0 / (s * s);
    out.value = born_part - 4.0 * gamma * I.value;
    out.abs_err_est = 4.0 * std::abs(gamma) * I.abs_err +
                  2.0 * eps * (born_part + 4.0 * std::abs(gamma * I.value));
    out.work = I.evals;
    if (!std::isfinite(out.value))
        out.flags |= flag_nonfinite;
    return out;
}

EvalResult tmatrix_schwinger(const EnergyState& st, const FockPoint& pt, const QuadOptions& opts) {
    EvalResult out = bracket_schwinger(st.gamma, pt.omega, opts);
    const double pre = prefactor(st, pt);
    out.value *= pre;
    out.abs_err_est = std::abs(pre) * out.abs_err_est + 2.0 * eps * std::abs(out.value);
    return out;
}

} // namespace ctm
