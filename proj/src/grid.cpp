#include "ctmatrix/grid.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "ctmatrix/errors.hpp"

namespace ctm {

namespace {

// Map a thrown failure onto the row-flag vocabulary.  The precise errc name
// still travels in GridRow::error; the flag is the coarse machine-readable
// category the table consumers filter on.
unsigned flag_for(errc code) {
    switch (code) {
    case errc::forward_singularity:     return flag_forward_singular;
    case errc::backward_indeterminate:  return flag_backward_indeterminate;
    case errc::bound_state_pole:        return flag_bound_state_pole;
    case errc::degenerate_gamma:
    case errc::attractive_out_of_range:
    case errc::non_integrable:
    case errc::out_of_range:            return flag_rep_invalid;
    case errc::convergence_failure:
    case errc::quadrature_failure:      return flag_not_converged;
    default:                            return flag_nonfinite;
    }
}

void check_spec(const GridSpec& spec) {
    if (spec.k_list.empty() || spec.kp_list.empty() || spec.cos_list.empty())
        fail(errc::usage_error, "grid needs non-empty k, k', and cos(theta) lists");
    if (spec.reps.empty())
        fail(errc::usage_error, "grid needs at least one representation");
    if (spec.threads < 1)
        fail(errc::usage_error, "thread count must be >= 1");
    for (double k : spec.k_list)
        if (!(std::isfinite(k) && k > 0.0))
            fail(errc::usage_error, "every k must be finite and positive");
    for (double kp : spec.kp_list)
        if (!(std::isfinite(kp) && kp > 0.0))
            fail(errc::usage_error, "every k' must be finite and positive");
    for (double c : spec.cos_list)
        if (!(std::isfinite(c) && c >= -1.0 && c <= 1.0))
            fail(errc::usage_error, "every cos(theta) must lie in [-1, 1]");
}

void fill_row(const EnergyState& st, const GridSpec& spec, std::size_t index,
              GridRow& row) {
    const std::size_t nr = spec.reps.size();
    const std::size_t nc = spec.cos_list.size();
    const std::size_t np = spec.kp_list.size();

    const std::size_t ir = index % nr;
    const std::size_t ic = (index / nr) % nc;
    const std::size_t ip = (index / (nr * nc)) % np;
    const std::size_t ik = index / (nr * nc * np);

    row.k = spec.k_list[ik];
    row.k_prime = spec.kp_list[ip];
    row.cos_theta = spec.cos_list[ic];
    row.gamma = st.gamma;
    row.rep = spec.reps[ir];

    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.omega = nan;
    row.eta = nan;
    row.value = nan;
    row.abs_err_est = nan;
    row.flags = flag_none;
    row.error.clear();

    try {
        const FockPoint pt = make_fock_point(st, row.k, row.k_prime, row.cos_theta);
        row.omega = pt.omega;
        row.eta = pt.eta;
        const EvalResult res = evaluate(row.rep, st, pt, spec.options);
        row.value = res.value;
        row.abs_err_est = res.abs_err_est;
        row.flags = res.flags;
    } catch (const Error& e) {
        row.flags |= flag_for(e.code());
        row.error = errc_name(e.code());
    } catch (const std::exception&) {
        row.flags |= flag_nonfinite;
        row.error = errc_name(errc::internal_failure);
    }
}

} // namespace

std::vector<GridRow> run_grid(const EnergyState& st, const GridSpec& spec) {
    check_spec(spec);

    const std::size_t total = spec.k_list.size() * spec.kp_list.size() *
                              spec.cos_list.size() * spec.reps.size();
    std::vector<GridRow> rows(total);

    // Static block partition: worker w owns the contiguous index range
    // [w*total/T, (w+1)*total/T), and every row is written exactly once at
    // its fixed position.  Nothing about the result depends on scheduling,
    // so the exported bytes match the single-threaded run.
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(spec.threads), std::max<std::size_t>(total, 1));
    auto run_block = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fill_row(st, spec, i, rows[i]);
    };

    if (workers <= 1) {
        run_block(0, total);
        return rows;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = total * w / workers;
        const std::size_t hi = total * (w + 1) / workers;
        pool.emplace_back(run_block, lo, hi);
    }
    for (auto& t : pool) t.join();
    return rows;
}

} // namespace ctm
