#include "fif/fif1d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "fif/error.hpp"
#include "fif/kernels.hpp"

namespace fif {

namespace {

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double value_scale(const DataSet1D &data) { return 1.0 + data.max_abs_value(); }

void require_same_domain(const Ifs1D &ifs, const GridFunction1D &f) {
    const auto &d = ifs.data();
    if (f.first() != d.first_knot() || f.last() != d.last_knot())
        throw DomainError("grid function does not cover the interpolation interval");
}

GridFunction1D sample_g0(const Ifs1D &ifs, std::size_t intervals) {
    const auto g0 = build_g0(ifs.data());
    return GridFunction1D::sample(ifs.data().first_knot(), ifs.data().last_knot(), intervals, g0);
}

} // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() != values_.size() || knots_.size() < 2)
        throw InvalidDataError("a piecewise-linear function needs at least two matching points");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i - 1] < knots_[i]))
            throw InvalidDataError("duplicate or unsorted knot at index " + std::to_string(i));
    }
    // a_n t_n + b_n = x_n and a_n t_{n-1} + b_n = x_{n-1}, solved per segment
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double dt = knots_[i] - knots_[i - 1];
        slopes_.push_back((values_[i] - values_[i - 1]) / dt);
        intercepts_.push_back((values_[i - 1] * knots_[i] - values_[i] * knots_[i - 1]) / dt);
    }
}

double PiecewiseLinear::operator()(double t) const noexcept {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    if (it != knots_.begin() && *(it - 1) == t)
        return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
    std::size_t seg = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    seg = std::min(seg, slopes_.size() - 1);
    // interpolate from the left knot to keep the value between its neighbours
    return values_[seg] + slopes_[seg] * (t - knots_[seg]);
}

PiecewiseLinear build_g0(const DataSet1D &data) {
    return PiecewiseLinear({data.knots().begin(), data.knots().end()}, {data.values().begin(), data.values().end()});
}

PiecewiseLinear build_chord(const DataSet1D &data) {
    return PiecewiseLinear({data.first_knot(), data.last_knot()}, {data.first_value(), data.last_value()});
}

std::vector<double> knot_branch_jumps(const Ifs1D &ifs, const GridFunction1D &f) {
    const auto t = ifs.data().knots();
    std::vector<double> jumps;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        const auto &left_l = ifs.lmaps()[k - 1];
        const auto &right_l = ifs.lmaps()[k];
        const double u_left = left_l.inverse(t[k]);
        const double u_right = right_l.inverse(t[k]);
        const double left = ifs.vmaps()[k - 1](u_left, f(u_left));
        const double right = ifs.vmaps()[k](u_right, f(u_right));
        jumps.push_back(std::abs(left - right));
    }
    return jumps;
}

GridFunction1D rb_apply_unchecked(const Ifs1D &ifs, const GridFunction1D &f) {
    require_same_domain(ifs, f);
    std::vector<double> out(f.intervals() + 1);
    kernels::omp::rb_apply_1d(ifs, f, out);
    return GridFunction1D(f.first(), f.last(), std::move(out));
}

GridFunction1D rb_apply(const Ifs1D &ifs, const GridFunction1D &f, double tol) {
    require_same_domain(ifs, f);
    const auto &d = ifs.data();
    const double limit = tol * value_scale(d);
    const auto s = f.samples();
    if (std::abs(s.front() - d.first_value()) > limit || std::abs(s.back() - d.last_value()) > limit)
        throw DomainError("function does not take the data values at the interval ends");

    const auto jumps = knot_branch_jumps(ifs, f);
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        if (jumps[k] > limit)
            throw DomainError("operator branches disagree at knot " + std::to_string(k + 1) + " by " +
                              describe(jumps[k]));
    }
    return rb_apply_unchecked(ifs, f);
}

namespace {

template <class Apply>
FixedPoint1D iterate_to_fixed_point(const Ifs1D &ifs, const FixedPointConfig &cfg, Apply &&apply) {
    cfg.validate();
    if (cfg.resolution < ifs.size())
        throw DomainError("resolution must provide at least one grid interval per subinterval");

    FixedPoint1D result{sample_g0(ifs, cfg.resolution), 0, {}};
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        auto next = apply(result.f);
        const double change = sup_distance(next.samples(), result.f.samples());
        result.step_norms.push_back(change);
        result.f = std::move(next);
        result.iterations = it;
        if (change <= cfg.tol)
            return result;
    }
    throw NonConvergenceError("fixed-point iteration did not reach tol " + describe(cfg.tol) + " in " +
                                  std::to_string(cfg.max_iter) + " iterations (last change " +
                                  describe(result.step_norms.back()) + ")",
                              result.step_norms.back(), cfg.max_iter);
}

} // namespace

FixedPoint1D fixed_point(const Ifs1D &ifs, const FixedPointConfig &cfg) {
    return iterate_to_fixed_point(ifs, cfg, [&](const GridFunction1D &f) { return rb_apply(ifs, f); });
}

double knot_residual(const GridFunction1D &f, const DataSet1D &data) {
    double r = 0.0;
    for (std::size_t k = 0; k < data.knots().size(); ++k)
        r = std::max(r, std::abs(f(data.knots()[k]) - data.values()[k]));
    return r;
}

Point eval_exact(const Ifs1D &ifs, std::span<const std::size_t> address, double t) {
    const auto knots = ifs.data().knots();
    const auto it = std::find(knots.begin(), knots.end(), t);
    if (it == knots.end())
        throw DomainError("exact evaluation starts from a knot; " + describe(t) + " is not one");
    Point p{t, ifs.data().values()[static_cast<std::size_t>(it - knots.begin())]};
    // f(L_n(t)) = F_n(t, f(t)); the innermost map acts first
    for (auto a = address.rbegin(); a != address.rend(); ++a) {
        if (*a >= ifs.size())
            throw IndexError("address entry " + std::to_string(*a) + " out of range");
        const auto &l = ifs.lmaps()[*a];
        const auto &v = ifs.vmaps()[*a];
        p = {l(p.t), v(p.t, p.x)};
    }
    return p;
}

double check_g0_qn_relation(const Ifs1D &ifs, std::size_t samples) {
    const auto &d = ifs.data();
    const auto g0 = build_g0(d);
    const auto r = build_chord(d);
    const auto t = d.knots();
    const std::size_t count = std::max<std::size_t>(samples, 1);
    double worst = 0.0;
    for (std::size_t n = 0; n < ifs.size(); ++n) {
        const auto &l = ifs.lmaps()[n];
        const auto &v = ifs.vmaps()[n];
        for (std::size_t j = 0; j < count; ++j) {
            const double w = count == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(count - 1);
            const double s = j + 1 == count && count > 1 ? t[n + 1] : t[n] + w * (t[n + 1] - t[n]);
            const double u = l.inverse(s);
            worst = std::max(worst, std::abs(v.q(u) - (g0(s) - v.alpha * r(u))));
        }
    }
    return worst;
}

double check_fixed_point_identity(const Ifs1D &ifs, const GridFunction1D &f, std::size_t samples) {
    require_same_domain(ifs, f);
    const auto g0 = build_g0(ifs.data());
    const auto r = build_chord(ifs.data());

    // grid nodes grouped by the subinterval the operator dispatched them to
    std::vector<std::vector<std::size_t>> nodes(ifs.size());
    for (std::size_t i = 0; i <= f.intervals(); ++i)
        nodes[ifs.locate(f.abscissa(i))].push_back(i);

    double worst = 0.0;
    for (std::size_t n = 0; n < ifs.size(); ++n) {
        const auto &members = nodes[n];
        if (members.empty())
            continue;
        const std::size_t take = std::min(std::max<std::size_t>(samples, 1), members.size());
        const double alpha = ifs.vmaps()[n].alpha;
        for (std::size_t j = 0; j < take; ++j) {
            const std::size_t pick = take == 1 ? 0 : j * (members.size() - 1) / (take - 1);
            const std::size_t i = members[pick];
            const double s = f.abscissa(i);
            const double u = ifs.lmaps()[n].inverse(s);
            worst = std::max(worst, std::abs(f[i] - g0(s) - alpha * (f(u) - r(u))));
        }
    }
    return worst;
}

double integrate_closed_form(const Ifs1D &ifs) {
    const auto &d = ifs.data();
    const double span = d.span();
    const double mid = 0.5 * (d.first_knot() + d.last_knot());
    double numerator = 0.0;
    double feedback = 0.0;
    for (std::size_t n = 0; n < ifs.size(); ++n) {
        const double a = ifs.lmaps()[n].a;
        const auto &v = ifs.vmaps()[n];
        numerator += a * span * v.q(mid); // integral of an affine q over [t0, tN]
        feedback += a * v.alpha;
    }
    const double denominator = 1.0 - feedback;
    if (!(denominator > 0.0))
        throw Error("internal error: self-similar integral denominator " + describe(denominator) +
                    " is not positive");
    return numerator / denominator;
}

double midpoint_integral(const GridFunction1D &f) {
    const auto s = f.samples();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        sum += 0.5 * (s[i] + s[i + 1]);
    return sum * f.step();
}

double integrate_quadrature(const Ifs1D &ifs, const FixedPointConfig &cfg) {
    return midpoint_integral(fixed_point(ifs, cfg).f);
}

double modulus_of_continuity(const GridFunction1D &f, double h) {
    const auto s = f.samples();
    const double ratio = h / f.step();
    const auto window =
        std::min<std::size_t>(static_cast<std::size_t>(std::floor(ratio + 1e-9)), s.size() - 1);
    if (window == 0)
        return 0.0;

    // sliding-window max - min over every run of window + 1 consecutive samples
    std::deque<std::size_t> hi, lo;
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        while (!hi.empty() && s[hi.back()] <= s[i])
            hi.pop_back();
        while (!lo.empty() && s[lo.back()] >= s[i])
            lo.pop_back();
        hi.push_back(i);
        lo.push_back(i);
        if (hi.front() + window < i)
            hi.pop_front();
        if (lo.front() + window < i)
            lo.pop_front();
        best = std::max(best, s[hi.front()] - s[lo.front()]);
    }
    return best;
}

ComparisonReport compare_with_classical(const DataSet1D &data, const Ifs1D &ifs, const FixedPointConfig &cfg) {
    if (data.knots().size() != ifs.data().knots().size())
        throw DomainError("data set and IFS have different knot counts");
    const auto t = data.knots();
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h)
            throw DomainError("the comparison bound needs uniformly spaced knots");
    }

    const auto fif = fixed_point(ifs, cfg).f;
    const auto classical = GridFunction1D::sample(t.front(), t.back(), cfg.resolution, build_g0(data));

    ComparisonReport r;
    r.sup_diff = sup_distance(fif.samples(), classical.samples());
    r.w_f = modulus_of_continuity(classical, h);
    for (double v : classical.samples())
        r.f_inf = std::max(r.f_inf, std::abs(v));
    r.alpha_inf = ifs.vertical_contractivity();
    r.bound_rhs = r.alpha_inf < 1.0 ? r.w_f + 2.0 * r.alpha_inf / (1.0 - r.alpha_inf) * r.f_inf
                                    : std::numeric_limits<double>::infinity();
    r.bound_holds = r.sup_diff <= r.bound_rhs;
    return r;
}

ViolationReport endpoint_violation_experiment(const Ifs1D &ifs, std::size_t map, double delta,
                                              const FixedPointConfig &cfg) {
    if (map >= ifs.size())
        throw IndexError("map index " + std::to_string(map) + " out of range for " + std::to_string(ifs.size()) +
                         " maps");
    auto moved = ifs.vmaps()[map];
    moved.q0 += delta;
    const Ifs1D perturbed = ifs.with_vmap(map, moved);

    ViolationReport report;
    const auto start = sample_g0(ifs, std::max(cfg.resolution, ifs.size()));
    const auto jumps = knot_branch_jumps(perturbed, start);
    for (double j : jumps)
        report.max_jump = std::max(report.max_jump, j);

    const auto limit = iterate_to_fixed_point(perturbed, cfg,
                                              [&](const GridFunction1D &f) { return rb_apply_unchecked(perturbed, f); });
    report.knot_residual = knot_residual(limit.f, ifs.data());

    double feedback = 0.0;
    for (std::size_t n = 0; n < ifs.size(); ++n)
        feedback += ifs.lmaps()[n].a * ifs.vmaps()[n].alpha;
    report.integral_shift = ifs.lmaps()[map].a * delta * ifs.data().span() / (1.0 - feedback);
    return report;
}

} // namespace fif
