#include "fif/ifs1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fif/error.hpp"

namespace fif {

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

void require_increasing(std::span<const double> knots) {
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i - 1] < knots[i]))
            throw InvalidDataError("knots must be strictly increasing (knot " + std::to_string(i) + ")");
    }
}

} // namespace

DataSet1D::DataSet1D(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() != values_.size())
        throw InvalidDataError("knots and values differ in length");
    if (knots_.size() < 3)
        throw InvalidDataError("at least three data points (N >= 2) are required");
    if (!all_finite(knots_) || !all_finite(values_))
        throw InvalidDataError("data contains NaN or infinite entries");
    require_increasing(knots_);
}

double DataSet1D::max_abs_value() const noexcept {
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

ScalingVector::ScalingVector(std::vector<double> alphas) : alphas_(std::move(alphas)) {
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
        if (!std::isfinite(alphas_[i]) || !(std::abs(alphas_[i]) < 1.0))
            throw InvalidScalingError("scaling factor " + std::to_string(i + 1) + " must satisfy |alpha| < 1");
    }
}

ScalingVector ScalingVector::broadcast(double alpha, std::size_t count) {
    return ScalingVector(std::vector<double>(count, alpha));
}

double ScalingVector::max_abs() const noexcept {
    double m = 0.0;
    for (double a : alphas_)
        m = std::max(m, std::abs(a));
    return m;
}

Ifs1D::Ifs1D(DataSet1D data, std::vector<AffineMap1D> lmaps, std::vector<VerticalMap1D> vmaps)
    : data_(std::move(data)), lmaps_(std::move(lmaps)), vmaps_(std::move(vmaps)) {
    const std::size_t n = data_.intervals();
    if (lmaps_.size() != n || vmaps_.size() != n)
        throw InvalidDataError("IFS needs exactly one map pair per subinterval");
    for (std::size_t i = 0; i < n; ++i) {
        const auto &l = lmaps_[i];
        const auto &v = vmaps_[i];
        if (!std::isfinite(l.a) || !std::isfinite(l.b) || l.a == 0.0)
            throw InvalidDataError("domain map " + std::to_string(i + 1) + " is not invertible");
        if (!std::isfinite(v.alpha) || !std::isfinite(v.q1) || !std::isfinite(v.q0))
            throw InvalidDataError("vertical map " + std::to_string(i + 1) + " has non-finite coefficients");
    }
}

double Ifs1D::contractivity() const noexcept {
    double s = 0.0;
    for (const auto &l : lmaps_)
        s = std::max(s, std::abs(l.a));
    return s;
}

double Ifs1D::vertical_contractivity() const noexcept {
    double d = 0.0;
    for (const auto &v : vmaps_)
        d = std::max(d, std::abs(v.alpha));
    return d;
}

std::size_t Ifs1D::locate(double t) const noexcept {
    const auto k = data_.knots();
    const auto it = std::upper_bound(k.begin(), k.end(), t);
    if (it == k.begin())
        return 0;
    const auto idx = static_cast<std::size_t>(it - k.begin()) - 1;
    return std::min(idx, size() - 1);
}

Ifs1D Ifs1D::with_vmap(std::size_t i, const VerticalMap1D &vmap) const {
    if (i >= size())
        throw IndexError("map index " + std::to_string(i) + " out of range");
    auto vmaps = vmaps_;
    vmaps[i] = vmap;
    return Ifs1D(data_, lmaps_, std::move(vmaps));
}

std::vector<AffineMap1D> build_axis_maps(std::span<const double> knots) {
    if (knots.size() < 2)
        throw InvalidDataError("an axis needs at least two knots");
    if (!all_finite(knots))
        throw InvalidDataError("knots contain NaN or infinite entries");
    require_increasing(knots);

    const double first = knots.front();
    const double last = knots.back();
    const double span = last - first;
    std::vector<AffineMap1D> maps;
    maps.reserve(knots.size() - 1);
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const double lo = knots[i - 1];
        const double hi = knots[i];
        maps.push_back({(hi - lo) / span, (last * lo - first * hi) / span});
    }
    return maps;
}

std::vector<AffineMap1D> build_lmaps(const DataSet1D &data) { return build_axis_maps(data.knots()); }

std::vector<VerticalMap1D> solve_qn(const DataSet1D &data, const ScalingVector &alphas) {
    const std::size_t n = data.intervals();
    if (alphas.size() != n)
        throw InvalidScalingError("expected " + std::to_string(n) + " scaling factors, got " +
                                  std::to_string(alphas.size()));
    const auto x = data.values();
    const double t0 = data.first_knot();
    const double x0 = data.first_value();
    const double rise = data.last_value() - x0;
    const double span = data.span();

    std::vector<VerticalMap1D> maps;
    maps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double alpha = alphas[i];
        const double q1 = (x[i + 1] - x[i] - alpha * rise) / span;
        const double q0 = x[i] - alpha * x0 - q1 * t0;
        maps.push_back({alpha, q1, q0});
    }
    return maps;
}

Ifs1D build_ifs(const DataSet1D &data, const ScalingVector &alphas) {
    return Ifs1D(data, build_lmaps(data), solve_qn(data, alphas));
}

double MapCheck::max_residual() const noexcept {
    return std::max({lmap_first, lmap_last, vmap_first, vmap_last});
}

ValidationReport validate_ifs(const Ifs1D &ifs, double tol) {
    const auto &d = ifs.data();
    const auto t = d.knots();
    const auto x = d.values();
    const double t0 = d.first_knot(), tn = d.last_knot();
    const double x0 = d.first_value(), xn = d.last_value();

    ValidationReport report;
    report.tol = tol;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        const auto &l = ifs.lmaps()[i];
        const auto &v = ifs.vmaps()[i];
        MapCheck c;
        c.lmap_first = std::abs(l(t0) - t[i]);
        c.lmap_last = std::abs(l(tn) - t[i + 1]);
        c.vmap_first = std::abs(v(t0, x0) - x[i]);
        c.vmap_last = std::abs(v(tn, xn) - x[i + 1]);
        c.domain_factor = std::abs(l.a);
        c.vertical_factor = std::abs(v.alpha);
        report.max_residual = std::max(report.max_residual, c.max_residual());
        report.contractive = report.contractive && c.contractive();
        report.maps.push_back(c);
    }
    report.pass = report.contractive && report.max_residual <= tol;
    return report;
}

} // namespace fif
