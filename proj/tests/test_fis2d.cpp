#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fif/error.hpp"
#include "fif/fis2d.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fif;

namespace {

GridData2D xy_grid(double centre = 0.25) {
    return GridData2D({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.0, 0.0, centre, 0.5, 0.0, 0.5, 1.0});
}

// Left boundary knot z(0, 1) raised by 0.1.
GridData2D bumped_grid() {
    return GridData2D({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, {0.0, 0.1, 0.0, 0.0, 0.25, 0.5, 0.0, 0.5, 1.0});
}

GridData2D sampled(std::vector<double> xs, std::vector<double> ys, double (*f)(double, double)) {
    std::vector<double> zs;
    for (double x : xs)
        for (double y : ys)
            zs.push_back(f(x, y));
    return GridData2D(std::move(xs), std::move(ys), std::move(zs));
}

// Random grid whose four boundary sequences lie on chords; interior values are free.
GridData2D collinear_grid(gen::Source &src, std::size_t nx, std::size_t ny) {
    auto xs = src.increasing(nx + 1, false);
    auto ys = src.increasing(ny + 1, false);
    const double c00 = src.uniform(-2, 2), c01 = src.uniform(-2, 2), c10 = src.uniform(-2, 2),
                 c11 = src.uniform(-2, 2);
    std::vector<double> zs((nx + 1) * (ny + 1));
    for (std::size_t n = 0; n <= nx; ++n) {
        const double u = (xs[n] - xs[0]) / (xs[nx] - xs[0]);
        for (std::size_t m = 0; m <= ny; ++m) {
            const double v = (ys[m] - ys[0]) / (ys[ny] - ys[0]);
            const bool edge = n == 0 || n == nx || m == 0 || m == ny;
            zs[n * (ny + 1) + m] = edge ? (1 - u) * (1 - v) * c00 + (1 - u) * v * c01 + u * (1 - v) * c10 + u * v * c11
                                        : src.uniform(-2, 2);
        }
    }
    return GridData2D(std::move(xs), std::move(ys), std::move(zs));
}

double max_jump(const std::map<std::string, double> &report) {
    double w = 0.0;
    for (const auto &[seam, jump] : report)
        w = std::max(w, jump);
    return w;
}

double sup_diff(const GridFunction2D &a, const GridFunction2D &b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.samples().size(); ++i)
        w = std::max(w, std::abs(a.samples()[i] - b.samples()[i]));
    return w;
}

} // namespace

TEST(GridData2D, RejectsBadShapes) {
    EXPECT_THROW(GridData2D({0.0}, {0.0, 1.0}, {0.0, 0.0}), InvalidDataError);
    EXPECT_THROW(GridData2D({0.0, 1.0}, {0.0, 1.0}, {0.0, 0.0, 0.0}), InvalidDataError);
    EXPECT_THROW(GridData2D({0.0, 0.0}, {0.0, 1.0}, {0.0, 0.0, 0.0, 0.0}), InvalidDataError);
    EXPECT_THROW(GridData2D({0.0, 1.0}, {1.0, 0.0}, {0.0, 0.0, 0.0, 0.0}), InvalidDataError);
    EXPECT_THROW(GridData2D({0.0, 1.0}, {0.0, 1.0}, {0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}),
                 InvalidDataError);
    EXPECT_NO_THROW(GridData2D({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0, 2.0, 3.0}));
}

TEST(GridData2D, RowMajorWithXOutermost) {
    const GridData2D g({0.0, 1.0, 2.0}, {0.0, 1.0}, {0, 1, 10, 11, 20, 21});
    EXPECT_EQ(g.z(2, 1), 21.0);
    EXPECT_EQ(g.z(1, 0), 10.0);
    EXPECT_EQ(g.x_intervals(), 2u);
    EXPECT_EQ(g.y_intervals(), 1u);
}

TEST(ScalingMatrix, ValidatesShapeAndBound) {
    EXPECT_THROW(ScalingMatrix(2, 2, {0.1, 0.1, 0.1}), InvalidScalingError);
    EXPECT_THROW(ScalingMatrix(1, 2, {0.1, 1.0}), InvalidScalingError);
    EXPECT_THROW(ScalingMatrix::broadcast(-1.0, 2, 2), InvalidScalingError);
    const auto s = ScalingMatrix::broadcast(0.3, 2, 3);
    EXPECT_EQ(s.values().size(), 6u);
    EXPECT_EQ(s(1, 2), 0.3);
}

TEST(BuildAxisMaps, UniformHalves) {
    const std::vector<double> ks{0.0, 0.5, 1.0};
    const auto maps = build_axis_maps(ks);
    ASSERT_EQ(maps.size(), 2u);
    EXPECT_DOUBLE_EQ(maps[0].a, 0.5);
    EXPECT_DOUBLE_EQ(maps[1].a, 0.5);
}

TEST(BuildAxisMaps, UniformThirds) {
    const std::vector<double> ks{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    const auto maps = build_axis_maps(ks);
    ASSERT_EQ(maps.size(), 3u);
    for (const auto &m : maps)
        EXPECT_NEAR(m.a, 1.0 / 3.0, 1e-15);
}

TEST(BuildAxisMaps, NonUniformEndpointImages) {
    const std::vector<double> ks{0.0, 0.2, 1.0};
    const auto maps = build_axis_maps(ks);
    ASSERT_EQ(maps.size(), 2u);
    EXPECT_NEAR(maps[0].a, 0.2, 1e-15);
    EXPECT_NEAR(maps[1].a, 0.8, 1e-15);
    for (std::size_t n = 0; n < 2; ++n) {
        EXPECT_NEAR(maps[n](0.0), ks[n], 1e-15);
        EXPECT_NEAR(maps[n](1.0), ks[n + 1], 1e-15);
    }
}

TEST(SolveQnm, XyWithZeroAlphaHitsCornerTargets) {
    const auto g = xy_grid();
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.0, 2, 2));
    EXPECT_EQ(corner_residual(ifs), 0.0);
    // q for cell (c, d) is the bilinear patch mapped back onto the full square
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t d = 0; d < 2; ++d)
            for (double u : {0.0, 0.3, 1.0})
                for (double v : {0.0, 0.7, 1.0}) {
                    const double x = 0.5 * (c + u), y = 0.5 * (d + v);
                    EXPECT_NEAR(ifs.q(c, d)(u, v), x * y, 1e-15);
                }
}

TEST(SolveQnm, ZeroDataGivesZeroCoefficients) {
    const GridData2D g({0.0, 0.4, 1.0}, {-1.0, 0.0, 2.0}, std::vector<double>(9, 0.0));
    for (const auto &q : solve_qnm(g, ScalingMatrix::broadcast(0.7, 2, 2)))
        EXPECT_EQ(q, BilinearCoeffs{});
}

TEST(SolveQnm, MatchesEliminationOracleOnRandomGrids) {
    gen::Source src(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = src.grid(2, 2);
        const ScalingMatrix a(2, 2, {0.2, -0.2, 0.2, 0.2});
        const auto qs = solve_qnm(g, a);
        const Rect dom = g.domain();
        const double scale = 1.0 + g.max_abs_value();
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t d = 0; d < 2; ++d) {
                const double al = a(c, d);
                const auto ref = oracle::solve_bilinear(
                    dom.x0, dom.x1, dom.y0, dom.y1, g.z(c, d) - al * g.z(0, 0), g.z(c, d + 1) - al * g.z(0, 2),
                    g.z(c + 1, d) - al * g.z(2, 0), g.z(c + 1, d + 1) - al * g.z(2, 2));
                const auto &q = qs[c * 2 + d];
                EXPECT_NEAR(q.e, ref[0], 1e-9 * scale);
                EXPECT_NEAR(q.f, ref[1], 1e-9 * scale);
                EXPECT_NEAR(q.g, ref[2], 1e-9 * scale);
                EXPECT_NEAR(q.k, ref[3], 1e-9 * scale);
            }
        EXPECT_LE(corner_residual(build_ifs2d(g, a)), 1e-10 * scale);
    }
}

TEST(SolveQnm, ShapeMismatch) {
    EXPECT_THROW(solve_qnm(xy_grid(), ScalingMatrix::broadcast(0.1, 2, 3)), InvalidScalingError);
}

TEST(CheckCollinearity, XyPasses) {
    const auto r = check_collinearity(xy_grid(), 1e-12);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.max_deviation(), 0.0);
}

TEST(CheckCollinearity, BumpShowsOnItsSide) {
    const auto r = check_collinearity(bumped_grid(), 1e-9);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.left, 0.1, 1e-15);
    EXPECT_EQ(r.right, 0.0);
    EXPECT_EQ(r.bottom, 0.0);
    EXPECT_EQ(r.top, 0.0);
}

TEST(CheckCollinearity, XSquaredYFailsOnTop) {
    const auto g = sampled({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, [](double x, double y) { return x * x * y; });
    const auto r = check_collinearity(g, 1e-9);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.top, 0.25, 1e-15);
    EXPECT_EQ(r.bottom, 0.0);
    EXPECT_EQ(r.left, 0.0);
    EXPECT_EQ(r.right, 0.0);
}

TEST(Ifs2D, RecordsCollinearity) {
    EXPECT_TRUE(build_ifs2d(xy_grid(0.9), ScalingMatrix::broadcast(0.3, 2, 2)).collinear());
    EXPECT_FALSE(build_ifs2d(bumped_grid(), ScalingMatrix::broadcast(0.3, 2, 2)).collinear());
}

TEST(Rb2Apply, CollinearBranchesMatchChord) {
    const auto g = xy_grid(0.8);
    for (double a : {-0.6, 0.3, 0.9}) {
        const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(a, 2, 2));
        const auto img = rb2_apply(ifs, bilinear_interpolant(g, 64, 64), SeamPolicy::CollinearBoundary);
        ASSERT_EQ(img.x_seams.size(), 1u);
        ASSERT_EQ(img.y_seams.size(), 1u);
        const auto &s = img.x_seams[0];
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            const double y = s.positions[i];
            const std::size_t m = y <= 0.5 ? 1 : 2;
            const double lam = (y - g.ys()[m - 1]) / (g.ys()[m] - g.ys()[m - 1]);
            const double expect = (1 - lam) * g.z(1, m - 1) + lam * g.z(1, m);
            EXPECT_NEAR(s.lower[i], expect, 1e-12);
            EXPECT_NEAR(s.upper[i], expect, 1e-12);
        }
        EXPECT_LE(max_jump(seam_jump_report(img, ifs)), 1e-12);
    }
}

TEST(Rb2Apply, AverageHasNoJumpOnBumpedGrid) {
    const auto g = bumped_grid();
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.3, 2, 2));
    const auto f = bilinear_interpolant(g, 64, 64);
    const auto raw = rb2_apply(ifs, f, SeamPolicy::RawF);
    const auto avg = rb2_apply(ifs, f, SeamPolicy::AverageG);
    EXPECT_GT(seam_jump_report(raw, ifs).at("x=1"), 0.01);
    // the averaged value sits at the mean of the raw branches
    const auto &rs = raw.x_seams[0];
    for (std::size_t i = 0; i < rs.positions.size(); ++i) {
        const std::size_t col = 32, row = i;
        if (std::abs(rs.positions[i] - 0.5) < 1e-12)
            continue; // interior corner uses the four-way mean
        EXPECT_NEAR(avg.value(col, row), 0.5 * (rs.lower[i] + rs.upper[i]), 1e-14);
    }
    for (const auto &[seam, jump] : seam_jump_report(avg, ifs))
        EXPECT_EQ(jump, 0.0) << seam;
}

TEST(Rb2Apply, InteriorCornerIsFourWayMean) {
    const auto g = bumped_grid();
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.3, 2, 2));
    const auto f = bilinear_interpolant(g, 8, 8);
    const auto avg = rb2_apply(ifs, f, SeamPolicy::AverageG);
    const Rect dom = g.domain();
    // corner (x_1, y_1) is the image of each cell's own domain corner
    const double sum = ifs.apply(0, 0, dom.x1, dom.y1, f(dom.x1, dom.y1)) +
                       ifs.apply(1, 0, dom.x0, dom.y1, f(dom.x0, dom.y1)) +
                       ifs.apply(0, 1, dom.x1, dom.y0, f(dom.x1, dom.y0)) +
                       ifs.apply(1, 1, dom.x0, dom.y0, f(dom.x0, dom.y0));
    EXPECT_NEAR(avg.value(4, 4), 0.25 * sum, 1e-15);
}

TEST(Rb2Apply, CollinearPolicyRejectsBumpedGrid) {
    const auto g = bumped_grid();
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.3, 2, 2));
    EXPECT_THROW(rb2_apply(ifs, bilinear_interpolant(g, 16, 16), SeamPolicy::CollinearBoundary), PolicyError);
}

TEST(Rb2Apply, LatticeMustCoverTheGrid) {
    const auto ifs = build_ifs2d(xy_grid(), ScalingMatrix::broadcast(0.3, 2, 2));
    const auto f = GridFunction2D::sample({0.0, 2.0, 0.0, 1.0}, 8, 8, [](double, double) { return 0.0; });
    EXPECT_THROW(rb2_apply(ifs, f, SeamPolicy::AverageG), DomainError);
}

TEST(FixedPoint2D, XyZeroAlphaOneIteration) {
    const auto g = xy_grid();
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.0, 2, 2));
    FixedPointConfig cfg;
    cfg.resolution = 64;
    for (auto policy : {SeamPolicy::RawF, SeamPolicy::AverageG, SeamPolicy::CollinearBoundary}) {
        const auto fp = fixed_point_2d(ifs, policy, cfg);
        EXPECT_EQ(fp.iterations, 1u) << to_string(policy);
        for (std::size_t i = 0; i <= 64; ++i)
            for (std::size_t j = 0; j <= 64; ++j)
                EXPECT_NEAR(fp.surface.value(i, j), fp.surface.x(i) * fp.surface.y(j), 1e-15);
    }
}

TEST(FixedPoint2D, CollinearContractsAtAlpha) {
    const auto g = xy_grid(0.7);
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.3, 2, 2));
    FixedPointConfig cfg;
    cfg.tol = 1e-12;
    cfg.resolution = 128;
    const auto fp = fixed_point_2d(ifs, SeamPolicy::CollinearBoundary, cfg);
    EXPECT_LE(knot_residual(fp.surface, g), cfg.tol);
    for (std::size_t k = 1; k < fp.step_norms.size(); ++k)
        if (fp.step_norms[k - 1] > 1e-13)
            EXPECT_LE(fp.step_norms[k] / fp.step_norms[k - 1], 0.3 + 1e-6) << "step " << k;
}

TEST(FixedPoint2D, AverageConvergesToContinuousSurface) {
    const auto g = bumped_grid();
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.3, 2, 2));
    FixedPointConfig cfg;
    cfg.resolution = 128;
    const auto fp = fixed_point_2d(ifs, SeamPolicy::AverageG, cfg);
    EXPECT_LE(max_jump(seam_jump_report(fp.surface, ifs)), 1e-9);
    EXPECT_LE(knot_residual(fp.surface, g), cfg.tol);
}

TEST(FixedPoint2D, NonConvergenceCarriesResidual) {
    const auto ifs = build_ifs2d(xy_grid(0.9), ScalingMatrix::broadcast(0.9, 2, 2));
    FixedPointConfig cfg;
    cfg.tol = 1e-14;
    cfg.max_iter = 3;
    cfg.resolution = 16;
    try {
        fixed_point_2d(ifs, SeamPolicy::CollinearBoundary, cfg);
        FAIL() << "expected NonConvergenceError";
    } catch (const NonConvergenceError &e) {
        EXPECT_EQ(e.iterations(), 3u);
        EXPECT_GT(e.last_residual(), cfg.tol);
    }
}

TEST(FixedPoint2D, ResolutionBelowCellCount) {
    const GridData2D g({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0}, std::vector<double>(8, 0.0));
    FixedPointConfig cfg;
    cfg.resolution = 2;
    EXPECT_THROW(fixed_point_2d(build_ifs2d(g, ScalingMatrix::broadcast(0.1, 3, 1)), SeamPolicy::AverageG, cfg),
                 DomainError);
}

TEST(SeamJumpReport, NeedsRetainedBranches) {
    const auto g = xy_grid();
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.3, 2, 2));
    EXPECT_THROW(seam_jump_report(bilinear_interpolant(g, 8, 8), ifs), DomainError);
}

TEST(SeamJumpReport, KeysNameEverySeam) {
    const GridData2D g({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 2.0}, std::vector<double>(12, 1.0));
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.2, 3, 2));
    const auto report = seam_jump_report(rb2_apply(ifs, bilinear_interpolant(g, 12, 12), SeamPolicy::RawF), ifs);
    std::vector<std::string> keys;
    for (const auto &[k, v] : report)
        keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"x=1", "x=2", "y=1"}));
}

TEST(Integrate2D, XyZeroAlphaIsQuarter) {
    const auto ifs = build_ifs2d(xy_grid(), ScalingMatrix::broadcast(0.0, 2, 2));
    EXPECT_NEAR(integrate2d_closed_form(ifs), 0.25, 1e-12);
    FixedPointConfig cfg;
    cfg.resolution = 256;
    EXPECT_NEAR(integrate2d_quadrature(ifs, SeamPolicy::AverageG, cfg), 0.25, 1e-6);
}

TEST(Integrate2D, ConstantIsValueTimesArea) {
    const GridData2D g({-1.0, 0.5, 2.0}, {0.0, 0.25, 1.5}, std::vector<double>(9, 2.5));
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.0, 2, 2));
    EXPECT_NEAR(integrate2d_closed_form(ifs), 2.5 * 3.0 * 1.5, 1e-12);
}

TEST(Integrate2D, UnitConstantQuadratureIsOne) {
    const GridData2D g({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, std::vector<double>(9, 1.0));
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.4, 2, 2));
    FixedPointConfig cfg;
    cfg.resolution = 32;
    EXPECT_NEAR(integrate2d_quadrature(ifs, SeamPolicy::AverageG, cfg), 1.0, 1e-12);
    EXPECT_NEAR(integrate2d_closed_form(ifs), 1.0, 1e-12);
}

TEST(Integrate2D, ClosedFormNeedsWellDefinedPolicy) {
    const auto ifs = build_ifs2d(bumped_grid(), ScalingMatrix::broadcast(0.3, 2, 2));
    EXPECT_THROW(integrate2d_closed_form(ifs, SeamPolicy::RawF), PolicyError);
    EXPECT_THROW(integrate2d_closed_form(ifs, SeamPolicy::CollinearBoundary), PolicyError);
    EXPECT_NO_THROW(integrate2d_closed_form(ifs, SeamPolicy::AverageG));
}

TEST(Integrate2D, CollinearClosedFormMatchesQuadrature) {
    const auto g = xy_grid(0.6);
    const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.2, 2, 2));
    FixedPointConfig cfg;
    cfg.resolution = 256;
    EXPECT_NEAR(integrate2d_closed_form(ifs, SeamPolicy::CollinearBoundary),
                integrate2d_quadrature(ifs, SeamPolicy::CollinearBoundary, cfg), 1e-3);
}

TEST(Fis2dProperty, ContractionUnderEveryPolicy) {
    gen::Source src(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = collinear_grid(src, src.index(2, 3), src.index(2, 3));
        std::vector<double> as(g.x_intervals() * g.y_intervals());
        for (auto &a : as)
            a = src.uniform(-0.9, 0.9);
        const ScalingMatrix alphas(g.x_intervals(), g.y_intervals(), as);
        const auto ifs = build_ifs2d(g, alphas);
        const auto u = bilinear_interpolant(g, 24, 24);
        auto v = u;
        // perturbation vanishing on the domain boundary
        for (std::size_t i = 1; i < 24; ++i)
            for (std::size_t j = 1; j < 24; ++j)
                v.samples()[i * 25 + j] += src.uniform(-1, 1);
        const double bound = ifs.max_abs_alpha() * sup_diff(u, v);
        for (auto policy : {SeamPolicy::RawF, SeamPolicy::AverageG, SeamPolicy::CollinearBoundary})
            EXPECT_LE(sup_diff(rb2_apply(ifs, u, policy), rb2_apply(ifs, v, policy)), bound * (1 + 1e-12) + 1e-14)
                << to_string(policy);
    }
}

TEST(Fis2dProperty, RawAndCollinearAgreeOnCollinearData) {
    gen::Source src(32);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = collinear_grid(src, src.index(2, 4), src.index(2, 4));
        const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(src.uniform(-0.8, 0.8), g.x_intervals(),
                                                                 g.y_intervals()));
        ASSERT_TRUE(ifs.collinear());
        const auto f = bilinear_interpolant(g, 40, 40);
        const auto raw = rb2_apply(ifs, f, SeamPolicy::RawF);
        const auto col = rb2_apply(ifs, f, SeamPolicy::CollinearBoundary);
        EXPECT_EQ(raw.samples().size(), col.samples().size());
        EXPECT_TRUE(std::equal(raw.samples().begin(), raw.samples().end(), col.samples().begin()));
        const double scale = 1.0 + g.max_abs_value();
        EXPECT_LE(max_jump(seam_jump_report(raw, ifs)), 1e-9 * scale);
    }
}

TEST(Fis2dProperty, ZeroAlphaCollapsesToBilinearInterpolant) {
    gen::Source src(33);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = src.grid(src.index(1, 3), src.index(1, 3));
        const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(0.0, g.x_intervals(), g.y_intervals()));
        FixedPointConfig cfg;
        cfg.resolution = 30;
        const auto fp = fixed_point_2d(ifs, SeamPolicy::AverageG, cfg);
        const auto ref = bilinear_interpolant(g, 30, 30);
        const double scale = 1.0 + g.max_abs_value();
        const auto xn = detail::axis_nodes(g.xs(), g.xs().front(), g.xs().back(), 30);
        const auto yn = detail::axis_nodes(g.ys(), g.ys().front(), g.ys().back(), 30);
        for (std::size_t i = 0; i <= 30; ++i)
            for (std::size_t j = 0; j <= 30; ++j) {
                const double x = fp.surface.x(i), y = fp.surface.y(j);
                const std::size_t c = xn[i].cell, d = yn[j].cell;
                const double u = (x - g.xs()[c]) / (g.xs()[c + 1] - g.xs()[c]);
                const double v = (y - g.ys()[d]) / (g.ys()[d + 1] - g.ys()[d]);
                const double exact = (1 - u) * (1 - v) * g.z(c, d) + (1 - u) * v * g.z(c, d + 1) +
                                     u * (1 - v) * g.z(c + 1, d) + u * v * g.z(c + 1, d + 1);
                EXPECT_NEAR(fp.surface.value(i, j), exact, 1e-12 * scale);
                EXPECT_NEAR(ref.value(i, j), exact, 1e-12 * scale);
            }
    }
}

TEST(Fis2dProperty, CornerInterpolation) {
    gen::Source src(35);
    for (int trial = 0; trial < 6; ++trial) {
        // knots on lattice nodes so the residual is read without interpolation
        const double c00 = src.uniform(-1, 1), c01 = src.uniform(-1, 1), c10 = src.uniform(-1, 1),
                     c11 = src.uniform(-1, 1);
        const auto edge = [](double lo, double hi, double w) { return (1 - w) * lo + w * hi; };
        const GridData2D g({0.0, 0.25, 1.0}, {0.0, 0.75, 1.0},
                           {c00, edge(c00, c01, 0.75), c01, edge(c00, c10, 0.25), src.uniform(-1, 1),
                            edge(c01, c11, 0.25), c10, edge(c10, c11, 0.75), c11});
        const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(src.uniform(-0.6, 0.6), 2, 2));
        ASSERT_TRUE(ifs.collinear());
        FixedPointConfig cfg;
        cfg.resolution = 64;
        for (auto policy : {SeamPolicy::AverageG, SeamPolicy::CollinearBoundary})
            EXPECT_LE(knot_residual(fixed_point_2d(ifs, policy, cfg).surface, g), cfg.tol) << to_string(policy);
    }
}

TEST(Fis2dProperty, AveragingIgnoresBranchOrder) {
    gen::Source src(36);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = src.grid(2, 2);
        const auto ifs = build_ifs2d(g, ScalingMatrix::broadcast(src.uniform(-0.7, 0.7), 2, 2));
        const auto f = bilinear_interpolant(g, 20, 20);
        const auto raw = rb2_apply(ifs, f, SeamPolicy::RawF);
        const auto avg = rb2_apply(ifs, f, SeamPolicy::AverageG);
        const auto xn = detail::axis_nodes(g.xs(), g.xs().front(), g.xs().back(), 20);
        for (std::size_t i = 0; i <= 20; ++i) {
            if (xn[i].seam < 0)
                continue;
            const auto &tr = raw.x_seams[0];
            const auto yn = detail::axis_nodes(g.ys(), g.ys().front(), g.ys().back(), 20);
            for (std::size_t j = 0; j <= 20; ++j) {
                if (yn[j].seam >= 0)
                    continue;
                EXPECT_EQ(avg.value(i, j), 0.5 * (tr.lower[j] + tr.upper[j]));
                EXPECT_EQ(avg.value(i, j), 0.5 * (tr.upper[j] + tr.lower[j]));
            }
        }
    }
}
