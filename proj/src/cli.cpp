#include "fif/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <sstream>

#include "fif/attractor.hpp"
#include "fif/error.hpp"
#include "fif/fif1d.hpp"
#include "fif/fis2d.hpp"
#include "fif/io.hpp"

namespace fif::cli {

namespace {

struct Options {
    std::string data, grid, ifs, alpha, out;
    std::string format = "csv";
    std::string method;
    std::string policy = "average";
    std::string weighting = "uniform";
    std::string pgm = "binary";
    double tol = 1e-10;
    std::size_t max_iter = 200;
    std::size_t resolution = 0; // 0: per-command default
    std::uint64_t seed = 0;
    std::size_t iterations = 100000;
    std::size_t burn_in = 100;
    std::size_t chains = 1;
    std::size_t depth = 12;
    std::size_t width = 512, height = 512;
    std::size_t cell = 1;
    double delta = 0.1;
};

void add_iteration_flags(CLI::App *cmd, Options &o) {
    cmd->add_option("--tol", o.tol, "Sup-norm stopping threshold of the fixed-point iteration (default 1e-10)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", o.max_iter, "Iteration cap before reporting non-convergence (default 200)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--resolution", o.resolution,
                    "Grid intervals per axis (default 4096 for 1D commands, 512 i.e. a 513^2 lattice for 2D)")
        ->check(CLI::PositiveNumber);
}

void add_out(CLI::App *cmd, Options &o) {
    cmd->add_option("--out", o.out, "Output file, written atomically (default: standard output)");
}

void add_surface_source(CLI::App *cmd, Options &o) {
    cmd->add_option("--ifs", o.ifs, "Surface IFS JSON written by fis2d-build");
    cmd->add_option("--grid", o.grid, "Grid data (JSON {xs,ys,zs} or CSV x,y,z), used with --alpha");
    cmd->add_option("--alpha", o.alpha,
                    "Cell scaling: one value broadcast to every cell, a row-major comma list, or a file");
}

void add_policy(CLI::App *cmd, Options &o) {
    cmd->add_option("--policy", o.policy, "Seam treatment: raw, average or collinear (default average)")
        ->check(CLI::IsMember({"raw", "average", "collinear"}));
}

struct Cli {
    CLI::App app{"Fractal interpolation: construct, evaluate, integrate and render affine FIFs and FISs", "fifctl"};
    Options o;
    CLI::App *construct, *eval, *integrate, *attractor, *compare, *violate;
    CLI::App *fis_build, *fis_eval, *fis_check, *fis_integrate;

    Cli() {
        app.require_subcommand(1);

        construct = app.add_subcommand("construct", "Build a 1D IFS from data and scaling factors");
        construct->add_option("--data", o.data, "Data set CSV with header t,x")->required();
        construct->add_option("--alpha", o.alpha, "Scaling: one value broadcast, a comma list, or a file")->required();
        add_out(construct, o);

        eval = app.add_subcommand("eval", "Evaluate the FIF as the fixed point of its operator");
        eval->add_option("--ifs", o.ifs, "IFS JSON")->required();
        eval->add_option("--format", o.format, "csv (t,f rows) or json")->check(CLI::IsMember({"csv", "json"}));
        add_iteration_flags(eval, o);
        add_out(eval, o);

        integrate = app.add_subcommand("integrate", "Integrate the FIF over its interval");
        integrate->add_option("--ifs", o.ifs, "IFS JSON")->required();
        integrate->add_option("--method", o.method, "closed, quadrature or both (default both)")
            ->check(CLI::IsMember({"closed", "quadrature", "both"}));
        add_iteration_flags(integrate, o);
        add_out(integrate, o);

        attractor = app.add_subcommand("attractor", "Render the attractor as points or a PGM raster");
        attractor->add_option("--ifs", o.ifs, "IFS JSON")->required();
        attractor->add_option("--method", o.method, "chaos (default) or deterministic")
            ->check(CLI::IsMember({"chaos", "deterministic"}));
        attractor->add_option("--seed", o.seed, "Chaos game seed (default 0)");
        attractor->add_option("--iterations", o.iterations, "Chaos game steps per chain, burn-in included (default 100000)")
            ->check(CLI::PositiveNumber);
        attractor->add_option("--burn-in", o.burn_in, "Chaos game steps discarded per chain (default 100)");
        attractor->add_option("--chains", o.chains, "Independent chaos game chains (default 1)")
            ->check(CLI::PositiveNumber);
        attractor->add_option("--weighting", o.weighting, "Map selection: uniform or contraction")
            ->check(CLI::IsMember({"uniform", "contraction"}));
        attractor->add_option("--depth", o.depth, "Hutchinson steps for the deterministic method (default 12)");
        attractor->add_option("--format", o.format, "csv (t,x rows) or pgm")->check(CLI::IsMember({"csv", "pgm"}));
        attractor->add_option("--width", o.width, "Raster width (default 512)")->check(CLI::PositiveNumber);
        attractor->add_option("--height", o.height, "Raster height (default 512)")->check(CLI::PositiveNumber);
        attractor->add_option("--pgm", o.pgm, "PGM encoding: binary (P5, default) or ascii (P2)")
            ->check(CLI::IsMember({"binary", "ascii"}));
        add_out(attractor, o);

        compare = app.add_subcommand("compare", "Compare the FIF with the piecewise-linear interpolant");
        compare->add_option("--ifs", o.ifs, "IFS JSON")->required();
        compare->add_option("--data", o.data, "Data for the classical interpolant (default: the IFS data)");
        add_iteration_flags(compare, o);
        add_out(compare, o);

        violate = app.add_subcommand("violate", "Break one endpoint condition and report the consequences");
        violate->add_option("--ifs", o.ifs, "IFS JSON")->required();
        violate->add_option("--cell", o.cell, "Map index n, 1-based (default 1)")->check(CLI::PositiveNumber);
        violate->add_option("--delta", o.delta, "Offset added to q_n0 (default 0.1)");
        add_iteration_flags(violate, o);
        add_out(violate, o);

        fis_build = app.add_subcommand("fis2d-build", "Build a surface IFS from grid data");
        fis_build->add_option("--grid", o.grid, "Grid data (JSON {xs,ys,zs} or CSV x,y,z)")->required();
        fis_build->add_option("--alpha", o.alpha, "Cell scaling: broadcast value, row-major list, or file")
            ->required();
        add_out(fis_build, o);

        fis_eval = app.add_subcommand("fis2d-eval", "Evaluate the surface on a lattice");
        add_surface_source(fis_eval, o);
        add_policy(fis_eval, o);
        fis_eval->add_option("--format", o.format, "csv (x,y,f rows) or pgm heightmap")
            ->check(CLI::IsMember({"csv", "pgm"}));
        fis_eval->add_option("--pgm", o.pgm, "PGM encoding: binary (P5, default) or ascii (P2)")
            ->check(CLI::IsMember({"binary", "ascii"}));
        add_iteration_flags(fis_eval, o);
        add_out(fis_eval, o);

        fis_check = app.add_subcommand("fis2d-check", "One raw operator step: collinearity and seam-jump table");
        add_surface_source(fis_check, o);
        fis_check->add_option("--resolution", o.resolution, "Lattice intervals per axis (default 512)")
            ->check(CLI::PositiveNumber);
        add_out(fis_check, o);

        fis_integrate = app.add_subcommand("fis2d-integrate", "Integrate the surface over its rectangle");
        add_surface_source(fis_integrate, o);
        add_policy(fis_integrate, o);
        fis_integrate->add_option("--method", o.method, "closed, quadrature or both (default both)")
            ->check(CLI::IsMember({"closed", "quadrature", "both"}));
        add_iteration_flags(fis_integrate, o);
        add_out(fis_integrate, o);
    }
};

std::string alpha_text(const std::string &arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec))
        return io::read_file(arg);
    return arg;
}

std::vector<double> parse_alpha_values(const std::string &arg) {
    const std::string text = alpha_text(arg);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 1, "[") == 0) {
        const auto j = nlohmann::json::parse(text, nullptr, false);
        if (!j.is_discarded() && j.is_array() && !j.empty() && j.front().is_array()) {
            std::vector<double> flat;
            for (const auto &row : j)
                for (const auto &v : row) {
                    if (!v.is_number())
                        throw ParseError("alpha matrix must contain numbers", 0, 0);
                    flat.push_back(v.get<double>());
                }
            return flat;
        }
    }
    return io::parse_number_list(text);
}

ScalingVector alphas_for(const DataSet1D &data, const std::string &arg) {
    auto v = parse_alpha_values(arg);
    if (v.size() == 1)
        return ScalingVector::broadcast(v.front(), data.intervals());
    return ScalingVector(std::move(v));
}

ScalingMatrix alphas_for(const GridData2D &grid, const std::string &arg) {
    auto v = parse_alpha_values(arg);
    if (v.size() == 1)
        return ScalingMatrix::broadcast(v.front(), grid.x_intervals(), grid.y_intervals());
    return ScalingMatrix(grid.x_intervals(), grid.y_intervals(), std::move(v));
}

SeamPolicy policy_from(const std::string &name) {
    if (name == "raw")
        return SeamPolicy::RawF;
    if (name == "collinear")
        return SeamPolicy::CollinearBoundary;
    return SeamPolicy::AverageG;
}

FixedPointConfig config_from(const Options &o, std::size_t default_resolution) {
    FixedPointConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.resolution = o.resolution == 0 ? default_resolution : o.resolution;
    cfg.validate();
    return cfg;
}

class Runner {
  public:
    Runner(const Options &o, std::ostream &out) : o_(o), out_(out) {}

    void emit(const std::string &content) const {
        if (o_.out.empty())
            out_ << content;
        else
            io::write_file_atomic(o_.out, content);
    }

    Ifs1D load_ifs() const { return io::parse_ifs1d(io::read_file(o_.ifs)); }

    Ifs2D load_surface() const {
        if (!o_.ifs.empty()) {
            if (!o_.grid.empty() || !o_.alpha.empty())
                throw Error("give either --ifs or --grid with --alpha, not both");
            return io::parse_ifs2d(io::read_file(o_.ifs));
        }
        if (o_.grid.empty() || o_.alpha.empty())
            throw Error("a surface command needs --ifs, or --grid together with --alpha");
        const auto grid = io::parse_grid2d(io::read_file(o_.grid));
        return build_ifs2d(grid, alphas_for(grid, o_.alpha));
    }

    void construct() const {
        const auto data = io::parse_dataset1d(io::read_file(o_.data));
        const auto ifs = build_ifs(data, alphas_for(data, o_.alpha));
        const auto check = validate_ifs(ifs);
        if (!check.pass)
            throw Error("constructed IFS failed validation (max residual " + io::format_double(check.max_residual) +
                        ")");
        emit(io::serialize_ifs1d(ifs));
    }

    void eval() const {
        const auto ifs = load_ifs();
        const auto fp = fixed_point(ifs, config_from(o_, 4096));
        if (o_.format == "json") {
            std::vector<double> t;
            for (std::size_t i = 0; i <= fp.f.intervals(); ++i)
                t.push_back(fp.f.abscissa(i));
            io::Report r{{"t", t},
                         {"f", std::vector<double>(fp.f.samples().begin(), fp.f.samples().end())},
                         {"iterations", fp.iterations},
                         {"knot_residual", knot_residual(fp.f, ifs.data())}};
            emit(io::serialize_report(r));
        } else {
            emit(io::grid_function_csv(fp.f));
        }
    }

    void integrate() const {
        const auto ifs = load_ifs();
        const std::string method = o_.method.empty() ? "both" : o_.method;
        io::Report r = io::Report::object();
        double closed = 0.0, quad = 0.0;
        if (method != "quadrature")
            r["closed_form"] = closed = integrate_closed_form(ifs);
        if (method != "closed") {
            const auto cfg = config_from(o_, 4096);
            r["quadrature"] = quad = integrate_quadrature(ifs, cfg);
            r["resolution"] = cfg.resolution;
        }
        if (method == "both")
            r["abs_diff"] = std::abs(closed - quad);
        emit(io::serialize_report(r));
    }

    void attractor() const {
        const auto ifs = load_ifs();
        PointSet pts;
        if (o_.method == "deterministic") {
            pts = deterministic_attractor(ifs, data_points(ifs), o_.depth);
        } else {
            ChaosGameConfig cfg;
            cfg.seed = o_.seed;
            cfg.iterations = o_.iterations;
            cfg.burn_in = o_.burn_in;
            cfg.chains = o_.chains;
            cfg.weighting = o_.weighting == "contraction" ? MapWeighting::DomainContraction : MapWeighting::Uniform;
            pts = chaos_game(ifs, cfg);
        }
        if (o_.format == "pgm")
            emit(io::raster_pgm(rasterize(pts, o_.width, o_.height), encoding()));
        else
            emit(io::point_set_csv(pts));
    }

    void compare() const {
        const auto ifs = load_ifs();
        const auto data = o_.data.empty() ? ifs.data() : io::parse_dataset1d(io::read_file(o_.data));
        emit(io::serialize_report(io::to_report(compare_with_classical(data, ifs, config_from(o_, 4096)))));
    }

    void violate() const {
        const auto ifs = load_ifs();
        if (o_.cell > ifs.size())
            throw IndexError("--cell " + std::to_string(o_.cell) + " exceeds the " + std::to_string(ifs.size()) +
                             " maps");
        const auto r = endpoint_violation_experiment(ifs, o_.cell - 1, o_.delta, config_from(o_, 4096));
        emit(io::serialize_report(io::to_report(r)));
    }

    void fis_build() const {
        const auto grid = io::parse_grid2d(io::read_file(o_.grid));
        emit(io::serialize_ifs2d(build_ifs2d(grid, alphas_for(grid, o_.alpha))));
    }

    void fis_eval() const {
        const auto ifs = load_surface();
        const auto fp = fixed_point_2d(ifs, checked_policy(ifs), config_from(o_, 512));
        if (o_.format == "pgm")
            emit(io::heightmap_pgm(fp.surface, encoding()));
        else
            emit(io::surface_csv(fp.surface));
    }

    void fis_check() const {
        const auto ifs = load_surface();
        const std::size_t res = o_.resolution == 0 ? 512 : o_.resolution;
        const auto start = bilinear_interpolant(ifs.grid(), res, res);
        const auto image = rb2_apply(ifs, start, SeamPolicy::RawF);
        io::Report r{{"collinearity", io::to_report(ifs.collinearity())},
                     {"seams", io::to_report(seam_jump_report(image, ifs))}};
        emit(io::serialize_report(r));
    }

    void fis_integrate() const {
        const auto ifs = load_surface();
        const auto policy = checked_policy(ifs);
        const std::string method = o_.method.empty() ? "both" : o_.method;
        io::Report r = io::Report::object();
        double closed = 0.0, quad = 0.0;
        if (method != "quadrature")
            r["closed_form"] = closed = integrate2d_closed_form(ifs, policy);
        if (method != "closed") {
            const auto cfg = config_from(o_, 512);
            r["quadrature"] = quad = integrate2d_quadrature(ifs, policy, cfg);
            r["resolution"] = cfg.resolution;
        }
        if (method == "both")
            r["abs_diff"] = std::abs(closed - quad);
        r["policy"] = to_string(policy);
        emit(io::serialize_report(r));
    }

  private:
    io::PgmEncoding encoding() const { return o_.pgm == "ascii" ? io::PgmEncoding::Ascii : io::PgmEncoding::Binary; }

    SeamPolicy checked_policy(const Ifs2D &ifs) const {
        const auto policy = policy_from(o_.policy);
        if (policy == SeamPolicy::CollinearBoundary && !ifs.collinear())
            throw PolicyError("collinear policy rejected: boundary data are not collinear\n" +
                              io::serialize_report(io::to_report(ifs.collinearity())));
        return policy;
    }

    const Options &o_;
    std::ostream &out_;
};

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Cli cli;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        cli.app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << cli.app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << cli.app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << cli.app.help();
        return kExitInvalid;
    }

    const Runner runner(cli.o, out);
    try {
        if (cli.construct->parsed())
            runner.construct();
        else if (cli.eval->parsed())
            runner.eval();
        else if (cli.integrate->parsed())
            runner.integrate();
        else if (cli.attractor->parsed())
            runner.attractor();
        else if (cli.compare->parsed())
            runner.compare();
        else if (cli.violate->parsed())
            runner.violate();
        else if (cli.fis_build->parsed())
            runner.fis_build();
        else if (cli.fis_eval->parsed())
            runner.fis_eval();
        else if (cli.fis_check->parsed())
            runner.fis_check();
        else if (cli.fis_integrate->parsed())
            runner.fis_integrate();
    } catch (const NonConvergenceError &e) {
        err << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}

std::string flags_reference() {
    Cli cli;
    std::ostringstream ss;
    ss << cli.app.help("", CLI::AppFormatMode::All);
    return ss.str();
}

} // namespace fif::cli
