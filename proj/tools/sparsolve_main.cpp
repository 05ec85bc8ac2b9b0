// Command line front end: mixed volumes, resultant matrix construction, and
// the two solve pipelines, with text or machine-readable JSON output.
//
// Exit codes: 0 ok, 2 bad input or usage, 3 degenerate or singular system,
// 4 numeric failure.

#include "sparsolve/root_solver.hpp"
#include "sparsolve/system_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace sparsolve;

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string pipeline = "u";  // "u" or "hide"
    std::string hide_var;
    std::uint64_t seed = kDefaultLiftSeed;
    double pivot_tol = kDefaultPivotRel;
    double cond_route = kConditionRouteThreshold;
    double accept_tol = 1e-6;
    double reject_tol = 1e-2;
    std::string format = "text";
    std::string matrix_out;
    bool pipeline_given = false;
    bool hide_var_given = false;
};

PolySystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, 0, "cannot open input file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

std::size_t hidden_index(const PolySystem& sys, const RunConfig& cfg) {
    for (std::size_t i = 0; i < sys.var_names.size(); ++i)
        if (sys.var_names[i] == cfg.hide_var) return i;
    throw std::invalid_argument("--hide-var '" + cfg.hide_var +
                                "' does not name a variable of the input system");
}

// Overconstrained view of the input: n+1 polynomials pass through unchanged,
// square systems are augmented according to the pipeline flags.
AugmentedSystem augment(const PolySystem& sys, const RunConfig& cfg) {
    if (sys.polys.size() == sys.nvars() + 1) {
        if (cfg.pipeline_given || cfg.hide_var_given)
            throw std::invalid_argument(
                "input already has n+1 polynomials; pipeline flags apply to "
                "well-constrained systems only");
        return wrap_plain(sys);
    }
    if (sys.polys.size() != sys.nvars())
        throw std::invalid_argument("expected n or n+1 polynomials in n variables, got " +
                                    std::to_string(sys.polys.size()) + " in " +
                                    std::to_string(sys.nvars()));
    if (cfg.pipeline == "hide") return hide_variable(sys, hidden_index(sys, cfg));
    Rng rng(cfg.seed ^ 0x5eedf00dULL);
    return add_u_polynomial(sys, rng);
}

std::vector<std::vector<ExponentVec>> augmented_supports(const AugmentedSystem& sys) {
    std::vector<std::vector<ExponentVec>> s;
    for (const auto& f : sys.polys) s.push_back(f.support());
    return s;
}

json complex_json(const Cplx& z) { return json::array({z.real(), z.imag()}); }

json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

std::string fmt_double(double x, int prec = 12) {
    std::ostringstream os;
    os << std::setprecision(prec) << x;
    return os.str();
}

std::string fmt_sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << x;
    return os.str();
}

std::string fmt_complex(const Cplx& z) {
    std::ostringstream os;
    os << std::setprecision(12) << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string poly_name(const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : "f" + std::to_string(i + 1);
}

// ---------------------------------------------------------------------------
// mixedvol

int cmd_mixedvol(const RunConfig& cfg, std::ostream& out) {
    const PolySystem sys = load_system(cfg.input_path);
    const bool square = sys.polys.size() == sys.nvars();
    const bool over = sys.polys.size() == sys.nvars() + 1;
    if (!square && !over)
        throw std::invalid_argument("expected n or n+1 polynomials in n variables, got " +
                                    std::to_string(sys.polys.size()) + " in " +
                                    std::to_string(sys.nvars()));

    json j;
    j["command"] = "mixedvol";
    j["variables"] = sys.var_names;

    std::optional<std::int64_t> mv, smv, bezout;
    if (square) {
        std::vector<std::vector<ExponentVec>> supports;
        for (const auto& f : sys.polys) supports.push_back(f.support());
        mv = mixed_volume(supports, cfg.seed);
        smv = stable_mixed_volume(supports, cfg.seed);
        std::int64_t b = 1;
        for (const auto& f : sys.polys) b *= f.cleared_degree();
        bezout = b;
        j["mixed_volume"] = *mv;
        j["stable_mixed_volume"] = *smv;
        j["bezout_bound"] = *bezout;
    }

    // Per-polynomial resultant degrees for the overconstrained view: either
    // the input already has n+1 polynomials or a pipeline flag was requested.
    std::vector<std::string> aug_names;
    std::vector<std::int64_t> mv_minus;
    std::int64_t degree = 0;
    if (over || cfg.pipeline_given || cfg.hide_var_given) {
        const AugmentedSystem aug = augment(sys, cfg);
        const auto supports = augmented_supports(aug);
        for (std::size_t i = 0; i < supports.size(); ++i) {
            std::vector<std::vector<ExponentVec>> rest;
            for (std::size_t k = 0; k < supports.size(); ++k)
                if (k != i) rest.push_back(supports[k]);
            mv_minus.push_back(mixed_volume(rest, cfg.seed));
            degree += mv_minus.back();
            aug_names.push_back(poly_name(aug.poly_names, i));
        }
        j["mv_minus"] = mv_minus;
        j["mv_minus_polys"] = aug_names;
        j["resultant_degree"] = degree;
        if (aug.kind == AugmentedSystem::Kind::hidden_variable)
            j["hidden_variable"] = aug.hidden_name;
        if (aug.kind == AugmentedSystem::Kind::u_form) j["adjoined_form"] = "u";
    }

    if (cfg.format == "json") {
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "variables: " << sys.nvars() << "   polynomials: " << sys.polys.size() << "\n";
    if (square) {
        out << "mixed volume: " << *mv << "\n";
        out << "stable mixed volume: " << *smv << "\n";
        out << "bezout bound: " << *bezout << "\n";
    }
    if (!mv_minus.empty()) {
        out << "resultant degree per polynomial (n-fold mixed volume without it):\n";
        for (std::size_t i = 0; i < mv_minus.size(); ++i)
            out << "  " << aug_names[i] << ": " << mv_minus[i] << "\n";
        out << "total resultant degree: " << degree << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// matrix

int cmd_matrix(const RunConfig& cfg, std::ostream& out) {
    const PolySystem src = load_system(cfg.input_path);
    const AugmentedSystem sys = augment(src, cfg);
    const ResultantMatrix m = build_matrix(sys, cfg.seed);
    const DegreeReport deg = degree_report(m, cfg.seed);
    const PartitionedMatrix part = partition(m, sys.kind, cfg.pivot_tol);

    json j;
    j["command"] = "matrix";
    j["dimension"] = m.size();
    j["pipeline"] = sys.kind == AugmentedSystem::Kind::u_form
                        ? "u"
                        : (sys.kind == AugmentedSystem::Kind::hidden_variable
                               ? "hide:" + sys.hidden_name
                               : "plain");
    json rows = json::array();
    for (std::size_t i = 0; i < deg.rows_per_poly.size(); ++i) {
        json r;
        r["poly"] = poly_name(sys.poly_names, i);
        r["rows"] = deg.rows_per_poly[i];
        r["mv_minus"] = deg.mv_minus[i];
        rows.push_back(r);
    }
    j["rows_per_poly"] = rows;
    j["resultant_degree"] = deg.total_degree;
    j["max_entry_degree"] = m.max_entry_degree();
    j["hidden_bearing_columns"] = m.hidden_bearing_columns();
    j["partition"] = {{"block_dimension", part.k},
                      {"pencil_dimension", part.pencil},
                      {"degree", part.degree},
                      {"kappa11", finite_or_null(part.kappa11)}};

    if (!cfg.matrix_out.empty()) {
        std::ofstream mo(cfg.matrix_out);
        if (!mo)
            throw std::invalid_argument("cannot open matrix output file '" + cfg.matrix_out +
                                        "'");
        write_matrix_text(m, mo);
        j["matrix_file"] = cfg.matrix_out;
    }

    if (cfg.format == "json") {
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "pipeline: " << j["pipeline"].get<std::string>() << "\n";
    out << "dimension: " << m.size() << "\n";
    out << "rows per polynomial (>= n-fold mixed volume without it):\n";
    for (std::size_t i = 0; i < deg.rows_per_poly.size(); ++i)
        out << "  " << poly_name(sys.poly_names, i) << ": " << deg.rows_per_poly[i]
            << " >= " << deg.mv_minus[i] << "\n";
    out << "total resultant degree: " << deg.total_degree << "\n";
    out << "max entry degree in hidden variable: " << m.max_entry_degree() << "\n";
    out << "hidden-bearing columns: " << m.hidden_bearing_columns() << "\n";
    out << "partition: constant block " << part.k << ", matrix polynomial block "
        << part.pencil << " of degree " << part.degree
        << ", kappa(M11) = " << fmt_sci(part.kappa11) << "\n";
    if (!cfg.matrix_out.empty()) out << "matrix written to: " << cfg.matrix_out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// solve

json root_json(const RootCandidate& c, const std::vector<std::string>& var_names,
               bool u_mode) {
    json r;
    r["status"] = status_name(c.status);
    json coords = json::array();
    for (const Cplx& z : c.coords) coords.push_back(complex_json(z));
    r["coordinates"] = coords;
    r["variables"] = var_names;
    r["eigenvalue"] = complex_json(c.eigenvalue);
    json residuals = json::array();
    for (double x : c.residuals) residuals.push_back(x);
    r["residuals"] = residuals;
    r["max_residual"] = finite_or_null(c.max_residual);
    r["multiplicity"] = c.cluster_size;
    r["eigenspace_rank"] = c.cluster_rank;
    r["used_extension"] = c.used_extension;
    r["used_log_branch"] = c.used_log_branch;
    if (u_mode && std::isfinite(c.u_identity_error))
        r["u_identity_error"] = c.u_identity_error;
    return r;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const PolySystem src = load_system(cfg.input_path);
    if (src.polys.size() != src.nvars())
        throw std::invalid_argument("solve needs a well-constrained system (n polynomials "
                                    "in n variables); got " +
                                    std::to_string(src.polys.size()) + " in " +
                                    std::to_string(src.nvars()));
    SolverOptions opt;
    opt.seed = cfg.seed;
    opt.pivot_rel = cfg.pivot_tol;
    opt.route_threshold = cfg.cond_route;
    opt.accept_tol = cfg.accept_tol;
    opt.reject_tol = cfg.reject_tol;

    SolveReport rep;
    if (cfg.pipeline == "hide") {
        rep = solve_hidden(src, hidden_index(src, cfg), opt);
    } else {
        rep = solve_u(src, opt);
    }

    if (!cfg.matrix_out.empty()) {
        // Rebuild the same matrix (same seed) for export; construction is
        // deterministic given the seed.
        const AugmentedSystem sys = augment(src, cfg);
        const ResultantMatrix m = build_matrix(sys, cfg.seed);
        std::ofstream mo(cfg.matrix_out);
        if (!mo)
            throw std::invalid_argument("cannot open matrix output file '" + cfg.matrix_out +
                                        "'");
        write_matrix_text(m, mo);
    }

    const bool u_mode = rep.pipeline == "u";
    json j;
    j["command"] = "solve";
    j["pipeline"] = rep.pipeline;
    j["seed"] = cfg.seed;
    j["variables"] = src.var_names;
    j["matrix"] = {{"dimension", rep.matrix_dim},
                   {"block_dimension", rep.block_dim},
                   {"pencil_dimension", rep.pencil_dim},
                   {"degree", rep.poly_degree},
                   {"kappa11", finite_or_null(rep.kappa11)},
                   {"kappa_leading", finite_or_null(rep.kappa_leading)},
                   {"route", rep.route}};
    j["counts"] = {{"eigenvalues", rep.eigen_count},
                   {"accepted", rep.count(RootCandidate::Status::accepted)},
                   {"rejected", rep.count(RootCandidate::Status::rejected)},
                   {"borderline", rep.count(RootCandidate::Status::borderline)},
                   {"multiplicity_degenerate",
                    rep.count(RootCandidate::Status::multiplicity_degenerate)},
                   {"recovery_failed", rep.count(RootCandidate::Status::recovery_failed)}};
    json discarded = json::array();
    if (rep.infinite_count > 0)
        discarded.push_back({{"reason", "infinite eigenvalue"}, {"count", rep.infinite_count}});
    if (rep.pole_drop_count > 0)
        discarded.push_back(
            {{"reason", "eigenvalue at the pole of the variable change"},
             {"count", rep.pole_drop_count}});
    j["discarded"] = discarded;
    json roots = json::array();
    for (const RootCandidate& c : rep.candidates)
        roots.push_back(root_json(c, src.var_names, u_mode));
    j["roots"] = roots;
    j["log"] = rep.log;
    j["timing_seconds"] = {{"offline", rep.offline_seconds}, {"online", rep.online_seconds}};

    if (cfg.format == "json") {
        out << j.dump(2) << "\n";
        return 0;
    }

    out << "pipeline: " << rep.pipeline << "\n";
    out << "matrix: dimension " << rep.matrix_dim << ", constant block " << rep.block_dim
        << ", matrix polynomial " << rep.pencil_dim << " x " << rep.pencil_dim
        << " of degree " << rep.poly_degree << "\n";
    out << "conditioning: kappa(M11) = " << fmt_sci(rep.kappa11)
        << ", leading coefficient kappa = " << fmt_sci(rep.kappa_leading) << "\n";
    out << "route: " << rep.route << "\n";
    out << "eigenvalues: " << rep.eigen_count << " total, " << rep.infinite_count
        << " infinite discarded, " << rep.pole_drop_count << " at transform pole\n";
    out << "timing: offline " << fmt_double(rep.offline_seconds, 3) << " s, online "
        << fmt_double(rep.online_seconds, 3) << " s\n";
    out << "candidates (" << rep.count(RootCandidate::Status::accepted) << " accepted, "
        << rep.count(RootCandidate::Status::rejected) << " rejected, "
        << rep.count(RootCandidate::Status::borderline) << " borderline, "
        << rep.count(RootCandidate::Status::multiplicity_degenerate) << " degenerate, "
        << rep.count(RootCandidate::Status::recovery_failed) << " failed):\n";
    std::size_t idx = 0;
    for (const RootCandidate& c : rep.candidates) {
        out << "  [" << std::setw(3) << ++idx << "] " << std::left << std::setw(24)
            << status_name(c.status) << std::right
            << " max residual " << fmt_sci(c.max_residual);
        if (c.cluster_size > 1)
            out << "  cluster size " << c.cluster_size << " rank " << c.cluster_rank;
        out << "\n";
        for (std::size_t v = 0; v < c.coords.size(); ++v)
            out << "        " << src.var_names[v] << " = " << fmt_complex(c.coords[v]) << "\n";
    }
    for (const std::string& line : rep.log) out << "note: " << line << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"sparse-resultant polynomial system tools"};
    app.require_subcommand(1);

    auto add_common = [&cfg](CLI::App* sub, bool solver_flags) {
        sub->add_option("input", cfg.input_path, "system file (one polynomial per line)")
            ->required();
        sub->add_option("--seed", cfg.seed, "seed for liftings and random draws");
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        auto* p = sub->add_option("--pipeline", cfg.pipeline, "augmentation pipeline")
                      ->check(CLI::IsMember({"u", "hide"}));
        auto* h = sub->add_option("--hide-var", cfg.hide_var, "variable to hide");
        if (solver_flags) {
            sub->add_option("--pivot-tol", cfg.pivot_tol, "relative pivot threshold")
                ->check(CLI::PositiveNumber);
            sub->add_option("--cond-route", cfg.cond_route,
                            "condition threshold for the companion route")
                ->check(CLI::PositiveNumber);
            sub->add_option("--accept-tol", cfg.accept_tol, "residual acceptance bound")
                ->check(CLI::PositiveNumber);
            sub->add_option("--reject-tol", cfg.reject_tol, "residual rejection bound")
                ->check(CLI::PositiveNumber);
            sub->add_option("--matrix-out", cfg.matrix_out, "write the matrix to this file");
        }
        return std::make_pair(p, h);
    };

    CLI::App* mixedvol = app.add_subcommand("mixedvol", "mixed volumes and root bounds");
    auto [mp, mh] = add_common(mixedvol, false);
    CLI::App* matrix = app.add_subcommand("matrix", "build the resultant matrix");
    auto [xp, xh] = add_common(matrix, true);
    CLI::App* solve = app.add_subcommand("solve", "solve a well-constrained system");
    auto [sp, sh] = add_common(solve, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    cfg.pipeline_given =
        (sub == mixedvol ? mp : sub == matrix ? xp : sp)->count() > 0;
    cfg.hide_var_given =
        (sub == mixedvol ? mh : sub == matrix ? xh : sh)->count() > 0;

    try {
        if (cfg.hide_var_given && !cfg.pipeline_given) cfg.pipeline = "hide";
        if (cfg.pipeline == "hide" && !cfg.hide_var_given)
            throw std::invalid_argument("--pipeline hide requires --hide-var");
        if (cfg.pipeline == "u" && cfg.hide_var_given)
            throw std::invalid_argument("--hide-var conflicts with --pipeline u");
        if (cfg.accept_tol >= cfg.reject_tol)
            throw std::invalid_argument("--accept-tol must be below --reject-tol");

        if (cfg.command == "mixedvol") return cmd_mixedvol(cfg, std::cout);
        if (cfg.command == "matrix") return cmd_matrix(cfg, std::cout);
        return cmd_solve(cfg, std::cout);
    } catch (const ParseError& e) {
        std::cerr << "sparsolve: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sparsolve: error: " << e.what() << "\n";
        return 2;
    } catch (const IdenticallySingularPencilError& e) {
        std::cerr << "sparsolve: degenerate system: " << e.what() << "\n";
        return 3;
    } catch (const SingularFactorError& e) {
        std::cerr << "sparsolve: degenerate system: " << e.what() << "\n";
        return 3;
    } catch (const NonGenericLiftingError& e) {
        std::cerr << "sparsolve: degenerate geometry: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateDeltaError& e) {
        std::cerr << "sparsolve: degenerate geometry: " << e.what() << "\n";
        return 3;
    } catch (const EigConvergenceError& e) {
        std::cerr << "sparsolve: numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "sparsolve: numeric failure: " << e.what() << "\n";
        return 4;
    }
}
