// Command line front end: solve the defining equations, verify curvature
// identities, run family sweeps, and exercise the strip extension operator.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pelab/curvature.hpp"
#include "pelab/extension.hpp"
#include "pelab/family.hpp"
#include "pelab/io.hpp"
#include "pelab/model.hpp"
#include "pelab/solver.hpp"

namespace {

pelab::ModelConfig model_config_from(const std::string& config_path, const std::string& model,
                                     int n, double m, double beta, double r_max) {
    pelab::ModelConfig cfg;
    if (!config_path.empty()) cfg = pelab::load_model_config(config_path);
    if (!model.empty()) cfg.model = model;
    if (n > 0) cfg.n = n;
    if (m >= 0.0) cfg.m = m;
    if (beta > 0.0) cfg.beta = beta;
    if (r_max > 0.0) cfg.r_max = r_max;
    return cfg;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pelab: adapted and Fefferman-Graham compactifications of radial "
                 "Poincare-Einstein metrics"};
    app.require_subcommand(1);

    std::string config_path, model, out_path, identity = "all", family_path, direction = "a";
    std::string input_path;
    int n = 0, k = 2, l = 1;
    double m = -1.0, beta = 0.0, r_max = 0.0, s = 3.0, tol = 1e-10;

    auto add_model_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "model config file (JSON or key=value)");
        cmd->add_option("--model", model, "hyperbolic | ads_schw");
        cmd->add_option("--n", n, "boundary dimension");
        cmd->add_option("--m", m, "AdS-Schwarzschild mass");
        cmd->add_option("--beta", beta, "S^1 period (0 = smooth cap)");
        cmd->add_option("--rmax", r_max, "domain truncation radius");
    };

    auto* solve = app.add_subcommand("solve", "solve the defining equation at one s");
    add_model_opts(solve);
    solve->add_option("--s", s, "spectral parameter (s = n selects Fefferman-Graham)")
        ->required();
    solve->add_option("--tol", tol, "defining-equation residual tolerance");
    solve->add_option("--out", out_path, "output JSON path (default stdout)");

    auto* verify = app.add_subcommand("verify", "residuals of the curvature identities");
    add_model_opts(verify);
    verify->add_option("--identity", identity, "identity name or 'all'");
    verify->add_option("--s", s, "spectral parameter")->required();
    verify->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "uniform-bound run over a metric family");
    sweep->add_option("--family", family_path, "family spec JSON")->required();
    sweep->add_option("--direction", direction, "a | b");
    sweep->add_option("--s", s, "override the family's s list");
    sweep->add_option("--out", out_path, "report CSV path (default stdout)");

    auto* extend = app.add_subcommand("extend", "mollifier extension of boundary data");
    extend->add_option("--input", input_path, "CSV with y,value rows")->required();
    extend->add_option("--k", k, "input regularity order");
    extend->add_option("--l", l, "leading order of the extension");
    extend->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ofstream file;
        if (solve->parsed()) {
            auto cfg = model_config_from(config_path, model, n, m, beta, r_max);
            auto g = pelab::make_metric(cfg);
            pelab::SolveOptions opts;
            opts.tol = tol;
            auto c = pelab::solve_compactification(g, s, opts);
            open_out(file, out_path) << pelab::compactification_to_json(c) << "\n";
        } else if (verify->parsed()) {
            auto cfg = model_config_from(config_path, model, n, m, beta, r_max);
            auto g = pelab::make_metric(cfg);
            auto c = pelab::solve_compactification(g, s, {});
            auto rows = pelab::identity_suite(c, g);
            if (identity != "all") {
                std::erase_if(rows, [&](const auto& r) { return r.name != identity; });
                if (rows.empty()) throw std::runtime_error("unknown identity " + identity);
            }
            pelab::write_identity_csv(open_out(file, out_path), rows);
        } else if (sweep->parsed()) {
            auto spec = pelab::load_family_spec(family_path);
            if (sweep->count("--s")) spec.s_values = {s};
            auto rep = (direction == "a") ? pelab::run_direction_a(spec)
                                          : pelab::run_direction_b(spec);
            pelab::write_report_csv(open_out(file, out_path), rep);
            if (!rep.all_bounds_hold) {
                std::cerr << "bound violations:";
                for (const auto& q : rep.failures) std::cerr << " " << q;
                std::cerr << "\n";
                return 1;
            }
        } else if (extend->parsed()) {
            std::ifstream in(input_path);
            if (!in) throw std::runtime_error("cannot open " + input_path);
            std::vector<double> ys, vs;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#' || line.rfind("y,", 0) == 0) continue;
                std::istringstream ls(line);
                double a, b2;
                char comma;
                if (ls >> a >> comma >> b2) {
                    ys.push_back(a);
                    vs.push_back(b2);
                }
            }
            if (ys.size() < 8) throw std::runtime_error("too few samples in " + input_path);
            pelab::BoundaryFunction f;
            f.y = ys;
            f.values = vs;
            f.k = k;
            f.alpha = 0.5;
            auto F = pelab::mollify_extend(f, k, l);
            auto& os = open_out(file, out_path);
            os << std::setprecision(15) << "x";
            for (double y : F.y) os << "," << y;
            os << "\n";
            for (std::size_t i = 0; i < F.x.size(); ++i) {
                os << F.x[i];
                for (std::size_t j = 0; j < F.y.size(); ++j) os << "," << F.at(i, j);
                os << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
