#include "pelab/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pelab {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        out.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return out;
}

} // namespace

ModelConfig parse_model_config(const std::string& text) {
    ModelConfig cfg;
    if (looks_like_json(text)) {
        json j = json::parse(text);
        cfg.model = j.value("model", cfg.model);
        cfg.n = j.value("n", cfg.n);
        cfg.m = j.value("m", cfg.m);
        cfg.beta = j.value("beta", cfg.beta);
        cfg.r_max = j.value("r_max", cfg.r_max);
        cfg.grid_size = j.value("grid_size", cfg.grid_size);
        return cfg;
    }
    for (const auto& [k, v] : parse_kv(text)) {
        if (k == "model") cfg.model = v;
        else if (k == "n") cfg.n = std::stoi(v);
        else if (k == "m") cfg.m = std::stod(v);
        else if (k == "beta") cfg.beta = std::stod(v);
        else if (k == "r_max") cfg.r_max = std::stod(v);
        else if (k == "grid_size") cfg.grid_size = std::size_t(std::stoul(v));
        else throw std::invalid_argument("unknown model config key: " + k);
    }
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    return parse_model_config(read_file(path));
}

RadialMetric make_metric(const ModelConfig& cfg) {
    ModelOptions opts;
    opts.r_max = cfg.r_max;
    opts.nodes_per_panel = cfg.grid_size;
    if (cfg.model == "hyperbolic") return make_hyperbolic(cfg.n, opts);
    if (cfg.model == "ads_schw") return make_ads_schwarzschild(cfg.n, cfg.m, cfg.beta, opts);
    throw std::invalid_argument("unknown model: " + cfg.model);
}

FamilySpec parse_family_spec(const std::string& text) {
    json j = json::parse(text);
    FamilySpec spec;
    spec.model = j.value("model", spec.model);
    spec.n = j.value("n", spec.n);
    if (j.contains("parameters")) spec.parameters = j["parameters"].get<std::vector<double>>();
    else if (j.contains("m_values")) spec.parameters = j["m_values"].get<std::vector<double>>();
    spec.beta = j.value("beta", spec.beta);
    if (j.contains("s")) {
        if (j["s"].is_array()) spec.s_values = j["s"].get<std::vector<double>>();
        else spec.s_values = {j["s"].get<double>()};
    }
    spec.k = j.value("k", spec.k);
    spec.alpha = j.value("alpha", spec.alpha);
    spec.bound_factor = j.value("bound_factor", spec.bound_factor);
    spec.phi_bound_factor = j.value("phi_bound_factor", spec.phi_bound_factor);
    spec.rescale_boundary = j.value("rescale_boundary", spec.rescale_boundary);
    return spec;
}

FamilySpec load_family_spec(const std::string& path) {
    return parse_family_spec(read_file(path));
}

std::string compactification_to_json(const Compactification& c) {
    json j;
    j["s"] = c.s;
    j["model"] = c.metric.name();
    j["n"] = c.metric.n();
    const auto& grid = *c.rho_s.grid();
    std::vector<double> r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) r[i] = grid.node(i);
    j["grid"] = r;
    j["v"] = c.v_or_w.values();
    j["rho_s"] = c.rho_s.values();
    j["phi_s"] = c.phi_s.values();
    json ser;
    ser["mu"] = c.rho_s_over_x.mu;
    ser["variable"] = "x";
    ser["coord_scale"] = c.rho_s_over_x.coord_scale;
    json terms = json::array();
    for (const auto& t : c.rho_s_over_x.terms) terms.push_back({t.offset, t.coeff});
    ser["terms"] = terms;
    ser["truncation_order"] = c.rho_s_over_x.truncation_order;
    j["rho_s_over_x"] = ser;
    j["H_s"] = c.H_s_series;
    json rep;
    rep["defining_residual"] = c.report.defining_residual;
    rep["defining_residual_spectral"] = c.report.defining_residual_spectral;
    rep["matching_residual"] = c.report.matching_residual;
    rep["boundary_admixture"] = c.report.boundary_admixture;
    rep["series_collision"] = c.report.series_collision;
    rep["min_v"] = c.report.min_v;
    rep["min_phi"] = c.report.min_phi;
    rep["tol"] = c.report.tol;
    j["residual_report"] = rep;
    return j.dump(2);
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
    os << std::setprecision(15);
    os << "r,value\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        os << p.grid()->node(i) << "," << p.value(i) << "\n";
}

void write_series_csv(std::ostream& os, const BoundarySeries& s) {
    os << std::setprecision(15);
    os << "exponent,coefficient,fit_residual\n";
    for (const auto& t : s.terms)
        os << (s.mu + t.offset) << "," << t.coeff << "," << t.residual_level << "\n";
}

void write_identity_csv(std::ostream& os, const std::vector<IdentityResidual>& rows) {
    os << std::setprecision(15);
    os << "identity,sup_residual,location\n";
    for (const auto& r : rows) {
        if (!r.applicable) continue;
        os << r.name << "," << r.sup_residual << "," << r.location << "\n";
    }
}

void write_report_csv(std::ostream& os, const UniformBoundReport& rep) {
    os << std::setprecision(15);
    os << "member_id,quantity,value,bound_status\n";
    for (const auto& r : rep.rows)
        os << r.member << "," << r.quantity << "," << r.value << ","
           << (r.bound_ok ? "ok" : "violated") << "\n";
}

void write_collar_csv(std::ostream& os, const std::vector<std::pair<double, double>>& table) {
    os << std::setprecision(15);
    os << "collar_index,local_norm\n";
    for (std::size_t j = 0; j < table.size(); ++j)
        os << j << "," << table[j].second << "\n";
}

} // namespace pelab
