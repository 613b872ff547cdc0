// Command-line surface: exact invariants, spectra, DH measures, p-norms,
// convergence tables, geodesic-ray and equilibrium grids, Kahler-Einstein
// bounds, and the verification runner.

#include <CLI11.hpp>
#include <json.hpp>

#include "kstab/geodesic.hpp"
#include "kstab/io.hpp"
#include "kstab/ke.hpp"
#include "kstab/spectra.hpp"
#include "kstab/verify.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using kstab::Rat;

struct OutputSink {
    std::string path;  // empty = stdout
    bool json = false;

    void emit(const kstab::RunManifest& manifest,
              const std::vector<std::vector<std::string>>& rows) const {
        std::ostringstream body;
        if (json) {
            nlohmann::ordered_json doc;
            doc["tool"] = kstab::kToolVersion;
            doc["command"] = manifest.command;
            doc["inputs"] = manifest.inputs;
            nlohmann::ordered_json params = nlohmann::ordered_json::object();
            for (const auto& [k, v] : manifest.parameters) params[k] = v;
            doc["parameters"] = std::move(params);
            nlohmann::ordered_json cols = nlohmann::ordered_json::array();
            for (const auto& [name, type] : manifest.columns)
                cols.push_back(name + ":" + type);
            doc["columns"] = std::move(cols);
            nlohmann::ordered_json data = nlohmann::ordered_json::array();
            for (const auto& row : rows) data.push_back(row);
            doc["rows"] = std::move(data);
            body << doc.dump(2) << "\n";
        } else {
            kstab::write_csv(body, manifest, rows);
        }
        if (path.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path);
            out << body.str();
        }
    }
};

std::string rat_s(const Rat& r) { return kstab::rat_to_string(r); }
std::string dbl_s(double v) { return kstab::format_double(v); }

std::vector<std::int64_t> parse_level_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    if (out.empty()) throw CLI::ValidationError("levels", "empty level list");
    return out;
}

std::vector<kstab::PNorm> parse_pnorm_list(const std::string& text) {
    std::vector<kstab::PNorm> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "inf" || item == "infinity")
            out.push_back(kstab::PNorm::infinity());
        else
            out.push_back(kstab::PNorm::of(std::stoi(item)));
    }
    if (out.empty()) throw CLI::ValidationError("p", "empty exponent list");
    return out;
}

// The moment-side reference and the standard Kahler box for grid commands.
struct GridSetup {
    kstab::ToricConfig view;
    kstab::PotentialGrid u0;
    std::vector<kstab::Axis> dual;
};

GridSetup make_grid_setup(const kstab::Config& cfg, int nodes) {
    std::optional<kstab::ToricConfig> view = kstab::toric_view(cfg);
    if (!view)
        throw std::invalid_argument("configuration has no exact toric model for grids");
    std::vector<kstab::Axis> dual;
    for (int d = 0; d < view->polytope().dim(); ++d)
        dual.push_back(kstab::Axis{-10.0, 10.0, nodes});
    kstab::PotentialGrid u0 =
        kstab::reference_symplectic_potential(view->polytope(), nodes, dual);
    return {std::move(*view), std::move(u0), std::move(dual)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact spectra, invariants and geodesic rays of toric degenerations"};
    app.require_subcommand(1);

    OutputSink sink;
    app.add_flag("--json", sink.json, "emit one JSON object instead of CSV");
    app.add_option("--out", sink.path, "write output to a file instead of stdout");

    std::string config_path;
    std::int64_t level = 4;
    std::string p_list = "1,2,4,inf";
    std::string level_list = "8,16,32,64,128,256";
    double tmax = 1.0, lambda = 0.0;
    int nodes = 2001, tsteps = 16, cdf_samples = 0;
    std::string model_name = "p1";
    kstab::VerifyOptions verify_options;
    std::string suite = "all";

    CLI::App* inv = app.add_subcommand("invariants", "exact a0,a1,b0,b1,F0,F1");
    inv->add_option("config", config_path, "configuration document")->required();

    CLI::App* spec = app.add_subcommand("spectral", "level-k spectral measure atoms");
    spec->add_option("config", config_path)->required();
    spec->add_option("--level", level, "level k")->required();

    CLI::App* dh = app.add_subcommand("dh", "exact Duistermaat-Heckman measure");
    dh->add_option("config", config_path)->required();
    dh->add_option("--cdf-samples", cdf_samples,
                   "emit a sampled two-column survival function instead");

    CLI::App* nrm = app.add_subcommand("norms", "p-norm family");
    nrm->add_option("config", config_path)->required();
    nrm->add_option("--p", p_list, "comma list of exponents (integers or inf)");

    CLI::App* conv = app.add_subcommand("converge", "spectral-vs-DH distance table");
    conv->add_option("config", config_path)->required();
    conv->add_option("--levels", level_list, "comma list of levels");

    CLI::App* geo = app.add_subcommand("geodesic", "weak geodesic ray grid");
    geo->add_option("config", config_path)->required();
    geo->add_option("--tmax", tmax, "final time");
    geo->add_option("--nodes", nodes, "grid nodes per axis");
    geo->add_option("--tsteps", tsteps, "time samples");

    CLI::App* equi = app.add_subcommand("equilibrium", "equilibrium potential grid");
    equi->add_option("config", config_path)->required();
    equi->add_option("--lambda", lambda, "slice parameter")->required();
    equi->add_option("--nodes", nodes, "grid nodes per axis");

    CLI::App* keb = app.add_subcommand("ke-bound", "Kahler-Einstein lower bound report");
    keb->add_option("--config", config_path, "configuration document")->required();
    keb->add_option("--model", model_name, "Fano model: p1 or dp8");
    keb->add_option("--p", p_list, "comma list of exponents");

    CLI::App* ver = app.add_subcommand("verify", "run the verification suites");
    ver->add_option("--suite", suite, "exact, geodesic, ke or all");
    ver->add_option("--corpus", verify_options.corpus_dir, "corpus directory");
    ver->add_option("--kmax", verify_options.kmax, "convergence sweep cap");
    ver->add_option("--nodes", verify_options.nodes, "geodesic grid nodes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ver->parsed()) {
            const auto results = kstab::run_verify(suite, verify_options);
            bool all_pass = true;
            for (const auto& r : results) {
                std::printf("[%s] %-26s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                            r.id.c_str(), r.detail.c_str(), r.seconds);
                all_pass = all_pass && r.pass;
            }
            return all_pass ? 0 : 1;
        }

        kstab::ConfigDocument doc = kstab::parse_config_file(config_path);
        kstab::Config cfg = doc.to_config();
        kstab::RunManifest manifest;
        manifest.inputs = {config_path};

        if (inv->parsed()) {
            manifest.command = "invariants";
            manifest.parameters = {{"period", std::to_string(kstab::period(cfg))}};
            manifest.columns = {{"name", "string"}, {"value", "rational"}};
            const kstab::InvariantSet s = kstab::fit_invariants(cfg);
            sink.emit(manifest, {{"a0", rat_s(s.a0)},
                                 {"a1", rat_s(s.a1)},
                                 {"b0", rat_s(s.b0)},
                                 {"b1", rat_s(s.b1)},
                                 {"F0", rat_s(s.F0)},
                                 {"F1", rat_s(s.F1)}});
        } else if (spec->parsed()) {
            manifest.command = "spectral";
            manifest.parameters = {{"level", std::to_string(level)}};
            manifest.columns = {{"position", "rational"}, {"mass", "rational"}};
            std::vector<std::vector<std::string>> rows;
            for (const auto& [pos, mass] : kstab::spectral_measure(cfg, level).atoms)
                rows.push_back({rat_s(pos), rat_s(mass)});
            sink.emit(manifest, rows);
        } else if (dh->parsed()) {
            std::optional<kstab::ToricConfig> view = kstab::toric_view(cfg);
            if (!view)
                throw std::invalid_argument("configuration has no exact toric model");
            const kstab::DHMeasure measure = kstab::dh_measure(*view);
            std::vector<std::vector<std::string>> rows;
            if (cdf_samples > 0) {
                manifest.command = "dh --cdf";
                manifest.columns = {{"lambda", "float64"}, {"survival", "float64"}};
                const double lo = kstab::to_double(measure.breakpoints().front()) - 0.25;
                const double hi = kstab::to_double(measure.breakpoints().back()) + 0.25;
                for (int i = 0; i <= cdf_samples; ++i) {
                    const double x = lo + (hi - lo) * i / cdf_samples;
                    const Rat xr(static_cast<long long>(std::llround(x * 1048576.0)),
                                 1048576);
                    rows.push_back(
                        {dbl_s(x), dbl_s(kstab::to_double(measure.survival(xr)))});
                }
            } else {
                manifest.command = "dh";
                manifest.columns = {{"kind", "string"},   {"lo", "rational"},
                                    {"hi", "rational"},   {"c2", "rational"},
                                    {"c1", "rational"},   {"c0", "rational"},
                                    {"mass", "rational"}};
                for (std::size_t i = 0; i < measure.pieces().size(); ++i) {
                    const auto& piece = measure.pieces()[i];
                    std::vector<std::string> coeffs(3, "0");
                    for (std::size_t d = 0; d < piece.size(); ++d)
                        coeffs[3 - piece.size() + d] = rat_s(piece[d]);
                    rows.push_back({"piece", rat_s(measure.breakpoints()[i]),
                                    rat_s(measure.breakpoints()[i + 1]), coeffs[0],
                                    coeffs[1], coeffs[2], ""});
                }
                for (const auto& [pos, mass] : measure.atoms())
                    rows.push_back({"atom", rat_s(pos), "", "", "", "", rat_s(mass)});
            }
            sink.emit(manifest, rows);
        } else if (nrm->parsed()) {
            manifest.command = "norms";
            manifest.columns = {{"p", "string"},           {"Qp", "rational"},
                                {"Np", "rational"},        {"norm_pow", "rational"},
                                {"norm_exact", "rational"}, {"norm", "float64"}};
            std::vector<std::vector<std::string>> rows;
            for (const kstab::PNorm& p : parse_pnorm_list(p_list)) {
                if (p.infinite) {
                    const Rat ninf = kstab::norm_infinity(cfg);
                    rows.push_back({"inf", "", "", "", rat_s(ninf),
                                    dbl_s(kstab::to_double(ninf))});
                } else {
                    const kstab::NormTriple t = kstab::norms(cfg, p.value);
                    rows.push_back({std::to_string(p.value), rat_s(t.Qp), rat_s(t.Np),
                                    rat_s(t.norm_p_pow), "", dbl_s(t.norm_p)});
                }
            }
            sink.emit(manifest, rows);
        } else if (conv->parsed()) {
            manifest.command = "converge";
            manifest.parameters = {{"levels", level_list}};
            manifest.columns = {{"k", "integer"},
                                {"kolmogorov", "rational"},
                                {"kolmogorov_float", "float64"},
                                {"l1", "float64"}};
            std::optional<kstab::ToricConfig> view = kstab::toric_view(cfg);
            if (!view)
                throw std::invalid_argument("configuration has no exact toric model");
            const kstab::DHMeasure measure = kstab::dh_measure(*view);
            std::vector<std::vector<std::string>> rows;
            for (std::int64_t k : parse_level_list(level_list)) {
                const kstab::DistanceReport d =
                    kstab::cdf_distance(kstab::spectral_measure(cfg, k), measure);
                rows.push_back({std::to_string(k), rat_s(d.kolmogorov),
                                dbl_s(kstab::to_double(d.kolmogorov)), dbl_s(d.l1)});
            }
            sink.emit(manifest, rows);
        } else if (geo->parsed()) {
            manifest.command = "geodesic";
            manifest.parameters = {{"tmax", dbl_s(tmax)},
                                   {"nodes", std::to_string(nodes)},
                                   {"tsteps", std::to_string(tsteps)}};
            GridSetup setup = make_grid_setup(cfg, nodes);
            std::vector<std::vector<std::string>> rows;
            const bool twod = setup.dual.size() == 2;
            manifest.columns = twod
                                   ? std::vector<std::pair<std::string, std::string>>{
                                         {"t", "float64"},
                                         {"y0", "float64"},
                                         {"y1", "float64"},
                                         {"phi", "float64"}}
                                   : std::vector<std::pair<std::string, std::string>>{
                                         {"t", "float64"},
                                         {"y", "float64"},
                                         {"phi", "float64"}};
            for (int j = 0; j <= tsteps; ++j) {
                const double t = tmax * j / tsteps;
                kstab::PotentialGrid phi =
                    kstab::build_ray(setup.u0, setup.view, t, setup.dual);
                for (int i = 0; i < phi.size(); ++i) {
                    if (twod) {
                        rows.push_back({dbl_s(t),
                                        dbl_s(setup.dual[0].node(i / setup.dual[1].n)),
                                        dbl_s(setup.dual[1].node(i % setup.dual[1].n)),
                                        dbl_s(phi.at(i))});
                    } else {
                        rows.push_back(
                            {dbl_s(t), dbl_s(setup.dual[0].node(i)), dbl_s(phi.at(i))});
                    }
                }
            }
            sink.emit(manifest, rows);
        } else if (equi->parsed()) {
            manifest.command = "equilibrium";
            manifest.parameters = {{"lambda", dbl_s(lambda)},
                                   {"nodes", std::to_string(nodes)}};
            GridSetup setup = make_grid_setup(cfg, nodes);
            kstab::PotentialGrid psi =
                kstab::equilibrium(setup.u0, setup.view, lambda, setup.dual);
            std::vector<std::vector<std::string>> rows;
            const bool twod = setup.dual.size() == 2;
            manifest.columns =
                twod ? std::vector<std::pair<std::string, std::string>>{{"y0", "float64"},
                                                                        {"y1", "float64"},
                                                                        {"psi", "float64"}}
                     : std::vector<std::pair<std::string, std::string>>{{"y", "float64"},
                                                                        {"psi", "float64"}};
            for (int i = 0; i < psi.size(); ++i) {
                const std::string value =
                    psi.at(i) == kstab::kMinusInf ? "-inf" : dbl_s(psi.at(i));
                if (twod) {
                    rows.push_back({dbl_s(setup.dual[0].node(i / setup.dual[1].n)),
                                    dbl_s(setup.dual[1].node(i % setup.dual[1].n)),
                                    value});
                } else {
                    rows.push_back({dbl_s(setup.dual[0].node(i)), value});
                }
            }
            sink.emit(manifest, rows);
        } else if (keb->parsed()) {
            manifest.command = "ke-bound";
            manifest.parameters = {{"model", model_name}};
            manifest.columns = {{"model", "string"}, {"metric", "integer"},
                                {"p", "string"},     {"lhs", "float64"},
                                {"rhs", "float64"},  {"margin", "float64"},
                                {"holds", "integer"}};
            kstab::FanoModel model =
                model_name == "dp8" ? kstab::make_fano_blowup() : kstab::make_fano_p1();
            if (model_name != "dp8" && model_name != "p1")
                throw kstab::SchemaError("/model", "model must be p1 or dp8");
            std::vector<kstab::Axis> axes;
            for (int d = 0; d < model.dim(); ++d)
                axes.push_back(model.dim() == 1 ? kstab::Axis{-16.0, 16.0, 4001}
                                                : kstab::Axis{-12.0, 12.0, 241});
            std::vector<std::vector<std::string>> rows;
            for (const kstab::PNorm& p : parse_pnorm_list(p_list)) {
                for (int metric = 0; metric < model.metric_count(); ++metric) {
                    const kstab::FanoBound b =
                        kstab::verify_fano_bound(model, cfg, metric, p, axes);
                    if (b.trivial_norm) {
                        rows.push_back({model_name, std::to_string(metric), p.label(),
                                        "", "", "zero-norm: bound skipped", "1"});
                        continue;
                    }
                    rows.push_back({model_name, std::to_string(metric), p.label(),
                                    dbl_s(b.lhs), dbl_s(b.rhs), dbl_s(b.lhs - b.rhs),
                                    b.holds ? "1" : "0"});
                }
            }
            sink.emit(manifest, rows);
        }
        return 0;
    } catch (const kstab::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const kstab::DivisibilityError& e) {
        std::cerr << "divisibility error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
