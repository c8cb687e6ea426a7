// Command-line front end: frame extraction, Mannheim pair construction and
// identity verification over catalog or expression-defined geometry.
//
// Exit codes: 0 ok, 2 config/parse error, 3 numeric degeneracy,
// 4 singular offset, 5 coincidence failure.

#include <charconv>
#include <clocale>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "darboux/arclength.hpp"
#include "darboux/catalog.hpp"
#include "darboux/dsl.hpp"
#include "darboux/errors.hpp"
#include "darboux/framing.hpp"
#include "darboux/identities.hpp"
#include "darboux/mannheim.hpp"

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using namespace darboux;

namespace {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct ExitCode {
    static constexpr int kOk = 0;
    static constexpr int kConfig = 2;
    static constexpr int kNumeric = 3;
    static constexpr int kSingularOffset = 4;
    static constexpr int kCoincidence = 5;
};

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

struct JobConfig {
    std::shared_ptr<SurfacePatch> patch;
    std::shared_ptr<ParamCurve> curve;
    std::string surface_label;
    std::string curve_label;
    std::optional<double> lambda;
    int stations = 0;  // 0: use the per-command default
    double tol_class = kTolClass;
    double tol_coincide = kTolCoincide;
    std::string format = "csv";
    std::string out_path;
};

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const auto& a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

double as_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    return v.get<double>();
}

catalog::Params parse_params(const json& obj, const std::string& where) {
    catalog::Params out;
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        out[key] = as_number(value, where + "." + key);
    }
    return out;
}

std::pair<double, double> parse_range(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 2) {
        throw ConfigError(what + " must be a two-element array");
    }
    const double a = as_number(v[0], what + "[0]");
    const double b = as_number(v[1], what + "[1]");
    if (!(b > a)) throw ConfigError(what + " must be increasing");
    return {a, b};
}

JobConfig load_config(const std::string& path, bool needs_lambda) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    require_keys(root, "config",
                 {"schema_version", "surface", "curve", "lambda", "stations", "tolerances",
                  "output"});
    if (!root.contains("schema_version") || !root["schema_version"].is_number_integer() ||
        root["schema_version"].get<int>() != 1) {
        throw ConfigError("config requires \"schema_version\": 1");
    }
    if (!root.contains("surface") || !root.contains("curve")) {
        throw ConfigError("config requires exactly one surface spec and one curve spec");
    }

    JobConfig cfg;

    const json& surf = root["surface"];
    require_keys(surf, "surface", {"catalog", "params", "dsl"});
    const bool surf_catalog = surf.contains("catalog");
    if (surf_catalog == surf.contains("dsl")) {
        throw ConfigError("surface must specify exactly one of \"catalog\" or \"dsl\"");
    }
    catalog::Params surface_params;
    std::string surface_name;
    if (surf_catalog) {
        surface_name = surf["catalog"].get<std::string>();
        const auto& entry = catalog::get_entry(surface_name);
        surface_params = catalog::merge_params(
            entry.defaults,
            surf.contains("params") ? parse_params(surf["params"], "surface.params")
                                    : catalog::Params{});
        cfg.patch = entry.make_patch(surface_params);
        cfg.surface_label = surface_name;
    } else {
        if (surf.contains("params")) {
            throw ConfigError("surface.params only applies to catalog surfaces");
        }
        const json& d = surf["dsl"];
        require_keys(d, "surface.dsl", {"x", "y", "z", "u_range", "v_range"});
        for (const char* key : {"x", "y", "z", "u_range", "v_range"}) {
            if (!d.contains(key)) throw ConfigError(std::string("surface.dsl.") + key +
                                                    " is required");
        }
        const auto [u0, u1] = parse_range(d["u_range"], "surface.dsl.u_range");
        const auto [v0, v1] = parse_range(d["v_range"], "surface.dsl.v_range");
        const Domain dom{u0, u1, v0, v1};
        cfg.patch = dsl::compile_surface(dsl::parse_surface(d["x"].get<std::string>(),
                                                            d["y"].get<std::string>(),
                                                            d["z"].get<std::string>(), dom));
        cfg.surface_label = "dsl";
    }

    const json& cur = root["curve"];
    require_keys(cur, "curve", {"catalog", "params", "dsl"});
    const bool cur_catalog = cur.contains("catalog");
    if (cur_catalog == cur.contains("dsl")) {
        throw ConfigError("curve must specify exactly one of \"catalog\" or \"dsl\"");
    }
    if (cur_catalog) {
        if (!surf_catalog) {
            throw ConfigError("a catalog curve requires a catalog surface");
        }
        const auto& entry = catalog::get_entry(surface_name);
        const auto& cc = entry.curve(cur["catalog"].get<std::string>());
        const auto curve_params = catalog::merge_params(
            cc.defaults, cur.contains("params") ? parse_params(cur["params"], "curve.params")
                                                : catalog::Params{});
        cfg.curve = cc.make(surface_params, curve_params);
        cfg.curve_label = cc.name;
    } else {
        if (cur.contains("params")) {
            throw ConfigError("curve.params only applies to catalog curves");
        }
        const json& d = cur["dsl"];
        require_keys(d, "curve.dsl", {"u", "v", "t_range"});
        for (const char* key : {"u", "v", "t_range"}) {
            if (!d.contains(key)) throw ConfigError(std::string("curve.dsl.") + key +
                                                    " is required");
        }
        const auto [t0, t1] = parse_range(d["t_range"], "curve.dsl.t_range");
        cfg.curve = dsl::compile_curve(dsl::parse_curve(
            d["u"].get<std::string>(), d["v"].get<std::string>(), Interval{t0, t1}));
        cfg.curve_label = "dsl";
    }

    if (root.contains("lambda")) {
        cfg.lambda = as_number(root["lambda"], "lambda");
    }
    if (needs_lambda) {
        if (!cfg.lambda) throw ConfigError("pair jobs require \"lambda\"");
        if (*cfg.lambda == 0.0) throw ConfigError("lambda must be nonzero");
    }
    if (root.contains("stations")) {
        if (!root["stations"].is_number_integer()) {
            throw ConfigError("stations must be an integer");
        }
        cfg.stations = root["stations"].get<int>();
        if (cfg.stations < 2) throw ConfigError("stations must be at least 2");
    }
    if (root.contains("tolerances")) {
        const json& tol = root["tolerances"];
        require_keys(tol, "tolerances", {"class", "coincide"});
        if (tol.contains("class")) cfg.tol_class = as_number(tol["class"], "tolerances.class");
        if (tol.contains("coincide")) {
            cfg.tol_coincide = as_number(tol["coincide"], "tolerances.coincide");
        }
    }
    if (root.contains("output")) {
        const json& out = root["output"];
        require_keys(out, "output", {"format", "path"});
        if (out.contains("format")) cfg.format = out["format"].get<std::string>();
        if (out.contains("path")) cfg.out_path = out["path"].get<std::string>();
    }
    if (cfg.format != "csv" && cfg.format != "json") {
        throw ConfigError("output format must be \"csv\" or \"json\"");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------------

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << text;
}

std::string csv_from_rows(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows) {
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i) {
        text += header[i];
        text += (i + 1 < header.size()) ? "," : "\n";
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            text += fmt(row[i]);
            text += (i + 1 < row.size()) ? "," : "\n";
        }
    }
    return text;
}

ordered_json json_from_rows(const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows) {
    ordered_json out;
    out["columns"] = header;
    auto& data = out["rows"] = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r = ordered_json::array();
        for (double v : row) {
            if (std::isnan(v)) {
                r.push_back(nullptr);
            } else {
                r.push_back(v);
            }
        }
        data.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_frames(const JobConfig& cfg) {
    const int n = (cfg.stations > 0) ? cfg.stations : 200;
    const auto table = arc_length_table(cfg.patch, cfg.curve, std::max(64, n));
    const FramedCurve fc = frame_series(*cfg.patch, *cfg.curve, table, n);

    const std::vector<std::string> header{"s",     "x",   "y",   "z",     "Tx",  "Ty",  "Tz",
                                          "gx",    "gy",  "gz",  "nx",    "ny",  "nz",  "k_g",
                                          "k_n",   "tau_g", "kappa", "tau", "phi"};
    std::vector<std::vector<double>> rows;
    rows.reserve(fc.samples.size());
    const double nan = std::nan("");
    for (const auto& s : fc.samples) {
        const double kappa = s.frenet ? s.frenet->kappa
                                      : std::hypot(s.inv.k_g, s.inv.k_n);
        const double tau = (s.frenet && s.frenet->tau) ? *s.frenet->tau : nan;
        const double phi = s.frenet ? s.frenet->phi : nan;
        rows.push_back({s.s, s.x.x, s.x.y, s.x.z, s.frame.T.x, s.frame.T.y, s.frame.T.z,
                        s.frame.g.x, s.frame.g.y, s.frame.g.z, s.frame.n.x, s.frame.n.y,
                        s.frame.n.z, s.inv.k_g, s.inv.k_n, s.inv.tau_g, kappa, tau, phi});
    }
    if (cfg.format == "csv") {
        write_text(cfg.out_path, csv_from_rows(header, rows));
    } else {
        write_text(cfg.out_path, json_from_rows(header, rows).dump(2) + "\n");
    }
    return ExitCode::kOk;
}

mannheim::MannheimPair build_from_config(const JobConfig& cfg) {
    const int n = (cfg.stations > 0) ? cfg.stations : 256;
    if (n < 16) throw ConfigError("pair jobs need at least 16 stations");
    return mannheim::build_pair(cfg.patch, cfg.curve, *cfg.lambda, n);
}

int cmd_pair(const JobConfig& cfg) {
    const mannheim::MannheimPair pair = build_from_config(cfg);

    const std::vector<std::string> header{
        "s1",    "s",     "theta", "speed_ratio", "lambda", "coincide_sign", "half_width",
        "x",     "y",     "z",     "x1",          "y1",     "z1",            "k_g",
        "k_n",   "tau_g", "k_g1",  "k_n1",        "tau_g1"};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < pair.partner.size(); ++i) {
        const auto& b = pair.base[i];
        const auto& p = pair.partner[i];
        rows.push_back({pair.s1[i], b.s, pair.theta[i], pair.speed_ratio[i], pair.lambda,
                        pair.coincidence_sign, pair.half_width, b.x.x, b.x.y, b.x.z, p.x.x,
                        p.x.y, p.x.z, b.inv.k_g, b.inv.k_n, b.inv.tau_g, p.inv.k_g, p.inv.k_n,
                        p.inv.tau_g});
    }
    if (cfg.format == "csv") {
        write_text(cfg.out_path, csv_from_rows(header, rows));
    } else {
        ordered_json out;
        out["lambda"] = pair.lambda;
        out["coincidence_sign"] = pair.coincidence_sign;
        out["half_width"] = pair.half_width;
        out["stations"] = pair.partner.size();
        out["series"] = json_from_rows(header, rows);
        write_text(cfg.out_path, out.dump(2) + "\n");
    }
    return ExitCode::kOk;
}

int cmd_verify(const JobConfig& cfg, const std::string& identities) {
    const mannheim::MannheimPair pair = build_from_config(cfg);

    std::vector<std::string> ids;
    if (!identities.empty() && identities != "ALL") {
        std::stringstream ss(identities);
        std::string id;
        while (std::getline(ss, id, ',')) {
            if (!id.empty()) ids.push_back(id);
        }
    }
    const mannheim::VerificationReport report = mannheim::verify_pair(pair, ids, cfg.tol_class);

    ordered_json out;
    auto& meta = out["pair"];
    meta["surface"] = cfg.surface_label;
    meta["curve"] = cfg.curve_label;
    meta["lambda"] = report.lambda;
    meta["stations"] = report.n_stations;
    meta["h1"] = report.h1;
    meta["coincidence_sign"] = report.coincidence_sign;
    meta["half_width"] = pair.half_width;
    meta["eq28_ratio"] = report.eq28_ratio;
    if (!report.char14.vanishing.empty()) {
        meta["char14_vanishing"] = report.char14.vanishing;
        meta["char14_decidable"] = report.char14.decidable;
    }
    if (!report.eq30.vanishing.empty()) {
        meta["eq30_vanishing"] = report.eq30.vanishing;
        meta["eq30_decidable"] = report.eq30.decidable;
    }
    auto& arr = out["identities"] = ordered_json::array();
    for (const auto& r : report.identities) {
        ordered_json item;
        item["id"] = r.id;
        item["applicable"] = r.applicable;
        item["gate_reason"] = r.gate_reason;
        item["max_abs"] = r.max_abs;
        item["rms"] = r.rms;
        item["normalized_max"] = r.normalized_max;
        arr.push_back(std::move(item));
    }
    write_text(cfg.out_path, out.dump(2) + "\n");

    // Large residuals are findings, not failures; only a broken construction
    // (the coincidence itself) is fatal.
    for (const auto& r : report.identities) {
        if (r.id == "COINCIDE" && r.applicable && r.max_abs > cfg.tol_coincide) {
            std::cerr << "error: 5: COINCIDE residual " << fmt(r.max_abs)
                      << " exceeds tolerance " << fmt(cfg.tol_coincide) << "\n";
            return ExitCode::kCoincidence;
        }
    }
    return ExitCode::kOk;
}

int cmd_catalog(const std::string& format) {
    const bool color = ::isatty(1) != 0 && format != "json";
    auto params_to_string = [](const catalog::Params& p) {
        std::string out;
        for (const auto& [k, v] : p) {
            char buf[40];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            out += " " + k + "=" + std::string(buf, res.ptr);
        }
        return out;
    };

    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& name : catalog::list_entries()) {
            const auto& entry = catalog::get_entry(name);
            ordered_json e;
            e["name"] = entry.name;
            e["params"] = entry.defaults;
            auto& curves = e["curves"] = ordered_json::array();
            std::vector<std::string> curve_names;
            for (const auto& c : entry.curves) curve_names.push_back(c.name);
            std::sort(curve_names.begin(), curve_names.end());
            for (const auto& cn : curve_names) {
                const auto& c = entry.curve(cn);
                ordered_json cj;
                cj["name"] = c.name;
                cj["params"] = c.defaults;
                curves.push_back(std::move(cj));
            }
            arr.push_back(std::move(e));
        }
        std::fputs((arr.dump(2) + "\n").c_str(), stdout);
        return ExitCode::kOk;
    }

    std::string text;
    for (const auto& name : catalog::list_entries()) {
        const auto& entry = catalog::get_entry(name);
        if (color) text += "\033[1m";
        text += entry.name;
        if (color) text += "\033[0m";
        text += params_to_string(entry.defaults) + "\n";
        std::vector<std::string> curve_names;
        for (const auto& c : entry.curves) curve_names.push_back(c.name);
        std::sort(curve_names.begin(), curve_names.end());
        for (const auto& cn : curve_names) {
            text += "  " + cn + params_to_string(entry.curve(cn).defaults) + "\n";
        }
    }
    std::fputs(text.c_str(), stdout);
    return ExitCode::kOk;
}

int run(int argc, char** argv) {
    CLI::App app{"Darboux frames, curve invariants and Mannheim D-pairs on parametric surfaces"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, identities = "ALL";
    int stations = 0;
    double tol_class = -1.0;

    auto add_common = [&](CLI::App* cmd, bool with_identities) {
        cmd->add_option("--config", config_path, "job config (JSON)")->required();
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--format", format, "csv or json");
        cmd->add_option("--stations", stations, "number of arc-length stations");
        cmd->add_option("--tol-class", tol_class, "classification tolerance");
        if (with_identities) {
            cmd->add_option("--identities", identities, "comma-separated identity ids or ALL");
        }
    };

    auto* frames = app.add_subcommand("frames", "frame and invariant series for one curve");
    add_common(frames, false);
    auto* pair = app.add_subcommand("pair", "construct a Mannheim D-pair bundle");
    add_common(pair, false);
    auto* verify = app.add_subcommand("verify", "residual report over the identity registry");
    add_common(verify, true);
    auto* cat = app.add_subcommand("catalog", "list builtin surfaces and curves");
    std::string cat_format;
    cat->add_option("--format", cat_format, "json for machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        std::cerr << "error: 2: " << e.what() << "\n";
        return ExitCode::kConfig;
    }

    auto finish_config = [&](JobConfig cfg) {
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!format.empty()) {
            if (format != "csv" && format != "json") {
                throw ConfigError("--format must be csv or json");
            }
            cfg.format = format;
        }
        if (stations > 0) cfg.stations = stations;
        if (tol_class > 0.0) cfg.tol_class = tol_class;
        return cfg;
    };

    if (cat->parsed()) return cmd_catalog(cat_format);
    if (frames->parsed()) return cmd_frames(finish_config(load_config(config_path, false)));
    if (pair->parsed()) return cmd_pair(finish_config(load_config(config_path, true)));
    return cmd_verify(finish_config(load_config(config_path, true)), identities);
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    try {
        return run(argc, argv);
    } catch (const SyntaxError& e) {
        std::cerr << "error: 2: syntax error: " << e.what() << "\n";
        return ExitCode::kConfig;
    } catch (const UnknownIdentifier& e) {
        std::cerr << "error: 2: " << e.what() << "\n";
        return ExitCode::kConfig;
    } catch (const DepthExceeded& e) {
        std::cerr << "error: 2: " << e.what() << "\n";
        return ExitCode::kConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: 2: " << e.what() << "\n";
        return ExitCode::kConfig;
    } catch (const UnknownEntry& e) {
        std::cerr << "error: 2: " << e.what() << "\n";
        return ExitCode::kConfig;
    } catch (const ZeroLambda& e) {
        std::cerr << "error: 2: " << e.what() << "\n";
        return ExitCode::kConfig;
    } catch (const SingularOffset& e) {
        std::cerr << "error: 4: " << e.what() << " (station s1 = " << e.station() << ")\n";
        return ExitCode::kSingularOffset;
    } catch (const Error& e) {
        std::cerr << "error: 3: " << e.what() << "\n";
        return ExitCode::kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: 3: " << e.what() << "\n";
        return ExitCode::kNumeric;
    }
}
