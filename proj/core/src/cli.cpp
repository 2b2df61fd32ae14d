#include "afmcf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "afmcf/estimates.hpp"
#include "afmcf/field_io.hpp"
#include "afmcf/flow.hpp"
#include "afmcf/foliation.hpp"
#include "afmcf/format.hpp"
#include "afmcf/surface.hpp"
#include "afmcf/threads.hpp"
#include "afmcf/version.hpp"

namespace afmcf {

namespace {

int g_verbosity = 0;  // -1 quiet, 0 normal, 1 verbose

void log_info(const std::string& msg) {
    if (g_verbosity >= 1) std::cerr << "afmcf: " << msg << "\n";
}

void log_warn(const std::string& msg) {
    if (g_verbosity >= 0) std::cerr << "afmcf: warning: " << msg << "\n";
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

RunConfig::RunConfig(std::string subcommand, std::vector<Option> options)
    : subcommand_(std::move(subcommand)), options_(std::move(options)) {
    // Flags shared by every subcommand.
    options_.push_back({"config", true, "key=value config file; command line overrides"});
    options_.push_back({"quiet", false, "suppress warnings on stderr"});
    options_.push_back({"verbose", false, "progress logging on stderr"});
    options_.push_back({"seed", true, "recorded for reproducibility (pipelines are deterministic)"});
}

const RunConfig::Option* RunConfig::find_option(const std::string& key) const {
    for (const Option& o : options_)
        if (o.key == key) return &o;
    return nullptr;
}

void RunConfig::load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file " + path + " line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const Option* opt = find_option(key);
        if (!opt)
            throw ConfigError("unknown config key '" + key + "' in " + path);
        if (!values_.count(key))  // command line already parsed wins
            values_[key] = opt->takes_value ? value : "1";
    }
}

void RunConfig::parse(const std::vector<std::string>& args) {
    std::optional<std::string> config_path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        std::string tok = args[k];
        if (tok.rfind("--", 0) != 0)
            throw ConfigError("unexpected argument '" + tok + "' for subcommand " +
                              subcommand_);
        tok.erase(0, 2);
        std::string key = tok, value;
        bool has_value = false;
        auto eq = tok.find('=');
        if (eq != std::string::npos) {
            key = tok.substr(0, eq);
            value = tok.substr(eq + 1);
            has_value = true;
        }
        const Option* opt = find_option(key);
        if (!opt)
            throw ConfigError("unknown option '--" + key + "' for subcommand " +
                              subcommand_);
        if (opt->takes_value && !has_value) {
            if (k + 1 >= args.size())
                throw ConfigError("option '--" + key + "' expects a value");
            value = args[++k];
        } else if (!opt->takes_value) {
            if (has_value)
                throw ConfigError("option '--" + key + "' does not take a value");
            value = "1";
        }
        if (key == "config")
            config_path = value;
        else
            values_[key] = value;
    }
    if (config_path) {
        values_["config"] = *config_path;
        load_config_file(*config_path);
    }
    if (get_flag("quiet")) g_verbosity = -1;
    if (get_flag("verbose")) g_verbosity = 1;
    if (has("seed")) record("seed", values_.at("seed"));
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

void RunConfig::record(const std::string& key, const std::string& value) {
    effective_[key] = value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) {
    auto it = values_.find(key);
    std::string v = it == values_.end() ? fallback : it->second;
    record(key, v);
    return v;
}

std::string RunConfig::require_string(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("missing required option '--" + key + "' for subcommand " +
                          subcommand_);
    record(key, it->second);
    return it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) {
    auto it = values_.find(key);
    double v = fallback;
    if (it != values_.end()) {
        try {
            std::size_t used = 0;
            v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(it->second);
        } catch (const std::exception&) {
            throw ConfigError("option '--" + key + "': cannot parse number '" +
                              it->second + "'");
        }
    }
    record(key, fmt17(v));
    return v;
}

int RunConfig::get_int(const std::string& key, int fallback) {
    auto it = values_.find(key);
    int v = fallback;
    if (it != values_.end()) {
        try {
            std::size_t used = 0;
            v = std::stoi(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(it->second);
        } catch (const std::exception&) {
            throw ConfigError("option '--" + key + "': cannot parse integer '" +
                              it->second + "'");
        }
    }
    record(key, std::to_string(v));
    return v;
}

bool RunConfig::get_flag(const std::string& key) {
    bool v = values_.count(key) > 0 && values_.at(key) != "0";
    if (v) record(key, "1");
    return v;
}

std::string RunConfig::effective_line() const {
    std::string line = subcommand_;
    for (const auto& [k, v] : effective_) line += " " + k + "=" + v;
    return line;
}

std::string RunConfig::help_text() const {
    std::ostringstream os;
    os << "usage: afmcf " << subcommand_ << " [options]\n";
    for (const Option& o : options_)
        os << "  --" << o.key << (o.takes_value ? " <value>" : "") << "  " << o.help
           << "\n";
    return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------------

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = nullptr;
};

OutputTarget open_output(const std::string& path) {
    OutputTarget t;
    if (path.empty() || path == "-") {
        t.os = &std::cout;
        return t;
    }
    t.file.open(path);
    if (!t.file) throw IoError("cannot open output file: " + path);
    t.os = &t.file;
    return t;
}

std::vector<std::string> artifact_comments(const RunConfig& cfg) {
    return {std::string("afmcf ") + kVersion, "config: " + cfg.effective_line()};
}

void write_comments(std::ostream& os, const std::vector<std::string>& lines) {
    for (const std::string& l : lines) os << "# " << l << "\n";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_(os) { os_ << "{"; }
    void field(const std::string& key, const std::string& v) {
        sep();
        os_ << "\"" << key << "\": \"" << json_escape(v) << "\"";
    }
    void field(const std::string& key, double v) {
        sep();
        os_ << "\"" << key << "\": " << fmt17(v);
    }
    void field(const std::string& key, int v) {
        sep();
        os_ << "\"" << key << "\": " << v;
    }
    void field(const std::string& key, bool v) {
        sep();
        os_ << "\"" << key << "\": " << (v ? "true" : "false");
    }
    void close() { os_ << "\n}\n"; }

private:
    void sep() {
        os_ << (first_ ? "\n" : ",\n") << "  ";
        first_ = false;
    }
    std::ostream& os_;
    bool first_ = true;
};

struct SweepRange {
    double lo = 0.0, hi = 0.0;
    int n = 1;
};

SweepRange parse_range(const std::string& spec) {
    SweepRange r;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> r.lo >> c1 >> r.hi >> c2 >> r.n) || c1 != ':' || c2 != ':' || !is.eof())
        throw ConfigError("cannot parse range '" + spec + "' (expected lo:hi:n)");
    if (r.n < 1) throw ConfigError("range '" + spec + "' needs n >= 1");
    return r;
}

double range_point(const SweepRange& r, int k) {
    return r.n == 1 ? r.lo : r.lo + k * (r.hi - r.lo) / (r.n - 1);
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_surface(RunConfig& cfg) {
    std::string in = cfg.get_string("in", "");
    if (!in.empty()) {
        int genus = 2;
        ReferenceSurfaceData s = load_surface(in, &genus);
        SurfaceAreas ar = areas(s, genus);
        auto out = open_output(cfg.get_string("out", ""));
        JsonWriter w(*out.os);
        w.field("tool_version", kVersion);
        w.field("command", "surface");
        w.field("effective_config", cfg.effective_line());
        w.field("nx", s.grid.nx);
        w.field("ny", s.grid.ny);
        w.field("Lx", s.grid.Lx);
        w.field("Ly", s.grid.Ly);
        w.field("lambda0", s.lambda0);
        w.field("genus", genus);
        w.field("area", ar.area);
        w.field("a_hyp_eff", ar.a_hyp_eff);
        w.field("a_hyp_nominal", ar.a_hyp_nominal);
        w.field("gauss_residual", check_gauss_residual(s));
        w.close();
        return 0;
    }

    std::string out_dir = cfg.require_string("out");
    std::string kind = cfg.get_string("kind", "fuchsian");
    int nx = cfg.get_int("nx", 64);
    int ny = cfg.get_int("ny", nx);
    double lx = cfg.get_double("lx", 1.0);
    double ly = cfg.get_double("ly", 1.0);
    int genus = cfg.get_int("genus", 2);
    PeriodicGrid grid(nx, ny, lx, ly);

    ReferenceSurfaceData s;
    if (kind == "fuchsian") {
        s = make_fuchsian(grid, cfg.get_double("v-const", 0.0));
    } else if (kind == "synthetic") {
        s = make_cosine_synthetic(grid, cfg.get_double("v-amp", 0.1),
                                  cfg.get_double("lambda-amp", 0.5));
    } else if (kind == "gauss") {
        s = solve_gauss_equation(grid, cfg.get_double("alpha-re", 0.04),
                                 cfg.get_double("alpha-im", 0.0),
                                 cfg.get_double("tol", 1e-10));
    } else {
        throw ConfigError("unknown surface kind '" + kind +
                          "' (expected fuchsian, synthetic or gauss)");
    }
    save_surface(out_dir, s, genus);
    log_info("wrote surface (lambda0 = " + fmt17(s.lambda0) + ") to " + out_dir);
    return 0;
}

int cmd_foliation(RunConfig& cfg) {
    int genus = 2;
    ReferenceSurfaceData s = load_surface(cfg.require_string("surface"), &genus);
    AmbientFoliation fol(std::move(s));

    double r_min = cfg.get_double("r-min", -1.0);
    double r_max = cfg.get_double("r-max", 1.0);
    int steps = cfg.get_int("r-steps", 21);
    if (steps < 1) throw ConfigError("--r-steps must be >= 1");
    if (r_max < r_min) throw ConfigError("--r-max must not be below --r-min");

    auto out = open_output(cfg.get_string("out", ""));
    write_comments(*out.os, artifact_comments(cfg));
    *out.os << "r,area,mu1_min,mu1_max,mu2_min,mu2_max,H_min,H_max\n";
    for (int k = 0; k < steps; ++k) {
        double r = steps == 1 ? r_min : r_min + k * (r_max - r_min) / (steps - 1);
        SliceGeometry sg = fol.slice_geometry(r);
        *out.os << fmt17(r) << ',' << fmt17(sg.area) << ','
                << fmt17(sg.mu1.min().value) << ',' << fmt17(sg.mu1.max().value) << ','
                << fmt17(sg.mu2.min().value) << ',' << fmt17(sg.mu2.max().value) << ','
                << fmt17(sg.H.min().value) << ',' << fmt17(sg.H.max().value) << "\n";
    }
    return 0;
}

void write_sweep_csv(std::ostream& os, const RunConfig& cfg, const SweepRange& range,
                     int genus, double k3) {
    write_comments(os, artifact_comments(cfg));
    os << "lambda0,r0,vol_exact,vol_taylor,vol_c1,dim_quasicircle,dim_bc,"
          "lambda0_spec_bound\n";
    for (int k = 0; k < range.n; ++k) {
        double l = range_point(range, k);
        EstimateReport rep = make_report(l, genus, AHypMode::Nominal, 0.0, k3);
        os << fmt17(rep.lambda0) << ',' << fmt17(rep.r0) << ','
           << fmt17(rep.vol_bound_exact) << ',' << fmt17(rep.vol_bound_taylor) << ','
           << fmt17(rep.vol_c1_bound) << ',' << fmt17(rep.hausdorff_bound_quasicircle)
           << ',' << fmt17(rep.hausdorff_bound_bc) << ','
           << fmt17(rep.spectrum_lower_bound) << "\n";
    }
}

int cmd_estimates(RunConfig& cfg) {
    int genus = cfg.get_int("genus", 2);
    double k3 = cfg.get_double("k3", 1e-11);

    std::string sweep = cfg.get_string("sweep", "");
    if (!sweep.empty()) {
        auto out = open_output(cfg.get_string("out", ""));
        write_sweep_csv(*out.os, cfg, parse_range(sweep), genus, k3);
        return 0;
    }

    double lambda0 = cfg.get_double("lambda0", 0.0);
    AHypMode mode = AHypMode::Nominal;
    double a_hyp_eff = 0.0;
    if (cfg.has("a-hyp")) {
        mode = AHypMode::Effective;
        a_hyp_eff = cfg.get_double("a-hyp", 0.0);
    }
    EstimateReport rep = make_report(lambda0, genus, mode, a_hyp_eff, k3);
    if (rep.near_boundary_warning)
        log_warn("lambda0 = " + fmt17(lambda0) + " is near the admissibility boundary");

    auto out = open_output(cfg.get_string("out", ""));
    JsonWriter w(*out.os);
    w.field("tool_version", kVersion);
    w.field("command", "estimates");
    w.field("effective_config", cfg.effective_line());
    w.field("lambda0", rep.lambda0);
    w.field("a_hyp", rep.a_hyp);
    w.field("a_hyp_mode", mode == AHypMode::Nominal ? "nominal" : "effective");
    w.field("genus", genus);
    w.field("r0", rep.r0);
    w.field("vol_bound_exact", rep.vol_bound_exact);
    w.field("vol_bound_taylor", rep.vol_bound_taylor);
    w.field("vol_c1_bound", rep.vol_c1_bound);
    w.field("hausdorff_bound_quasicircle", rep.hausdorff_bound_quasicircle);
    w.field("hausdorff_bound_bc", rep.hausdorff_bound_bc);
    w.field("spectrum_lower_bound", rep.spectrum_lower_bound);
    w.field("k3", rep.k3);
    w.field("near_boundary_warning", rep.near_boundary_warning);
    w.close();
    return 0;
}

int cmd_sweep(RunConfig& cfg) {
    SweepRange range = parse_range(cfg.require_string("lambda0"));
    int genus = cfg.get_int("genus", 2);
    double k3 = cfg.get_double("k3", 1e-11);
    auto out = open_output(cfg.get_string("out", ""));
    write_sweep_csv(*out.os, cfg, range, genus, k3);
    return 0;
}

ScalarField parse_u0(const std::string& spec, const PeriodicGrid& grid) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::istringstream is(s);
        std::string tok;
        while (std::getline(is, tok, ':')) parts.push_back(tok);
        return parts;
    };
    std::vector<std::string> parts = split(spec);
    if (parts.empty()) throw ConfigError("empty --u0 spec");
    try {
        if (parts[0] == "const" && parts.size() == 2) {
            return ScalarField(grid, std::stod(parts[1]));
        }
        if (parts[0] == "sine" && parts.size() == 5) {
            double mean = std::stod(parts[1]), amp = std::stod(parts[2]);
            double kx = std::stod(parts[3]), ky = std::stod(parts[4]);
            return ScalarField::sample(grid, [&](double x, double y) {
                double phase = 2.0 * M_PI * (kx * x / grid.Lx + ky * y / grid.Ly);
                return mean + amp * std::sin(phase);
            });
        }
        if (parts[0] == "file" && parts.size() == 2) {
            ScalarField u = read_field(parts[1]);
            if (!(u.grid() == grid))
                throw ConfigError("--u0 file grid does not match the surface grid");
            return u;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const IoError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse --u0 spec '" + spec + "'");
    }
    throw ConfigError("cannot parse --u0 spec '" + spec +
                      "' (expected const:<c>, sine:<mean>:<amp>:<kx>:<ky> or file:<path>)");
}

int cmd_flow(RunConfig& cfg) {
    int genus = 2;
    ReferenceSurfaceData s = load_surface(cfg.require_string("surface"), &genus);
    AmbientFoliation fol(std::move(s));

    ScalarField u0 = parse_u0(cfg.require_string("u0"), fol.grid());
    FlowConfig fc;
    fc.t_end = cfg.get_double("t-end", 1.0);
    fc.dt_safety = cfg.get_double("dt-safety", 0.9);
    fc.dt_max = cfg.get_double("dt-max", 0.05);
    fc.output_every = cfg.get_int("output-every", 100);

    std::string out_path = cfg.get_string("out", "");
    std::string final_u_path = cfg.get_string("final-u", "");

    FlowResult result;
    try {
        result = run_flow(fol, u0, fc);
    } catch (BlowupError& e) {
        // Keep the partial diagnostics on disk before reporting exit code 2.
        auto out = open_output(out_path);
        std::vector<std::string> comments = artifact_comments(cfg);
        comments.push_back("blowup at t = " + fmt17(e.time));
        e.partial_trace.write_csv(*out.os, comments);
        throw;
    }

    auto out = open_output(out_path);
    result.trace.write_csv(*out.os, artifact_comments(cfg));
    if (!final_u_path.empty()) write_field(final_u_path, result.final_u);
    log_info("flow finished: " + std::to_string(result.trace.rows().size()) +
             " trace rows");
    return 0;
}

int dispatch(const std::string& name, const std::vector<std::string>& args) {
    RunConfig cfg = [&]() -> RunConfig {
        if (name == "surface")
            return RunConfig("surface",
                             {{"out", true, "output surface directory (or report file with --in)"},
                              {"in", true, "read an existing surface directory and print a JSON summary"},
                              {"kind", true, "fuchsian | synthetic | gauss"},
                              {"nx", true, "grid points in x (default 64)"},
                              {"ny", true, "grid points in y (default nx)"},
                              {"lx", true, "domain length in x (default 1)"},
                              {"ly", true, "domain length in y (default 1)"},
                              {"v-const", true, "fuchsian: constant log conformal factor"},
                              {"v-amp", true, "synthetic: amplitude of v = v_amp cos(2 pi x/Lx)"},
                              {"lambda-amp", true, "synthetic: grid maximum of lambda"},
                              {"alpha-re", true, "gauss: Re alpha"},
                              {"alpha-im", true, "gauss: Im alpha"},
                              {"tol", true, "gauss: Newton residual tolerance"},
                              {"genus", true, "genus stored in meta (default 2)"}});
        if (name == "foliation")
            return RunConfig("foliation",
                             {{"surface", true, "surface directory"},
                              {"r-min", true, "first slice coordinate (default -1)"},
                              {"r-max", true, "last slice coordinate (default 1)"},
                              {"r-steps", true, "number of slices (default 21)"},
                              {"out", true, "CSV output file (default stdout)"}});
        if (name == "estimates")
            return RunConfig("estimates",
                             {{"lambda0", true, "maximal principal curvature in [0,1)"},
                              {"genus", true, "genus for the nominal hyperbolic area (default 2)"},
                              {"a-hyp", true, "effective hyperbolic area (overrides the nominal mode)"},
                              {"k3", true, "spectral constant (default 1e-11)"},
                              {"sweep", true, "lambda0 range lo:hi:n -> CSV instead of JSON"},
                              {"out", true, "output file (default stdout)"}});
        if (name == "flow")
            return RunConfig("flow",
                             {{"surface", true, "surface directory"},
                              {"u0", true, "const:<c> | sine:<mean>:<amp>:<kx>:<ky> | file:<path>"},
                              {"t-end", true, "integration time (default 1)"},
                              {"dt-safety", true, "parabolic safety factor in (0,1] (default 0.9)"},
                              {"dt-max", true, "hard step-size cap (default 0.05)"},
                              {"output-every", true, "steps between trace samples (default 100)"},
                              {"out", true, "trace CSV file (default stdout)"},
                              {"final-u", true, "write the final height field here"}});
        if (name == "sweep")
            return RunConfig("sweep",
                             {{"lambda0", true, "range lo:hi:n"},
                              {"genus", true, "genus for the nominal hyperbolic area (default 2)"},
                              {"k3", true, "spectral constant (default 1e-11)"},
                              {"out", true, "CSV output file (default stdout)"}});
        throw ConfigError("unknown subcommand '" + name + "'");
    }();

    if (std::find(args.begin(), args.end(), "--help") != args.end()) {
        std::cout << cfg.help_text();
        return 0;
    }
    cfg.parse(args);

    if (name == "surface") return cmd_surface(cfg);
    if (name == "foliation") return cmd_foliation(cfg);
    if (name == "estimates") return cmd_estimates(cfg);
    if (name == "flow") return cmd_flow(cfg);
    return cmd_sweep(cfg);
}

} // namespace

int run_main(int argc, const char* const* argv) {
    apply_thread_env();
    g_verbosity = 0;

    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "help") {
        std::cout << "usage: afmcf <surface|foliation|estimates|flow|sweep> [options]\n"
                     "       afmcf <subcommand> --help\n";
        return args.empty() ? 1 : 0;
    }
    if (args[0] == "--version") {
        std::cout << "afmcf " << kVersion << "\n";
        return 0;
    }

    std::string name = args[0];
    std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        return dispatch(name, rest);
    } catch (const ConfigError& e) {
        std::cerr << "afmcf: " << e.what() << "\n";
        return 1;
    } catch (const BlowupError& e) {
        std::cerr << "afmcf: blowup: " << e.what() << "\n";
        return 2;
    } catch (const AdmissibilityError& e) {
        std::cerr << "afmcf: inadmissible data: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "afmcf: io error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "afmcf: io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "afmcf: error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace afmcf
