#include "uqr/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqr/acceptance.hpp"
#include "uqr/constructions.hpp"
#include "uqr/error.hpp"
#include "uqr/ifs.hpp"
#include "uqr/perfectness.hpp"
#include "uqr/pointcloud.hpp"
#include "uqr/powermaps.hpp"
#include "uqr/semigroup.hpp"

namespace uqr::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Key {
    std::string name;
    std::optional<std::string> fallback;  // nullopt: required
    std::string help;
};

struct Command {
    std::string name;
    std::string help;
    std::vector<Key> keys;
};

const std::vector<Key>& common_keys() {
    static const std::vector<Key> keys{
        {"seed", "1", "seed for every random stream"},
        {"out", "uqrlab-out", "output directory"},
        {"threads", "0", "worker threads (0 = machine parallelism)"},
    };
    return keys;
}

const std::vector<Command>& commands() {
    static const std::vector<Command> cmds{
        {"julia-sphere", "radius of the Julia sphere of f_{d,lambda}",
         {{"d", "2", "degree"}, {"lambda", "1", "stretch factor lambda > 0"}}},
        {"ring", "word Julia radii and a backward orbit of <f_{2,1}, f_{2,1/a}>",
         {{"a", "4", "outer ring radius a > 1"},
          {"maxlen", "8", "maximal word length"},
          {"word_budget", "16384", "maximal number of enumerated words"},
          {"depth", "4", "backward orbit depth"},
          {"budget", "200000", "maximal number of orbit points"}}},
        {"cantor-shell", "dimension and radial IFS sample of a Cantor shell",
         {{"N", "4", "number of generators N >= 2"},
          {"n", "3", "ambient dimension"},
          {"samples", "10000", "chaos-game points"},
          {"burnin", "64", "discarded chaos-game iterates"}}},
        {"necklace", "validated Antoine necklace chain and its stage tori",
         {{"m", "36", "number of child tori (even perfect square)"},
          {"R", "1", "parent core radius"},
          {"rho", "0.2", "parent tube radius"},
          {"ring_factor", "1.5", "child ring radius in units of R sin(pi/m)"},
          {"stage", "2", "deepest stage written as a point cloud"},
          {"samples_per_torus", "64", "core samples per stage torus"}}},
        {"trap", "conformal-trap Mobius IFS, its stages and attractor sample",
         {{"d", "2", "degree (number of preimage balls)"},
          {"x0", "0,0,0", "trap centre"},
          {"centers", "4,0,0;-4,0,0", "preimage centres x_1;...;x_d"},
          {"a", "1", "outer ball radius"},
          {"b", "0.4", "trap ball radius, 2b < a"},
          {"stage", "4", "deepest validated stage"},
          {"samples", "10000", "chaos-game points"},
          {"burnin", "64", "discarded chaos-game iterates"}}},
        {"perfectness", "separating annuli and alpha-hat of a point cloud",
         {{"input", std::nullopt, "point cloud file"},
          {"min_inside", "1", "minimum sample points on each side of an annulus"},
          {"max_reports", "1000", "annuli written to the CSV (0 = all)"}}},
        {"dimension", "similarity dimension of a list of ratios",
         {{"ratios", std::nullopt, "comma-separated contraction ratios in (0,1)"}}},
        {"verify", "run the acceptance suite", {}},
    };
    return cmds;
}

const Command& find_command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return c;
    throw InvalidParameter("unknown command '" + name + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw InvalidParameter("cannot read config file " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw InvalidParameter("config line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw InvalidParameter("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return kv;
}

// --- typed parameter access ---------------------------------------------------

std::int64_t to_int(const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw InvalidParameter("--" + key + " expects an integer, got '" + v + "'");
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
        throw InvalidParameter("--" + key + " expects a finite number, got '" + v + "'");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& part : split(v, ',')) out.push_back(to_double(key, part));
    if (out.empty()) throw InvalidParameter("--" + key + " expects a comma-separated list");
    return out;
}

class Params {
public:
    explicit Params(const RunConfig& c) : c_(c) {}

    const std::string& str(const std::string& key) const {
        const auto it = c_.params.find(key);
        if (it == c_.params.end()) throw InvalidParameter("missing parameter --" + key);
        return it->second;
    }
    std::int64_t integer(const std::string& key) const { return to_int(key, str(key)); }
    double real(const std::string& key) const { return to_double(key, str(key)); }
    std::vector<double> list(const std::string& key) const { return to_list(key, str(key)); }

    std::size_t count(const std::string& key) const {
        const auto v = integer(key);
        if (v < 0) throw InvalidParameter("--" + key + " must be non-negative");
        return static_cast<std::size_t>(v);
    }

    Point point(const std::string& key, const std::string& text) const {
        const auto v = to_list(key, text);
        return Point(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }

private:
    const RunConfig& c_;
};

// --- output helpers -----------------------------------------------------------

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Output {
    fs::path dir;
    std::vector<std::string> artifacts;
    std::size_t dropped_infinite = 0;

    void json_file(const std::string& name, const json& j) {
        std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
        os << j.dump(2) << '\n';
        if (!os) throw Error("io-error", "failed writing " + (dir / name).string());
        artifacts.push_back(name);
    }

    void text_file(const std::string& name, const std::string& content) {
        std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
        os << content;
        if (!os) throw Error("io-error", "failed writing " + (dir / name).string());
        artifacts.push_back(name);
    }

    void cloud(const std::string& name, const std::vector<Point>& pts) {
        const auto w = write_pointcloud(pts, dir / name);
        dropped_infinite += w.dropped_infinite;
        artifacts.push_back(name);
    }
};

std::string word_string(const SemigroupSpec& spec, const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) s += '*';
        s += spec.label(w[i]);
    }
    return s;
}

// --- commands -----------------------------------------------------------------

json cmd_julia_sphere(const Params& p, Output&) {
    const auto d = p.integer("d");
    const double lambda = p.real("lambda");
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    const auto params = Stretch::with_lambda(d, lambda);
    return json{{"radius", julia_radius(params)}, {"d", d}, {"lambda", lambda}};
}

json cmd_ring(const Params& p, Output& out) {
    const double a = p.real("a");
    const auto maxlen = p.integer("maxlen");
    if (maxlen < 1 || maxlen > 62) throw InvalidParameter("maxlen must lie in 1..62");
    const auto spec = ring_semigroup(a);
    const auto words = enumerate_words(spec, static_cast<int>(maxlen), p.count("word_budget"));
    std::string csv = "word,length,degree,loglambda,radius\n";
    for (const auto& w : words)
        csv += word_string(spec, w.word) + ',' + std::to_string(w.word.size()) + ',' + std::to_string(w.params.d) + ',' +
               g17(w.params.loglambda) + ',' + g17(w.radius) + '\n';
    out.text_file("word_radii.csv", csv);

    const auto depth = p.integer("depth");
    if (depth < 0 || depth > 64) throw InvalidParameter("depth must lie in 0..64");
    Eigen::VectorXd x(3);
    x << 0.6 * a, 0.0, 0.8 * a;
    const auto orbit = backward_orbit(spec, Point(x), static_cast<int>(depth), p.count("budget"));
    out.cloud("ring_orbit.xyz", orbit.points);

    const auto ring = julia_ring_estimate(spec, static_cast<int>(maxlen), p.count("word_budget"));
    return json{{"a", a},
                {"maxlen", maxlen},
                {"words", words.size()},
                {"radius_min", ring.lo},
                {"radius_max", ring.hi},
                {"orbit_points", orbit.points.size()},
                {"orbit_truncated", orbit.truncated}};
}

json cmd_cantor_shell(const Params& p, Output& out, const RunConfig& cfg) {
    const auto N = p.integer("N");
    const auto n = p.integer("n");
    if (N < 2 || N > 60) throw InvalidParameter("N must lie in 2..60");
    if (n < 2 || n > 3) throw InvalidParameter("n must be 2 or 3");
    const auto cs = cantor_shell_system(static_cast<int>(N));
    const double s = similarity_dimension(cs.ratios);
    const auto samples = p.count("samples");
    if (samples == 0) throw InvalidParameter("samples must be positive");
    const auto sample = chaos_game(cs.system(), samples, p.count("burnin"), cfg.seed);
    out.cloud("cantor_radial.xyz", sample.points);

    std::vector<Point> shell;
    shell.reserve(sample.points.size());
    Rng rng(stream_seed(cfg.seed, 1));
    for (const auto& t : sample.points) {
        const double r = std::exp2(t.coords()[0]);
        shell.emplace_back(Eigen::VectorXd(r * rng.unit_vector(static_cast<int>(n))));
    }
    out.cloud("cantor_shell.xyz", shell);
    return json{{"N", N}, {"n", n}, {"s", s}, {"dimension", static_cast<double>(n - 1) + s}, {"ratios", cs.ratios},
                {"labels", cs.labels}};
}

json cmd_necklace(const Params& p, Output& out) {
    const auto m = p.integer("m");
    if (m < 1 || m > 10000) throw InvalidParameter("m must be an even perfect square");
    check_necklace_count(static_cast<int>(m));
    NecklaceGeometry g;
    g.parent_R = p.real("R");
    g.parent_rho = p.real("rho");
    g.ring_factor = p.real("ring_factor");
    if (!(g.ring_factor > 0.0)) throw InvalidParameter("ring_factor must be positive");
    const auto stage = p.integer("stage");
    const auto per = p.count("samples_per_torus");
    if (stage < 0 || per < 3) throw InvalidParameter("stage must be >= 0 and samples_per_torus >= 3");
    if (std::pow(static_cast<double>(m), static_cast<double>(stage)) * static_cast<double>(per) > 5e6)
        throw BudgetExceeded("stage point clouds would exceed 5e6 points");

    const auto chain = build_necklace(static_cast<int>(m), g);
    const double ratio = chain.maps.front().scale;
    const auto& r = chain.report;
    json validation{{"m", m},
                    {"passed", r.passed()},
                    {"disjoint", r.disjoint},
                    {"min_gap", r.min_gap},
                    {"contained", r.contained},
                    {"containment_margin", r.containment_margin},
                    {"linking_ok", r.linking_ok},
                    {"consecutive_lk_error", r.consecutive_lk_error},
                    {"nonconsecutive_lk_max", r.nonconsecutive_lk_max},
                    {"ratio", ratio},
                    {"similarity_dimension", similarity_dimension(chain.system().ratios())}};
    out.json_file("validation.json", validation);

    for (int k = 1; k <= stage; ++k) {
        std::vector<Point> pts;
        for (const auto& t : necklace_stage(chain, k))
            for (std::size_t i = 0; i < per; ++i)
                pts.emplace_back(Eigen::VectorXd(t.core_point(2.0 * std::numbers::pi * static_cast<double>(i) / per)));
        out.cloud("necklace_stage_" + std::to_string(k) + ".xyz", pts);
    }
    return validation;
}

json cmd_trap(const Params& p, Output& out, const RunConfig& cfg) {
    const auto d = p.integer("d");
    const Point x0 = p.point("x0", p.str("x0"));
    std::vector<Point> xi;
    for (const auto& c : split(p.str("centers"), ';')) xi.push_back(p.point("centers", c));
    if (d < 2 || static_cast<std::size_t>(d) != xi.size())
        throw InvalidParameter("trap needs d >= 2 and exactly d centres");
    const auto sys = build_trap(static_cast<int>(d), x0, xi, p.real("a"), p.real("b"));

    const auto stages = p.integer("stage");
    if (stages < 1 || std::pow(static_cast<double>(d), static_cast<double>(stages)) > 1e6)
        throw InvalidParameter("stage must be >= 1 with at most 1e6 balls");
    json stage_info = json::array();
    bool disjoint_all = true;
    for (int k = 1; k <= stages; ++k) {
        const auto balls = deterministic_stage(sys.system, sys.seed_region(), k);
        double diam = 0.0;
        bool disjoint = true;
        for (std::size_t i = 0; i < balls.size(); ++i) {
            diam = std::max(diam, balls[i].diameter());
            // Pairwise check is quadratic; deeper stages only report diameters.
            for (std::size_t j = i + 1; j < balls.size() && balls.size() <= 4096; ++j)
                if (balls[i].exterior || balls[j].exterior ||
                    (balls[i].center - balls[j].center).norm() <= balls[i].radius + balls[j].radius)
                    disjoint = false;
        }
        disjoint_all = disjoint_all && disjoint;
        stage_info.push_back({{"k", k}, {"components", balls.size()}, {"max_diameter", diam}, {"disjoint", disjoint}});
    }

    const auto samples = p.count("samples");
    if (samples == 0) throw InvalidParameter("samples must be positive");
    const auto sample = chaos_game(sys.system, samples, p.count("burnin"), cfg.seed);
    std::size_t inside = 0, trapped = 0;
    for (const auto& q : sample.points) {
        bool in_any = false;
        for (const auto& c : xi)
            if (!q.is_infinity() && (q.coords() - c.coords()).norm() < sys.b) in_any = true;
        inside += in_any;
        trapped += sys.trap_ball().contains(q);
    }
    out.cloud("trap_attractor.xyz", sample.points);
    json validation{{"d", d},
                    {"a", sys.a},
                    {"b", sys.b},
                    {"ratios", sys.system.ratios()},
                    {"stages", stage_info},
                    {"stages_disjoint", disjoint_all},
                    {"samples", samples},
                    {"samples_in_preimage_balls", inside},
                    {"samples_in_trap_ball", trapped},
                    {"passed", disjoint_all && inside == samples && trapped == 0}};
    out.json_file("validation.json", validation);
    return validation;
}

json cmd_perfectness(const Params& p, Output& out, const RunConfig& cfg) {
    const auto points = read_pointcloud(p.str("input"));
    AnnulusOptions opt;
    opt.min_inside = p.count("min_inside");
    opt.max_reports = p.count("max_reports");
    opt.threads = cfg.threads;
    const auto search = separating_annuli(points, opt);
    std::ostringstream csv;
    write_annulus_csv(csv, search.annuli);
    out.text_file("annuli.csv", csv.str());
    const double alpha = search.annuli.empty() ? 0.0 : search.annuli.front().modulus;
    return json{{"alpha_hat", alpha},
                {"sample_size", search.sample_size},
                {"degenerate", search.degenerate},
                {"annuli_reported", search.annuli.size()},
                {"min_inside", opt.min_inside}};
}

json cmd_dimension(const Params& p, Output&) {
    const auto ratios = p.list("ratios");
    return json{{"s", similarity_dimension(ratios)}, {"ratios", ratios}};
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Quasiregular semigroup dynamics laboratory", "uqrlab"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    auto* config_opt = app.add_option("--config", config_path, "key = value config file");
    std::map<std::string, std::string> common_values;
    std::map<std::string, CLI::Option*> common_opts;
    for (const auto& k : common_keys())
        common_opts[k.name] = app.add_option("--" + k.name, common_values[k.name], k.help);

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::map<std::string, CLI::Option*>> opts;
    for (const auto& c : commands()) {
        auto* sub = app.add_subcommand(c.name, c.help);
        for (const auto& k : c.keys) {
            std::string help = k.help;
            if (k.fallback) help += " (default " + *k.fallback + ")";
            opts[c.name][k.name] = sub->add_option("--" + k.name, values[c.name][k.name], help);
        }
    }

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, out);
        return std::nullopt;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, out);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw InvalidParameter(e.what());
    }

    const auto subs = app.get_subcommands();
    const Command& cmd = find_command(subs.front()->get_name());

    std::map<std::string, std::string> resolved;
    std::set<std::string> allowed;
    for (const auto& k : common_keys()) {
        allowed.insert(k.name);
        resolved[k.name] = *k.fallback;
    }
    for (const auto& k : cmd.keys) {
        allowed.insert(k.name);
        if (k.fallback) resolved[k.name] = *k.fallback;
    }
    if (config_opt->count() > 0) {
        for (const auto& [key, value] : read_config_file(config_path)) {
            if (!allowed.count(key)) throw InvalidParameter("unknown key '" + key + "' in config file for " + cmd.name);
            resolved[key] = value;
        }
    }
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) resolved["out"] = env;
    for (const auto& [name, opt] : common_opts)
        if (opt->count() > 0) resolved[name] = common_values[name];
    for (const auto& [name, opt] : opts[cmd.name])
        if (opt->count() > 0) resolved[name] = values[cmd.name][name];
    for (const auto& k : cmd.keys)
        if (!resolved.count(k.name)) throw InvalidParameter("missing required parameter --" + k.name);

    RunConfig cfg;
    cfg.command = cmd.name;
    const auto seed = to_int("seed", resolved["seed"]);
    if (seed < 0) throw InvalidParameter("--seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto threads = to_int("threads", resolved["threads"]);
    if (threads < 0 || threads > 1024) throw InvalidParameter("--threads must lie in 0..1024");
    cfg.threads = static_cast<unsigned>(threads);
    if (resolved["out"].empty()) throw InvalidParameter("--out must not be empty");
    cfg.output_dir = resolved["out"];
    for (const auto& k : cmd.keys) cfg.params[k.name] = resolved[k.name];
    return cfg;
}

namespace {

json manifest_base(const RunConfig& cfg) {
    json config = json::object();
    for (const auto& [k, v] : cfg.params) config[k] = v;
    return json{{"command", cfg.command},
                {"config", config},
                {"seed", cfg.seed},
                {"threads", cfg.threads},
                {"output_dir", cfg.output_dir.string()}};
}

void write_manifest(const fs::path& dir, const json& manifest) {
    std::ofstream os(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    os << manifest.dump(2) << '\n';
    if (!os) throw Error("io-error", "failed writing manifest");
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error("io-error", "cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

    Output o{cfg.output_dir, {}, 0};
    const Params p(cfg);
    int code = 0;
    json result;
    if (cfg.command == "julia-sphere") {
        result = cmd_julia_sphere(p, o);
    } else if (cfg.command == "ring") {
        result = cmd_ring(p, o);
    } else if (cfg.command == "cantor-shell") {
        result = cmd_cantor_shell(p, o, cfg);
    } else if (cfg.command == "necklace") {
        result = cmd_necklace(p, o);
    } else if (cfg.command == "trap") {
        result = cmd_trap(p, o, cfg);
    } else if (cfg.command == "perfectness") {
        result = cmd_perfectness(p, o, cfg);
    } else if (cfg.command == "dimension") {
        result = cmd_dimension(p, o);
    } else if (cfg.command == "verify") {
        json rows = json::array();
        std::size_t passed = 0;
        const auto results = run_acceptance([&](const CriterionResult& r) {
            out << format_result(r) << '\n' << std::flush;
        });
        for (const auto& r : results) {
            passed += r.passed;
            rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
        }
        out << passed << "/" << results.size() << " criteria passed\n";
        result = json{{"passed", passed}, {"total", results.size()}, {"criteria", rows}};
        code = passed == results.size() ? 0 : 1;
    } else {
        throw InvalidParameter("unknown command '" + cfg.command + "'");
    }
    if (cfg.command != "verify") {
        o.json_file("result.json", result);
        out << result.dump(2) << '\n';
    } else {
        o.json_file("verify.json", result);
    }

    json manifest = manifest_base(cfg);
    manifest["status"] = code == 0 ? "ok" : "failed";
    manifest["exit_code"] = code;
    manifest["artifacts"] = o.artifacts;
    manifest["warnings"] = {{"dropped_infinite_points", o.dropped_infinite}};
    write_manifest(cfg.output_dir, manifest);
    return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    auto report = [&](const std::string& code, const std::string& message) {
        err << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
    };
    auto exit_code = [](const std::string& code) {
        return code == "invalid-parameter" || code == "budget-exceeded" || code == "construction-failed" ? 2 : 1;
    };
    std::optional<RunConfig> cfg;
    try {
        cfg = parse_args(argc, argv, out);
        if (!cfg) return 0;
        return execute(*cfg, out);
    } catch (const Error& e) {
        const int code = exit_code(e.code());
        report(e.code(), e.what());
        if (cfg) {
            try {
                json manifest = manifest_base(*cfg);
                manifest["status"] = "error";
                manifest["exit_code"] = code;
                manifest["error"] = {{"code", e.code()}, {"message", e.what()}};
                fs::create_directories(cfg->output_dir);
                write_manifest(cfg->output_dir, manifest);
            } catch (const std::exception&) {
                // The error report on stderr is what matters here.
            }
        }
        return code;
    } catch (const std::exception& e) {
        report("internal-error", e.what());
        return 1;
    }
}

}  // namespace uqr::cli
