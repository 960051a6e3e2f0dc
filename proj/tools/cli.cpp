#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "elf/error.hpp"
#include "elf/metrics.hpp"
#include "elf/parallel.hpp"
#include "elf/rng.hpp"
#include "elf/runtime_model.hpp"
#include "elf/sim.hpp"
#include "elf/tuner.hpp"
#include "elf/version.hpp"

namespace elf::cli {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorKind::Usage, msg); }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::map<std::string, SchemeKind> kSchemes{{"af", SchemeKind::AF}, {"ab", SchemeKind::AB}};
const std::map<std::string, Objective> kObjectives{{"fisher", Objective::Fisher}, {"slope", Objective::Slope}};
const std::map<std::string, Method> kMethods{{"grad", Method::GradientAscent}, {"coord", Method::CoordinateAscent}};

// Options every command shares.
struct Common {
    std::string config;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    int threads = 1;
    std::string out = "-";
    std::string sidecar;
};

void add_common(CLI::App* sub, Common& c, bool seeded, bool has_out) {
    sub->add_option("--config", c.config, "JSON object of option values (keys are flag names); flags win");
    if (seeded) c.seed_opt = sub->add_option("--seed", c.seed, "master seed; drawn and printed when absent");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    if (has_out) {
        sub->add_option("--out", c.out, "output file, - for stdout");
        sub->add_option("--sidecar", c.sidecar, "provenance JSON path (default <out>.meta.json)");
    }
}

// Fills options not given on the command line from the --config document.
void merge_config(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        usage("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) usage("config file must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
        CLI::Option* op = key == "config" || key == "help" ? nullptr : sub->get_option_no_throw("--" + key);
        if (!op) usage("unknown config key '" + key + "'");
        if (op->count() > 0) continue;
        auto text = [&](const json& v) -> std::string {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
            if (v.is_number()) return v.dump();
            usage("config key '" + key + "' has an unsupported value");
        };
        std::vector<std::string> inputs;
        if (value.is_array())
            for (const json& v : value) inputs.push_back(text(v));
        else
            inputs.push_back(text(value));
        op->add_result(inputs);
        op->run_callback();
    }
}

std::uint64_t resolve_seed(const Common& c, std::ostream& err) {
    if (c.seed_opt->count() > 0) return c.seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << s << '\n';
    return s;
}

void require(CLI::Option* op, std::vector<std::string>& problems) {
    if (op->count() == 0) problems.push_back(op->get_name() + " is required");
}

void check_problems(const std::vector<std::string>& problems) {
    if (problems.empty()) return;
    std::string msg;
    for (const std::string& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    usage(msg);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !(f.flush())) throw Error(ErrorKind::Io, "cannot write " + path);
}

// Primary output to a file or stdout, then the sidecar when it has somewhere to go.
void emit(const Common& c, const std::string& primary, const json& sidecar, std::ostream& out) {
    if (c.out == "-")
        out << primary;
    else
        write_file(c.out, primary);
    std::string side = c.sidecar;
    if (side.empty() && c.out != "-") side = c.out + ".meta.json";
    if (!side.empty()) write_file(side, sidecar.dump(2) + "\n");
}

json provenance(const std::string& command, json config, const Common& c, std::uint64_t seed) {
    config["seed"] = seed;
    config["threads"] = c.threads;
    return json{{"tool", "elf"}, {"version", version_string()}, {"command", command}, {"config", std::move(config)}};
}

// ---- tune ----

struct TuneOpts {
    Common c;
    SchemeKind scheme = SchemeKind::AF;
    Objective objective = Objective::Fisher;
    Method method = Method::CoordinateAscent;
    double mu = 0.0;
    CLI::Option* mu_opt = nullptr;
    int layers = 1;
    double layer_fidelity = 1.0, spam_fidelity = 1.0;
    int restarts = 10;
};

void add_model(CLI::App* sub, SchemeKind& scheme, int& layers, double& p, double& pbar) {
    sub->add_option("--scheme", scheme, "af or ab")->transform(CLI::CheckedTransformer(kSchemes));
    sub->add_option("--layers", layers, "circuit layers L")->check(CLI::PositiveNumber);
    sub->add_option("--layer-fidelity", p, "layer fidelity p")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--spam-fidelity", pbar, "SPAM fidelity p-bar")->check(CLI::Range(0.0, 1.0));
}

int cmd_tune(TuneOpts& o, std::ostream& out, std::ostream& err) {
    std::vector<std::string> problems;
    require(o.mu_opt, problems);
    check_problems(problems);
    const std::uint64_t seed = resolve_seed(o.c, err);
    const NoiseModel noise{o.layer_fidelity, o.spam_fidelity};
    noise.validate();
    TuneSpec s;
    s.scheme = o.scheme;
    s.objective = o.objective;
    s.method = o.method;
    s.layers = o.layers;
    s.mu = o.mu;
    s.f = noise.process_fidelity(o.layers);
    s.restarts = o.restarts;
    s.seed = seed;
    TuneResult r = tune(s, o.c.threads);
    json doc = provenance("tune",
                          {{"scheme", to_string(o.scheme)},
                           {"objective", to_string(o.objective)},
                           {"method", to_string(o.method)},
                           {"mu", o.mu},
                           {"layers", o.layers},
                           {"layer-fidelity", o.layer_fidelity},
                           {"spam-fidelity", o.spam_fidelity},
                           {"restarts", o.restarts}},
                          o.c, seed);
    doc["schema"] = "elf-tune/1";
    doc["result"] = {{"x_opt", r.x_opt.values()},
                     {"objective_value", r.objective_value},
                     {"iterations", r.iterations},
                     {"restart_index", r.restart_index},
                     {"converged", r.converged}};
    out << doc.dump(2) << '\n';
    return kExitOk;
}

// ---- table ----

struct TableOpts {
    Common c;
    SchemeKind scheme = SchemeKind::AF;
    Objective objective = Objective::Fisher;
    Method method = Method::CoordinateAscent;
    int layers = 1;
    double layer_fidelity = 1.0, spam_fidelity = 1.0;
    int grid = 4001;
    double pi_min = -1.0, pi_max = 1.0;
    int restarts = 10;
    CLI::Option* out_opt = nullptr;
};

int cmd_table(TableOpts& o, std::ostream& out, std::ostream& err) {
    std::vector<std::string> problems;
    if (o.c.out == "-") problems.push_back("--out FILE is required");
    check_problems(problems);
    const std::uint64_t seed = resolve_seed(o.c, err);
    TableOptions t;
    t.scheme = o.scheme;
    t.objective = o.objective;
    t.method = o.method;
    t.layers = o.layers;
    t.noise = {o.layer_fidelity, o.spam_fidelity};
    t.grid = {o.pi_min, o.pi_max, o.grid};
    t.restarts = o.restarts;
    t.seed = seed;
    t.threads = o.c.threads;
    std::size_t last_pct = 101;
    t.progress = [&](std::size_t done, std::size_t total) {
        const std::size_t pct = 100 * done / total;
        if (pct != last_pct && (pct % 5 == 0 || done == total)) err << "table: " << done << '/' << total << '\n';
        last_pct = pct;
    };
    LookupTable table = build_lookup_table(t);
    json side = provenance("table",
                           {{"scheme", to_string(o.scheme)},
                            {"objective", to_string(o.objective)},
                            {"method", to_string(o.method)},
                            {"layers", o.layers},
                            {"layer-fidelity", o.layer_fidelity},
                            {"spam-fidelity", o.spam_fidelity},
                            {"grid", o.grid},
                            {"pi-min", o.pi_min},
                            {"pi-max", o.pi_max},
                            {"restarts", o.restarts}},
                           o.c, seed);
    emit(o.c, table_to_json(table), side, out);
    return kExitOk;
}

// ---- scan ----

struct ScanOpts {
    Common c;
    std::string quantity = "fisher";
    SchemeKind scheme = SchemeKind::AF;
    int layers = 1;
    double layer_fidelity = 1.0, spam_fidelity = 1.0;
    double lo = 0.0, hi = 0.0;
    int points = 0;
    CLI::Option *lo_opt = nullptr, *hi_opt = nullptr, *points_opt = nullptr;
    int restarts = 10;
};

int cmd_scan(ScanOpts& o, std::ostream& out, std::ostream& err) {
    const bool over_pi = o.quantity == "rhat0";
    const double lo = o.lo_opt->count() ? o.lo : over_pi ? -0.9 : 0.005;
    const double hi = o.hi_opt->count() ? o.hi : over_pi ? 0.9 : std::numbers::pi - 0.005;
    const int n = o.points_opt->count() ? o.points : over_pi ? 3601 : 629;
    std::vector<std::string> problems;
    if (n < 2) problems.push_back("--points must be at least 2");
    if (!(lo < hi)) problems.push_back("--min must be below --max");
    if (over_pi && (lo <= -1.0 || hi >= 1.0)) problems.push_back("Pi grid must lie inside (-1, 1)");
    if (!over_pi && (lo <= 0.0 || hi >= std::numbers::pi)) problems.push_back("theta grid must lie inside (0, pi)");
    check_problems(problems);
    const std::uint64_t seed = resolve_seed(o.c, err);
    const NoiseModel noise{o.layer_fidelity, o.spam_fidelity};
    noise.validate();
    const double f = noise.process_fidelity(o.layers);
    const AngleVector clf = AngleVector::chebyshev(o.layers);
    const Objective obj = o.quantity == "slope" ? Objective::Slope : Objective::Fisher;

    auto value = [&](double axis, const AngleVector& x) {
        if (o.quantity == "fisher") return fisher_information(o.scheme, axis, f, x);
        if (o.quantity == "slope") return slope(o.scheme, axis, f, x);
        return rhat0(o.scheme, axis, f, x);
    };
    std::vector<double> axis(n), clf_v(n), elf_v(n);
    for (int i = 0; i < n; ++i) axis[i] = lo + (hi - lo) * i / (n - 1);
    parallel_for(static_cast<std::size_t>(n), o.c.threads, [&](std::size_t i) {
        TuneSpec s;
        s.scheme = o.scheme;
        s.objective = obj;
        s.layers = o.layers;
        s.mu = over_pi ? std::acos(axis[i]) : axis[i];
        s.f = f;
        s.restarts = o.restarts;
        s.seed = stream_seed(seed, i);
        clf_v[i] = value(axis[i], clf);
        elf_v[i] = value(axis[i], tune(s).x_opt);
    });
    std::string csv = std::string(over_pi ? "pi" : "theta") + ",clf_value,elf_value\n";
    for (int i = 0; i < n; ++i) csv += num(axis[i]) + ',' + num(clf_v[i]) + ',' + num(elf_v[i]) + '\n';
    json side = provenance("scan",
                           {{"quantity", o.quantity},
                            {"scheme", to_string(o.scheme)},
                            {"layers", o.layers},
                            {"layer-fidelity", o.layer_fidelity},
                            {"spam-fidelity", o.spam_fidelity},
                            {"min", lo},
                            {"max", hi},
                            {"points", n},
                            {"restarts", o.restarts}},
                           o.c, seed);
    emit(o.c, csv, side, out);
    return kExitOk;
}

// ---- simulate ----

struct SimOpts {
    Common c;
    ExperimentScheme scheme = ExperimentScheme::AfElf;
    double true_pi = 0.0, prior_mean = 0.0, prior_var = 0.0009;
    CLI::Option *true_opt = nullptr, *prior_opt = nullptr;
    int layers = 1;
    double layer_fidelity = 1.0, spam_fidelity = 1.0;
    int runs = 300;
    double horizon = 1e4;
    std::string table, trace;
    int restarts = 10;
    int fit_points = 11;
    int per_decade = 50;
    double fit_discard = 0.25;
};

int cmd_simulate(SimOpts& o, std::ostream& out, std::ostream& err) {
    std::vector<std::string> problems;
    require(o.true_opt, problems);
    require(o.prior_opt, problems);
    const bool elf = o.scheme == ExperimentScheme::AfElf || o.scheme == ExperimentScheme::AbElf;
    if (!o.table.empty() && !elf) problems.push_back("--table only applies to af-elf and ab-elf");
    check_problems(problems);
    const std::uint64_t seed = resolve_seed(o.c, err);

    std::optional<LookupTable> table;
    if (!o.table.empty()) table = table_from_json(read_file(o.table));
    ExperimentConfig cfg;
    cfg.scheme = o.scheme;
    cfg.true_pi = o.true_pi;
    cfg.prior_pi = {o.prior_mean, o.prior_var};
    cfg.layers = o.layers;
    cfg.noise = {o.layer_fidelity, o.spam_fidelity};
    cfg.runs = o.runs;
    cfg.horizon = o.horizon;
    cfg.master_seed = seed;
    cfg.threads = o.c.threads;
    cfg.fit_points = o.fit_points;
    cfg.table = table ? &*table : nullptr;
    cfg.fresh_tune.restarts = o.restarts;
    cfg.checkpoints_per_decade = o.per_decade;
    cfg.fit_discard = o.fit_discard;
    if (elf && table && table->noise.layer_fidelity != o.layer_fidelity)
        err << "warning: table was tuned for layer fidelity " << table->noise.layer_fidelity << '\n';

    ExperimentResult r = run_experiment(cfg);
    for (const ExcludedRun& x : r.excluded) err << "excluded run " << x.run << ": " << x.reason << '\n';

    if (!o.trace.empty()) {
        std::vector<RoundRecord> tr;
        if (o.scheme == ExperimentScheme::Standard) {
            Rng rng(stream_seed(seed, 0));
            tr = standard_sampling_run(cfg.true_pi, cfg.noise, cfg.horizon, rng);
        } else {
            EstimationConfig ec;
            ec.scheme = o.scheme == ExperimentScheme::AfElf || o.scheme == ExperimentScheme::AfClf ? SchemeKind::AF
                                                                                                   : SchemeKind::AB;
            ec.chebyshev = !elf;
            ec.layers = cfg.layers;
            ec.noise = cfg.noise;
            ec.true_pi = cfg.true_pi;
            ec.prior_pi = cfg.prior_pi;
            ec.time_budget = cfg.horizon;
            ec.fit_points = cfg.fit_points;
            ec.table = cfg.table;
            ec.fresh_tune = cfg.fresh_tune;
            ec.seed = stream_seed(seed, 0);
            tr = run_estimation(ec);
        }
        std::ostringstream ts;
        write_trace_csv(ts, tr);
        write_file(o.trace, ts.str());
    }

    std::ostringstream csv;
    write_experiment_csv(csv, r);
    json side = provenance("simulate",
                           {{"scheme", to_string(o.scheme)},
                            {"true-pi", o.true_pi},
                            {"prior-mean", o.prior_mean},
                            {"prior-var", o.prior_var},
                            {"layers", o.layers},
                            {"layer-fidelity", o.layer_fidelity},
                            {"spam-fidelity", o.spam_fidelity},
                            {"runs", o.runs},
                            {"horizon", o.horizon},
                            {"table", o.table},
                            {"restarts", o.restarts},
                            {"fit-points", o.fit_points},
                            {"checkpoints-per-decade", o.per_decade},
                            {"fit-discard", o.fit_discard}},
                           o.c, seed);
    side["growth_rate"] = r.growth_rate;
    side["intercept"] = r.intercept;
    side["r_squared"] = r.r_squared;
    side["fit_points"] = r.fit_points;
    side["runs_used"] = r.runs_used;
    json ex = json::array();
    for (const ExcludedRun& x : r.excluded) ex.push_back({{"run", x.run}, {"reason", x.reason}});
    side["excluded"] = ex;
    emit(o.c, csv.str(), side, out);
    err << "growth rate " << num(r.growth_rate) << " (R^2 " << num(r.r_squared) << ", " << r.runs_used << " runs)\n";
    return kExitOk;
}

// ---- runtime ----

struct RuntimeOpts {
    Common c;
    HardwareParams hw;
    std::vector<double> eps{1e-3, 1e-4, 1e-5};
    std::vector<double> f2q;
    double nines_min = 2.0, nines_max = 9.0;
    int points = 141;
};

int cmd_runtime(RuntimeOpts& o, std::ostream& out, std::ostream&) {
    std::vector<std::string> problems;
    if (o.f2q.empty() && o.points < 2) problems.push_back("--points must be at least 2");
    if (o.f2q.empty() && !(o.nines_min < o.nines_max)) problems.push_back("--nines-min must be below --nines-max");
    check_problems(problems);
    std::vector<double> f2q = o.f2q;
    if (f2q.empty())
        for (int i = 0; i < o.points; ++i)
            f2q.push_back(1.0 - std::pow(10.0, -(o.nines_min + (o.nines_max - o.nines_min) * i / (o.points - 1))));
    auto rows = hardware_runtime_curve(o.hw, f2q, o.eps);
    std::string csv = "f2q,eps,t_lower_s,t_upper_s,t_mid_s,flag\n";
    for (const HardwareRow& r : rows) {
        csv += num(r.f2q) + ',' + num(r.eps) + ',';
        if (r.valid)
            csv += num(r.t_lower_s) + ',' + num(r.t_upper_s) + ',' + num(r.t_mid_s) + ',';
        else
            csv += ",,,";
        csv += csv_field(r.flag) + '\n';
    }
    json side{{"tool", "elf"},
              {"version", version_string()},
              {"command", "runtime"},
              {"config",
               {{"qubits", o.hw.qubits},
                {"depth", o.hw.depth},
                {"gate-time", o.hw.gate_time},
                {"spam-fidelity", o.hw.spam_fidelity},
                {"pi", o.hw.pi},
                {"eps", o.eps},
                {"f2q", f2q},
                {"threads", o.c.threads}}}};
    emit(o.c, csv, side, out);
    return kExitOk;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Numeric: return kExitNumeric;
        case ErrorKind::Io: return kExitIo;
        case ErrorKind::Domain:
        case ErrorKind::Usage: return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Engineered likelihood functions for amplitude estimation", "elf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    TuneOpts to;
    CLI::App* tune_cmd = app.add_subcommand("tune", "tune circuit angles at one theta; JSON on stdout");
    add_common(tune_cmd, to.c, true, false);
    add_model(tune_cmd, to.scheme, to.layers, to.layer_fidelity, to.spam_fidelity);
    tune_cmd->add_option("--objective", to.objective, "fisher or slope")->transform(CLI::CheckedTransformer(kObjectives));
    tune_cmd->add_option("--method", to.method, "grad or coord")->transform(CLI::CheckedTransformer(kMethods));
    to.mu_opt = tune_cmd->add_option("--mu", to.mu, "tuning point theta in (0, pi)");
    tune_cmd->add_option("--restarts", to.restarts, "optimizer restarts")->check(CLI::PositiveNumber);

    TableOpts ta;
    CLI::App* table_cmd = app.add_subcommand("table", "build a lookup table of tuned angles over a Pi grid");
    add_common(table_cmd, ta.c, true, true);
    add_model(table_cmd, ta.scheme, ta.layers, ta.layer_fidelity, ta.spam_fidelity);
    table_cmd->add_option("--objective", ta.objective, "fisher or slope")->transform(CLI::CheckedTransformer(kObjectives));
    table_cmd->add_option("--method", ta.method, "grad or coord")->transform(CLI::CheckedTransformer(kMethods));
    table_cmd->add_option("--grid", ta.grid, "grid points")->check(CLI::PositiveNumber);
    table_cmd->add_option("--pi-min", ta.pi_min, "lowest Pi");
    table_cmd->add_option("--pi-max", ta.pi_max, "highest Pi");
    table_cmd->add_option("--restarts", ta.restarts, "optimizer restarts")->check(CLI::PositiveNumber);

    ScanOpts so;
    CLI::App* scan_cmd = app.add_subcommand("scan", "CLF against tuned ELF over a theta or Pi grid; CSV");
    add_common(scan_cmd, so.c, true, true);
    add_model(scan_cmd, so.scheme, so.layers, so.layer_fidelity, so.spam_fidelity);
    scan_cmd->add_option("--quantity", so.quantity, "fisher, slope (over theta) or rhat0 (over Pi)")
        ->check(CLI::IsMember({"fisher", "slope", "rhat0"}));
    so.lo_opt = scan_cmd->add_option("--min", so.lo, "grid start");
    so.hi_opt = scan_cmd->add_option("--max", so.hi, "grid end");
    so.points_opt = scan_cmd->add_option("--points", so.points, "grid points");
    scan_cmd->add_option("--restarts", so.restarts, "optimizer restarts")->check(CLI::PositiveNumber);

    SimOpts si;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimation experiment; CSV plus JSON sidecar");
    add_common(sim_cmd, si.c, true, true);
    sim_cmd->add_option("--scheme", si.scheme, "af-elf, af-clf, ab-elf, ab-clf or standard")
        ->transform(CLI::CheckedTransformer(std::map<std::string, ExperimentScheme>{
            {"af-elf", ExperimentScheme::AfElf},
            {"af-clf", ExperimentScheme::AfClf},
            {"ab-elf", ExperimentScheme::AbElf},
            {"ab-clf", ExperimentScheme::AbClf},
            {"standard", ExperimentScheme::Standard}}));
    si.true_opt = sim_cmd->add_option("--true-pi", si.true_pi, "true Pi");
    si.prior_opt = sim_cmd->add_option("--prior-mean", si.prior_mean, "prior mean of Pi");
    sim_cmd->add_option("--prior-var", si.prior_var, "prior variance of Pi")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--layers", si.layers, "circuit layers L")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--layer-fidelity", si.layer_fidelity, "layer fidelity p")->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--spam-fidelity", si.spam_fidelity, "SPAM fidelity p-bar")->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--runs", si.runs, "independent runs M")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--horizon", si.horizon, "time budget per run in ansatz durations")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--table", si.table, "lookup table JSON for ELF schemes");
    sim_cmd->add_option("--restarts", si.restarts, "restarts for per-round tuning without a table")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--fit-points", si.fit_points, "points in the sinusoid fit")->check(CLI::Range(2, 1000));
    sim_cmd->add_option("--checkpoints-per-decade", si.per_decade, "checkpoint density")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--fit-discard", si.fit_discard, "leading horizon fraction left out of the rate fit")
        ->check(CLI::Range(0.0, 0.99));
    sim_cmd->add_option("--trace", si.trace, "write the round trace of run 0 to this CSV");

    RuntimeOpts ro;
    CLI::App* rt_cmd = app.add_subcommand("runtime", "runtime model in seconds against two-qubit gate fidelity");
    add_common(rt_cmd, ro.c, false, true);
    rt_cmd->add_option("--qubits", ro.hw.qubits, "qubits n")->check(CLI::PositiveNumber);
    rt_cmd->add_option("--depth", ro.hw.depth, "two-qubit gate depth per layer D")->check(CLI::PositiveNumber);
    rt_cmd->add_option("--gate-time", ro.hw.gate_time, "seconds per two-qubit gate layer G")
        ->check(CLI::PositiveNumber);
    rt_cmd->add_option("--spam-fidelity", ro.hw.spam_fidelity, "SPAM fidelity p-bar")->check(CLI::Range(0.0, 1.0));
    rt_cmd->add_option("--pi", ro.hw.pi, "Pi used to convert eps to theta");
    rt_cmd->add_option("--eps", ro.eps, "target errors")->delimiter(',')->check(CLI::PositiveNumber);
    rt_cmd->add_option("--f2q", ro.f2q, "explicit two-qubit gate fidelities")->delimiter(',');
    rt_cmd->add_option("--nines-min", ro.nines_min, "fewest nines of f2q on the default grid");
    rt_cmd->add_option("--nines-max", ro.nines_max, "most nines of f2q on the default grid");
    rt_cmd->add_option("--points", ro.points, "default grid points");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }
    CLI::App* sub = app.get_subcommands().front();
    try {
        const std::string* cfg = sub == tune_cmd    ? &to.c.config
                                 : sub == table_cmd ? &ta.c.config
                                 : sub == scan_cmd  ? &so.c.config
                                 : sub == sim_cmd   ? &si.c.config
                                                    : &ro.c.config;
        if (!cfg->empty()) merge_config(sub, *cfg);
        if (sub == tune_cmd) return cmd_tune(to, out, err);
        if (sub == table_cmd) return cmd_table(ta, out, err);
        if (sub == scan_cmd) return cmd_scan(so, out, err);
        if (sub == sim_cmd) return cmd_simulate(si, out, err);
        return cmd_runtime(ro, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
}

}  // namespace elf::cli
