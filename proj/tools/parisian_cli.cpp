#include "parisian/asymptotics.hpp"
#include "parisian/model.hpp"
#include "parisian/montecarlo.hpp"
#include "parisian/paths.hpp"
#include "parisian/report.hpp"
#include "parisian/validation.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace parisian;

namespace {

constexpr const char* seed_env = "PARISIAN_SEED";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    double u = 1.0;
    double a = 1.0;
    double rho = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double T = 1.0;
    std::optional<double> H;
    std::optional<double> S;
    double L = 0.0;

    std::uint64_t n_paths = 100000;
    double dt = 0.0;
    std::optional<std::uint64_t> seed;
    std::uint64_t batch_size = 1000;
    double ci_level = 0.99;
    double T_trunc = 20.0;
    double truncation_tolerance = 0.01;
    unsigned workers = 0;

    std::string format = "csv";
    std::string output;
    bool timing = false;
    std::string sweep;
    std::string config;

    std::string kind;
    std::string tail_mode = "exact";
    double L1 = 0.1;
    double L2 = 0.1;
    std::string xs = "0";
    std::string profile = "quick";
    std::string criteria;

    // Resolved seed and where it came from.
    std::uint64_t seed_value = 1;
    std::string seed_source = "default";
};

struct Sweep {
    std::string name;
    std::vector<double> values;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw UsageError(flag + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) {
        throw UsageError(flag + ": empty list");
    }
    return out;
}

std::optional<Sweep> parse_sweep(const std::string& text, const std::vector<std::string>& allowed) {
    if (text.empty()) {
        return std::nullopt;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw UsageError("--sweep: expected name=v1,v2,...");
    }
    Sweep s{text.substr(0, eq), parse_list(text.substr(eq + 1), "--sweep")};
    if (std::find(allowed.begin(), allowed.end(), s.name) == allowed.end()) {
        std::string names;
        for (const std::string& a : allowed) {
            names += (names.empty() ? "" : ", ") + a;
        }
        throw UsageError("--sweep: cannot sweep '" + s.name + "' here (allowed: " + names + ")");
    }
    return s;
}

ModelInputs base_inputs(const Options& o) {
    if (o.H && o.S) {
        throw UsageError("--H and --S are mutually exclusive");
    }
    ModelInputs in;
    in.u = o.u;
    in.a = o.a;
    in.rho = o.rho;
    in.c1 = o.c1;
    in.c2 = o.c2;
    in.T = o.T;
    in.window = o.S ? Window::scaled(*o.S) : Window::absolute(o.H.value_or(0.0));
    in.L = o.L;
    return in;
}

void apply(ModelInputs& in, const std::string& name, double v) {
    if (name == "u") {
        in.u = v;
    } else if (name == "rho") {
        in.rho = v;
    } else if (name == "H") {
        in.window = Window::absolute(v);
    } else if (name == "S") {
        in.window = Window::scaled(v);
    } else if (name == "L") {
        in.L = v;
    }
}

std::vector<ModelParams> model_points(const Options& o, const std::optional<Sweep>& sweep) {
    std::vector<ModelParams> out;
    if (!sweep) {
        out.emplace_back(base_inputs(o));
        return out;
    }
    for (double v : sweep->values) {
        ModelInputs in = base_inputs(o);
        apply(in, sweep->name, v);
        out.emplace_back(in);
    }
    return out;
}

McConfig mc_config(const Options& o) {
    McConfig cfg;
    cfg.n_paths = o.n_paths;
    cfg.dt = o.dt;
    cfg.seed = o.seed_value;
    cfg.batch_size = o.batch_size;
    cfg.ci_level = o.ci_level;
    cfg.T_trunc = o.T_trunc;
    cfg.workers = o.workers;
    cfg.truncation_tolerance = o.truncation_tolerance;
    cfg.validate();
    return cfg;
}

class Stopwatch {
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
    // Zero unless timing was requested, so default output is reproducible.
    double elapsed_ms() const {
        if (!enabled_) {
            return 0.0;
        }
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

Record head(const Options& o, const std::string& command, const std::string& kind) {
    Record r;
    r.set("command", command).set("kind", kind).set("seed_source", o.seed_source);
    return r;
}

void add_model(Record& r, double u, double a, double rho, double c1, double c2) {
    r.set("u", u).set("a", a).set("rho", rho).set("c1", c1).set("c2", c2);
}

void add_effective(Record& r, const EffectiveParams& e) {
    r.set("T", e.T).set("H", e.H).set("S", e.S).set("L", e.L);
}

void add_result(Record& r, double value, double se, double lo, double hi, std::uint64_t n, double dt,
                std::uint64_t seed, Regime regime, double wall_ms) {
    r.set("value", value)
        .set("stderr", se)
        .set("ci_low", lo)
        .set("ci_high", hi)
        .set("n_paths", n)
        .set("dt", dt)
        .set("seed", seed)
        .set("regime", to_string(regime))
        .set("wall_time_ms", wall_ms);
}

void add_estimate(Record& r, const Estimate& e, Regime regime, double wall_ms) {
    add_result(r, e.value, e.std_error, e.ci_low, e.ci_high, e.n_paths, e.dt, e.seed, regime, wall_ms);
}

std::vector<Record> run_tail(const Options& o) {
    const auto sweep = parse_sweep(o.sweep, {"u", "rho"});
    std::vector<Record> out;
    for (const ModelParams& p : model_points(o, sweep)) {
        const Stopwatch clock(o.timing);
        const double exact = tail_exact(p.u(), p.a(), p.rho(), p.c1(), p.c2());
        const double asym = tail_asym_gaussian(p.u(), p.a(), p.rho(), p.c1(), p.c2());
        Record r = head(o, "tail", "");
        add_model(r, p.u(), p.a(), p.rho(), p.c1(), p.c2());
        r.set("exact", exact).set("asymptotic", asym).set("ratio", exact / asym);
        add_result(r, exact, 0.0, exact, exact, 0, EffectiveParams::unset, o.seed_value,
                   classify_regime(p.a(), p.rho()), clock.elapsed_ms());
        out.push_back(std::move(r));
    }
    return out;
}

RuinKind ruin_kind(const std::string& k) {
    if (k == "simultaneous") {
        return RuinKind::simultaneous;
    }
    if (k == "parisian") {
        return RuinKind::parisian;
    }
    if (k == "cumulative") {
        return RuinKind::cumulative;
    }
    throw UsageError("--kind: expected simultaneous, parisian or cumulative, got '" + k + "'");
}

std::vector<Record> run_simulate(const Options& o) {
    const RuinKind kind = ruin_kind(o.kind);
    const auto sweep = parse_sweep(o.sweep, {"u", "S", "L", "H", "rho"});
    const std::vector<ModelParams> params = model_points(o, sweep);
    const McConfig cfg = mc_config(o);
    std::vector<Estimate> est;
    const Stopwatch clock(o.timing);
    if (sweep && sweep->name == "rho") {
        for (const ModelParams& p : params) {
            est.push_back(estimate_sweep(kind, std::span<const ModelParams>(&p, 1), cfg).front());
        }
    } else {
        est = estimate_sweep(kind, params, cfg);
    }
    const double wall = clock.elapsed_ms();
    std::vector<Record> out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const ModelParams& p = params[i];
        Record r = head(o, "simulate", to_string(kind));
        add_model(r, p.u(), p.a(), p.rho(), p.c1(), p.c2());
        add_effective(r, est[i].effective);
        add_estimate(r, est[i], classify_regime(p.a(), p.rho()), wall);
        out.push_back(std::move(r));
    }
    return out;
}

bool cumulative_kind(const std::string& k) {
    if (k == "parisian") {
        return false;
    }
    if (k == "cumulative") {
        return true;
    }
    throw UsageError("--kind: expected parisian or cumulative, got '" + k + "'");
}

std::vector<Record> run_constant(const Options& o) {
    const bool cumulative = cumulative_kind(o.kind);
    const auto sweep = parse_sweep(o.sweep, {cumulative ? "L" : "S", "rho"});
    const McConfig cfg = mc_config(o);
    const double base = cumulative ? o.L : o.S.value_or(0.0);
    std::vector<double> rhos{o.rho};
    std::vector<double> vals{base};
    if (sweep && sweep->name == "rho") {
        rhos = sweep->values;
    } else if (sweep) {
        vals = sweep->values;
    }
    std::vector<Record> out;
    for (double rho : rhos) {
        const Stopwatch clock(o.timing);
        const std::vector<Estimate> est = cumulative ? estimate_constant_cumulative_sweep(o.a, rho, vals, cfg)
                                                     : estimate_constant_parisian_sweep(o.a, rho, vals, cfg);
        const double wall = clock.elapsed_ms();
        for (const Estimate& e : est) {
            Record r = head(o, "constant", o.kind);
            r.set("a", o.a).set("rho", rho).set("S", e.effective.S).set("L", e.effective.L);
            r.set("T_trunc", e.effective.T_trunc)
                .set("truncation_change", e.effective.truncation_change)
                .set("truncation_flag", e.effective.truncation_flag);
            add_estimate(r, e, classify_regime(o.a, rho), wall);
            out.push_back(std::move(r));
        }
    }
    return out;
}

TailMode tail_mode(const std::string& s) {
    if (s == "exact") {
        return TailMode::exact;
    }
    if (s == "closed_form") {
        return TailMode::closed_form;
    }
    throw UsageError("--tail: expected exact or closed_form, got '" + s + "'");
}

std::vector<Record> run_approx(const Options& o) {
    const bool cumulative = cumulative_kind(o.kind);
    const TailMode mode = tail_mode(o.tail_mode);
    const auto sweep = parse_sweep(o.sweep, {"u", "S", "L", "H", "rho"});
    const std::vector<ModelParams> params = model_points(o, sweep);
    const McConfig cfg = mc_config(o);
    std::vector<AsymptoticApprox> res;
    const Stopwatch clock(o.timing);
    if (sweep && sweep->name == "rho") {
        for (const ModelParams& p : params) {
            res.push_back(cumulative ? approx_cumulative(p, cfg, mode) : approx_parisian(p, cfg, mode));
        }
    } else {
        res = cumulative ? approx_cumulative_sweep(params, cfg, mode) : approx_parisian_sweep(params, cfg, mode);
    }
    const double wall = clock.elapsed_ms();
    std::vector<Record> out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const AsymptoticApprox& ap = res[i];
        const Estimate& c = ap.constant;
        Record r = head(o, "approx", o.kind);
        add_model(r, ap.unit.u(), ap.unit.a(), ap.unit.rho(), ap.unit.c1(), ap.unit.c2());
        r.set("T", ap.unit.T())
            .set("S", cumulative ? EffectiveParams::unset : c.effective.S)
            .set("L", cumulative ? c.effective.L : EffectiveParams::unset)
            .set("T_trunc", c.effective.T_trunc)
            .set("truncation_change", c.effective.truncation_change)
            .set("truncation_flag", c.effective.truncation_flag)
            .set("constant", c.value)
            .set("constant_stderr", c.std_error)
            .set("tail_mode", to_string(ap.tail_mode))
            .set("tail_factor", ap.tail_factor);
        add_result(r, ap.value, c.std_error * ap.tail_factor, c.ci_low * ap.tail_factor, c.ci_high * ap.tail_factor,
                   c.n_paths, c.dt, c.seed, ap.regime, wall);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Record> run_ruintime(const Options& o) {
    const auto sweep = parse_sweep(o.sweep, {"u", "rho"});
    const std::vector<double> xs = parse_list(o.xs, "--x");
    const McConfig cfg = mc_config(o);
    std::vector<Record> out;
    for (const ModelParams& p : model_points(o, sweep)) {
        const Stopwatch clock(o.timing);
        const std::vector<Estimate> est = estimate_ruin_time_sweep(p, o.L1, o.L2, xs, cfg);
        const double wall = clock.elapsed_ms();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            Record r = head(o, "ruintime", "");
            add_model(r, p.u(), p.a(), p.rho(), p.c1(), p.c2());
            r.set("T", est[i].effective.T)
                .set("L1", est[i].effective.L)
                .set("L2", o.L2)
                .set("x", xs[i])
                .set("limit_rate", ruin_time_rate(p.a(), p.rho()));
            add_estimate(r, est[i], classify_regime(p.a(), p.rho()), wall);
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<Record> run_bounds(const Options& o) {
    const bool parisian = o.kind == "parisian";
    if (!parisian && o.kind != "simultaneous") {
        throw UsageError("--kind: expected simultaneous or parisian, got '" + o.kind + "'");
    }
    const auto sweep = parse_sweep(o.sweep, {"u", "H", "rho"});
    std::vector<Record> out;
    for (const ModelParams& p : model_points(o, sweep)) {
        const Stopwatch clock(o.timing);
        Record r = head(o, "bounds", o.kind);
        add_model(r, p.u(), p.a(), p.rho(), p.c1(), p.c2());
        r.set("T", p.T()).set("H", p.H());
        const double nan = EffectiveParams::unset;
        if (!parisian) {
            const Bounds b = bounds_simultaneous(p);
            const ModelParams unit = rescale_to_unit_horizon(p);
            r.set("lower", b.lower)
                .set("upper", b.upper)
                .set("truncation_bound",
                     truncation_bound(unit.u(), 1.0, unit.a(), unit.rho(), unit.c1(), unit.c2()));
            add_result(r, nan, nan, nan, nan, 0, nan, o.seed_value, classify_regime(p.a(), p.rho()),
                       clock.elapsed_ms());
        } else {
            const ParisianBounds b = bounds_parisian_fixed_H(p, mc_config(o));
            r.set("lower", b.lower)
                .set("upper", b.upper)
                .set("first_factor", b.lower_applicable ? b.first_factor.value : nan)
                .set("first_stderr", b.lower_applicable ? b.first_factor.std_error : nan)
                .set("second_factor", b.lower_applicable ? b.second_factor.value : nan)
                .set("second_stderr", b.lower_applicable ? b.second_factor.std_error : nan)
                .set("note", b.note);
            add_result(r, nan, nan, nan, nan, b.lower_applicable ? b.first_factor.n_paths : 0,
                       b.lower_applicable ? b.first_factor.dt : nan, o.seed_value,
                       classify_regime(p.a(), p.rho()), clock.elapsed_ms());
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<int> parse_criteria(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) {
        return out;
    }
    for (double v : parse_list(text, "--criteria")) {
        if (v != std::floor(v) || v < 1 || v > criterion_count) {
            throw UsageError("--criteria: '" + std::to_string(v) + "' is not a criterion id");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// Returns the emitted records and whether every criterion passed.
std::pair<std::vector<Record>, bool> run_validate(const Options& o) {
    ValidationOptions opt;
    try {
        opt.profile = parse_profile(o.profile);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--profile: ") + e.what());
    }
    opt.seed = o.seed_value;
    opt.workers = o.workers;
    opt.criteria = parse_criteria(o.criteria);
    const std::vector<CriterionResult> res = run_validation(opt, [](const CriterionResult& r) {
        std::cerr << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.detail << "\n";
    });
    bool ok = true;
    for (const CriterionResult& r : res) {
        ok = ok && r.passed;
    }
    return {validation_records(res, opt), ok};
}

void add_model_flags(CLI::App* sub, Options& o, bool window, bool sojourn, bool horizon) {
    sub->add_option("--u", o.u, "initial capital of the first portfolio");
    sub->add_option("--a", o.a, "capital ratio of the second portfolio");
    sub->add_option("--rho", o.rho, "correlation");
    sub->add_option("--c1", o.c1, "premium rate of the first portfolio");
    sub->add_option("--c2", o.c2, "premium rate of the second portfolio");
    if (horizon) {
        sub->add_option("--T", o.T, "time horizon");
    }
    if (window) {
        sub->add_option("--H", o.H, "Parisian window in time units");
        sub->add_option("--S", o.S, "Parisian window in scaled units, H = S / u^2");
    }
    if (sojourn) {
        sub->add_option("--L", o.L, "sojourn budget in scaled units");
    }
}

void add_mc_flags(CLI::App* sub, Options& o) {
    sub->add_option("--n-paths", o.n_paths, "number of sample paths");
    sub->add_option("--dt", o.dt, "grid step (0 selects 1e-4 of the horizon)");
    sub->add_option("--batch-size", o.batch_size, "paths per batch");
    sub->add_option("--ci-level", o.ci_level, "confidence level");
    sub->add_option("--T-trunc", o.T_trunc, "truncation horizon for limiting constants");
    sub->add_option("--truncation-tolerance", o.truncation_tolerance, "flag threshold for the truncation check");
    sub->add_option("--workers", o.workers, "worker threads (0 uses all)");
}

void add_common_flags(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, std::string("random seed (default: $") + seed_env + " or 1)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", o.output, "output file (default: standard output)");
    sub->add_flag("--timing", o.timing, "record wall times instead of 0");
    sub->add_option("--config", o.config, "key=value file with flag defaults");
}

void add_sweep_flag(CLI::App* sub, Options& o) {
    sub->add_option("--sweep", o.sweep, "one swept parameter, name=v1,v2,...");
}

// Reads key=value lines ('#' comments) into --key=value tokens.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw UsageError("--config: cannot read '" + path + "'");
    }
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        line = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--config: " + path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key == "config") {
            throw UsageError("--config: " + path + ":" + std::to_string(lineno) + ": nested config files");
        }
        out.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    return out;
}

// Inserts the config-file tokens right after the subcommand so later flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty() || args.size() < 2) {
        return args;
    }
    std::vector<std::string> out(args.begin(), args.begin() + 2);
    for (std::string& t : config_tokens(path)) {
        out.push_back(std::move(t));
    }
    out.insert(out.end(), args.begin() + 2, args.end());
    return out;
}

void resolve_seed(Options& o) {
    if (o.seed) {
        o.seed_value = *o.seed;
        o.seed_source = "flag";
        return;
    }
    if (const char* env = std::getenv(seed_env); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            o.seed_value = std::stoull(env, &used);
            if (used != std::string(env).size()) {
                throw std::invalid_argument(env);
            }
        } catch (const std::exception&) {
            throw UsageError(std::string(seed_env) + ": '" + env + "' is not an unsigned integer");
        }
        o.seed_source = "env";
    }
}

int run(int argc, char** argv) {
    Options o;
    CLI::App app{"Simulation and asymptotics for two-dimensional Brownian ruin problems"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CLI::App* tail = app.add_subcommand("tail", "exact and asymptotic joint Gaussian tail");
    add_model_flags(tail, o, false, false, false);
    add_common_flags(tail, o);
    add_sweep_flag(tail, o);

    CLI::App* simulate = app.add_subcommand("simulate", "finite-capital ruin probabilities by Monte Carlo");
    simulate->add_option("--kind", o.kind, "simultaneous, parisian or cumulative")->required();
    add_model_flags(simulate, o, true, true, true);
    add_mc_flags(simulate, o);
    add_common_flags(simulate, o);
    add_sweep_flag(simulate, o);

    CLI::App* constant = app.add_subcommand("constant", "limiting Parisian or cumulative constant");
    constant->add_option("--kind", o.kind, "parisian or cumulative")->required();
    constant->add_option("--a", o.a, "capital ratio");
    constant->add_option("--rho", o.rho, "correlation");
    constant->add_option("--S", o.S, "scaled window");
    constant->add_option("--L", o.L, "sojourn budget");
    add_mc_flags(constant, o);
    add_common_flags(constant, o);
    add_sweep_flag(constant, o);

    CLI::App* approx = app.add_subcommand("approx", "constant times Gaussian tail on the unit horizon");
    approx->add_option("--kind", o.kind, "parisian or cumulative")->required();
    approx->add_option("--tail", o.tail_mode, "exact or closed_form");
    add_model_flags(approx, o, true, true, true);
    add_mc_flags(approx, o);
    add_common_flags(approx, o);
    add_sweep_flag(approx, o);

    CLI::App* ruintime = app.add_subcommand("ruintime", "conditional law of the cumulative ruin time");
    add_model_flags(ruintime, o, false, false, true);
    ruintime->add_option("--L1", o.L1, "sojourn budget of the numerator");
    ruintime->add_option("--L2", o.L2, "sojourn budget of the conditioning event");
    ruintime->add_option("--x", o.xs, "comma-separated x values");
    add_mc_flags(ruintime, o);
    add_common_flags(ruintime, o);
    add_sweep_flag(ruintime, o);

    CLI::App* bounds = app.add_subcommand("bounds", "simultaneous or fixed-window Parisian bounds");
    bounds->add_option("--kind", o.kind, "simultaneous or parisian")->required();
    add_model_flags(bounds, o, true, false, true);
    add_mc_flags(bounds, o);
    add_common_flags(bounds, o);
    add_sweep_flag(bounds, o);

    CLI::App* validate = app.add_subcommand("validate", "run the validation suite");
    validate->add_option("--profile", o.profile, "quick or full");
    validate->add_option("--criteria", o.criteria, "comma-separated criterion ids (default: all)");
    validate->add_option("--workers", o.workers, "worker threads (0 uses all)");
    add_common_flags(validate, o);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(args);
        std::vector<const char*> cargs;
        for (const std::string& s : args) {
            cargs.push_back(s.c_str());
        }
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        resolve_seed(o);
        std::vector<Record> records;
        bool ok = true;
        if (tail->parsed()) {
            records = run_tail(o);
        } else if (simulate->parsed()) {
            records = run_simulate(o);
        } else if (constant->parsed()) {
            records = run_constant(o);
        } else if (approx->parsed()) {
            records = run_approx(o);
        } else if (ruintime->parsed()) {
            records = run_ruintime(o);
        } else if (bounds->parsed()) {
            records = run_bounds(o);
        } else {
            std::tie(records, ok) = run_validate(o);
        }
        const std::vector<std::string> columns =
            records.empty() ? validation_columns() : records.front().columns();
        write_output(o.output, o.format == "json" ? emit_json(columns, records) : emit_csv(columns, records));
        return ok ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    return run(argc, argv);
}
