#include "gaussdyn/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "gaussdyn/analysis.hpp"
#include "gaussdyn/cli/config.hpp"
#include "gaussdyn/cli/csv.hpp"

namespace gaussdyn::cli {

namespace fs = std::filesystem;

namespace {

// Flags mirroring the config keys, plus --config.
struct ScenarioFlags {
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value scenario file");
        for (const auto& key : config_keys()) {
            options[key] = app->add_option("--" + key, values[key]);
        }
    }

    ScenarioConfig resolve() const {
        ScenarioConfig cfg;
        if (!config_path.empty()) apply_file(cfg, config_path);
        for (const auto& key : config_keys()) {
            if (options.at(key)->count() > 0) set_value(cfg, key, values.at(key));
        }
        validate(cfg);
        return cfg;
    }
};

Metadata metadata_for(const std::string& command, const ScenarioConfig& cfg) {
    Metadata meta{{"command", command}};
    for (auto& kv : describe(cfg)) meta.push_back(kv);
    return meta;
}

// Opens `path` for writing, or returns `fallback` for "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path != "-") {
            if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("output", "cannot write '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

// Runs job(i) for i in [0, n) on up to `workers` threads; rethrows the first failure.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    auto loop = [&] {
        try {
            for (std::size_t i = next++; i < n; i = next++) job(i);
        } catch (...) {
            std::lock_guard lock(m);
            if (!failure) failure = std::current_exception();
            next = n;
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < count; ++w) pool.emplace_back(loop);
    loop();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string join_times(const std::vector<double>& ts) {
    std::string s;
    for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ";" : "") + format_number(ts[i]);
    return s.empty() ? "none" : s;
}

std::vector<double> default_phase_r() {
    std::vector<double> r;
    for (int i = 0; i < 8; ++i) r.push_back(0.05 + 0.45 * i / 7.0);
    return r;
}

// The boundary leaves the stable window lambda < 1 near r = 0.22, so the
// figure samples below that.
std::vector<double> figure5_r() {
    std::vector<double> r;
    for (int i = 1; i <= 21; ++i) r.push_back(0.01 * i);
    return r;
}

// One curve of a figure preset.
struct FigureSeries {
    std::string file;
    std::string label;
    ModelKind model;
    SystemParams params;
};

const std::vector<double>& preset_lambdas() {
    static const std::vector<double> l = {0.0, 0.2, 0.8, -0.2, -0.8};
    return l;
}

std::vector<FigureSeries> figure_preset(int id) {
    std::vector<FigureSeries> out;
    auto add = [&](const std::string& file, const std::string& label, ModelKind m, double r, double lambda,
                   double gamma0) {
        SystemParams p;
        p.r = r;
        p.lambda = lambda;
        p.bath.gamma0 = gamma0;
        out.push_back({file, label, m, p});
    };
    switch (id) {
        case 2:
        case 3:
        case 4: {
            const double r = id == 2 ? 2.0 : (id == 3 ? 0.1 : 0.0);
            for (double l : preset_lambdas()) {
                add("fig" + std::to_string(id) + ".csv", "lambda=" + format_number(l), ModelKind::Isolated, r, l, 0.0);
            }
            break;
        }
        case 6:
        case 7: {
            const double r = id == 6 ? 2.0 : 0.0;
            const std::string stem = "fig" + std::to_string(id);
            for (double l : preset_lambdas()) {
                add(stem + "a.csv", "lambda=" + format_number(l), ModelKind::IndependentBaths, r, l, 0.06);
            }
            for (double l : preset_lambdas()) {
                add(stem + "b.csv", "lambda=" + format_number(l), ModelKind::CommonBath, r, l, 0.06);
            }
            break;
        }
        case 8: {
            for (const auto& [file, r] : {std::pair{"fig8a.csv", 1.498}, std::pair{"fig8b.csv", 1.4}}) {
                for (double g : {0.06, 1.0}) {
                    for (ModelKind m : {ModelKind::MarkovianRWA, ModelKind::CommonBath}) {
                        add(file, to_string(m) + " gamma0=" + format_number(g), m, r, 0.0, g);
                    }
                }
            }
            break;
        }
        default:
            throw ConfigError("figure", "no preset for figure " + std::to_string(id) + " (expected 2 to 8)");
    }
    return out;
}

struct FigureOptions {
    int id = 0;
    std::string dir;
    double t_end = 30.0;
    double dt = 1e-3;
    std::size_t stride = 10;
    unsigned workers = 1;
};

int run_figure(const FigureOptions& o, std::ostream& out) {
    if (!(o.t_end > 0.0)) throw ConfigError("t_end", "must be > 0");
    if (!(o.dt > 0.0) || o.dt > 1e-2) throw ConfigError("dt", "must lie in (0, 1e-2]");
    const fs::path dir = o.dir.empty() ? fs::path("figure" + std::to_string(o.id)) : fs::path(o.dir);
    fs::create_directories(dir);
    const unsigned workers = capped_workers(o.workers);

    if (o.id == 5) {
        const auto rs = figure5_r();
        std::vector<std::optional<double>> lc(rs.size());
        parallel_for(rs.size(), workers, [&](std::size_t i) { lc[i] = critical_lambda(rs[i]); });
        std::ofstream f(dir / "fig5.csv");
        CsvWriter w(f, {{"command", "figure"}, {"figure", "5"}, {"probe_dt", "0.01"}, {"tol", "0.0001"}},
                    phase_line_columns());
        for (std::size_t i = 0; i < rs.size(); ++i) w.row({rs[i], lc[i].value_or(std::nan(""))});
        out << (dir / "fig5.csv").string() << '\n';
        return kSuccess;
    }

    const auto series = figure_preset(o.id);
    // Bath tables are shared between series with equal couplings; build them first.
    for (const auto& s : series) {
        if (s.model != ModelKind::Isolated && s.model != ModelKind::MarkovianRWA) {
            coefficient_table_for(s.params, o.t_end, workers);
        }
    }
    std::vector<Trajectory> trajs(series.size());
    parallel_for(series.size(), workers,
                 [&](std::size_t i) { trajs[i] = evolve(series[i].params, series[i].model, o.t_end, o.dt); });

    std::map<std::string, std::unique_ptr<CsvWriter>> writers;
    std::map<std::string, std::ofstream> files;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (!writers.contains(s.file)) {
            files[s.file].open(dir / s.file);
            if (!files[s.file]) throw ConfigError("dir", "cannot write into '" + dir.string() + "'");
            Metadata meta{{"command", "figure"},   {"figure", std::to_string(o.id)},
                          {"kt", "10"},           {"cutoff", "2000"},
                          {"t_end", format_number(o.t_end)}, {"dt", format_number(o.dt)},
                          {"stride", std::to_string(o.stride)}};
            writers[s.file] = std::make_unique<CsvWriter>(files[s.file], meta, figure_columns());
            out << (dir / s.file).string() << '\n';
        }
        const auto& tr = trajs[i];
        const std::size_t stride = std::max<std::size_t>(1, o.stride);
        for (std::size_t k = 0; k < tr.size(); ++k) {
            if (k % stride != 0 && k + 1 != tr.size()) continue;
            writers[s.file]->row(std::vector<std::string>{
                s.label, to_string(s.model), format_number(s.params.r), format_number(s.params.lambda),
                format_number(s.params.bath.gamma0), format_number(tr.times[k]), format_number(tr.log_neg[k]),
                format_number(tr.v_s[k])});
        }
    }
    return kSuccess;
}

}  // namespace

unsigned capped_workers(unsigned requested) {
    unsigned n = std::max(1u, requested);
    if (const char* env = std::getenv("GAUSSDYN_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement dynamics of two coupled oscillators in Gaussian states", "gaussdyn"};
    app.set_version_flag("--version", std::string("gaussdyn ") + kToolVersion);
    app.require_subcommand(1);

    ScenarioFlags coeffs_flags, evolve_flags, sweep_flags, phase_flags, survival_flags;
    unsigned workers = 1;
    std::size_t stride = 1;

    auto* coeffs = app.add_subcommand("coeffs", "dump the coefficient table as CSV");
    coeffs_flags.attach(coeffs);
    coeffs->add_option("--workers", workers);

    auto* evolve_cmd = app.add_subcommand("evolve", "integrate one trajectory");
    evolve_flags.attach(evolve_cmd);
    evolve_cmd->add_option("--stride", stride, "write every n-th sample");

    std::string over;
    std::string values;
    auto* sweep = app.add_subcommand("sweep", "repeat evolve over a list of lambda or r values");
    sweep_flags.attach(sweep);
    sweep->add_option("--over", over, "lambda or r")->required()->check(CLI::IsMember({"lambda", "r"}));
    sweep->add_option("--values", values, "comma-separated values")->required();
    sweep->add_option("--workers", workers);
    sweep->add_option("--stride", stride);

    std::string r_values;
    double probe_dt = 1e-2;
    double tol = 1e-4;
    auto* phase = app.add_subcommand("phase-line", "critical coupling lambda_c(r) of the isolated system");
    phase_flags.attach(phase);
    phase->add_option("--r-values", r_values, "comma-separated squeezing values");
    phase->add_option("--probe-dt", probe_dt);
    phase->add_option("--tol", tol);
    phase->add_option("--workers", workers);

    auto* survival = app.add_subcommand("survival", "survival threshold, Markovian time and death/revival events");
    survival_flags.attach(survival);

    FigureOptions fig;
    auto* figure = app.add_subcommand("figure", "write the CSVs behind one of the preset figures");
    figure->add_option("id", fig.id, "figure number, 2 to 8")->required();
    figure->add_option("--dir,--output", fig.dir, "output directory");
    figure->add_option("--t_end", fig.t_end);
    figure->add_option("--dt", fig.dt);
    figure->add_option("--stride", fig.stride);
    figure->add_option("--workers", fig.workers);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << "gaussdyn " << kToolVersion << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (coeffs->parsed()) {
            const ScenarioConfig cfg = coeffs_flags.resolve();
            const SystemParams p = params_of(cfg);
            const auto n = static_cast<std::size_t>(std::ceil(cfg.t_end / 0.01)) + 1;
            const auto table = build_table(cfg.t_end, std::max<std::size_t>(16, n), p.modes(), p.bath,
                                           capped_workers(workers));
            Sink sink(cfg.output, out);
            write_coeffs(sink.get(), metadata_for("coeffs", cfg), table);
        } else if (evolve_cmd->parsed()) {
            const ScenarioConfig cfg = evolve_flags.resolve();
            const auto traj = evolve(params_of(cfg), model_of(cfg), cfg.t_end, cfg.dt);
            Sink sink(cfg.output, out);
            write_trajectory(sink.get(), metadata_for("evolve", cfg), traj, stride);
        } else if (sweep->parsed()) {
            const ScenarioConfig base = sweep_flags.resolve();
            const auto points = parse_list("values", values);
            std::vector<ScenarioConfig> cfgs;
            for (double v : points) {
                ScenarioConfig c = base;
                set_value(c, over, format_number(v));
                validate(c);
                cfgs.push_back(c);
            }
            const fs::path dir = base.output == "-" ? fs::path("sweep") : fs::path(base.output);
            fs::create_directories(dir);
            auto file_of = [](std::size_t i) {
                std::string n = std::to_string(i);
                return "point_" + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n + ".csv";
            };
            parallel_for(cfgs.size(), capped_workers(workers), [&](std::size_t i) {
                const auto traj = evolve(params_of(cfgs[i]), model_of(cfgs[i]), cfgs[i].t_end, cfgs[i].dt);
                std::ofstream f(dir / file_of(i));
                if (!f) throw ConfigError("output", "cannot write into '" + dir.string() + "'");
                write_trajectory(f, metadata_for("sweep", cfgs[i]), traj, stride);
            });
            std::ofstream idx(dir / "index.csv");
            Metadata meta = metadata_for("sweep", base);
            meta.emplace_back("over", over);
            CsvWriter w(idx, meta, {"index", "key", "value", "file"});
            for (std::size_t i = 0; i < cfgs.size(); ++i) {
                w.row(std::vector<std::string>{std::to_string(i), over, format_number(points[i]), file_of(i)});
            }
            out << (dir / "index.csv").string() << '\n';
        } else if (phase->parsed()) {
            const ScenarioConfig cfg = phase_flags.resolve();
            if (!(probe_dt > 0.0) || probe_dt > 1e-2) throw ConfigError("probe-dt", "must lie in (0, 1e-2]");
            if (!(tol > 0.0)) throw ConfigError("tol", "must be > 0");
            const auto rs = r_values.empty() ? default_phase_r() : parse_list("r-values", r_values);
            std::vector<std::optional<double>> lc(rs.size());
            parallel_for(rs.size(), capped_workers(workers),
                         [&](std::size_t i) { lc[i] = critical_lambda(rs[i], probe_dt, tol); });
            Sink sink(cfg.output, out);
            Metadata meta = metadata_for("phase-line", cfg);
            meta.emplace_back("probe_dt", format_number(probe_dt));
            meta.emplace_back("tol", format_number(tol));
            CsvWriter w(sink.get(), meta, phase_line_columns());
            for (std::size_t i = 0; i < rs.size(); ++i) w.row({rs[i], lc[i].value_or(std::nan(""))});
        } else if (survival->parsed()) {
            const ScenarioConfig cfg = survival_flags.resolve();
            Sink sink(cfg.output, out);
            std::ostream& o = sink.get();
            o << "r_c=" << format_number(survival_threshold(cfg.kt)) << '\n';
            if (cfg.gamma0 > 0.0 && cfg.r >= 0.0) {
                const auto t = markovian_separability_time(cfg.r, cfg.kt, cfg.gamma0);
                o << "markovian_separability_time=" << (t ? format_number(*t) : "never") << '\n';
            }
            const auto traj = evolve(params_of(cfg), model_of(cfg), cfg.t_end, cfg.dt);
            const auto ev = separability_events(traj);
            o << "model=" << cfg.model << '\n';
            o << "death_times=" << join_times(ev.death_times) << '\n';
            o << "revival_times=" << join_times(ev.revival_times) << '\n';
            o << "survived=" << (ev.survived ? "true" : "false") << '\n';
        } else if (figure->parsed()) {
            return run_figure(fig, out);
        }
    } catch (const IntegrationFailure& e) {
        err << "numerical failure: " << e.what() << " (last good time t=" << format_number(e.last_good_time())
            << ")\n";
        return kNumericalFailure;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const UnsupportedError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfigError;
    }
    return kSuccess;
}

}  // namespace gaussdyn::cli
