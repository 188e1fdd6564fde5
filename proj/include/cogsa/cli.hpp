#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cogsa/bench.hpp"
#include "cogsa/engine.hpp"
#include "cogsa/harness.hpp"
#include "cogsa/stats.hpp"

namespace cogsa::cli {

// exit codes: 0 success, 1 runtime failure, 2 usage/config error
inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime = 1;
inline constexpr int exit_usage = 2;

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& file, int line, const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + message) {}
};

struct AlgorithmConfig {
    std::string name;
    engine::EngineConfig engine;
};

struct ExternalObjectiveConfig {
    std::string name;
    std::size_t dimension = 0;
    double lower = 0.0;
    double upper = 0.0;
    std::string command;
    double optimum = 0.0;
};

struct ExperimentConfig {
    std::vector<std::string> benchmarks;
    std::size_t dimension = 30;
    std::size_t population = 50;
    std::size_t iterations = 1000;
    std::size_t runs = 30;
    std::uint64_t master_seed = 42;
    std::string output = "out";
    bool error_mode = false;              // statistics over |final - optimum|
    std::vector<std::size_t> dims = {50, 100};  // scalability sweep dimensions
    std::vector<AlgorithmConfig> algorithms;
    std::vector<ExternalObjectiveConfig> externals;

    const ExternalObjectiveConfig* find_external(const std::string& name) const {
        for (const auto& e : externals)
            if (e.name == name) return &e;
        return nullptr;
    }
};

namespace detail {

struct ConfigLine {
    std::string section;  // "" for globals
    std::string key;
    std::string value;
    int number = 0;
};

inline std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

inline double parse_real(const ConfigLine& line, const std::string& file) {
    char* end = nullptr;
    double v = std::strtod(line.value.c_str(), &end);
    if (end == line.value.c_str() || *end != '\0' || !std::isfinite(v))
        throw ConfigError(file, line.number, "expected a number for '" + line.key + "'");
    return v;
}

inline std::uint64_t parse_count(const ConfigLine& line, const std::string& file) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(line.value, &pos);
        if (pos != line.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(file, line.number, "expected a nonnegative integer for '" + line.key + "'");
    }
}

inline bool parse_bool(const ConfigLine& line, const std::string& file) {
    if (line.value == "true" || line.value == "1" || line.value == "yes") return true;
    if (line.value == "false" || line.value == "0" || line.value == "no") return false;
    throw ConfigError(file, line.number, "expected true/false for '" + line.key + "'");
}

}  // namespace detail

// Line-oriented `key = value` configuration with one [section] per algorithm
// and optional [external:<name>] sections for plug-in objectives.
inline ExperimentConfig parse_config_text(const std::string& text, const std::string& file) {
    using detail::ConfigLine;
    std::vector<ConfigLine> lines;
    std::vector<std::pair<std::string, int>> sections;  // declaration order
    {
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            std::string line = detail::trim(raw);
            if (line.empty() || line[0] == '#' || line[0] == ';') continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(file, number, "unterminated section header");
                section = detail::trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw ConfigError(file, number, "empty section name");
                sections.emplace_back(section, number);
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(file, number, "expected 'key = value'");
            ConfigLine entry;
            entry.section = section;
            entry.key = detail::trim(line.substr(0, eq));
            entry.value = detail::trim(line.substr(eq + 1));
            entry.number = number;
            if (entry.key.empty()) throw ConfigError(file, number, "empty key");
            lines.push_back(std::move(entry));
        }
    }

    ExperimentConfig cfg;
    // pass 1: globals
    for (const auto& line : lines) {
        if (!line.section.empty()) continue;
        if (line.key == "benchmarks") {
            cfg.benchmarks = detail::split_list(line.value);
            if (cfg.benchmarks.empty())
                throw ConfigError(file, line.number, "benchmarks list is empty");
        } else if (line.key == "dimension") {
            cfg.dimension = detail::parse_count(line, file);
        } else if (line.key == "population") {
            cfg.population = detail::parse_count(line, file);
        } else if (line.key == "iterations") {
            cfg.iterations = detail::parse_count(line, file);
        } else if (line.key == "runs") {
            cfg.runs = detail::parse_count(line, file);
        } else if (line.key == "master_seed") {
            cfg.master_seed = detail::parse_count(line, file);
        } else if (line.key == "output") {
            cfg.output = line.value;
        } else if (line.key == "error_mode") {
            cfg.error_mode = detail::parse_bool(line, file);
        } else if (line.key == "dims") {
            cfg.dims.clear();
            for (const auto& item : detail::split_list(line.value))
                cfg.dims.push_back(std::stoull(item));
            if (cfg.dims.empty()) throw ConfigError(file, line.number, "dims list is empty");
        } else {
            throw ConfigError(file, line.number, "unknown key '" + line.key + "'");
        }
    }

    // pass 2: sections
    for (const auto& [section, number] : sections) {
        if (section.rfind("external:", 0) == 0) {
            ExternalObjectiveConfig ext;
            ext.name = section.substr(std::string("external:").size());
            if (!detail::valid_identifier(ext.name))
                throw ConfigError(file, number, "invalid external objective name '" + ext.name + "'");
            for (const auto& line : lines) {
                if (line.section != section) continue;
                if (line.key == "dimension")
                    ext.dimension = detail::parse_count(line, file);
                else if (line.key == "lower")
                    ext.lower = detail::parse_real(line, file);
                else if (line.key == "upper")
                    ext.upper = detail::parse_real(line, file);
                else if (line.key == "command")
                    ext.command = line.value;
                else if (line.key == "optimum")
                    ext.optimum = detail::parse_real(line, file);
                else
                    throw ConfigError(file, line.number, "unknown external key '" + line.key + "'");
            }
            if (ext.dimension == 0)
                throw ConfigError(file, number, "external objective needs dimension >= 1");
            if (ext.command.empty())
                throw ConfigError(file, number, "external objective needs a command");
            if (!(ext.lower < ext.upper))
                throw ConfigError(file, number, "external objective needs lower < upper");
            cfg.externals.push_back(std::move(ext));
            continue;
        }

        if (!detail::valid_identifier(section))
            throw ConfigError(file, number, "invalid algorithm name '" + section + "'");
        AlgorithmConfig alg;
        alg.name = section;
        // gsa defaults; a section named cogsa starts from chaotic alpha + OBL
        alg.engine.G0 = 100.0;
        alg.engine.alpha_mode = engine::FixedAlpha{20.0};
        alg.engine.obl_enabled = false;
        chaos::ChaoticAlphaConfig chaotic;  // A=2, B=25, scale=1
        bool is_chaotic = false;
        if (section == "cogsa") {
            is_chaotic = true;
            alg.engine.obl_enabled = true;
        }
        for (const auto& line : lines) {
            if (line.section != section) continue;
            if (line.key == "g0")
                alg.engine.G0 = detail::parse_real(line, file);
            else if (line.key == "alpha") {
                if (line.value == "chaotic")
                    is_chaotic = true;
                else {
                    is_chaotic = false;
                    alg.engine.alpha_mode = engine::FixedAlpha{detail::parse_real(line, file)};
                }
            } else if (line.key == "A")
                chaotic.A = detail::parse_real(line, file);
            else if (line.key == "B")
                chaotic.B = detail::parse_real(line, file);
            else if (line.key == "scale")
                chaotic.scale = detail::parse_real(line, file);
            else if (line.key == "epsilon")
                alg.engine.epsilon = detail::parse_real(line, file);
            else if (line.key == "kbest_final_fraction")
                alg.engine.kbest_final_fraction = detail::parse_real(line, file);
            else if (line.key == "obl")
                alg.engine.obl_enabled = detail::parse_bool(line, file);
            else
                throw ConfigError(file, line.number, "unknown algorithm key '" + line.key + "'");
        }
        if (is_chaotic) alg.engine.alpha_mode = chaotic;
        cfg.algorithms.push_back(std::move(alg));
    }

    // finalize: propagate run shape into each engine config and validate
    for (auto& alg : cfg.algorithms) {
        alg.engine.N = cfg.population;
        alg.engine.T = cfg.iterations;
        if (auto* chaotic = std::get_if<chaos::ChaoticAlphaConfig>(&alg.engine.alpha_mode))
            chaotic->T = cfg.iterations;
        try {
            alg.engine.validate();
        } catch (const std::exception& e) {
            throw ConfigError(file, 0, "algorithm '" + alg.name + "': " + e.what());
        }
    }
    for (const auto& name : cfg.benchmarks)
        if (!bench::is_classical(name) && cfg.find_external(name) == nullptr)
            throw ConfigError(file, 0, "unknown benchmark '" + name + "'");
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

struct CommonOptions {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    bool testbed2_style = false;
};

namespace detail {

// --testbed2-style: 51 runs, 6000 iterations, chaotic alpha scaled by 1/3
inline void apply_testbed2_style(ExperimentConfig& cfg) {
    cfg.runs = 51;
    cfg.iterations = 6000;
    for (auto& alg : cfg.algorithms) {
        alg.engine.T = cfg.iterations;
        if (auto* chaotic = std::get_if<chaos::ChaoticAlphaConfig>(&alg.engine.alpha_mode)) {
            chaotic->scale = 1.0 / 3.0;
            chaotic->T = cfg.iterations;
        }
    }
}

inline void apply_overrides(ExperimentConfig& cfg, const CommonOptions& opts) {
    if (opts.testbed2_style) apply_testbed2_style(cfg);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.out) cfg.output = *opts.out;
}

inline harness::BenchmarkFactory benchmark_factory(const ExperimentConfig& cfg,
                                                   const std::string& name) {
    if (bench::is_classical(name)) {
        std::string warning;
        bench::BenchmarkSpec spec = bench::make_benchmark(name, cfg.dimension, &warning);
        if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
        return [spec] { return spec; };
    }
    const ExternalObjectiveConfig* ext = cfg.find_external(name);
    if (ext == nullptr) throw std::runtime_error("unknown benchmark '" + name + "'");
    ExternalObjectiveConfig copy = *ext;
    return [copy] {
        return bench::make_external_benchmark(copy.name, copy.dimension,
                                              obl::Bounds(copy.dimension, copy.lower, copy.upper),
                                              copy.command, copy.optimum);
    };
}

inline std::map<std::string, double> optima_map(const ExperimentConfig& cfg) {
    std::map<std::string, double> optima;
    for (const auto& name : cfg.benchmarks) {
        if (bench::is_classical(name))
            optima[name] = bench::make_benchmark(name, cfg.dimension).known_optimum;
        else if (const auto* ext = cfg.find_external(name))
            optima[name] = ext->optimum;
    }
    return optima;
}

inline std::string record_filename(const std::string& algorithm, const std::string& benchmark,
                                   std::size_t run) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "__run%03zu.rec", run);
    return algorithm + "__" + benchmark + suffix;
}

inline void print_report_table(std::ostream& out, const harness::ExperimentReport& report) {
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-12s %-16s %-16s %-16s %s", "benchmark", "algorithm",
                  "mean", "best", "sd", "runs");
    out << line << "\n";
    for (const auto& cell : report.cells) {
        std::snprintf(line, sizeof line, "%-12s %-12s %-16.6e %-16.6e %-16.6e %zu",
                      cell.benchmark.c_str(), cell.algorithm.c_str(), cell.mean, cell.best,
                      cell.sd, cell.run_count);
        out << line << "\n";
    }
}

}  // namespace detail

inline int cmd_verify(std::size_t dimension, std::ostream& out = std::cout) {
    auto report = bench::verify_optima(dimension);
    bool all_pass = true;
    for (const auto& check : report) {
        char line[192];
        std::snprintf(line, sizeof line, "%-4s %-4s value=%-24.17g expected=%-24.17g tol=%g",
                      check.name.c_str(), check.pass ? "PASS" : "FAIL", check.value,
                      check.expected, check.tolerance);
        out << line << "\n";
        all_pass = all_pass && check.pass;
    }
    out << (all_pass ? "verify: all 23 optima confirmed" : "verify: FAILURES present") << "\n";
    return all_pass ? exit_ok : exit_runtime;
}

inline int cmd_run(const CommonOptions& opts, std::ostream& out = std::cout) {
    ExperimentConfig cfg;
    try {
        cfg = parse_config_file(opts.config_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    detail::apply_overrides(cfg, opts);
    if (cfg.algorithms.empty()) {
        std::cerr << "error: " << opts.config_path << ": no algorithm sections\n";
        return exit_usage;
    }
    if (cfg.benchmarks.empty()) {
        std::cerr << "error: " << opts.config_path << ": no benchmarks\n";
        return exit_usage;
    }

    namespace fs = std::filesystem;
    fs::path out_dir = cfg.output;
    fs::create_directories(out_dir / "records");

    std::vector<RunRecord> all;
    bool any_failed = false;
    for (const auto& alg : cfg.algorithms) {
        for (const auto& name : cfg.benchmarks) {
            auto factory = detail::benchmark_factory(cfg, name);
            auto batch =
                harness::run_batch(alg.name, factory, alg.engine, cfg.runs, cfg.master_seed,
                                   opts.jobs);
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (batch[i].failed) {
                    any_failed = true;
                    std::cerr << "run failed: " << alg.name << "/" << name << " run " << i << ": "
                              << batch[i].error << "\n";
                    continue;
                }
                harness::write_record(out_dir / "records" /
                                          detail::record_filename(alg.name, name, i),
                                      batch[i]);
            }
            all.insert(all.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
        }
    }

    std::map<std::string, double> optima = detail::optima_map(cfg);
    harness::ExperimentReport report =
        harness::summarize(all, cfg.error_mode ? &optima : nullptr);
    harness::write_text_atomic(out_dir / "report.csv", harness::report_to_csv(report));
    harness::write_text_atomic(out_dir / "runs.csv", harness::runs_table_to_csv(report));
    detail::print_report_table(out, report);
    if (cfg.runs == 1) out << "note: single run per cell; sd = 0 by convention\n";
    return any_failed ? exit_runtime : exit_ok;
}

inline int cmd_scale(const CommonOptions& opts, const std::vector<std::size_t>& dims_override,
                     std::ostream& out = std::cout) {
    ExperimentConfig cfg;
    try {
        cfg = parse_config_file(opts.config_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    detail::apply_overrides(cfg, opts);
    if (!dims_override.empty()) cfg.dims = dims_override;
    if (cfg.algorithms.empty() || cfg.benchmarks.empty()) {
        std::cerr << "error: " << opts.config_path << ": need algorithms and benchmarks\n";
        return exit_usage;
    }
    for (const auto& name : cfg.benchmarks)
        if (!bench::is_scalable(name)) {
            std::cerr << "error: benchmark '" << name
                      << "' has a fixed dimension and cannot be swept\n";
            return exit_usage;
        }

    std::vector<std::pair<std::string, engine::EngineConfig>> algorithms;
    std::vector<std::string> labels;
    for (const auto& alg : cfg.algorithms) {
        algorithms.emplace_back(alg.name, alg.engine);
        labels.push_back(alg.name);
    }
    harness::ExperimentReport report;
    try {
        report = harness::scalability_sweep(algorithms, cfg.benchmarks, cfg.dims, cfg.runs,
                                            cfg.master_seed, opts.jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }

    namespace fs = std::filesystem;
    fs::path out_dir = cfg.output;
    fs::create_directories(out_dir);
    std::string grid = harness::scalability_to_csv(report, cfg.benchmarks, cfg.dims, labels);
    harness::write_text_atomic(out_dir / "scalability.csv", grid);
    out << grid;
    return exit_ok;
}

namespace detail {

struct ComparisonPool {
    // per benchmark: algorithm -> finals in run order
    std::vector<std::string> benchmark_order;
    std::vector<std::string> algorithm_order;
    std::map<std::string, std::map<std::string, std::vector<double>>> finals;

    void add(const std::string& benchmark, const std::string& algorithm, double value) {
        if (finals.find(benchmark) == finals.end()) benchmark_order.push_back(benchmark);
        auto& per_alg = finals[benchmark];
        if (per_alg.find(algorithm) == per_alg.end() &&
            std::find(algorithm_order.begin(), algorithm_order.end(), algorithm) ==
                algorithm_order.end())
            algorithm_order.push_back(algorithm);
        per_alg[algorithm].push_back(value);
    }
};

inline void collect_comparison_input(const std::filesystem::path& path, ComparisonPool& pool) {
    namespace fs = std::filesystem;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".rec")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            RunRecord rec = harness::read_record(file);
            pool.add(rec.benchmark, rec.algorithm, rec.final_best_fitness);
        }
        return;
    }
    if (path.extension() == ".csv") {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        for (const auto& entry : harness::parse_runs_table(buf.str()))
            pool.add(entry.benchmark, entry.algorithm, entry.final_fitness);
        return;
    }
    RunRecord rec = harness::read_record(path);
    pool.add(rec.benchmark, rec.algorithm, rec.final_best_fitness);
}

}  // namespace detail

inline int cmd_compare(const std::vector<std::string>& inputs, const std::string& reference,
                       const std::optional<std::string>& out_path, double level,
                       std::ostream& out = std::cout) {
    if (inputs.empty()) {
        std::cerr << "error: compare needs at least one input (record dir, .rec, or runs .csv)\n";
        return exit_usage;
    }
    detail::ComparisonPool pool;
    try {
        for (const auto& input : inputs) detail::collect_comparison_input(input, pool);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    if (pool.algorithm_order.size() < 2) {
        std::cerr << "error: compare needs the reference and at least one competitor\n";
        return exit_usage;
    }
    if (std::find(pool.algorithm_order.begin(), pool.algorithm_order.end(), reference) ==
        pool.algorithm_order.end()) {
        std::cerr << "error: reference algorithm '" << reference << "' not present in inputs\n";
        return exit_usage;
    }

    // assemble paired blocks; every (benchmark, algorithm) needs the same run count
    std::vector<std::pair<std::string, stats::PairedResults>> per_benchmark;
    for (const auto& benchmark : pool.benchmark_order) {
        const auto& per_alg = pool.finals.at(benchmark);
        stats::PairedResults data;
        data.algorithms = pool.algorithm_order;
        std::size_t runs = 0;
        for (const auto& alg : pool.algorithm_order) {
            auto it = per_alg.find(alg);
            if (it == per_alg.end()) {
                std::cerr << "error: benchmark " << benchmark << " has no runs for algorithm "
                          << alg << "\n";
                return exit_usage;
            }
            if (runs == 0) runs = it->second.size();
            if (it->second.size() != runs) {
                std::cerr << "error: ragged run counts on " << benchmark << ": " << alg << " has "
                          << it->second.size() << " runs, expected " << runs << "\n";
                return exit_usage;
            }
        }
        data.blocks.resize(runs, std::vector<double>(pool.algorithm_order.size()));
        for (std::size_t j = 0; j < pool.algorithm_order.size(); ++j) {
            const auto& finals = per_alg.at(pool.algorithm_order[j]);
            for (std::size_t b = 0; b < runs; ++b) data.blocks[b][j] = finals[b];
        }
        per_benchmark.emplace_back(benchmark, std::move(data));
    }

    stats::SignificanceTable table;
    try {
        table = stats::significance_table(per_benchmark, reference);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }

    std::string csv = stats::significance_to_csv(table);
    if (out_path) harness::write_text_atomic(*out_path, csv);

    // console view marks rejections at the requested significance level
    out << "p-values vs " << reference << " (* = p < " << level << ")\n";
    char field[64];
    std::snprintf(field, sizeof field, "%-12s", "benchmark");
    out << field;
    for (const auto& name : table.competitors) {
        std::snprintf(field, sizeof field, " %-12s", name.c_str());
        out << field;
    }
    out << "\n";
    for (const auto& [benchmark, row] : table.rows) {
        std::snprintf(field, sizeof field, "%-12s", benchmark.c_str());
        out << field;
        for (double p : row) {
            std::string cell = stats::format_p(p) + (p < level ? "*" : "");
            std::snprintf(field, sizeof field, " %-12s", cell.c_str());
            out << field;
        }
        out << "\n";
    }
    return exit_ok;
}

inline int cmd_trace(const std::vector<std::string>& inputs, const std::string& out_path,
                     bool log10_mode, double floor, std::size_t every) {
    if (inputs.empty()) {
        std::cerr << "error: trace needs at least one record file\n";
        return exit_usage;
    }
    if (every == 0) {
        std::cerr << "error: --every must be >= 1\n";
        return exit_usage;
    }
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        fs::path path = input;
        if (fs::is_directory(path)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::recursive_directory_iterator(path))
                if (entry.is_regular_file() && entry.path().extension() == ".rec")
                    found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(path);
        }
    }

    std::string csv = "algorithm,benchmark,seed,iteration,best_so_far\n";
    bool any_skipped = false;
    for (const auto& file : files) {
        RunRecord rec;
        try {
            rec = harness::read_record(file);
        } catch (const std::exception& e) {
            std::cerr << "skipping " << file.string() << ": " << e.what() << "\n";
            any_skipped = true;
            continue;
        }
        std::size_t total = rec.best_trace.size();
        for (std::size_t i = 0; i < total; i += every) {
            double value = rec.best_trace[i];
            if (log10_mode) value = std::log10(std::max(value, floor));
            csv += rec.algorithm + "," + rec.benchmark + "," + std::to_string(rec.seed) + "," +
                   std::to_string(i + 1) + "," + harness::format_double(value) + "\n";
        }
        if (total != 0 && (total - 1) % every != 0) {  // always include the final iteration
            double value = rec.best_trace.back();
            if (log10_mode) value = std::log10(std::max(value, floor));
            csv += rec.algorithm + "," + rec.benchmark + "," + std::to_string(rec.seed) + "," +
                   std::to_string(total) + "," + harness::format_double(value) + "\n";
        }
    }
    harness::write_text_atomic(out_path, csv);
    return any_skipped ? exit_runtime : exit_ok;
}

// Entry point shared by the binary and the tests.
inline int run_main(int argc, const char* const* argv) {
    CLI::App app{"Gravitational search (GSA) and chaos-embedded opposition-based GSA (COGSA): "
                 "benchmark experiments, scalability sweeps, and rank statistics"};
    app.require_subcommand(1);

    CommonOptions run_opts, scale_opts;
    std::vector<std::size_t> scale_dims;
    std::vector<std::string> compare_inputs, trace_inputs;
    std::string compare_reference, trace_out;
    std::optional<std::string> compare_out;
    double compare_level = 0.01;
    bool trace_log10 = false;
    double trace_floor = 1e-300;
    std::size_t trace_every = 1;
    std::size_t verify_dimension = 30;

    auto add_common = [](CLI::App* cmd, CommonOptions& opts) {
        cmd->add_option("--config", opts.config_path, "experiment config file")->required();
        cmd->add_option("--out", opts.out, "output directory (overrides config)");
        cmd->add_option("--seed", opts.seed, "master seed (overrides config)");
        cmd->add_option("--jobs", opts.jobs, "parallel runs")->default_val(1u);
        cmd->add_flag("--testbed2-style", opts.testbed2_style,
                      "51 runs, 6000 iterations, chaotic alpha scaled by 1/3");
    };

    auto* run_cmd = app.add_subcommand("run", "run experiment batches and persist records");
    add_common(run_cmd, run_opts);

    auto* scale_cmd = app.add_subcommand("scale", "scalability sweep over higher dimensions");
    add_common(scale_cmd, scale_opts);
    scale_cmd->add_option("--dims", scale_dims, "dimensions to sweep (overrides config)");

    auto* compare_cmd =
        app.add_subcommand("compare", "Friedman/Bonferroni comparison against a reference");
    compare_cmd->add_option("inputs", compare_inputs, "record dirs, .rec files, or runs .csv")
        ->required();
    compare_cmd->add_option("--reference", compare_reference, "reference algorithm")->required();
    compare_cmd->add_option("--out", compare_out, "write the p-value table to this CSV file");
    compare_cmd->add_option("--level", compare_level, "significance level")->default_val(0.01);

    auto* trace_cmd = app.add_subcommand("trace", "export plot-ready convergence data");
    trace_cmd->add_option("records", trace_inputs, "record files or directories")->required();
    trace_cmd->add_option("--out", trace_out, "output CSV path")->required();
    trace_cmd->add_flag("--log10", trace_log10, "emit log10(max(best, floor))");
    trace_cmd->add_option("--floor", trace_floor, "floor for the log view")->default_val(1e-300);
    trace_cmd->add_option("--every", trace_every, "keep every k-th iteration")->default_val(1);

    auto* verify_cmd = app.add_subcommand("verify", "check all 23 benchmark optima");
    verify_cmd->add_option("--dimension", verify_dimension, "dimension for scalable functions")
        ->default_val(30);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (scale_cmd->parsed()) return cmd_scale(scale_opts, scale_dims);
        if (compare_cmd->parsed())
            return cmd_compare(compare_inputs, compare_reference, compare_out, compare_level);
        if (trace_cmd->parsed())
            return cmd_trace(trace_inputs, trace_out, trace_log10, trace_floor, trace_every);
        if (verify_cmd->parsed()) return cmd_verify(verify_dimension);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_usage;
}

}  // namespace cogsa::cli
