// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Usage: acceptance [--cli /path/to/cogsa] [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "cogsa/cli.hpp"
#include "friedman_oracle.hpp"

namespace fs = std::filesystem;
using namespace cogsa;

namespace {

std::string g_cli_path = "./tools/cogsa";

engine::EngineConfig gsa_config(std::size_t population, std::size_t iterations) {
    engine::EngineConfig cfg;
    cfg.N = population;
    cfg.T = iterations;
    cfg.alpha_mode = engine::FixedAlpha{20.0};
    cfg.obl_enabled = false;
    return cfg;
}

engine::EngineConfig cogsa_config(std::size_t population, std::size_t iterations) {
    engine::EngineConfig cfg;
    cfg.N = population;
    cfg.T = iterations;
    chaos::ChaoticAlphaConfig chaotic;
    chaotic.T = iterations;
    cfg.alpha_mode = chaotic;
    cfg.obl_enabled = true;
    return cfg;
}

std::vector<double> finals_of(const std::vector<RunRecord>& records) {
    std::vector<double> finals;
    for (const auto& rec : records) {
        if (rec.failed) throw std::runtime_error("unexpected failed run: " + rec.error);
        finals.push_back(rec.final_best_fitness);
    }
    return finals;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cogsa_accept_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_command(const std::string& command) {
    int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// --- criteria -------------------------------------------------------------

bool criterion1_sphere_convergence(std::string& detail) {
    auto started = std::chrono::steady_clock::now();
    auto records =
        harness::run_batch("cogsa", bench::make_benchmark("f1", 30), cogsa_config(50, 1000), 10,
                           42, 1);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    double med = median(finals_of(records));
    detail = "median " + sci(med) + " (target <= 1e-20), " + sci(elapsed) + " s (target < 60)";
    return med <= 1e-20 && elapsed < 60.0;
}

bool criterion2_separation(std::string& detail) {
    auto spec = bench::make_benchmark("f1", 100);
    double gsa_med =
        median(finals_of(harness::run_batch("gsa", spec, gsa_config(50, 1000), 5, 42, 4)));
    double cogsa_med =
        median(finals_of(harness::run_batch("cogsa", spec, cogsa_config(50, 1000), 5, 42, 4)));
    detail = "gsa median " + sci(gsa_med) + ", cogsa median " + sci(cogsa_med) +
             " (target >= 15 orders apart)";
    if (cogsa_med == 0.0) return gsa_med > 0.0;
    return gsa_med >= cogsa_med * 1e15;
}

bool criterion3_step_exactness(std::string& detail) {
    auto records = harness::run_batch("cogsa", bench::make_benchmark("f6", 30),
                                      cogsa_config(50, 1000), 10, 42, 4);
    int zero_count = 0;
    for (double v : finals_of(records))
        if (v == 0.0) ++zero_count;
    detail = std::to_string(zero_count) + "/10 runs ended at exactly 0 (target >= 9)";
    return zero_count >= 9;
}

bool criterion4_rastrigin_escape(std::string& detail) {
    auto spec = bench::make_benchmark("f9", 30);
    double cogsa_med =
        median(finals_of(harness::run_batch("cogsa", spec, cogsa_config(50, 1000), 10, 42, 4)));
    double gsa_med =
        median(finals_of(harness::run_batch("gsa", spec, gsa_config(50, 1000), 10, 42, 4)));
    detail = "cogsa median " + sci(cogsa_med) + " (target <= 1e-8), gsa median " + sci(gsa_med) +
             " (target >= 1)";
    return cogsa_med <= 1e-8 && gsa_med >= 1.0;
}

bool criterion5_evaluation_budget(std::string& detail) {
    struct Case {
        std::size_t N, T;
    };
    for (Case c : {Case{10, 50}, Case{50, 1000}}) {
        bench::EvaluationCounter gsa_counter(bench::make_benchmark("f1", 10));
        engine::run(gsa_counter.spec(), gsa_config(c.N, c.T), 7, "gsa");
        if (gsa_counter.count() != c.T * c.N) {
            detail = "gsa N=" + std::to_string(c.N) + " T=" + std::to_string(c.T) + " consumed " +
                     std::to_string(gsa_counter.count());
            return false;
        }
        bench::EvaluationCounter cogsa_counter(bench::make_benchmark("f1", 10));
        engine::run(cogsa_counter.spec(), cogsa_config(c.N, c.T), 7, "cogsa");
        if (cogsa_counter.count() != c.T * (c.N + 1)) {
            detail = "cogsa N=" + std::to_string(c.N) + " T=" + std::to_string(c.T) +
                     " consumed " + std::to_string(cogsa_counter.count());
            return false;
        }
    }
    detail = "T*N (gsa) and T*(N+1) (cogsa) exact for (10,50) and (50,1000)";
    return true;
}

bool criterion6_benchmark_fidelity(std::string& detail) {
    auto report = bench::verify_optima(30);
    int passed = 0;
    std::string failures;
    for (const auto& check : report) {
        if (check.pass)
            ++passed;
        else
            failures += " " + check.name + "(" + sci(check.value) + " vs " + sci(check.expected) + ")";
    }
    detail = std::to_string(passed) + "/23 optima confirmed" +
             (failures.empty() ? "" : ";" + failures);
    return passed == 23;
}

bool criterion7_chaotic_machinery(std::string& detail) {
    auto cs = chaos::logistic_sequence(4.0, 0.7, 100000);
    for (double v : cs.values)
        if (!(v > 0.0 && v < 1.0)) {
            detail = "logistic sequence left (0,1)";
            return false;
        }

    chaos::ChaoticAlphaConfig cfg;  // A=2, B=25, scale=1
    cfg.T = 1000;
    Rng rng(99);
    for (int i = 0; i < 10000; ++i) {
        std::size_t t = rng.uniform_index(cfg.T + 1);
        double cs_t = cs.values[rng.uniform_index(cs.values.size())];
        double alpha = chaos::chaotic_alpha(cfg, cs_t, t, rng.uniform01());
        if (!(alpha >= 23.0 && alpha <= 27.0)) {
            detail = "alpha " + sci(alpha) + " outside [23, 27]";
            return false;
        }
    }
    for (double coin : {0.0, 0.2, 0.5, 0.9})
        if (chaos::chaotic_alpha(cfg, 0.31, cfg.T, coin) != 25.0) {
            detail = "alpha at t=T is not exactly 25";
            return false;
        }
    detail = "10^5-element sequence bounded; 10^4 alpha draws in [23, 27]; alpha(T) = 25";
    return true;
}

bool criterion8_statistics_oracle(std::string& detail) {
    std::size_t cases = 0;
    auto agree = [&](const std::vector<std::vector<double>>& blocks) {
        ++cases;
        stats::PairedResults data;
        for (std::size_t j = 0; j < blocks[0].size(); ++j)
            data.algorithms.push_back("a" + std::to_string(j));
        data.blocks = blocks;
        auto mine = stats::friedman_statistic(data);
        auto expected = oracle::friedman(blocks);
        if (mine.degenerate != expected.degenerate) return false;
        if (!mine.degenerate && std::fabs(mine.chi_square - expected.chi) > 1e-10) return false;
        auto p_mine = stats::pairwise_posthoc(data, "a0");
        auto p_expected = oracle::posthoc(blocks, 0);
        std::size_t idx = 0;
        for (std::size_t j = 1; j < data.algorithms.size(); ++j, ++idx)
            if (std::fabs(p_mine.at(data.algorithms[j]) - p_expected[idx]) > 1e-10) return false;
        return true;
    };

    auto enumerate = [&](std::size_t k, std::size_t n, std::size_t alphabet) {
        std::size_t cells = k * n, total = 1;
        for (std::size_t c = 0; c < cells; ++c) total *= alphabet;
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t rest = code;
            std::vector<std::vector<double>> blocks(n, std::vector<double>(k));
            for (auto& block : blocks)
                for (auto& v : block) {
                    v = static_cast<double>(rest % alphabet);
                    rest /= alphabet;
                }
            if (!agree(blocks)) return false;
        }
        return true;
    };

    for (std::size_t n = 2; n <= 5; ++n)
        if (!enumerate(2, n, 3)) {
            detail = "exhaustive k=2 n=" + std::to_string(n) + " disagreed with the oracle";
            return false;
        }
    for (std::size_t n = 2; n <= 4; ++n)
        if (!enumerate(3, n, 3)) {
            detail = "exhaustive k=3 n=" + std::to_string(n) + " disagreed with the oracle";
            return false;
        }
    if (!enumerate(3, 5, 2)) {
        detail = "exhaustive k=3 n=5 disagreed with the oracle";
        return false;
    }

    Rng rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = 2 + rng.uniform_index(7);
        std::size_t n = 2 + rng.uniform_index(29);
        std::vector<std::vector<double>> blocks(n, std::vector<double>(k));
        for (auto& block : blocks)
            for (auto& v : block)
                v = rng.uniform01() < 0.3 ? std::floor(rng.uniform(0.0, 4.0))
                                          : rng.uniform(0.0, 100.0);
        if (!agree(blocks)) {
            detail = "random instance disagreed with the oracle";
            return false;
        }
    }

    // identical columns: capped p = 1 exactly
    stats::PairedResults same;
    same.algorithms = {"a0", "a1", "a2"};
    same.blocks = {{4.0, 4.0, 4.0}, {1.0, 1.0, 1.0}, {3.0, 3.0, 3.0}};
    for (const auto& [name, p] : stats::pairwise_posthoc(same, "a0"))
        if (p != 1.0) {
            detail = "identical columns did not produce p = 1 for " + name;
            return false;
        }

    detail = std::to_string(cases) + " instances matched the brute-force oracle to 1e-10";
    return true;
}

bool criterion9_cli_determinism(std::string& detail) {
    TempDir dir;
    fs::path config = dir.path / "exp.ini";
    {
        std::ofstream out(config);
        out << "benchmarks = f1\ndimension = 4\npopulation = 6\niterations = 30\nruns = 3\n"
            << "master_seed = 11\noutput = unused\n\n[gsa]\n\n[cogsa]\n";
    }
    auto out1 = dir.path / "out1";
    auto out2 = dir.path / "out2";
    auto quiet = " > /dev/null 2>&1";
    auto invoke = [&](const std::string& args) {
        return run_command(g_cli_path + " " + args + quiet);
    };
    if (invoke("run --config " + config.string() + " --out " + out1.string()) != 0 ||
        invoke("run --config " + config.string() + " --out " + out2.string()) != 0) {
        detail = "cli run failed";
        return false;
    }
    if (invoke("trace " + (out1 / "records").string() + " --out " + (dir.path / "t1.csv").string()) != 0 ||
        invoke("trace " + (out2 / "records").string() + " --out " + (dir.path / "t2.csv").string()) != 0) {
        detail = "cli trace failed";
        return false;
    }
    if (invoke("compare " + out1.string() + " --reference cogsa --out " +
               (dir.path / "p1.csv").string()) != 0 ||
        invoke("compare " + out2.string() + " --reference cogsa --out " +
               (dir.path / "p2.csv").string()) != 0) {
        detail = "cli compare failed";
        return false;
    }

    std::vector<std::pair<fs::path, fs::path>> pairs{
        {out1 / "report.csv", out2 / "report.csv"},
        {out1 / "runs.csv", out2 / "runs.csv"},
        {dir.path / "t1.csv", dir.path / "t2.csv"},
        {dir.path / "p1.csv", dir.path / "p2.csv"}};
    for (const char* alg : {"gsa", "cogsa"})
        for (int run = 0; run < 3; ++run) {
            char name[64];
            std::snprintf(name, sizeof name, "%s__f1__run%03d.rec", alg, run);
            pairs.emplace_back(out1 / "records" / name, out2 / "records" / name);
        }
    for (const auto& [a, b] : pairs)
        if (read_file(a) != read_file(b)) {
            detail = "files differ: " + a.string();
            return false;
        }
    detail = "record, report, runs, trace and p-value files byte-identical across reruns";
    return true;
}

bool criterion10_invariant_suite(std::string& detail) {
    Rng rng(31337);

    // mass normalization
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 2 + rng.uniform_index(60);
        std::vector<double> fit(n);
        for (auto& f : fit) f = rng.uniform(-1e8, 1e8);
        auto m = engine::compute_masses(fit);
        double sum = 0.0;
        for (double v : m) sum += v;
        if (std::fabs(sum - 1.0) >= 1e-12) {
            detail = "mass normalization violated";
            return false;
        }
    }

    // nonincreasing best-so-far over full COGSA runs
    const char* names[] = {"f1", "f9", "f11"};
    for (int trial = 0; trial < 1000; ++trial) {
        auto spec = bench::make_benchmark(names[trial % 3], 2);
        auto rec = engine::run(spec, cogsa_config(4, 12), static_cast<std::uint64_t>(trial));
        for (std::size_t i = 1; i < rec.best_trace.size(); ++i)
            if (rec.best_trace[i] > rec.best_trace[i - 1]) {
                detail = "best-so-far trace increased";
                return false;
            }
    }

    // kbest monotonicity with exact endpoints
    for (int trial = 0; trial < 1000; ++trial) {
        engine::EngineConfig cfg;
        cfg.N = 2 + rng.uniform_index(100);
        cfg.T = 1 + rng.uniform_index(300);
        cfg.kbest_final_fraction = rng.uniform(1e-3, 1.0);
        if (engine::kbest_size(0, cfg) != cfg.N) {
            detail = "kbest does not start at N";
            return false;
        }
        std::size_t prev = cfg.N;
        for (std::size_t t = 1; t <= cfg.T; ++t) {
            std::size_t k = engine::kbest_size(t, cfg);
            if (k > prev || k < 1) {
                detail = "kbest schedule not monotone";
                return false;
            }
            prev = k;
        }
    }

    // OBL single-agent footprint with exactly one evaluation
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t count = 2 + rng.uniform_index(8);
        std::size_t n = 1 + rng.uniform_index(6);
        obl::Bounds b(n, -30.0, 30.0);
        std::vector<Agent> agents(count);
        for (auto& agent : agents) {
            agent.position.resize(n);
            agent.velocity.assign(n, 0.0);
            for (std::size_t j = 0; j < n; ++j) agent.position[j] = rng.uniform(-30.0, 30.0);
            double s = 0.0;
            for (double x : agent.position) s += x * x;
            agent.fitness = s;
        }
        auto before = agents;
        std::size_t evals = 0;
        auto result = obl::apply_obl_step(agents, b, rng.uniform(1e-6, 1.0 - 1e-6), rng,
                                          [&](std::span<const double> x) {
                                              ++evals;
                                              double s = 0.0;
                                              for (double v : x) s += v * v;
                                              return s;
                                          });
        std::size_t changed = 0;
        for (std::size_t i = 0; i < count; ++i)
            if (agents[i].position != before[i].position) ++changed;
        if (evals != 1 || result.evaluations_used != 1 || changed > 1 ||
            (changed == 1 && !result.replaced)) {
            detail = "OBL step footprint violated";
            return false;
        }
    }

    // OBL feasibility on random boxes
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 1 + rng.uniform_index(10);
        std::vector<double> lo(n), hi(n), x(n);
        for (std::size_t j = 0; j < n; ++j) {
            lo[j] = rng.uniform(-100.0, 100.0);
            hi[j] = lo[j] + rng.uniform(1e-3, 150.0);
            x[j] = rng.uniform(lo[j], hi[j]);
        }
        obl::Bounds b(lo, hi);
        if (!b.contains(obl::chaotic_opposite(x, b, rng.uniform(1e-6, 1.0 - 1e-6)))) {
            detail = "chaotic opposite left the box";
            return false;
        }
    }

    // classical opposite involution, exact
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 1 + rng.uniform_index(10);
        std::vector<double> lo(n), hi(n), x(n);
        for (std::size_t j = 0; j < n; ++j) {
            lo[j] = rng.uniform(-100.0, 100.0);
            hi[j] = lo[j] + rng.uniform(1e-3, 150.0);
            x[j] = rng.uniform(lo[j], hi[j]);
        }
        obl::Bounds b(lo, hi);
        if (obl::classical_opposite(obl::classical_opposite(x, b), b) != x) {
            detail = "classical opposite is not an exact involution";
            return false;
        }
    }

    detail = "6 invariant families x 1000 random cases";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc)
            g_cli_path = argv[++i];
        else
            selected.push_back(std::atoi(arg.c_str()));
    }

    struct Criterion {
        int id;
        const char* title;
        std::function<bool(std::string&)> check;
    };
    const std::vector<Criterion> criteria{
        {1, "sphere convergence (cogsa f1 n=30)", criterion1_sphere_convergence},
        {2, "gsa/cogsa separation (f1 n=100)", criterion2_separation},
        {3, "step-function exactness (cogsa f6 n=30)", criterion3_step_exactness},
        {4, "rastrigin stagnation escape (f9 n=30)", criterion4_rastrigin_escape},
        {5, "evaluation budget", criterion5_evaluation_budget},
        {6, "benchmark fidelity (verify optima)", criterion6_benchmark_fidelity},
        {7, "chaotic machinery bounds", criterion7_chaotic_machinery},
        {8, "statistics oracle equivalence", criterion8_statistics_oracle},
        {9, "CLI determinism", criterion9_cli_determinism},
        {10, "invariant property suite", criterion10_invariant_suite},
    };

    int passed = 0, total = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
            continue;
        ++total;
        std::string detail;
        bool ok = false;
        auto started = std::chrono::steady_clock::now();
        try {
            ok = criterion.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::printf("[%s] %2d. %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.title, detail.c_str(), elapsed);
        std::fflush(stdout);
        if (ok) ++passed;
    }
    std::printf("acceptance: %d/%d criteria passed\n", passed, total);
    return passed == total ? 0 : 1;
}
