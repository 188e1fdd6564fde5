#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "cogsa/obl.hpp"
#include "cogsa/rng.hpp"

namespace cogsa::bench {

enum class Modality { unimodal, multimodal, multimodal_fixed_dim };

inline const char* to_string(Modality m) {
    switch (m) {
        case Modality::unimodal: return "unimodal";
        case Modality::multimodal: return "multimodal";
        default: return "multimodal-fixed-dim";
    }
}

// Objective callable. The Rng pointer feeds the additive noise of f7 (and
// nothing else); passing nullptr evaluates the deterministic part only.
using ObjectiveFn = std::function<double(std::span<const double>, Rng*)>;

struct BenchmarkSpec {
    std::string name;
    std::size_t dimension = 0;
    obl::Bounds bounds;
    double known_optimum = 0.0;
    Modality modality = Modality::unimodal;
    ObjectiveFn fn;

    double evaluate(std::span<const double> x, Rng* noise = nullptr) const {
        if (x.size() != dimension)
            throw std::invalid_argument("evaluate: dimension mismatch for " + name);
        return fn(x, noise);
    }
};

namespace detail {

inline double sq(double v) { return v * v; }

inline constexpr double pi = std::numbers::pi;

// Penalty term u(x, a, k, m) of the penalized functions f12/f13.
inline double penalty_u(double x, double a, double k, double m) {
    if (x > a) return k * std::pow(x - a, m);
    if (x < -a) return k * std::pow(-x - a, m);
    return 0.0;
}

inline double f1_sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double f2_schwefel_2_22(std::span<const double> x) {
    double s = 0.0, p = 1.0;
    for (double v : x) {
        s += std::fabs(v);
        p *= std::fabs(v);
    }
    return s + p;
}

inline double f3_schwefel_1_2(std::span<const double> x) {
    double s = 0.0, prefix = 0.0;
    for (double v : x) {
        prefix += v;
        s += prefix * prefix;
    }
    return s;
}

inline double f4_max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

inline double f5_rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += 100.0 * sq(x[i + 1] - x[i] * x[i]) + sq(x[i] - 1.0);
    return s;
}

inline double f6_step(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += sq(std::floor(v + 0.5));
    return s;
}

inline double f7_quartic_noise(std::span<const double> x, Rng* noise) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += static_cast<double>(i + 1) * sq(sq(x[i]));
    return s + (noise ? noise->uniform01() : 0.0);
}

inline double f8_schwefel(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += -v * std::sin(std::sqrt(std::fabs(v)));
    return s;
}

inline double f9_rastrigin(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
    return s;
}

inline double f10_ackley(std::span<const double> x) {
    double n = static_cast<double>(x.size());
    double sum_sq = 0.0, sum_cos = 0.0;
    for (double v : x) {
        sum_sq += v * v;
        sum_cos += std::cos(2.0 * pi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / n)) - std::exp(sum_cos / n) + 20.0 +
           std::numbers::e;
}

inline double f11_griewank(std::span<const double> x) {
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i];
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return s / 4000.0 - p + 1.0;
}

inline double f12_penalized(std::span<const double> x) {
    auto y = [](double v) { return 1.0 + (v + 1.0) / 4.0; };
    std::size_t n = x.size();
    double s = 10.0 * sq(std::sin(pi * y(x[0])));
    for (std::size_t i = 0; i + 1 < n; ++i)
        s += sq(y(x[i]) - 1.0) * (1.0 + 10.0 * sq(std::sin(pi * y(x[i + 1]))));
    s += sq(y(x[n - 1]) - 1.0);
    s *= pi / static_cast<double>(n);
    for (double v : x) s += penalty_u(v, 10.0, 100.0, 4.0);
    return s;
}

inline double f13_penalized2(std::span<const double> x) {
    std::size_t n = x.size();
    double s = sq(std::sin(3.0 * pi * x[0]));
    for (std::size_t i = 0; i + 1 < n; ++i)
        s += sq(x[i] - 1.0) * (1.0 + sq(std::sin(3.0 * pi * x[i + 1])));
    s += sq(x[n - 1] - 1.0) * (1.0 + sq(std::sin(2.0 * pi * x[n - 1])));
    s *= 0.1;
    for (double v : x) s += penalty_u(v, 5.0, 100.0, 4.0);
    return s;
}

inline double f14_foxholes(std::span<const double> x) {
    static constexpr std::array<double, 5> off = {-32.0, -16.0, 0.0, 16.0, 32.0};
    double s = 1.0 / 500.0;
    for (int j = 0; j < 25; ++j) {
        double d = std::pow(x[0] - off[j % 5], 6) + std::pow(x[1] - off[j / 5], 6);
        s += 1.0 / (static_cast<double>(j + 1) + d);
    }
    return 1.0 / s;
}

inline double f15_kowalik(std::span<const double> x) {
    static constexpr std::array<double, 11> a = {0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                                                 0.0456, 0.0342, 0.0323, 0.0235, 0.0246};
    static constexpr std::array<double, 11> b_inv = {0.25, 0.5, 1.0, 2.0,  4.0,  6.0,
                                                     8.0,  10.0, 12.0, 14.0, 16.0};
    double s = 0.0;
    for (std::size_t i = 0; i < 11; ++i) {
        double b = 1.0 / b_inv[i];
        s += sq(a[i] - x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]));
    }
    return s;
}

inline double f16_six_hump_camel(std::span<const double> x) {
    double x1 = x[0], x2 = x[1];
    return 4.0 * sq(x1) - 2.1 * sq(sq(x1)) + std::pow(x1, 6) / 3.0 + x1 * x2 - 4.0 * sq(x2) +
           4.0 * sq(sq(x2));
}

inline double f17_branin(std::span<const double> x) {
    double x1 = x[0], x2 = x[1];
    return sq(x2 - 5.1 * sq(x1) / (4.0 * sq(pi)) + 5.0 * x1 / pi - 6.0) +
           10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(x1) + 10.0;
}

inline double f18_goldstein_price(std::span<const double> x) {
    double x1 = x[0], x2 = x[1];
    double a = 1.0 + sq(x1 + x2 + 1.0) * (19.0 - 14.0 * x1 + 3.0 * sq(x1) - 14.0 * x2 +
                                          6.0 * x1 * x2 + 3.0 * sq(x2));
    double b = 30.0 + sq(2.0 * x1 - 3.0 * x2) * (18.0 - 32.0 * x1 + 12.0 * sq(x1) + 48.0 * x2 -
                                                 36.0 * x1 * x2 + 27.0 * sq(x2));
    return a * b;
}

inline double hartmann(std::span<const double> x, const double* A, const double* P,
                       std::size_t m) {
    static constexpr std::array<double, 4> c = {1.0, 1.2, 3.0, 3.2};
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double e = 0.0;
        for (std::size_t j = 0; j < m; ++j) e += A[i * m + j] * sq(x[j] - P[i * m + j]);
        s -= c[i] * std::exp(-e);
    }
    return s;
}

inline double f19_hartmann3(std::span<const double> x) {
    static constexpr std::array<double, 12> A = {3.0, 10.0, 30.0, 0.1, 10.0, 35.0,
                                                 3.0, 10.0, 30.0, 0.1, 10.0, 35.0};
    static constexpr std::array<double, 12> P = {0.3689, 0.1170, 0.2673, 0.4699, 0.4387, 0.7470,
                                                 0.1091, 0.8732, 0.5547, 0.0381, 0.5743, 0.8828};
    return hartmann(x, A.data(), P.data(), 3);
}

inline double f20_hartmann6(std::span<const double> x) {
    static constexpr std::array<double, 24> A = {10.0, 3.0,  17.0, 3.5,  1.7,  8.0,
                                                 0.05, 10.0, 17.0, 0.1,  8.0,  14.0,
                                                 3.0,  3.5,  1.7,  10.0, 17.0, 8.0,
                                                 17.0, 8.0,  0.05, 10.0, 0.1,  14.0};
    static constexpr std::array<double, 24> P = {
        0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886, 0.2329, 0.4135, 0.8307, 0.3736,
        0.1004, 0.9991, 0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650, 0.4047, 0.8828,
        0.8732, 0.5743, 0.1091, 0.0381};
    return hartmann(x, A.data(), P.data(), 6);
}

inline constexpr std::array<std::array<double, 4>, 10> shekel_a = {{{4.0, 4.0, 4.0, 4.0},
                                                                    {1.0, 1.0, 1.0, 1.0},
                                                                    {8.0, 8.0, 8.0, 8.0},
                                                                    {6.0, 6.0, 6.0, 6.0},
                                                                    {3.0, 7.0, 3.0, 7.0},
                                                                    {2.0, 9.0, 2.0, 9.0},
                                                                    {5.0, 5.0, 3.0, 3.0},
                                                                    {8.0, 1.0, 8.0, 1.0},
                                                                    {6.0, 2.0, 6.0, 2.0},
                                                                    {7.0, 3.6, 7.0, 3.6}}};
inline constexpr std::array<double, 10> shekel_c = {0.1, 0.2, 0.2, 0.4, 0.4,
                                                    0.6, 0.3, 0.7, 0.5, 0.5};

inline double shekel(std::span<const double> x, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double d = shekel_c[i];
        for (std::size_t j = 0; j < 4; ++j) d += sq(x[j] - shekel_a[i][j]);
        s -= 1.0 / d;
    }
    return s;
}

struct FunctionRow {
    const char* name;
    bool scalable;
    std::size_t fixed_dimension;  // 0 for scalable rows
    double lb, ub;
    Modality modality;
};

// The three scalability classes: unimodal f1-f7, multimodal f8-f13,
// fixed-dimension multimodal f14-f23.
inline constexpr std::array<FunctionRow, 23> function_table = {{
    {"f1", true, 0, -100.0, 100.0, Modality::unimodal},
    {"f2", true, 0, -10.0, 10.0, Modality::unimodal},
    {"f3", true, 0, -100.0, 100.0, Modality::unimodal},
    {"f4", true, 0, -100.0, 100.0, Modality::unimodal},
    {"f5", true, 0, -30.0, 30.0, Modality::unimodal},
    {"f6", true, 0, -100.0, 100.0, Modality::unimodal},
    {"f7", true, 0, -1.28, 1.28, Modality::unimodal},
    {"f8", true, 0, -500.0, 500.0, Modality::multimodal},
    {"f9", true, 0, -5.12, 5.12, Modality::multimodal},
    {"f10", true, 0, -32.0, 32.0, Modality::multimodal},
    {"f11", true, 0, -600.0, 600.0, Modality::multimodal},
    {"f12", true, 0, -50.0, 50.0, Modality::multimodal},
    {"f13", true, 0, -50.0, 50.0, Modality::multimodal},
    {"f14", false, 2, -65.0, 65.0, Modality::multimodal_fixed_dim},
    {"f15", false, 4, -5.0, 5.0, Modality::multimodal_fixed_dim},
    {"f16", false, 2, -5.0, 5.0, Modality::multimodal_fixed_dim},
    {"f17", false, 2, 0.0, 0.0, Modality::multimodal_fixed_dim},  // bounds set specially below
    {"f18", false, 2, -2.0, 2.0, Modality::multimodal_fixed_dim},
    {"f19", false, 3, 0.0, 1.0, Modality::multimodal_fixed_dim},
    {"f20", false, 6, 0.0, 1.0, Modality::multimodal_fixed_dim},
    {"f21", false, 4, 0.0, 10.0, Modality::multimodal_fixed_dim},
    {"f22", false, 4, 0.0, 10.0, Modality::multimodal_fixed_dim},
    {"f23", false, 4, 0.0, 10.0, Modality::multimodal_fixed_dim},
}};

inline const FunctionRow* find_row(const std::string& name) {
    for (const auto& row : function_table)
        if (name == row.name) return &row;
    return nullptr;
}

inline ObjectiveFn objective_for(const std::string& name) {
    auto pure = [](double (*f)(std::span<const double>)) {
        return [f](std::span<const double> x, Rng*) { return f(x); };
    };
    if (name == "f1") return pure(f1_sphere);
    if (name == "f2") return pure(f2_schwefel_2_22);
    if (name == "f3") return pure(f3_schwefel_1_2);
    if (name == "f4") return pure(f4_max_abs);
    if (name == "f5") return pure(f5_rosenbrock);
    if (name == "f6") return pure(f6_step);
    if (name == "f7") return [](std::span<const double> x, Rng* rng) { return f7_quartic_noise(x, rng); };
    if (name == "f8") return pure(f8_schwefel);
    if (name == "f9") return pure(f9_rastrigin);
    if (name == "f10") return pure(f10_ackley);
    if (name == "f11") return pure(f11_griewank);
    if (name == "f12") return pure(f12_penalized);
    if (name == "f13") return pure(f13_penalized2);
    if (name == "f14") return pure(f14_foxholes);
    if (name == "f15") return pure(f15_kowalik);
    if (name == "f16") return pure(f16_six_hump_camel);
    if (name == "f17") return pure(f17_branin);
    if (name == "f18") return pure(f18_goldstein_price);
    if (name == "f19") return pure(f19_hartmann3);
    if (name == "f20") return pure(f20_hartmann6);
    if (name == "f21") return [](std::span<const double> x, Rng*) { return shekel(x, 5); };
    if (name == "f22") return [](std::span<const double> x, Rng*) { return shekel(x, 7); };
    if (name == "f23") return [](std::span<const double> x, Rng*) { return shekel(x, 10); };
    throw std::invalid_argument("unknown benchmark: " + name);
}

// Full-precision optima behind the table's rounded prints.
inline double known_optimum_for(const std::string& name, std::size_t n) {
    if (name == "f8") return -418.9828872724339 * static_cast<double>(n);
    if (name == "f14") return 0.9980038377944498;
    if (name == "f15") return 3.0748598780743048e-4;
    if (name == "f16") return -1.0316284534898774;
    if (name == "f17") return 0.39788735772973816;  // 5 / (4*pi)
    if (name == "f18") return 3.0;
    if (name == "f19") return -3.862782147820756;
    if (name == "f20") return -3.322368011415512;
    if (name == "f21") return -10.153199679058231;
    if (name == "f22") return -10.402940566818663;
    if (name == "f23") return -10.536409816692048;
    return 0.0;  // f1-f7, f9-f13
}

}  // namespace detail

inline bool is_scalable(const std::string& name) {
    const auto* row = detail::find_row(name);
    return row != nullptr && row->scalable;
}

inline bool is_classical(const std::string& name) { return detail::find_row(name) != nullptr; }

// Build one of the 23 classical benchmarks. `dimension` applies to the
// scalable functions f1-f13; for f14-f23 it is ignored and, when it conflicts
// with the fixed dimension, a note is written to *warning.
inline BenchmarkSpec make_benchmark(const std::string& name, std::size_t dimension,
                                    std::string* warning = nullptr) {
    const auto* row = detail::find_row(name);
    if (row == nullptr) throw std::invalid_argument("unknown benchmark: " + name);

    BenchmarkSpec spec;
    spec.name = name;
    spec.modality = row->modality;
    if (row->scalable) {
        if (dimension < 1)
            throw std::invalid_argument("make_benchmark: dimension must be >= 1 for " + name);
        spec.dimension = dimension;
    } else {
        spec.dimension = row->fixed_dimension;
        if (warning != nullptr && dimension != 0 && dimension != row->fixed_dimension)
            *warning = name + " has fixed dimension " + std::to_string(row->fixed_dimension) +
                       "; requested dimension " + std::to_string(dimension) + " ignored";
    }
    if (name == "f17")
        spec.bounds = obl::Bounds({-5.0, 0.0}, {10.0, 15.0});
    else
        spec.bounds = obl::Bounds(spec.dimension, row->lb, row->ub);
    spec.known_optimum = detail::known_optimum_for(name, spec.dimension);
    spec.fn = detail::objective_for(name);
    return spec;
}

// A known optimizer per function, used by verify_optima. Analytic where one
// exists, the standard literature point otherwise.
inline std::vector<double> stored_optimizer(const std::string& name, std::size_t dimension) {
    if (name == "f5" || name == "f13") return std::vector<double>(dimension, 1.0);
    if (name == "f8") return std::vector<double>(dimension, 420.9687462275036);
    if (name == "f12") return std::vector<double>(dimension, -1.0);
    if (name == "f14") return {-32.0, -32.0};
    if (name == "f15") return {0.192833, 0.190836, 0.123117, 0.135766};
    if (name == "f16") return {0.08984201, -0.7126564};
    if (name == "f17") return {-std::numbers::pi, 12.275};
    if (name == "f18") return {0.0, -1.0};
    if (name == "f19") return {0.114614, 0.555649, 0.852547};
    if (name == "f20") return {0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573};
    if (name == "f21" || name == "f22" || name == "f23") return {4.0, 4.0, 4.0, 4.0};
    return std::vector<double>(dimension, 0.0);  // f1-f4, f6, f7, f9-f11
}

struct OptimumCheck {
    std::string name;
    double value = 0.0;     // objective at the stored optimizer
    double expected = 0.0;  // known optimum
    double tolerance = 0.0;
    bool pass = false;
};

// Evaluate every classical function at its stored optimizer and compare with
// the known optimum: 1e-12 where the optimum is analytic (f1-f6, f9-f13; f7
// evaluated noise-free), 1e-3 for the literature-constant functions.
inline std::vector<OptimumCheck> verify_optima(std::size_t scalable_dimension = 30) {
    std::vector<OptimumCheck> report;
    for (const auto& row : detail::function_table) {
        BenchmarkSpec spec = make_benchmark(row.name, row.scalable ? scalable_dimension : 0);
        OptimumCheck check;
        check.name = row.name;
        check.expected = spec.known_optimum;
        std::vector<double> x = stored_optimizer(row.name, spec.dimension);
        check.value = spec.evaluate(x, nullptr);
        std::string name(row.name);
        bool analytic = row.scalable && name != "f7" && name != "f8";  // f1-f6, f9-f13
        check.tolerance = analytic ? 1e-12 : 1e-3;
        check.pass = std::fabs(check.value - check.expected) <= check.tolerance;
        report.push_back(std::move(check));
    }
    return report;
}

// Counting wrapper: spec() evaluates the wrapped objective and bumps the
// shared counters, one increment per evaluation. Out-of-bounds arguments are
// tolerated but tallied separately.
class EvaluationCounter {
public:
    explicit EvaluationCounter(const BenchmarkSpec& inner)
        : count_(std::make_shared<std::atomic<std::size_t>>(0)),
          out_of_bounds_(std::make_shared<std::atomic<std::size_t>>(0)) {
        wrapped_ = inner;
        wrapped_.fn = [fn = inner.fn, bounds = inner.bounds, count = count_,
                       oob = out_of_bounds_](std::span<const double> x, Rng* rng) {
            count->fetch_add(1, std::memory_order_relaxed);
            if (!bounds.contains(x)) oob->fetch_add(1, std::memory_order_relaxed);
            return fn(x, rng);
        };
    }

    const BenchmarkSpec& spec() const { return wrapped_; }
    std::size_t count() const { return count_->load(); }
    std::size_t out_of_bounds() const { return out_of_bounds_->load(); }

private:
    BenchmarkSpec wrapped_;
    std::shared_ptr<std::atomic<std::size_t>> count_;
    std::shared_ptr<std::atomic<std::size_t>> out_of_bounds_;
};

// User-supplied objective running as a child process. Protocol: one request
// per line of whitespace-separated coordinates on the child's stdin, one
// fitness value per line on its stdout.
class SubprocessObjective {
public:
    explicit SubprocessObjective(const std::string& command) : command_(command) {
        static std::once_flag once;
        std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });

        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0)
            throw std::runtime_error("external objective: pipe failed");
        pid_ = fork();
        if (pid_ < 0) throw std::runtime_error("external objective: fork failed");
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        to_child_ = fdopen(to_child[1], "w");
        from_child_ = fdopen(from_child[0], "r");
        if (to_child_ == nullptr || from_child_ == nullptr)
            throw std::runtime_error("external objective: fdopen failed");
    }

    SubprocessObjective(const SubprocessObjective&) = delete;
    SubprocessObjective& operator=(const SubprocessObjective&) = delete;

    ~SubprocessObjective() {
        if (to_child_ != nullptr) fclose(to_child_);
        if (from_child_ != nullptr) fclose(from_child_);
        if (pid_ > 0) waitpid(pid_, nullptr, 0);
    }

    double evaluate(std::span<const double> x) {
        for (std::size_t j = 0; j < x.size(); ++j)
            fprintf(to_child_, j == 0 ? "%.17g" : " %.17g", x[j]);
        fputc('\n', to_child_);
        if (fflush(to_child_) != 0)
            throw std::runtime_error("external objective '" + command_ + "': write failed");
        char line[256];
        if (fgets(line, sizeof line, from_child_) == nullptr)
            throw std::runtime_error("external objective '" + command_ + "': no reply");
        char* end = nullptr;
        double value = std::strtod(line, &end);
        if (end == line)
            throw std::runtime_error("external objective '" + command_ + "': bad reply: " + line);
        return value;
    }

private:
    std::string command_;
    pid_t pid_ = -1;
    FILE* to_child_ = nullptr;
    FILE* from_child_ = nullptr;
};

// Each call spawns a fresh child process, so concurrent runs never share a
// protocol stream.
inline BenchmarkSpec make_external_benchmark(const std::string& name, std::size_t dimension,
                                             const obl::Bounds& bounds,
                                             const std::string& command,
                                             double known_optimum = 0.0) {
    if (bounds.dimension() != dimension)
        throw std::invalid_argument("external benchmark: bounds/dimension mismatch");
    BenchmarkSpec spec;
    spec.name = name;
    spec.dimension = dimension;
    spec.bounds = bounds;
    spec.known_optimum = known_optimum;
    spec.modality = Modality::multimodal;
    auto proc = std::make_shared<SubprocessObjective>(command);
    spec.fn = [proc](std::span<const double> x, Rng*) { return proc->evaluate(x); };
    return spec;
}

}  // namespace cogsa::bench
