#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "elf/metrics.hpp"
#include "elf/qubit_algebra.hpp"
#include "elf/scheme.hpp"

namespace elf {

enum class Objective { Fisher, Slope };
enum class Method { GradientAscent, CoordinateAscent };

const char* to_string(Objective o);
const char* to_string(Method m);

struct TuneSpec {
    SchemeKind scheme = SchemeKind::AF;
    Objective objective = Objective::Fisher;
    Method method = Method::CoordinateAscent;
    int layers = 1;
    double mu = 1.0;  // tuning point theta = mu, in (0, pi)
    double f = 1.0;   // process fidelity
    int restarts = 10;
    std::uint64_t seed = 0;
    double tolerance = 1e-8;  // stop once a round improves the objective by less than this
    int max_rounds = 500;
    double step0 = 0.1;       // gradient step delta(t) = step0 / (1 + t / step_decay)
    double step_decay = 50.0;
    int scan_points = 64;     // coordinate-ascent 1D solve: uniform scan ...
    int golden_iters = 30;    // ... then golden-section refinement
    // Start of restart 0; the Chebyshev angles when absent. Other restarts start at random.
    std::optional<AngleVector> warm_start;

    void validate() const;
};

struct TuneResult {
    AngleVector x_opt;
    // Fisher: f^2 bias'^2 / (1 - f^2 bias^2) at mu. Slope: |bias'(mu)| (the quantity the
    // slope algorithms maximize; the likelihood slope is f/2 times this).
    double objective_value = 0.0;
    int iterations = 0;
    int restart_index = 0;
    bool converged = false;
};

// Objective of `spec` at angles x.
double tune_objective(const TuneSpec& spec, const AngleVector& x);

// Partial derivatives of the objective with respect to every angle.
std::vector<double> tune_gradient(const TuneSpec& spec, const AngleVector& x);

// Objective values seen after each round of one run (restart) from x0.
struct RunTrace {
    TuneResult result;
    std::vector<double> history;
};
RunTrace tune_single(const TuneSpec& spec, const AngleVector& x0);

// Best of spec.restarts runs; ties go to the lowest restart index.
TuneResult tune(const TuneSpec& spec, int threads = 1);

// Lookup table of tuned angles over a grid of Pi values.
struct GridSpec {
    double lo = -1.0;
    double hi = 1.0;
    int points = 4001;

    std::vector<double> values() const;
};

struct TableEntry {
    double pi = 0.0;
    bool valid = false;  // false at Pi = +-1 where theta leaves (0, pi)
    AngleVector angles;
    double objective = 0.0;
    std::string flag;
};

struct LookupTable {
    SchemeKind scheme = SchemeKind::AF;
    Objective objective = Objective::Fisher;
    Method method = Method::CoordinateAscent;
    int layers = 1;
    NoiseModel noise;
    int restarts = 10;
    std::uint64_t seed = 0;
    std::vector<TableEntry> entries;

    // Entry whose Pi is closest to the query (lower index on ties), skipping invalid ones.
    const TableEntry& nearest(double pi) const;
};

struct TableOptions {
    SchemeKind scheme = SchemeKind::AF;
    Objective objective = Objective::Fisher;
    Method method = Method::CoordinateAscent;
    int layers = 1;
    NoiseModel noise;
    GridSpec grid;
    int restarts = 10;
    std::uint64_t seed = 0;
    int threads = 1;
    // Called after each grid point with (done, total).
    std::function<void(std::size_t, std::size_t)> progress;
};

LookupTable build_lookup_table(const TableOptions& opt);

inline constexpr const char* kTableVersion = "elf-table/1";
std::string table_to_json(const LookupTable& table);
LookupTable table_from_json(const std::string& text);

// Closed-form maximum of |Delta'(mu; x1, x2)| for L = 1 and one maximizing angle pair.
struct L1SlopeOptimum {
    double max_slope = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
};
L1SlopeOptimum analytic_l1_slope_optimum(double mu);
// Branch points mu_1 < mu_2 < mu_3 < mu_4 of the closed form.
std::array<double, 4> l1_slope_breakpoints();

}  // namespace elf
