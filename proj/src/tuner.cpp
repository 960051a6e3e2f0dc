#include "elf/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "elf/bias.hpp"
#include "elf/csbd.hpp"
#include "elf/error.hpp"
#include "elf/parallel.hpp"
#include "elf/rng.hpp"

namespace elf {

using std::numbers::pi;

const char* to_string(Objective o) { return o == Objective::Fisher ? "fisher" : "slope"; }
const char* to_string(Method m) { return m == Method::GradientAscent ? "grad" : "coord"; }

void TuneSpec::validate() const {
    if (layers < 1) domain_error("layer count must be >= 1");
    if (!(mu > 0.0 && mu < pi)) domain_error("tuning point mu must lie in (0, pi)");
    if (!(f >= 0.0 && f <= 1.0)) domain_error("fidelity must lie in [0, 1]");
    if (restarts < 1) domain_error("restarts must be >= 1");
    if (!(tolerance > 0.0)) domain_error("tolerance must be positive");
    if (max_rounds < 1) domain_error("max rounds must be >= 1");
    if (!(step0 > 0.0) || !(step_decay > 0.0)) domain_error("step schedule must be positive");
    if (scan_points < 2 || golden_iters < 0) domain_error("invalid 1D solver settings");
    if (warm_start && warm_start->layers() != layers) domain_error("warm start has the wrong number of angles");
}

namespace {

// Fisher information with singular points (f|bias| = 1) scored as 0 so the search moves on.
double fisher_or_zero(double f, double d, double dp) {
    double den = 1.0 - f * f * d * d;
    if (den < kSingularityGuard) return 0.0;
    return f * f * dp * dp / den;
}

double objective_from(const TuneSpec& spec, double d, double dp) {
    return spec.objective == Objective::Fisher ? fisher_or_zero(spec.f, d, dp) : std::abs(dp);
}

// Objective as a function of x_j alone, from the coordinate's coefficients. Both schemes
// are sinusoids in phi = 2 x_j (AF) or phi = x_j (AB).
double phase_objective(const TuneSpec& spec, const CsbdCoefficients& k, double cphi, double sphi) {
    return objective_from(spec, k.c * cphi + k.s * sphi + k.b, k.c_prime * cphi + k.s_prime * sphi + k.b_prime);
}

double phase_of(const TuneSpec& spec, double xj) { return spec.scheme == SchemeKind::AF ? 2.0 * xj : xj; }

double coordinate_objective(const TuneSpec& spec, const CsbdCoefficients& k, double xj) {
    double phi = phase_of(spec, xj);
    return phase_objective(spec, k, std::cos(phi), std::sin(phi));
}

// cos/sin of the scan phases -pi + 2 pi i / n, shared by every coordinate of a run.
struct ScanTable {
    std::vector<double> phase, c, s;
    explicit ScanTable(int n) {
        for (int i = 0; i < n; ++i) {
            double phi = -pi + 2.0 * pi * i / n;
            phase.push_back(phi), c.push_back(std::cos(phi)), s.push_back(std::sin(phi));
        }
    }
};

double solve_fisher_coordinate(const TuneSpec& spec, const ScanTable& scan, const CsbdCoefficients& k,
                               double current) {
    // Work in the phase variable; one period is 2 pi for both schemes.
    const double h = 2.0 * pi / spec.scan_points;
    auto at = [&](double phi) { return phase_objective(spec, k, std::cos(phi), std::sin(phi)); };
    double best_phi = phase_of(spec, current);
    double best = at(best_phi);
    double scan_phi = 0.0, scan_best = -1.0;
    for (int i = 0; i < spec.scan_points; ++i) {
        double v = phase_objective(spec, k, scan.c[i], scan.s[i]);
        if (v > scan_best) scan_best = v, scan_phi = scan.phase[i];
    }
    // Golden-section refinement inside the neighbouring scan cells.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = scan_phi - h, b = scan_phi + h;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = at(c), fd = at(d);
    for (int it = 0; it < spec.golden_iters; ++it) {
        if (fc >= fd) {
            b = d, d = c, fd = fc;
            c = b - inv_phi * (b - a);
            fc = at(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + inv_phi * (b - a);
            fd = at(d);
        }
    }
    const double cand[3] = {scan_phi, c, d};
    const double vals[3] = {scan_best, fc, fd};
    for (int i = 0; i < 3; ++i)
        if (vals[i] > best) best = vals[i], best_phi = cand[i];
    return spec.scheme == SchemeKind::AF ? 0.5 * best_phi : best_phi;
}

double solve_slope_coordinate(const TuneSpec& spec, const CsbdCoefficients& k, double current) {
    double x;
    if (spec.scheme == SchemeKind::AF) {
        double sgn = k.b_prime >= 0.0 ? 1.0 : -1.0;
        x = 0.5 * std::arg(std::complex<double>(sgn * k.c_prime, sgn * k.s_prime));
    } else {
        x = std::arg(std::complex<double>(k.c_prime, k.s_prime));
    }
    return coordinate_objective(spec, k, x) > coordinate_objective(spec, k, current) ? x : current;
}

AngleVector random_start(const TuneSpec& spec, int restart) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(restart));
    std::vector<double> v(2 * spec.layers);
    for (double& x : v) x = rng.uniform(-pi, pi);
    return AngleVector(v);
}

RunTrace run_coordinate(const TuneSpec& spec, AngleVector x) {
    RunTrace out;
    double prev = tune_objective(spec, x);
    out.history.push_back(prev);
    const ScanTable scan(spec.scan_points);
    int round = 0;
    bool converged = false;
    while (round < spec.max_rounds && !converged) {
        ++round;
        CsbdSweep sweep(spec.scheme, spec.mu, x);
        for (std::size_t j = 0; j < x.size(); ++j) {
            CsbdCoefficients k = sweep.current();
            double nx = spec.objective == Objective::Fisher ? solve_fisher_coordinate(spec, scan, k, x[j])
                                                            : solve_slope_coordinate(spec, k, x[j]);
            x.set(j, nx);
            sweep.commit(x[j]);
        }
        double obj = tune_objective(spec, x);
        out.history.push_back(obj);
        converged = std::abs(obj - prev) < spec.tolerance;
        prev = obj;
    }
    out.result = {x, prev, round, 0, converged};
    return out;
}

RunTrace run_gradient(const TuneSpec& spec, AngleVector x) {
    RunTrace out;
    double prev = tune_objective(spec, x);
    out.history.push_back(prev);
    AngleVector best_x = x;
    double best = prev;
    int round = 0;
    bool converged = false;
    while (round < spec.max_rounds && !converged) {
        double step = spec.step0 / (1.0 + round / spec.step_decay);
        ++round;
        std::vector<double> g = tune_gradient(spec, x);
        for (std::size_t j = 0; j < x.size(); ++j) x.set(j, x[j] + step * g[j]);
        double obj = tune_objective(spec, x);
        out.history.push_back(obj);
        if (obj > best) best = obj, best_x = x;
        converged = std::abs(obj - prev) < spec.tolerance;
        prev = obj;
    }
    out.result = {best_x, best, round, 0, converged};
    return out;
}

}  // namespace

double tune_objective(const TuneSpec& spec, const AngleVector& x) {
    double th[1] = {spec.mu}, d[1], dp[1];
    bias_many(spec.scheme, x, th, d, dp);
    return objective_from(spec, d[0], dp[0]);
}

std::vector<double> tune_gradient(const TuneSpec& spec, const AngleVector& x) {
    CsbdTable table(spec.scheme, spec.mu, x);
    const bool af = spec.scheme == SchemeKind::AF;
    const CsbdCoefficients k1 = table.coefficients(1);
    const double d = k1.bias_at(spec.scheme, x[0]);
    const double dp = k1.deriv_at(spec.scheme, x[0]);
    const double f2 = spec.f * spec.f;
    const double den = 1.0 - f2 * d * d;
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const CsbdCoefficients k = table.coefficients(static_cast<int>(j) + 1);
        const double xj = x[j];
        // chi = d bias / d x_j, chi' = d bias' / d x_j
        double chi, chip;
        if (af) {
            chi = 2.0 * (-k.c * std::sin(2 * xj) + k.s * std::cos(2 * xj));
            chip = 2.0 * (-k.c_prime * std::sin(2 * xj) + k.s_prime * std::cos(2 * xj));
        } else {
            chi = -k.c * std::sin(xj) + k.s * std::cos(xj);
            chip = -k.c_prime * std::sin(xj) + k.s_prime * std::cos(xj);
        }
        if (spec.objective == Objective::Slope) {
            g[j] = 2.0 * dp * chip;  // d (bias')^2 / d x_j
        } else if (den < kSingularityGuard) {
            g[j] = 0.0;
        } else {
            g[j] = 2.0 * f2 * (den * dp * chip + f2 * d * dp * dp * chi) / (den * den);
        }
    }
    return g;
}

RunTrace tune_single(const TuneSpec& spec, const AngleVector& x0) {
    spec.validate();
    if (x0.layers() != spec.layers) domain_error("start point has the wrong number of angles");
    return spec.method == Method::CoordinateAscent ? run_coordinate(spec, x0) : run_gradient(spec, x0);
}

TuneResult tune(const TuneSpec& spec, int threads) {
    spec.validate();
    std::vector<TuneResult> runs(spec.restarts);
    parallel_for(runs.size(), threads, [&](std::size_t r) {
        const int ri = static_cast<int>(r);
        AngleVector x0 = ri > 0            ? random_start(spec, ri)
                         : spec.warm_start ? *spec.warm_start
                                           : AngleVector::chebyshev(spec.layers);
        runs[r] = tune_single(spec, x0).result;
        runs[r].restart_index = ri;
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].objective_value > runs[best].objective_value) best = r;
    return runs[best];
}

std::vector<double> GridSpec::values() const {
    if (points < 1) domain_error("grid needs at least one point");
    if (!(lo >= -1.0 && hi <= 1.0 && lo <= hi)) domain_error("grid must lie within [-1, 1]");
    if (points > 1 && !(lo < hi)) domain_error("grid bounds must satisfy lo < hi");
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    return v;
}

const TableEntry& LookupTable::nearest(double pi_query) const {
    // Entries are sorted by Pi; search outward from the insertion point for valid ones.
    auto it = std::lower_bound(entries.begin(), entries.end(), pi_query,
                               [](const TableEntry& e, double v) { return e.pi < v; });
    std::ptrdiff_t hi = it - entries.begin(), lo = hi - 1;
    while (lo >= 0 && !entries[lo].valid) --lo;
    while (hi < static_cast<std::ptrdiff_t>(entries.size()) && !entries[hi].valid) ++hi;
    const bool has_lo = lo >= 0, has_hi = hi < static_cast<std::ptrdiff_t>(entries.size());
    if (!has_lo && !has_hi) domain_error("lookup table has no valid entries");
    if (!has_hi) return entries[lo];
    if (!has_lo) return entries[hi];
    return pi_query - entries[lo].pi <= entries[hi].pi - pi_query ? entries[lo] : entries[hi];
}

LookupTable build_lookup_table(const TableOptions& opt) {
    opt.noise.validate();
    if (opt.layers < 1) domain_error("layer count must be >= 1");
    const std::vector<double> grid = opt.grid.values();
    LookupTable table;
    table.scheme = opt.scheme;
    table.objective = opt.objective;
    table.method = opt.method;
    table.layers = opt.layers;
    table.noise = opt.noise;
    table.restarts = opt.restarts;
    table.seed = opt.seed;
    table.entries.resize(grid.size());
    const double f = opt.noise.process_fidelity(opt.layers);
    std::optional<AngleVector> warm;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        TableEntry& e = table.entries[i];
        e.pi = grid[i];
        if (std::abs(e.pi) >= 1.0) {
            e.flag = "theta outside (0, pi)";
        } else {
            TuneSpec spec;
            spec.scheme = opt.scheme;
            spec.objective = opt.objective;
            spec.method = opt.method;
            spec.layers = opt.layers;
            spec.mu = std::acos(e.pi);
            spec.f = f;
            spec.restarts = opt.restarts;
            spec.seed = stream_seed(opt.seed, i);
            spec.warm_start = warm;
            try {
                TuneResult r = tune(spec, opt.threads);
                e.valid = true;
                e.angles = r.x_opt;
                e.objective = r.objective_value;
                if (!r.converged) e.flag = "not converged";
                warm = r.x_opt;
            } catch (const Error& err) {
                e.flag = err.what();
            }
        }
        if (opt.progress) opt.progress(i + 1, grid.size());
    }
    return table;
}

}  // namespace elf
