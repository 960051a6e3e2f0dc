#include "elf/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>

#include "elf/error.hpp"

namespace elf {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights come from the
// first component of each normalized eigenvector.
QuadratureRule golub_welsch(int n, double mu0, double (*offdiag)(int)) {
    if (n < 1) domain_error("quadrature order must be >= 1");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) j(k - 1, k) = j(k, k - 1) = offdiag(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    QuadratureRule r;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(es.eigenvalues()(i));
        double v0 = es.eigenvectors()(0, i);
        r.weights.push_back(mu0 * v0 * v0);
    }
    // Symmetrize to remove eigen-solver asymmetry in the last bits.
    for (int i = 0; i < n / 2; ++i) {
        double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
        double w = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
        r.nodes[i] = -x, r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

double hermite_offdiag(int k) { return std::sqrt(static_cast<double>(k)); }
double legendre_offdiag(int k) { return k / std::sqrt(4.0 * k * k - 1.0); }

const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, int n, double mu0, double (*offdiag)(int)) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, golub_welsch(n, mu0, offdiag)).first;
    return it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite_normal(int n) {
    static std::map<int, QuadratureRule> cache;
    return cached(cache, n, 1.0, hermite_offdiag);
}

const QuadratureRule& gauss_legendre(int n) {
    static std::map<int, QuadratureRule> cache;
    return cached(cache, n, 2.0, legendre_offdiag);
}

}  // namespace elf
