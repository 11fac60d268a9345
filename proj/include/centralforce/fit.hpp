#ifndef CENTRALFORCE_FIT_HPP
#define CENTRALFORCE_FIT_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cforce {

/// Dense least squares min |A x - b| by Householder QR with column scaling.
/// A is row-major m x n, m >= n.  Returns x of size n.
inline std::vector<double> lsq_solve(std::vector<double> A, std::vector<double> b,
                                     std::size_t m, std::size_t n) {
    if (A.size() != m * n || b.size() != m || m < n)
        throw std::invalid_argument("lsq_solve: bad dimensions");
    std::vector<double> colscale(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < m; ++i) s = std::fmax(s, std::fabs(A[i * n + j]));
        if (s > 0) {
            colscale[j] = s;
            for (std::size_t i = 0; i < m; ++i) A[i * n + j] /= s;
        }
    }
    // Householder triangularization applied to [A | b]
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0;
        for (std::size_t i = j; i < m; ++i) norm += A[i * n + j] * A[i * n + j];
        norm = std::sqrt(norm);
        if (norm == 0)
            throw std::runtime_error("lsq_solve: rank-deficient design matrix");
        if (A[j * n + j] > 0) norm = -norm;
        std::vector<double> v(m - j);
        v[0] = A[j * n + j] - norm;
        for (std::size_t i = j + 1; i < m; ++i) v[i - j] = A[i * n + j];
        double vtv = 0;
        for (double t : v) vtv += t * t;
        if (vtv == 0) continue;
        A[j * n + j] = norm;
        for (std::size_t i = j + 1; i < m; ++i) A[i * n + j] = 0;
        for (std::size_t k = j + 1; k < n; ++k) {
            double dot = 0;
            for (std::size_t i = j; i < m; ++i) dot += v[i - j] * A[i * n + k];
            const double f = 2 * dot / vtv;
            for (std::size_t i = j; i < m; ++i) A[i * n + k] -= f * v[i - j];
        }
        double dotb = 0;
        for (std::size_t i = j; i < m; ++i) dotb += v[i - j] * b[i];
        const double fb = 2 * dotb / vtv;
        for (std::size_t i = j; i < m; ++i) b[i] -= fb * v[i - j];
    }
    std::vector<double> x(n);
    for (std::size_t jj = n; jj-- > 0;) {
        double s = b[jj];
        for (std::size_t k = jj + 1; k < n; ++k) s -= A[jj * n + k] * x[k];
        x[jj] = s / A[jj * n + jj];
    }
    for (std::size_t j = 0; j < n; ++j) x[j] /= colscale[j];
    return x;
}

/// Polynomial least squares y ~ sum c_k x^k, k = 0..deg, with the abscissa
/// centered and scaled for conditioning.  Returns coefficients in the
/// ORIGINAL variable (expanded back).
inline std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                                   int deg) {
    const std::size_t m = x.size(), n = deg + 1;
    double x0 = 0, sc = 0;
    for (double v : x) x0 += v;
    x0 /= m;
    for (double v : x) sc = std::fmax(sc, std::fabs(v - x0));
    if (sc == 0) sc = 1;
    std::vector<double> A(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        double t = 1, u = (x[i] - x0) / sc;
        for (std::size_t j = 0; j < n; ++j) { A[i * n + j] = t; t *= u; }
    }
    std::vector<double> c = lsq_solve(std::move(A), y, m, n);
    // expand c_k ((x-x0)/sc)^k into plain powers of x by synthetic shifts
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        // term c_k * (x - x0)^k / sc^k : binomial expansion
        double binom = 1;
        for (std::size_t j = 0; j <= k; ++j) {
            out[j] += c[k] / std::pow(sc, double(k)) * binom * std::pow(-x0, double(k - j));
            binom = binom * double(k - j) / double(j + 1);
        }
    }
    return out;
}

}  // namespace cforce

#endif
