#include "tzitzeica/dense.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace tzitzeica {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    assert(x.size() == n_);
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double DenseMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (double v : row(i)) s += std::abs(v);
        best = std::max(best, s);
    }
    return best;
}

LuFactorization::LuFactorization(DenseMatrix a, double pivot_rel_tol) : lu_(std::move(a)) {
    const std::size_t n = lu_.size();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    const double scale = lu_.norm_inf();
    const double threshold = pivot_rel_tol * (scale > 0.0 ? scale : 1.0);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                p = i;
            }
        }
        if (best < threshold) {
            singular_ = true;
            continue;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
            parity_ = -parity_;
        }
        const double pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = lu_(i, k) / pivot;
            lu_(i, k) = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }
}

int LuFactorization::determinant_sign() const noexcept {
    if (singular_) return 0;
    int sign = parity_;
    for (std::size_t i = 0; i < lu_.size(); ++i) {
        if (lu_(i, i) < 0.0) sign = -sign;
    }
    return sign;
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
    const std::size_t n = lu_.size();
    assert(b.size() == n && !singular_);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

SymmetricEigen symmetric_eigen(DenseMatrix a, double tol, int max_sweeps) {
    const std::size_t n = a.size();
    DenseMatrix v = DenseMatrix::identity(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) total += a(i, j) * a(i, j);
    const double target = tol * std::sqrt(total);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle that annihilates a(p,q) (Golub & Van Loan 8.5.2).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    SymmetricEigen out{std::vector<double>(n), DenseMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::vector<double> symmetric_eigenvalues(DenseMatrix a, double tol, int max_sweeps) {
    return symmetric_eigen(std::move(a), tol, max_sweeps).values;
}

} // namespace tzitzeica
