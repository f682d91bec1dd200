#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace nlbs {

/// Tridiagonal matrix stored by diagonals. lower[0] and upper[n-1] are unused.
template <typename Scalar>
struct Tridiagonal {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector lower;
    Vector diag;
    Vector upper;

    Tridiagonal() = default;
    explicit Tridiagonal(Eigen::Index n)
        : lower(Vector::Zero(n)), diag(Vector::Zero(n)), upper(Vector::Zero(n)) {}

    Eigen::Index size() const noexcept { return diag.size(); }

    Vector operator*(const Vector& v) const {
        const Eigen::Index n = size();
        Vector out = diag.cwiseProduct(v);
        if (n > 1) {
            out.head(n - 1) += upper.head(n - 1).cwiseProduct(v.tail(n - 1));
            out.tail(n - 1) += lower.tail(n - 1).cwiseProduct(v.head(n - 1));
        }
        return out;
    }

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
        const Eigen::Index n = size();
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, i) = diag[i];
            if (i > 0) m(i, i - 1) = lower[i];
            if (i + 1 < n) m(i, i + 1) = upper[i];
        }
        return m;
    }
};

/// Thomas algorithm without pivoting. Intended for the diagonally dominant
/// systems of the implicit stepper; throws std::runtime_error on a zero pivot.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve(const Tridiagonal<Scalar>& A,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = A.size();
    Vector c(n), d(n);
    Scalar pivot = A.diag[0];
    if (pivot == Scalar(0)) throw std::runtime_error("tridiagonal solve: zero pivot");
    c[0] = n > 1 ? A.upper[0] / pivot : Scalar(0);
    d[0] = rhs[0] / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = A.diag[i] - A.lower[i] * c[i - 1];
        if (pivot == Scalar(0) || !std::isfinite(static_cast<double>(pivot))) {
            throw std::runtime_error("tridiagonal solve: zero pivot");
        }
        c[i] = i + 1 < n ? A.upper[i] / pivot : Scalar(0);
        d[i] = (rhs[i] - A.lower[i] * d[i - 1]) / pivot;
    }
    Vector x(n);
    x[n - 1] = d[n - 1];
    for (Eigen::Index i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

}  // namespace nlbs
