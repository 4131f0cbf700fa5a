#include "opineq/matrix.hpp"

#include <cmath>
#include <limits>

namespace opineq {

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, cplx(0.0, 0.0)) {
    if (rows < 0 || cols < 0) throw Error("matrix dimensions must be nonnegative");
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows < 0 || cols < 0) throw Error("matrix dimensions must be nonnegative");
    if (data_.size() != static_cast<size_t>(rows) * cols)
        throw ShapeMismatch("entry count does not match rows*cols");
    check_finite();
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = std::conj(at(i, j));
    return r;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix add: shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + other.data_[k];
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix subtract: shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - other.data_[k];
    return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
    if (cols_ != other.rows_) throw DimensionMismatch("matrix multiply: inner dimension mismatch");
    ComplexMatrix r(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const cplx aik = at(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < other.cols_; ++j) r.at(i, j) += aik * other.at(k, j);
        }
    }
    return r;
}

ComplexMatrix ComplexMatrix::scaled(double factor) const {
    ComplexMatrix r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * factor;
    return r;
}

ComplexMatrix ComplexMatrix::scaled(cplx factor) const {
    ComplexMatrix r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * factor;
    return r;
}

void ComplexMatrix::check_finite() const {
    for (const cplx& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("matrix entry is not finite");
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
    if (!m.is_square()) throw NotSquare("hermitian matrix requires square input");
    m.check_finite();
    const int n = m.rows();
    mat_ = ComplexMatrix(n, n);
    for (int i = 0; i < n; ++i) {
        mat_.at(i, i) = cplx(m.at(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
            mat_.at(i, j) = v;
            mat_.at(j, i) = std::conj(v);
        }
    }
}

HermitianMatrix HermitianMatrix::identity(int n) {
    return HermitianMatrix(ComplexMatrix::identity(n));
}

HermitianMatrix HermitianMatrix::zero(int n) { return HermitianMatrix(ComplexMatrix(n, n)); }

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return HermitianMatrix(m);
}

double HermitianMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim(); ++i) t += at(i, i).real();
    return t;
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
    return HermitianMatrix(mat_ + other.mat_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
    return HermitianMatrix(mat_ - other.mat_);
}

HermitianMatrix HermitianMatrix::scaled(double factor) const {
    return HermitianMatrix(mat_.scaled(factor));
}

Interval Interval::nonnegative_reals() {
    return Interval(0.0, std::numeric_limits<double>::infinity());
}

Interval Interval::all_reals() {
    return Interval(-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity());
}

HermitianMatrix hermitize(const ComplexMatrix& raw, double tol) {
    if (!raw.is_square()) throw NotSquare("hermitize: input is not square");
    const double defect = (raw - raw.adjoint()).frobenius_norm();
    if (defect > tol * std::max(1.0, raw.frobenius_norm()))
        throw NotHermitian("hermitize: symmetry defect " + std::to_string(defect) +
                           " exceeds tolerance");
    return HermitianMatrix(raw);
}

ComplexMatrix multiply(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.as_complex() * b.as_complex();
}

double inner_product_norm(const std::vector<cplx>& x) {
    double s = 0.0;
    for (const cplx& v : x) s += std::norm(v);
    return std::sqrt(s);
}

ComplexMatrix qr_orthonormal_columns(const ComplexMatrix& a) {
    const int m = a.rows();
    const int k = a.cols();
    if (m < k) throw ShapeMismatch("qr: need rows >= cols");

    // Householder triangularization of a working copy; reflectors are kept
    // and applied in reverse to assemble the thin Q.
    ComplexMatrix r = a;
    std::vector<std::vector<cplx>> reflectors;
    reflectors.reserve(k);

    for (int j = 0; j < k; ++j) {
        double xnorm = 0.0;
        for (int i = j; i < m; ++i) xnorm += std::norm(r.at(i, j));
        xnorm = std::sqrt(xnorm);

        std::vector<cplx> v(static_cast<size_t>(m - j), cplx(0.0, 0.0));
        if (xnorm > 0.0) {
            const cplx x0 = r.at(j, j);
            const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0, 0.0);
            const cplx alpha = -phase * xnorm;
            for (int i = j; i < m; ++i) v[static_cast<size_t>(i - j)] = r.at(i, j);
            v[0] -= alpha;
            double vnorm = 0.0;
            for (const cplx& c : v) vnorm += std::norm(c);
            if (vnorm > 0.0) {
                const double inv = 1.0 / std::sqrt(vnorm);
                for (cplx& c : v) c *= inv;
                // apply H = I - 2 v v† to the trailing block
                for (int col = j; col < k; ++col) {
                    cplx dot(0.0, 0.0);
                    for (int i = j; i < m; ++i) dot += std::conj(v[static_cast<size_t>(i - j)]) * r.at(i, col);
                    dot *= 2.0;
                    for (int i = j; i < m; ++i) r.at(i, col) -= dot * v[static_cast<size_t>(i - j)];
                }
            } else {
                v.assign(static_cast<size_t>(m - j), cplx(0.0, 0.0));
            }
        }
        reflectors.push_back(std::move(v));
    }

    // Q = H_0 ... H_{k-1} applied to the first k columns of the identity.
    ComplexMatrix q(m, k);
    for (int j = 0; j < k; ++j) q.at(j, j) = 1.0;
    for (int h = k - 1; h >= 0; --h) {
        const auto& v = reflectors[static_cast<size_t>(h)];
        for (int col = 0; col < k; ++col) {
            cplx dot(0.0, 0.0);
            for (int i = h; i < m; ++i) dot += std::conj(v[static_cast<size_t>(i - h)]) * q.at(i, col);
            dot *= 2.0;
            for (int i = h; i < m; ++i) q.at(i, col) -= dot * v[static_cast<size_t>(i - h)];
        }
    }

    // Fix phases so the implied R has nonnegative real diagonal.
    for (int j = 0; j < k; ++j) {
        const cplx rjj = r.at(j, j);
        const cplx phase = (std::abs(rjj) > 0.0) ? rjj / std::abs(rjj) : cplx(1.0, 0.0);
        for (int i = 0; i < m; ++i) q.at(i, j) *= phase;
    }
    return q;
}

} // namespace opineq
