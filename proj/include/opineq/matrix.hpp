#ifndef OPINEQ_MATRIX_HPP
#define OPINEQ_MATRIX_HPP

#include <complex>
#include <vector>

#include "opineq/errors.hpp"

namespace opineq {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. Carrier for Kraus blocks and
/// raw (not yet hermitized) input. All entries must be finite.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols);
    ComplexMatrix(int rows, int cols, std::vector<cplx> entries);

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    ComplexMatrix adjoint() const;
    double frobenius_norm() const;

    ComplexMatrix operator+(const ComplexMatrix& other) const;
    ComplexMatrix operator-(const ComplexMatrix& other) const;
    ComplexMatrix operator*(const ComplexMatrix& other) const;
    ComplexMatrix scaled(double factor) const;
    ComplexMatrix scaled(cplx factor) const;

    bool operator==(const ComplexMatrix& other) const = default;

    /// Throws Error if any entry is NaN or Inf.
    void check_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> data_;
};

/// Complex square matrix with conjugate symmetry enforced exactly at
/// construction: entry(i,j) == conj(entry(j,i)) bit-for-bit and real
/// diagonal. Use hermitize() to build one from raw input with a
/// symmetry-defect check.
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    /// Symmetrizes (m + m†)/2 without any defect check. The input must be
    /// square.
    explicit HermitianMatrix(const ComplexMatrix& m);

    static HermitianMatrix identity(int n);
    static HermitianMatrix zero(int n);
    static HermitianMatrix diagonal(const std::vector<double>& d);

    int dim() const { return mat_.rows(); }
    const cplx& at(int i, int j) const { return mat_.at(i, j); }
    const ComplexMatrix& as_complex() const { return mat_; }

    double frobenius_norm() const { return mat_.frobenius_norm(); }
    double trace() const;

    HermitianMatrix operator+(const HermitianMatrix& other) const;
    HermitianMatrix operator-(const HermitianMatrix& other) const;
    HermitianMatrix scaled(double factor) const;

    bool operator==(const HermitianMatrix& other) const = default;

private:
    ComplexMatrix mat_;
};

/// Closed interval [lo, hi]; endpoints may be +/-infinity.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi)) throw Error("interval requires lo <= hi");
    }

    bool contains(double t, double tol = 0.0) const { return t >= lo - tol && t <= hi + tol; }
    double clamp(double t) const { return t < lo ? lo : (t > hi ? hi : t); }

    static Interval nonnegative_reals();
    static Interval all_reals();
};

/// (raw + raw†)/2 with exact symmetry. Throws NotSquare, and NotHermitian
/// when the symmetry defect exceeds tol * max(1, ||raw||_F).
HermitianMatrix hermitize(const ComplexMatrix& raw, double tol = 1e-10);

/// Product of two Hermitian matrices; generally not Hermitian.
ComplexMatrix multiply(const HermitianMatrix& a, const HermitianMatrix& b);

double inner_product_norm(const std::vector<cplx>& x);

/// Thin Householder QR of an m x k matrix (m >= k). Returns Q (m x k with
/// orthonormal columns) after fixing phases so the diagonal of R is real
/// and nonnegative.
ComplexMatrix qr_orthonormal_columns(const ComplexMatrix& a);

} // namespace opineq

#endif
