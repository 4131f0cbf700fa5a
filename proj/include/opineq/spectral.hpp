#ifndef OPINEQ_SPECTRAL_HPP
#define OPINEQ_SPECTRAL_HPP

#include <functional>
#include <vector>

#include "opineq/matrix.hpp"

namespace opineq {

/// Default relative convergence target for the eigensolver.
inline constexpr double kEigTolerance = 1e-12;
/// Maximum number of cyclic sweeps before giving up.
inline constexpr int kEigMaxSweeps = 100;
/// Eigenvalues may fall outside a function domain by this much and get
/// clamped to the boundary instead of rejected.
inline constexpr double kDomainTolerance = 1e-9;

/// Eigensystem of a Hermitian matrix. Eigenvalues are ascending; the
/// columns of `eigenvectors` form the matching orthonormal basis. The
/// basis is deterministic: columns are ordered by eigenvalue and each
/// column's first non-negligible component is made real positive.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }

    /// U * diag(values) * U† as a Hermitian matrix.
    HermitianMatrix assemble(const std::vector<double>& values) const;
};

/// Cyclic complex Jacobi diagonalization. Deterministic for fixed input:
/// fixed pivot order, fixed rotation formulas, fixed sorting and phase
/// convention. Throws ConvergenceFailure if the off-diagonal mass does not
/// fall below tol * ||A||_F within the sweep cap.
SpectralDecomposition spectral_decompose(const HermitianMatrix& a,
                                         double tol = kEigTolerance,
                                         int max_sweeps = kEigMaxSweeps);

/// Functional calculus via the eigendecomposition: U diag(f(lambda)) U†,
/// re-hermitized. `domain` restricts admissible eigenvalues; values within
/// domain_tol of the boundary are clamped, values farther out raise
/// DomainViolation.
HermitianMatrix apply_spectral_function(const HermitianMatrix& a,
                                        const std::function<double(double)>& f,
                                        const Interval& domain,
                                        double domain_tol = kDomainTolerance);

/// |A| in the spectral sense: apply t -> |t|. The result is PSD.
HermitianMatrix operator_abs(const HermitianMatrix& a);

/// Real part of x†Ax. The imaginary residue must vanish to roundoff;
/// a residue above 1e-12 * ||A||_F * ||x||^2 indicates a broken Hermitian
/// invariant and throws.
double quadratic_form(const HermitianMatrix& a, const std::vector<cplx>& x);

/// max_i |lambda_i|.
double operator_norm(const HermitianMatrix& a);

/// True iff every eigenvalue lies in [j.lo - tol, j.hi + tol].
bool spectrum_in(const HermitianMatrix& a, const Interval& j, double tol = kDomainTolerance);

/// Loewner order: true iff min eig(B - A) >= -tol.
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol = 1e-9);

/// sup over spec(A) of |phi(lambda)|. (The uniform norm of phi on the
/// spectrum; for phi(t) = t this equals the operator norm.)
double function_sup_norm(const std::function<double(double)>& phi, const HermitianMatrix& a);

} // namespace opineq

#endif
