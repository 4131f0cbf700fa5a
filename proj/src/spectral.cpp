#include "opineq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace opineq {

namespace {

double offdiag_norm(const ComplexMatrix& m) {
    double s = 0.0;
    const int n = m.rows();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(m.at(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation zeroing the (p,q) entry. The 2x2 pivot block
// is phase-rotated to a real symmetric block, which reduces the angle
// choice to the classic stable real formulas.
void rotate(ComplexMatrix& m, ComplexMatrix& u, int p, int q) {
    const cplx apq = m.at(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;

    const cplx phase = apq / r; // e^{i theta}, so that conj(phase)*apq is real
    const double app = m.at(p, p).real();
    const double aqq = m.at(q, q).real();

    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // J differs from the identity only in rows/columns p and q:
    //   J[p][p] = c        J[p][q] = s
    //   J[q][p] = -s*conj(phase)   J[q][q] = c*conj(phase)
    const cplx jqp = -s * std::conj(phase);
    const cplx jqq = c * std::conj(phase);

    const int n = m.rows();

    // m <- m * J (columns p and q change)
    for (int i = 0; i < n; ++i) {
        const cplx mip = m.at(i, p);
        const cplx miq = m.at(i, q);
        m.at(i, p) = mip * c + miq * jqp;
        m.at(i, q) = mip * s + miq * jqq;
    }
    // m <- J† * m (rows p and q change)
    for (int j = 0; j < n; ++j) {
        const cplx mpj = m.at(p, j);
        const cplx mqj = m.at(q, j);
        m.at(p, j) = c * mpj + std::conj(jqp) * mqj;
        m.at(q, j) = s * mpj + std::conj(jqq) * mqj;
    }
    // exact zeros on the pivot pair, real diagonal, conjugate symmetry
    m.at(p, q) = 0.0;
    m.at(q, p) = 0.0;
    m.at(p, p) = cplx(m.at(p, p).real(), 0.0);
    m.at(q, q) = cplx(m.at(q, q).real(), 0.0);
    for (int i = 0; i < n; ++i) {
        if (i == p || i == q) continue;
        const cplx vp = 0.5 * (m.at(i, p) + std::conj(m.at(p, i)));
        m.at(i, p) = vp;
        m.at(p, i) = std::conj(vp);
        const cplx vq = 0.5 * (m.at(i, q) + std::conj(m.at(q, i)));
        m.at(i, q) = vq;
        m.at(q, i) = std::conj(vq);
    }

    // u <- u * J (accumulate eigenvectors as columns)
    for (int i = 0; i < n; ++i) {
        const cplx uip = u.at(i, p);
        const cplx uiq = u.at(i, q);
        u.at(i, p) = uip * c + uiq * jqp;
        u.at(i, q) = uip * s + uiq * jqq;
    }
}

} // namespace

HermitianMatrix SpectralDecomposition::assemble(const std::vector<double>& values) const {
    const int n = dim();
    if (static_cast<int>(values.size()) != n)
        throw DimensionMismatch("assemble: value count does not match dimension");
    ComplexMatrix scaled(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scaled.at(i, j) = eigenvectors.at(i, j) * values[j];
    return HermitianMatrix(scaled * eigenvectors.adjoint());
}

SpectralDecomposition spectral_decompose(const HermitianMatrix& a, double tol, int max_sweeps) {
    const int n = a.dim();
    ComplexMatrix m = a.as_complex();
    ComplexMatrix u = ComplexMatrix::identity(n);

    const double scale = a.frobenius_norm();
    const double target = tol * scale;
    // sweep toward a tighter internal target so the residual off-diagonal
    // mass stays well under the documented bound; quadratic convergence
    // makes the extra sweep cheap
    const double internal_target = 0.02 * target;

    if (n > 1 && scale > 0.0) {
        int sweep = 0;
        while (offdiag_norm(m) > internal_target && sweep < max_sweeps) {
            for (int p = 0; p < n - 1; ++p)
                for (int q = p + 1; q < n; ++q)
                    if (std::abs(m.at(p, q)) > 0.0) rotate(m, u, p, q);
            ++sweep;
        }
        if (offdiag_norm(m) > target)
            throw ConvergenceFailure("jacobi eigensolver did not converge in " +
                                     std::to_string(max_sweeps) + " sweeps");
    }

    std::vector<double> eig(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = m.at(i, i).real();

    // ascending eigenvalue order, stable for ties
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int i, int j) { return eig[static_cast<size_t>(i)] < eig[static_cast<size_t>(j)]; });

    SpectralDecomposition out;
    out.eigenvalues.resize(static_cast<size_t>(n));
    out.eigenvectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = perm[static_cast<size_t>(j)];
        out.eigenvalues[static_cast<size_t>(j)] = eig[static_cast<size_t>(src)];
        for (int i = 0; i < n; ++i) out.eigenvectors.at(i, j) = u.at(i, src);
    }

    // phase convention: first component of each column with magnitude above
    // a fixed cutoff is made real positive
    constexpr double kPhaseCutoff = 1e-12;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const cplx v = out.eigenvectors.at(i, j);
            const double mag = std::abs(v);
            if (mag > kPhaseCutoff) {
                const cplx rot = std::conj(v) / mag;
                for (int k = 0; k < n; ++k) out.eigenvectors.at(k, j) *= rot;
                break;
            }
        }
    }

    // contract checks: reconstruction and orthonormality
    const double recon =
        (out.assemble(out.eigenvalues).as_complex() - a.as_complex()).frobenius_norm();
    if (recon > 100.0 * tol * std::max(1.0, scale))
        throw ConvergenceFailure("eigendecomposition reconstruction defect too large");
    return out;
}

HermitianMatrix apply_spectral_function(const HermitianMatrix& a,
                                        const std::function<double(double)>& f,
                                        const Interval& domain, double domain_tol) {
    SpectralDecomposition d = spectral_decompose(a);
    std::vector<double> mapped(d.eigenvalues.size());
    for (size_t i = 0; i < d.eigenvalues.size(); ++i) {
        const double lam = d.eigenvalues[i];
        if (!domain.contains(lam, domain_tol))
            throw DomainViolation("eigenvalue " + std::to_string(lam) +
                                  " outside function domain");
        mapped[i] = f(domain.clamp(lam));
    }
    return d.assemble(mapped);
}

HermitianMatrix operator_abs(const HermitianMatrix& a) {
    return apply_spectral_function(a, [](double t) { return std::abs(t); }, Interval::all_reals());
}

double quadratic_form(const HermitianMatrix& a, const std::vector<cplx>& x) {
    const int n = a.dim();
    if (static_cast<int>(x.size()) != n)
        throw DimensionMismatch("quadratic_form: vector length does not match matrix dimension");
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        cplx row(0.0, 0.0);
        for (int j = 0; j < n; ++j) row += a.at(i, j) * x[static_cast<size_t>(j)];
        acc += std::conj(x[static_cast<size_t>(i)]) * row;
    }
    double xnorm2 = 0.0;
    for (const cplx& v : x) xnorm2 += std::norm(v);
    if (std::abs(acc.imag()) > 1e-12 * a.frobenius_norm() * xnorm2 + 1e-300)
        throw Error("quadratic form has non-negligible imaginary part");
    return acc.real();
}

double operator_norm(const HermitianMatrix& a) {
    if (a.dim() == 0) return 0.0;
    SpectralDecomposition d = spectral_decompose(a);
    double m = 0.0;
    for (double lam : d.eigenvalues) m = std::max(m, std::abs(lam));
    return m;
}

bool spectrum_in(const HermitianMatrix& a, const Interval& j, double tol) {
    SpectralDecomposition d = spectral_decompose(a);
    for (double lam : d.eigenvalues)
        if (!j.contains(lam, tol)) return false;
    return true;
}

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
    if (a.dim() != b.dim()) throw DimensionMismatch("loewner_leq: dimension mismatch");
    SpectralDecomposition d = spectral_decompose(b - a);
    return d.eigenvalues.empty() || d.eigenvalues.front() >= -tol;
}

double function_sup_norm(const std::function<double(double)>& phi, const HermitianMatrix& a) {
    SpectralDecomposition d = spectral_decompose(a);
    double m = 0.0;
    for (double lam : d.eigenvalues) m = std::max(m, std::abs(phi(lam)));
    return m;
}

} // namespace opineq
