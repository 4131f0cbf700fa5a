#ifndef OPINEQ_MAPS_HPP
#define OPINEQ_MAPS_HPP

#include <functional>
#include <vector>

#include "opineq/matrix.hpp"

namespace opineq {

/// Positive linear map Phi: B(H) -> B(K) in Kraus form,
/// Phi(A) = sum_j V_j† A V_j with each V_j of shape dim_h x dim_k.
/// Positivity is structural (every Kraus-form map is completely positive);
/// unitality means sum_j V_j† V_j = I_K and is verified numerically.
///
/// An "unchecked" mode accepts an arbitrary linear action instead of a
/// Kraus list. It exists so non-completely-positive positive maps (the
/// transpose map, say) can still be pushed through the evaluators; nothing
/// is verified about such a map and generators never produce one.
class PositiveUnitalMap {
public:
    PositiveUnitalMap() = default;

    static PositiveUnitalMap identity(int n);

    int dim_h() const { return dim_h_; }
    int dim_k() const { return dim_k_; }
    bool is_unital() const { return unital_; }
    bool is_unchecked() const { return static_cast<bool>(raw_action_); }
    const std::vector<ComplexMatrix>& kraus_ops() const { return kraus_; }

    /// Phi(A), re-hermitized. PSD input yields PSD output for Kraus maps.
    HermitianMatrix apply(const HermitianMatrix& a) const;

    /// The same Kraus sum on a raw (possibly non-Hermitian) matrix.
    ComplexMatrix apply_raw(const ComplexMatrix& a) const;

    friend PositiveUnitalMap make_kraus(std::vector<ComplexMatrix> ops, bool require_unital);
    friend PositiveUnitalMap make_unchecked(int dim_h, int dim_k,
                                            std::function<ComplexMatrix(const ComplexMatrix&)> action,
                                            bool unital);

private:
    int dim_h_ = 0;
    int dim_k_ = 0;
    bool unital_ = false;
    std::vector<ComplexMatrix> kraus_;
    std::function<ComplexMatrix(const ComplexMatrix&)> raw_action_;
};

/// Builds a map from its Kraus list. Throws ShapeMismatch if the blocks
/// disagree in shape and NotUnital when unitality is requested but
/// ||sum V†V - I||_F > 1e-10 * dim_k.
PositiveUnitalMap make_kraus(std::vector<ComplexMatrix> ops, bool require_unital);

/// Phi(A) = (tr A / n) I_n, assembled from the n^2 Kraus blocks E_ij/sqrt(n).
PositiveUnitalMap make_trace_average(int n);

/// Phi(A) = V† A V for an isometry V (dim_h x dim_k, V†V = I_K).
PositiveUnitalMap make_compression(const ComplexMatrix& v);

/// Unchecked escape hatch: wraps an arbitrary linear action. The caller
/// asserts positivity; only shapes are enforced at application time.
PositiveUnitalMap make_unchecked(int dim_h, int dim_k,
                                 std::function<ComplexMatrix(const ComplexMatrix&)> action,
                                 bool unital);

/// Phi(A) = sum_j V_j† A V_j for a given map.
HermitianMatrix apply_map(const PositiveUnitalMap& phi, const HermitianMatrix& a);

/// Family {Phi_j} of individually positive maps that are jointly
/// normalized: sum_j Phi_j(1_H) = 1_K within 1e-10 * dim_k.
class MapFamily {
public:
    MapFamily() = default;
    explicit MapFamily(std::vector<PositiveUnitalMap> maps);

    int size() const { return static_cast<int>(maps_.size()); }
    int dim_h() const { return maps_.empty() ? 0 : maps_.front().dim_h(); }
    int dim_k() const { return maps_.empty() ? 0 : maps_.front().dim_k(); }
    const std::vector<PositiveUnitalMap>& maps() const { return maps_; }

    /// sum_j Phi_j(A_j).
    HermitianMatrix apply(const std::vector<HermitianMatrix>& as) const;

private:
    std::vector<PositiveUnitalMap> maps_;
};

/// sum_j Phi_j(A_j); requires |as| == |fam|.
HermitianMatrix family_apply(const MapFamily& fam, const std::vector<HermitianMatrix>& as);

} // namespace opineq

#endif
