#include "opineq/maps.hpp"

#include <cmath>

namespace opineq {

namespace {

ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& a) {
    const int dim_k = ops.front().cols();
    ComplexMatrix acc(dim_k, dim_k);
    for (const ComplexMatrix& v : ops) acc = acc + v.adjoint() * a * v;
    return acc;
}

} // namespace

PositiveUnitalMap PositiveUnitalMap::identity(int n) {
    return make_kraus({ComplexMatrix::identity(n)}, true);
}

HermitianMatrix PositiveUnitalMap::apply(const HermitianMatrix& a) const {
    if (a.dim() != dim_h_) throw DimensionMismatch("apply_map: operator dimension != dim_h");
    return HermitianMatrix(apply_raw(a.as_complex()));
}

ComplexMatrix PositiveUnitalMap::apply_raw(const ComplexMatrix& a) const {
    if (a.rows() != dim_h_ || a.cols() != dim_h_)
        throw DimensionMismatch("apply_raw: operator shape != dim_h x dim_h");
    if (raw_action_) {
        ComplexMatrix out = raw_action_(a);
        if (out.rows() != dim_k_ || out.cols() != dim_k_)
            throw DimensionMismatch("unchecked map action returned wrong shape");
        return out;
    }
    return kraus_sum(kraus_, a);
}

PositiveUnitalMap make_kraus(std::vector<ComplexMatrix> ops, bool require_unital) {
    if (ops.empty()) throw ShapeMismatch("make_kraus: need at least one Kraus block");
    const int dim_h = ops.front().rows();
    const int dim_k = ops.front().cols();
    if (dim_h < 1 || dim_k < 1) throw ShapeMismatch("make_kraus: empty Kraus block");
    for (const ComplexMatrix& v : ops) {
        if (v.rows() != dim_h || v.cols() != dim_k)
            throw ShapeMismatch("make_kraus: Kraus blocks disagree in shape");
        v.check_finite();
    }

    ComplexMatrix gram(dim_k, dim_k);
    for (const ComplexMatrix& v : ops) gram = gram + v.adjoint() * v;
    const double defect = (gram - ComplexMatrix::identity(dim_k)).frobenius_norm();
    const bool unital = defect <= 1e-10 * dim_k;
    if (require_unital && !unital)
        throw NotUnital("make_kraus: sum V†V deviates from identity by " + std::to_string(defect));

    PositiveUnitalMap phi;
    phi.dim_h_ = dim_h;
    phi.dim_k_ = dim_k;
    phi.unital_ = unital;
    phi.kraus_ = std::move(ops);
    return phi;
}

PositiveUnitalMap make_trace_average(int n) {
    if (n < 1) throw BadParameter("make_trace_average: n must be >= 1");
    std::vector<ComplexMatrix> ops;
    ops.reserve(static_cast<size_t>(n) * n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ComplexMatrix e(n, n);
            e.at(i, j) = scale;
            ops.push_back(std::move(e));
        }
    }
    return make_kraus(std::move(ops), true);
}

PositiveUnitalMap make_compression(const ComplexMatrix& v) {
    const int dim_k = v.cols();
    const double defect = (v.adjoint() * v - ComplexMatrix::identity(dim_k)).frobenius_norm();
    if (defect > 1e-10)
        throw NotIsometry("make_compression: V†V deviates from identity by " +
                          std::to_string(defect));
    return make_kraus({v}, true);
}

PositiveUnitalMap make_unchecked(int dim_h, int dim_k,
                                 std::function<ComplexMatrix(const ComplexMatrix&)> action,
                                 bool unital) {
    if (dim_h < 1 || dim_k < 1) throw BadParameter("make_unchecked: bad dimensions");
    PositiveUnitalMap phi;
    phi.dim_h_ = dim_h;
    phi.dim_k_ = dim_k;
    phi.unital_ = unital;
    phi.raw_action_ = std::move(action);
    return phi;
}

HermitianMatrix apply_map(const PositiveUnitalMap& phi, const HermitianMatrix& a) {
    return phi.apply(a);
}

MapFamily::MapFamily(std::vector<PositiveUnitalMap> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) throw LengthMismatch("map family must not be empty");
    const int dh = maps_.front().dim_h();
    const int dk = maps_.front().dim_k();
    for (const auto& m : maps_)
        if (m.dim_h() != dh || m.dim_k() != dk)
            throw DimensionMismatch("map family members disagree in dimensions");
    ComplexMatrix total(dk, dk);
    for (const auto& m : maps_)
        total = total + m.apply(HermitianMatrix::identity(dh)).as_complex();
    const double defect = (total - ComplexMatrix::identity(dk)).frobenius_norm();
    if (defect > 1e-10 * dk)
        throw NotUnital("map family: sum Phi_j(1_H) deviates from identity by " +
                        std::to_string(defect));
}

HermitianMatrix MapFamily::apply(const std::vector<HermitianMatrix>& as) const {
    if (static_cast<int>(as.size()) != size())
        throw LengthMismatch("family_apply: operator count != family size");
    ComplexMatrix acc(dim_k(), dim_k());
    for (size_t j = 0; j < as.size(); ++j)
        acc = acc + maps_[j].apply(as[j]).as_complex();
    return HermitianMatrix(acc);
}

HermitianMatrix family_apply(const MapFamily& fam, const std::vector<HermitianMatrix>& as) {
    return fam.apply(as);
}

} // namespace opineq
