#include "opineq/claims.hpp"

#include <algorithm>
#include <cmath>

namespace opineq {

namespace {

constexpr double kPsdTol = 1e-9;
constexpr double kUnitNormTol = 1e-12;

double vector_norm(const std::vector<cplx>& x) { return inner_product_norm(x); }

// ⟨Phi(M) x, x⟩ where Phi is either the single map or the family sum; the
// family variant consumes one matrix per member.
struct MapAction {
    const PositiveUnitalMap* map = nullptr;
    const MapFamily* family = nullptr;

    int count() const { return family ? family->size() : 1; }
    int dim_h() const { return family ? family->dim_h() : map->dim_h(); }
    int dim_k() const { return family ? family->dim_k() : map->dim_k(); }

    HermitianMatrix apply(const std::vector<HermitianMatrix>& ms) const {
        if (family) return family->apply(ms);
        return map->apply(ms.front());
    }
};

MapAction action_of(const Instance& inst) {
    MapAction act;
    if (inst.family)
        act.family = &*inst.family;
    else if (inst.map)
        act.map = &*inst.map;
    else
        throw Error("instance carries neither a map nor a family");
    return act;
}

// elementwise lift of scalar ops over parallel operator lists
std::vector<HermitianMatrix> lift2(const std::vector<HermitianMatrix>& a,
                                   const std::vector<HermitianMatrix>& b, double wa, double wb) {
    std::vector<HermitianMatrix> out;
    out.reserve(a.size());
    for (size_t j = 0; j < a.size(); ++j) out.push_back(a[j].scaled(wa) + b[j].scaled(wb));
    return out;
}

std::vector<HermitianMatrix> lift3(const std::vector<HermitianMatrix>& a,
                                   const std::vector<HermitianMatrix>& b,
                                   const std::vector<HermitianMatrix>& d, double wa, double wb,
                                   double wd) {
    std::vector<HermitianMatrix> out;
    out.reserve(a.size());
    for (size_t j = 0; j < a.size(); ++j)
        out.push_back(a[j].scaled(wa) + b[j].scaled(wb) + d[j].scaled(wd));
    return out;
}

std::vector<HermitianMatrix> lift_f(const ScalarFunction& f,
                                    const std::vector<HermitianMatrix>& a) {
    std::vector<HermitianMatrix> out;
    out.reserve(a.size());
    for (const auto& m : a) out.push_back(apply_function(f, m));
    return out;
}

std::vector<HermitianMatrix> lift_shift_abs(const std::vector<HermitianMatrix>& a, double shift) {
    std::vector<HermitianMatrix> out;
    out.reserve(a.size());
    for (const auto& m : a)
        out.push_back(operator_abs(m - HermitianMatrix::identity(m.dim()).scaled(shift)));
    return out;
}

struct HypothesisChecker {
    std::string claim_id;
    std::vector<std::pair<std::string, bool>> report;

    void check(const std::string& name, bool pass) { report.emplace_back(name, pass); }

    void finish() {
        std::vector<std::string> failed;
        for (const auto& [name, pass] : report)
            if (!pass) failed.push_back(name);
        if (!failed.empty()) throw HypothesisViolation(claim_id, failed);
    }
};

bool all_psd(const std::vector<HermitianMatrix>& ops) {
    for (const auto& m : ops)
        if (!spectrum_in(m, Interval::nonnegative_reals(), kPsdTol)) return false;
    return true;
}

bool map_is_unital(const Instance& inst) {
    if (inst.family) return true; // joint normalization enforced at construction
    return inst.map && inst.map->is_unital();
}

void require_ops(const Instance& inst, bool need_b_d) {
    const size_t n = static_cast<size_t>(inst.family ? inst.family->size() : 1);
    if (inst.a_ops.size() != n) throw LengthMismatch("instance needs " + std::to_string(n) + " A operator(s)");
    if (need_b_d && (inst.b_ops.size() != n || inst.d_ops.size() != n))
        throw LengthMismatch("instance needs B and D operator slots");
}

void require_vector(const Instance& inst) {
    if (!inst.has_vector()) throw Error("claim needs a unit vector x");
}

// shared scalar data of the three-operator chain
struct PopoviciuPieces {
    double s1 = 0, s2 = 0, s3 = 0;           // ⟨Phi((B+D)/2)⟩, ⟨Phi((A+B)/2)⟩, ⟨Phi((A+D)/2)⟩
    double tbar = 0;                          // ⟨Phi((A+B+D)/3)⟩
    double avg_f_ops = 0;                     // ⟨Phi((f(A)+f(B)+f(D))/3)⟩
    double f_of_a = 0, f_of_b = 0, f_of_d = 0; // ⟨Phi(f(A))⟩ etc.
    double corr_a = 0, corr_d = 0, corr_b = 0; // ⟨Phi(f(|A - s_i|))⟩, pairing A↔s1, D↔s2, B↔s3
    std::array<double, 3> t_half{};            // ⟨Phi((2A-B-D)/2)⟩, ⟨Phi((2D-A-B)/2)⟩, ⟨Phi((2B-A-D)/2)⟩
    std::array<double, 3> t_sixth{};           // same with /6 (equals tbar - s_i)
};

PopoviciuPieces popoviciu_pieces(const Instance& inst) {
    const MapAction act = action_of(inst);
    const auto& A = inst.a_ops;
    const auto& B = inst.b_ops;
    const auto& D = inst.d_ops;
    const auto& f = inst.f;
    const auto& x = inst.x;

    auto qf = [&](const std::vector<HermitianMatrix>& ms) {
        return quadratic_form(act.apply(ms), x);
    };

    PopoviciuPieces p;
    p.s1 = qf(lift2(B, D, 0.5, 0.5));
    p.s2 = qf(lift2(A, B, 0.5, 0.5));
    p.s3 = qf(lift2(A, D, 0.5, 0.5));
    p.tbar = qf(lift3(A, B, D, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));

    const auto fa = lift_f(f, A);
    const auto fb = lift_f(f, B);
    const auto fd = lift_f(f, D);
    p.f_of_a = qf(fa);
    p.f_of_b = qf(fb);
    p.f_of_d = qf(fd);
    {
        std::vector<HermitianMatrix> favg;
        favg.reserve(fa.size());
        for (size_t j = 0; j < fa.size(); ++j)
            favg.push_back((fa[j] + fb[j] + fd[j]).scaled(1.0 / 3.0));
        p.avg_f_ops = qf(favg);
    }

    p.corr_a = qf(lift_f(f, lift_shift_abs(A, p.s1)));
    p.corr_d = qf(lift_f(f, lift_shift_abs(D, p.s2)));
    p.corr_b = qf(lift_f(f, lift_shift_abs(B, p.s3)));

    p.t_half[0] = qf(lift3(A, B, D, 1.0, -0.5, -0.5));
    p.t_half[1] = qf(lift3(A, B, D, -0.5, -0.5, 1.0));
    p.t_half[2] = qf(lift3(A, B, D, -0.5, 1.0, -0.5));
    for (int i = 0; i < 3; ++i) p.t_sixth[static_cast<size_t>(i)] = p.t_half[static_cast<size_t>(i)] / 3.0;
    return p;
}

std::vector<std::pair<std::string, double>> popoviciu_rhs_terms(const Instance& inst,
                                                                const PopoviciuPieces& p) {
    const auto& f = inst.f;
    return {
        {"pair_ab", (2.0 / 3.0) * f.eval_clamped(p.s2)},
        {"pair_bd", (2.0 / 3.0) * f.eval_clamped(p.s1)},
        {"pair_ad", (2.0 / 3.0) * f.eval_clamped(p.s3)},
        {"corr_op_a", p.corr_a / 3.0},
        {"corr_op_d", p.corr_d / 3.0},
        {"corr_op_b", p.corr_b / 3.0},
        {"corr_sc_a", f.eval_clamped(std::abs(p.t_sixth[0])) / 3.0},
        {"corr_sc_d", f.eval_clamped(std::abs(p.t_sixth[1])) / 3.0},
        {"corr_sc_b", f.eval_clamped(std::abs(p.t_sixth[2])) / 3.0},
    };
}

std::vector<std::pair<std::string, double>> popoviciu_lhs_terms(const Instance& inst,
                                                                const PopoviciuPieces& p) {
    return {
        {"avg_f_ops", p.avg_f_ops},
        {"f_mean3", inst.f.eval_clamped(p.tbar)},
    };
}

// hypothesis bundle shared by the three-operator superquadratic claims
void check_popoviciu_hypotheses(HypothesisChecker& hc, const Instance& inst, bool want_super) {
    hc.check("A,B,D PSD", all_psd(inst.a_ops) && all_psd(inst.b_ops) && all_psd(inst.d_ops));
    hc.check(inst.family ? "family normalized" : "map unital", map_is_unital(inst));
    if (want_super)
        hc.check("f superquadratic", inst.f.flags().superquadratic);
    else
        hc.check("f subquadratic", inst.f.flags().subquadratic);
    hc.finish();
}

} // namespace

int Instance::dim_h() const {
    if (family) return family->dim_h();
    if (map) return map->dim_h();
    return a_ops.empty() ? 0 : a_ops.front().dim();
}

int Instance::dim_k() const {
    if (family) return family->dim_k();
    if (map) return map->dim_k();
    return dim_h();
}

void Instance::validate() const {
    const int dh = dim_h();
    auto check_list = [&](const std::vector<HermitianMatrix>& ops, const char* name) {
        for (const auto& m : ops)
            if (m.dim() != dh)
                throw DimensionMismatch(std::string("operator ") + name +
                                        " does not match the map's domain dimension");
    };
    check_list(a_ops, "A");
    check_list(b_ops, "B");
    check_list(d_ops, "D");
    if (family) {
        const size_t n = static_cast<size_t>(family->size());
        auto check_len = [&](const std::vector<HermitianMatrix>& ops, const char* name) {
            if (!ops.empty() && ops.size() != n)
                throw LengthMismatch(std::string("operator list ") + name +
                                     " does not match the family size");
        };
        check_len(a_ops, "A");
        check_len(b_ops, "B");
        check_len(d_ops, "D");
    }
    if (has_vector()) {
        if (static_cast<int>(x.size()) != dim_k())
            throw DimensionMismatch("vector x does not live in the codomain space");
        if (std::abs(vector_norm(x) - 1.0) > kUnitNormTol)
            throw Error("vector x is not unit norm (within 1e-12)");
    }
}

TermBreakdown TermBreakdown::assemble(std::string claim_id,
                                      std::vector<std::pair<std::string, double>> lhs_terms,
                                      std::vector<std::pair<std::string, double>> rhs_terms,
                                      std::vector<std::pair<std::string, bool>> hypotheses) {
    TermBreakdown b;
    b.claim_id = std::move(claim_id);
    b.lhs_terms = std::move(lhs_terms);
    b.rhs_terms = std::move(rhs_terms);
    b.hypothesis_report = std::move(hypotheses);
    for (const auto& [name, v] : b.lhs_terms) b.lhs += v;
    for (const auto& [name, v] : b.rhs_terms) b.rhs += v;
    b.gap = b.lhs - b.rhs;
    return b;
}

double violation_threshold(const TermBreakdown& b) {
    const double scale = std::max({std::abs(b.lhs), std::abs(b.rhs), 1.0});
    return 1e-8 + 1e-8 * scale;
}

bool is_violation(const TermBreakdown& b) { return b.gap < -violation_threshold(b); }

const StepRecord& StepTrace::step(const std::string& label) const {
    for (const auto& s : steps)
        if (s.label == label) return s;
    throw Error("no step labeled " + label);
}

// --- scalar oracles ---------------------------------------------------------

TermBreakdown scalar_popoviciu(double x, double y, double z, const ScalarFunction& f) {
    for (double v : {x, y, z})
        if (!f.domain().contains(v))
            throw DomainViolation("scalar_popoviciu: point outside function domain");
    std::vector<std::pair<std::string, double>> lhs = {
        {"f_mean3", f((x + y + z) / 3.0)},
        {"avg_f", (f(x) + f(y) + f(z)) / 3.0},
    };
    std::vector<std::pair<std::string, double>> rhs = {
        {"pair_xz", (2.0 / 3.0) * f((x + z) / 2.0)},
        {"pair_yz", (2.0 / 3.0) * f((y + z) / 2.0)},
        {"pair_xy", (2.0 / 3.0) * f((x + y) / 2.0)},
    };
    return TermBreakdown::assemble("EQ1.5", std::move(lhs), std::move(rhs), {{"f convex", f.flags().convex}});
}

TermBreakdown scalar_hlawka(double x, double y, double z) {
    std::vector<std::pair<std::string, double>> lhs = {
        {"abs_x", std::abs(x)},
        {"abs_y", std::abs(y)},
        {"abs_z", std::abs(z)},
        {"abs_sum", std::abs(x + y + z)},
    };
    std::vector<std::pair<std::string, double>> rhs = {
        {"pair_xz", std::abs(x + z)},
        {"pair_zy", std::abs(z + y)},
        {"pair_xy", std::abs(x + y)},
    };
    return TermBreakdown::assemble("HLAWKA-SCALAR", std::move(lhs), std::move(rhs), {});
}

TermBreakdown scalar_gg_popoviciu(double x, double y, double z, const ScalarFunction& f) {
    if (!(x > 0.0 && y > 0.0 && z > 0.0))
        throw DomainViolation("scalar_gg_popoviciu: points must be positive");
    const double points[6] = {std::cbrt(x * y * z), x,
                              y,                    z,
                              std::sqrt(x * z),     std::sqrt(y * z)};
    for (double v : points)
        if (!f.domain().contains(v))
            throw DomainViolation("scalar_gg_popoviciu: evaluation point outside domain");
    auto logf = [&f](double t) {
        const double v = f(t);
        if (!(v > 0.0))
            throw NonPositiveFunction("scalar_gg_popoviciu: f must be positive, got f(" +
                                      std::to_string(t) + ") = " + std::to_string(v));
        return std::log(v);
    };
    std::vector<std::pair<std::string, double>> lhs = {
        {"log_f3_geo", 3.0 * logf(std::cbrt(x * y * z))},
        {"log_fx", logf(x)},
        {"log_fy", logf(y)},
        {"log_fz", logf(z)},
    };
    std::vector<std::pair<std::string, double>> rhs = {
        {"log_f2_xz", 2.0 * logf(std::sqrt(x * z))},
        {"log_f2_yz", 2.0 * logf(std::sqrt(y * z))},
        {"log_f2_xy", 2.0 * logf(std::sqrt(x * y))},
    };
    return TermBreakdown::assemble("GG-POP", std::move(lhs), std::move(rhs), {});
}

// --- operator evaluators -----------------------------------------------------

namespace {

// Jensen pieces shared by THM1 / COR2 / COR5-JENSEN.
struct JensenPieces {
    double mean = 0.0;       // ⟨Phi(A)x,x⟩
    double f_of_ops = 0.0;   // ⟨Phi(f(A))x,x⟩
    double correction = 0.0; // ⟨Phi(f(|A - mean|))x,x⟩
};

JensenPieces jensen_pieces(const Instance& inst) {
    const MapAction act = action_of(inst);
    auto qf = [&](const std::vector<HermitianMatrix>& ms) {
        return quadratic_form(act.apply(ms), inst.x);
    };
    JensenPieces p;
    p.mean = qf(inst.a_ops);
    p.f_of_ops = qf(lift_f(inst.f, inst.a_ops));
    p.correction = qf(lift_f(inst.f, lift_shift_abs(inst.a_ops, p.mean)));
    return p;
}

TermBreakdown jensen_breakdown(const std::string& claim_id, const Instance& inst,
                               bool include_f_zero, HypothesisChecker hc) {
    require_vector(inst);
    const bool super = inst.f.flags().superquadratic;
    hc.check("A PSD", all_psd(inst.a_ops));
    hc.check(inst.family ? "family normalized" : "map unital", map_is_unital(inst));
    hc.check("f superquadratic or subquadratic", super || inst.f.flags().subquadratic);
    hc.finish();

    const JensenPieces p = jensen_pieces(inst);
    std::vector<std::pair<std::string, double>> big = {{"f_of_ops", p.f_of_ops}};
    std::vector<std::pair<std::string, double>> small = {
        {"f_mean", inst.f.eval_clamped(p.mean)},
        {"correction", p.correction},
    };
    if (include_f_zero) small.emplace_back("f_zero", inst.f.eval_clamped(0.0));

    if (super)
        return TermBreakdown::assemble(claim_id, std::move(big), std::move(small), hc.report);
    return TermBreakdown::assemble(claim_id, std::move(small), std::move(big), hc.report);
}

} // namespace

TermBreakdown evaluate_jensen_superquadratic(const Instance& inst) {
    inst.validate();
    require_ops(inst, false);
    if (inst.family) throw Error("THM1 takes a single map; use COR5-JENSEN for families");
    return jensen_breakdown("THM1", inst, false, HypothesisChecker{"THM1", {}});
}

TermBreakdown evaluate_jensen_refined(const Instance& inst) {
    inst.validate();
    require_ops(inst, false);
    if (inst.family) throw Error("COR2 takes a single map");
    return jensen_breakdown("COR2", inst, true, HypothesisChecker{"COR2", {}});
}

TermBreakdown evaluate_multimap_jensen(const Instance& inst) {
    inst.validate();
    if (!inst.family) throw Error("COR5-JENSEN needs a map family");
    require_ops(inst, false);
    return jensen_breakdown("COR5-JENSEN", inst, true, HypothesisChecker{"COR5-JENSEN", {}});
}

namespace {

TermBreakdown popoviciu_superquadratic_impl(const std::string& claim_id, const Instance& inst) {
    inst.validate();
    require_vector(inst);
    require_ops(inst, true);
    HypothesisChecker hc{claim_id, {}};
    check_popoviciu_hypotheses(hc, inst, /*want_super=*/true);
    const PopoviciuPieces p = popoviciu_pieces(inst);
    return TermBreakdown::assemble(claim_id, popoviciu_lhs_terms(inst, p),
                                   popoviciu_rhs_terms(inst, p), hc.report);
}

} // namespace

TermBreakdown evaluate_popoviciu_superquadratic(const Instance& inst) {
    if (inst.family) throw Error("THM2.1 takes a single map; use COR5-POP for families");
    return popoviciu_superquadratic_impl("THM2.1", inst);
}

TermBreakdown evaluate_multimap_popoviciu(const Instance& inst) {
    if (!inst.family) throw Error("COR5-POP needs a map family");
    return popoviciu_superquadratic_impl("COR5-POP", inst);
}

TermBreakdown evaluate_popoviciu_subquadratic(const Instance& inst) {
    inst.validate();
    require_vector(inst);
    require_ops(inst, true);
    if (inst.family) throw Error("COR1 takes a single map");
    HypothesisChecker hc{"COR1", {}};
    check_popoviciu_hypotheses(hc, inst, /*want_super=*/false);
    const PopoviciuPieces p = popoviciu_pieces(inst);
    // direction is reversed: the claim asserts the twelve-term side dominates
    return TermBreakdown::assemble("COR1", popoviciu_rhs_terms(inst, p),
                                   popoviciu_lhs_terms(inst, p), hc.report);
}

TermBreakdown evaluate_bohr_norm(const Instance& inst, BohrDirection direction) {
    inst.validate();
    require_ops(inst, false);
    if (inst.family) throw Error("Bohr claims take a single map");
    const std::string claim_id = direction == BohrDirection::super ? "BOHR-SUPER" : "BOHR-SUB";
    HypothesisChecker hc{claim_id, {}};
    hc.check("A PSD", all_psd(inst.a_ops));
    hc.check("map unital", map_is_unital(inst));
    if (direction == BohrDirection::super)
        hc.check("f superquadratic", inst.f.flags().superquadratic);
    else
        hc.check("f subquadratic", inst.f.flags().subquadratic);
    hc.finish();

    const auto& f = inst.f;
    const auto& a = inst.a_ops.front();
    const auto& phi = *inst.map;
    const double norm_phi_a = operator_norm(phi.apply(a));
    const double norm_phi_fa = operator_norm(phi.apply(apply_function(f, a)));
    const double corr = operator_norm(
        phi.apply(apply_function(f, operator_abs(a - HermitianMatrix::identity(a.dim()).scaled(norm_phi_a)))));

    std::vector<std::pair<std::string, double>> big = {{"norm_f_of_op", norm_phi_fa}};
    std::vector<std::pair<std::string, double>> small = {
        {"f_norm", f.eval_clamped(norm_phi_a)},
        {"f_zero", f.eval_clamped(0.0)},
        {"norm_correction", corr},
    };
    if (direction == BohrDirection::super)
        return TermBreakdown::assemble(claim_id, std::move(big), std::move(small), hc.report);
    return TermBreakdown::assemble(claim_id, std::move(small), std::move(big), hc.report);
}

namespace {

enum class Direction { forward, reversed };

TermBreakdown convex_popoviciu_shape(const std::string& claim_id, const Instance& inst,
                                     const ScalarFunction& g, Direction dir,
                                     HypothesisChecker hc) {
    const MapAction act = action_of(inst);
    auto qf = [&](const std::vector<HermitianMatrix>& ms) {
        return quadratic_form(act.apply(ms), inst.x);
    };
    const auto& A = inst.a_ops;
    const auto& B = inst.b_ops;
    const auto& D = inst.d_ops;

    const double s_ab = qf(lift2(A, B, 0.5, 0.5));
    const double s_bd = qf(lift2(B, D, 0.5, 0.5));
    const double s_ad = qf(lift2(A, D, 0.5, 0.5));
    const double tbar = qf(lift3(A, B, D, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));

    const auto ga = lift_f(g, A);
    const auto gb = lift_f(g, B);
    const auto gd = lift_f(g, D);
    std::vector<HermitianMatrix> gavg;
    gavg.reserve(ga.size());
    for (size_t j = 0; j < ga.size(); ++j) gavg.push_back((ga[j] + gb[j] + gd[j]).scaled(1.0 / 3.0));

    std::vector<std::pair<std::string, double>> big = {
        {"avg_f_ops", qf(gavg)},
        {"f_mean3", g.eval_clamped(tbar)},
    };
    std::vector<std::pair<std::string, double>> small = {
        {"pair_ab", (2.0 / 3.0) * g.eval_clamped(s_ab)},
        {"pair_bd", (2.0 / 3.0) * g.eval_clamped(s_bd)},
        {"pair_ad", (2.0 / 3.0) * g.eval_clamped(s_ad)},
    };
    if (dir == Direction::forward)
        return TermBreakdown::assemble(claim_id, std::move(big), std::move(small), hc.report);
    return TermBreakdown::assemble(claim_id, std::move(small), std::move(big), hc.report);
}

} // namespace

TermBreakdown evaluate_popoviciu_convex(const Instance& inst, const std::string& claim_id) {
    inst.validate();
    require_vector(inst);
    require_ops(inst, true);
    if (inst.family) throw Error(claim_id + " takes a single map");
    HypothesisChecker hc{claim_id, {}};
    Direction dir = Direction::forward;
    const auto& flags = inst.f.flags();
    if (claim_id == "PRP1") {
        hc.check("A,B,D PSD", all_psd(inst.a_ops) && all_psd(inst.b_ops) && all_psd(inst.d_ops));
        hc.check("map unital", map_is_unital(inst));
        hc.check("f nonnegative and superquadratic", flags.superquadratic && flags.nonnegative);
    } else if (claim_id == "PRP3") {
        hc.check("spectra in [0,inf)", all_psd(inst.a_ops) && all_psd(inst.b_ops) && all_psd(inst.d_ops));
        hc.check("map unital", map_is_unital(inst));
        hc.check("g convex or concave", flags.convex || flags.concave);
        const bool zero_at_zero =
            inst.f.domain().contains(0.0, kDomainTolerance) && std::abs(inst.f.eval_clamped(0.0)) <= 1e-12;
        hc.check("g(0) = 0", zero_at_zero);
        if (!flags.convex) dir = Direction::reversed;
    } else if (claim_id == "THM3") {
        bool in_window = true;
        for (const auto* ops : {&inst.a_ops, &inst.b_ops, &inst.d_ops})
            for (const auto& m : *ops)
                in_window = in_window && spectrum_in(m, inst.spectrum_interval, kPsdTol);
        hc.check("spectra in [gamma,Gamma]", in_window);
        hc.check("map unital", map_is_unital(inst));
        hc.check("f convex or concave on [gamma,Gamma]", flags.convex || flags.concave);
        const bool domain_ok = inst.f.domain().contains(inst.spectrum_interval.lo, kDomainTolerance) &&
                               inst.f.domain().contains(inst.spectrum_interval.hi, kDomainTolerance);
        hc.check("[gamma,Gamma] within f's domain", domain_ok);
        if (!flags.convex) dir = Direction::reversed;
    } else {
        throw UnknownClaim("evaluate_popoviciu_convex does not handle " + claim_id);
    }
    hc.finish();
    return convex_popoviciu_shape(claim_id, inst, inst.f, dir, hc);
}

TermBreakdown evaluate_popoviciu_derivative(const Instance& inst) {
    inst.validate();
    require_vector(inst);
    require_ops(inst, true);
    if (inst.family) throw Error("PRP2 takes a single map");
    if (!inst.f.has_derivative())
        throw MissingDerivative("PRP2 needs a function with a derivative");

    // classify f' as convex or concave by a midpoint scan over the
    // operator range (grid evidence, consistent with the definition checks)
    double hi = 1.0;
    for (const auto* ops : {&inst.a_ops, &inst.b_ops, &inst.d_ops})
        for (const auto& m : *ops) hi = std::max(hi, operator_norm(m));
    auto fprime = [&inst](double t) { return inst.f.derivative(t); };
    const double margin_convex = midpoint_convexity_margin(fprime, 0.0, hi);
    const double margin_concave =
        midpoint_convexity_margin([&fprime](double t) { return -fprime(t); }, 0.0, hi);
    const double class_tol = 1e-9 * std::max(1.0, std::abs(fprime(hi)));
    const bool convex = margin_convex >= -class_tol;
    const bool concave = margin_concave >= -class_tol;

    HypothesisChecker hc{"PRP2", {}};
    hc.check("A,B,D PSD", all_psd(inst.a_ops) && all_psd(inst.b_ops) && all_psd(inst.d_ops));
    hc.check("map unital", map_is_unital(inst));
    hc.check("f(0) = 0", inst.f.domain().contains(0.0, kDomainTolerance) &&
                             std::abs(inst.f.eval_clamped(0.0)) <= 1e-12);
    hc.check("f'(0) = 0", std::abs(inst.f.derivative(0.0)) <= 1e-12);
    hc.check("f' convex or concave", convex || concave);
    hc.finish();

    ScalarFunction::Flags dflags;
    dflags.convex = convex;
    dflags.concave = concave;
    ScalarFunction fp("d/dt(" + inst.f.name() + ")", inst.f.domain(), fprime, std::nullopt, dflags);
    return convex_popoviciu_shape("PRP2", inst, fp,
                                  convex ? Direction::forward : Direction::reversed, hc);
}

TermBreakdown evaluate_hlawka_operator(const Instance& inst) {
    inst.validate();
    require_vector(inst);
    require_ops(inst, true);
    if (inst.family) throw Error("HLAWKA-OP takes a single map");
    HypothesisChecker hc{"HLAWKA-OP", {}};
    hc.check("map unital", map_is_unital(inst));
    hc.finish();

    const auto& phi = *inst.map;
    const auto& a = inst.a_ops.front();
    const auto& b = inst.b_ops.front();
    const auto& d = inst.d_ops.front();
    auto qf = [&](const HermitianMatrix& m) { return quadratic_form(phi.apply(m), inst.x); };

    std::vector<std::pair<std::string, double>> lhs = {
        {"abs_total", std::abs(qf(a + b + d))},
        {"abs_ops", qf(operator_abs(a) + operator_abs(b) + operator_abs(d))},
    };
    std::vector<std::pair<std::string, double>> rhs = {
        {"pair_ad", std::abs(qf(a + d))},
        {"pair_bd", std::abs(qf(b + d))},
        {"pair_ab", std::abs(qf(a + b))},
    };
    return TermBreakdown::assemble("HLAWKA-OP", std::move(lhs), std::move(rhs), hc.report);
}

TermBreakdown evaluate_hlawka_norm(const Instance& inst) {
    inst.validate();
    require_ops(inst, true);
    if (inst.family) throw Error("HLAWKA-NORM takes a single map");
    HypothesisChecker hc{"HLAWKA-NORM", {}};
    hc.check("map unital", map_is_unital(inst));
    hc.finish();

    const auto& phi = *inst.map;
    const auto& a = inst.a_ops.front();
    const auto& b = inst.b_ops.front();
    const auto& d = inst.d_ops.front();
    auto nrm = [&](const HermitianMatrix& m) { return operator_norm(phi.apply(m)); };

    std::vector<std::pair<std::string, double>> lhs = {
        {"norm_total", nrm(a + b + d)},
        {"norm_abs_ops", nrm(operator_abs(a) + operator_abs(b) + operator_abs(d))},
    };
    std::vector<std::pair<std::string, double>> rhs = {
        {"pair_ad", nrm(a + d)},
        {"pair_bd", nrm(b + d)},
        {"pair_ab", nrm(a + b)},
    };
    return TermBreakdown::assemble("HLAWKA-NORM", std::move(lhs), std::move(rhs), hc.report);
}

TermBreakdown evaluate_popoviciu_norm(const Instance& inst) {
    inst.validate();
    require_ops(inst, true);
    if (inst.family) throw Error("POP-NORM takes a single map");
    const auto& g = inst.f;

    bool in_domain = true;
    double hi_norm = 0.0;
    for (const auto* ops : {&inst.a_ops, &inst.b_ops, &inst.d_ops})
        for (const auto& m : *ops) {
            in_domain = in_domain && spectrum_in(m, g.domain(), kDomainTolerance);
            hi_norm = std::max(hi_norm, operator_norm(m));
        }
    // increasing is scanned on [0, R]: norm arguments always land there
    bool increasing = true;
    {
        const auto grid = linear_grid(0.0, std::max(hi_norm, 1.0), 64);
        for (size_t i = 0; i + 1 < grid.size(); ++i)
            if (g.eval_clamped(grid[i + 1]) < g.eval_clamped(grid[i]) - 1e-12) increasing = false;
    }

    HypothesisChecker hc{"POP-NORM", {}};
    hc.check("spectra within g's domain", in_domain);
    hc.check("map unital", map_is_unital(inst));
    hc.check("g convex", g.flags().convex);
    hc.check("g increasing on [0, max norm]", increasing);
    hc.finish();

    const auto& phi = *inst.map;
    const auto& a = inst.a_ops.front();
    const auto& b = inst.b_ops.front();
    const auto& d = inst.d_ops.front();
    auto nrm = [&](const HermitianMatrix& m) { return operator_norm(phi.apply(m)); };

    const HermitianMatrix gavg = (apply_function(g, a) + apply_function(g, b) + apply_function(g, d)).scaled(1.0 / 3.0);
    std::vector<std::pair<std::string, double>> lhs = {
        {"g_norm_mean3", g.eval_clamped(nrm((a + b + d).scaled(1.0 / 3.0)))},
        {"norm_avg_g_ops", nrm(gavg)},
    };
    std::vector<std::pair<std::string, double>> rhs = {
        {"pair_ad", (2.0 / 3.0) * g.eval_clamped(nrm((a + d).scaled(0.5)))},
        {"pair_bd", (2.0 / 3.0) * g.eval_clamped(nrm((b + d).scaled(0.5)))},
        {"pair_ab", (2.0 / 3.0) * g.eval_clamped(nrm((a + b).scaled(0.5)))},
    };
    return TermBreakdown::assemble("POP-NORM", std::move(lhs), std::move(rhs), hc.report);
}

StepTrace trace_popoviciu(const Instance& inst) {
    inst.validate();
    require_vector(inst);
    require_ops(inst, true);
    HypothesisChecker hc{"THM2.1", {}};
    check_popoviciu_hypotheses(hc, inst, /*want_super=*/true);

    const PopoviciuPieces p = popoviciu_pieces(inst);
    const auto& f = inst.f;

    StepTrace tr;
    tr.s = {p.s1, p.s2, p.s3};
    for (int i = 0; i < 3; ++i)
        tr.c_s[static_cast<size_t>(i)] = f.support_constant(f.domain().clamp(tr.s[static_cast<size_t>(i)]));
    tr.c = std::min({tr.c_s[0], tr.c_s[1], tr.c_s[2]});

    // base superquadraticity steps, one per operator, with true constants
    const double f_s1 = f.eval_clamped(p.s1);
    const double f_s2 = f.eval_clamped(p.s2);
    const double f_s3 = f.eval_clamped(p.s3);

    auto push = [&tr](std::string label, double lhs, double rhs, bool min_c) {
        tr.steps.push_back({std::move(label), lhs, rhs, lhs - rhs, min_c});
    };

    push("2.2/2.4", p.f_of_a, f_s1 + tr.c_s[0] * p.t_half[0] + p.corr_a, false);
    push("2.2/2.5", p.f_of_d, f_s2 + tr.c_s[1] * p.t_half[1] + p.corr_d, false);
    push("2.2/2.6", p.f_of_b, f_s3 + tr.c_s[2] * p.t_half[2] + p.corr_b, false);

    // replacing each C_{s_i} by C drops (1/3) sum_i (C_{s_i} - C) t_i
    tr.t_half_sum = p.t_half[0] + p.t_half[1] + p.t_half[2];
    tr.drop_halves = ((tr.c_s[0] - tr.c) * p.t_half[0] + (tr.c_s[1] - tr.c) * p.t_half[1] +
                      (tr.c_s[2] - tr.c) * p.t_half[2]) /
                     3.0;
    {
        const double before = (tr.c_s[0] * p.t_half[0] + tr.c_s[1] * p.t_half[1] +
                               tr.c_s[2] * p.t_half[2]) /
                              3.0;
        const double after = tr.c * tr.t_half_sum / 3.0;
        push("minC-2.8", before, after, true);
    }

    // scalar superquadraticity at tbar against each support point
    push("1.4/2.9", f.eval_clamped(p.tbar),
         f_s1 + tr.c_s[0] * p.t_sixth[0] + f.eval_clamped(std::abs(p.t_sixth[0])), false);
    push("1.4/2.10", f.eval_clamped(p.tbar),
         f_s2 + tr.c_s[1] * p.t_sixth[1] + f.eval_clamped(std::abs(p.t_sixth[1])), false);
    push("1.4/2.11", f.eval_clamped(p.tbar),
         f_s3 + tr.c_s[2] * p.t_sixth[2] + f.eval_clamped(std::abs(p.t_sixth[2])), false);

    tr.t_sixth_sum = p.t_sixth[0] + p.t_sixth[1] + p.t_sixth[2];
    tr.drop_sixths = ((tr.c_s[0] - tr.c) * p.t_sixth[0] + (tr.c_s[1] - tr.c) * p.t_sixth[1] +
                      (tr.c_s[2] - tr.c) * p.t_sixth[2]) /
                     3.0;
    {
        const double before = (tr.c_s[0] * p.t_sixth[0] + tr.c_s[1] * p.t_sixth[1] +
                               tr.c_s[2] * p.t_sixth[2]) /
                              3.0;
        const double after = tr.c * tr.t_sixth_sum / 3.0;
        push("minC-2.13", before, after, true);
    }

    // combined claim
    {
        const double lhs = p.avg_f_ops + f.eval_clamped(p.tbar);
        const double rhs = (2.0 / 3.0) * (f_s1 + f_s2 + f_s3) +
                           (p.corr_a + p.corr_d + p.corr_b) / 3.0 +
                           (f.eval_clamped(std::abs(p.t_sixth[0])) +
                            f.eval_clamped(std::abs(p.t_sixth[1])) +
                            f.eval_clamped(std::abs(p.t_sixth[2]))) /
                               3.0;
        push("combine-2.3", lhs, rhs, false);
    }
    return tr;
}

// --- registry and dispatch ---------------------------------------------------

const std::vector<ClaimInfo>& list_claims() {
    static const std::vector<ClaimInfo> registry = {
        {"EQ1.5", "Eq. (1.5)", "x, y, z in J; f convex", "scalar triple + f",
         "equality holds for the identity function"},
        {"HLAWKA-SCALAR", "§1.2, Hlawka reduction", "none", "scalar triple",
         "the f = |t| specialization of EQ1.5"},
        {"GG-POP", "§1.2, geometric-convexity version", "x, y, z > 0; f positive",
         "scalar triple + f", "evaluated in log form"},
        {"THM1", "Theorem thm1 / Eq. (2.1)",
         "A PSD; Φ unital; f superquadratic (subquadratic reverses the direction)",
         "A + map + x + f", ""},
        {"THM2.1", "Theorem 2.1 / Eq. (2.3)", "A,B,D PSD; Φ unital; f superquadratic",
         "A,B,D + map + x + f", "trace support: per-step slack via the trace command"},
        {"COR1", "Corollary cor1 / Eq. (2.14)", "A,B,D PSD; Φ unital; f subquadratic",
         "A,B,D + map + x + f", "direction reversed relative to THM2.1"},
        {"COR2", "Corollary cor2 / Eq. (2.15)",
         "A PSD; Φ unital; f superquadratic (subquadratic reverses the direction)",
         "A + map + x + f", "refines THM1 by the -f(0) term"},
        {"BOHR-SUPER", "Bohr corollary, superquadratic part", "A PSD; Φ unital; f superquadratic",
         "A + map + f (no vector)", "stated conclusion evaluated verbatim"},
        {"BOHR-SUB", "Bohr corollary, subquadratic part", "A PSD; Φ unital; f subquadratic",
         "A + map + f (no vector)", "stated conclusion evaluated verbatim"},
        {"COR5-POP", "Corollary cor5 / Eq. (2.16)",
         "A_j,B_j,D_j PSD; family jointly normalized; f superquadratic",
         "operator lists + family + x + f",
         "codomain inner products read with the single unit vector throughout"},
        {"COR5-JENSEN", "Corollary cor5 / Eq. (2.17)",
         "A_j PSD; family jointly normalized; f superquadratic (subquadratic reverses the direction)",
         "operator list + family + x + f",
         "direction read as >= for superquadratic f, <= for subquadratic f"},
        {"PRP1", "Proposition prp1 / Eq. (2.18)",
         "A,B,D PSD; Φ unital; f nonnegative and superquadratic", "A,B,D + map + x + f",
         "no correction terms"},
        {"PRP2", "Proposition prp2 / Eq. (2.19)",
         "A,B,D PSD; Φ unital; f differentiable, f(0)=f'(0)=0, f' convex (concave reverses the direction)",
         "A,B,D + map + x + f", "the inequality is applied to f'"},
        {"PRP3", "Proposition prp3 / Eq. (2.20)",
         "spectra in [0,inf); Φ unital; g convex with g(0)=0 (concave reverses the direction)",
         "A,B,D + map + x + f", ""},
        {"THM3", "Theorem thm3",
         "spec(A),spec(B),spec(D) in [gamma,Gamma]; Φ unital; f convex on [gamma,Gamma] (concave reverses the direction)",
         "A,B,D + map + x + f + interval", "operators need not be PSD"},
        {"HLAWKA-OP", "Remark / Eq. (2.21)", "A,B,D selfadjoint; Φ unital", "A,B,D + map + x",
         "the g = |t| case; no function needed"},
        {"HLAWKA-NORM", "Remark, Hlawka norm inequality", "A,B,D selfadjoint; Φ unital",
         "A,B,D + map (no vector)", "termwise supremum of HLAWKA-OP"},
        {"POP-NORM", "Remark, Popoviciu norm extension",
         "spectra within g's domain; Φ unital; g convex and increasing",
         "A,B,D + map + f (no vector)", "termwise supremum form"},
    };
    return registry;
}

const ClaimInfo& claim_info(const std::string& id) {
    for (const auto& c : list_claims())
        if (c.id == id) return c;
    throw UnknownClaim("no claim with id '" + id + "'");
}

namespace {

double scalar_slot(const Instance& inst, const std::vector<HermitianMatrix>& ops,
                   const char* name) {
    if (ops.size() != 1 || ops.front().dim() != 1)
        throw DimensionMismatch(std::string("scalar claim needs a 1x1 operator in slot ") + name);
    (void)inst;
    return ops.front().at(0, 0).real();
}

} // namespace

TermBreakdown evaluate_claim(const std::string& claim_id, const Instance& inst) {
    claim_info(claim_id); // throws UnknownClaim early
    if (claim_id == "EQ1.5") {
        return scalar_popoviciu(scalar_slot(inst, inst.a_ops, "A"),
                                scalar_slot(inst, inst.b_ops, "B"),
                                scalar_slot(inst, inst.d_ops, "D"), inst.f);
    }
    if (claim_id == "HLAWKA-SCALAR") {
        return scalar_hlawka(scalar_slot(inst, inst.a_ops, "A"),
                             scalar_slot(inst, inst.b_ops, "B"),
                             scalar_slot(inst, inst.d_ops, "D"));
    }
    if (claim_id == "GG-POP") {
        return scalar_gg_popoviciu(scalar_slot(inst, inst.a_ops, "A"),
                                   scalar_slot(inst, inst.b_ops, "B"),
                                   scalar_slot(inst, inst.d_ops, "D"), inst.f);
    }
    if (claim_id == "THM1") return evaluate_jensen_superquadratic(inst);
    if (claim_id == "THM2.1") return evaluate_popoviciu_superquadratic(inst);
    if (claim_id == "COR1") return evaluate_popoviciu_subquadratic(inst);
    if (claim_id == "COR2") return evaluate_jensen_refined(inst);
    if (claim_id == "BOHR-SUPER") return evaluate_bohr_norm(inst, BohrDirection::super);
    if (claim_id == "BOHR-SUB") return evaluate_bohr_norm(inst, BohrDirection::sub);
    if (claim_id == "COR5-POP") return evaluate_multimap_popoviciu(inst);
    if (claim_id == "COR5-JENSEN") return evaluate_multimap_jensen(inst);
    if (claim_id == "PRP1" || claim_id == "PRP3" || claim_id == "THM3")
        return evaluate_popoviciu_convex(inst, claim_id);
    if (claim_id == "PRP2") return evaluate_popoviciu_derivative(inst);
    if (claim_id == "HLAWKA-OP") return evaluate_hlawka_operator(inst);
    if (claim_id == "HLAWKA-NORM") return evaluate_hlawka_norm(inst);
    if (claim_id == "POP-NORM") return evaluate_popoviciu_norm(inst);
    throw UnknownClaim("no evaluator for claim '" + claim_id + "'");
}

} // namespace opineq
