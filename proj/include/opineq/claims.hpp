#ifndef OPINEQ_CLAIMS_HPP
#define OPINEQ_CLAIMS_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opineq/functions.hpp"
#include "opineq/maps.hpp"
#include "opineq/matrix.hpp"
#include "opineq/spectral.hpp"

namespace opineq {

/// Everything a claim evaluator consumes: up to three named operator
/// slots (lists when a map family is involved), a positive unital map or
/// a family, a unit vector in the codomain, a scalar function, and the
/// declared spectrum window of the hypothesis.
struct Instance {
    std::vector<HermitianMatrix> a_ops;
    std::vector<HermitianMatrix> b_ops;
    std::vector<HermitianMatrix> d_ops;
    std::optional<PositiveUnitalMap> map;
    std::optional<MapFamily> family;
    std::vector<cplx> x;
    ScalarFunction f;
    Interval spectrum_interval{0.0, 0.0};

    int dim_h() const;
    int dim_k() const;
    bool has_vector() const { return !x.empty(); }

    /// Structural consistency: operator dimensions match the map, lists
    /// match the family size, and the vector (when present) is unit norm
    /// within 1e-12. Throws on defect.
    void validate() const;
};

/// Named term-by-term evaluation of one claim on one instance. Terms carry
/// their weights, so lhs == sum of lhs_terms and rhs == sum of rhs_terms;
/// gap = lhs - rhs is oriented so the claim asserts gap >= 0.
struct TermBreakdown {
    std::string claim_id;
    std::vector<std::pair<std::string, double>> lhs_terms;
    std::vector<std::pair<std::string, double>> rhs_terms;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    std::vector<std::pair<std::string, bool>> hypothesis_report;

    static TermBreakdown assemble(std::string claim_id,
                                  std::vector<std::pair<std::string, double>> lhs_terms,
                                  std::vector<std::pair<std::string, double>> rhs_terms,
                                  std::vector<std::pair<std::string, bool>> hypotheses);
};

/// Violation cutoff: gap below -(1e-8 + 1e-8 * scale) with
/// scale = max(|lhs|, |rhs|, 1) counts as a genuine violation rather than
/// roundoff.
double violation_threshold(const TermBreakdown& b);
bool is_violation(const TermBreakdown& b);

/// One proof step of the three-operator superquadratic chain. For minC
/// steps, slack equals the signed quantity dropped when each constant
/// C_{s_i} is replaced by the common minimum C.
struct StepRecord {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool min_c = false;
};

/// Replay of the proof chain behind the three-operator superquadratic
/// inequality, one record per step plus the support points s_i, their
/// constants C_{s_i}, and the min constant C. The t-vector sums are the
/// coefficients the chain silently cancels; they vanish identically.
struct StepTrace {
    std::vector<StepRecord> steps;
    std::array<double, 3> s{};
    std::array<double, 3> c_s{};
    double c = 0.0;
    double drop_halves = 0.0;
    double drop_sixths = 0.0;
    double t_half_sum = 0.0;
    double t_sixth_sum = 0.0;

    const StepRecord& step(const std::string& label) const;
};

/// Registry row: stable claim id, statement anchor, hypothesis set, and
/// the instance shape the evaluator expects.
struct ClaimInfo {
    std::string id;
    std::string source;
    std::string hypothesis;
    std::string shape;
    std::string notes;
};

const std::vector<ClaimInfo>& list_claims();
const ClaimInfo& claim_info(const std::string& id);

// --- scalar oracles -------------------------------------------------------

/// Three-point convexity inequality for scalars:
///   gap = f((x+y+z)/3) + (f(x)+f(y)+f(z))/3
///         - (2/3)[f((x+z)/2) + f((y+z)/2) + f((x+y)/2)].
TermBreakdown scalar_popoviciu(double x, double y, double z, const ScalarFunction& f);

/// gap = |x|+|y|+|z|+|x+y+z| - |x+z| - |z+y| - |x+y|.
TermBreakdown scalar_hlawka(double x, double y, double z);

/// Geometric-mean analogue, evaluated in log form:
///   gap = 3 log f(cbrt(xyz)) + log f(x) + log f(y) + log f(z)
///         - 2[log f(sqrt(xz)) + log f(sqrt(yz)) + log f(sqrt(xy))].
TermBreakdown scalar_gg_popoviciu(double x, double y, double z, const ScalarFunction& f);

// --- operator evaluators ---------------------------------------------------

enum class BohrDirection { super, sub };

TermBreakdown evaluate_jensen_superquadratic(const Instance& inst);   // THM1
TermBreakdown evaluate_popoviciu_superquadratic(const Instance& inst); // THM2.1
TermBreakdown evaluate_popoviciu_subquadratic(const Instance& inst);  // COR1
TermBreakdown evaluate_jensen_refined(const Instance& inst);          // COR2
TermBreakdown evaluate_bohr_norm(const Instance& inst, BohrDirection direction);
TermBreakdown evaluate_multimap_popoviciu(const Instance& inst);      // COR5-POP
TermBreakdown evaluate_multimap_jensen(const Instance& inst);         // COR5-JENSEN
TermBreakdown evaluate_popoviciu_convex(const Instance& inst,
                                        const std::string& claim_id);  // PRP1 / PRP3 / THM3
TermBreakdown evaluate_popoviciu_derivative(const Instance& inst);    // PRP2
TermBreakdown evaluate_hlawka_operator(const Instance& inst);         // HLAWKA-OP
TermBreakdown evaluate_hlawka_norm(const Instance& inst);             // HLAWKA-NORM
TermBreakdown evaluate_popoviciu_norm(const Instance& inst);          // POP-NORM

/// Replays the proof chain of the three-operator superquadratic claim on
/// the instance and measures per-step slack and the two minC drops.
StepTrace trace_popoviciu(const Instance& inst);

/// Dispatch by registry id; scalar claims read 1x1 operator slots.
TermBreakdown evaluate_claim(const std::string& claim_id, const Instance& inst);

} // namespace opineq

#endif
