#ifndef OPINEQ_HARNESS_HPP
#define OPINEQ_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opineq/claims.hpp"

namespace opineq {

/// Deterministic splittable PRNG. The generator itself is splitmix64;
/// child streams come from derive_seed(master, index), so trial streams
/// are independent of evaluation order and worker count. All floating
/// draws are built from the integer stream with fixed arithmetic.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();
    double uniform();                      // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    int uniform_int(int lo, int hi);       // inclusive bounds
    double normal();                       // Box-Muller, two draws per call
    cplx complex_normal();                 // E|z|^2 = 1

private:
    uint64_t state_;
};

/// child seed = mix64(master, index); any trial can be replayed alone.
uint64_t derive_seed(uint64_t master, uint64_t index);

// --- generators -------------------------------------------------------------

/// Hermitian matrix with eigenvalues drawn uniformly from the interval and
/// a Haar-ish random eigenbasis (QR of a complex Gaussian matrix with
/// phase-fixed R diagonal).
HermitianMatrix gen_hermitian(Rng& rng, int dim, const Interval& interval);

/// Complex Gaussian vector normalized to unit length.
std::vector<cplx> gen_unit_vector(Rng& rng, int dim);

struct MapKindSpec {
    enum class Kind { identity, unitary, pinching, trace_average, random_kraus, compression, family };
    Kind kind = Kind::identity;
    int param = 0; // Kraus block count for random_kraus, member count for family

    static MapKindSpec parse(const std::string& text);
    std::string to_string() const;
};

/// Positive unital map of the requested kind. random_kraus draws Gaussian
/// blocks and right-normalizes by S^{-1/2}; draws with condition number of
/// S above 1e8 are regenerated, up to 10 times.
PositiveUnitalMap gen_map(Rng& rng, const MapKindSpec& kind, int dim_h, int dim_k);

/// Family of k individually positive maps normalized family-wide so that
/// sum_j Phi_j(1_H) = 1_K.
MapFamily gen_family(Rng& rng, int members, int dim_h, int dim_k);

// --- campaigns ---------------------------------------------------------------

struct CampaignConfig {
    std::string claim_id;
    int trials = 0;
    std::vector<int> dims;
    std::string map_kind = "identity";
    std::string function_spec = "pow:2";
    Interval interval{0.0, 3.0};
    uint64_t master_seed = 0;
    // violation cutoff: gap < -(threshold_abs + threshold_rel * scale)
    double threshold_abs = 1e-8;
    double threshold_rel = 1e-8;
    // when set, trial 0 evaluates this fixed instance instead of a draw
    std::optional<Instance> inject;
};

struct Verdict {
    std::string claim_id;
    int trials = 0; // evaluated trials (config.trials minus skips)
    int violations = 0;
    double worst_gap = 0.0;
    std::optional<Instance> witness; // present iff violations > 0
    int skipped_hypothesis_failures = 0;
};

struct TrialRow {
    int trial = 0;
    double gap = 0.0;
    bool hypothesis_ok = false;
};

struct Offender {
    int trial = 0;
    double gap = 0.0;
    Instance instance;
};

struct CampaignReport {
    CampaignConfig config;
    Verdict verdict;
    std::vector<double> histogram_edges; // counts has edges.size()+1 bins
    std::vector<long long> histogram_counts;
    double min_gap = 0.0;
    double median_gap = 0.0;
    double max_gap = 0.0;
    std::vector<Offender> offenders; // up to 5 smallest gaps
    std::vector<TrialRow> trial_rows;
    double wall_seconds = 0.0; // console-only; never serialized
};

/// Draws one instance for the claim's shape. Operators come from
/// gen_hermitian over cfg's interval, maps from cfg's map kind, the vector
/// from the codomain sphere. Multi-map claims always receive a family
/// (a singleton one unless map_kind is family:k).
Instance gen_instance(Rng& rng, const std::string& claim_id, int dim, const MapKindSpec& kind,
                      const ScalarFunction& f, const Interval& interval);

/// Runs cfg.trials independent trials with per-trial derived seeds,
/// in parallel across OPINEQ_THREADS workers (machine parallelism by
/// default). The report is identical for any worker count.
CampaignReport run_campaign(const CampaignConfig& cfg);

/// trial,gap,hypothesis_ok rows; skipped trials print gap as nan.
std::string campaign_csv(const CampaignReport& report);

/// Seeded local search for a smaller gap: eigenvalue nudges (clamped to
/// the instance's spectrum window), basis rotations, and vector re-draws,
/// with step halving on failure. Never leaves the hypothesis region;
/// the returned gap is <= the starting gap. `budget` counts evaluations.
Instance refine_counterexample(const std::string& claim_id, const Instance& start, int budget,
                               uint64_t seed);

/// Worker count: OPINEQ_THREADS when set and positive, otherwise
/// hardware concurrency.
int resolve_worker_count();

} // namespace opineq

#endif
