#include "opineq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

namespace opineq {

namespace {

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string format_double_csv(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

uint64_t Rng::next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    return mix64(z);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

double Rng::normal() {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

cplx Rng::complex_normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    return cplx(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
    return mix64(master + 0x9E3779B97F4A7C15ull * (index + 1));
}

HermitianMatrix gen_hermitian(Rng& rng, int dim, const Interval& interval) {
    if (dim < 1) throw BadParameter("gen_hermitian: dim must be >= 1");
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi))
        throw BadParameter("gen_hermitian: interval must be finite");
    std::vector<double> eig(static_cast<size_t>(dim));
    for (double& v : eig) v = rng.uniform(interval.lo, interval.hi);
    std::sort(eig.begin(), eig.end());
    if (dim == 1) return HermitianMatrix::diagonal(eig);

    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g.at(i, j) = rng.complex_normal();
    const ComplexMatrix u = qr_orthonormal_columns(g);

    ComplexMatrix scaled(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) scaled.at(i, j) = u.at(i, j) * eig[static_cast<size_t>(j)];
    return HermitianMatrix(scaled * u.adjoint());
}

std::vector<cplx> gen_unit_vector(Rng& rng, int dim) {
    if (dim < 1) throw BadParameter("gen_unit_vector: dim must be >= 1");
    std::vector<cplx> x(static_cast<size_t>(dim));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (cplx& v : x) {
            v = rng.complex_normal();
            norm2 += std::norm(v);
        }
    } while (norm2 < 1e-24);
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& v : x) v *= inv;
    return x;
}

MapKindSpec MapKindSpec::parse(const std::string& text) {
    std::string head = text;
    int param = 0;
    if (const auto pos = text.find(':'); pos != std::string::npos) {
        head = text.substr(0, pos);
        try {
            param = std::stoi(text.substr(pos + 1));
        } catch (const std::exception&) {
            throw BadParameter("cannot parse map kind parameter in '" + text + "'");
        }
    }
    MapKindSpec spec;
    spec.param = param;
    if (head == "identity") spec.kind = Kind::identity;
    else if (head == "unitary") spec.kind = Kind::unitary;
    else if (head == "pinching") spec.kind = Kind::pinching;
    else if (head == "trace_average") spec.kind = Kind::trace_average;
    else if (head == "random_kraus") spec.kind = Kind::random_kraus;
    else if (head == "compression") spec.kind = Kind::compression;
    else if (head == "family") spec.kind = Kind::family;
    else throw BadParameter("unknown map kind '" + text + "'");
    if (spec.kind == Kind::random_kraus && spec.param < 1) spec.param = 3;
    if (spec.kind == Kind::family && spec.param < 1) spec.param = 2;
    return spec;
}

std::string MapKindSpec::to_string() const {
    switch (kind) {
        case Kind::identity: return "identity";
        case Kind::unitary: return "unitary";
        case Kind::pinching: return "pinching";
        case Kind::trace_average: return "trace_average";
        case Kind::random_kraus: return "random_kraus:" + std::to_string(param);
        case Kind::compression: return "compression";
        case Kind::family: return "family:" + std::to_string(param);
    }
    return "identity";
}

namespace {

// S^{-1/2} for a positive definite Hermitian matrix; rejects draws whose
// condition number makes the inverse square root unreliable.
std::optional<HermitianMatrix> inverse_sqrt_guarded(const HermitianMatrix& s) {
    SpectralDecomposition d = spectral_decompose(s);
    const double lo = d.eigenvalues.front();
    const double hi = d.eigenvalues.back();
    if (!(lo > 0.0) || hi / lo > 1e8) return std::nullopt;
    std::vector<double> vals(d.eigenvalues.size());
    for (size_t i = 0; i < vals.size(); ++i) vals[i] = 1.0 / std::sqrt(d.eigenvalues[i]);
    return d.assemble(vals);
}

std::vector<ComplexMatrix> gaussian_blocks(Rng& rng, int count, int rows, int cols) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<size_t>(count));
    for (int b = 0; b < count; ++b) {
        ComplexMatrix w(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) w.at(i, j) = rng.complex_normal();
        blocks.push_back(std::move(w));
    }
    return blocks;
}

// right-normalize raw blocks so sum V†V = I exactly up to roundoff
std::optional<std::vector<ComplexMatrix>> normalize_blocks(const std::vector<ComplexMatrix>& ws) {
    const int dim_k = ws.front().cols();
    ComplexMatrix gram(dim_k, dim_k);
    for (const auto& w : ws) gram = gram + w.adjoint() * w;
    const auto inv_sqrt = inverse_sqrt_guarded(HermitianMatrix(gram));
    if (!inv_sqrt) return std::nullopt;
    std::vector<ComplexMatrix> vs;
    vs.reserve(ws.size());
    for (const auto& w : ws) vs.push_back(w * inv_sqrt->as_complex());
    return vs;
}

} // namespace

PositiveUnitalMap gen_map(Rng& rng, const MapKindSpec& kind, int dim_h, int dim_k) {
    using Kind = MapKindSpec::Kind;
    switch (kind.kind) {
        case Kind::identity:
            if (dim_k != dim_h) throw BadParameter("identity map needs dim_k == dim_h");
            return PositiveUnitalMap::identity(dim_h);
        case Kind::unitary: {
            if (dim_k != dim_h) throw BadParameter("unitary map needs dim_k == dim_h");
            if (dim_h == 1) return PositiveUnitalMap::identity(1);
            return make_kraus({qr_orthonormal_columns(gaussian_blocks(rng, 1, dim_h, dim_h).front())},
                              true);
        }
        case Kind::pinching: {
            if (dim_k != dim_h) throw BadParameter("pinching map needs dim_k == dim_h");
            std::vector<ComplexMatrix> ops;
            for (int i = 0; i < dim_h; ++i) {
                ComplexMatrix p(dim_h, dim_h);
                p.at(i, i) = 1.0;
                ops.push_back(std::move(p));
            }
            return make_kraus(std::move(ops), true);
        }
        case Kind::trace_average:
            if (dim_k != dim_h) throw BadParameter("trace_average map needs dim_k == dim_h");
            return make_trace_average(dim_h);
        case Kind::compression: {
            if (dim_k > dim_h) throw BadParameter("compression needs dim_k <= dim_h");
            if (dim_k == dim_h) return gen_map(rng, MapKindSpec{Kind::unitary, 0}, dim_h, dim_k);
            return make_compression(qr_orthonormal_columns(gaussian_blocks(rng, 1, dim_h, dim_k).front()));
        }
        case Kind::random_kraus: {
            for (int attempt = 0; attempt < 10; ++attempt) {
                auto vs = normalize_blocks(gaussian_blocks(rng, kind.param, dim_h, dim_k));
                if (vs) return make_kraus(std::move(*vs), true);
            }
            throw GenerationFailure("random_kraus: condition guard rejected 10 draws");
        }
        case Kind::family:
            throw BadParameter("gen_map cannot build a family; use gen_family");
    }
    throw BadParameter("unreachable map kind");
}

MapFamily gen_family(Rng& rng, int members, int dim_h, int dim_k) {
    if (members < 1) throw BadParameter("gen_family: members must be >= 1");
    constexpr int kBlocksPerMember = 2;
    for (int attempt = 0; attempt < 10; ++attempt) {
        auto ws = gaussian_blocks(rng, members * kBlocksPerMember, dim_h, dim_k);
        auto vs = normalize_blocks(ws);
        if (!vs) continue;
        std::vector<PositiveUnitalMap> maps;
        maps.reserve(static_cast<size_t>(members));
        for (int j = 0; j < members; ++j) {
            std::vector<ComplexMatrix> ops(vs->begin() + j * kBlocksPerMember,
                                           vs->begin() + (j + 1) * kBlocksPerMember);
            maps.push_back(make_kraus(std::move(ops), false));
        }
        return MapFamily(std::move(maps));
    }
    throw GenerationFailure("gen_family: condition guard rejected 10 draws");
}

namespace {

bool is_scalar_claim(const std::string& id) {
    return id == "EQ1.5" || id == "HLAWKA-SCALAR" || id == "GG-POP";
}

bool needs_three_ops(const std::string& id) {
    return id == "THM2.1" || id == "COR1" || id == "PRP1" || id == "PRP2" || id == "PRP3" ||
           id == "THM3" || id == "HLAWKA-OP" || id == "HLAWKA-NORM" || id == "POP-NORM" ||
           id == "COR5-POP" || is_scalar_claim(id);
}

bool needs_vector(const std::string& id) {
    return !(id == "BOHR-SUPER" || id == "BOHR-SUB" || id == "HLAWKA-NORM" || id == "POP-NORM" ||
             is_scalar_claim(id));
}

bool is_family_claim(const std::string& id) { return id == "COR5-POP" || id == "COR5-JENSEN"; }

} // namespace

Instance gen_instance(Rng& rng, const std::string& claim_id, int dim, const MapKindSpec& kind,
                      const ScalarFunction& f, const Interval& interval) {
    claim_info(claim_id);
    Instance inst;
    inst.f = f;
    inst.spectrum_interval = interval;

    if (is_scalar_claim(claim_id)) {
        inst.a_ops = {HermitianMatrix::diagonal({rng.uniform(interval.lo, interval.hi)})};
        inst.b_ops = {HermitianMatrix::diagonal({rng.uniform(interval.lo, interval.hi)})};
        inst.d_ops = {HermitianMatrix::diagonal({rng.uniform(interval.lo, interval.hi)})};
        inst.map = PositiveUnitalMap::identity(1);
        inst.x = {cplx(1.0, 0.0)};
        return inst;
    }

    const bool family_claim = is_family_claim(claim_id);
    int members = 1;
    if (family_claim && kind.kind == MapKindSpec::Kind::family) members = kind.param;

    int dim_k = dim;
    if (kind.kind == MapKindSpec::Kind::compression && dim > 1)
        dim_k = rng.uniform_int(1, dim - 1);

    if (family_claim) {
        if (kind.kind == MapKindSpec::Kind::family) {
            inst.family = gen_family(rng, members, dim, dim_k);
        } else {
            inst.family = MapFamily({gen_map(rng, kind, dim, dim_k)});
        }
    } else {
        if (kind.kind == MapKindSpec::Kind::family)
            throw BadParameter(claim_id + " takes a single map, not a family");
        inst.map = gen_map(rng, kind, dim, dim_k);
    }

    auto draw_list = [&]() {
        std::vector<HermitianMatrix> ops;
        ops.reserve(static_cast<size_t>(members));
        for (int j = 0; j < members; ++j) ops.push_back(gen_hermitian(rng, dim, interval));
        return ops;
    };
    inst.a_ops = draw_list();
    if (needs_three_ops(claim_id)) {
        inst.b_ops = draw_list();
        inst.d_ops = draw_list();
    }
    if (needs_vector(claim_id)) inst.x = gen_unit_vector(rng, dim_k);
    return inst;
}

int resolve_worker_count() {
    if (const char* env = std::getenv("OPINEQ_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct TrialOutcome {
    bool hypothesis_ok = false;
    bool violation = false;
    double gap = 0.0;
    std::optional<Instance> instance;
};

const std::vector<double>& histogram_edges() {
    static const std::vector<double> edges = {-1.0,  -1e-1, -1e-2, -1e-4, -1e-6, -1e-8, 0.0,
                                              1e-8,  1e-6,  1e-4,  1e-2,  1e-1,  1.0};
    return edges;
}

} // namespace

CampaignReport run_campaign(const CampaignConfig& cfg) {
    claim_info(cfg.claim_id);
    if (cfg.trials < 1) throw BadParameter("campaign needs trials >= 1");
    if (cfg.dims.empty()) throw BadParameter("campaign needs at least one dimension");
    for (int d : cfg.dims)
        if (d < 1) throw BadParameter("campaign dims must be >= 1");
    if (!std::isfinite(cfg.interval.lo) || !std::isfinite(cfg.interval.hi))
        throw BadParameter("campaign interval must be finite");
    const MapKindSpec kind = MapKindSpec::parse(cfg.map_kind);
    const ScalarFunction f = parse_function_spec(cfg.function_spec);

    const auto t0 = std::chrono::steady_clock::now();

    std::vector<TrialOutcome> outcomes(static_cast<size_t>(cfg.trials));
    const int workers = std::min(resolve_worker_count(), cfg.trials);

    auto run_range = [&](int worker) {
        for (int trial = worker; trial < cfg.trials; trial += workers) {
            Rng rng(derive_seed(cfg.master_seed, static_cast<uint64_t>(trial)));
            TrialOutcome& out = outcomes[static_cast<size_t>(trial)];
            try {
                Instance inst;
                if (trial == 0 && cfg.inject) {
                    inst = *cfg.inject;
                } else {
                    const int dim = cfg.dims[static_cast<size_t>(
                        rng.uniform_int(0, static_cast<int>(cfg.dims.size()) - 1))];
                    inst = gen_instance(rng, cfg.claim_id, dim, kind, f, cfg.interval);
                }
                const TermBreakdown b = evaluate_claim(cfg.claim_id, inst);
                out.hypothesis_ok = true;
                out.gap = b.gap;
                const double scale = std::max({std::abs(b.lhs), std::abs(b.rhs), 1.0});
                out.violation = b.gap < -(cfg.threshold_abs + cfg.threshold_rel * scale);
                out.instance = std::move(inst);
            } catch (const HypothesisViolation&) {
                out.hypothesis_ok = false;
            } catch (const DomainViolation&) {
                out.hypothesis_ok = false;
            } catch (const NonPositiveFunction&) {
                out.hypothesis_ok = false;
            }
        }
    };

    if (workers <= 1) {
        run_range(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w]() {
                try {
                    run_range(w);
                } catch (...) {
                    errors[static_cast<size_t>(w)] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    CampaignReport report;
    report.config = cfg;
    report.verdict.claim_id = cfg.claim_id;
    report.histogram_edges = histogram_edges();
    report.histogram_counts.assign(report.histogram_edges.size() + 1, 0);

    std::vector<double> gaps;
    gaps.reserve(outcomes.size());
    int worst_trial = -1;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const TrialOutcome& out = outcomes[static_cast<size_t>(trial)];
        TrialRow row{trial, out.hypothesis_ok ? out.gap : std::nan(""), out.hypothesis_ok};
        report.trial_rows.push_back(row);
        if (!out.hypothesis_ok) {
            ++report.verdict.skipped_hypothesis_failures;
            continue;
        }
        ++report.verdict.trials;
        if (out.violation) ++report.verdict.violations;
        gaps.push_back(out.gap);
        if (worst_trial < 0 || out.gap < outcomes[static_cast<size_t>(worst_trial)].gap)
            worst_trial = trial;
        size_t bin = 0;
        while (bin < report.histogram_edges.size() && out.gap >= report.histogram_edges[bin]) ++bin;
        ++report.histogram_counts[bin];
    }

    if (!gaps.empty()) {
        std::vector<double> sorted = gaps;
        std::sort(sorted.begin(), sorted.end());
        report.min_gap = sorted.front();
        report.max_gap = sorted.back();
        const size_t n = sorted.size();
        report.median_gap = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        report.verdict.worst_gap = sorted.front();
    }
    if (report.verdict.violations > 0 && worst_trial >= 0)
        report.verdict.witness = outcomes[static_cast<size_t>(worst_trial)].instance;

    // five smallest gaps, ties broken by trial index
    std::vector<int> evaluated;
    for (int trial = 0; trial < cfg.trials; ++trial)
        if (outcomes[static_cast<size_t>(trial)].hypothesis_ok) evaluated.push_back(trial);
    std::stable_sort(evaluated.begin(), evaluated.end(), [&](int a, int b) {
        return outcomes[static_cast<size_t>(a)].gap < outcomes[static_cast<size_t>(b)].gap;
    });
    for (size_t i = 0; i < evaluated.size() && i < 5; ++i) {
        const int trial = evaluated[i];
        const TrialOutcome& out = outcomes[static_cast<size_t>(trial)];
        report.offenders.push_back({trial, out.gap, *out.instance});
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string campaign_csv(const CampaignReport& report) {
    std::ostringstream os;
    os << "trial,gap,hypothesis_ok\n";
    for (const TrialRow& row : report.trial_rows) {
        os << row.trial << ',';
        if (row.hypothesis_ok)
            os << format_double_csv(row.gap);
        else
            os << "nan";
        os << ',' << (row.hypothesis_ok ? 1 : 0) << '\n';
    }
    return os.str();
}

namespace {

// local search move: nudge one eigenvalue of one operator, re-using the
// operator's own eigenbasis, then clamp back into the spectrum window
HermitianMatrix nudge_eigenvalue(Rng& rng, const HermitianMatrix& m, const Interval& window,
                                 double step) {
    SpectralDecomposition d = spectral_decompose(m);
    const int idx = rng.uniform_int(0, m.dim() - 1);
    const double span = std::max(window.hi - window.lo, 1e-3);
    std::vector<double> vals = d.eigenvalues;
    vals[static_cast<size_t>(idx)] =
        window.clamp(vals[static_cast<size_t>(idx)] + step * span * rng.normal());
    return d.assemble(vals);
}

// small random basis rotation; spectrum (and thus the hypothesis window)
// is untouched
HermitianMatrix rotate_basis(Rng& rng, const HermitianMatrix& m, double step) {
    const int n = m.dim();
    if (n == 1) return m;
    ComplexMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = rng.complex_normal();
    // antihermitian generator K = (G - G†)/2, unitary from QR of I + step K
    const ComplexMatrix k = (g - g.adjoint()).scaled(0.5 * step);
    const ComplexMatrix q = qr_orthonormal_columns(ComplexMatrix::identity(n) + k);
    return HermitianMatrix(q * m.as_complex() * q.adjoint());
}

std::vector<cplx> nudge_vector(Rng& rng, const std::vector<cplx>& x, double step) {
    std::vector<cplx> y = x;
    for (cplx& v : y) v += step * rng.complex_normal();
    double norm2 = 0.0;
    for (const cplx& v : y) norm2 += std::norm(v);
    if (norm2 < 1e-24) return x;
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& v : y) v *= inv;
    return y;
}

} // namespace

Instance refine_counterexample(const std::string& claim_id, const Instance& start, int budget,
                               uint64_t seed) {
    TermBreakdown b0 = evaluate_claim(claim_id, start); // throws HypothesisViolation on bad start
    Instance best = start;
    double best_gap = b0.gap;

    Rng rng(derive_seed(seed, 0x5eedull));
    double step = 0.1;

    for (int iter = 0; iter < budget; ++iter) {
        Instance cand = best;
        const int move = rng.uniform_int(0, cand.has_vector() ? 2 : 1);
        if (move == 2) {
            cand.x = nudge_vector(rng, cand.x, step);
        } else {
            // pick one operator across all slots
            std::vector<std::pair<std::vector<HermitianMatrix>*, size_t>> flat;
            for (auto* ops : {&cand.a_ops, &cand.b_ops, &cand.d_ops})
                for (size_t j = 0; j < ops->size(); ++j) flat.emplace_back(ops, j);
            if (flat.empty()) continue;
            auto [ops, j] = flat[static_cast<size_t>(
                rng.uniform_int(0, static_cast<int>(flat.size()) - 1))];
            (*ops)[j] = (move == 0)
                            ? nudge_eigenvalue(rng, (*ops)[j], cand.spectrum_interval, step)
                            : rotate_basis(rng, (*ops)[j], step);
        }

        bool improved = false;
        try {
            const TermBreakdown b = evaluate_claim(claim_id, cand);
            if (b.gap < best_gap) {
                best = std::move(cand);
                best_gap = b.gap;
                improved = true;
            }
        } catch (const Error&) {
            improved = false; // projection kept us feasible in all expected cases
        }
        step = improved ? std::min(step * 1.5, 1.0) : std::max(step * 0.5, 1e-6);
    }
    return best;
}

} // namespace opineq
