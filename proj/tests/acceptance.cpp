// Acceptance suite: one numbered criterion per check, one pass/fail line
// each, nonzero exit when anything fails. Expects the fixtures directory
// and the CLI binary path on the command line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "opineq/json_io.hpp"

using namespace opineq;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// --- criterion 1: functional calculus vs matrix-product oracle ---------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    double worst_rel = 0.0, worst_map = 0.0;
    for (int s = 0; s < 500 && pass; ++s) {
        Rng rng(derive_seed(4242, static_cast<uint64_t>(s)));
        const int dim = rng.uniform_int(2, 8);
        const auto a = gen_hermitian(rng, dim, Interval(-5, 5));
        const double anorm = operator_norm(a);

        const auto sq = apply_spectral_function(a, [](double t) { return t * t; },
                                                Interval::all_reals());
        const auto cu = apply_spectral_function(a, [](double t) { return t * t * t; },
                                                Interval::all_reals());
        const auto a2 = a.as_complex() * a.as_complex();
        const auto a3 = a2 * a.as_complex();
        const double rel2 =
            (sq.as_complex() - a2).frobenius_norm() / std::max(1e-30, anorm * anorm);
        const double rel3 =
            (cu.as_complex() - a3).frobenius_norm() / std::max(1e-30, anorm * anorm * anorm);
        worst_rel = std::max({worst_rel, rel2, rel3});
        if (rel2 > 1e-8 || rel3 > 1e-8) {
            pass = false;
            detail = "power oracle mismatch at trial " + std::to_string(s);
        }

        // spectral mapping for a random polynomial of degree <= 4
        std::vector<double> coeffs(static_cast<size_t>(rng.uniform_int(1, 5)));
        for (double& c : coeffs) c = rng.uniform(-2, 2);
        auto poly = [&coeffs](double t) {
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
            return acc;
        };
        const auto fa = apply_spectral_function(a, poly, Interval::all_reals());
        std::vector<double> expected;
        for (double lam : spectral_decompose(a).eigenvalues) expected.push_back(poly(lam));
        std::sort(expected.begin(), expected.end());
        const auto got = spectral_decompose(fa).eigenvalues;
        for (size_t i = 0; i < got.size(); ++i) {
            worst_map = std::max(worst_map, std::abs(got[i] - expected[i]));
            if (std::abs(got[i] - expected[i]) > 1e-9) {
                pass = false;
                detail = "spectral mapping defect at trial " + std::to_string(s);
            }
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 5.0) {
        pass = false;
        detail = "runtime " + std::to_string(dt) + " s exceeds 5 s";
    }
    if (pass) {
        std::ostringstream os;
        os << "500 matrices, worst power-oracle rel err " << worst_rel << ", worst mapping err "
           << worst_map << ", " << dt << " s";
        detail = os.str();
    }
    report(1, "functional calculus matches repeated multiplication", pass, detail);
}

// --- criterion 2: superquadraticity definition checks -------------------------

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    const auto lin = linear_grid(0.0, 10.0, 50);
    const auto r2 = check_superquadratic_grid(parse_function_spec("pow:2"), lin, lin, 1e-12);
    if (!r2.violations.empty() || std::abs(r2.min_residual) > 1e-12) {
        pass = false;
        detail = "pow:2 residuals not identically zero";
    }

    const auto logg = log_spaced_grid(0.01, 100.0, 50);
    for (const char* spec : {"pow:3", "expc"}) {
        const auto r = check_superquadratic_grid(parse_function_spec(spec), logg, logg, 1e-9);
        if (!r.violations.empty()) {
            pass = false;
            detail = std::string(spec) + " unexpectedly violated";
        }
    }

    const auto r15 = check_superquadratic_grid(parse_function_spec("pow:1.5"), logg, logg, 1e-9);
    if (r15.violations.empty()) {
        pass = false;
        detail = "pow:1.5 produced no violation";
    }
    const auto point = check_superquadratic_grid(parse_function_spec("pow:1.5"), {1.0}, {4.0}, 1e-9);
    const double expected = 8.0 - (1.0 + 4.5 + std::pow(3.0, 1.5)); // scalar oracle
    if (point.violations.size() != 1 ||
        std::abs(point.violations[0].residual - expected) > 1e-9) {
        pass = false;
        detail = "pow:1.5 residual at (1,4) off";
    }

    const double dt = seconds_since(t0);
    if (dt >= 1.0) {
        pass = false;
        detail = "runtime " + std::to_string(dt) + " s exceeds 1 s";
    }
    if (pass) detail = std::to_string(r15.violations.size()) + " pow:1.5 grid violations, " +
                       std::to_string(dt) + " s";
    report(2, "superquadraticity definition checks", pass, detail);
}

// --- criterion 3: operator Jensen campaigns ----------------------------------

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    int campaigns = 0;
    double worst = 0.0;
    for (const char* map : {"identity", "unitary", "pinching", "trace_average", "random_kraus:3"}) {
        for (const char* f : {"pow:2", "pow:3", "pow:4", "expc"}) {
            CampaignConfig cfg;
            cfg.claim_id = "THM1";
            cfg.trials = 1000;
            cfg.dims = {1, 2, 4, 6};
            cfg.map_kind = map;
            cfg.function_spec = f;
            cfg.interval = Interval(0, 3);
            cfg.master_seed = 42;
            const auto rep = run_campaign(cfg);
            ++campaigns;
            worst = std::min(worst, rep.verdict.worst_gap);
            if (rep.verdict.violations != 0 || rep.verdict.skipped_hypothesis_failures != 0) {
                pass = false;
                detail = std::string("violations with map=") + map + " f=" + f;
            }
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 30.0) {
        pass = false;
        detail = "runtime " + std::to_string(dt) + " s exceeds 30 s";
    }
    if (pass) {
        std::ostringstream os;
        os << campaigns << " campaigns x 1000 trials, min gap " << worst << ", " << dt << " s";
        detail = os.str();
    }
    report(3, "operator Jensen holds across maps and functions", pass, detail);
}

// --- criterion 4: convex Popoviciu campaigns ----------------------------------

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    struct Setup {
        const char* claim;
        const char* f;
        Interval window;
    };
    const Setup setups[] = {
        {"PRP1", "pow:2", Interval(0, 3)},    {"PRP3", "pow:2", Interval(0, 3)},
        {"PRP3", "abs", Interval(0, 3)},      {"PRP3", "relupow:2", Interval(0, 3)},
        {"THM3", "pow:2", Interval(0, 3)},    {"THM3", "abs", Interval(-3, 3)},
        {"THM3", "relupow:2", Interval(-3, 3)},
    };
    for (const auto& s : setups) {
        CampaignConfig cfg;
        cfg.claim_id = s.claim;
        cfg.trials = 1000;
        cfg.dims = {1, 2, 4, 6};
        cfg.map_kind = "random_kraus:3";
        cfg.function_spec = s.f;
        cfg.interval = s.window;
        cfg.master_seed = 42;
        const auto rep = run_campaign(cfg);
        if (rep.verdict.violations != 0 || rep.verdict.skipped_hypothesis_failures != 0) {
            pass = false;
            detail = std::string(s.claim) + " with f=" + s.f + " violated";
        }
    }

    // dim-1 agreement with the scalar three-point oracle
    double worst_dev = 0.0;
    for (int s = 0; s < 200; ++s) {
        Rng rng(derive_seed(42, 90000 + static_cast<uint64_t>(s)));
        const double a = rng.uniform(0, 3), b = rng.uniform(0, 3), d = rng.uniform(0, 3);
        Instance inst;
        inst.a_ops = {HermitianMatrix::diagonal({a})};
        inst.b_ops = {HermitianMatrix::diagonal({b})};
        inst.d_ops = {HermitianMatrix::diagonal({d})};
        inst.map = PositiveUnitalMap::identity(1);
        inst.x = {cplx(1, 0)};
        inst.f = parse_function_spec("pow:2");
        inst.spectrum_interval = Interval(0, 3);
        const double got = evaluate_popoviciu_convex(inst, "PRP1").gap;
        const double want = scalar_popoviciu(a, b, d, inst.f).gap;
        worst_dev = std::max(worst_dev, std::abs(got - want));
        if (std::abs(got - want) > 1e-12) {
            pass = false;
            detail = "dim-1 disagreement with scalar_popoviciu";
        }
    }

    const double dt = seconds_since(t0);
    if (dt >= 30.0) {
        pass = false;
        detail = "runtime " + std::to_string(dt) + " s exceeds 30 s";
    }
    if (pass) {
        std::ostringstream os;
        os << "7 campaigns x 1000 trials clean, dim-1 oracle dev " << worst_dev << ", " << dt
           << " s";
        detail = os.str();
    }
    report(4, "convex Popoviciu holds with matching hypotheses", pass, detail);
}

// --- criterion 5: operator Hlawka ---------------------------------------------

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    CampaignConfig cfg;
    cfg.claim_id = "HLAWKA-OP";
    cfg.trials = 1000;
    cfg.dims = {1, 2, 4, 6};
    cfg.map_kind = "random_kraus:3";
    cfg.function_spec = "abs";
    cfg.interval = Interval(-3, 3);
    cfg.master_seed = 42;
    const auto rep = run_campaign(cfg);
    if (rep.verdict.violations != 0) {
        pass = false;
        detail = "selfadjoint campaign violated";
    }

    CampaignConfig psd = cfg;
    psd.interval = Interval(0, 3);
    const auto rep_psd = run_campaign(psd);
    if (rep_psd.min_gap < -1e-9 || rep_psd.max_gap > 1e-9) {
        pass = false;
        detail = "PSD-only campaign gap not identically zero";
    }

    const double dt = seconds_since(t0);
    if (dt >= 20.0) {
        pass = false;
        detail = "runtime " + std::to_string(dt) + " s exceeds 20 s";
    }
    if (pass) {
        std::ostringstream os;
        os << "min gap " << rep.min_gap << ", PSD gaps within [" << rep_psd.min_gap << ", "
           << rep_psd.max_gap << "], " << dt << " s";
        detail = os.str();
    }
    report(5, "operator Hlawka holds; PSD case collapses to equality", pass, detail);
}

// --- criterion 6: THM2.1 witness -----------------------------------------------

void criterion_6(const std::string& fixtures, const std::string& cli) {
    bool pass = true;
    std::string detail;

    const auto j = io::parse_file(fixtures + "/witness_thm21.json");
    std::string claim;
    const Instance inst = io::instance_from_json(j, &claim);
    const auto b = evaluate_claim("THM2.1", inst);
    if (std::abs(b.lhs - 4.0 / 9.0) > 1e-12 || std::abs(b.rhs - 8.0 / 9.0) > 1e-12 ||
        std::abs(b.gap + 4.0 / 9.0) > 1e-12) {
        pass = false;
        detail = "breakdown values off";
    }

    const int code = run_cli(cli + " check --claim THM2.1 --instance " + fixtures +
                             "/witness_thm21.json > acceptance_c6.out 2>&1");
    if (code != 1) {
        pass = false;
        detail = "cmd_check exit code " + std::to_string(code) + ", want 1";
    }

    const auto t = trace_popoviciu(inst);
    for (const char* label : {"2.2/2.4", "2.2/2.5", "2.2/2.6", "1.4/2.9", "1.4/2.10", "1.4/2.11"})
        if (std::abs(t.step(label).slack) > 1e-12) {
            pass = false;
            detail = std::string("step ") + label + " slack not zero";
        }
    if (std::abs(t.drop_halves + 1.0 / 3.0) > 1e-12) {
        pass = false;
        detail = "minC-2.8 drop is not -1/3";
    }
    if (pass)
        detail = "gap -4/9 exact, exit code 1, steps exact, minC-2.8 drop -1/3";
    report(6, "three-operator witness and proof-step localization", pass, detail);
}

// --- criterion 7: Bohr witness ---------------------------------------------------

void criterion_7(const std::string& fixtures, const std::string& cli) {
    bool pass = true;
    std::string detail;

    const auto j = io::parse_file(fixtures + "/bohr_super.json");
    std::string claim;
    const Instance inst = io::instance_from_json(j, &claim);
    const auto b = evaluate_claim("BOHR-SUPER", inst);
    if (std::abs(b.gap + 1.0) > 1e-12) {
        pass = false;
        detail = "gap is " + std::to_string(b.gap) + ", want -1";
    }
    const int code = run_cli(cli + " check --claim BOHR-SUPER --instance " + fixtures +
                             "/bohr_super.json > acceptance_c7.out 2>&1");
    if (code != 1) {
        pass = false;
        detail = "cmd_check exit code " + std::to_string(code) + ", want 1";
    }
    if (pass) detail = "gap -1 exact, exit code 1";
    report(7, "norm-level witness violates the stated bound", pass, detail);
}

// --- criterion 8: proof-step soundness -------------------------------------------

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    const char* maps[] = {"identity", "unitary", "pinching", "trace_average", "random_kraus:3"};
    const char* funcs[] = {"pow:2", "pow:3", "expc"};
    const int dims[] = {1, 2, 4, 6};
    double worst_slack = 0.0;
    for (int s = 0; s < 1000; ++s) {
        Rng rng(derive_seed(42, 50000 + static_cast<uint64_t>(s)));
        const int dim = dims[s % 4];
        const auto kind = MapKindSpec::parse(maps[s % 5]);
        const auto f = parse_function_spec(funcs[s % 3]);
        const Instance inst = gen_instance(rng, "THM2.1", dim, kind, f, Interval(0, 3));
        const auto t = trace_popoviciu(inst);
        for (const char* label :
             {"2.2/2.4", "2.2/2.5", "2.2/2.6", "1.4/2.9", "1.4/2.10", "1.4/2.11"}) {
            const auto& step = t.step(label);
            const double scale = std::max({1.0, std::abs(step.lhs), std::abs(step.rhs)});
            worst_slack = std::min(worst_slack, step.slack / scale);
            if (step.slack < -1e-9 * scale) {
                pass = false;
                detail = std::string("negative slack in ") + label;
            }
        }
        if (std::abs(t.t_half_sum) > 1e-10 || std::abs(t.t_sixth_sum) > 1e-10) {
            pass = false;
            detail = "t-vector sum did not vanish";
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 60.0) {
        pass = false;
        detail = "runtime " + std::to_string(dt) + " s exceeds 60 s";
    }
    if (pass) {
        std::ostringstream os;
        os << "1000 traces, most negative scaled slack " << worst_slack << ", " << dt << " s";
        detail = os.str();
    }
    report(8, "proof steps sound on hypothesis-satisfying instances", pass, detail);
}

// --- criterion 9: dimension-1 oracle equivalence -----------------------------------

void criterion_9() {
    bool pass = true;
    std::string detail;
    double worst = 0.0;
    for (int s = 0; s < 200; ++s) {
        Rng rng(derive_seed(42, 70000 + static_cast<uint64_t>(s)));
        const double a = rng.uniform(0, 3), b = rng.uniform(0, 3), d = rng.uniform(0, 3);
        for (const char* spec : {"pow:2", "pow:3"}) {
            const auto f = parse_function_spec(spec);
            auto fn = [&f](double t) { return f(t); };
            Instance inst;
            inst.a_ops = {HermitianMatrix::diagonal({a})};
            inst.b_ops = {HermitianMatrix::diagonal({b})};
            inst.d_ops = {HermitianMatrix::diagonal({d})};
            inst.map = PositiveUnitalMap::identity(1);
            inst.x = {cplx(1, 0)};
            inst.f = f;
            inst.spectrum_interval = Interval(0, 3);

            // independent scalar formulas, written out directly
            const double s1 = (b + d) / 2, s2 = (a + b) / 2, s3 = (a + d) / 2;
            const double twelve =
                (fn(a) + fn(b) + fn(d)) / 3.0 + fn((a + b + d) / 3.0) -
                (2.0 / 3.0) * (fn(s2) + fn(s1) + fn(s3)) -
                (1.0 / 3.0) * (fn(std::abs(a - s1)) + fn(std::abs(d - s2)) + fn(std::abs(b - s3)) +
                               fn(std::abs((2 * a - b - d) / 6)) + fn(std::abs((2 * d - a - b) / 6)) +
                               fn(std::abs((2 * b - a - d) / 6)));
            const double three = fn((a + b + d) / 3.0) + (fn(a) + fn(b) + fn(d)) / 3.0 -
                                 (2.0 / 3.0) * (fn((a + d) / 2) + fn((b + d) / 2) + fn((a + b) / 2));

            const double dev1 = std::abs(evaluate_popoviciu_superquadratic(inst).gap - twelve);
            const double dev2 = std::abs(evaluate_popoviciu_convex(inst, "PRP1").gap - three);
            worst = std::max({worst, dev1, dev2});

            Instance hx = inst;
            const double ha = rng.uniform(-3, 3), hb = rng.uniform(-3, 3), hd = rng.uniform(-3, 3);
            hx.a_ops = {HermitianMatrix::diagonal({ha})};
            hx.b_ops = {HermitianMatrix::diagonal({hb})};
            hx.d_ops = {HermitianMatrix::diagonal({hd})};
            hx.spectrum_interval = Interval(-3, 3);
            const double hlawka = std::abs(ha) + std::abs(hb) + std::abs(hd) +
                                  std::abs(ha + hb + hd) - std::abs(ha + hd) -
                                  std::abs(hd + hb) - std::abs(ha + hb);
            const double dev3 = std::abs(evaluate_hlawka_operator(hx).gap - hlawka);
            worst = std::max(worst, dev3);
            if (dev1 > 1e-12 || dev2 > 1e-12 || dev3 > 1e-12) pass = false;
        }
    }
    if (pass)
        detail = "400 THM2.1 + 400 PRP1 + 400 HLAWKA-OP comparisons, worst deviation " +
                 std::to_string(worst);
    else
        detail = "worst deviation " + std::to_string(worst);
    report(9, "operator evaluators equal scalar formulas at dimension 1", pass, detail);
}

// --- criterion 10: thread-count determinism -----------------------------------------

void criterion_10(const std::string& cli) {
    bool pass = true;
    std::string detail;
    const std::string base = cli +
                             " campaign --claim THM1 --trials 300 --dims 1,2,4 --map random_kraus:3"
                             " --f pow:2 --interval 0,3 --seed 42";
    const int c1 = run_cli("OPINEQ_THREADS=1 " + base +
                           " --out acceptance_t1.json --csv acceptance_t1.csv > acceptance_s1.txt 2>/dev/null");
    const int c8 = run_cli("OPINEQ_THREADS=8 " + base +
                           " --out acceptance_t8.json --csv acceptance_t8.csv > acceptance_s8.txt 2>/dev/null");
    if (c1 != 0 || c8 != 0) {
        pass = false;
        detail = "campaign exit codes " + std::to_string(c1) + "/" + std::to_string(c8);
    }
    if (read_text("acceptance_t1.json").empty() ||
        read_text("acceptance_t1.json") != read_text("acceptance_t8.json")) {
        pass = false;
        detail = "report JSON differs between 1 and 8 workers";
    }
    if (read_text("acceptance_t1.csv") != read_text("acceptance_t8.csv")) {
        pass = false;
        detail = "CSV differs between 1 and 8 workers";
    }
    if (read_text("acceptance_s1.txt") != read_text("acceptance_s8.txt")) {
        pass = false;
        detail = "summary line differs between 1 and 8 workers";
    }
    if (pass) detail = "report, CSV and summary byte-identical for 1 and 8 workers";
    report(10, "campaign outputs independent of worker count", pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    const std::string fixtures = argc > 1 ? argv[1] : "../fixtures";
    const std::string cli = argc > 2 ? argv[2] : "./opineq";

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6(fixtures, cli);
    criterion_7(fixtures, cli);
    criterion_8();
    criterion_9();
    criterion_10(cli);

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
