#include "opineq/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace opineq::io {

namespace {

json entries_to_json(const ComplexMatrix& m) {
    json arr = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            arr.push_back(json::array({m.at(i, j).real(), m.at(i, j).imag()}));
    return arr;
}

std::vector<cplx> entries_from_json(const json& arr, size_t expected) {
    if (!arr.is_array() || arr.size() != expected)
        throw ParseError("matrix entries: expected " + std::to_string(expected) + " [re,im] pairs");
    std::vector<cplx> out;
    out.reserve(expected);
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2) throw ParseError("matrix entry is not an [re,im] pair");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

json matrix_to_json(const HermitianMatrix& m) {
    json j;
    j["dim"] = m.dim();
    j["entries"] = entries_to_json(m.as_complex());
    return j;
}

HermitianMatrix matrix_from_json(const json& j) {
    if (!j.contains("dim")) throw ParseError("operator matrix needs a \"dim\" field");
    const int n = j.at("dim").get<int>();
    if (n < 1) throw ParseError("operator matrix needs dim >= 1");
    ComplexMatrix m(n, n, entries_from_json(j.at("entries"), static_cast<size_t>(n) * n));
    return hermitize(m);
}

json complex_matrix_to_json(const ComplexMatrix& m) {
    json j;
    if (m.is_square()) {
        j["dim"] = m.rows();
    } else {
        j["rows"] = m.rows();
        j["cols"] = m.cols();
    }
    j["entries"] = entries_to_json(m);
    return j;
}

ComplexMatrix complex_matrix_from_json(const json& j) {
    int rows = 0;
    int cols = 0;
    if (j.contains("dim")) {
        rows = cols = j.at("dim").get<int>();
    } else {
        rows = j.at("rows").get<int>();
        cols = j.at("cols").get<int>();
    }
    if (rows < 1 || cols < 1) throw ParseError("matrix needs positive dimensions");
    return ComplexMatrix(rows, cols, entries_from_json(j.at("entries"),
                                                       static_cast<size_t>(rows) * cols));
}

json vector_to_json(const std::vector<cplx>& x) {
    json arr = json::array();
    for (const cplx& v : x) arr.push_back(json::array({v.real(), v.imag()}));
    return arr;
}

std::vector<cplx> vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("vector must be an array of [re,im] pairs");
    std::vector<cplx> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw ParseError("vector entry is not an [re,im] pair");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

json interval_to_json(const Interval& v) { return json::array({v.lo, v.hi}); }

Interval interval_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("interval must be [lo, hi]");
    return Interval(j[0].get<double>(), j[1].get<double>());
}

json map_to_json(const PositiveUnitalMap& phi) {
    if (phi.is_unchecked())
        throw Error("unchecked maps have no Kraus form and cannot be serialized");
    json j;
    j["dim_h"] = phi.dim_h();
    j["dim_k"] = phi.dim_k();
    json kraus = json::array();
    for (const auto& v : phi.kraus_ops()) kraus.push_back(complex_matrix_to_json(v));
    j["kraus"] = kraus;
    j["unital"] = phi.is_unital();
    return j;
}

PositiveUnitalMap map_from_json(const json& j) {
    const int dim_h = j.at("dim_h").get<int>();
    const int dim_k = j.at("dim_k").get<int>();
    std::vector<ComplexMatrix> ops;
    for (const auto& k : j.at("kraus")) ops.push_back(complex_matrix_from_json(k));
    const bool unital = j.value("unital", false);
    PositiveUnitalMap phi = make_kraus(std::move(ops), unital);
    if (phi.dim_h() != dim_h || phi.dim_k() != dim_k)
        throw ParseError("map dims disagree with its Kraus blocks");
    return phi;
}

json family_to_json(const MapFamily& fam) {
    json arr = json::array();
    for (const auto& m : fam.maps()) arr.push_back(map_to_json(m));
    return arr;
}

MapFamily family_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("family must be a non-empty array of maps");
    std::vector<PositiveUnitalMap> maps;
    for (const auto& m : j) maps.push_back(map_from_json(m));
    return MapFamily(std::move(maps));
}

namespace {

json operator_slot_to_json(const std::vector<HermitianMatrix>& ops, bool as_list) {
    if (as_list) {
        json arr = json::array();
        for (const auto& m : ops) arr.push_back(matrix_to_json(m));
        return arr;
    }
    return matrix_to_json(ops.front());
}

std::vector<HermitianMatrix> operator_slot_from_json(const json& j) {
    std::vector<HermitianMatrix> out;
    if (j.is_array()) {
        for (const auto& m : j) out.push_back(matrix_from_json(m));
    } else {
        out.push_back(matrix_from_json(j));
    }
    return out;
}

} // namespace

json instance_to_json(const Instance& inst, const std::string& claim_id) {
    json j;
    if (!claim_id.empty()) j["claim"] = claim_id;
    const bool as_list = inst.family.has_value();
    json ops;
    if (!inst.a_ops.empty()) ops["A"] = operator_slot_to_json(inst.a_ops, as_list);
    if (!inst.b_ops.empty()) ops["B"] = operator_slot_to_json(inst.b_ops, as_list);
    if (!inst.d_ops.empty()) ops["D"] = operator_slot_to_json(inst.d_ops, as_list);
    j["operators"] = ops;
    if (inst.family)
        j["family"] = family_to_json(*inst.family);
    else if (inst.map)
        j["map"] = map_to_json(*inst.map);
    if (inst.has_vector()) j["x"] = vector_to_json(inst.x);
    j["f"] = inst.f.name();
    j["interval"] = interval_to_json(inst.spectrum_interval);
    return j;
}

Instance instance_from_json(const json& j, std::string* claim_out) {
    Instance inst;
    if (claim_out) *claim_out = j.value("claim", std::string{});
    if (!j.contains("operators")) throw ParseError("instance needs an \"operators\" object");
    const json& ops = j.at("operators");
    if (ops.contains("A")) inst.a_ops = operator_slot_from_json(ops.at("A"));
    if (ops.contains("B")) inst.b_ops = operator_slot_from_json(ops.at("B"));
    if (ops.contains("D")) inst.d_ops = operator_slot_from_json(ops.at("D"));
    if (j.contains("family"))
        inst.family = family_from_json(j.at("family"));
    else if (j.contains("map"))
        inst.map = map_from_json(j.at("map"));
    if (j.contains("x")) inst.x = vector_from_json(j.at("x"));
    if (j.contains("f")) inst.f = parse_function_spec(j.at("f").get<std::string>());
    if (j.contains("interval")) inst.spectrum_interval = interval_from_json(j.at("interval"));
    return inst;
}

json breakdown_to_json(const TermBreakdown& b) {
    json j;
    j["claim"] = b.claim_id;
    json hyp = json::array();
    for (const auto& [name, pass] : b.hypothesis_report)
        hyp.push_back(json{{"name", name}, {"pass", pass}});
    j["hypotheses"] = hyp;
    json lhs_terms;
    for (const auto& [name, v] : b.lhs_terms) lhs_terms[name] = v;
    json rhs_terms;
    for (const auto& [name, v] : b.rhs_terms) rhs_terms[name] = v;
    j["lhs_terms"] = lhs_terms;
    j["rhs_terms"] = rhs_terms;
    j["lhs"] = b.lhs;
    j["rhs"] = b.rhs;
    j["gap"] = b.gap;
    return j;
}

json trace_to_json(const StepTrace& t) {
    json j;
    j["claim"] = "THM2.1";
    j["s"] = json::array({t.s[0], t.s[1], t.s[2]});
    j["c_s"] = json::array({t.c_s[0], t.c_s[1], t.c_s[2]});
    j["c"] = t.c;
    json steps = json::array();
    for (const auto& s : t.steps) {
        steps.push_back(json{{"label", s.label},
                             {"lhs", s.lhs},
                             {"rhs", s.rhs},
                             {"slack", s.slack},
                             {"min_c", s.min_c}});
    }
    j["steps"] = steps;
    j["drop_halves"] = t.drop_halves;
    j["drop_sixths"] = t.drop_sixths;
    j["t_half_sum"] = t.t_half_sum;
    j["t_sixth_sum"] = t.t_sixth_sum;
    return j;
}

json config_to_json(const CampaignConfig& cfg) {
    json j;
    j["claim"] = cfg.claim_id;
    j["trials"] = cfg.trials;
    j["dims"] = cfg.dims;
    j["map_kind"] = cfg.map_kind;
    j["f"] = cfg.function_spec;
    j["interval"] = interval_to_json(cfg.interval);
    j["seed"] = cfg.master_seed;
    j["threshold_abs"] = cfg.threshold_abs;
    j["threshold_rel"] = cfg.threshold_rel;
    if (cfg.inject) j["inject"] = instance_to_json(*cfg.inject, cfg.claim_id);
    return j;
}

CampaignConfig config_from_json(const json& j) {
    CampaignConfig cfg;
    cfg.claim_id = j.at("claim").get<std::string>();
    cfg.trials = j.at("trials").get<int>();
    cfg.dims = j.at("dims").get<std::vector<int>>();
    cfg.map_kind = j.value("map_kind", std::string{"identity"});
    cfg.function_spec = j.value("f", std::string{"pow:2"});
    if (j.contains("interval")) cfg.interval = interval_from_json(j.at("interval"));
    cfg.master_seed = j.value("seed", 0ull);
    cfg.threshold_abs = j.value("threshold_abs", 1e-8);
    cfg.threshold_rel = j.value("threshold_rel", 1e-8);
    if (j.contains("inject")) cfg.inject = instance_from_json(j.at("inject"), nullptr);
    return cfg;
}

json report_to_json(const CampaignReport& report) {
    json j;
    j["config"] = config_to_json(report.config);
    json verdict;
    verdict["claim"] = report.verdict.claim_id;
    verdict["trials"] = report.verdict.trials;
    verdict["violations"] = report.verdict.violations;
    verdict["worst_gap"] = report.verdict.worst_gap;
    verdict["skipped_hypothesis_failures"] = report.verdict.skipped_hypothesis_failures;
    if (report.verdict.witness)
        verdict["witness"] = instance_to_json(*report.verdict.witness, report.verdict.claim_id);
    j["verdict"] = verdict;
    j["histogram"] = json{{"edges", report.histogram_edges}, {"counts", report.histogram_counts}};
    j["min_gap"] = report.min_gap;
    j["median_gap"] = report.median_gap;
    j["max_gap"] = report.max_gap;
    json offenders = json::array();
    for (const auto& o : report.offenders)
        offenders.push_back(json{{"trial", o.trial},
                                 {"gap", o.gap},
                                 {"instance", instance_to_json(o.instance, report.verdict.claim_id)}});
    j["offenders"] = offenders;
    return j;
}

std::string breakdown_pretty(const TermBreakdown& b) {
    std::ostringstream os;
    os << "claim " << b.claim_id << "\n";
    if (!b.hypothesis_report.empty()) {
        os << "hypotheses:";
        for (const auto& [name, pass] : b.hypothesis_report)
            os << "  " << name << " [" << (pass ? "ok" : "FAIL") << "]";
        os << "\n";
    }
    os << "lhs terms:\n";
    for (const auto& [name, v] : b.lhs_terms)
        os << "  " << std::left << std::setw(16) << name << " " << fmt(v) << "\n";
    os << "rhs terms:\n";
    for (const auto& [name, v] : b.rhs_terms)
        os << "  " << std::left << std::setw(16) << name << " " << fmt(v) << "\n";
    os << "lhs = " << fmt(b.lhs) << "  rhs = " << fmt(b.rhs) << "  gap = " << fmt(b.gap) << "\n";
    return os.str();
}

std::string trace_pretty(const StepTrace& t) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "step" << std::setw(18) << "lhs" << std::setw(18) << "rhs"
       << std::setw(18) << "slack" << "\n";
    for (const auto& s : t.steps) {
        os << std::left << std::setw(12) << s.label << std::setw(18) << fmt(s.lhs) << std::setw(18)
           << fmt(s.rhs) << std::setw(18) << fmt(s.slack);
        if (s.min_c) os << " [minC]";
        os << "\n";
    }
    os << "s = (" << fmt(t.s[0]) << ", " << fmt(t.s[1]) << ", " << fmt(t.s[2]) << ")"
       << "  C_s = (" << fmt(t.c_s[0]) << ", " << fmt(t.c_s[1]) << ", " << fmt(t.c_s[2]) << ")"
       << "  C = " << fmt(t.c) << "\n";
    os << "minC-2.8 drop = " << fmt(t.drop_halves) << "  minC-2.13 drop = " << fmt(t.drop_sixths)
       << "\n";
    os << "t-half sum = " << fmt(t.t_half_sum) << "  t-sixth sum = " << fmt(t.t_sixth_sum) << "\n";
    return os.str();
}

std::string campaign_summary_line(const CampaignReport& report) {
    std::ostringstream os;
    os << "claim=" << report.verdict.claim_id << " trials=" << report.verdict.trials
       << " violations=" << report.verdict.violations << " worst_gap=" << fmt(report.verdict.worst_gap)
       << " skipped=" << report.verdict.skipped_hypothesis_failures;
    return os.str();
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("cannot parse " + path + ": " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

} // namespace opineq::io
