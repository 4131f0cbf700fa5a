#ifndef OPINEQ_JSON_IO_HPP
#define OPINEQ_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "opineq/claims.hpp"
#include "opineq/harness.hpp"

namespace opineq::io {

// insertion-ordered JSON keeps key order stable across writes
using json = nlohmann::ordered_json;

json matrix_to_json(const HermitianMatrix& m);
HermitianMatrix matrix_from_json(const json& j);

json complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const json& j);

json vector_to_json(const std::vector<cplx>& x);
std::vector<cplx> vector_from_json(const json& j);

json interval_to_json(const Interval& v);
Interval interval_from_json(const json& j);

json map_to_json(const PositiveUnitalMap& phi);
PositiveUnitalMap map_from_json(const json& j);

json family_to_json(const MapFamily& fam);
MapFamily family_from_json(const json& j);

json instance_to_json(const Instance& inst, const std::string& claim_id);
/// Reads an instance; the file's "claim" tag (when present) lands in
/// claim_out.
Instance instance_from_json(const json& j, std::string* claim_out);

json breakdown_to_json(const TermBreakdown& b);
json trace_to_json(const StepTrace& t);

json config_to_json(const CampaignConfig& cfg);
CampaignConfig config_from_json(const json& j);

json report_to_json(const CampaignReport& report);

std::string breakdown_pretty(const TermBreakdown& b);
std::string trace_pretty(const StepTrace& t);
std::string campaign_summary_line(const CampaignReport& report);

json parse_file(const std::string& path);   // throws ParseError
void write_file(const std::string& path, const json& j);

} // namespace opineq::io

#endif
