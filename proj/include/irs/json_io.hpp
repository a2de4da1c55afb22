#ifndef IRS_JSON_IO_HPP
#define IRS_JSON_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "irs/appearance.hpp"
#include "irs/finite_action.hpp"
#include "irs/glue.hpp"
#include "irs/measure.hpp"
#include "irs/schedule.hpp"
#include "irs/word.hpp"

namespace irs {

using nlohmann::json;

// { "size": N, "perms": { "0": [images...], ... } }; absent generators act
// trivially.
json action_to_json(const FiniteAction& a);
FiniteAction action_from_json(const json& j);

// { "horizon": M, "f": [...], "a": {...}, "K": {...}, "g": {...} }
json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const json& j);

// Edge lists per generator up to max_gen; points appear as "w:j:i"/"u:j".
json truncation_to_json(const GluedTruncation& b, std::uint32_t max_gen);

// The block/link/chain skeleton plus the top cycles of the listed
// generators, in the layout of the construction picture.
std::string truncation_to_dot(const GluedTruncation& b,
                              const std::vector<std::uint32_t>& top_generators);

json density_report_to_json(const DensityReport& r);
std::string density_report_csv_header();
std::string density_report_csv_row(const DensityReport& r);

json clopen_to_json(const ClopenSet& c);
ClopenSet clopen_from_json(const json& j);

json witness_to_json(const NavigationWitness& w);
json embedding_to_json(const Embedding& e, const GluedTruncation& b);

}  // namespace irs

#endif
