#ifndef STABLEPRED_JSON_IO_HPP
#define STABLEPRED_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "stablepred/classes.hpp"
#include "stablepred/experiments.hpp"
#include "stablepred/privatepred.hpp"
#include "stablepred/stable.hpp"

namespace stablepred {

// Ordered JSON keeps output files byte-stable for a fixed config and seed.
using json = nlohmann::ordered_json;

// {"kind": "thresholds"|"point"|"explicit", "domain_size": n, "vectors": [[bits]]?}
json class_to_json(const HypothesisClass& h);
HypothesisClass class_from_json(const json& j);

// Dataset files: {"domain_size": n, "pairs": [[x, y], ...]}
json sample_to_json(const LabeledSample& s, int domain_size);
LabeledSample sample_from_json(const json& j, int* domain_size_out = nullptr);

json precondition_report_to_json(const PreconditionReport& r);
json stability_report_to_json(const StabilityReport& r);
json privacy_report_to_json(const PrivacyReport& r);
json lower_bound_report_to_json(const LowerBoundReport& r);
json amplification_report_to_json(const AmplificationReport& r);

// Throws ConfigError when j holds a key outside `allowed`.
void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context);

}  // namespace stablepred

#endif
