#pragma once

#include <string>

#include "json.hpp"
#include "kgnf/bounds.hpp"
#include "kgnf/cyclic.hpp"
#include "kgnf/dynamics.hpp"
#include "kgnf/linearize.hpp"
#include "kgnf/normalform.hpp"

namespace kgnf {

using json = nlohmann::ordered_json;

/// {"kind", "n" (null when free), "terms": [{"sites", "xexp", "yexp", "re", "im"}]},
/// terms in graded lexicographic order.
json poly_to_json(const Poly& f);
Poly poly_from_json(const json& j);

json cyclic_to_json(const CyclicFn& F);
CyclicFn cyclic_from_json(const json& j);

json decay_to_json(const DecayProfile& p);
json linear_to_json(const LinearNF& nf);
json normalform_to_json(const NormalFormResult& res);
json gdnls_to_json(const GdnlsModel& g, const StandardDnls& ref);
json constants_to_json(const ConstantsRecord& c);
json bound_report_to_json(const BoundReport& rep);
json deformation_to_json(const DeformationReport& rep);
json drift_to_json(const DriftReport& rep);

/// Writes text to path through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace kgnf
