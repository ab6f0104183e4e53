#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "emr/ergodic_opt.hpp"
#include "emr/interval_maps.hpp"
#include "emr/locally_constant.hpp"
#include "emr/realization.hpp"
#include "emr/symbolic.hpp"
#include "emr/thermo.hpp"

namespace emr {

using json = nlohmann::ordered_json;

// unreadable files, malformed JSON, schema violations
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json to_json(const PotentialTable& phi);
PotentialTable potential_from_json(const json& j);

json to_json(const PiecewiseMap& f);
PiecewiseMap map_from_json(const json& j);

json to_json(const Word& w);
json to_json(const ExpansionCertificate& c);
json to_json(const DistortionCertificate& c);
json to_json(const RealizationCertificate& c);
json to_json(const PeriodicOrbitMeasure& m);
json to_json(const OptimizationResult& r);
json to_json(const SubAction& s);
json to_json(const FreezeReport& r);
json to_json(const LcApproxReport& r);
json to_json(const LipschitzPrecheck& r);
json to_json(const SupportReport& r);

json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& j);

PotentialTable load_potential(const std::string& path);
PiecewiseMap load_map(const std::string& path);

std::string pressure_csv(const std::vector<PressureSample>& curve);

}  // namespace emr
