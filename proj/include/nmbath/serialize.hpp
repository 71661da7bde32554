// serialize.hpp: JSON and CSV encodings of model and result types
//
// Complex numbers are [re, im] pairs; a bare number reads as a real value.
// Matrices are arrays of rows. Every to_json has a matching from_json.

#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "nmbath/bounds.hpp"
#include "nmbath/chainmap.hpp"
#include "nmbath/dynamics.hpp"
#include "nmbath/pseudomode.hpp"
#include "nmbath/spectral.hpp"

namespace nmbath::serialize {

using json = nlohmann::json;

// Type or shape problems throw ConfigError naming the JSON path.
std::complex<double> complex_from_json(const json& j, const std::string& path);
json complex_to_json(std::complex<double> z);
// Finite values as numbers; inf and nan as the strings "inf", "-inf", "nan".
json number_to_json(double x);
dynamics::Matrix matrix_from_json(const json& j, const std::string& path);
json matrix_to_json(const dynamics::Matrix& m);
dynamics::Vector vector_from_json(const json& j, const std::string& path);
json vector_to_json(const dynamics::Vector& v);

// {"type": "lorentzian_sum", "terms": [{"strength", "center", "width"}]}
// {"type": "flat", "amplitude"} | {"type": "harmonic_sum", "terms": [{"amplitude", "delay"}]}
// {"type": "tabulated", "omega": [...], "gamma": [...]}
spectral::CouplingSpec coupling_from_json(const json& j, const std::string& path = "coupling");
json coupling_to_json(const spectral::CouplingSpec& c);

// {"coupling": ..., "cutoff": omega_c | null}
spectral::Environment environment_from_json(const json& j, const std::string& path = "environment");
json environment_to_json(const spectral::Environment& e);

pseudomode::LorentzianFit fit_from_json(const json& j, const std::string& path = "fit");
json fit_to_json(const pseudomode::LorentzianFit& f);
json fit_bound_to_json(const pseudomode::FitErrorBound& b);
pseudomode::FitErrorBound fit_bound_from_json(const json& j, const std::string& path = "bound");

pseudomode::PseudomodeModel pseudomode_from_json(const json& j, const std::string& path = "pseudomode");
json pseudomode_to_json(const pseudomode::PseudomodeModel& p);

chainmap::ChainModel chain_from_json(const json& j, const std::string& path = "chain");
json chain_to_json(const chainmap::ChainModel& c);
chainmap::GaussRule gauss_rule_from_json(const json& j, const std::string& path = "gauss_rule");
json gauss_rule_to_json(const chainmap::GaussRule& g);

// {"H": matrix} or {"schedule": [{"t", "H"}]}, plus {"L": matrix}
dynamics::SystemModel system_from_json(const json& j, const std::string& path = "system");
json system_to_json(const dynamics::SystemModel& s);

// Everything except the state series, which lives in the CSV.
json trajectory_metadata(const dynamics::TrajectoryResult& r);

json certificate_to_json(const bounds::CutoffCertificate& c);
bounds::CutoffCertificate certificate_from_json(const json& j, const std::string& path = "certificate");

// RFC-4180 CSV, 17 significant digits. Columns: t, re_rho_i_j, im_rho_i_j (row-major), leakage,
// then one column per extra series.
struct Column {
    std::string name;
    std::vector<double> values;
};
void write_trajectory_csv(std::ostream& os, const dynamics::TrajectoryResult& r, const std::vector<Column>& extra = {});
// Inverse of write_trajectory_csv; extra columns are returned in `extra`.
dynamics::TrajectoryResult read_trajectory_csv(std::istream& is, std::vector<Column>* extra = nullptr);

std::string format_double(double x);

} // namespace nmbath::serialize
