#pragma once

// JSON encodings of the library's records and CSV export of grid
// eigenfunctions. Complex matrices are nested rows of [re, im] pairs.

#include <string>

#include "json.hpp"

#include "qudit_wells/continuum_oracle.hpp"
#include "qudit_wells/dynamics.hpp"
#include "qudit_wells/gate_synthesis.hpp"
#include "qudit_wells/operator_core.hpp"
#include "qudit_wells/well_models.hpp"

namespace qw {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix& m);
/// Throws std::invalid_argument unless `j` is a non-empty square array of [re, im] pairs.
ComplexMatrix matrix_from_json(const Json& j);

Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

Json to_json(const HamiltonianSpec& s);
HamiltonianSpec hamiltonian_spec_from_json(const Json& j);

Json to_json(const PerturbationSpec& s);
PerturbationSpec perturbation_spec_from_json(const Json& j);

Json to_json(const PiecewisePotential& p);
PiecewisePotential potential_from_json(const Json& j);

Json to_json(const PulseSchedule& s);
PulseSchedule pulse_schedule_from_json(const Json& j);

Json to_json(const GateReport& r);
GateReport gate_report_from_json(const Json& j);

Json to_json(const AxisAngle& a);
Json to_json(const Spectrum& s);
Json to_json(const RevivalReport& r);
Json to_json(const GridSolution& s);
Json to_json(const WkbResult& r);
Json to_json(const ReductionReport& r);
Json to_json(const BandFit& f);
Json to_json(const AsymmetricReport& r);
Json to_json(const TransferReport& r);

/// Text of a double with 17 significant digits.
std::string format_number(double x);

/// CSV with header x,V,psi_0..psi_{k-1}.
std::string grid_solution_csv(const GridSolution& s);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qw
