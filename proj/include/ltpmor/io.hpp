#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ltpmor/lti.hpp"
#include "ltpmor/ltp.hpp"
#include "ltpmor/mor.hpp"
#include "ltpmor/sim.hpp"
#include "ltpmor/types.hpp"

namespace ltpmor::io {

using json = nlohmann::json;

/// Writes content to path via a temporary file plus rename, so readers never
/// observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// %.17g formatting used by every CSV column.
std::string format_double(double v);

// --- LTI system file: {"n","m","p","A":{"re",["im"]},"B":...,"C":...} ------
json lti_to_json(const lti::LtiSystem& sys);
lti::LtiSystem lti_from_json(const json& j);
void save_lti(const std::string& path, const lti::LtiSystem& sys);
lti::LtiSystem load_lti(const std::string& path);

// --- LTP system file (e^{+i k w0 t} convention): ---------------------------
// {"omega0","n","N","Q":{...},"b_coeffs":[{"k","re",["im"]},...],"c_coeffs":[...]}
json ltp_to_json(const ltp::FloquetFourierSystem& sys);
ltp::FloquetFourierSystem ltp_from_json(const json& j);
void save_ltp(const std::string& path, const ltp::FloquetFourierSystem& sys);
ltp::FloquetFourierSystem load_ltp(const std::string& path);

/// True when the file at `path` holds an LTP system ("Q" plus "omega0"),
/// false for an LTI file ("A").
bool is_ltp_file(const json& j);

// --- Periodic-matrix file: {"T","grid","A_samples","b_samples","c_samples"} -
struct PeriodicSystemData {
  double period = 0.0;
  std::vector<RealMatrix> A_samples;
  std::vector<RealVector> b_samples;
  std::vector<RealVector> c_samples;
};
PeriodicSystemData load_periodic(const std::string& path);
void save_periodic(const std::string& path, const PeriodicSystemData& data);

// --- Reduction report -------------------------------------------------------
json reduction_report_to_json(const mor::ReductionReport& report);
/// Throws IoError when a required field is missing or mistyped.
void validate_reduction_report(const json& j);

// --- Trace CSV: time,u,y plus optional y_ref,abs_err ------------------------
std::string trace_to_csv(const sim::SimulationTrace& trace,
                         const std::vector<double>* y_ref = nullptr);

}  // namespace ltpmor::io
