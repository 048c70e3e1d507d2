#include "ltpmor/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ltpmor/errors.hpp"

namespace ltpmor::io {

namespace {

json matrix_to_json(const Matrix& M) {
  json re = json::array(), im = json::array();
  bool has_imag = false;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      re_row.push_back(M(i, j).real());
      im_row.push_back(M(i, j).imag());
      if (M(i, j).imag() != 0.0) has_imag = true;
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  json out;
  out["re"] = std::move(re);
  if (has_imag) out["im"] = std::move(im);
  return out;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array()) {
    throw IoError(std::string(what) + ": expected {\"re\": [[..]], ...}");
  }
  const json& re = j["re"];
  const std::size_t rows = re.size();
  if (rows == 0) throw IoError(std::string(what) + ": empty matrix");
  const std::size_t cols = re[0].size();
  Matrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const bool has_imag = j.contains("im");
  for (std::size_t i = 0; i < rows; ++i) {
    if (!re[i].is_array() || re[i].size() != cols) {
      throw IoError(std::string(what) + ": ragged \"re\" rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double real = re[i][c].get<double>();
      double imag = 0.0;
      if (has_imag) {
        if (j["im"].size() != rows || !j["im"][i].is_array() ||
            j["im"][i].size() != cols) {
          throw IoError(std::string(what) + ": \"im\" shape mismatch");
        }
        imag = j["im"][i][c].get<double>();
      }
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          Complex(real, imag);
    }
  }
  return M;
}

json vector_entry_to_json(int k, const Vector& v) {
  json out;
  out["k"] = k;
  json re = json::array(), im = json::array();
  bool has_imag = false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
    if (v(i).imag() != 0.0) has_imag = true;
  }
  out["re"] = std::move(re);
  if (has_imag) out["im"] = std::move(im);
  return out;
}

Vector vector_entry_from_json(const json& j, Eigen::Index n, const char* what) {
  if (!j.contains("re") || !j["re"].is_array() ||
      static_cast<Eigen::Index>(j["re"].size()) != n) {
    throw IoError(std::string(what) + ": coefficient \"re\" length mismatch");
  }
  Vector v(n);
  const bool has_imag = j.contains("im");
  if (has_imag && static_cast<Eigen::Index>(j["im"].size()) != n) {
    throw IoError(std::string(what) + ": coefficient \"im\" length mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(j["re"][static_cast<std::size_t>(i)].get<double>(),
                   has_imag ? j["im"][static_cast<std::size_t>(i)].get<double>()
                            : 0.0);
  }
  return v;
}

json parse(const std::string& text, const std::string& path) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("failed to parse JSON in " + path);
  return j;
}

std::vector<Vector> coeff_list_from_json(const json& arr, int N, Eigen::Index n,
                                         const char* what) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(2 * N + 1)) {
    throw IoError(std::string(what) + ": expected exactly 2N+1 coefficients");
  }
  std::vector<Vector> coeffs(static_cast<std::size_t>(2 * N + 1));
  std::vector<bool> seen(static_cast<std::size_t>(2 * N + 1), false);
  for (const json& entry : arr) {
    if (!entry.contains("k") || !entry["k"].is_number_integer()) {
      throw IoError(std::string(what) + ": coefficient entry missing \"k\"");
    }
    const int k = entry["k"].get<int>();
    if (k < -N || k > N) {
      throw IoError(std::string(what) + ": index k outside -N..N");
    }
    if (seen[static_cast<std::size_t>(k + N)]) {
      throw IoError(std::string(what) + ": duplicate index k");
    }
    seen[static_cast<std::size_t>(k + N)] = true;
    coeffs[static_cast<std::size_t>(k + N)] =
        vector_entry_from_json(entry, n, what);
  }
  return coeffs;
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename to " + path + " failed: " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json lti_to_json(const lti::LtiSystem& sys) {
  json j;
  j["n"] = sys.n();
  j["m"] = sys.m();
  j["p"] = sys.p();
  j["A"] = matrix_to_json(sys.A);
  j["B"] = matrix_to_json(sys.B);
  j["C"] = matrix_to_json(sys.C);
  return j;
}

lti::LtiSystem lti_from_json(const json& j) {
  for (const char* key : {"n", "m", "p", "A", "B", "C"}) {
    if (!j.contains(key)) {
      throw IoError(std::string("LTI file: missing field \"") + key + "\"");
    }
  }
  Matrix A = matrix_from_json(j["A"], "LTI A");
  Matrix B = matrix_from_json(j["B"], "LTI B");
  Matrix C = matrix_from_json(j["C"], "LTI C");
  const int n = j["n"].get<int>();
  const int m = j["m"].get<int>();
  const int p = j["p"].get<int>();
  if (A.rows() != n || A.cols() != n || B.rows() != n || B.cols() != m ||
      C.rows() != p || C.cols() != n) {
    throw IoError("LTI file: matrix shapes disagree with n/m/p");
  }
  return lti::LtiSystem(std::move(A), std::move(B), std::move(C));
}

void save_lti(const std::string& path, const lti::LtiSystem& sys) {
  atomic_write_file(path, lti_to_json(sys).dump(2) + "\n");
}

lti::LtiSystem load_lti(const std::string& path) {
  return lti_from_json(parse(read_file(path), path));
}

json ltp_to_json(const ltp::FloquetFourierSystem& sys) {
  json j;
  j["omega0"] = sys.omega0();
  j["n"] = sys.dim();
  j["N"] = sys.order();
  j["Q"] = matrix_to_json(sys.Q());
  json bc = json::array(), cc = json::array();
  for (int k = -sys.order(); k <= sys.order(); ++k) {
    bc.push_back(vector_entry_to_json(k, sys.b(k)));
    cc.push_back(vector_entry_to_json(k, sys.c(k)));
  }
  j["b_coeffs"] = std::move(bc);
  j["c_coeffs"] = std::move(cc);
  return j;
}

ltp::FloquetFourierSystem ltp_from_json(const json& j) {
  for (const char* key : {"omega0", "n", "N", "Q", "b_coeffs", "c_coeffs"}) {
    if (!j.contains(key)) {
      throw IoError(std::string("LTP file: missing field \"") + key + "\"");
    }
  }
  Matrix Q = matrix_from_json(j["Q"], "LTP Q");
  const int n = j["n"].get<int>();
  const int N = j["N"].get<int>();
  if (Q.rows() != n || Q.cols() != n) {
    throw IoError("LTP file: Q shape disagrees with n");
  }
  if (N < 0) throw IoError("LTP file: negative N");
  std::vector<Vector> b =
      coeff_list_from_json(j["b_coeffs"], N, n, "LTP b_coeffs");
  std::vector<Vector> c =
      coeff_list_from_json(j["c_coeffs"], N, n, "LTP c_coeffs");
  return ltp::FloquetFourierSystem(std::move(Q), j["omega0"].get<double>(),
                                   std::move(b), std::move(c));
}

void save_ltp(const std::string& path, const ltp::FloquetFourierSystem& sys) {
  atomic_write_file(path, ltp_to_json(sys).dump(2) + "\n");
}

ltp::FloquetFourierSystem load_ltp(const std::string& path) {
  return ltp_from_json(parse(read_file(path), path));
}

bool is_ltp_file(const json& j) {
  return j.contains("Q") && j.contains("omega0");
}

PeriodicSystemData load_periodic(const std::string& path) {
  json j = parse(read_file(path), path);
  for (const char* key : {"T", "grid", "A_samples", "b_samples", "c_samples"}) {
    if (!j.contains(key)) {
      throw IoError(std::string("periodic file: missing field \"") + key +
                    "\"");
    }
  }
  PeriodicSystemData data;
  data.period = j["T"].get<double>();
  const std::size_t grid = j["grid"].get<std::size_t>();
  const json& As = j["A_samples"];
  const json& bs = j["b_samples"];
  const json& cs = j["c_samples"];
  if (As.size() != grid || bs.size() != grid || cs.size() != grid) {
    throw IoError("periodic file: sample counts disagree with grid");
  }
  for (std::size_t i = 0; i < grid; ++i) {
    Matrix A = matrix_from_json(As[i].is_object() ? As[i]
                                                  : json{{"re", As[i]}},
                                "periodic A sample");
    if (A.imag().cwiseAbs().maxCoeff() != 0.0) {
      throw IoError("periodic file: A samples must be real");
    }
    data.A_samples.push_back(A.real());
    const Eigen::Index n = A.rows();
    json bj = bs[i].is_object() ? bs[i] : json{{"re", bs[i]}};
    json cj = cs[i].is_object() ? cs[i] : json{{"re", cs[i]}};
    data.b_samples.push_back(
        vector_entry_from_json(bj, n, "periodic b sample").real());
    data.c_samples.push_back(
        vector_entry_from_json(cj, n, "periodic c sample").real());
  }
  return data;
}

void save_periodic(const std::string& path, const PeriodicSystemData& data) {
  json j;
  j["T"] = data.period;
  j["grid"] = data.A_samples.size();
  json As = json::array(), bs = json::array(), cs = json::array();
  for (const auto& A : data.A_samples) {
    As.push_back(matrix_to_json(A.cast<Complex>()));
  }
  for (const auto& b : data.b_samples) {
    json e = vector_entry_to_json(0, b.cast<Complex>());
    e.erase("k");
    bs.push_back(std::move(e));
  }
  for (const auto& c : data.c_samples) {
    json e = vector_entry_to_json(0, c.cast<Complex>());
    e.erase("k");
    cs.push_back(std::move(e));
  }
  j["A_samples"] = std::move(As);
  j["b_samples"] = std::move(bs);
  j["c_samples"] = std::move(cs);
  atomic_write_file(path, j.dump(2) + "\n");
}

json reduction_report_to_json(const mor::ReductionReport& report) {
  json j;
  j["r"] = report.r;
  j["N"] = report.N;
  j["method"] = report.method;
  j["mimo_error"] =
      std::isfinite(report.mimo_error) ? json(report.mimo_error) : json();
  j["ltp_error"] = report.ltp_error && std::isfinite(*report.ltp_error)
                       ? json(*report.ltp_error)
                       : json();
  j["bound"] = std::isfinite(report.bound) ? json(report.bound) : json();
  if (report.fourier_truncation_error) {
    j["fourier_truncation_error"] = *report.fourier_truncation_error;
  }
  j["irka"] = {{"iterations", report.irka.iterations},
               {"shift_movement", report.irka.shift_movement},
               {"converged", report.irka.converged}};
  j["reduced_stable"] = report.reduced_stable;
  return j;
}

void validate_reduction_report(const json& j) {
  auto fail = [](const std::string& msg) {
    throw IoError("reduction report schema: " + msg);
  };
  if (!j.is_object()) fail("not an object");
  if (!j.contains("r") || !j["r"].is_number_integer()) fail("missing int r");
  if (!j.contains("N") || !j["N"].is_number_integer()) fail("missing int N");
  if (!j.contains("method") || !j["method"].is_string()) {
    fail("missing string method");
  }
  for (const char* key : {"mimo_error", "ltp_error", "bound"}) {
    if (!j.contains(key) || !(j[key].is_number() || j[key].is_null())) {
      fail(std::string("missing numeric-or-null ") + key);
    }
  }
  if (!j.contains("irka") || !j["irka"].is_object()) fail("missing irka block");
  const json& irka = j["irka"];
  if (!irka.contains("iterations") || !irka["iterations"].is_number_integer()) {
    fail("irka.iterations");
  }
  if (!irka.contains("shift_movement") || !irka["shift_movement"].is_number()) {
    fail("irka.shift_movement");
  }
  if (!j.contains("reduced_stable") || !j["reduced_stable"].is_boolean()) {
    fail("missing bool reduced_stable");
  }
}

std::string trace_to_csv(const sim::SimulationTrace& trace,
                         const std::vector<double>* y_ref) {
  std::ostringstream out;
  out << "time,u,y";
  if (y_ref != nullptr) out << ",y_ref,abs_err";
  out << "\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out << format_double(trace.times[k]) << ',' << format_double(trace.inputs[k])
        << ',' << format_double(trace.outputs[k]);
    if (y_ref != nullptr) {
      const double ref = (*y_ref)[k];
      out << ',' << format_double(ref) << ','
          << format_double(std::abs(trace.outputs[k] - ref));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace ltpmor::io
