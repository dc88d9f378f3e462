#include "diracops/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace diracops {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string matrix_to_json(const Mat4& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json rrow = nlohmann::json::array();
    nlohmann::json irow = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  nlohmann::json out;
  out["re"] = re;
  out["im"] = im;
  return out.dump();
}

Mat4 matrix_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      m(i, k) = cplx(j.at("re").at(i).at(k).get<double>(),
                     j.at("im").at(i).at(k).get<double>());
  return m;
}

namespace {
nlohmann::json to_json_obj(const IdentityReport& r) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["tolerance"] = r.tolerance;
  j["max_deviation"] = r.max_deviation;
  j["samples"] = r.samples;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}
}  // namespace

std::string report_to_json(const IdentityReport& r) { return to_json_obj(r).dump(); }

std::string reports_to_json(const std::vector<IdentityReport>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& r : rs) {
    arr.push_back(to_json_obj(r));
    all = all && r.pass;
  }
  nlohmann::json out;
  out["report"] = arr;
  out["all_pass"] = all;
  return out.dump(2);
}

std::string reports_to_text(const std::vector<IdentityReport>& rs) {
  std::ostringstream os;
  os << "identity                              tolerance   max deviation  result\n";
  os << "--------------------------------------------------------------------------\n";
  char line[160];
  for (const auto& r : rs) {
    std::snprintf(line, sizeof(line), "%-36s  %-10.1e  %-13.3e  %s\n",
                  r.identity.c_str(), r.tolerance, r.max_deviation,
                  r.pass ? "pass" : "FAIL");
    os << line;
    if (!r.note.empty()) os << "    note: " << r.note << "\n";
  }
  return os.str();
}

std::string report_to_json(const ExpansionReport& r) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["tolerance"] = r.min_order;
  j["max_deviation"] = r.residual;
  j["samples"] = 0;
  j["pass"] = r.pass;
  j["ratio"] = r.ratio;
  j["observed_order"] = r.observed_order;
  return j.dump();
}

}  // namespace diracops
