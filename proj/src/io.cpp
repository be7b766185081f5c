#include "sljump/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sljump/errors.hpp"

namespace sljump {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(where + ": missing field \"" + key + "\"");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ValidationError(where + ": expected an integer");
  return v.get<int>();
}

}  // namespace

SingularPotential parse_potential(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("potential file: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("potential file: top level must be an object");
  const int m = integer(require(doc, "M", "potential file"), "field \"M\"");

  std::vector<JumpTerm> terms;
  if (doc.contains("terms")) {
    const auto& arr = doc.at("terms");
    if (!arr.is_array()) throw ValidationError("field \"terms\": expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "terms[" + std::to_string(i) + "]";
      JumpTerm t;
      t.order = integer(require(arr[i], "m", where), where + ".m");
      t.location = number(require(arr[i], "x", where), where + ".x");
      t.coefficient = number(require(arr[i], "c", where), where + ".c");
      terms.push_back(t);
    }
  }
  std::vector<double> tail;
  if (doc.contains("tail")) {
    const auto& arr = doc.at("tail");
    if (!arr.is_array()) throw ValidationError("field \"tail\": expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      tail.push_back(number(arr[i], "tail[" + std::to_string(i) + "]"));
    }
  }
  return SingularPotential(std::move(terms), SmoothTail(std::move(tail)), m);
}

SingularPotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_potential(buf.str());
}

std::string potential_to_json(const SingularPotential& potential) {
  ordered_json doc;
  doc["M"] = potential.smoothness_order();
  doc["terms"] = ordered_json::array();
  for (const auto& t : potential.terms()) {
    doc["terms"].push_back({{"m", t.order}, {"x", t.location}, {"c", t.coefficient}});
  }
  doc["tail"] = potential.tail().coefficients();
  return doc.dump(2);
}

void write_metadata(std::ostream& out, const std::string& potential_hash) {
  out << "# sljump " << kVersion << "\n# potential " << potential_hash << "\n";
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  write_metadata(out, spectrum.potential_hash);
  for (int n : spectrum.unsupported) out << "# unsupported n=" << n << " (nonpositive eigenvalue)\n";
  out << "n,z_n,residual,z_n_minus_n\n";
  for (const auto& e : spectrum.eigenvalues) {
    out << e.index << ',' << format_number(e.value) << ',' << format_number(e.residual) << ','
        << format_number(e.value - e.index) << '\n';
  }
}

Spectrum read_spectrum_csv(std::istream& in) {
  Spectrum spectrum;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# potential ";
      if (line.rfind(tag, 0) == 0) spectrum.potential_hash = line.substr(tag.size());
      continue;
    }
    if (!header) {
      if (line.rfind("n,z_n", 0) != 0) throw ValidationError("spectrum CSV: missing header n,z_n");
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) {
      throw ValidationError("spectrum CSV: short row at line " + std::to_string(line_no));
    }
    std::getline(row, c, ',');
    Eigenvalue e;
    try {
      e.index = std::stoi(a);
      e.value = std::stod(b);
      e.residual = c.empty() ? 0.0 : std::stod(c);
    } catch (const std::exception&) {
      throw ValidationError("spectrum CSV: unparsable row at line " + std::to_string(line_no));
    }
    if (!spectrum.eigenvalues.empty() && e.index != spectrum.eigenvalues.back().index + 1) {
      throw ValidationError("spectrum CSV: indices must be consecutive (line " +
                            std::to_string(line_no) + ")");
    }
    spectrum.eigenvalues.push_back(e);
  }
  if (!header) throw ValidationError("spectrum CSV: no header row");
  return spectrum;
}

void write_exp_sum_csv(std::ostream& out, const ExpSum& sum, const std::string& potential_hash) {
  write_metadata(out, potential_hash);
  out << "re_A,im_A,degree,frequency\n";
  for (const auto& t : sum.terms()) {
    out << format_number(t.amplitude.real()) << ',' << format_number(t.amplitude.imag()) << ','
        << t.degree << ',' << format_number(t.frequency) << '\n';
  }
}

void write_count_csv(std::ostream& out, const CountingReport& report,
                     const std::string& potential_hash) {
  write_metadata(out, potential_hash);
  out << "label,alpha,s,h,center,count,predicted,budget,slack,pass\n";
  for (const auto& row : report.rows) {
    out << row.rect.label.name() << ',' << format_number(row.rect.alpha) << ','
        << format_number(row.rect.height) << ',' << format_number(row.rect.half_width) << ','
        << format_number(row.rect.center) << ',' << row.result.count << ','
        << format_number(row.result.predicted) << ',' << format_number(row.result.budget) << ','
        << format_number(row.slack) << ',' << (row.pass ? "true" : "false") << '\n';
  }
  out << "# total_count " << report.total_count << " total_predicted "
      << format_number(report.total_predicted) << " strip_count " << report.strip_count
      << " total_pass " << (report.total_pass ? "true" : "false") << '\n';
}

std::string count_report_json(const CountingReport& report, const std::string& potential_hash) {
  ordered_json doc;
  doc["version"] = kVersion;
  doc["potential"] = potential_hash;
  doc["rectangles"] = ordered_json::array();
  for (const auto& row : report.rows) {
    doc["rectangles"].push_back({{"label", row.rect.label.name()},
                                 {"alpha", row.rect.alpha},
                                 {"s", row.rect.height},
                                 {"h", row.rect.half_width},
                                 {"center", row.rect.center},
                                 {"count", row.result.count},
                                 {"predicted", row.result.predicted},
                                 {"budget", row.result.budget},
                                 {"slack", row.slack},
                                 {"winding", row.result.winding},
                                 {"boundary_min_modulus", row.result.boundary_min_modulus},
                                 {"pass", row.pass}});
  }
  doc["total_count"] = report.total_count;
  doc["total_predicted"] = report.total_predicted;
  doc["strip_count"] = report.strip_count;
  doc["total_pass"] = report.total_pass;
  doc["all_pass"] = report.all_pass;
  return doc.dump(2);
}

void write_recovery_csv(std::ostream& out, const RecoveryReport& report,
                        const std::string& potential_hash) {
  write_metadata(out, potential_hash);
  out << "# N " << report.n_used << " resolution " << format_number(report.resolution)
      << " detrended_mean " << format_number(report.detrended_mean) << " threshold "
      << format_number(report.threshold) << '\n';
  out << "location,magnitude\n";
  for (const auto& e : report.estimated_locations) {
    out << format_number(e.location) << ',' << format_number(e.magnitude) << '\n';
  }
}

std::string recovery_report_json(const RecoveryReport& report, const std::string& potential_hash) {
  ordered_json doc;
  doc["version"] = kVersion;
  doc["potential"] = potential_hash;
  doc["N"] = report.n_used;
  doc["resolution"] = report.resolution;
  doc["detrended_mean"] = report.detrended_mean;
  doc["threshold"] = report.threshold;
  doc["estimated_locations"] = ordered_json::array();
  for (const auto& e : report.estimated_locations) {
    doc["estimated_locations"].push_back({{"x", e.location}, {"magnitude", e.magnitude}});
  }
  return doc.dump(2);
}

void write_dft_csv(std::ostream& out, const std::vector<DftSample>& samples,
                   const std::string& potential_hash) {
  write_metadata(out, potential_hash);
  out << "frequency,location,magnitude\n";
  for (const auto& s : samples) {
    out << format_number(s.frequency) << ',' << format_number(s.location) << ','
        << format_number(s.magnitude) << '\n';
  }
}

}  // namespace sljump
