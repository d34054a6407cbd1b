#include "daplex/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace daplex {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Vector to_eigen(const json& array, const std::string& field) {
  if (!array.is_array()) {
    throw ParseError(field + ": expected an array of numbers");
  }
  Vector v(array.size());
  Eigen::Index i = 0;
  for (const auto& entry : array) {
    if (!entry.is_number()) {
      throw ParseError(field + "[" + std::to_string(i) +
                       "]: expected a number");
    }
    v[i++] = entry.get<double>();
  }
  return v;
}

void emit_vector(std::ostream& out, const Vector& v) {
  out << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    out << format_double(v[i]);
  }
  out << "]";
}

void emit_ints(std::ostream& out, const std::vector<int>& v) {
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    out << v[i];
  }
  out << "]";
}

void emit_string(std::ostream& out, const std::string& s) {
  out << json(s).dump();  // JSON escaping
}

}  // namespace

Subspace ModelSpec::to_subspace(double tol) const {
  Matrix generators(ambient_dim, static_cast<Eigen::Index>(basis_rows.size()));
  for (std::size_t j = 0; j < basis_rows.size(); ++j) {
    generators.col(static_cast<Eigen::Index>(j)) = basis_rows[j];
  }
  return Subspace(generators, tol);
}

ModelSpec parse_model_spec(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("model spec: expected an object");

  ModelSpec spec;
  if (!doc.contains("ambient_dim") ||
      !doc["ambient_dim"].is_number_integer()) {
    throw ParseError("ambient_dim: required integer field");
  }
  spec.ambient_dim = doc["ambient_dim"].get<int>();
  if (spec.ambient_dim < 2) {
    throw ParseError("ambient_dim: must be at least 2");
  }

  if (!doc.contains("basis") || !doc["basis"].is_array() ||
      doc["basis"].empty()) {
    throw ParseError("basis: required non-empty array of rows");
  }
  int row_index = 0;
  for (const auto& row : doc["basis"]) {
    const std::string field = "basis[" + std::to_string(row_index++) + "]";
    Vector v = to_eigen(row, field);
    if (v.size() != spec.ambient_dim) {
      throw ParseError(field + ": expected " +
                       std::to_string(spec.ambient_dim) + " entries, got " +
                       std::to_string(v.size()));
    }
    spec.basis_rows.push_back(std::move(v));
  }

  if (doc.contains("base_point")) {
    Vector a = to_eigen(doc["base_point"], "base_point");
    if (a.size() != spec.ambient_dim) {
      throw ParseError("base_point: expected " +
                       std::to_string(spec.ambient_dim) + " entries");
    }
    if (!is_strictly_positive(a)) {
      throw ParseError("base_point: entries must be strictly positive");
    }
    const Subspace w = spec.to_subspace();
    const Containment membership = w.contains(a, 1e-9);
    if (!membership.contained) {
      throw ParseError("base_point: not inside span(basis), residual " +
                       format_double(membership.residual));
    }
    spec.base_point = std::move(a);
  }

  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) {
      throw ParseError("labels: expected an array of strings");
    }
    for (const auto& label : doc["labels"]) {
      if (!label.is_string()) {
        throw ParseError("labels: expected an array of strings");
      }
      spec.labels.push_back(label.get<std::string>());
    }
  }
  return spec;
}

ModelSpec read_model_spec(const std::string& path) {
  try {
    return parse_model_spec(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string model_spec_to_string(const ModelSpec& spec) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"ambient_dim\": " << spec.ambient_dim << ",\n";
  out << "  \"basis\": [\n";
  for (std::size_t i = 0; i < spec.basis_rows.size(); ++i) {
    out << "    ";
    emit_vector(out, spec.basis_rows[i]);
    out << (i + 1 < spec.basis_rows.size() ? ",\n" : "\n");
  }
  out << "  ]";
  if (spec.base_point) {
    out << ",\n  \"base_point\": ";
    emit_vector(out, *spec.base_point);
  }
  if (!spec.labels.empty()) {
    out << ",\n  \"labels\": [";
    for (std::size_t i = 0; i < spec.labels.size(); ++i) {
      if (i) out << ", ";
      emit_string(out, spec.labels[i]);
    }
    out << "]";
  }
  out << "\n}\n";
  return out.str();
}

void write_model_spec(const std::string& path, const ModelSpec& spec) {
  write_file(path, model_spec_to_string(spec));
}

namespace {

CanonicalForm parse_canonical(const json& doc) {
  CanonicalForm form;
  form.q = doc.at("q").get<int>();
  form.r = doc.at("r").get<int>();
  form.block_sizes = doc.at("block_sizes").get<std::vector<int>>();
  form.permutation = doc.at("permutation").get<std::vector<int>>();
  for (const auto& block : doc.at("block_vectors")) {
    form.block_vectors.push_back(to_eigen(block, "block_vectors"));
  }
  return form;
}

}  // namespace

Report parse_report(const std::string& text) {
  const json doc = parse_json(text);
  try {
    Report report;
    report.version = doc.at("version").get<std::string>();
    report.verdict = doc.at("verdict").get<std::string>();
    if (doc.contains("base_point")) {
      report.base_point = to_eigen(doc["base_point"], "base_point");
    }
    if (doc.contains("canonical")) {
      report.canonical = parse_canonical(doc["canonical"]);
    }
    const auto& residuals = doc.at("residuals");
    if (residuals.contains("closure")) {
      report.closure_residual = residuals["closure"].get<double>();
    }
    if (residuals.contains("base_independence")) {
      report.base_independence_residual =
          residuals["base_independence"].get<double>();
    }
    if (residuals.contains("log_affine")) {
      report.log_affine_residual = residuals["log_affine"].get<double>();
    }
    if (residuals.contains("autoparallel")) {
      for (const auto& entry : residuals["autoparallel"]) {
        report.autoparallel_residuals.push_back(
            {entry.at("alpha").get<double>(),
             entry.at("residual").get<double>()});
      }
    }
    report.cross_check_agreed = doc.at("cross_check_agreed").get<bool>();
    for (const auto& w : doc.at("warnings")) {
      report.warnings.push_back(w.get<std::string>());
    }
    report.tolerance = doc.at("tolerances").at("membership").get<double>();
    report.seed = doc.at("seed").get<std::uint64_t>();
    report.log_affine_samples = doc.at("log_affine_samples").get<int>();
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::string report_to_string(const Report& report) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"version\": ";
  emit_string(out, report.version);
  out << ",\n  \"verdict\": ";
  emit_string(out, report.verdict);
  if (report.base_point) {
    out << ",\n  \"base_point\": ";
    emit_vector(out, *report.base_point);
  }
  if (report.canonical) {
    const CanonicalForm& form = *report.canonical;
    out << ",\n  \"canonical\": {\n";
    out << "    \"q\": " << form.q << ",\n";
    out << "    \"r\": " << form.r << ",\n";
    out << "    \"block_sizes\": ";
    emit_ints(out, form.block_sizes);
    out << ",\n    \"permutation\": ";
    emit_ints(out, form.permutation);
    out << ",\n    \"block_vectors\": [";
    for (std::size_t l = 0; l < form.block_vectors.size(); ++l) {
      if (l) out << ", ";
      emit_vector(out, form.block_vectors[l]);
    }
    out << "]\n  }";
  }
  out << ",\n  \"residuals\": {";
  bool first = true;
  auto emit_residual = [&](const char* name, double value) {
    if (!first) out << ",";
    first = false;
    out << "\n    \"" << name << "\": " << format_double(value);
  };
  if (report.closure_residual) {
    emit_residual("closure", *report.closure_residual);
  }
  if (report.base_independence_residual) {
    emit_residual("base_independence", *report.base_independence_residual);
  }
  if (report.log_affine_residual) {
    emit_residual("log_affine", *report.log_affine_residual);
  }
  if (!report.autoparallel_residuals.empty()) {
    if (!first) out << ",";
    first = false;
    out << "\n    \"autoparallel\": [";
    for (std::size_t i = 0; i < report.autoparallel_residuals.size(); ++i) {
      if (i) out << ", ";
      out << "{\"alpha\": "
          << format_double(report.autoparallel_residuals[i].alpha)
          << ", \"residual\": "
          << format_double(report.autoparallel_residuals[i].residual) << "}";
    }
    out << "]";
  }
  out << (first ? "},\n" : "\n  },\n");
  out << "  \"cross_check_agreed\": "
      << (report.cross_check_agreed ? "true" : "false") << ",\n";
  out << "  \"warnings\": [";
  for (std::size_t i = 0; i < report.warnings.size(); ++i) {
    if (i) out << ", ";
    emit_string(out, report.warnings[i]);
  }
  out << "],\n";
  out << "  \"tolerances\": {\"membership\": " << format_double(report.tolerance)
      << "},\n";
  out << "  \"seed\": " << report.seed << ",\n";
  out << "  \"log_affine_samples\": " << report.log_affine_samples << "\n";
  out << "}\n";
  return out.str();
}

void write_report(const std::string& path, const Report& report) {
  write_file(path, report_to_string(report));
}

}  // namespace daplex
