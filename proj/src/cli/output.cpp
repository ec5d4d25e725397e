#include <cmath>
#include <fstream>

#include "radlab/cli.hpp"
#include "radlab/errors.hpp"

namespace radlab::cli {

namespace {

std::string quadrature_line(const QuadratureSpec& q) {
  return "rel_tol=" + format_double(q.rel_tol) + " abs_tol=" + format_double(q.abs_tol) +
         " max_subdivisions=" + std::to_string(q.max_subdivisions) + " endpoint_rule=" + to_string(q.endpoint_rule);
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw NumericError("cannot write output file '" + path + "'");
}

}  // namespace

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double x) { return format_double(x); }

nlohmann::json json_number(double x) {
  // JSON has no infinities; spell them (and NaN) as strings so nothing is lost
  if (std::isfinite(x)) return x;
  return format_double(x);
}

nlohmann::json meta_json(const OutputMeta& meta) {
  return {{"tool", "radlab"},
          {"version", RADLAB_VERSION},
          {"command", meta.command},
          {"config_hash", meta.config_hash},
          {"quadrature",
           {{"rel_tol", format_double(meta.quadrature.rel_tol)},
            {"abs_tol", format_double(meta.quadrature.abs_tol)},
            {"max_subdivisions", meta.quadrature.max_subdivisions},
            {"endpoint_rule", to_string(meta.quadrature.endpoint_rule)}}}};
}

void write_csv(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  text += "# tool: radlab " RADLAB_VERSION "\n";
  text += "# command: " + meta.command + "\n";
  text += "# config_hash: " + meta.config_hash + "\n";
  text += "# quadrature: " + quadrature_line(meta.quadrature) + "\n";
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) text += ',';
      text += csv_escape(fields[i]);
    }
    text += '\n';
  };
  line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw NumericError("csv row width does not match header in " + path);
    line(r);
  }
  write_file(path, text);
}

void write_json(const std::string& path, const OutputMeta& meta, nlohmann::json body) {
  body["meta"] = meta_json(meta);
  // nlohmann::json objects are std::map backed, so keys come out sorted
  write_file(path, body.dump(2) + "\n");
}

}  // namespace radlab::cli
