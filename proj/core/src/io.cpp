#include "stelnet/io.hpp"

#include "stelnet/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace stelnet::io {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t line) {
  if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw DataError("csv line " + std::to_string(line) + ": cannot parse '" + cell + "'");
  return v;
}

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) return true;
  }
  return false;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    const auto cells = split_csv_line(line);
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c, lineno));
    if (!rows.empty() && row.size() != rows.front().size()) throw DataError("csv line " + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  return rows_to_matrix(rows);
}

std::string matrix_to_json(const Matrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("matrix_to_json: matrix must be square");
  json j;
  j["p"] = m.rows();
  std::vector<double> entries;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(m(r, c));
  j["entries"] = entries;
  return j.dump();
}

Matrix matrix_from_json(const std::string& text) {
  const json j = parse_json(text, "matrix_from_json");
  try {
    const auto p = j.at("p").get<Eigen::Index>();
    const auto entries = j.at("entries").get<std::vector<double>>();
    if (p < 0 || static_cast<std::size_t>(p * p) != entries.size()) throw DataError("matrix_from_json: entry count is not p*p");
    Matrix m(p, p);
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index c = 0; c < p; ++c) m(r, c) = entries[static_cast<std::size_t>(r * p + c)];
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("matrix_from_json: ") + e.what());
  }
}

void write_edges_csv(std::ostream& out, const EdgeSet& edges) {
  out << "i,j\n";
  for (const auto& e : edges.edges()) out << e.first + 1 << ',' << e.second + 1 << '\n';
}

EdgeSet read_edges_csv(std::istream& in, std::size_t p) {
  std::vector<std::pair<int, int>> pairs;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (next_line(in, line, lineno)) {
    const auto cells = split_csv_line(line);
    if (first && !cells.empty() && cells[0] == "i") {
      first = false;
      continue;
    }
    first = false;
    if (cells.size() != 2) throw DataError("edge csv line " + std::to_string(lineno) + ": expected 2 columns");
    pairs.emplace_back(static_cast<int>(parse_cell(cells[0], lineno)) - 1, static_cast<int>(parse_cell(cells[1], lineno)) - 1);
  }
  return EdgeSet(p, pairs);
}

std::string edges_to_json(const EdgeSet& edges) {
  json j;
  j["p"] = edges.nodes();
  json arr = json::array();
  for (const auto& e : edges.edges()) arr.push_back({e.first + 1, e.second + 1});
  j["edges"] = arr;
  return j.dump();
}

EdgeSet edges_from_json(const std::string& text) {
  const json j = parse_json(text, "edges_from_json");
  try {
    const auto p = j.at("p").get<std::size_t>();
    std::vector<std::pair<int, int>> pairs;
    for (const auto& e : j.at("edges")) pairs.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    return EdgeSet(p, pairs);
  } catch (const json::exception& e) {
    throw DataError(std::string("edges_from_json: ") + e.what());
  }
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& names, const Matrix& values) {
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  write_matrix_csv(out, values);
}

NamedDataset read_table_csv(std::istream& in) {
  NamedDataset d;
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw DataError("csv: empty input");
  d.names = split_csv_line(line);
  std::vector<std::vector<double>> rows;
  while (next_line(in, line, lineno)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != d.names.size()) {
      throw DataError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(d.names.size()) + " columns, got " +
                      std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c, lineno));
    rows.push_back(std::move(row));
  }
  d.values = rows_to_matrix(rows);
  if (rows.empty()) d.values.resize(0, static_cast<Eigen::Index>(d.names.size()));
  return d;
}

PriceTable read_price_csv(std::istream& in) {
  PriceTable t;
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw DataError("price csv: empty input");
  auto header = split_csv_line(line);
  if (header.size() < 2) throw DataError("price csv: need a date column and at least one series");
  t.names.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  while (next_line(in, line, lineno)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw DataError("price csv line " + std::to_string(lineno) + ": wrong column count");
    t.dates.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(parse_cell(cells[j], lineno));
    rows.push_back(std::move(row));
  }
  t.prices = rows_to_matrix(rows);
  if (rows.empty()) t.prices.resize(0, static_cast<Eigen::Index>(t.names.size()));
  t.validate();
  return t;
}

void write_dated_csv(std::ostream& out, const std::vector<std::string>& dates, const std::vector<std::string>& names,
                     const Matrix& values) {
  const bool dated = !dates.empty();
  if (dated) out << "date";
  for (std::size_t j = 0; j < names.size(); ++j) out << (dated || j ? "," : "") << names[j];
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (dated) out << dates[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << (dated || j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
}

void write_price_csv(std::ostream& out, const PriceTable& table) {
  std::vector<std::string> dates = table.dates;
  if (dates.empty())
    for (Eigen::Index i = 0; i < table.prices.rows(); ++i) {
      // zero-padded so the row labels stay strictly increasing as strings
      std::string label = std::to_string(i + 1);
      label.insert(0, std::to_string(table.prices.rows()).size() - label.size(), '0');
      dates.push_back(label);
    }
  write_dated_csv(out, dates, table.names, table.prices);
}

std::string selection_report_to_json(const SelectionReport& report) {
  json j;
  j["chosen_index"] = report.chosen_index;
  j["chosen_lambda"] = report.chosen_lambda;
  json rows = json::array();
  for (const auto& r : report.records) {
    json row{{"lambda", r.lambda},
             {"failed", r.failed},
             {"converged", r.converged},
             {"edges", r.edge_count},
             {"iterations", r.iterations}};
    if (r.failed) {
      row["bic"] = nullptr;
      row["message"] = r.message;
    } else {
      row["bic"] = r.bic;
      row["log_likelihood"] = r.log_likelihood;
    }
    rows.push_back(row);
  }
  j["records"] = rows;
  return j.dump(2);
}

void write_selection_csv(std::ostream& out, const SelectionReport& report) {
  out << "lambda,bic,log_likelihood,edges,iterations,converged,failed\n";
  for (const auto& r : report.records) {
    out << format_double(r.lambda) << ',' << (r.failed ? "NA" : format_double(r.bic)) << ','
        << (r.failed ? "NA" : format_double(r.log_likelihood)) << ',' << r.edge_count << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ',' << (r.failed ? 1 : 0) << '\n';
  }
}

std::string network_to_json(const NetworkDocument& doc) {
  const Matrix& pc = doc.partial_correlation;
  json j = parse_json(doc.extra_json, "network_to_json");
  if (!j.is_object()) j = json::object();
  j["p"] = pc.rows();
  j["nodes"] = doc.nodes;
  json edges = json::array();
  for (Eigen::Index a = 0; a < pc.rows(); ++a)
    for (Eigen::Index b = a + 1; b < pc.cols(); ++b)
      if (pc(a, b) != 0.0) edges.push_back({{"i", a + 1}, {"j", b + 1}, {"weight", pc(a, b)}});
  j["edges"] = edges;
  j["lambda"] = doc.lambda;
  j["bic"] = doc.bic;
  return j.dump(2);
}

NetworkDocument network_from_json(const std::string& text) {
  const json j = parse_json(text, "network_from_json");
  NetworkDocument doc;
  try {
    const auto p = j.at("p").get<Eigen::Index>();
    if (p < 1) throw DataError("network_from_json: p must be positive");
    if (j.contains("nodes")) doc.nodes = j.at("nodes").get<std::vector<std::string>>();
    if (doc.nodes.empty())
      for (Eigen::Index k = 0; k < p; ++k) doc.nodes.push_back("V" + std::to_string(k + 1));
    if (static_cast<Eigen::Index>(doc.nodes.size()) != p) throw DataError("network_from_json: node list length differs from p");
    doc.partial_correlation = Matrix::Zero(p, p);
    for (const auto& e : j.at("edges")) {
      const auto a = e.at("i").get<Eigen::Index>() - 1;
      const auto b = e.at("j").get<Eigen::Index>() - 1;
      if (a < 0 || b < 0 || a >= p || b >= p || a == b) throw DataError("network_from_json: invalid edge endpoints");
      const double w = e.at("weight").get<double>();
      doc.partial_correlation(a, b) = w;
      doc.partial_correlation(b, a) = w;
    }
    if (j.contains("lambda") && j["lambda"].is_number()) doc.lambda = j["lambda"].get<double>();
    if (j.contains("bic") && j["bic"].is_number()) doc.bic = j["bic"].get<double>();
  } catch (const json::exception& e) {
    throw DataError(std::string("network_from_json: ") + e.what());
  }
  return doc;
}

void write_measures_csv(std::ostream& out, const std::vector<std::string>& labels, const std::vector<NetworkMeasures>& rows) {
  out << "label,degree,eccentricity,distance,clustering,strength,edges\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& m = rows[i];
    out << labels[i] << ',' << format_double(m.mean_degree) << ',' << format_double(m.mean_eccentricity) << ','
        << format_double(m.mean_distance) << ',' << format_double(m.mean_clustering) << ','
        << format_double(m.mean_strength) << ',' << m.edge_count << '\n';
  }
}

void write_centralities_csv(std::ostream& out, const std::vector<std::string>& nodes, const Centralities& c,
                            const NodeStatistics& stats) {
  out << "node,name,degree,strength,eigenvector,eccentricity,clustering\n";
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    out << k + 1 << ',' << nodes[k] << ',' << c.degree[k] << ',' << format_double(c.strength[k]) << ','
        << format_double(c.eigenvector[k]) << ',' << stats.eccentricity[k] << ',' << format_double(stats.clustering[k])
        << '\n';
  }
}

std::string shock_to_json(const ShockResult& r, const std::vector<std::string>& nodes) {
  json j;
  j["node"] = r.node + 1;
  if (static_cast<std::size_t>(r.node) < nodes.size()) j["name"] = nodes[static_cast<std::size_t>(r.node)];
  j["initial"] = std::vector<double>(r.initial.data(), r.initial.data() + r.initial.size());
  j["steady_state"] = std::vector<double>(r.steady_state.data(), r.steady_state.data() + r.steady_state.size());
  j["total_impact"] = r.total_impact;
  j["spectral_radius"] = r.spectral_radius;
  j["absolute_spectral_radius"] = r.absolute_radius;
  j["nodes"] = nodes;
  return j.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace stelnet::io
