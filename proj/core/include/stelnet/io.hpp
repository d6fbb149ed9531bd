#pragma once

// Text serialization: CSV tables and JSON documents for matrices, edge sets,
// datasets, price tables, selection reports and estimated networks.
// Edge indices are 1-based on disk and 0-based in memory.

#include "stelnet/analytics.hpp"
#include "stelnet/model_core.hpp"
#include "stelnet/model_selection.hpp"
#include "stelnet/pipeline.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace stelnet::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Splits one CSV line on commas (no quoting support); trims whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

/// Dense CSV, one matrix row per line, no header.
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);

/// {"p": int, "entries": [row-major values]}
std::string matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);

/// Header "i,j" then one 1-based pair per line.
void write_edges_csv(std::ostream& out, const EdgeSet& edges);
EdgeSet read_edges_csv(std::istream& in, std::size_t p);

/// {"p": int, "edges": [[i, j], ...]} with 1-based indices.
std::string edges_to_json(const EdgeSet& edges);
EdgeSet edges_from_json(const std::string& text);

struct NamedDataset {
  std::vector<std::string> names;
  Matrix values;
};

/// One header line of column names, then rows. Missing or "NA" cells read as NaN.
void write_table_csv(std::ostream& out, const std::vector<std::string>& names, const Matrix& values);
NamedDataset read_table_csv(std::istream& in);

/// First column dates (header cell ignored), remaining columns named series.
PriceTable read_price_csv(std::istream& in);
void write_price_csv(std::ostream& out, const PriceTable& table);
/// Dated table (dates column first when present).
void write_dated_csv(std::ostream& out, const std::vector<std::string>& dates, const std::vector<std::string>& names,
                     const Matrix& values);

std::string selection_report_to_json(const SelectionReport& report);
void write_selection_csv(std::ostream& out, const SelectionReport& report);

/// Network document: {"p", "nodes", "edges": [{"i","j","weight"}], "lambda", "bic", ...}.
struct NetworkDocument {
  std::vector<std::string> nodes;
  Matrix partial_correlation;  ///< p x p, zero diagonal
  double lambda = 0.0;
  double bic = 0.0;
  std::string extra_json = "{}";  ///< merged into the top-level object when writing
};

std::string network_to_json(const NetworkDocument& doc);
/// Throws DataError on malformed documents.
NetworkDocument network_from_json(const std::string& text);

void write_measures_csv(std::ostream& out, const std::vector<std::string>& labels,
                        const std::vector<NetworkMeasures>& rows);
void write_centralities_csv(std::ostream& out, const std::vector<std::string>& nodes, const Centralities& c,
                            const NodeStatistics& stats);

std::string shock_to_json(const ShockResult& r, const std::vector<std::string>& nodes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace stelnet::io
