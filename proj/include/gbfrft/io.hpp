#pragma once

#include "gbfrft/graph.hpp"
#include "gbfrft/linalg.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gbfrft {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

// Matrix CSV: one row per line, comma-separated. Real entries are plain
// decimals; complex entries are "a+bi" / "a-bi". Writers emit 17 significant
// digits, which round-trips every double exactly.

MatrixXc parse_matrix(std::string_view text, const std::string& source = "<string>");
std::string format_matrix(const MatrixXc& m, bool complex_entries);
std::string format_matrix(const MatrixXr& m);

MatrixXc read_matrix(const std::filesystem::path& path);
/// Throws ParseError when any entry has a non-zero imaginary part.
MatrixXr read_real_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const MatrixXc& m, bool complex_entries = true);
void write_matrix(const std::filesystem::path& path, const MatrixXr& m);

std::string format_complex(Complex z);
std::string format_real(double v);

/// Adjacency CSV plus a "<path>.meta" sidecar of key=value lines
/// (n, directed, weighted, label, seed).
void write_graph(const std::filesystem::path& csv_path, const Graph& g);
/// A missing sidecar falls back to inferring the flags from the matrix.
Graph read_graph(const std::filesystem::path& csv_path);

enum class Layout { Synthetic, TimeVertex, Deblur, GridMap, Trace, SelfTest };

std::string_view layout_name(Layout layout);
const std::vector<std::string>& layout_columns(Layout layout);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Empty table with the layout's columns.
ResultTable make_table(Layout layout);

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path text;
  std::filesystem::path metadata;
};

std::string to_csv(const ResultTable& table);
std::string to_aligned_text(const ResultTable& table);

/// Writes <stem>.csv, <stem>.txt (aligned) and <stem>.meta.json into `dir`.
/// The gridmap layout is sorted by (alpha1, alpha2). Throws SchemaMismatch if
/// the columns differ from the layout or a row is ragged.
EmittedFiles emit_results(ResultTable table, Layout layout, const std::filesystem::path& dir,
                          const std::string& stem, const nlohmann::json& metadata = {});

/// Reads a whole file; throws IoError.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace gbfrft
