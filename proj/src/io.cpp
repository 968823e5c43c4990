#include "gbfrft/io.hpp"

#include "gbfrft/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gbfrft {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_complex(std::string_view tok, Complex& out) {
  if (tok.empty()) return false;
  const char last = tok.back();
  if (last != 'i' && last != 'j') {
    double re = 0.0;
    if (!parse_double(tok, re)) return false;
    out = {re, 0.0};
    return true;
  }
  std::string_view body = tok.substr(0, tok.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto parse_imag = [](std::string_view s, double& v) {
    if (s.empty() || s == "+") return v = 1.0, true;
    if (s == "-") return v = -1.0, true;
    return parse_double(s, v);
  };
  double re = 0.0, im = 0.0;
  if (split == std::string_view::npos) {
    if (!parse_imag(body, im)) return false;
  } else if (!parse_double(body.substr(0, split), re) || !parse_imag(body.substr(split), im)) {
    return false;
  }
  out = {re, im};
  return true;
}

}  // namespace

MatrixXc parse_matrix(std::string_view text, const std::string& source) {
  std::vector<std::vector<Complex>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const std::string_view line =
        trim(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    if (line.empty()) continue;

    std::vector<Complex> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string_view tok = trim(line.substr(start, comma == std::string_view::npos
                                                               ? std::string_view::npos
                                                               : comma - start));
      Complex z;
      if (!parse_complex(tok, z)) {
        fail(ErrorKind::ParseError, source + ":" + std::to_string(line_no) + ": bad entry '" +
                                        std::string(tok) + "'");
      }
      row.push_back(z);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorKind::RaggedRows, source + ":" + std::to_string(line_no) + ": expected " +
                                      std::to_string(rows.front().size()) + " columns, found " +
                                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  MatrixXc m(static_cast<Eigen::Index>(rows.size()),
             rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Complex z) {
  std::string s = format_real(z.real());
  if (std::signbit(z.imag())) {
    s += '-';
    s += format_real(-z.imag());
  } else {
    s += '+';
    s += format_real(z.imag());
  }
  s += 'i';
  return s;
}

std::string format_matrix(const MatrixXc& m, bool complex_entries) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += complex_entries ? format_complex(m(r, c)) : format_real(m(r, c).real());
    }
    out += '\n';
  }
  return out;
}

std::string format_matrix(const MatrixXr& m) { return format_matrix(m.cast<Complex>(), false); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::IoError, "write failed for " + path.string());
}

MatrixXc read_matrix(const std::filesystem::path& path) {
  return parse_matrix(read_text(path), path.string());
}

MatrixXr read_real_matrix(const std::filesystem::path& path) {
  const MatrixXc m = read_matrix(path);
  if ((m.imag().array() != 0.0).any()) {
    fail(ErrorKind::ParseError, path.string() + ": expected real entries");
  }
  return m.real();
}

void write_matrix(const std::filesystem::path& path, const MatrixXc& m, bool complex_entries) {
  write_text(path, format_matrix(m, complex_entries));
}

void write_matrix(const std::filesystem::path& path, const MatrixXr& m) {
  write_text(path, format_matrix(m));
}

namespace {

std::filesystem::path sidecar(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta");
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ErrorKind::ParseError, where + ": expected a boolean, found '" + v + "'");
}

}  // namespace

void write_graph(const std::filesystem::path& csv_path, const Graph& g) {
  validate(g);
  write_matrix(csv_path, g.adjacency);
  std::ostringstream meta;
  meta << "n=" << g.n << '\n'
       << "directed=" << (g.directed ? "true" : "false") << '\n'
       << "weighted=" << (g.weighted ? "true" : "false") << '\n'
       << "label=" << g.label << '\n'
       << "seed=" << g.seed << '\n';
  write_text(sidecar(csv_path), meta.str());
}

Graph read_graph(const std::filesystem::path& csv_path) {
  const MatrixXr a = read_real_matrix(csv_path);
  if (a.rows() != a.cols()) fail(ErrorKind::ParseError, csv_path.string() + ": adjacency not square");
  Graph g = make_graph(a, csv_path.stem().string());
  const auto meta_path = sidecar(csv_path);
  if (!std::filesystem::exists(meta_path)) return g;

  std::istringstream in(read_text(meta_path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    const std::string where = meta_path.string() + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) fail(ErrorKind::ParseError, where + ": expected key=value");
    const std::string key(trim(t.substr(0, eq)));
    const std::string value(trim(t.substr(eq + 1)));
    if (key == "n") {
      if (value != std::to_string(g.n)) fail(ErrorKind::ParseError, where + ": n disagrees with CSV");
    } else if (key == "directed") {
      g.directed = parse_bool(value, where);
    } else if (key == "weighted") {
      g.weighted = parse_bool(value, where);
    } else if (key == "label") {
      g.label = value;
    } else if (key == "seed") {
      try {
        g.seed = std::stoull(value);
      } catch (const std::exception&) {
        fail(ErrorKind::ParseError, where + ": bad seed '" + value + "'");
      }
    } else {
      fail(ErrorKind::ParseError, where + ": unknown key '" + key + "'");
    }
  }
  validate(g);
  return g;
}

std::string_view layout_name(Layout layout) {
  switch (layout) {
    case Layout::Synthetic: return "synthetic";
    case Layout::TimeVertex: return "timevertex";
    case Layout::Deblur: return "deblur";
    case Layout::GridMap: return "gridmap";
    case Layout::Trace: return "trace";
    case Layout::SelfTest: return "selftest";
  }
  return "synthetic";
}

const std::vector<std::string>& layout_columns(Layout layout) {
  static const std::map<Layout, std::vector<std::string>> columns = {
      {Layout::Synthetic, {"method", "topology", "variant", "sigma2", "mse", "alpha1", "alpha2"}},
      {Layout::TimeVertex, {"method", "k", "sigma2", "mse", "alpha1", "alpha2", "lambda"}},
      {Layout::Deblur, {"method", "frame", "mse", "psnr", "ssim"}},
      {Layout::GridMap, {"alpha1", "alpha2", "mse"}},
      {Layout::Trace, {"epoch", "alpha1", "alpha2", "loss", "best_loss"}},
      {Layout::SelfTest, {"check", "value", "threshold", "pass"}},
  };
  return columns.at(layout);
}

ResultTable make_table(Layout layout) { return ResultTable{layout_columns(layout), {}}; }

std::string to_csv(const ResultTable& table) {
  std::string out;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  emit_row(table.columns);
  for (const auto& row : table.rows) emit_row(row);
  return out;
}

std::string to_aligned_text(const ResultTable& table) {
  std::vector<std::size_t> width(table.columns.size(), 0);
  for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
  for (const auto& row : table.rows)
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  std::string out;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += row[c];
      if (c + 1 < row.size()) out.append(width[c] - row[c].size(), ' ');
    }
    out += '\n';
  };
  emit_row(table.columns);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out.append(total + 2 * (width.empty() ? 0 : width.size() - 1), '-');
  out += '\n';
  for (const auto& row : table.rows) emit_row(row);
  return out;
}

EmittedFiles emit_results(ResultTable table, Layout layout, const std::filesystem::path& dir,
                          const std::string& stem, const nlohmann::json& metadata) {
  if (table.columns != layout_columns(layout)) {
    fail(ErrorKind::SchemaMismatch,
         "table columns do not match the " + std::string(layout_name(layout)) + " layout");
  }
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      fail(ErrorKind::SchemaMismatch, "table row has " + std::to_string(row.size()) +
                                          " cells, expected " +
                                          std::to_string(table.columns.size()));
    }
  }
  if (layout == Layout::GridMap) {
    auto key = [](const std::vector<std::string>& row) {
      return std::make_pair(std::stod(row[0]), std::stod(row[1]));
    };
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
  }

  std::filesystem::create_directories(dir);
  EmittedFiles files{dir / (stem + ".csv"), dir / (stem + ".txt"), dir / (stem + ".meta.json")};
  write_text(files.csv, to_csv(table));
  write_text(files.text, to_aligned_text(table));

  nlohmann::json meta = metadata.is_object() ? metadata : nlohmann::json::object();
  meta["layout"] = std::string(layout_name(layout));
  meta["library_version"] = std::string(kLibraryVersion);
  meta["rows"] = table.rows.size();
  write_text(files.metadata, meta.dump(2) + "\n");
  return files;
}

}  // namespace gbfrft
