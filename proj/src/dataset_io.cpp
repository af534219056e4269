#include "ghostspec/dataset_io.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ghostspec/errors.hpp"

namespace ghostspec {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_doubles(std::string& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += fmt_double(values[i]);
  }
}

void atomic_write(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + tmp.string());
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("rename failed: " + tmp.string() + " -> " + path.string() +
                  ": " + ec.message());
}

/// Sequential reader with line-numbered errors.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path)
      : path_(path.string()), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open: " + path_);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(path_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string expect_line() {
    std::string line;
    if (!next(line)) fail("unexpected end of file");
    return line;
  }

  /// "key: rest" with an exact key match.
  std::string expect_key(const std::string& key) {
    std::string line = expect_line();
    const std::string prefix = key + ":";
    if (line.rfind(prefix, 0) != 0) fail("expected '" + key + ":' line");
    std::string rest = line.substr(prefix.size());
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
    return rest;
  }

  void expect_blank() {
    if (!expect_line().empty()) fail("expected blank separator line");
  }

  void expect_eof() {
    std::string line;
    if (next(line)) fail("trailing content");
  }

  double parse_double(const std::string& text) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE)
      fail("bad floating-point value '" + text + "'");
    return v;
  }

  long long parse_int(const std::string& text) const {
    long long v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
      fail("bad integer '" + text + "'");
    return v;
  }

  std::uint64_t parse_u64(const std::string& text) const {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
      fail("bad unsigned integer '" + text + "'");
    return v;
  }

  std::vector<std::string> split(const std::string& text) const {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
  }

  std::vector<double> parse_doubles(const std::string& text,
                                    std::size_t expected) const {
    auto toks = split(text);
    if (toks.size() != expected)
      fail("expected " + std::to_string(expected) + " values, got " +
           std::to_string(toks.size()));
    std::vector<double> out;
    out.reserve(expected);
    for (const auto& t : toks) out.push_back(parse_double(t));
    return out;
  }

 private:
  std::string path_;
  std::ifstream in_;
  int line_no_ = 0;
};

void check_token(const std::string& value, const std::string& what) {
  if (value.empty()) throw IoError(what + " must not be empty");
  for (char c : value)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw IoError(what + " must not contain whitespace: '" + value + "'");
}

std::string or_dash(const std::string& s) { return s.empty() ? "-" : s; }
std::string from_dash(const std::string& s) { return s == "-" ? "" : s; }

void check_monotone(const LineReader& reader, const std::vector<double>& axis,
                    const std::string& name) {
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (!(axis[i] > axis[i - 1]))
      reader.fail(name + " axis is not strictly increasing");
}

}  // namespace

// ------------------------------------------------------------------- maps

void save_map(const LambdaYMap& map, const std::filesystem::path& path) {
  std::string out;
  out.reserve(map.counts.size() * 4 + 8192);
  out += "format: ghostspec-map/1\n";
  out += "n_spatial: " + std::to_string(map.n_spatial) + "\n";
  out += "n_spectral: " + std::to_string(map.n_spectral) + "\n";
  out += "acquisition_time_s: " + fmt_double(map.acquisition_time_s) + "\n";
  out += "seed: " + std::to_string(map.seed) + "\n";
  out += "config_digest: " + or_dash(map.config_digest) + "\n";
  out += "y_centers_mm: ";
  append_doubles(out, map.y_centers_mm);
  out += "\nlambda_centers_nm: ";
  append_doubles(out, map.lambda_centers_nm);
  out += "\n\n";
  for (int row = 0; row < map.n_spatial; ++row) {
    for (int col = 0; col < map.n_spectral; ++col) {
      if (col) out += ' ';
      out += std::to_string(map.at(row, col));
    }
    out += '\n';
  }
  atomic_write(path, out);
}

LambdaYMap load_map(const std::filesystem::path& path) {
  LineReader reader(path);
  const std::string version = reader.expect_key("format");
  if (version != "ghostspec-map/1")
    reader.fail("unsupported map format '" + version + "'");

  LambdaYMap map;
  map.n_spatial = static_cast<int>(reader.parse_int(reader.expect_key("n_spatial")));
  map.n_spectral =
      static_cast<int>(reader.parse_int(reader.expect_key("n_spectral")));
  if (map.n_spatial < 2 || map.n_spectral < 2)
    reader.fail("map dimensions must be >= 2");
  map.acquisition_time_s =
      reader.parse_double(reader.expect_key("acquisition_time_s"));
  map.seed = reader.parse_u64(reader.expect_key("seed"));
  map.config_digest = from_dash(reader.expect_key("config_digest"));
  map.y_centers_mm = reader.parse_doubles(reader.expect_key("y_centers_mm"),
                                          map.n_spatial);
  check_monotone(reader, map.y_centers_mm, "y");
  map.lambda_centers_nm = reader.parse_doubles(
      reader.expect_key("lambda_centers_nm"), map.n_spectral);
  check_monotone(reader, map.lambda_centers_nm, "lambda");
  reader.expect_blank();

  map.counts.reserve(static_cast<std::size_t>(map.n_spatial) * map.n_spectral);
  for (int row = 0; row < map.n_spatial; ++row) {
    const auto toks = reader.split(reader.expect_line());
    if (static_cast<int>(toks.size()) != map.n_spectral)
      reader.fail("expected " + std::to_string(map.n_spectral) +
                  " counts, got " + std::to_string(toks.size()));
    for (const auto& t : toks) {
      const long long v = reader.parse_int(t);
      if (v < 0 || v > 0x7FFFFFFFLL)
        reader.fail("count out of range [0, 2^31-1]: '" + t + "'");
      map.counts.push_back(static_cast<std::uint32_t>(v));
    }
  }
  reader.expect_eof();
  return map;
}

// --------------------------------------------------------------- spectra

void save_spectrum(const SpectrumVector& spectrum,
                   const std::filesystem::path& path) {
  std::string out;
  out += "format: ghostspec-spectrum/1\n";
  out += "n_bins: " + std::to_string(spectrum.values.size()) + "\n";
  out += "label: " + or_dash(spectrum.label) + "\n";
  out += "source_id: " + or_dash(spectrum.source_id) + "\n";
  out += "y_rows: " + std::to_string(spectrum.y_row_lo) + " " +
         std::to_string(spectrum.y_row_hi) + "\n";
  out += "lambda_centers_nm: ";
  append_doubles(out, spectrum.lambda_centers_nm);
  out += "\nvalues: ";
  append_doubles(out, spectrum.values);
  out += "\n";
  atomic_write(path, out);
}

SpectrumVector load_spectrum(const std::filesystem::path& path) {
  LineReader reader(path);
  const std::string version = reader.expect_key("format");
  if (version != "ghostspec-spectrum/1")
    reader.fail("unsupported spectrum format '" + version + "'");

  SpectrumVector s;
  const auto n_bins = reader.parse_int(reader.expect_key("n_bins"));
  if (n_bins < 1) reader.fail("n_bins must be >= 1");
  s.label = from_dash(reader.expect_key("label"));
  s.source_id = from_dash(reader.expect_key("source_id"));
  {
    const auto toks = reader.split(reader.expect_key("y_rows"));
    if (toks.size() != 2) reader.fail("y_rows needs two integers");
    s.y_row_lo = static_cast<int>(reader.parse_int(toks[0]));
    s.y_row_hi = static_cast<int>(reader.parse_int(toks[1]));
  }
  s.lambda_centers_nm = reader.parse_doubles(
      reader.expect_key("lambda_centers_nm"), static_cast<std::size_t>(n_bins));
  check_monotone(reader, s.lambda_centers_nm, "lambda");
  s.values = reader.parse_doubles(reader.expect_key("values"),
                                  static_cast<std::size_t>(n_bins));
  for (double v : s.values)
    if (v < 0.0) reader.fail("spectrum values must be non-negative");
  reader.expect_eof();
  return s;
}

// --------------------------------------------------------------- reports

void save_report(const AnalysisReport& report,
                 const std::filesystem::path& path) {
  check_token(report.method, "report method");
  std::string out;
  out += "format: ghostspec-report/1\n";
  out += "method: " + report.method + "\n";
  for (const auto& [name, value] : report.scalars) {
    check_token(name, "scalar name");
    out += "scalar: " + name + " " + fmt_double(value) + "\n";
  }
  for (const auto& [name, value] : report.notes) {
    check_token(name, "note name");
    if (value.find('\n') != std::string::npos)
      throw IoError("note value must be a single line: " + name);
    out += "note: " + name + " " + value + "\n";
  }
  for (const auto& table : report.tables) {
    check_token(table.name, "table name");
    if (static_cast<std::size_t>(table.rows) * table.cols != table.data.size())
      throw IoError("table '" + table.name + "' shape/data mismatch");
    out += "table: " + table.name + " " + std::to_string(table.rows) + " " +
           std::to_string(table.cols) + "\n";
    for (int r = 0; r < table.rows; ++r) {
      for (int c = 0; c < table.cols; ++c) {
        if (c) out += ' ';
        out += fmt_double(table.data[static_cast<std::size_t>(r) * table.cols + c]);
      }
      out += '\n';
    }
  }
  atomic_write(path, out);
}

AnalysisReport load_report(const std::filesystem::path& path) {
  LineReader reader(path);
  const std::string version = reader.expect_key("format");
  if (version != "ghostspec-report/1")
    reader.fail("unsupported report format '" + version + "'");

  AnalysisReport report;
  report.method = reader.expect_key("method");

  std::string line;
  while (reader.next(line)) {
    if (line.rfind("scalar: ", 0) == 0) {
      const auto toks = reader.split(line.substr(8));
      if (toks.size() != 2) reader.fail("scalar needs a name and a value");
      report.scalars.emplace_back(toks[0], reader.parse_double(toks[1]));
    } else if (line.rfind("note: ", 0) == 0) {
      const std::string rest = line.substr(6);
      const auto space = rest.find(' ');
      if (space == std::string::npos || space == 0)
        reader.fail("note needs a name and a value");
      report.notes.emplace_back(rest.substr(0, space), rest.substr(space + 1));
    } else if (line.rfind("table: ", 0) == 0) {
      const auto toks = reader.split(line.substr(7));
      if (toks.size() != 3) reader.fail("table needs name, rows, cols");
      AnalysisReport::Table table;
      table.name = toks[0];
      table.rows = static_cast<int>(reader.parse_int(toks[1]));
      table.cols = static_cast<int>(reader.parse_int(toks[2]));
      if (table.rows < 0 || table.cols < 0) reader.fail("negative table shape");
      table.data.reserve(static_cast<std::size_t>(table.rows) * table.cols);
      for (int r = 0; r < table.rows; ++r) {
        auto row =
            reader.parse_doubles(reader.expect_line(), table.cols);
        table.data.insert(table.data.end(), row.begin(), row.end());
      }
      report.tables.push_back(std::move(table));
    } else {
      reader.fail("unrecognized report line '" + line + "'");
    }
  }
  return report;
}

// -------------------------------------------------------------- manifests

void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path) {
  std::set<std::string> seen;
  std::string out;
  out += "format: ghostspec-manifest/1\n";
  out += "config_digest: " + or_dash(manifest.config_digest) + "\n";
  for (const auto& m : manifest.maps) {
    check_token(m.scene, "manifest scene");
    check_token(m.label, "manifest label");
    check_token(m.path, "manifest path");
    if (!seen.insert(m.path).second)
      throw IoError("manifest paths must be unique: " + m.path);
    out += "map: " + m.scene + " " + m.label + " " + fmt_double(m.duration_s) +
           " " + std::to_string(m.seed) + " " + m.path + "\n";
  }
  for (const auto& s : manifest.spectra) {
    check_token(s.label, "manifest label");
    check_token(s.path, "manifest path");
    if (s.map_index < 0 ||
        s.map_index >= static_cast<int>(manifest.maps.size()))
      throw IoError("manifest spectrum references map " +
                    std::to_string(s.map_index) + " which does not exist");
    if (!seen.insert(s.path).second)
      throw IoError("manifest paths must be unique: " + s.path);
    out += "spectrum: " + s.label + " " + std::to_string(s.map_index) + " " +
           std::to_string(s.y_row_lo) + " " + std::to_string(s.y_row_hi) +
           " " + s.path + "\n";
  }
  atomic_write(path, out);
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  LineReader reader(path);
  const std::string version = reader.expect_key("format");
  if (version != "ghostspec-manifest/1")
    reader.fail("unsupported manifest format '" + version + "'");

  DatasetManifest manifest;
  manifest.config_digest = from_dash(reader.expect_key("config_digest"));

  std::set<std::string> seen;
  std::string line;
  while (reader.next(line)) {
    if (line.rfind("map: ", 0) == 0) {
      const auto toks = reader.split(line.substr(5));
      if (toks.size() != 5)
        reader.fail("map entry needs scene, label, duration, seed, path");
      ManifestMapEntry e;
      e.scene = toks[0];
      e.label = toks[1];
      e.duration_s = reader.parse_double(toks[2]);
      e.seed = reader.parse_u64(toks[3]);
      e.path = toks[4];
      if (!seen.insert(e.path).second) reader.fail("duplicate path " + e.path);
      manifest.maps.push_back(std::move(e));
    } else if (line.rfind("spectrum: ", 0) == 0) {
      const auto toks = reader.split(line.substr(10));
      if (toks.size() != 5)
        reader.fail("spectrum entry needs label, map index, rows, path");
      ManifestSpectrumEntry e;
      e.label = toks[0];
      e.map_index = static_cast<int>(reader.parse_int(toks[1]));
      e.y_row_lo = static_cast<int>(reader.parse_int(toks[2]));
      e.y_row_hi = static_cast<int>(reader.parse_int(toks[3]));
      e.path = toks[4];
      if (e.map_index < 0 ||
          e.map_index >= static_cast<int>(manifest.maps.size()))
        reader.fail("spectrum references unknown map index " + toks[1]);
      if (!seen.insert(e.path).second) reader.fail("duplicate path " + e.path);
      manifest.spectra.push_back(std::move(e));
    } else {
      reader.fail("unrecognized manifest line '" + line + "'");
    }
  }
  return manifest;
}

std::vector<SpectrumVector> load_manifest_spectra(
    const std::filesystem::path& manifest_path) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const std::filesystem::path base = manifest_path.parent_path();

  for (const auto& m : manifest.maps) {
    const LambdaYMap map = load_map(base / m.path);
    if (!manifest.config_digest.empty() && !map.config_digest.empty() &&
        map.config_digest != manifest.config_digest)
      throw IoError("map " + m.path + " digest " + map.config_digest +
                    " does not match manifest digest " +
                    manifest.config_digest);
  }

  std::vector<SpectrumVector> spectra;
  spectra.reserve(manifest.spectra.size());
  for (const auto& e : manifest.spectra) {
    SpectrumVector s = load_spectrum(base / e.path);
    if (s.label != e.label)
      throw IoError("spectrum " + e.path + " label '" + s.label +
                    "' disagrees with manifest label '" + e.label + "'");
    spectra.push_back(std::move(s));
  }
  return spectra;
}

}  // namespace ghostspec
