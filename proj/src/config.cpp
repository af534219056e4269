#include "ghostspec/config.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <span>
#include <sstream>

#include "ghostspec/errors.hpp"

namespace ghostspec {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line;
  mutable bool consumed = false;
};

struct RawConfig {
  std::string path;
  std::vector<Entry> entries;

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(path + ":" + std::to_string(line) + ": " + what);
  }

  const Entry* find(const std::string& key) const {
    const Entry* found = nullptr;
    for (const auto& e : entries) {
      if (e.key == key) {
        if (found) fail(e.line, "duplicate key '" + key + "'");
        found = &e;
      }
    }
    if (found) found->consumed = true;
    return found;
  }

  std::vector<const Entry*> find_all(const std::string& key) const {
    std::vector<const Entry*> out;
    for (const auto& e : entries) {
      if (e.key == key) {
        e.consumed = true;
        out.push_back(&e);
      }
    }
    return out;
  }

  double as_double(const Entry& e) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end != e.value.c_str() + e.value.size() || e.value.empty() ||
        errno == ERANGE)
      fail(e.line, "key '" + e.key + "': bad number '" + e.value + "'");
    return v;
  }

  long long as_int(const Entry& e) const {
    long long v = 0;
    auto [p, ec] = std::from_chars(e.value.data(),
                                   e.value.data() + e.value.size(), v);
    if (ec != std::errc() || p != e.value.data() + e.value.size())
      fail(e.line, "key '" + e.key + "': bad integer '" + e.value + "'");
    return v;
  }

  std::uint64_t as_u64(const Entry& e) const {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(e.value.data(),
                                   e.value.data() + e.value.size(), v);
    if (ec != std::errc() || p != e.value.data() + e.value.size())
      fail(e.line, "key '" + e.key + "': bad unsigned integer '" + e.value + "'");
    return v;
  }

  void get(const std::string& key, double& target) const {
    if (const Entry* e = find(key)) target = as_double(*e);
  }
  void get(const std::string& key, int& target) const {
    if (const Entry* e = find(key)) target = static_cast<int>(as_int(*e));
  }
  void get(const std::string& key, std::uint64_t& target) const {
    if (const Entry* e = find(key)) target = as_u64(*e);
  }
  void get(const std::string& key, std::string& target) const {
    if (const Entry* e = find(key)) target = e->value;
  }
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

RawConfig parse_raw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  RawConfig raw;
  raw.path = path.string();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      raw.fail(line_no, "expected 'section.key = value', got '" + line + "'");
    Entry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = line_no;
    if (e.key.empty()) raw.fail(line_no, "empty key");
    raw.entries.push_back(std::move(e));
  }
  return raw;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

TransmissionProfile parse_profile(const RawConfig& raw, const Entry& e,
                                  std::span<const std::string> toks,
                                  const std::filesystem::path& base_dir) {
  if (toks.empty()) raw.fail(e.line, "key '" + e.key + "': missing profile");
  const std::string& kind = toks[0];
  auto want = [&](std::size_t n) {
    if (toks.size() != n + 1)
      raw.fail(e.line, "key '" + e.key + "': profile '" + kind + "' takes " +
                           std::to_string(n) + " parameter(s)");
  };
  auto num = [&](std::size_t i) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(toks[i].c_str(), &end);
    if (end != toks[i].c_str() + toks[i].size() || errno == ERANGE)
      raw.fail(e.line, "key '" + e.key + "': bad number '" + toks[i] + "'");
    return v;
  };
  TransmissionProfile profile;
  if (kind == "blank") {
    want(0);
    profile = TransmissionProfile::blank();
  } else if (kind == "neutral") {
    want(1);
    profile = TransmissionProfile::neutral(num(1));
  } else if (kind == "bandpass") {
    want(3);
    profile = TransmissionProfile::bandpass(num(1), num(2), num(3));
  } else if (kind == "tabulated") {
    want(1);
    profile = load_transmission_table(base_dir / toks[1]);
  } else {
    raw.fail(e.line, "key '" + e.key + "': unknown profile kind '" + kind +
                         "' (blank|neutral|bandpass|tabulated)");
  }
  try {
    profile.validate();
  } catch (const ConfigError& err) {
    raw.fail(e.line, "key '" + e.key + "': " + err.what());
  }
  return profile;
}

}  // namespace

TransmissionProfile load_transmission_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open transmission table: " + path.string());
  std::vector<std::pair<double, double>> knots;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream is(line);
    double lambda = 0, t = 0;
    std::string extra;
    if (!(is >> lambda >> t) || (is >> extra))
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected two columns (lambda_nm transmission)");
    knots.emplace_back(lambda, t);
  }
  auto profile = TransmissionProfile::tabulated(std::move(knots));
  try {
    profile.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
  return profile;
}

const SceneConfig& RunConfig::scene(const std::string& name) const {
  const auto it = scenes.find(name);
  if (it == scenes.end())
    throw ConfigError("unknown scene '" + name + "' (defined: " + [this] {
      std::string names;
      for (const auto& [n, s] : scenes) {
        if (!names.empty()) names += ", ";
        names += n;
      }
      return names.empty() ? std::string("none") : names;
    }() + ")");
  return it->second;
}

std::string RunConfig::digest() const {
  std::ostringstream os;
  os.precision(17);
  os << "source " << source.pump_wavelength_nm << " "
     << source.center_signal_wavelength_nm << " " << source.spectral_fwhm_nm
     << " " << source.beam_waist_mm << " " << source.correlation_width_mm
     << " " << source.pair_rate_hz << "\n";
  os << "detector " << detector.bucket_efficiency << " "
     << detector.signal_path_efficiency << " " << detector.n_spectral_pixels
     << " " << detector.n_spatial_pixels << " " << detector.lambda_min_nm
     << " " << detector.lambda_max_nm << " " << detector.y_min_mm << " "
     << detector.y_max_mm << " " << detector.iccd_magnification << " "
     << detector.dark_rate_per_pixel_hz << "\n";
  for (const auto& [name, scene] : scenes) {  // std::map: sorted, canonical
    os << "scene " << name << " mag=" << scene.mask.magnification
       << " default=" << scene.mask.default_transmission.describe();
    for (const auto& r : scene.mask.regions)
      os << " region=" << r.y_lo_mm << "," << r.y_hi_mm << ","
         << r.transmission.describe();
    if (scene.prefilter) os << " prefilter=" << scene.prefilter->describe();
    os << "\n";
  }
  os << "dataset " << dataset.seed << " " << dataset.reference_duration_s
     << " " << dataset.split_duration_s << " " << dataset.repetitions << " "
     << dataset.blank_scene << " " << dataset.filter_a_scene << " "
     << dataset.filter_b_scene << " " << dataset.split_a_scene << " "
     << dataset.split_b_scene << " " << dataset.split_boundary_mm << " "
     << dataset.region_margin_rows << "\n";
  os << "analysis " << analysis.seed << " " << analysis.k_max << " "
     << analysis.restarts << " " << analysis.nmf_rank << " "
     << analysis.nmf_max_iter << " " << analysis.nmf_tol << " "
     << analysis.kmeans_max_iter << " " << analysis.kmeans_tol << " "
     << analysis.lda_regularization << " " << analysis.lda_predim << "\n";

  const std::string text = os.str();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const RawConfig raw = parse_raw(path);
  const std::filesystem::path base_dir = path.parent_path();
  RunConfig config;

  raw.get("source.pump_wavelength_nm", config.source.pump_wavelength_nm);
  raw.get("source.center_signal_wavelength_nm",
          config.source.center_signal_wavelength_nm);
  raw.get("source.spectral_fwhm_nm", config.source.spectral_fwhm_nm);
  raw.get("source.beam_waist_mm", config.source.beam_waist_mm);
  raw.get("source.correlation_width_mm", config.source.correlation_width_mm);
  raw.get("source.pair_rate_hz", config.source.pair_rate_hz);

  raw.get("detector.bucket_efficiency", config.detector.bucket_efficiency);
  raw.get("detector.signal_path_efficiency",
          config.detector.signal_path_efficiency);
  raw.get("detector.n_spectral_pixels", config.detector.n_spectral_pixels);
  raw.get("detector.n_spatial_pixels", config.detector.n_spatial_pixels);
  raw.get("detector.lambda_min_nm", config.detector.lambda_min_nm);
  raw.get("detector.lambda_max_nm", config.detector.lambda_max_nm);
  raw.get("detector.y_min_mm", config.detector.y_min_mm);
  raw.get("detector.y_max_mm", config.detector.y_max_mm);
  raw.get("detector.iccd_magnification", config.detector.iccd_magnification);
  raw.get("detector.dark_rate_per_pixel_hz",
          config.detector.dark_rate_per_pixel_hz);

  // scene sections: every key shaped scene.<name>.<field>
  std::set<std::string> scene_names;
  for (const auto& e : raw.entries) {
    if (e.key.rfind("scene.", 0) != 0) continue;
    const auto rest = e.key.substr(6);
    const auto dot = rest.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size())
      raw.fail(e.line, "scene keys look like scene.<name>.<field>: '" +
                           e.key + "'");
    scene_names.insert(rest.substr(0, dot));
  }
  for (const auto& name : scene_names) {
    SceneConfig scene;
    const std::string prefix = "scene." + name + ".";
    if (const Entry* e = raw.find(prefix + "magnification"))
      scene.mask.magnification = raw.as_double(*e);
    if (const Entry* e = raw.find(prefix + "default")) {
      const auto toks = split_ws(e->value);
      scene.mask.default_transmission = parse_profile(raw, *e, toks, base_dir);
    }
    for (const Entry* e : raw.find_all(prefix + "region")) {
      const auto toks = split_ws(e->value);
      if (toks.size() < 3)
        raw.fail(e->line,
                 "region needs 'y_lo_mm y_hi_mm profile...': '" + e->value + "'");
      SceneRegion region;
      {
        errno = 0;
        char* end = nullptr;
        region.y_lo_mm = std::strtod(toks[0].c_str(), &end);
        if (end != toks[0].c_str() + toks[0].size())
          raw.fail(e->line, "bad region bound '" + toks[0] + "'");
        region.y_hi_mm = std::strtod(toks[1].c_str(), &end);
        if (end != toks[1].c_str() + toks[1].size())
          raw.fail(e->line, "bad region bound '" + toks[1] + "'");
      }
      region.transmission = parse_profile(
          raw, *e, std::span(toks).subspan(2), base_dir);
      scene.mask.regions.push_back(std::move(region));
    }
    if (const Entry* e = raw.find(prefix + "prefilter")) {
      const auto toks = split_ws(e->value);
      scene.prefilter = parse_profile(raw, *e, toks, base_dir);
    }
    try {
      scene.mask.validate();
    } catch (const ConfigError& err) {
      throw ConfigError(raw.path + ": scene '" + name + "': " + err.what());
    }
    config.scenes.emplace(name, std::move(scene));
  }

  // seeds are explicit: a config without them cannot drive anything
  if (const Entry* e = raw.find("dataset.seed"))
    config.dataset.seed = raw.as_u64(*e);
  else
    throw ConfigError(raw.path + ": missing required key 'dataset.seed'");
  raw.get("dataset.reference_duration_s", config.dataset.reference_duration_s);
  raw.get("dataset.split_duration_s", config.dataset.split_duration_s);
  raw.get("dataset.repetitions", config.dataset.repetitions);
  raw.get("dataset.blank_scene", config.dataset.blank_scene);
  raw.get("dataset.filter_a_scene", config.dataset.filter_a_scene);
  raw.get("dataset.filter_b_scene", config.dataset.filter_b_scene);
  raw.get("dataset.split_a_scene", config.dataset.split_a_scene);
  raw.get("dataset.split_b_scene", config.dataset.split_b_scene);
  raw.get("dataset.split_boundary_mm", config.dataset.split_boundary_mm);
  raw.get("dataset.region_margin_rows", config.dataset.region_margin_rows);

  if (const Entry* e = raw.find("analysis.seed"))
    config.analysis.seed = raw.as_u64(*e);
  else
    throw ConfigError(raw.path + ": missing required key 'analysis.seed'");
  raw.get("analysis.k_max", config.analysis.k_max);
  raw.get("analysis.restarts", config.analysis.restarts);
  raw.get("analysis.nmf_rank", config.analysis.nmf_rank);
  raw.get("analysis.nmf_max_iter", config.analysis.nmf_max_iter);
  raw.get("analysis.nmf_tol", config.analysis.nmf_tol);
  raw.get("analysis.kmeans_max_iter", config.analysis.kmeans_max_iter);
  raw.get("analysis.kmeans_tol", config.analysis.kmeans_tol);
  raw.get("analysis.lda_regularization", config.analysis.lda_regularization);
  raw.get("analysis.lda_predim", config.analysis.lda_predim);

  for (const auto& e : raw.entries)
    if (!e.consumed)
      raw.fail(e.line, "unknown key '" + e.key + "'");

  config.source.validate();
  config.detector.validate();
  if (config.dataset.repetitions < 0)
    throw ConfigError(raw.path + ": dataset.repetitions must be >= 0");
  if (config.dataset.region_margin_rows < 0)
    throw ConfigError(raw.path + ": dataset.region_margin_rows must be >= 0");
  return config;
}

}  // namespace ghostspec
