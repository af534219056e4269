#include "ghostspec/detection.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "ghostspec/errors.hpp"

namespace ghostspec {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("detector." + field + ": " + what);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Events per RNG stream. Fixed so the stream partition (and therefore the
// result) does not depend on how many workers run.
constexpr std::uint64_t kBatchEvents = 1u << 20;

// Stream ids: 0 draws the event total, 1..B drive batches, this one the darks.
constexpr std::uint64_t kDarkStream = 1ULL << 32;

}  // namespace

void DetectorConfig::validate() const {
  require(bucket_efficiency >= 0 && bucket_efficiency <= 1, "bucket_efficiency",
          "must be in [0, 1]");
  require(signal_path_efficiency >= 0 && signal_path_efficiency <= 1,
          "signal_path_efficiency", "must be in [0, 1]");
  require(n_spectral_pixels >= 2, "n_spectral_pixels", "must be >= 2");
  require(n_spatial_pixels >= 2, "n_spatial_pixels", "must be >= 2");
  require(lambda_min_nm < lambda_max_nm, "lambda_min_nm",
          "must be below lambda_max_nm");
  require(y_min_mm < y_max_mm, "y_min_mm", "must be below y_max_mm");
  require(iccd_magnification > 0, "iccd_magnification", "must be > 0");
  require(dark_rate_per_pixel_hz >= 0, "dark_rate_per_pixel_hz",
          "must be >= 0");
  if (idler_prefilter) idler_prefilter->validate();
}

std::uint64_t LambdaYMap::total_counts() const {
  std::uint64_t total = 0;
  for (std::uint32_t c : counts) total += c;
  return total;
}

bool LambdaYMap::same_calibration(const LambdaYMap& other) const {
  return n_spatial == other.n_spatial && n_spectral == other.n_spectral &&
         y_centers_mm == other.y_centers_mm &&
         lambda_centers_nm == other.lambda_centers_nm;
}

std::optional<PixelCoord> bin_signal(const PairEvent& event,
                                     const DetectorConfig& config) {
  const double frac_lambda = (event.lambda_signal_nm - config.lambda_min_nm) /
                             (config.lambda_max_nm - config.lambda_min_nm);
  const double y_iccd = config.iccd_magnification * event.y_signal_mm;
  const double frac_y =
      (y_iccd - config.y_min_mm) / (config.y_max_mm - config.y_min_mm);
  if (frac_lambda < 0.0 || frac_y < 0.0) return std::nullopt;
  const int spectral =
      static_cast<int>(frac_lambda * config.n_spectral_pixels);
  const int spatial = static_cast<int>(frac_y * config.n_spatial_pixels);
  if (spectral >= config.n_spectral_pixels || spatial >= config.n_spatial_pixels)
    return std::nullopt;
  return PixelCoord{spectral, spatial};
}

std::string run_digest(const SourceConfig& source, const SceneMask& mask,
                       const DetectorConfig& det) {
  std::ostringstream os;
  os.precision(17);
  os << "source " << source.pump_wavelength_nm << " "
     << source.center_signal_wavelength_nm << " " << source.spectral_fwhm_nm
     << " " << source.beam_waist_mm << " " << source.correlation_width_mm
     << " " << source.pair_rate_hz << "\n";
  os << "scene mag=" << mask.magnification
     << " default=" << mask.default_transmission.describe() << "\n";
  for (const auto& r : mask.regions)
    os << "region " << r.y_lo_mm << " " << r.y_hi_mm << " "
       << r.transmission.describe() << "\n";
  os << "detector " << det.bucket_efficiency << " "
     << det.signal_path_efficiency << " " << det.n_spectral_pixels << " "
     << det.n_spatial_pixels << " " << det.lambda_min_nm << " "
     << det.lambda_max_nm << " " << det.y_min_mm << " " << det.y_max_mm << " "
     << det.iccd_magnification << " " << det.dark_rate_per_pixel_hz << "\n";
  if (det.idler_prefilter)
    os << "prefilter " << det.idler_prefilter->describe() << "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(os.str())));
  return buf;
}

namespace {

LambdaYMap empty_map(const SourceConfig& source, const SceneMask& mask,
                     const DetectorConfig& det, std::uint64_t seed) {
  LambdaYMap map;
  map.n_spatial = det.n_spatial_pixels;
  map.n_spectral = det.n_spectral_pixels;
  map.counts.assign(
      static_cast<std::size_t>(map.n_spatial) * map.n_spectral, 0);
  map.y_centers_mm.resize(map.n_spatial);
  map.lambda_centers_nm.resize(map.n_spectral);
  const double dy = (det.y_max_mm - det.y_min_mm) / map.n_spatial;
  for (int i = 0; i < map.n_spatial; ++i)
    map.y_centers_mm[i] = det.y_min_mm + (i + 0.5) * dy;
  const double dl = (det.lambda_max_nm - det.lambda_min_nm) / map.n_spectral;
  for (int i = 0; i < map.n_spectral; ++i)
    map.lambda_centers_nm[i] = det.lambda_min_nm + (i + 0.5) * dl;
  map.acquisition_time_s = 0.0;
  map.seed = seed;
  map.config_digest = run_digest(source, mask, det);
  return map;
}

void run_batch(const SourceConfig& source, const SceneMask& mask,
               const DetectorConfig& det, std::uint64_t seed,
               std::uint64_t batch_index, std::uint64_t n_events,
               LambdaYMap& map) {
  RandomStream rng(seed, 1 + batch_index);
  for (std::uint64_t i = 0; i < n_events; ++i) {
    const PairEvent ev = sample_pair(source, rng);
    if (det.idler_prefilter &&
        !rng.bernoulli((*det.idler_prefilter)(ev.lambda_idler_nm)))
      continue;
    if (!apply_object(ev, mask, rng)) continue;
    if (!rng.bernoulli(det.bucket_efficiency)) continue;
    if (!rng.bernoulli(det.signal_path_efficiency)) continue;
    const auto pixel = bin_signal(ev, det);
    if (!pixel) continue;
    ++map.at(pixel->spatial, pixel->spectral);
  }
}

}  // namespace

LambdaYMap simulate_acquisition(const SourceConfig& source,
                                const SceneMask& mask,
                                const DetectorConfig& det, double duration_s,
                                std::uint64_t seed, int n_workers) {
  source.validate();
  mask.validate();
  det.validate();
  if (!(duration_s > 0.0))
    throw ConfigError("simulate_acquisition: duration must be > 0");

  const std::uint64_t n_events =
      RandomStream(seed, 0).poisson(source.pair_rate_hz * duration_s);
  const std::uint64_t n_batches = (n_events + kBatchEvents - 1) / kBatchEvents;

  if (n_workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n_workers = hw > 0 ? static_cast<int>(hw) : 1;
  }
  if (static_cast<std::uint64_t>(n_workers) > n_batches)
    n_workers = static_cast<int>(n_batches > 0 ? n_batches : 1);

  std::vector<LambdaYMap> partials(n_workers,
                                   empty_map(source, mask, det, seed));
  std::atomic<std::uint64_t> next_batch{0};

  auto work = [&](int worker) {
    for (;;) {
      const std::uint64_t b = next_batch.fetch_add(1);
      if (b >= n_batches) break;
      const std::uint64_t first = b * kBatchEvents;
      const std::uint64_t count = std::min(kBatchEvents, n_events - first);
      run_batch(source, mask, det, seed, b, count, partials[worker]);
    }
  };

  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  LambdaYMap map = std::move(partials[0]);
  for (int w = 1; w < n_workers; ++w) map = merge_maps(map, partials[w]);

  // darks go in once, after the merge
  RandomStream dark_rng(seed, kDarkStream);
  const double dark_mean = det.dark_rate_per_pixel_hz * duration_s;
  if (dark_mean > 0.0) {
    for (auto& c : map.counts) {
      const std::uint64_t dark = dark_rng.poisson(dark_mean);
      const std::uint64_t total = c + dark;
      if (total > 0x7FFFFFFFULL)
        throw ConfigError("simulate_acquisition: pixel count overflow");
      c = static_cast<std::uint32_t>(total);
    }
  }

  map.acquisition_time_s = duration_s;
  map.seed = seed;
  return map;
}

LambdaYMap merge_maps(const LambdaYMap& a, const LambdaYMap& b) {
  if (!a.same_calibration(b))
    throw ConfigError("merge_maps: calibration or dimension mismatch");
  LambdaYMap out = a;
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    const std::uint64_t total =
        static_cast<std::uint64_t>(a.counts[i]) + b.counts[i];
    if (total > 0x7FFFFFFFULL)
      throw ConfigError("merge_maps: pixel count overflow");
    out.counts[i] = static_cast<std::uint32_t>(total);
  }
  out.acquisition_time_s = a.acquisition_time_s + b.acquisition_time_s;
  return out;
}

}  // namespace ghostspec
