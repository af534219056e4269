#include "ghostspec/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ghostspec/errors.hpp"

namespace ghostspec {

TransmissionProfile TransmissionProfile::blank() { return {}; }

TransmissionProfile TransmissionProfile::neutral(double t0) {
  TransmissionProfile p;
  p.kind_ = Kind::neutral;
  p.t0_ = t0;
  return p;
}

TransmissionProfile TransmissionProfile::bandpass(double center_nm,
                                                  double fwhm_nm, double peak) {
  TransmissionProfile p;
  p.kind_ = Kind::bandpass;
  p.center_nm_ = center_nm;
  p.fwhm_nm_ = fwhm_nm;
  p.peak_ = peak;
  return p;
}

TransmissionProfile TransmissionProfile::tabulated(
    std::vector<std::pair<double, double>> knots) {
  TransmissionProfile p;
  p.kind_ = Kind::tabulated;
  p.knots_ = std::move(knots);
  return p;
}

void TransmissionProfile::validate() const {
  switch (kind_) {
    case Kind::blank:
      return;
    case Kind::neutral:
      if (!(t0_ >= 0.0 && t0_ <= 1.0))
        throw ConfigError("neutral transmission must be in [0, 1]");
      return;
    case Kind::bandpass:
      if (!(peak_ >= 0.0 && peak_ <= 1.0))
        throw ConfigError("bandpass peak must be in [0, 1]");
      if (!(fwhm_nm_ > 0.0)) throw ConfigError("bandpass fwhm must be > 0");
      if (!(center_nm_ > 0.0)) throw ConfigError("bandpass center must be > 0");
      return;
    case Kind::tabulated:
      if (knots_.size() < 2)
        throw ConfigError("tabulated profile needs at least 2 knots");
      for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!(knots_[i].second >= 0.0 && knots_[i].second <= 1.0))
          throw ConfigError("tabulated transmission must be in [0, 1]");
        if (i > 0 && !(knots_[i].first > knots_[i - 1].first))
          throw ConfigError("tabulated knots must be strictly increasing");
      }
      return;
  }
}

double TransmissionProfile::operator()(double lambda_nm) const {
  switch (kind_) {
    case Kind::blank:
      return 1.0;
    case Kind::neutral:
      return t0_;
    case Kind::bandpass: {
      const double d = lambda_nm - center_nm_;
      // half width at half maximum: T(center +- fwhm/2) = peak / 2
      return peak_ *
             std::exp(-4.0 * 0.6931471805599453 * d * d / (fwhm_nm_ * fwhm_nm_));
    }
    case Kind::tabulated: {
      if (lambda_nm <= knots_.front().first) return knots_.front().second;
      if (lambda_nm >= knots_.back().first) return knots_.back().second;
      auto hi = std::upper_bound(
          knots_.begin(), knots_.end(), lambda_nm,
          [](double l, const auto& knot) { return l < knot.first; });
      auto lo = hi - 1;
      const double t = (lambda_nm - lo->first) / (hi->first - lo->first);
      return lo->second + t * (hi->second - lo->second);
    }
  }
  return 1.0;
}

std::string TransmissionProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::blank:
      os << "blank";
      break;
    case Kind::neutral:
      os << "neutral " << t0_;
      break;
    case Kind::bandpass:
      os << "bandpass " << center_nm_ << " " << fwhm_nm_ << " " << peak_;
      break;
    case Kind::tabulated:
      os << "tabulated";
      for (const auto& [l, t] : knots_) os << " " << l << ":" << t;
      break;
  }
  return os.str();
}

void SceneMask::validate() const {
  if (!(magnification > 0.0))
    throw ConfigError("scene magnification must be > 0");
  default_transmission.validate();
  for (const auto& r : regions) {
    if (!(r.y_lo_mm < r.y_hi_mm))
      throw ConfigError("scene region interval must have y_lo < y_hi");
    r.transmission.validate();
  }
  auto sorted = regions;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.y_lo_mm < b.y_lo_mm; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].y_lo_mm < sorted[i - 1].y_hi_mm)
      throw ConfigError("scene regions overlap");
  }
}

double transmission_at(const SceneMask& mask, double y_idler_crystal_mm,
                       double lambda_idler_nm) {
  const double y_obj = mask.magnification * y_idler_crystal_mm;
  for (const auto& r : mask.regions) {
    if (y_obj >= r.y_lo_mm && y_obj < r.y_hi_mm)
      return r.transmission(lambda_idler_nm);
  }
  return mask.default_transmission(lambda_idler_nm);
}

bool apply_object(const PairEvent& event, const SceneMask& mask,
                  RandomStream& rng) {
  const double t = transmission_at(mask, event.y_idler_mm, event.lambda_idler_nm);
  return rng.uniform() < t;
}

}  // namespace ghostspec
