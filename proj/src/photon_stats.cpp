#include "gbs/photon_stats.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "gbs/io.hpp"

namespace gbs {

namespace {

void check_source_args(int sources, double r) {
  if (sources < 1) {
    throw std::invalid_argument("photon statistics: at least one source required");
  }
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("photon statistics: squeezing must be finite and non-negative");
  }
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double gbs_pair_probability(int sources, double r, int pairs) {
  check_source_args(sources, r);
  if (pairs < 0) {
    throw std::invalid_argument("gbs_pair_probability: negative pair count");
  }
  if (r == 0.0) return pairs == 0 ? 1.0 : 0.0;
  const double half_k = 0.5 * sources;
  const double log_p = std::lgamma(pairs + half_k) - std::lgamma(half_k) -
                       std::lgamma(pairs + 1.0) -
                       sources * std::log(std::cosh(r)) +
                       2.0 * pairs * std::log(std::tanh(r));
  return std::exp(log_p);
}

ModalMean modal_and_mean(int sources, double r) {
  check_source_args(sources, r);
  const double mean_pairs_scale = std::sinh(r) * std::sinh(r);

  ModalMean out;
  out.mean_photons = sources * mean_pairs_scale;

  // argmax of the pair distribution: P(nu+1)/P(nu) = tanh^2 r (nu + K/2)/(nu + 1)
  const double t2 = std::tanh(r) * std::tanh(r);
  long long argmax = 0;
  while (t2 * (argmax + 0.5 * sources) / (argmax + 1.0) > 1.0) ++argmax;
  out.argmax_pairs = argmax;

  if (sources == 1) {
    // the closed form floor((K/2 - 1) sinh^2 r) degenerates at K = 1
    out.modal_photons = 2 * argmax;
  } else {
    out.modal_photons = 2 * static_cast<long long>(std::floor(
                                (0.5 * sources - 1.0) * mean_pairs_scale));
  }
  return out;
}

double dilute_ratio(double mean_per_mode) {
  if (!(mean_per_mode >= 0.0) || !std::isfinite(mean_per_mode)) {
    throw std::invalid_argument("dilute_ratio: mean must be finite and non-negative");
  }
  // For thermal P(n) = nbar^n / (1 + nbar)^(n+1) the tail-to-single ratio
  // collapses to nbar exactly.
  return mean_per_mode;
}

double pfbs_pair_probability(int sources, double r, int pairs) {
  check_source_args(sources, r);
  if (pairs < 0) {
    throw std::invalid_argument("pfbs_pair_probability: negative pair count");
  }
  if (pairs > sources) return 0.0;
  if (r == 0.0) return pairs == 0 ? 1.0 : 0.0;
  const double log_p = log_choose(sources, pairs) -
                       2.0 * sources * std::log(std::cosh(r)) +
                       2.0 * pairs * std::log(std::tanh(r));
  return std::exp(log_p);
}

RateRatio rate_ratio(int sources, int pairs) {
  if (pairs < 1 || sources < pairs) {
    throw std::invalid_argument("rate_ratio: need sources >= pairs >= 1");
  }
  const double log_ratio = std::lgamma(sources + 1.0) + std::lgamma(sources + 0.0) -
                           std::lgamma(sources - pairs + 1.0) -
                           std::lgamma(sources + pairs + 0.0);
  RateRatio out;
  out.ratio = std::exp(log_ratio);
  out.asymptote =
      sources == 1 ? 1.0
                   : std::pow((sources - pairs) / (sources - 1.0), pairs);
  return out;
}

std::vector<BreakEvenRow> break_even_curves(int n_min, int n_max) {
  if (n_min < 2 || n_max > 200 || n_min > n_max) {
    throw std::invalid_argument("break_even_curves: range must lie within [2, 200]");
  }
  std::vector<BreakEvenRow> rows;
  for (int n = n_min + (n_min % 2); n <= n_max; n += 2) {
    const int pairs = n / 2;
    const int k = n * n;
    BreakEvenRow row;
    row.n = n;
    row.det_090 = std::pow(0.9, n);
    row.det_he = std::pow(0.247, n);
    row.det_loredo = std::pow(0.14, n);
    row.det_wang = std::pow(0.337 * 0.845, n);
    // GBS: K = n^2 squeezers tuned so n/2 pairs is the modal number
    const double r_gbs = std::asinh(std::sqrt(pairs / (0.5 * k - 1.0)));
    row.gbs = gbs_pair_probability(k, r_gbs, pairs);
    // Scattershot: K = n^2 pair sources must herald n pairs for n sampled
    // photons; the squeezing follows the same modal rule applied to the
    // equivalent 2K-squeezer experiment.
    const double r_sbs = std::asinh(std::sqrt(n / (k - 1.0)));
    row.sbs = pfbs_pair_probability(k, r_sbs, n);
    rows.push_back(row);
  }
  return rows;
}

void write_break_even_csv(std::ostream& os,
                          const std::vector<BreakEvenRow>& rows) {
  os << "N,det_090,det_he,det_loredo,det_wang,gbs,sbs\n";
  for (const BreakEvenRow& row : rows) {
    os << row.n << ',' << format_double(row.det_090) << ','
       << format_double(row.det_he) << ',' << format_double(row.det_loredo)
       << ',' << format_double(row.det_wang) << ',' << format_double(row.gbs)
       << ',' << format_double(row.sbs) << '\n';
  }
}

}  // namespace gbs
