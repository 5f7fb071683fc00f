#pragma once

#include <iosfwd>
#include <vector>

namespace gbs {

/// Probability of nu photon-pair events from `sources` equally squeezed
/// single-mode squeezers: the negative binomial
/// P(2 nu) = Gamma(nu + K/2) / (Gamma(K/2) nu!) sech^K(r) tanh^(2 nu)(r),
/// evaluated in log space.
double gbs_pair_probability(int sources, double r, int pairs);

struct ModalMean {
  long long modal_photons;  // 2 floor((K/2 - 1) sinh^2 r); argmax-based for K = 1
  long long argmax_pairs;   // argmax_nu of gbs_pair_probability
  double mean_photons;      // K sinh^2 r
};

ModalMean modal_and_mean(int sources, double r);

/// [sum_{n>=2} P(n)] / P(1) for a thermal mode; closed form equals the mean.
double dilute_ratio(double mean_per_mode);

/// Probability of nu single-pair events from `sources` two-mode squeezers:
/// the binomial C(K, nu) sech^(2K)(r) tanh^(2 nu)(r).
double pfbs_pair_probability(int sources, double r, int pairs);

struct RateRatio {
  double ratio;      // C(K,nu) / C(K+nu-1,nu)
  double asymptote;  // ((K-nu)/(K-1))^nu
};

/// PFBS-to-GBS generation ratio for K two-mode squeezers against 2K
/// single-mode squeezers at equal squeezing. Requires K >= nu >= 1.
RateRatio rate_ratio(int sources, int pairs);

struct BreakEvenRow {
  int n;            // photon number, even
  double det_090;   // 0.9^n deterministic source
  double det_he;    // 0.247^n
  double det_loredo;// 0.14^n
  double det_wang;  // (0.337 * 0.845)^n
  double gbs;       // K = n^2 single-mode squeezers, modal pairs = n/2
  double sbs;       // K = n^2 two-mode squeezers heralding n photons
};

/// Generation-rate comparison over even photon numbers in [n_min, n_max].
std::vector<BreakEvenRow> break_even_curves(int n_min, int n_max);

/// CSV with header N,det_090,det_he,det_loredo,det_wang,gbs,sbs.
void write_break_even_csv(std::ostream& os,
                          const std::vector<BreakEvenRow>& rows);

}  // namespace gbs
