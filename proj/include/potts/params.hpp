#ifndef POTTS_PARAMS_HPP
#define POTTS_PARAMS_HPP

#include <cmath>
#include <stdexcept>

namespace potts {

inline double beta_critical(double q) { return std::log(1.0 + std::sqrt(q)); }
inline double p_critical(double q) { return std::sqrt(q) / (1.0 + std::sqrt(q)); }

struct PottsParams {
  int q = 2;
  double beta = 1.0;

  // beta = 0 is admitted: it is the independent-coupling edge case several
  // tests exercise
  void validate() const {
    if (q < 2) throw std::invalid_argument("PottsParams: q must be >= 2");
    if (!(beta >= 0.0)) throw std::invalid_argument("PottsParams: beta must be >= 0");
  }
  bool supercritical() const { return beta > beta_critical(q); }

  // dual FK edge weight of the Edwards-Sokal coupling
  double p_dual() const { return 1.0 - std::exp(-beta); }
  // primal (subcritical for beta > beta_c) FK edge weight
  double p_primal() const { return q / (std::exp(beta) - 1.0 + q); }
};

struct FKParams {
  double p = 0.5;
  double q = 2.0;

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("FKParams: p must be in (0,1)");
    if (!(q >= 1.0)) throw std::invalid_argument("FKParams: q must be >= 1");
  }
  bool subcritical() const { return p < p_critical(q); }
};

// p* solving p p* / [(1-p)(1-p*)] = q; an involution.
inline FKParams dual_params(const FKParams& fk) {
  fk.validate();
  double ps = fk.q * (1.0 - fk.p) / (fk.p + fk.q * (1.0 - fk.p));
  return {ps, fk.q};
}

}  // namespace potts

#endif
