#include "mfcz/tolerances.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mfcz {

Tolerances load_tolerances(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("tolerances: cannot open " + path);
  Tolerances tol;
  std::map<std::string, double*> doubles{
      {"czd_cancellation_rel", &tol.czd_cancellation_rel},
      {"czd_identity_rel", &tol.czd_identity_rel},
      {"czd_good_l2_ceiling", &tol.czd_good_l2_ceiling},
      {"czd_local_l2_ceiling", &tol.czd_local_l2_ceiling},
      {"domination_slope_lo", &tol.domination_slope_lo},
      {"domination_slope_hi", &tol.domination_slope_hi},
      {"mt_bound_ceiling", &tol.mt_bound_ceiling},
      {"weak11_slope_max", &tol.weak11_slope_max},
      {"lower_bound_slope_min", &tol.lower_bound_slope_min},
      {"strong_slope_margin", &tol.strong_slope_margin},
      {"weights_scale_invariance", &tol.weights_scale_invariance},
      {"sparse_weighted_ceiling", &tol.sparse_weighted_ceiling},
      {"sparse_weighted_trend_max", &tol.sparse_weighted_trend_max},
      {"main_theorem_n_slope_max", &tol.main_theorem_n_slope_max},
      {"main_theorem_w_slope_max", &tol.main_theorem_w_slope_max},
  };
  std::string line;
  int lineno = 0;
  while (std::getline(file, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string key, eq;
    if (!(in >> key)) continue;  // blank line
    if (!(in >> eq) || eq != "=") {
      throw std::invalid_argument("tolerances: expected 'key = value' at " + path +
                                  ":" + std::to_string(lineno));
    }
    if (key == "czd_overlap_ceiling") {
      if (!(in >> tol.czd_overlap_ceiling)) {
        throw std::invalid_argument("tolerances: bad integer at line " +
                                    std::to_string(lineno));
      }
      continue;
    }
    const auto it = doubles.find(key);
    if (it == doubles.end()) {
      throw std::invalid_argument("tolerances: unknown key '" + key + "'");
    }
    if (!(in >> *it->second)) {
      throw std::invalid_argument("tolerances: bad value for '" + key + "'");
    }
  }
  return tol;
}

}  // namespace mfcz
