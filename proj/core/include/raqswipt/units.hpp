#pragma once

#include <cmath>

#include "raqswipt/errors.hpp"

// All dB <-> linear conversions in the project go through these helpers.
namespace raq {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double value) {
  if (!(value > 0.0)) throw DomainError("linear_to_db: value must be positive");
  return 10.0 * std::log10(value);
}

inline double dbm_to_watt(double dbm) { return db_to_linear(dbm) * 1e-3; }

inline double watt_to_dbm(double watt) { return linear_to_db(watt * 1e3); }

}  // namespace raq
