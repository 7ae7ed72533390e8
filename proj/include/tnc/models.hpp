#pragma once

#include <string>
#include <variant>

#include "tnc/bounding.hpp"
#include "tnc/curve.hpp"

namespace tnc {

enum class TrafficKind { IAT, VWD, VBC };
enum class ServiceKind { ID, ETA, STRICT };

std::string to_string(TrafficKind k);
std::string to_string(ServiceKind k);

// Arrival model: IAT/VWD pair an index curve lambda(n) with h; VBC pairs a packet-count
// curve alpha(t) with f (argument in packets).
struct TrafficModel {
  TrafficKind kind;
  std::variant<IndexCurve, TimeCurve> curve;
  BoundingFunction bound;

  static TrafficModel iat(IndexCurve lambda, BoundingFunction h);
  static TrafficModel vwd(IndexCurve lambda, BoundingFunction h);
  static TrafficModel vbc(TimeCurve alpha, BoundingFunction f);

  const IndexCurve& lambda() const;
  const TimeCurve& alpha() const;
};

struct ServiceModel {
  ServiceKind kind;
  IndexCurve gamma;
  BoundingFunction bound;
  double eta = 0.0;

  static ServiceModel id(IndexCurve gamma, BoundingFunction j);
  static ServiceModel eta_ssc(IndexCurve gamma, BoundingFunction j, double eta);
  static ServiceModel strict(IndexCurve gamma, BoundingFunction j);
};

}  // namespace tnc
