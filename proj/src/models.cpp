#include "tnc/models.hpp"

#include <stdexcept>

namespace tnc {

std::string to_string(TrafficKind k) {
  switch (k) {
    case TrafficKind::IAT: return "IAT";
    case TrafficKind::VWD: return "VWD";
    case TrafficKind::VBC: return "VBC";
  }
  return "?";
}

std::string to_string(ServiceKind k) {
  switch (k) {
    case ServiceKind::ID: return "ID";
    case ServiceKind::ETA: return "ETA";
    case ServiceKind::STRICT: return "STRICT";
  }
  return "?";
}

TrafficModel TrafficModel::iat(IndexCurve lambda, BoundingFunction h) {
  return TrafficModel{TrafficKind::IAT, std::move(lambda), std::move(h)};
}

TrafficModel TrafficModel::vwd(IndexCurve lambda, BoundingFunction h) {
  return TrafficModel{TrafficKind::VWD, std::move(lambda), std::move(h)};
}

TrafficModel TrafficModel::vbc(TimeCurve alpha, BoundingFunction f) {
  return TrafficModel{TrafficKind::VBC, std::move(alpha), std::move(f)};
}

const IndexCurve& TrafficModel::lambda() const {
  if (kind == TrafficKind::VBC) throw std::invalid_argument("traffic model: VBC model has no index curve");
  return std::get<IndexCurve>(curve);
}

const TimeCurve& TrafficModel::alpha() const {
  if (kind != TrafficKind::VBC) throw std::invalid_argument("traffic model: only VBC models have a time curve");
  return std::get<TimeCurve>(curve);
}

ServiceModel ServiceModel::id(IndexCurve gamma, BoundingFunction j) {
  return ServiceModel{ServiceKind::ID, std::move(gamma), std::move(j), 0.0};
}

ServiceModel ServiceModel::eta_ssc(IndexCurve gamma, BoundingFunction j, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta service curve: eta must be positive");
  return ServiceModel{ServiceKind::ETA, std::move(gamma), std::move(j), eta};
}

ServiceModel ServiceModel::strict(IndexCurve gamma, BoundingFunction j) {
  return ServiceModel{ServiceKind::STRICT, std::move(gamma), std::move(j), 0.0};
}

}  // namespace tnc
