#pragma once

#include <cstdint>

#include "tnc/models.hpp"

namespace tnc {

// P{S > dbar*(n+1) + x} for S the sum of n+1 iid geometric(1-pe) slot counts, dbar = 1/(1-pe).
double negbin_tail(double pe, std::int64_t n, double x);

// Slotted link with independent packet errors: gamma(n) = (dbar + eta)*n*slot and
// j_eta(x) = [(1/eta) * int_x^inf j]_1 plus a Chernoff term for windows beyond the
// exactly summed range. Bound argument in seconds.
ServiceModel wireless_link_ssc(double pe, double eta, double slot, const Grid& grid);

// Same link as a strict curve: gamma(n) = (dbar + eta)*n*slot,
// j(x) = sup_k P{S_k - (dbar + eta)*k > x}.
ServiceModel wireless_link_strict(double pe, double eta, double slot, const Grid& grid);

// Constant service time per packet; exact strict curve with a step bound.
ServiceModel deterministic_server(double service_time);

ServiceModel eta_to_id(const ServiceModel& m);
ServiceModel id_to_eta(const ServiceModel& m, double eta, const Grid& grid);
ServiceModel strict_convert(const ServiceModel& m, ServiceKind target, double eta, const Grid& grid);

}  // namespace tnc
