#pragma once

#include <cstddef>
#include <vector>

#include "tnc/models.hpp"

namespace tnc {

// Poisson(mu): lambda(n) = n/mu, h(x) = sup_{1<=n<=N} P{Erlang(n,mu) < [n/mu - x]^+}.
// The bound covers gaps of at most N packets.
TrafficModel poisson_iat_sac(double mu, std::size_t horizon, double grid_step);

// Poisson(mu) against a constant-rate virtual server: lambda(n) = hbar*n, h = M/D/1 wait tail.
TrafficModel md1_vwd_sac(double mu, double hbar);

// gSBB with upper rate rho: lambda(n) = n/rho, h(y) = f(rho*y).
TrafficModel gsbb_vwd_sac(double rho, const BoundingFunction& f);

// Superposition of independent Poisson flows, bypassing the transformation pipeline:
// lambda(n) = ts*n with the M/D/1 tail at the total rate.
TrafficModel superposed_poisson_vwd(const std::vector<double>& mus, double ts);

TrafficModel vwd_to_iat(const TrafficModel& m);

// ([lambda(n) - eta*n]^+ made monotone from below, eta_inflate(h, eta)).
TrafficModel iat_to_vwd(const TrafficModel& m, double eta, const Grid& grid);

// lambda(n) = inf{t : alpha(t) >= n}, h(y) = f(z^{-1}(y)) with
// z(x) = sup_k lambda(k) - lambda(k - x) (lambda extended linearly between integers).
TrafficModel vbc_to_vwd(const TrafficModel& m, const Grid& grid);

// alpha(t) = sup{k : lambda(k) <= t} (staircase), f(x) = h(g(floor(x) - 1)) for x >= 1 where
// g(m) = inf_{i>=1} lambda(i+m) - lambda(i); f = 1 below one packet.
TrafficModel vwd_to_vbc(const TrafficModel& m);

// Aggregate of VWD flows via the space domain: sum of staircases, min-plus product of the f_i,
// then back to VWD on the grid.
TrafficModel superpose(const std::vector<TrafficModel>& models, const Grid& grid);

}  // namespace tnc
