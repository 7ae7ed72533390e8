#pragma once

#include <cstddef>
#include <cstdint>

#include "tnc/bounding.hpp"
#include "tnc/curve.hpp"

namespace tnc {

// (f (max,+) g)(n) = sup_{0<=m<=n} f(m) + g(n-m)
IndexCurve max_plus_conv(const IndexCurve& f, const IndexCurve& g);

// (f deconv g)(n) = inf_{m>=0} f(n+m) - g(m), clipped at 0. The search covers
// m <= max(m_max, horizons), which is exhaustive when f.tail_rate >= g.tail_rate.
// Throws std::domain_error when f.tail_rate < g.tail_rate.
IndexCurve max_plus_deconv(const IndexCurve& f, const IndexCurve& g, std::size_t m_max);

// sup_{0<=m<=n} a(m) + gamma(n-m+1): the guaranteed departure clock.
IndexCurve arrival_service_conv(const IndexCurve& a, const IndexCurve& gamma);

// Tandem composition of two departure-clock curves:
// G(0) = 0, G(p) = sup_{1<=q<=p} g1(q) + g2(p+1-q).
// Associative and commutative; d2 <= a (x) G whenever d1 <= a (x) g1 and d2 <= d1 (x) g2.
IndexCurve service_conv(const IndexCurve& g1, const IndexCurve& g2);

// sup_{k>=0} f(k+t) - g(k), searched over k <= max(k_max, horizons).
// Throws std::domain_error when f.tail_rate > g.tail_rate (divergent).
double min_plus_deconv_at(const IndexCurve& f, const IndexCurve& g, std::int64_t t, std::size_t k_max);

// H(lambda, gamma + x) = sup_{m>=0} inf{k >= 0 : gamma(m) + x <= lambda(m+k)}.
// Throws std::domain_error when it diverges.
std::int64_t horizontal_distance(const IndexCurve& lambda, const IndexCurve& gamma, double x);

// gamma.tail_rate - lambda.tail_rate; stable when <= 0.
double stability_margin(const IndexCurve& lambda, const IndexCurve& gamma);

// [inf_{0<=y<=x} h1(y) + h2(x-y)]_1 on the grid.
BoundingFunction min_plus_conv(const BoundingFunction& h1, const BoundingFunction& h2, const Grid& grid);

// 1 - (J * H)(x) with J = 1 - [j]_1, H = 1 - [h]_1 and * the Stieltjes convolution on the grid.
BoundingFunction independent_combine(const BoundingFunction& j, const BoundingFunction& h, const Grid& grid);

// [h(x) + (1/eta) * int_x^inf h]_1. Throws std::domain_error for FBar input.
BoundingFunction eta_inflate(const BoundingFunction& h, double eta, const Grid& grid);

}  // namespace tnc
