// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace divgp {

namespace detail {
    inline void check_pair(std::span<double const> predicted, std::span<double const> target, char const* who)
    {
        if (predicted.size() != target.size()) {
            throw std::invalid_argument(std::string(who) + ": length mismatch");
        }
        if (target.size() < 2) {
            throw std::invalid_argument(std::string(who) + ": at least two values required");
        }
    }

    inline auto constant_or_nonfinite(std::span<double const> x) -> bool
    {
        if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
            return true;
        }
        auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        return *lo == *hi;
    }
} // namespace detail

inline auto mean(std::span<double const> x) -> double
{
    if (x.empty()) {
        throw std::invalid_argument("mean: empty input");
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Population variance.
inline auto variance(std::span<double const> x) -> double
{
    auto const m = mean(x);
    double ss = 0.0;
    for (auto v : x) {
        ss += (v - m) * (v - m);
    }
    return ss / static_cast<double>(x.size());
}

// Squared Pearson correlation. Degenerate predictions (non-finite values or
// zero variance) score 0.
inline auto r_squared(std::span<double const> predicted, std::span<double const> target) -> double
{
    detail::check_pair(predicted, target, "r_squared");
    if (detail::constant_or_nonfinite(predicted)) {
        return 0.0;
    }
    auto const n = static_cast<double>(target.size());
    auto const mp = std::accumulate(predicted.begin(), predicted.end(), 0.0) / n;
    auto const mt = std::accumulate(target.begin(), target.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        auto const dp = predicted[i] - mp;
        auto const dt = target[i] - mt;
        sxy += dp * dt;
        sxx += dp * dp;
        syy += dt * dt;
    }
    if (!(sxx > 0.0) || !(syy > 0.0) || !std::isfinite(sxx)) {
        return 0.0;
    }
    auto const r2 = (sxy * sxy) / (sxx * syy);
    return std::isfinite(r2) ? std::clamp(r2, 0.0, 1.0) : 0.0;
}

// Mean squared error divided by the population variance of the target.
// Non-finite predictions yield +infinity.
inline auto nmse(std::span<double const> predicted, std::span<double const> target) -> double
{
    detail::check_pair(predicted, target, "nmse");
    auto const var = variance(target);
    if (!(var > 0.0)) {
        throw std::invalid_argument("nmse: target has zero variance");
    }
    double se = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (!std::isfinite(predicted[i])) {
            return std::numeric_limits<double>::infinity();
        }
        auto const e = predicted[i] - target[i];
        se += e * e;
    }
    auto const value = se / static_cast<double>(target.size()) / var;
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
}

struct LinearScaling {
    double intercept { 0.0 };
    double slope { 1.0 };

    [[nodiscard]] auto apply(std::span<double const> x) const -> std::vector<double>
    {
        std::vector<double> out(x.size());
        std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return intercept + slope * v; });
        return out;
    }
};

// Least-squares fit of target ~ intercept + slope * predicted. Degenerate
// inputs (constant or non-finite predictions) fall back to the target mean.
inline auto fit_linear_scaling(std::span<double const> predicted, std::span<double const> target) -> LinearScaling
{
    detail::check_pair(predicted, target, "fit_linear_scaling");
    auto const mt = mean(target);
    if (detail::constant_or_nonfinite(predicted)) {
        return { mt, 0.0 };
    }
    auto const mp = mean(predicted);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        sxy += (predicted[i] - mp) * (target[i] - mt);
        sxx += (predicted[i] - mp) * (predicted[i] - mp);
    }
    if (!(sxx > 0.0) || !std::isfinite(sxx) || !std::isfinite(sxy)) {
        return { mt, 0.0 };
    }
    auto const slope = sxy / sxx;
    return { mt - slope * mp, slope };
}

// Linear-interpolation quantile (the usual "type 7" definition), q in [0, 1].
inline auto quantile(std::vector<double> values, double q) -> double
{
    if (values.empty()) {
        throw std::invalid_argument("quantile: empty input");
    }
    std::sort(values.begin(), values.end());
    auto const h = q * static_cast<double>(values.size() - 1);
    auto const lo = static_cast<std::size_t>(std::floor(h));
    auto const hi = std::min(lo + 1, values.size() - 1);
    auto const frac = h - static_cast<double>(lo);
    if (frac == 0.0 || values[lo] == values[hi]) {
        return values[lo];
    }
    return values[lo] + frac * (values[hi] - values[lo]);
}

inline auto median(std::vector<double> values) -> double
{
    return quantile(std::move(values), 0.5);
}

inline auto interquartile_range(std::vector<double> const& values) -> double
{
    return quantile(values, 0.75) - quantile(values, 0.25);
}

} // namespace divgp
