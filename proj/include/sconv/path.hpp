#pragma once

#include "sconv/model.hpp"
#include "sconv/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sconv {

/// One realized trajectory X_1(omega), ..., X_N(omega) together with the
/// realized limit X(omega).
struct PathSample {
    std::string model_id;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::int64_t horizon = 0;
    std::vector<double> values;  // values[n-1] = X_n
    double limit = 0.0;
    std::optional<double> omega;  // explicit-space paths only

    double at(std::int64_t n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

/// Pure function of (model, horizon, rng seed, rng stream): draws start at
/// the beginning of the stream whatever its position. Prefixes agree:
/// sample_path(m, N) restricted to 1..M equals sample_path(m, M).
PathSample sample_path(const SequenceModel& model, std::int64_t horizon, const RngStream& rng);

/// Path from a fixed omega (explicit-space examples 1 to 3 only).
PathSample explicit_path(const ExampleSpec& spec, std::int64_t horizon, double omega);

}  // namespace sconv
