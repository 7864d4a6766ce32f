#pragma once

#include <cstdint>
#include <random>

namespace elm {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream_id). Results never depend on which
// thread consumes which stream.
Rng make_stream(std::uint64_t seed, std::uint64_t stream_id);

}  // namespace elm
