#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace edgeworth {

/// Number of draws generated from one stream. Fixed so that chunk boundaries,
/// and hence the output, do not depend on the thread count.
inline constexpr std::size_t kStreamChunkSize = 8192;

/// Engine for stream `stream_id` of a seeded family. Distinct ids give
/// statistically independent engines; the same (seed, id) always yields the
/// same sequence.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Calls body(chunk_index, begin, end) for every chunk of [0, total), spread
/// over `threads` workers. Chunks are disjoint, so body may write to its own
/// slice of a shared output without synchronisation.
void for_each_chunk(std::size_t total, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace edgeworth
