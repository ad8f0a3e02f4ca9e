#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace aps {

/// SplitMix64 finalizer; used to fan a single user seed out to subtasks.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for subtask `index` of a run seeded with `seed`. Independent of the
/// order in which subtasks are scheduled.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// FNV-1a hash, for deriving per-document seeds from ids.
std::uint64_t hash_string(std::string_view s) noexcept;

/// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
/// Written out here so shuffles are identical across standard libraries.
std::uint64_t bounded_rand(std::mt19937_64& gen, std::uint64_t bound);

/// In-place Fisher-Yates shuffle.
void shuffle(std::span<double> values, std::mt19937_64& gen);

}  // namespace aps
