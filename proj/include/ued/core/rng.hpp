#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>

namespace ued {

using Rng = std::mt19937_64;

// Independent stream for (seed, tag...). Streams with different tags do not
// share state, so roles can be re-ordered or skipped without perturbing others.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {});

double uniform01(Rng& rng);
// Inclusive on both ends.
int uniform_int(Rng& rng, int lo, int hi);
double standard_normal(Rng& rng);
bool bernoulli(Rng& rng, double p);
// Draws an index from unnormalised non-negative weights.
std::size_t sample_index(Rng& rng, std::span<const double> weights);

std::string rng_state(const Rng& rng);
Rng rng_from_state(const std::string& state);

}  // namespace ued
