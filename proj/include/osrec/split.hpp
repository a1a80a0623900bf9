#pragma once

#include <cstdint>

#include "osrec/types.hpp"

namespace osrec {

// Open-set protocol split. round(known_fraction * G) classes become known;
// within each known class floor(train_fraction * count) rows go to training
// and the rest join the test stream together with every novel-class row.
// The stream order is a pure function of the seed.
SplitResult split_open_set(const Dataset& dataset, double known_fraction,
                           double train_fraction, std::uint64_t seed);

}  // namespace osrec
