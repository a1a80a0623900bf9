#pragma once

#include <string>

#include "osrec/types.hpp"

namespace osrec {

// Reads a dataset from a CSV file with header
//   object_id,class_id,stiffness,viscosity,restitution,friction
// Class ids from the file are remapped to dense 1..G ids in first-appearance
// order. Every malformed row is rejected with its line number.
Dataset load_csv(const std::string& path);

// Inverse of load_csv: writes the dense class ids, so load(save(d)) == d.
void save_csv(const Dataset& dataset, const std::string& path);

}  // namespace osrec
