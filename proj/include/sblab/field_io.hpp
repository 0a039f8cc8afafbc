#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "sblab/field.hpp"

namespace sblab {

// Snapshot format shared by all modules:
//   GRID L=<float> N=<int> COMPONENTS=<1|3>
// followed by one line per node in x-fastest order, one component per column.

void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const VectorField& v);
void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField& v);

using AnyField = std::variant<ScalarField, VectorField>;
AnyField read_field(std::istream& is);
AnyField read_field(const std::string& path);

/// Full-precision scientific formatting used for every numeric output.
std::string format_full(double x);

}  // namespace sblab
