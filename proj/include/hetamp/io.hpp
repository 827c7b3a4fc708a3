#pragma once

#include <map>
#include <string>
#include <vector>

#include "hetamp/density.hpp"
#include "hetamp/heterodyne.hpp"

namespace hetamp {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Writes via a temp file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

/// CSV with optional `# key=value` metadata lines, then a `u,p` header.
std::string density_to_csv(const OutcomeDensity& d,
                           const std::map<std::string, std::string>& metadata = {});

/// CSV with `re,im` header.
std::string sample_to_csv(const ComplexOutcomeSample& s);

/// Multi-column CSV: first column name/values plus one column per series.
std::string columns_to_csv(const std::vector<std::string>& names,
                           const std::vector<Eigen::VectorXd>& columns,
                           const std::map<std::string, std::string>& metadata = {});

} // namespace hetamp
