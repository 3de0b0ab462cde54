#pragma once

#include "lmmsel/model.hpp"

#include <string>
#include <vector>

namespace lmmsel::cli {

/// Shortest decimal text is not used on purpose: every value is written with
/// 17 significant digits so files round-trip bit-exactly.
std::string fmt(double v);

/// Comment lines start with '#'. The first data line is the header
/// `group,y,<covariate names...>`; groups are integer labels.
void write_dataset_csv(const std::string& path, const LmmDataset& data,
                       const std::vector<std::string>& comments);

/// Errors name the file and the 1-based line number.
LmmDataset read_dataset_csv(const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace lmmsel::cli
